"""Model generation: forward propagation, unfounded-set falsification, DFS.

Propagation keeps four counters per ground rule (body literals not yet true,
body literals already false, head literals not false, head literals true)
and re-examines a rule whenever one of them changes.  Undo walks the trail
backwards and reverts the counters, so backtracking is cheap.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .grounder import GroundProgram

UNDEF, TRUE, FALSE = 0, 1, -1


@dataclass
class GeneratorStats:
    choices: int = 0
    backtracks: int = 0
    conflicts: int = 0
    candidates: int = 0
    unfounded_calls: int = 0
    pruned: int = 0


@dataclass
class GeneratorConfig:
    # contrapositive inference from rules whose heads are all false
    backward: bool = True
    # a true atom with a single rule left that can support it forces that
    # rule's body true and its other head literals false
    support: bool = True
    # also falsify unfounded atoms of components with head cycles, using the
    # (weaker, but sound everywhere) shrinking fixpoint
    unfounded_nonhcf: bool = False


class PartialInterpretation:
    """Three-valued assignment over literal ids with a trail."""

    def __init__(self, n: int):
        self.value = [UNDEF] * n
        self.trail: list = []
        self.marks: list = []  # trail positions where decision levels start
        self.conflict = False

    def is_true(self, i) -> bool:
        return self.value[i] == TRUE

    def is_false(self, i) -> bool:
        return self.value[i] == FALSE

    def is_undefined(self, i) -> bool:
        return self.value[i] == UNDEF

    def true_set(self) -> frozenset:
        return frozenset(i for i, v in enumerate(self.value) if v == TRUE)

    def false_set(self) -> frozenset:
        return frozenset(i for i, v in enumerate(self.value) if v == FALSE)

    @property
    def level(self) -> int:
        return len(self.marks)

    def copy(self) -> "PartialInterpretation":
        c = PartialInterpretation(len(self.value))
        c.value = list(self.value)
        c.trail = list(self.trail)
        c.marks = list(self.marks)
        c.conflict = self.conflict
        return c


class ModelGenerator:
    def __init__(self, g: GroundProgram, config: GeneratorConfig | None = None,
                 rank: Optional[list] = None):
        self.g = g
        self.config = config or GeneratorConfig()
        self.stats = GeneratorStats()
        n = len(g.index)
        self.n = n
        comp = g.index.complement_id
        self.comp = [comp(i) for i in range(n)]
        rules = g.rules
        self.head = [r.head for r in rules]
        self.pos = [r.pos for r in rules]
        self.neg = [r.neg for r in rules]
        self.head_occ = [[] for _ in range(n)]
        self.pos_occ = [[] for _ in range(n)]
        self.neg_occ = [[] for _ in range(n)]
        for ri, r in enumerate(rules):
            for l in r.head:
                self.head_occ[l].append(ri)
            for l in r.pos:
                self.pos_occ[l].append(ri)
            for l in r.neg:
                self.neg_occ[l].append(ri)

        # weak constraints for branch-and-bound
        self.wcs = g.weak_constraints
        self.levels = sorted({w.level for w in self.wcs}, reverse=True)
        lvl_pos = {l: i for i, l in enumerate(self.levels)}
        self.wc_level = [lvl_pos[w.level] for w in self.wcs]
        self.wc_pos_occ = [[] for _ in range(n)]
        self.wc_neg_occ = [[] for _ in range(n)]
        for wi, w in enumerate(self.wcs):
            for l in w.pos:
                self.wc_pos_occ[l].append(wi)
            for l in w.neg:
                self.wc_neg_occ[l].append(wi)
        # incumbent cost vector (highest level first) and pruning mode
        self.bound: Optional[list] = None
        self.bound_strict = True  # prune cost >= bound; False prunes cost > bound

        self.relevant = sorted(g.literal_ids() | {self.comp[i] for i in g.literal_ids()})
        self.heads = g.head_ids()
        self.certain = g.certain

        gc = g.components()
        self.hcf_atoms = set()
        self.nonhcf_atoms = set()
        for ci, members in enumerate(gc.members):
            target = self.hcf_atoms if gc.hcf[ci] else self.nonhcf_atoms
            target.update(l for l in members if l in self.heads and l not in g.certain)
        self.gc = gc

        if rank is None:
            occ = [len(self.head_occ[i]) + len(self.pos_occ[i]) + len(self.neg_occ[i])
                   for i in range(n)]
            rank = sorted(self.relevant, key=lambda i: (-occ[i], i))
        self.rank = rank
        self._reset()

    # -- state ---------------------------------------------------------------

    def _reset(self):
        self.I = PartialInterpretation(self.n)
        m = len(self.head)
        self.undef_body = [len(self.pos[r]) + len(self.neg[r]) for r in range(m)]
        self.false_body = [0] * m
        self.head_nf = [len(self.head[r]) for r in range(m)]
        self.head_true = [0] * m
        self.wc_undef = [len(w.pos) + len(w.neg) for w in self.wcs]
        self.wc_false = [0] * len(self.wcs)
        self.cost = [0] * len(self.levels)
        for wi in range(len(self.wcs)):
            if self.wc_undef[wi] == 0:
                self.cost[self.wc_level[wi]] += self.wcs[wi].weight
        self.queue: list = []
        self.aqueue: list = []
        self.conflict = False

    def _assign(self, l: int, v: int) -> bool:
        val = self.I.value
        cur = val[l]
        if cur == v:
            return True
        if cur != UNDEF:
            self.conflict = True
            return False
        val[l] = v
        self.I.trail.append(l)
        q = self.queue
        aq = self.aqueue
        if v == TRUE:
            aq.append(l)
            for r in self.pos_occ[l]:
                self.undef_body[r] -= 1
                q.append(r)
            for r in self.neg_occ[l]:
                self.false_body[r] += 1
                aq.extend(self.head[r])
            for r in self.head_occ[l]:
                self.head_true[r] += 1
                aq.extend(self.head[r])
            for w in self.wc_pos_occ[l]:
                self._wc_dec(w)
            for w in self.wc_neg_occ[l]:
                self._wc_false(w, 1)
            c = self.comp[l]
            if val[c] == TRUE:
                self.conflict = True
                return False
            if val[c] == UNDEF:
                return self._assign(c, FALSE)
        else:
            for r in self.pos_occ[l]:
                self.false_body[r] += 1
                aq.extend(self.head[r])
            for r in self.neg_occ[l]:
                self.undef_body[r] -= 1
                q.append(r)
            for r in self.head_occ[l]:
                self.head_nf[r] -= 1
                q.append(r)
            for w in self.wc_pos_occ[l]:
                self._wc_false(w, 1)
            for w in self.wc_neg_occ[l]:
                self._wc_dec(w)
        return True

    def _wc_dec(self, w):
        self.wc_undef[w] -= 1
        if self.wc_undef[w] == 0 and self.wc_false[w] == 0:
            self.cost[self.wc_level[w]] += self.wcs[w].weight

    def _wc_inc(self, w):
        if self.wc_undef[w] == 0 and self.wc_false[w] == 0:
            self.cost[self.wc_level[w]] -= self.wcs[w].weight
        self.wc_undef[w] += 1

    def _wc_false(self, w, d):
        was = self.wc_undef[w] == 0 and self.wc_false[w] == 0
        self.wc_false[w] += d
        now = self.wc_undef[w] == 0 and self.wc_false[w] == 0
        if was and not now:
            self.cost[self.wc_level[w]] -= self.wcs[w].weight
        elif now and not was:
            self.cost[self.wc_level[w]] += self.wcs[w].weight

    def _undo_to(self, mark: int):
        val = self.I.value
        trail = self.I.trail
        while len(trail) > mark:
            l = trail.pop()
            v = val[l]
            val[l] = UNDEF
            if v == TRUE:
                for r in self.pos_occ[l]:
                    self.undef_body[r] += 1
                for r in self.neg_occ[l]:
                    self.false_body[r] -= 1
                for r in self.head_occ[l]:
                    self.head_true[r] -= 1
                for w in self.wc_pos_occ[l]:
                    self._wc_inc(w)
                for w in self.wc_neg_occ[l]:
                    self._wc_false(w, -1)
            else:
                for r in self.pos_occ[l]:
                    self.false_body[r] -= 1
                for r in self.neg_occ[l]:
                    self.undef_body[r] += 1
                for r in self.head_occ[l]:
                    self.head_nf[r] += 1
                for w in self.wc_pos_occ[l]:
                    self._wc_false(w, -1)
                for w in self.wc_neg_occ[l]:
                    self._wc_inc(w)
        self.queue.clear()
        self.aqueue.clear()
        self.conflict = False

    # -- propagation ----------------------------------------------------------

    def _check_rule(self, r) -> bool:
        if self.false_body[r] > 0 or self.head_true[r] > 0:
            return True
        val = self.I.value
        if self.undef_body[r] == 0:
            nf = self.head_nf[r]
            if nf == 0:
                self.conflict = True
                return False
            if nf == 1:
                for h in self.head[r]:
                    if val[h] == UNDEF:
                        return self._assign(h, TRUE)
            return True
        if self.config.backward and self.undef_body[r] == 1 and self.head_nf[r] == 0:
            for b in self.pos[r]:
                if val[b] == UNDEF:
                    return self._assign(b, FALSE)
            for b in self.neg[r]:
                if val[b] == UNDEF:
                    return self._assign(b, TRUE)
        return True

    def _check_support(self, a) -> bool:
        val = self.I.value
        if val[a] != TRUE or a in self.certain:
            return True
        only = None
        for r in self.head_occ[a]:
            if self.false_body[r] == 0 and self.head_true[r] == 1:
                if only is not None:
                    return True
                only = r
        if only is None:
            self.conflict = True
            return False
        for b in self.pos[only]:
            if val[b] != TRUE and not self._assign(b, TRUE):
                return False
        for b in self.neg[only]:
            if val[b] != FALSE and not self._assign(b, FALSE):
                return False
        for h in self.head[only]:
            if h != a and val[h] != FALSE and not self._assign(h, FALSE):
                return False
        return True

    def _unit(self) -> bool:
        q, aq = self.queue, self.aqueue
        support = self.config.support
        while q or aq:
            if q:
                if not self._check_rule(q.pop()):
                    q.clear()
                    aq.clear()
                    return False
            elif support:
                if not self._check_support(aq.pop()):
                    q.clear()
                    aq.clear()
                    return False
            else:
                aq.clear()
        return not self.conflict

    def _over_bound(self) -> bool:
        if self.bound is None or not self.levels:
            return False
        if self.bound_strict:
            return self.cost >= self.bound
        return self.cost > self.bound

    def propagate(self) -> bool:
        """Run to fixpoint; False on conflict (or cost bound exceeded)."""
        while True:
            if not self._unit():
                self.stats.conflicts += 1
                return False
            if self._over_bound():
                self.stats.pruned += 1
                return False
            changed = False
            for l in self.unfounded():
                if self.I.value[l] == TRUE:
                    self.conflict = True
                    self.stats.conflicts += 1
                    return False
                if self.I.value[l] == UNDEF:
                    self._assign(l, FALSE)
                    changed = True
            if not changed:
                return True

    def unfounded(self) -> set:
        self.stats.unfounded_calls += 1
        out = self._founded_complement(self.hcf_atoms)
        if self.config.unfounded_nonhcf and self.nonhcf_atoms:
            out |= self._shrinking_unfounded(self.nonhcf_atoms)
        return out

    def _founded_complement(self, atoms) -> set:
        """Atoms of ``atoms`` without a well-founded derivation under I.

        Only valid for head-cycle-free components: a supporting rule must
        have its body not false, no other true head literal and all its
        positive body atoms already founded.
        """
        if not atoms:
            return set()
        val = self.I.value
        cand = {a for a in atoms if val[a] != FALSE}
        if not cand:
            return set()
        missing = {}
        work = []
        rules = set()
        for a in cand:
            rules.update(self.head_occ[a])
        for r in rules:
            if self.false_body[r] > 0:
                continue
            k = sum(1 for b in self.pos[r] if b in cand)
            missing[r] = k
            if k == 0:
                work.append(r)
        founded = set()
        while work:
            r = work.pop()
            ht = self.head_true[r]
            for h in self.head[r]:
                if h in cand and h not in founded:
                    if ht == 0 or (ht == 1 and val[h] == TRUE):
                        founded.add(h)
                        for r2 in self.pos_occ[h]:
                            k = missing.get(r2)
                            if k is not None:
                                missing[r2] = k - 1
                                if k == 1:
                                    work.append(r2)
        return cand - founded

    def _shrinking_unfounded(self, atoms) -> set:
        """An unfounded set, built by discarding externally supported atoms."""
        val = self.I.value
        X = {a for a in atoms if val[a] != FALSE}
        inx = {}
        work = []
        rules = set()
        for a in X:
            rules.update(self.head_occ[a])
        for r in rules:
            if self.false_body[r] > 0:
                continue
            k = sum(1 for b in self.pos[r] if b in X)
            inx[r] = k
            if k == 0:
                work.append(r)
        while work:
            r = work.pop()
            # blocked if a true head literal already left X
            if any(val[h] == TRUE and h not in X for h in self.head[r]):
                continue
            for h in self.head[r]:
                if h in X:
                    X.discard(h)
                    for r2 in self.pos_occ[h]:
                        k = inx.get(r2)
                        if k is not None:
                            inx[r2] = k - 1
                            if k == 1:
                                work.append(r2)
                    break
            else:
                continue
            if any(h in X for h in self.head[r]):
                work.append(r)
        return X

    # -- branching --------------------------------------------------------------

    def choose(self) -> Optional[int]:
        val = self.I.value
        fb, ht = self.false_body, self.head_true
        fallback = None
        for l in self.rank:
            if val[l] != UNDEF:
                continue
            if fallback is None:
                fallback = l
            for r in self.head_occ[l]:
                if fb[r] == 0 and ht[r] == 0:
                    return l
            for r in self.neg_occ[l]:
                if fb[r] == 0:
                    return l
        if fallback is None:
            return None
        return min(l for l in self.relevant if val[l] == UNDEF)

    def _init(self) -> bool:
        self._reset()
        if self.g.inconsistent:
            return False
        for l in sorted(self.g.certain):
            if not self._assign(l, TRUE):
                return False
        for l in self.relevant:
            if l not in self.heads and self.I.value[l] == UNDEF:
                if not self._assign(l, FALSE):
                    return False
        # rules whose bodies are empty need a first look
        self.queue.extend(range(len(self.head)))
        return self.propagate()

    def _total_ok(self) -> bool:
        val = self.I.value
        for ri in range(len(self.head)):
            if self.false_body[ri] == 0 and self.undef_body[ri] == 0 and self.head_true[ri] == 0:
                return False
        return all(val[l] != UNDEF for l in self.relevant)

    def models(self, limit: Optional[int] = None) -> Iterator[frozenset]:
        """Total, consistent models closed under the program, depth first."""
        emitted = 0
        if not self._init():
            return
        decisions: list = []
        ok = True
        while True:
            if ok:
                l = self.choose()
                if l is None:
                    if self._total_ok():
                        self.stats.candidates += 1
                        emitted += 1
                        yield frozenset(i for i in self.relevant if self.I.value[i] == TRUE)
                        if limit is not None and emitted >= limit:
                            return
                    ok = False
                else:
                    self.stats.choices += 1
                    decisions.append((l, len(self.I.trail), False))
                    self.I.marks.append(len(self.I.trail))
                    ok = self._assign(l, TRUE) and self.propagate()
                    continue
            # chronological backtracking
            while decisions:
                l, mark, flipped = decisions.pop()
                self.I.marks.pop()
                self._undo_to(mark)
                if not flipped:
                    self.stats.backtracks += 1
                    decisions.append((l, mark, True))
                    self.I.marks.append(mark)
                    # re-check the bound with the possibly improved incumbent
                    ok = self._assign(l, FALSE) and self.propagate()
                    break
            else:
                return


# -- functional interface -------------------------------------------------------

def _loaded(g: GroundProgram, I: Optional[PartialInterpretation], config=None):
    mg = ModelGenerator(g, config)
    if not mg._init():
        return mg, False
    if I is not None:
        for l, v in enumerate(I.value):
            if v != UNDEF and not mg._assign(l, v):
                return mg, False
    return mg, True


def propagate(g: GroundProgram, I: Optional[PartialInterpretation] = None,
              config: GeneratorConfig | None = None) -> Optional[PartialInterpretation]:
    """Deterministic consequences of ``I``; ``None`` signals a conflict."""
    mg, ok = _loaded(g, I, config)
    if not ok or not mg.propagate():
        return None
    return mg.I.copy()


def greatest_unfounded_set(g: GroundProgram, I: PartialInterpretation,
                           component: Optional[int] = None) -> set:
    """Atoms unfounded w.r.t. ``I`` within a head-cycle-free component
    (or all such components when ``component`` is None)."""
    gc = g.components()
    mentioned = g.literal_ids()
    if component is not None:
        if not gc.hcf[component]:
            raise ValueError(f"component {component} is not head-cycle free")
        atoms = set(gc.members[component])
    else:
        atoms = {l for ci, ms in enumerate(gc.members) if gc.hcf[ci] for l in ms}
    mg = ModelGenerator(g)
    mg._reset()
    for l in sorted(g.certain):
        mg._assign(l, TRUE)
    for l, v in enumerate(I.value):
        if v != UNDEF and mg.I.value[l] == UNDEF:
            mg._assign(l, v)
    atoms = {a for a in atoms if a not in g.certain and a in mentioned}
    # atoms without rules are never founded, and they block the rules using them
    return mg._founded_complement(atoms)


def choose_literal(g: GroundProgram, I: PartialInterpretation) -> Optional[int]:
    mg, _ = _loaded(g, I)
    return mg.choose()


def enumerate_candidates(g: GroundProgram, limit: Optional[int] = None,
                         config: GeneratorConfig | None = None) -> Iterator[frozenset]:
    return ModelGenerator(g, config).models(limit)
