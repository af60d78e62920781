"""A hand-made Sokoban board, its fact encoding, a BFS push-count oracle
and a plan replayer.  A push moves one box any number of free cells in a
straight line; the keeper walks freely between pushes."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

DIRS = {"right": (0, 1), "left": (0, -1), "up": (-1, 0), "down": (1, 0)}

# '#' wall, ' ' floor, '.' storage, '$' box, '*' box on storage, '@' keeper
BOARD = [
    "#######",
    "#.   .#",
    "#  $  #",
    "# $@  #",
    "#     #",
    "#######",
]


@dataclass(frozen=True)
class Board:
    floor: frozenset  # (row, col)
    storage: frozenset
    boxes: frozenset
    keeper: tuple

    @classmethod
    def parse(cls, rows=BOARD) -> "Board":
        floor, storage, boxes, keeper = set(), set(), set(), None
        for r, line in enumerate(rows):
            for c, ch in enumerate(line):
                if ch == "#":
                    continue
                floor.add((r, c))
                if ch in ".*":
                    storage.add((r, c))
                if ch in "$*":
                    boxes.add((r, c))
                if ch == "@":
                    keeper = (r, c)
        return cls(frozenset(floor), frozenset(storage), frozenset(boxes), keeper)

    @staticmethod
    def name(cell) -> str:
        return f"l{cell[0]}_{cell[1]}"

    def cell(self, name: str) -> tuple:
        r, c = name[1:].split("_")
        return (int(r), int(c))

    def facts(self) -> str:
        n = self.name
        out = []
        for (r, c) in sorted(self.floor):
            if (r, c + 1) in self.floor:
                out.append(f"right({n((r, c))}, {n((r, c + 1))}).")
            if (r - 1, c) in self.floor:
                out.append(f"top({n((r, c))}, {n((r - 1, c))}).")
        out += [f"box({n(b)}, 0)." for b in sorted(self.boxes)]
        out += [f"solution({n(s)})." for s in sorted(self.storage)]
        out.append(f"sokoban({n(self.keeper)}, 0).")
        return "\n".join(out) + "\n"

    def reachable(self, keeper, boxes) -> set:
        seen = {keeper}
        todo = [keeper]
        while todo:
            r, c = todo.pop()
            for dr, dc in DIRS.values():
                nxt = (r + dr, c + dc)
                if nxt in self.floor and nxt not in boxes and nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        return seen

    def pushes(self, keeper, boxes):
        """Yield (box, direction, destination, new keeper, new boxes)."""
        reach = self.reachable(keeper, boxes)
        for b in sorted(boxes):
            for d, (dr, dc) in DIRS.items():
                behind = (b[0] - dr, b[1] - dc)
                if behind not in reach:
                    continue
                dst = (b[0] + dr, b[1] + dc)
                while dst in self.floor and dst not in boxes:
                    keeper2 = (dst[0] - dr, dst[1] - dc)
                    yield b, d, dst, keeper2, (boxes - {b}) | {dst}
                    dst = (dst[0] + dr, dst[1] + dc)

    def min_pushes(self, cap: int = 20) -> Optional[int]:
        """Breadth-first search over (keeper region, boxes) states."""
        def canon(keeper, boxes):
            return (min(self.reachable(keeper, boxes)), boxes)

        start = (self.keeper, self.boxes)
        if self.boxes <= self.storage:
            return 0
        seen = {canon(*start)}
        frontier = deque([(start, 0)])
        while frontier:
            (keeper, boxes), k = frontier.popleft()
            if k >= cap:
                continue
            for _, _, _, k2, b2 in self.pushes(keeper, boxes):
                if b2 <= self.storage:
                    return k + 1
                key = canon(k2, b2)
                if key not in seen:
                    seen.add(key)
                    frontier.append(((k2, b2), k + 1))
        return None

    def replay(self, plan) -> tuple[bool, str]:
        """Check a list of (box, direction, destination) pushes, in order."""
        keeper, boxes = self.keeper, self.boxes
        for step, (b, d, dst) in enumerate(plan):
            options = {(bb, dd, ds): (k2, b2) for bb, dd, ds, k2, b2 in self.pushes(keeper, boxes)}
            if (b, d, dst) not in options:
                return False, f"push {step} ({b} {d} to {dst}) is not executable"
            keeper, boxes = options[(b, d, dst)]
        if not boxes <= self.storage:
            return False, "boxes not on storage at the end"
        return True, "ok"


def plan_from_model(board: Board, model) -> list:
    """Extract pushes from an answer set given as literal keys."""
    steps = []
    for neg, pred, args in model:
        if pred == "push" and not neg:
            b, d, dst, t = args
            steps.append((t, board.cell(b), d, board.cell(dst)))
    steps.sort()
    return [(b, d, dst) for _, b, d, dst in steps]
