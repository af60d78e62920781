"""Bundled encodings, small textbook programs and instance generators."""
from __future__ import annotations

from importlib import resources

from ..core import Program
from ..parser import parse_program

ENCODINGS = (
    "reach", "samegen", "samegen_board", "exams", "hampath", "hampath_open",
    "hamcycle", "tsp", "ramsey34", "qbf2", "strat", "strat4", "preferred_strat",
    "sokoban",
)


def encoding(name: str) -> str:
    if name not in ENCODINGS:
        raise KeyError(f"unknown encoding {name!r}")
    return resources.files(__package__).joinpath("encodings", f"{name}.dl").read_text()


def load(name: str, facts: str = "") -> Program:
    return parse_program(encoding(name) + "\n" + facts)


# small programs with known answer sets; keys are the usual names
PROGRAMS = {
    "P1": "a v -b v c.",
    "P2": "a v -b v c. :- a.",
    "P3": "a v -b v c. :- a. -b :- c. c :- -b.",
    "P4": "a v -b :- c. -b :- not a, not c. a v c :- not -b.",
    "P5": "a v b.",
    "P5'": "a :- not b. b :- not a.",
    "P6": "a v b. a :- b. b :- a.",
    "P6'": "a :- not b. b :- not a. a :- b. b :- a.",
    "P7": "p(a) v p(c) :- not q(a). p(b) :- not q(b).",
    "P8": "p(a) v p(c) :- not q(b). q(b) :- not p(a).",
    "P9": "a v b. a :- b.",
    "P10": "a v b. a :- b. b :- a.",
    "Pwc": "a v b. b v c. d v -d :- a, c. :~ b. [1:2] :~ a, -d. [4:1] :~ c, d. [3:1]",
}

# expected answer sets, printed literals
EXPECTED = {
    "P1": [{"a"}, {"-b"}, {"c"}],
    "P2": [{"-b"}, {"c"}],
    "P3": [{"-b", "c"}],
    "P4": [{"-b"}, {"a"}],
    "P5": [{"a"}, {"b"}],
    "P5'": [{"a"}, {"b"}],
    "P6": [{"a", "b"}],
    "P6'": [],
    "Pwc": [{"a", "c", "d"}],
}


def program(name: str) -> Program:
    return parse_program(PROGRAMS[name])
