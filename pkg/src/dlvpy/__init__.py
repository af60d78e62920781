"""dlvpy: a disjunctive datalog engine with strong negation and weak constraints."""
from .analyzer import EvalClass, FragmentClass, classify, is_hcf, is_stratified
from .checker import Checker, is_answer_set
from .core import Program
from .grounder import GroundProgram, ground, intelligent_ground, naive_ground
from .optimizer import CostVector, cost
from .parser import ParseError, parse, parse_program
from .reasoner import (
    SolveConfig, SolveResult, answer_sets, brave, cautious, check_model, format_model, solve,
)

__all__ = [
    "EvalClass", "FragmentClass", "classify", "is_hcf", "is_stratified",
    "Checker", "is_answer_set", "Program",
    "GroundProgram", "ground", "intelligent_ground", "naive_ground",
    "CostVector", "cost", "ParseError", "parse", "parse_program",
    "SolveConfig", "SolveResult", "answer_sets", "brave", "cautious", "check_model",
    "format_model", "solve",
]

__version__ = "0.1.0"
