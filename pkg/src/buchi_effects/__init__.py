"""Büchi-automaton based effect inference for a small recursive language."""

from .automaton import Automaton, AutomatonError, accepts_finite, accepts_upword, parse_automaton
from .classes import ClassTable, Profile, build_class_table
from .inference import Verdict, check_policy, infer_finite, solve_infinite
from .lang import Call, Choice, Emit, Program, ProgramError, Seq, parse_program, validate
from .lattice import BuchiDomain, PairTable, build_pairs

__all__ = [
    "Automaton",
    "AutomatonError",
    "BuchiDomain",
    "Call",
    "Choice",
    "ClassTable",
    "Emit",
    "PairTable",
    "Profile",
    "Program",
    "ProgramError",
    "Seq",
    "Verdict",
    "accepts_finite",
    "accepts_upword",
    "build_class_table",
    "build_pairs",
    "check_policy",
    "infer_finite",
    "parse_automaton",
    "parse_program",
    "solve_infinite",
    "validate",
]
