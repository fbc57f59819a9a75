"""Graph-based answer set solving with causal justifications."""

from .program import AnswerSet, Atom, BodyLiteral, Program, Rule, Sign
from .parser import LexError, ParseError, RangeSyntaxError, VariableError, parse_program
from .graph import DepGraph, Edge, NodeKind, Truth, build_dependency_graph
from .solver import Solver, World, solve, verify_stable
from .oracle import enumerate_answer_sets_bruteforce

__version__ = "0.1.0"
