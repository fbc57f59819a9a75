"""Brute-force stable model enumeration via the Gelfond-Lifschitz reduct.

This module is the ground truth the graph solver is tested against, so it
stays deliberately naive: every subset of the Herbrand base is checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .program import AnswerSet, Atom, BodyLiteral, Program, Rule

__all__ = [
    "FALSE_MARKER",
    "TooManyAtoms",
    "ReductProgram",
    "gl_reduct",
    "least_model",
    "is_stable",
    "enumerate_answer_sets_bruteforce",
]

# Not a valid atom in the input language, so it cannot clash with user atoms.
FALSE_MARKER = "#false"

DEFAULT_MAX_ATOMS = 20


class TooManyAtoms(ValueError):
    def __init__(self, count: int, cap: int):
        self.count = count
        self.cap = cap
        super().__init__(f"brute force refused: {count} atoms exceeds the cap of {cap}")


@dataclass(frozen=True)
class ReductProgram:
    rules: tuple[Rule, ...]

    def __post_init__(self):
        for rule in self.rules:
            assert rule.head is not None
            assert all(lit.positive for lit in rule.body)

    def __str__(self) -> str:
        return "".join(f"{rule}\n" for rule in self.rules)


def gl_reduct(program: Program, candidate: Iterable[Atom]) -> ReductProgram:
    chosen = set(candidate)
    rules = []
    for rule in program.rules:
        if any(not lit.positive and lit.atom in chosen for lit in rule.body):
            continue
        body = tuple(BodyLiteral(lit.atom) for lit in rule.body if lit.positive)
        head = FALSE_MARKER if rule.head is None else rule.head
        rules.append(Rule(head, body))
    return ReductProgram(tuple(rules))


def least_model(reduct: ReductProgram) -> frozenset[Atom]:
    model: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for rule in reduct.rules:
            if rule.head not in model and all(lit.atom in model for lit in rule.body):
                model.add(rule.head)
                changed = True
    return frozenset(model)


def is_stable(program: Program, candidate: Iterable[Atom]) -> bool:
    chosen = frozenset(candidate)
    if FALSE_MARKER in chosen:
        return False
    return least_model(gl_reduct(program, chosen)) == chosen


def enumerate_answer_sets_bruteforce(program: Program,
                                     max_atoms: int = DEFAULT_MAX_ATOMS) -> list[AnswerSet]:
    atoms = sorted(program.atoms)
    if len(atoms) > max_atoms:
        raise TooManyAtoms(len(atoms), max_atoms)
    found = []
    for bits in range(1 << len(atoms)):
        candidate = [a for i, a in enumerate(atoms) if bits >> i & 1]
        if is_stable(program, candidate):
            found.append(AnswerSet.of(candidate))
    return sorted(found)
