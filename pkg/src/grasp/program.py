"""Core program types: atoms, rules, programs and answer sets.

Atoms are plain strings holding the canonical printed form of a ground atom,
e.g. ``"p"`` or ``"color(1,red)"``. Argument terms are opaque: the solver
treats every atom as a propositional symbol.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional

Atom = str


class Sign(str, Enum):
    POS = "+"
    NEG = "-"

    def flip(self) -> "Sign":
        return Sign.NEG if self is Sign.POS else Sign.POS

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BodyLiteral:
    atom: Atom
    sign: Sign = Sign.POS

    @property
    def positive(self) -> bool:
        return self.sign is Sign.POS

    def __str__(self) -> str:
        return self.atom if self.positive else f"not {self.atom}"


@dataclass(frozen=True)
class Rule:
    head: Optional[Atom]
    body: tuple[BodyLiteral, ...] = ()

    def __post_init__(self):
        if self.head is None and not self.body:
            raise ValueError("a headless rule needs a non-empty body")

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    def atoms(self) -> Iterable[Atom]:
        if self.head is not None:
            yield self.head
        for lit in self.body:
            yield lit.atom

    def __str__(self) -> str:
        body = ", ".join(str(lit) for lit in self.body)
        if self.head is None:
            return f":- {body}."
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class Program:
    """An ordered list of ground rules.

    ``atoms`` is the Herbrand base of the program in first-occurrence order.
    """

    rules: tuple[Rule, ...] = ()
    atoms: tuple[Atom, ...] = field(init=False, compare=False)

    def __post_init__(self):
        seen: dict[Atom, None] = {}
        for rule in self.rules:
            for atom in rule.atoms():
                seen.setdefault(atom, None)
        object.__setattr__(self, "atoms", tuple(seen))

    @classmethod
    def of(cls, rules: Iterable[Rule]) -> "Program":
        return cls(tuple(rules))

    def __len__(self) -> int:
        return len(self.rules)

    def __str__(self) -> str:
        return "".join(f"{rule}\n" for rule in self.rules)


@dataclass(frozen=True, order=True)
class AnswerSet:
    """A stable model, stored as a sorted tuple of atoms."""

    atoms: tuple[Atom, ...]

    @classmethod
    def of(cls, atoms: Iterable[Atom]) -> "AnswerSet":
        return cls(tuple(sorted(set(atoms))))

    def __contains__(self, atom: object) -> bool:
        return atom in self.atoms

    def __iter__(self):
        return iter(self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)

    def __str__(self) -> str:
        return "{" + ", ".join(self.atoms) + "}"
