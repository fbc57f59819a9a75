"""Seeded random generator for ground propositional programs.

Randomness comes from SplitMix64 so that a given configuration produces the
same program on every platform and in every language that implements the
same steps: each draw advances the state by 0x9E3779B97F4A7C15 and mixes it.
Probabilities use the top 53 bits of a draw; bounded integers use the high
word of ``draw * n``.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Optional

from .cycles import DEFAULT_CYCLE_CAP, condense, survey_cycles
from .graph import build_dependency_graph
from .program import BodyLiteral, Program, Rule, Sign

__all__ = ["SplitMix64", "GenConfig", "GenReport", "generate", "render", "stats"]

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def random(self) -> float:
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        return (self.next() * n) >> 64

    def chance(self, p: float) -> bool:
        return self.random() < p


@dataclass(frozen=True)
class GenConfig:
    num_atoms: int = 10
    num_rules: int = 15
    max_body_len: int = 3
    negation_prob: float = 0.5
    constraint_prob: float = 0.1
    fact_fraction: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.num_rules < 1:
            raise ValueError("num_rules must be at least 1")
        if not 1 <= self.max_body_len <= self.num_atoms:
            raise ValueError("max_body_len must lie in [1, num_atoms]")
        for name in ("negation_prob", "constraint_prob", "fact_fraction"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {p}")
        if not 0 <= self.seed <= _MASK:
            raise ValueError("seed must be an unsigned 64-bit value")


def generate(config: GenConfig) -> Program:
    """Draw a program from ``config``.

    Per rule, in order: a fact with probability ``fact_fraction``; otherwise
    headless with probability ``constraint_prob``, then a head atom (unless
    headless), a body length in [1, max_body_len], distinct body atoms by a
    partial Fisher-Yates shuffle, and a negation flag per body literal.
    """
    rng = SplitMix64(config.seed)
    atoms = [f"a{i}" for i in range(config.num_atoms)]
    rules = []
    for _ in range(config.num_rules):
        if rng.chance(config.fact_fraction):
            rules.append(Rule(atoms[rng.below(config.num_atoms)]))
            continue
        headless = rng.chance(config.constraint_prob)
        head = None if headless else atoms[rng.below(config.num_atoms)]
        length = 1 + rng.below(config.max_body_len)
        pool = list(range(config.num_atoms))
        body = []
        for i in range(length):
            j = i + rng.below(config.num_atoms - i)
            pool[i], pool[j] = pool[j], pool[i]
            sign = Sign.NEG if rng.chance(config.negation_prob) else Sign.POS
            body.append(BodyLiteral(atoms[pool[i]], sign))
        rules.append(Rule(head, tuple(body)))
    return Program(tuple(rules))


def render(program: Program, config: Optional[GenConfig] = None) -> str:
    header = ""
    if config is not None:
        header = "% generated: " + " ".join(f"{k}={v}" for k, v in asdict(config).items()) + "\n"
    return header + str(program)


@dataclass(frozen=True)
class GenReport:
    rules: int
    atoms: int
    sccs: int       # components that contain at least one cycle
    positive: int
    nec: int
    noc: int


def stats(program: Program, cycle_cap: Optional[int] = DEFAULT_CYCLE_CAP) -> GenReport:
    """Rule, atom and cycle counts of ``program``'s dependency graph.

    The cap applies to each component separately.
    """
    cond = condense(build_dependency_graph(program))
    pos = nec = noc = 0
    for node in cond.virtual.values():
        survey = survey_cycles(node.internal, cycle_cap)
        pos += survey.positive
        nec += survey.nec
        noc += survey.noc
    return GenReport(len(program.rules), len(program.atoms), len(cond.virtual), pos, nec, noc)
