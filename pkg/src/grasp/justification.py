"""Causal justifications read off a solved dependency graph.

An edge is effective when it actually carried a True value to its target:
a positive edge leaving a True node, or a negative edge leaving a False
node. Justifying a True atom walks effective edges backwards. A False
conjunction node stands for a rule whose body held, so the walk continues
into its body literals. Walks stop at facts, at False atoms that nothing
supports, and at values that were chosen while breaking a cycle.

Justifications are computed on the full dependency graph, not on the
reduced graphs the solver works on, so edges removed during the search
still show up here.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .graph import DepGraph, Edge, NodeKind, to_dot
from .program import Atom
from .solver import World

__all__ = [
    "Reason",
    "EffectiveEdge",
    "JustificationGraph",
    "JustificationError",
    "IncompleteWorld",
    "AtomNotTrue",
    "AtomNotFalse",
    "UnknownAtom",
    "effective_edges",
    "justify",
    "justify_absence",
    "violations",
]


class JustificationError(ValueError):
    pass


class IncompleteWorld(JustificationError):
    pass


class AtomNotTrue(JustificationError):
    pass


class AtomNotFalse(JustificationError):
    pass


class UnknownAtom(JustificationError):
    pass


class Reason(Enum):
    TRUE_THROUGH_POSITIVE = "true-through-positive"
    FALSE_THROUGH_NEGATIVE = "false-through-negative"
    BODY_LITERAL = "body-literal"        # into a False conjunction: the literal held
    BLOCKED = "blocked"                  # an in-edge of a False atom that carried nothing

    @property
    def effective(self) -> bool:
        return self in (Reason.TRUE_THROUGH_POSITIVE, Reason.FALSE_THROUGH_NEGATIVE)


@dataclass(frozen=True, order=True)
class EffectiveEdge:
    edge: Edge
    reason: Reason = field(compare=False)


def _effective_reason(edge: Edge, world: World) -> Optional[Reason]:
    src = world.values[edge.src]
    if src and edge.positive:
        return Reason.TRUE_THROUGH_POSITIVE
    if not src and not edge.positive:
        return Reason.FALSE_THROUGH_NEGATIVE
    return None


def _require_total(graph: DepGraph, world: World) -> None:
    missing = [n for n in graph.node_ids if n not in world.values]
    if missing:
        raise IncompleteWorld(f"{len(missing)} node(s) have no value, e.g. {graph.label(missing[0])}")


def effective_edges(graph: DepGraph, world: World) -> frozenset[EffectiveEdge]:
    _require_total(graph, world)
    out = set()
    for e in graph.edges:
        reason = _effective_reason(e, world)
        if reason is not None:
            out.add(EffectiveEdge(e, reason))
    return frozenset(out)


@dataclass
class JustificationGraph:
    """Why ``root`` has its value in one world.

    ``kind`` is ``"support"`` for a True atom and ``"absence"`` for a False
    one. ``leaves`` maps node ids to fact / default-false / cycle-assumption
    (and, in absence graphs, derived for True atoms that are not expanded).
    """

    root: Atom
    kind: str
    graph: DepGraph = field(repr=False)
    nodes: dict[int, bool] = field(default_factory=dict)
    edges: list[tuple[Edge, Reason]] = field(default_factory=list)
    leaves: dict[int, str] = field(default_factory=dict)
    assumptions: dict[int, str] = field(default_factory=dict)

    def label(self, node: int) -> str:
        return self.graph.label(node)

    def to_json(self) -> dict:
        g = self.graph
        return {
            "root": self.root,
            "kind": self.kind,
            "nodes": [{"id": n, "label": g.label(n), "value": v, "kind": g.kind(n).value}
                      for n, v in sorted(self.nodes.items())],
            "edges": [{"from": e.src, "to": e.dst, "sign": e.sign.value, "reason": r.value}
                      for e, r in self.edges],
            "leaves": [{"id": n, "kind": k, **({"cycle": self.assumptions[n]}
                                              if n in self.assumptions else {})}
                       for n, k in sorted(self.leaves.items())],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"

    def to_dot(self) -> str:
        return to_dot(self.graph, values=self.nodes, name="justification",
                      nodes=self.nodes, edges=[(e, r.value) for e, r in self.edges],
                      conj_labels=True)

    def to_text(self) -> str:
        into: dict[int, list[tuple[Edge, Reason]]] = {}
        for e, r in self.edges:
            into.setdefault(e.dst, []).append((e, r))
        lines: list[str] = []
        shown: set[int] = set()

        def describe(n: int) -> str:
            value = "true" if self.nodes[n] else "false"
            text = f"{self.label(n)} [{value}]"
            if self.graph.kind(n) is NodeKind.CONJUNCTION:
                text = f"rule {self.label(n)} [{value}]"
            if n in self.leaves:
                text += f" ({self.leaves[n]}"
                if n in self.assumptions:
                    text += f": {self.assumptions[n]}"
                text += ")"
            elif n in self.assumptions:
                text += f" (assumed: {self.assumptions[n]})"
            return text

        stack = [(self.graph.atom_index[self.root], 0, None)]
        while stack:
            n, depth, via = stack.pop()
            prefix = "  " * depth
            arrow = "" if via is None else f"<-({via[0].sign.value} {via[1].value}) "
            if n in shown and n in into:
                lines.append(f"{prefix}{arrow}{describe(n)} ...")
                continue
            lines.append(f"{prefix}{arrow}{describe(n)}")
            shown.add(n)
            for e, r in reversed(into.get(n, [])):
                stack.append((e.src, depth + 1, (e, r)))
        return "\n".join(lines) + "\n"


def _lookup(graph: DepGraph, world: World, atom: Atom) -> int:
    if atom not in graph.atom_index:
        raise UnknownAtom(f"{atom} does not occur in the program")
    _require_total(graph, world)
    return graph.atom_index[atom]


def _leaf_kind(graph: DepGraph, world: World, n: int) -> str:
    if graph.fixed.get(n) is True and graph.kind(n) is NodeKind.LITERAL:
        return "fact"
    if n in world.assumed:
        return "cycle-assumption"
    if world.values[n]:
        return "derived"
    return "default-false"


def justify(graph: DepGraph, world: World, atom: Atom) -> JustificationGraph:
    root = _lookup(graph, world, atom)
    if not world.values[root]:
        raise AtomNotTrue(f"{atom} is false in this world")
    jg = JustificationGraph(atom, "support", graph)
    queue = deque([root])
    while queue:
        n = queue.popleft()
        if n in jg.nodes:
            continue
        value = world.values[n]
        jg.nodes[n] = value
        if n in world.assumed:
            jg.assumptions[n] = world.assumed[n]
        if graph.fixed.get(n) is True and graph.kind(n) is NodeKind.LITERAL:
            jg.leaves[n] = "fact"
            continue
        if value:
            support = [(e, _effective_reason(e, world)) for e in graph.in_edges[n]]
            support = [(e, r) for e, r in support if r is not None]
            if not support:
                jg.leaves[n] = "cycle-assumption" if n in world.assumed else "unsupported"
            for e, r in support:
                jg.edges.append((e, r))
                queue.append(e.src)
        elif graph.kind(n) is NodeKind.CONJUNCTION:
            for e in graph.in_edges[n]:
                jg.edges.append((e, Reason.BODY_LITERAL))
                queue.append(e.src)
        else:
            jg.leaves[n] = _leaf_kind(graph, world, n)
    jg.edges.sort()
    return jg


def justify_absence(graph: DepGraph, world: World, atom: Atom) -> JustificationGraph:
    """Why ``atom`` is False: every in-edge, and why it carried nothing.

    For a rule routed through a conjunction node, the body literals that
    failed are included one level down.
    """
    root = _lookup(graph, world, atom)
    if world.values[root]:
        raise AtomNotFalse(f"{atom} is true in this world")
    jg = JustificationGraph(atom, "absence", graph)
    jg.nodes[root] = False
    jg.leaves[root] = _leaf_kind(graph, world, root) if not graph.in_edges[root] else ""
    if root in world.assumed:
        jg.assumptions[root] = world.assumed[root]

    def add_leaf(n: int) -> None:
        jg.nodes[n] = world.values[n]
        jg.leaves[n] = _leaf_kind(graph, world, n)
        if n in world.assumed:
            jg.assumptions[n] = world.assumed[n]

    for e in graph.in_edges[root]:
        reason = _effective_reason(e, world)
        jg.edges.append((e, reason or Reason.BLOCKED))
        src = e.src
        if graph.kind(src) is NodeKind.CONJUNCTION and world.values[src]:
            jg.nodes[src] = True
            for f in graph.in_edges[src]:
                r = _effective_reason(f, world)
                if r is not None:
                    jg.edges.append((f, r))
                    add_leaf(f.src)
        else:
            add_leaf(src)
    if not jg.leaves[root]:
        del jg.leaves[root]
    jg.edges.sort()
    return jg


def violations(jg: JustificationGraph, world: World) -> list[str]:
    """Problems with a support graph; an empty list means it is sound.

    Leaves must be facts, unsupported False atoms, or cycle assumptions;
    every effective edge must end in a True node; every True literal that
    is not a fact or an assumption needs an effective edge into it.
    """
    g = jg.graph
    problems = []
    for n, kind in jg.leaves.items():
        if kind == "fact":
            ok = g.fixed.get(n) is True and world.values[n]
        elif kind == "default-false":
            ok = not world.values[n] and n not in world.assumed
        elif kind == "cycle-assumption":
            ok = n in world.assumed
        else:
            ok = False
        if not ok:
            problems.append(f"leaf {g.label(n)} has bad kind {kind!r}")
    supported = set()
    for e, r in jg.edges:
        if r.effective:
            supported.add(e.dst)
            if not world.values[e.dst]:
                problems.append(f"effective edge {g.label(e.src)} -> {g.label(e.dst)} ends in a False node")
            if _effective_reason(e, world) is not r:
                problems.append(f"edge {e} is labelled {r.value} but is not")
    for n, value in jg.nodes.items():
        if (value and g.kind(n) is NodeKind.LITERAL and jg.leaves.get(n) not in ("fact", "cycle-assumption")
                and n not in supported):
            problems.append(f"true atom {g.label(n)} has no effective support")
    return problems
