"""Dependency graphs with explicit conjunction nodes.

A rule with two or more body literals gets its own conjunction node ``c``:
every body literal points into ``c`` and ``c`` points to the head. In the
raw (CNR) form these edges carry the literal signs and ``c -> head`` is
positive. Flipping the sign of every edge incident to a conjunction node
turns the conjunction into a disjunction (``p :- not c. c :- not q. c :- r.``),
which gives an ordinary signed dependency graph the solver can reason on.

Headless rules point at a dedicated constraint node whose value is fixed to
False. Facts are literal nodes whose value is fixed to True.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .program import Atom, Program, Rule, Sign

__all__ = [
    "NodeKind",
    "Truth",
    "Node",
    "Edge",
    "Digraph",
    "DepGraph",
    "build_cnr_graph",
    "cnr_to_dependency_graph",
    "build_dependency_graph",
    "to_dot",
]


class NodeKind(Enum):
    LITERAL = "literal"
    CONJUNCTION = "conjunction"
    CONSTRAINT = "constraint"
    VIRTUAL = "virtual"


class Truth(Enum):
    UNKNOWN = "unknown"
    TRUE = "true"
    FALSE = "false"

    @classmethod
    def of(cls, value: Optional[bool]) -> "Truth":
        if value is None:
            return cls.UNKNOWN
        return cls.TRUE if value else cls.FALSE


@dataclass(frozen=True)
class Node:
    id: int
    kind: NodeKind
    label: str
    rule: Optional[Rule] = None


@dataclass(frozen=True, order=True)
class Edge:
    src: int
    dst: int
    sign: Sign

    @property
    def positive(self) -> bool:
        return self.sign is Sign.POS

    def flipped(self) -> "Edge":
        return Edge(self.src, self.dst, self.sign.flip())

    def __str__(self) -> str:
        return f"{self.src}-({self.sign})->{self.dst}"


class Digraph:
    """Immutable signed digraph over integer node ids.

    Parallel edges with the same sign are merged; an edge with each sign
    may exist between the same pair of nodes.
    """

    def __init__(self, node_ids: Iterable[int], edges: Iterable[Edge]):
        self.node_ids: tuple[int, ...] = tuple(sorted(set(node_ids)))
        self.edges: tuple[Edge, ...] = tuple(sorted(set(edges)))
        present = set(self.node_ids)
        for e in self.edges:
            if e.src not in present or e.dst not in present:
                raise ValueError(f"edge {e} leaves the node set")

    @cached_property
    def out_edges(self) -> dict[int, list[Edge]]:
        out: dict[int, list[Edge]] = {n: [] for n in self.node_ids}
        for e in self.edges:
            out[e.src].append(e)
        return out

    @cached_property
    def in_edges(self) -> dict[int, list[Edge]]:
        inc: dict[int, list[Edge]] = {n: [] for n in self.node_ids}
        for e in self.edges:
            inc[e.dst].append(e)
        return inc

    @cached_property
    def successors(self) -> dict[int, list[int]]:
        return {n: sorted({e.dst for e in es}) for n, es in self.out_edges.items()}

    def has_self_loop(self, node: int) -> bool:
        return any(e.dst == node for e in self.out_edges[node])

    def restrict(self, nodes: Iterable[int]) -> "Digraph":
        keep = set(nodes)
        return Digraph(keep, (e for e in self.edges if e.src in keep and e.dst in keep))

    def without(self, edges: Iterable[Edge]) -> "Digraph":
        drop = set(edges)
        return Digraph(self.node_ids, (e for e in self.edges if e not in drop))

    def __len__(self) -> int:
        return len(self.node_ids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.node_ids == other.node_ids and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.node_ids, self.edges))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(nodes={len(self.node_ids)}, edges={len(self.edges)})"


class DepGraph(Digraph):
    """A dependency graph built from a program, with node metadata.

    ``fixed`` holds the values that hold in every world: True for facts and
    False for constraint nodes. ``form`` is ``"cnr"`` before the sign flip and
    ``"dg"`` after it.
    """

    def __init__(self, nodes: Iterable[Node], edges: Iterable[Edge],
                 fixed: Mapping[int, bool], form: str = "dg"):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        assert all(node.id == i for i, node in enumerate(self.nodes))
        super().__init__(range(len(self.nodes)), edges)
        self.fixed: dict[int, bool] = dict(fixed)
        self.form = form
        self.atom_index: dict[Atom, int] = {
            node.label: node.id for node in self.nodes if node.kind is NodeKind.LITERAL
        }

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]

    def kind(self, node_id: int) -> NodeKind:
        return self.nodes[node_id].kind

    def label(self, node_id: int) -> str:
        return self.nodes[node_id].label

    def literal_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.kind is NodeKind.LITERAL]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DepGraph):
            return Digraph.__eq__(self, other)
        return (self.nodes == other.nodes and self.edges == other.edges
                and self.fixed == other.fixed and self.form == other.form)

    __hash__ = Digraph.__hash__


def _unique_body(rule: Rule):
    seen = {}
    for lit in rule.body:
        seen.setdefault(lit, None)
    return tuple(seen)


def build_cnr_graph(program: Program) -> DepGraph:
    nodes = [Node(i, NodeKind.LITERAL, atom) for i, atom in enumerate(program.atoms)]
    index = {atom: i for i, atom in enumerate(program.atoms)}
    edges: set[Edge] = set()
    fixed: dict[int, bool] = {}
    seen_rules = set()

    def new_node(kind, rule):
        node = Node(len(nodes), kind, str(rule), rule)
        nodes.append(node)
        return node.id

    for rule in program.rules:
        body = _unique_body(rule)
        key = (rule.head, body)
        if key in seen_rules:
            continue
        seen_rules.add(key)
        if rule.is_fact:
            fixed[index[rule.head]] = True
            continue
        if rule.head is None:
            target = new_node(NodeKind.CONSTRAINT, rule)
            fixed[target] = False
        else:
            target = index[rule.head]
        if len(body) == 1:
            edges.add(Edge(index[body[0].atom], target, body[0].sign))
            continue
        conj = new_node(NodeKind.CONJUNCTION, rule)
        for lit in body:
            edges.add(Edge(index[lit.atom], conj, lit.sign))
        edges.add(Edge(conj, target, Sign.POS))

    return DepGraph(nodes, edges, fixed, form="cnr")


def cnr_to_dependency_graph(cnr: DepGraph) -> DepGraph:
    """Negate every edge incident to a conjunction node."""
    conj = {n.id for n in cnr.nodes if n.kind is NodeKind.CONJUNCTION}
    edges = [e.flipped() if (e.src in conj or e.dst in conj) else e for e in cnr.edges]
    return DepGraph(cnr.nodes, edges, cnr.fixed, form="dg")


def build_dependency_graph(program: Program) -> DepGraph:
    return cnr_to_dependency_graph(build_cnr_graph(program))


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: DepGraph, values: Optional[Mapping[int, bool]] = None,
           name: str = "G", nodes: Optional[Iterable[int]] = None,
           edges: Optional[Iterable[tuple[Edge, str]]] = None,
           conj_labels: bool = False) -> str:
    """Render ``graph`` (or a selection of it) in Graphviz DOT.

    Literal nodes are ellipses, conjunction nodes small filled black
    circles, constraint nodes double octagons. When ``values`` is given,
    True nodes get a bold red outline and False nodes stay plain. With
    ``conj_labels`` the rule text is shown next to each conjunction node.
    """
    node_ids = sorted(graph.node_ids if nodes is None else set(nodes))
    if edges is None:
        chosen = [(e, "") for e in graph.edges if e.src in node_ids and e.dst in node_ids]
    else:
        chosen = sorted(edges)
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for nid in node_ids:
        node = graph.node(nid)
        attrs = []
        if node.kind is NodeKind.LITERAL:
            attrs += ["shape=ellipse", f"label={_dot_quote(node.label)}"]
        elif node.kind is NodeKind.CONJUNCTION:
            attrs += ["shape=circle", "style=filled", "fillcolor=black",
                      "width=0.2", "label=\"\"", f"tooltip={_dot_quote(node.label)}"]
            if conj_labels:
                attrs.append(f"xlabel={_dot_quote(node.label)}")
        else:
            attrs += ["shape=doubleoctagon", "label=\"false\"",
                      f"tooltip={_dot_quote(node.label)}"]
        if values is not None and nid in values:
            if values[nid]:
                attrs += ["color=red", "penwidth=2"]
            else:
                attrs += ["color=black"]
        lines.append(f"  n{nid} [{', '.join(attrs)}];")
    for e, note in chosen:
        label = e.sign.value if not note else f"{e.sign.value} {note}"
        lines.append(f"  n{e.src} -> n{e.dst} [label={_dot_quote(label)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
