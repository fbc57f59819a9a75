"""Strongly connected components, cycle wrapping and cycle classification.

Every SCC with more than one node, and every node with a self-loop, is
wrapped into a virtual node that inherits the external edges of its
members. The wrapped graph is acyclic, so the solver can always find roots.

Cycles inside a virtual node are enumerated with Johnson's algorithm and
classified by the number of negative edges they traverse.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Iterable, Iterator, Optional

from .graph import Digraph, Edge
from .program import Sign

__all__ = [
    "DEFAULT_CYCLE_CAP",
    "CycleBudgetExceeded",
    "Cycle",
    "CycleClass",
    "VirtualNode",
    "CondensedGraph",
    "CycleSurvey",
    "find_sccs",
    "condense",
    "enumerate_cycles",
    "classify_cycle",
    "survey_cycles",
    "has_odd_cycle",
    "shortest_cycle_through",
    "shortest_negative_cycle",
]

DEFAULT_CYCLE_CAP = 1_000_000


class CycleBudgetExceeded(RuntimeError):
    def __init__(self, cap: int):
        self.cap = cap
        super().__init__(f"cycle enumeration exceeded the cap of {cap} cycles")


class CycleClass(Enum):
    POSITIVE = "positive"
    NEG_EVEN = "nec"
    NEG_ODD = "noc"


@dataclass(frozen=True)
class Cycle:
    """An elementary cycle, rotated so that it starts at its smallest node."""

    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]

    @property
    def neg_count(self) -> int:
        return sum(1 for e in self.edges if e.sign is Sign.NEG)

    def __len__(self) -> int:
        return len(self.nodes)

    def rotated(self, k: int) -> "Cycle":
        k %= len(self.nodes)
        return Cycle(self.nodes[k:] + self.nodes[:k], self.edges[k:] + self.edges[:k])


def classify_cycle(cycle: Cycle) -> CycleClass:
    neg = cycle.neg_count
    if neg == 0:
        return CycleClass.POSITIVE
    return CycleClass.NEG_ODD if neg % 2 else CycleClass.NEG_EVEN


def find_sccs(graph: Digraph) -> list[tuple[int, ...]]:
    """Tarjan's algorithm, iterative.

    Each component is sorted, and components are ordered by their smallest
    member.
    """
    succ = graph.successors
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    result: list[tuple[int, ...]] = []
    counter = 0

    for root in graph.node_ids:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(succ[root]))]
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(succ[w])))
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    result.append(tuple(sorted(comp)))
    result.sort(key=lambda c: c[0])
    return result


@dataclass(frozen=True)
class VirtualNode:
    id: int
    members: tuple[int, ...]
    internal: Digraph = field(compare=False)


class CondensedGraph:
    """A graph whose cyclic components are wrapped into virtual nodes.

    Units are regular node ids or virtual node ids. Virtual ids are
    allocated above the largest node id of ``base``.
    """

    def __init__(self, base: Digraph, units: list[int],
                 virtual: dict[int, VirtualNode], unit_of: dict[int, int],
                 edges: Iterable[Edge]):
        self.base = base
        self.units = units
        self.virtual = virtual
        self.unit_of = unit_of
        self.edges = tuple(sorted(set(edges)))
        self.preds: dict[int, set[int]] = {u: set() for u in units}
        self.succs: dict[int, set[int]] = {u: set() for u in units}
        for e in self.edges:
            self.preds[e.dst].add(e.src)
            self.succs[e.src].add(e.dst)

    def is_virtual(self, unit: int) -> bool:
        return unit in self.virtual

    def members(self, unit: int) -> tuple[int, ...]:
        v = self.virtual.get(unit)
        return v.members if v is not None else (unit,)

    def is_acyclic(self) -> bool:
        indeg = {u: len(self.preds[u]) for u in self.units}
        ready = [u for u, d in indeg.items() if d == 0]
        seen = 0
        while ready:
            u = ready.pop()
            seen += 1
            for v in self.succs[u]:
                indeg[v] -= 1
                if indeg[v] == 0:
                    ready.append(v)
        return seen == len(self.units)

    def __repr__(self) -> str:
        return (f"CondensedGraph(units={len(self.units)}, "
                f"virtual={len(self.virtual)}, edges={len(self.edges)})")


def condense(graph: Digraph) -> CondensedGraph:
    next_id = (max(graph.node_ids) + 1) if graph.node_ids else 0
    units: list[int] = []
    virtual: dict[int, VirtualNode] = {}
    unit_of: dict[int, int] = {}
    for comp in find_sccs(graph):
        if len(comp) == 1 and not graph.has_self_loop(comp[0]):
            unit = comp[0]
        else:
            unit = next_id
            next_id += 1
            virtual[unit] = VirtualNode(unit, comp, graph.restrict(comp))
        units.append(unit)
        for n in comp:
            unit_of[n] = unit
    edges = [Edge(unit_of[e.src], unit_of[e.dst], e.sign) for e in graph.edges
             if unit_of[e.src] != unit_of[e.dst]]
    return CondensedGraph(graph, units, virtual, unit_of, edges)


def _node_cycles(graph: Digraph) -> Iterator[list[int]]:
    """Johnson's elementary circuit enumeration on the unsigned skeleton.

    Yields node lists starting at their smallest node. Start nodes are taken
    in increasing order and neighbours in increasing order, so the output
    order is deterministic.
    """
    succ = {n: list(s) for n, s in graph.successors.items()}
    remaining = set(graph.node_ids)
    for start in graph.node_ids:
        if start in succ[start]:
            yield [start]
        sub = graph.restrict(remaining)
        remaining.discard(start)
        comp = next(c for c in find_sccs(sub) if start in c)
        if len(comp) == 1:
            continue
        allowed = set(comp)
        adj = {n: [m for m in succ[n] if m in allowed and m != n] for n in comp}

        blocked = {start}
        block_map: dict[int, set[int]] = defaultdict(set)
        closed: set[int] = set()
        path = [start]
        stack = [(start, list(reversed(adj[start])))]
        while stack:
            node, nbrs = stack[-1]
            if nbrs:
                nxt = nbrs.pop()
                if nxt == start:
                    yield list(path)
                    closed.update(path)
                elif nxt not in blocked:
                    path.append(nxt)
                    stack.append((nxt, list(reversed(adj[nxt]))))
                    closed.discard(nxt)
                    blocked.add(nxt)
                    continue
            if not nbrs:
                if node in closed:
                    pending = [node]
                    while pending:
                        b = pending.pop()
                        if b in blocked:
                            blocked.discard(b)
                            pending.extend(block_map[b])
                            block_map[b].clear()
                else:
                    for m in adj[node]:
                        block_map[m].add(node)
                stack.pop()
                path.pop()


def enumerate_cycles(graph: Digraph, cap: Optional[int] = DEFAULT_CYCLE_CAP) -> Iterator[Cycle]:
    """Lazily yield every elementary cycle of ``graph``.

    A node cycle whose hops admit edges of both signs yields one Cycle per
    sign combination. Raises CycleBudgetExceeded once more than ``cap``
    cycles have been produced.
    """
    by_pair: dict[tuple[int, int], list[Edge]] = defaultdict(list)
    for e in graph.edges:
        by_pair[e.src, e.dst].append(e)
    count = 0
    for nodes in _node_cycles(graph):
        hops = [by_pair[nodes[i], nodes[(i + 1) % len(nodes)]] for i in range(len(nodes))]
        for edges in product(*hops):
            count += 1
            if cap is not None and count > cap:
                raise CycleBudgetExceeded(cap)
            yield Cycle(tuple(nodes), tuple(edges))


def has_odd_cycle(graph: Digraph) -> bool:
    """True iff some cycle of ``graph`` has an odd number of negative edges.

    Within each SCC a closed walk of odd parity exists iff the signs cannot
    be explained by a two-colouring of the nodes, and any odd closed walk
    contains an odd elementary cycle. So a linear-time parity check suffices.
    """
    for comp in find_sccs(graph):
        sub = graph.restrict(comp)
        if not sub.edges:
            continue
        colour: dict[int, int] = {comp[0]: 0}
        todo = [comp[0]]
        undirected: dict[int, list[tuple[int, int]]] = defaultdict(list)
        for e in sub.edges:
            parity = 1 if e.sign is Sign.NEG else 0
            undirected[e.src].append((e.dst, parity))
            undirected[e.dst].append((e.src, parity))
        while todo:
            u = todo.pop()
            for v, parity in undirected[u]:
                want = colour[u] ^ parity
                if v not in colour:
                    colour[v] = want
                    todo.append(v)
                elif colour[v] != want:
                    return True
    return False


@dataclass
class CycleSurvey:
    """Summary of the cycles in one strongly connected component."""

    positive: int = 0
    nec: int = 0
    noc: int = 0
    first_nec: Optional[Cycle] = None
    nec_nodes: set[int] = field(default_factory=set)
    noc_nodes: set[int] = field(default_factory=set)
    nec_through: dict[int, Cycle] = field(default_factory=dict)
    complete: bool = True

    @property
    def has_nec(self) -> bool:
        return self.nec > 0

    @property
    def has_noc(self) -> bool:
        return self.noc > 0

    @property
    def overlap(self) -> list[int]:
        return sorted(self.nec_nodes & self.noc_nodes)

    def counts(self) -> dict[str, int]:
        return {"positive": self.positive, "nec": self.nec, "noc": self.noc}


def _nec_key(cycle: Cycle):
    return (len(cycle.nodes), cycle.nodes, cycle.edges)


def survey_cycles(graph: Digraph, cap: Optional[int] = DEFAULT_CYCLE_CAP,
                  stop_at_overlap: bool = False) -> CycleSurvey:
    """Enumerate the cycles of ``graph`` and tally them by class.

    ``first_nec`` is the shortest NEC, ties broken by its node list, and
    ``nec_through`` maps each node to the first NEC (same order) through it.
    With ``stop_at_overlap`` enumeration ends as soon as some node is known
    to lie on both an NEC and a NOC; the tallies are then partial and
    ``complete`` is False.
    """
    survey = CycleSurvey()
    for cycle in enumerate_cycles(graph, cap):
        kind = classify_cycle(cycle)
        if kind is CycleClass.POSITIVE:
            survey.positive += 1
        elif kind is CycleClass.NEG_EVEN:
            survey.nec += 1
            survey.nec_nodes.update(cycle.nodes)
            key = _nec_key(cycle)
            if survey.first_nec is None or key < _nec_key(survey.first_nec):
                survey.first_nec = cycle
            for n in cycle.nodes:
                best = survey.nec_through.get(n)
                if best is None or key < _nec_key(best):
                    survey.nec_through[n] = cycle
        else:
            survey.noc += 1
            survey.noc_nodes.update(cycle.nodes)
        if stop_at_overlap and kind is not CycleClass.POSITIVE and survey.overlap:
            survey.complete = False
            break
    return survey


def shortest_cycle_through(graph: Digraph, edge: Edge) -> Optional[Cycle]:
    """Shortest elementary cycle that uses ``edge``, found by BFS.

    Neighbours are visited in increasing order, so ties resolve the same
    way on every run.
    """
    if edge.src == edge.dst:
        return Cycle((edge.src,), (edge,))
    parent: dict[int, Optional[int]] = {edge.dst: None}
    frontier = deque([edge.dst])
    while frontier and edge.src not in parent:
        u = frontier.popleft()
        for v in graph.successors[u]:
            if v not in parent:
                parent[v] = u
                frontier.append(v)
    if edge.src not in parent:
        return None
    path = [edge.src]
    while path[-1] != edge.dst:
        path.append(parent[path[-1]])
    path.reverse()                      # edge.dst ... edge.src
    nodes = [edge.src] + path[:-1]      # edge.src, edge.dst, ..., last before src
    hops = [edge]
    for a, b in zip(path, path[1:]):
        hops.append(min(e for e in graph.out_edges[a] if e.dst == b))
    k = nodes.index(min(nodes))
    return Cycle(tuple(nodes), tuple(hops)).rotated(k)


def shortest_negative_cycle(graph: Digraph) -> Optional[Cycle]:
    """The shortest cycle through some negative edge, ties broken by node list."""
    best = None
    for e in graph.edges:
        if e.sign is not Sign.NEG:
            continue
        cycle = shortest_cycle_through(graph, e)
        if cycle is not None and (best is None or _nec_key(cycle) < _nec_key(best)):
            best = cycle
    return best
