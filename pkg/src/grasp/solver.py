"""Answer set search by root propagation over the condensed dependency graph.

The search works layer by layer. Roots of the condensed graph are resolved
first: a regular root without a value becomes False, and a virtual root (a
wrapped SCC) has its cycles broken into one or more worlds, each solved by a
nested search over the SCC's own nodes. The root worlds are combined, their
values pushed along out-edges, the roots removed, and the search continues
on what is left.

Values only ever move from unknown to True or False. Propagation only
produces True: a True node makes its positive successors True and a False
node makes its negative successors True. Writing True into a node that is
already False makes the world inconsistent, and the world is dropped.

Every complete world is projected onto its literal nodes and checked for
stability against the source program before it is reported.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Optional

from .cycles import (DEFAULT_CYCLE_CAP, CondensedGraph, Cycle, VirtualNode, condense,
                     has_odd_cycle, shortest_negative_cycle, survey_cycles)
from .graph import DepGraph, Digraph, Edge, NodeKind, Truth, build_dependency_graph
from .oracle import is_stable
from .program import AnswerSet, Atom, Program, Sign

__all__ = [
    "World",
    "SolverStats",
    "Solver",
    "solve",
    "reasoning_rec",
    "find_roots",
    "propagate",
    "merge_roots",
    "break_cycle",
    "remove_edges_for_value",
    "verify_stable",
]

log = logging.getLogger(__name__)


@dataclass
class World:
    """A partial assignment of truth values to node ids.

    ``assumed`` records nodes whose value was chosen while breaking a cycle,
    mapped to a short description of the cycle that was broken.
    """

    values: dict[int, bool] = field(default_factory=dict)
    assumed: dict[int, str] = field(default_factory=dict)
    consistent: bool = True

    def copy(self) -> "World":
        return World(dict(self.values), dict(self.assumed), self.consistent)

    def value(self, node: int) -> Truth:
        return Truth.of(self.values.get(node))

    def make_true(self, node: int) -> bool:
        """Set ``node`` True. Returns True if this changed the world."""
        current = self.values.get(node)
        if current is None:
            self.values[node] = True
            return True
        if current is False:
            self.consistent = False
        return False

    def assume(self, node: int, value: bool, reason: str) -> None:
        current = self.values.get(node)
        if current is not None and current != value:
            self.consistent = False
            return
        self.values[node] = value
        self.assumed[node] = reason

    def fragment(self, nodes: Iterable[int]) -> "World":
        part = World()
        for n in nodes:
            if n in self.values:
                part.values[n] = self.values[n]
            if n in self.assumed:
                part.assumed[n] = self.assumed[n]
        return part

    def update(self, other: "World") -> None:
        self.values.update(other.values)
        self.assumed.update(other.assumed)
        self.consistent = self.consistent and other.consistent


@dataclass
class SolverStats:
    worlds: int = 0         # complete worlds reaching the end of the search
    inconsistent: int = 0   # worlds dropped on a True/False conflict
    decisions: int = 0      # binary splits made while breaking cycles
    breaks: int = 0         # virtual nodes that needed a cycle survey
    positive: int = 0
    nec: int = 0
    noc: int = 0
    max_depth: int = 0
    rejected: int = 0       # candidates failing the stability check
    models: int = 0

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


def verify_stable(program: Program, candidate: Iterable[Atom]) -> bool:
    return is_stable(program, candidate)


def find_roots(graph: CondensedGraph, active: Optional[set[int]] = None) -> list[int]:
    """Units of ``graph`` with no in-edges from other active units."""
    if active is None:
        active = set(graph.units)
    roots = [u for u in graph.units if u in active and not (graph.preds[u] & active)]
    assert roots or not active, "a non-empty acyclic graph always has a root"
    return roots


def propagate(graph: Digraph, world: World, sources: Optional[Iterable[int]] = None,
              within: Optional[set[int]] = None) -> World:
    """Push values from ``sources`` along effective out-edges, in place.

    Targets are restricted to ``within`` when given. Newly True targets keep
    propagating along their own positive out-edges.
    """
    if sources is None:
        sources = [n for n in graph.node_ids if n in world.values]
    queue = deque(sources)
    while queue and world.consistent:
        u = queue.popleft()
        val = world.values.get(u)
        if val is None:
            continue
        for e in graph.out_edges.get(u, ()):
            if e.positive != val:
                continue
            if within is not None and e.dst not in within:
                continue
            if world.make_true(e.dst):
                queue.append(e.dst)
            if not world.consistent:
                break
    return world


def merge_roots(regular: World, virtual: list[list[World]]) -> Iterator[World]:
    """Cartesian product of the per-root worlds, lazily."""
    for combo in product(*virtual):
        merged = regular.copy()
        for part in combo:
            merged.update(part)
        yield merged


def _removable(edges: Iterable[Edge], node: int, value: bool) -> list[Edge]:
    if value:
        return [e for e in edges if e.dst == node or (e.src == node and not e.positive)]
    return [e for e in edges if e.src == node and e.positive]


def remove_edges_for_value(graph: Digraph, node: int, value: Optional[bool]) -> Digraph:
    """Drop the edges a fixed node no longer needs.

    A True node loses its in-edges and its negative out-edges. A False node
    loses its positive out-edges; its in-edges stay so that a later attempt
    to make it True is still seen as a conflict.
    """
    assert value is not None, "only fixed nodes shed edges"
    return graph.without(_removable(graph.edges, node, value))


def _settle(graph: Digraph, world: World) -> tuple[Digraph, bool]:
    """Propagate fixed values inside ``graph`` and shed dead edges.

    Runs to a fixpoint. Returns the residual graph and whether anything
    changed. On a conflict the world is marked inconsistent.
    """
    edges = set(graph.edges)
    out = {n: set(es) for n, es in graph.out_edges.items()}
    inc = {n: set(es) for n, es in graph.in_edges.items()}
    queue = deque(n for n in graph.node_ids if n in world.values)
    done: set[int] = set()
    changed = False
    while queue:
        u = queue.popleft()
        if u in done:
            continue
        done.add(u)
        val = world.values[u]
        for e in sorted(out[u]):
            if e.positive == val:
                if world.make_true(e.dst):
                    queue.append(e.dst)
                    changed = True
                if not world.consistent:
                    return graph, changed
        dead = _removable(inc[u] | out[u], u, val)
        for e in dead:
            edges.discard(e)
            out[e.src].discard(e)
            inc[e.dst].discard(e)
        changed = changed or bool(dead)
    if not changed:
        return graph, False
    return Digraph(graph.node_ids, edges), True


@dataclass
class _Context:
    graph: DepGraph
    stats: SolverStats
    cycle_cap: Optional[int] = DEFAULT_CYCLE_CAP
    constraint_prune: bool = False


def _describe(graph: DepGraph, cycle: Cycle) -> str:
    return "[" + ", ".join(graph.label(n) if graph.kind(n) is NodeKind.LITERAL
                           else f"#{n}" for n in cycle.nodes) + "]"


def _split_on(ctx: _Context, nec: Cycle) -> list[list[tuple[int, bool, str]]]:
    pivot = next(e.src for e in nec.edges if e.sign is Sign.NEG)
    label = "NEC " + _describe(ctx.graph, nec)
    return [[(pivot, True, label)], [(pivot, False, label)]]


def break_cycle(virtual: VirtualNode, world: World, ctx: _Context) -> list[tuple[World, Digraph]]:
    """Break the cycles of a root virtual node.

    Returns the surviving worlds, each paired with the residual graph over
    the virtual node's members that still has to be solved.
    """
    w = world.copy()
    residue, changed = _settle(virtual.internal, w)
    if not w.consistent:
        ctx.stats.inconsistent += 1
        return []
    if changed:
        return [(w, residue)]

    # Nothing is fixed inside the component and nothing outside supports it.
    ctx.stats.breaks += 1
    if all(e.positive for e in residue.edges):
        ctx.stats.positive += 1
        for n in residue.node_ids:
            w.assume(n, False, "positive cycle")
        return [(w, Digraph(residue.node_ids, ()))]

    if not has_odd_cycle(residue):
        # Every cycle is even, so the shortest cycle through any negative
        # edge is an NEC; no enumeration needed.
        ctx.stats.nec += 1
        nec = shortest_negative_cycle(residue)
        branches = _split_on(ctx, nec)
    else:
        survey = survey_cycles(residue, ctx.cycle_cap, stop_at_overlap=True)
        ctx.stats.positive += survey.positive
        ctx.stats.nec += survey.nec
        ctx.stats.noc += survey.noc
        if not survey.has_nec:
            # Odd cycles with no way to make any of their nodes True.
            return []
        if survey.overlap:
            # An odd cycle can only be satisfied from inside the component
            # through a node it shares with an even one: try that node True
            # first. The False branch is kept so that no world is lost; its
            # residue is surveyed again and yields the next shared node.
            node = survey.overlap[0]
            label = "NEC/NOC overlap " + _describe(ctx.graph, survey.nec_through[node])
            branches = [[(node, True, label)], [(node, False, label)]]
        else:
            branches = _split_on(ctx, survey.first_nec)
    ctx.stats.decisions += len(branches) - 1

    results = []
    for choice in branches:
        w2 = w.copy()
        for node, value, label in choice:
            w2.assume(node, value, label)
        residue2, _ = _settle(residue, w2)
        if w2.consistent:
            results.append((w2, residue2))
        else:
            ctx.stats.inconsistent += 1
    return results


def _violates_constraint(ctx: _Context, node: int, value: bool) -> bool:
    for e in ctx.graph.out_edges[node]:
        if ctx.graph.kind(e.dst) is NodeKind.CONSTRAINT and e.positive == value:
            return True
    return False


def reasoning_rec(graph: CondensedGraph, world: World, ctx: _Context,
                  active: Optional[set[int]] = None, depth: int = 0) -> Iterator[World]:
    """Solve ``graph`` under ``world``, yielding every complete world."""
    if active is None:
        active = set(graph.units)
    ctx.stats.max_depth = max(ctx.stats.max_depth, depth)
    if not active:
        yield world
        return

    roots = find_roots(graph, active)
    regular = World()
    virtual: list[list[World]] = []
    for root in roots:
        if not graph.is_virtual(root):
            value = world.values.get(root, False)
            if ctx.constraint_prune and _violates_constraint(ctx, root, value):
                ctx.stats.inconsistent += 1
                return
            regular.values[root] = value
            continue
        node = graph.virtual[root]
        worlds = []
        for broken, residue in break_cycle(node, world, ctx):
            for solved in reasoning_rec(condense(residue), broken, ctx, depth=depth + 1):
                worlds.append(solved.fragment(node.members))
        if not worlds:
            return
        virtual.append(worlds)

    root_nodes = [n for r in roots for n in graph.members(r)]
    rest = active.difference(roots)
    rest_nodes = {n for u in rest for n in graph.members(u)}
    for merged in merge_roots(regular, virtual):
        sub = world.copy()
        sub.update(merged)
        propagate(graph.base, sub, root_nodes, within=rest_nodes)
        if not sub.consistent:
            ctx.stats.inconsistent += 1
            continue
        yield from reasoning_rec(graph, sub, ctx, rest, depth + 1)


class Solver:
    """Graph-based answer set solver for one program.

    ``verify`` turns the stability check of each candidate on or off;
    ``constraint_prune`` enables the early constraint check on regular
    roots; ``cycle_cap`` bounds cycle enumeration per component.
    """

    def __init__(self, program: Program, *, verify: bool = True,
                 constraint_prune: bool = False,
                 cycle_cap: Optional[int] = DEFAULT_CYCLE_CAP):
        self.program = program
        self.graph = build_dependency_graph(program)
        self.verify = verify
        self.stats = SolverStats()
        self._ctx = _Context(self.graph, self.stats, cycle_cap, constraint_prune)

    def initial_world(self) -> World:
        return World(dict(self.graph.fixed))

    def worlds(self) -> Iterator[World]:
        """Complete, consistent worlds in search order (before verification)."""
        world = self.initial_world()
        for w in reasoning_rec(condense(self.graph), world, self._ctx):
            self.stats.worlds += 1
            assert len(w.values) == len(self.graph.nodes), "search left nodes unassigned"
            if not self._closed(w):
                self.stats.inconsistent += 1
                continue
            yield w

    def _closed(self, world: World) -> bool:
        # every effective edge must end in a True node
        vals = world.values
        return all(vals[e.dst] for e in self.graph.edges if e.positive == vals[e.src])

    def answer_set(self, world: World) -> AnswerSet:
        g = self.graph
        return AnswerSet.of(g.label(n) for n in g.literal_ids() if world.values.get(n))

    def models(self, max_models: Optional[int] = None) -> list[tuple[AnswerSet, World]]:
        """Distinct answer sets, sorted, each with the first world that produced it."""
        found: dict[AnswerSet, World] = {}
        for w in self.worlds():
            model = self.answer_set(w)
            if model in found:
                continue
            if self.verify and not verify_stable(self.program, model.atoms):
                self.stats.rejected += 1
                log.debug("rejected unstable candidate %s", model)
                continue
            found[model] = w
            if max_models is not None and len(found) >= max_models:
                break
        self.stats.models = len(found)
        return sorted(found.items(), key=lambda item: item[0])

    def solve(self, max_models: Optional[int] = None) -> list[AnswerSet]:
        return [model for model, _ in self.models(max_models)]


def solve(program: Program, *, max_models: Optional[int] = None, verify: bool = True,
          constraint_prune: bool = False,
          cycle_cap: Optional[int] = DEFAULT_CYCLE_CAP) -> list[AnswerSet]:
    """All answer sets of ``program``, sorted. An empty list means unsatisfiable."""
    solver = Solver(program, verify=verify, constraint_prune=constraint_prune,
                    cycle_cap=cycle_cap)
    return solver.solve(max_models)
