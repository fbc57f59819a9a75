import pytest
from hypothesis import given, settings

from grasp import parse_program, solve
from grasp.cycles import condense
from grasp.graph import Digraph, Edge, NodeKind, build_dependency_graph
from grasp.oracle import enumerate_answer_sets_bruteforce
from grasp.program import Sign
from grasp.solver import (Solver, SolverStats, World, _Context, break_cycle, find_roots,
                          merge_roots, propagate, reasoning_rec, remove_edges_for_value,
                          verify_stable)

from conftest import load, programs

POS, NEG = Sign.POS, Sign.NEG


def models(text, **kw):
    return [set(m.atoms) for m in solve(parse_program(text), **kw)]


def oracle(program):
    return [set(m.atoms) for m in enumerate_answer_sets_bruteforce(program)]


def labelled(graph, world):
    return {graph.label(n): v for n, v in world.values.items()
            if graph.kind(n) is NodeKind.LITERAL}


@pytest.mark.parametrize("text, expected", [
    ("p :- not q. q :- not p.", [{"p"}, {"q"}]),
    ("p :- not q. q :- not r. r :- not p.", []),
    ("p :- not q. q :- not r. r :- not p. q.", [{"q", "r"}]),
    ("p :- q, not r, not p.", [set()]),
    ("p :- q. q :- p.", [set()]),
    ("p :- not p.", []),
    ("p :- not p. p.", [{"p"}]),
    ("a. p :- a, not q. q :- not p.", [{"a", "p"}, {"a", "q"}]),
    ("a :- not c. c :- not b. b :- not a. b :- not d. d :- not b.", [{"a", "b"}]),
    ("x :- not y. y :- not x. a :- not a. a :- x. x :- a.", [{"a", "x"}]),
    ("p :- not q, not r, not p.", []),
    ("", [set()]),
    ("a. :- a.", []),
    (":- not a.", []),
])
def test_solve_examples(text, expected):
    assert models(text) == expected
    assert oracle(parse_program(text)) == expected


def test_coloring_has_18_models():
    program = load("coloring4.lp")
    assert len(solve(program)) == 18


@pytest.mark.parametrize("name", ["evenloop.lp", "oddloop.lp", "oddloop_fact.lp", "overlap.lp",
                                  "coloring4.lp", "birds.lp", "hamiltonian4.lp"])
def test_corpus_matches_oracle(name):
    program = load(name)
    assert solve(program) == enumerate_answer_sets_bruteforce(program)


# reasoning_rec and its pieces

def run(text):
    solver = Solver(parse_program(text))
    g = solver.graph
    ctx = _Context(g, SolverStats())
    return g, [labelled(g, w) for w in reasoning_rec(condense(g), solver.initial_world(), ctx)]


def test_reasoning_fact_chain():
    _, worlds = run("q. p :- q.")
    assert worlds == [{"q": True, "p": True}]


def test_reasoning_default_false_root():
    _, worlds = run("p :- not q.")
    assert worlds == [{"q": False, "p": True}]


def test_reasoning_outside_support():
    _, worlds = run("a. p :- a, not q. q :- not p.")
    assert sorted(sorted(k for k, v in w.items() if v) for w in worlds) == [["a", "p"], ["a", "q"]]


def test_find_roots():
    chain = condense(build_dependency_graph(parse_program("p :- q.")))
    assert find_roots(chain) == [1]
    two = condense(Digraph([0, 1], []))
    assert find_roots(two) == [0, 1]
    loop = condense(build_dependency_graph(parse_program("p :- not q. q :- not p.")))
    (root,) = find_roots(loop)
    assert loop.is_virtual(root)


def test_propagate_false_through_negative():
    g = Digraph([0, 1], [Edge(0, 1, NEG)])
    assert propagate(g, World({0: False})).values == {0: False, 1: True}


def test_propagate_false_does_not_cross_positive():
    g = Digraph([0, 1], [Edge(0, 1, POS)])
    assert propagate(g, World({0: False})).values == {0: False}


def test_propagate_into_constraint_is_inconsistent():
    q, c, f = range(3)
    g = Digraph(range(3), [Edge(q, c, POS), Edge(c, f, POS)])
    w = propagate(g, World({q: True, f: False}))
    assert not w.consistent


def test_propagate_cascades():
    g = Digraph([0, 1, 2], [Edge(0, 1, POS), Edge(1, 2, POS)])
    assert propagate(g, World({0: True})).values == {0: True, 1: True, 2: True}


def test_merge_roots():
    regular = World({0: True})
    a = [World({1: True}), World({1: False})]
    b = [World({2: True}), World({2: False})]
    merged = list(merge_roots(regular, [a, b]))
    assert len(merged) == 4
    assert [m.values for m in merged][0] == {0: True, 1: True, 2: True}
    assert list(merge_roots(regular, [a, []])) == []
    (only,) = merge_roots(regular, [])
    assert only.values == {0: True}


def test_remove_edges_for_true_node():
    a, n, b, c = range(4)
    g = Digraph(range(4), [Edge(a, n, POS), Edge(n, b, NEG), Edge(n, c, POS)])
    assert remove_edges_for_value(g, n, True).edges == (Edge(n, c, POS),)


def test_remove_edges_for_false_node():
    a, n, b, c = range(4)
    g = Digraph(range(4), [Edge(a, n, NEG), Edge(n, b, NEG), Edge(n, c, POS)])
    assert set(remove_edges_for_value(g, n, False).edges) == {Edge(n, b, NEG), Edge(a, n, NEG)}


def test_remove_edges_requires_value():
    with pytest.raises(AssertionError):
        remove_edges_for_value(Digraph([0], []), 0, None)


def broken(text):
    """Break the single component of ``text`` and finish each world's residue."""
    g = build_dependency_graph(parse_program(text))
    (v,) = condense(g).virtual.values()
    ctx = _Context(g, SolverStats())
    out = []
    for w, residue in break_cycle(v, World(dict(g.fixed)), ctx):
        out += [(done, residue) for done in reasoning_rec(condense(residue), w, ctx)]
    return g, out


def test_break_even_loop():
    g, worlds = broken("p :- not q. q :- not p.")
    assert sorted(sorted(labelled(g, w).items()) for w, _ in worlds) == \
        [[("p", False), ("q", True)], [("p", True), ("q", False)]]


def test_break_odd_loop():
    _, worlds = broken("p :- not q. q :- not r. r :- not p.")
    assert worlds == []


def test_break_overlap_keeps_shared_node_true_first():
    g, worlds = broken("a :- not c. c :- not b. b :- not a. b :- not d. d :- not b.")
    first, _ = worlds[0]
    vals = labelled(g, first)
    assert vals["b"] is True and vals["d"] is False
    assert g.atom_index["b"] in first.assumed


def test_break_positive_loop():
    g, worlds = broken("p :- q. q :- p.")
    ((w, residue),) = worlds
    assert labelled(g, w) == {"p": False, "q": False}
    assert not residue.edges


def test_verify_stable_examples():
    assert verify_stable(parse_program("p :- not q."), {"p"})
    assert not verify_stable(parse_program("p :- not q."), {"q"})
    assert not verify_stable(parse_program("p :- not q. q :- not p."), {"p", "q"})


def test_positive_scc_is_false():
    assert models("a :- b. b :- c. c :- a, b.") == [set()]


def test_nec_split_and_noc_only():
    assert len(models("p :- not q. q :- not p.")) == 2
    assert models("p :- not q. q :- not r. r :- not p.") == []


def test_max_models():
    assert len(solve(load("coloring4.lp"), max_models=3)) == 3


def test_stats_are_recorded():
    solver = Solver(load("evenloop.lp"))
    solver.solve()
    assert solver.stats.nec == 1 and solver.stats.decisions == 1
    assert solver.stats.worlds == 2 and solver.stats.models == 2


# properties against the oracle

@settings(max_examples=300, deadline=None)
@given(programs())
def test_solver_matches_oracle(program):
    assert solve(program) == enumerate_answer_sets_bruteforce(program)


@settings(max_examples=200, deadline=None)
@given(programs())
def test_constraint_prune_changes_nothing(program):
    assert solve(program, constraint_prune=True) == solve(program)


@settings(max_examples=200, deadline=None)
@given(programs())
def test_every_model_is_stable_and_worlds_bounded(program):
    solver = Solver(program)
    for model in solver.solve():
        assert verify_stable(program, model.atoms)
    assert solver.stats.worlds <= 2 ** solver.stats.decisions


@settings(max_examples=200, deadline=None)
@given(programs())
def test_adding_a_constraint_filters_models(program):
    from grasp.program import BodyLiteral, Program, Rule
    atom = program.atoms[0]
    constrained = Program(program.rules + (Rule(None, (BodyLiteral(atom),)),))
    expected = [m for m in solve(program) if atom not in m]
    assert solve(constrained) == expected


@settings(max_examples=100, deadline=None)
@given(programs())
def test_deterministic(program):
    assert [str(m) for m in solve(program)] == [str(m) for m in solve(program)]
