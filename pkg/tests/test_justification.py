import json

import pytest
from hypothesis import given, settings

from grasp import parse_program
from grasp.graph import NodeKind
from grasp.justification import (AtomNotFalse, AtomNotTrue, IncompleteWorld, Reason, UnknownAtom,
                                 effective_edges, justify, justify_absence, violations)
from grasp.solver import Solver, World

from conftest import load, programs


def first_model(text_or_program, index=0):
    program = parse_program(text_or_program) if isinstance(text_or_program, str) else text_or_program
    solver = Solver(program)
    answer, world = solver.models()[index]
    return solver.graph, world, answer


def labels(jg):
    return {(jg.label(e.src), jg.label(e.dst), e.sign.value, r.value) for e, r in jg.edges}


def test_fact_chain():
    g, w, _ = first_model("q. p :- q.")
    jg = justify(g, w, "p")
    assert labels(jg) == {("q", "p", "+", "true-through-positive")}
    assert jg.leaves == {g.atom_index["q"]: "fact"}


def test_default_false_leaf():
    g, w, _ = first_model("p :- not q.")
    jg = justify(g, w, "p")
    assert labels(jg) == {("q", "p", "-", "false-through-negative")}
    assert jg.leaves == {g.atom_index["q"]: "default-false"}


def test_coloring_shape():
    program = load("coloring4.lp")
    solver = Solver(program)
    target = {"blue(1)", "red(2)", "blue(3)", "green(4)"}
    ((answer, w),) = [(a, w) for a, w in solver.models() if set(a.atoms) == target]
    jg = justify(solver.graph, w, "blue(1)")
    (conj,) = [n for n in jg.nodes if solver.graph.kind(n) is NodeKind.CONJUNCTION]
    assert jg.nodes[conj] is False
    feeders = {jg.label(e.src): jg.nodes[e.src] for e, _ in jg.edges if e.dst == conj}
    assert feeders == {"red(1)": False, "green(1)": False}
    assert not violations(jg, w)
    dot = jg.to_dot()
    assert 'label="blue(1)", color=red, penwidth=2' in dot
    assert 'label="red(1)", color=black' in dot
    assert "xlabel=\"blue(1) :- not red(1), not green(1).\"" in dot


def test_even_loop_model_has_assumption():
    g, w, answer = first_model("p :- not q. q :- not p.")
    atom = answer.atoms[0]
    jg = justify(g, w, atom)
    assert not violations(jg, w)
    assert jg.assumptions


def test_effective_edge_examples():
    g, w, _ = first_model("p :- not q. r :- p. s :- not p.")
    eff = {(g.label(e.edge.src), g.label(e.edge.dst)): e.reason for e in effective_edges(g, w)}
    assert eff[("q", "p")] is Reason.FALSE_THROUGH_NEGATIVE
    assert eff[("p", "r")] is Reason.TRUE_THROUGH_POSITIVE
    assert ("p", "s") not in eff


def test_errors():
    g, w, _ = first_model("p :- not q.")
    with pytest.raises(AtomNotTrue):
        justify(g, w, "q")
    with pytest.raises(UnknownAtom):
        justify(g, w, "zzz")
    with pytest.raises(AtomNotFalse):
        justify_absence(g, w, "p")
    with pytest.raises(IncompleteWorld):
        justify(g, World({g.atom_index["p"]: True}), "p")
    with pytest.raises(IncompleteWorld):
        effective_edges(g, World())


def test_fact_absence_is_an_error():
    g, w, _ = first_model("p.")
    with pytest.raises(AtomNotFalse):
        justify_absence(g, w, "p")


def test_absence_positive_edge_blocked():
    g, w, _ = first_model("p :- q.")
    jg = justify_absence(g, w, "p")
    assert labels(jg) == {("q", "p", "+", "blocked")}
    assert jg.leaves[g.atom_index["q"]] == "default-false"


def test_absence_through_rule_body():
    g, w, _ = first_model("a. p :- a, b.")
    jg = justify_absence(g, w, "p")
    kinds = {r.value for _, r in jg.edges}
    assert kinds == {"blocked", "false-through-negative"}
    assert jg.nodes[g.atom_index["b"]] is False


def test_absence_of_odd_loop_member_after_external_fix():
    program = parse_program("p :- not q. q :- not r. r :- not p. q.")
    g, w, answer = first_model(program)
    assert set(answer.atoms) == {"q", "r"}
    jg = justify_absence(g, w, "p")
    assert labels(jg) == {("q", "p", "-", "blocked")}
    assert jg.leaves[g.atom_index["q"]] == "fact"


def test_json_schema():
    g, w, _ = first_model("a. p :- a, not q.")
    doc = justify(g, w, "p").to_json()
    assert doc["root"] == "p"
    assert {tuple(sorted(n)) for n in doc["nodes"]} == {("id", "kind", "label", "value")}
    assert all(set(e) == {"from", "to", "sign", "reason"} for e in doc["edges"])
    assert {leaf["kind"] for leaf in doc["leaves"]} == {"fact", "default-false"}
    json.loads(justify(g, w, "p").to_json_text())


def test_text_rendering():
    g, w, _ = first_model("a. p :- a, not q.")
    text = justify(g, w, "p").to_text()
    assert text.splitlines()[0] == "p [true]"
    assert "a [true] (fact)" in text
    assert "q [false] (default-false)" in text


def test_rendering_is_stable():
    g, w, _ = first_model(load("coloring4.lp"), 5)
    a = justify(g, w, "blue(2)") if w.values[g.atom_index["blue(2)"]] else justify_absence(g, w, "blue(2)")
    b = justify(g, w, "blue(2)") if w.values[g.atom_index["blue(2)"]] else justify_absence(g, w, "blue(2)")
    assert a.to_dot() == b.to_dot() and a.to_json_text() == b.to_json_text()


@settings(max_examples=150, deadline=None)
@given(programs())
def test_every_true_atom_is_justified(program):
    solver = Solver(program)
    for answer, world in solver.models():
        for e in effective_edges(solver.graph, world):
            assert world.values[e.edge.dst]
        for atom in program.atoms:
            if atom in answer:
                assert violations(justify(solver.graph, world, atom), world) == []
            else:
                justify_absence(solver.graph, world, atom)


def test_violations_detects_bad_leaf():
    g, w, _ = first_model("p :- not q.")
    jg = justify(g, w, "p")
    jg.leaves[g.atom_index["q"]] = "fact"
    assert violations(jg, w)
