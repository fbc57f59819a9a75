import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from grasp import parse_program, solve
from grasp.graph import build_cnr_graph
from grasp.generator import GenConfig, SplitMix64, generate, render, stats
from grasp.oracle import enumerate_answer_sets_bruteforce
from grasp.program import Sign


def test_splitmix_reference_values():
    # first outputs for seed 0 of the published SplitMix64 reference
    rng = SplitMix64(0)
    assert [rng.next() for _ in range(3)] == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4,
                                               0x06C45D188009454F]


def test_splitmix_ranges():
    rng = SplitMix64(123)
    draws = [rng.below(7) for _ in range(2000)]
    assert set(draws) == set(range(7))
    assert all(0.0 <= rng.random() < 1.0 for _ in range(1000))


def test_same_seed_same_text():
    cfg = GenConfig(num_atoms=3, num_rules=2, seed=5)
    assert render(generate(cfg), cfg) == render(generate(cfg), cfg)


def test_different_seeds_differ():
    texts = {str(generate(GenConfig(seed=s))) for s in range(10)}
    assert len(texts) > 1


def test_no_negation():
    cfg = GenConfig(num_atoms=10, num_rules=30, negation_prob=0.0, seed=3)
    program = generate(cfg)
    assert "not" not in str(program)
    assert all(e.sign is Sign.POS for e in build_cnr_graph(program).edges)
    assert stats(program).noc == 0


def test_no_negation_single_literal_bodies_has_no_negative_cycles():
    cfg = GenConfig(num_atoms=8, num_rules=20, max_body_len=1, negation_prob=0.0, seed=1)
    report = stats(generate(cfg))
    assert report.nec == 0 and report.noc == 0


def test_seed_42_matches_oracle():
    program = generate(GenConfig(num_atoms=10, num_rules=15, negation_prob=0.5, seed=42))
    assert solve(program) == enumerate_answer_sets_bruteforce(program)


def test_atom_names_and_rule_count():
    program = generate(GenConfig(num_atoms=4, num_rules=9, seed=2))
    assert len(program.rules) == 9
    assert set(program.atoms) <= {"a0", "a1", "a2", "a3"}


def test_render_header_parses_as_comment():
    cfg = GenConfig(seed=9)
    text = render(generate(cfg), cfg)
    assert text.startswith("% generated: num_atoms=10")
    assert parse_program(text) == generate(cfg)


@pytest.mark.parametrize("kwargs", [
    {"num_rules": 0},
    {"max_body_len": 0},
    {"num_atoms": 2, "max_body_len": 3},
    {"negation_prob": 1.5},
    {"constraint_prob": -0.1},
    {"fact_fraction": 2},
    {"seed": -1},
])
def test_invalid_config(kwargs):
    with pytest.raises(ValueError):
        GenConfig(**kwargs)


def test_stats_examples():
    even = stats(parse_program("p :- not q. q :- not p."))
    odd = stats(parse_program("p :- not q. q :- not r. r :- not p."))
    assert (even.nec, even.noc) == (1, 0)
    assert (odd.nec, odd.noc) == (0, 1)
    assert even.rules == 2 and even.atoms == 2 and even.sccs == 1


def test_default_config_mixes_cycle_kinds():
    both = 0
    for seed in range(100):
        report = stats(generate(GenConfig(seed=seed)))
        both += report.nec > 0 and report.noc > 0
    assert both > 50


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.integers(1, 20), st.floats(0, 1), st.integers(0, 2 ** 64 - 1))
def test_round_trip(atoms, rules, neg, seed):
    cfg = GenConfig(num_atoms=atoms, num_rules=rules, max_body_len=min(3, atoms),
                    negation_prob=neg, seed=seed)
    program = generate(cfg)
    assert parse_program(render(program, cfg)) == program
