from pathlib import Path

import pytest
from hypothesis import strategies as st

from grasp import parse_program
from grasp.program import BodyLiteral, Program, Rule, Sign

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def load(name: str) -> Program:
    return parse_program((CORPUS / name).read_text())


@pytest.fixture
def corpus():
    return CORPUS


@st.composite
def programs(draw, max_atoms=6, max_rules=8, max_body=3):
    """Small random ground programs, including facts and constraints."""
    n = draw(st.integers(1, max_atoms))
    atoms = [f"a{i}" for i in range(n)]
    rules = []
    for _ in range(draw(st.integers(1, max_rules))):
        kind = draw(st.sampled_from(["rule", "rule", "rule", "fact", "constraint"]))
        if kind == "fact":
            rules.append(Rule(draw(st.sampled_from(atoms))))
            continue
        size = draw(st.integers(1, min(max_body, n)))
        body_atoms = draw(st.lists(st.sampled_from(atoms), min_size=size, max_size=size, unique=True))
        body = tuple(BodyLiteral(a, draw(st.sampled_from([Sign.POS, Sign.NEG]))) for a in body_atoms)
        head = None if kind == "constraint" else draw(st.sampled_from(atoms))
        rules.append(Rule(head, body))
    return Program(tuple(rules))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[key])
