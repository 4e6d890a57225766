"""Acceptance gate: one criterion per test, with its time limit enforced."""

import pytest

from higman.acceptance import AcceptanceRun

# collected for the terminal summary written by conftest.py
LINES: list = []


@pytest.fixture(scope="module")
def acceptance():
    # criteria 1-3 populate the counters that criterion 4 reads
    return AcceptanceRun(seed=0)


CRITERIA = [
    "relator_soundness",
    "unit_exponent",
    "confluence",
    "termination",
    "linearity",
    "ideal_membership",
    "zappa_szep",
    "word_level",
    "magnus_jacobson",
    "exp_bijections",
]


@pytest.mark.parametrize("method", CRITERIA)
def test_criterion(acceptance, method):
    crit = getattr(acceptance, method)()
    within = crit.limit is None or crit.seconds < crit.limit
    line = crit.line() if within else crit.line().replace("[PASS]", "[FAIL]") + " over time limit"
    LINES.append(line)
    print(line)
    assert crit.passed, crit.detail
    assert within, f"{crit.seconds:.1f}s exceeds {crit.limit}s"
