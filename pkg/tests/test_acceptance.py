"""Acceptance table: one test per claim, each printing a PASS/FAIL line.

Failures here are real disagreements between a claim and the computation;
the witness printed with each line carries the numbers.
"""
import json

import pytest

from singergq.checks import CHECKS, run_check


@pytest.mark.parametrize("i", range(1, len(CHECKS) + 1), ids=[f.__name__ for f in CHECKS])
def test_claim(i):
    r = run_check(i)
    print(r.line())
    print(json.dumps(r.witness, sort_keys=True, default=str))
    assert r.passed, r.line()
