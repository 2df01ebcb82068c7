"""The fourteen acceptance criteria, one test each, at their stated tolerances.

Each test prints a ``[PASS]``/``[FAIL]`` line; the lines are also collected and
repeated in the pytest terminal summary (see ``conftest.py``).
"""
import pytest

from circleop.acceptance import CRITERIA, run_criterion

RESULTS = []


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA],
                         ids=[f"{n:02d}-{title.replace(' ', '-')}" for n, title, _ in CRITERIA])
def test_criterion(number):
    result = run_criterion(number)
    RESULTS.append(result)
    print(result.line())
    assert result.passed, result.line()
