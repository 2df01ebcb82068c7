import numpy as np
import pytest
from hypothesis import settings, strategies as st

from circleop import Symbol

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(42)


@st.composite
def laurent(draw, max_degree=4, nonzero=False):
    """Laurent polynomial with small integer-ish complex coefficients."""
    lo = draw(st.integers(-max_degree, 0))
    hi = draw(st.integers(0, max_degree))
    parts = st.floats(-3, 3, allow_nan=False, allow_infinity=False)
    data = [complex(draw(parts), draw(parts)) for _ in range(hi - lo + 1)]
    s = Symbol(lo, data)
    if nonzero and s.is_zero:
        s = Symbol(0, [1.0])
    return s


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for r in sorted(RESULTS, key=lambda r: r.number):
        terminalreporter.write_line(r.line())
