import numpy as np
import pytest
from hypothesis import settings, strategies as st

from xwitness.multiindex import PartySet
from xwitness.witness import construct_optimal
from xwitness.xcore import XMatrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def w3():
    """The three-qubit optimal witness with -1 at the corner of 000."""
    return construct_optimal(3, "000", np.pi, 1.0, 1.0)


@st.composite
def xmatrices(draw, n=None, nonneg=False, role="generic", max_n=4):
    n = draw(st.integers(1, max_n)) if n is None else n
    m = 1 << (n - 1)
    lo = 0.0 if nonneg else -3.0
    diag = st.floats(lo, 3.0, allow_nan=False, allow_infinity=False)
    part = st.floats(-3.0, 3.0, allow_nan=False, allow_infinity=False)
    s = draw(st.lists(diag, min_size=m, max_size=m))
    t = draw(st.lists(diag, min_size=m, max_size=m))
    re = draw(st.lists(part, min_size=m, max_size=m))
    im = draw(st.lists(part, min_size=m, max_size=m))
    return XMatrix(n, s, t, np.array(re) + 1j * np.array(im), role)


@st.composite
def subsets(draw, n):
    return PartySet(n, draw(st.integers(0, (1 << n) - 1)))


_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Call with (number, passed, detail); the line is printed at session end."""
    def record(number: int, passed: bool, detail: str) -> None:
        _ACCEPTANCE[number] = (bool(passed), detail)
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'} ({detail})")
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
