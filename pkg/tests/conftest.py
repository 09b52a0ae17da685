from fractions import Fraction

import pytest
from hypothesis import strategies as st

from framekit import GaussianRational, LaurentPoly, Mask, MaskSystem

fractions = st.builds(Fraction, st.integers(-16, 16), st.integers(1, 16))
gaussians = st.builds(GaussianRational, fractions, fractions)
nonzero_gaussians = gaussians.filter(bool)


@st.composite
def laurent_polys(draw, min_exp=-4, max_len=6, coeffs=gaussians):
    start = draw(st.integers(min_exp, 3))
    values = draw(st.lists(coeffs, max_size=max_len))
    return LaurentPoly.from_list(values, start)


nonzero_polys = laurent_polys().filter(bool)


@pytest.fixture
def haar():
    """Already-dual n=1 system: the Haar scaling and wavelet masks."""
    h = Fraction(1, 2)
    m0 = Mask(LaurentPoly({0: h, 1: h}), "haar")
    m1 = Mask(LaurentPoly({0: h, 1: -h}), "haar wavelet")
    return MaskSystem(m0, m0, (m1,), (m1,))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
