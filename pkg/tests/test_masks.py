from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import gaussians, laurent_polys
from framekit.algebra import COS2, ECOS, ESIN, MISC, ONE, SIN2, ZERO, I, LaurentPoly, ParseError, Z
from framekit.masks import (
    CenteredOddOrder,
    Mask,
    PreconditionViolated,
    SetupViolated,
    TimeCoeffs,
    binomial_bspline_mask,
    bspline_mask,
    check_setup,
    compute_m_alpha_beta,
    extract_lambdas,
    factor_cos,
    factor_sin,
    is_bessel_mask,
    mask_from_time_coeffs,
    necessary_conditions,
    time_coeffs_from_mask,
)

Q = Fraction
B2 = LaurentPoly({0: Q(1, 4), 1: Q(1, 2), 2: Q(1, 4)})


def b2_wavelet(d0, d1):
    return mask_from_time_coeffs(TimeCoeffs({0: d0, 1: d1 - d0, 2: -d1})).poly


# time coefficients --------------------------------------------------------------


def test_mask_from_time_coeffs():
    assert b2_wavelet(1, 0) == LaurentPoly({0: Q(1, 2), 1: Q(-1, 2)})
    assert mask_from_time_coeffs(TimeCoeffs({})).poly == ZERO
    c = TimeCoeffs({-2: Q(1, 4), -1: Q(1, 4), 0: Q(-1, 4), 1: Q(-1, 4)})
    assert mask_from_time_coeffs(c).poly == LaurentPoly({-2: Q(1, 8), -1: Q(1, 8), 0: Q(-1, 8), 1: Q(-1, 8)})


def test_cross_spline_wavelet_mask_expansion():
    # i exp(pi i g) sin(pi g) cos^2(pi g) written in z
    expected = (ESIN.conj() * COS2).scale(I)
    c = TimeCoeffs({-2: Q(1, 4), -1: Q(1, 4), 0: Q(-1, 4), 1: Q(-1, 4)})
    assert mask_from_time_coeffs(c).poly == expected


def test_time_coeffs_from_mask():
    assert time_coeffs_from_mask(LaurentPoly({-1: Q(1, 2), 1: Q(-1, 2)})).coeffs == {-1: 1, 1: -1}
    assert time_coeffs_from_mask(LaurentPoly({-1: Q(1, 2), 0: 1, 1: Q(-3, 2)})).coeffs == {-1: 1, 0: 2, 1: -3}


@given(laurent_polys())
def test_time_coeffs_round_trip(p):
    assert mask_from_time_coeffs(time_coeffs_from_mask(p)).poly == p


def test_time_coeffs_json():
    c = TimeCoeffs({0: "1/2", 3: "-i", 1: 0})
    data = c.to_json()
    assert data == {"coeffs": {"0": "1/2", "3": "-i"}}
    assert TimeCoeffs.from_json(data) == c
    with pytest.raises(ParseError):
        TimeCoeffs.from_json({"0": "1"})


def test_mask_json_accepts_bare_poly():
    m = Mask(B2, "B2")
    assert Mask.from_json(m.to_json()) == m
    assert Mask.from_json({"0": "1/4", "1": "1/2", "2": "1/4"}).poly == B2


# B-splines ------------------------------------------------------------------------


def test_bspline_masks():
    assert bspline_mask(1).poly == ECOS
    assert bspline_mask(2).poly == B2
    c4 = bspline_mask(4, centered=True).poly
    assert c4 == COS2 * COS2
    assert c4[0] == Q(6, 16)
    with pytest.raises(CenteredOddOrder):
        bspline_mask(3, centered=True)
    with pytest.raises(ValueError):
        bspline_mask(0)


@pytest.mark.parametrize("n", range(1, 9))
def test_bspline_mask_matches_binomial_oracle(n):
    assert bspline_mask(n).poly == binomial_bspline_mask(n)
    assert check_setup(bspline_mask(n))
    assert bspline_mask(n).poly.at_minus_one() == 0


@pytest.mark.parametrize("n", [2, 4, 6])
def test_centered_bspline_is_shifted_uncentered(n):
    assert bspline_mask(n, centered=True).poly == bspline_mask(n).poly.shift(-n // 2)


# predicates and factorizations --------------------------------------------------


def test_is_bessel_mask():
    assert is_bessel_mask(LaurentPoly({0: Q(1, 2), 1: Q(-1, 2)}))
    assert not is_bessel_mask(ONE)
    assert is_bessel_mask(ZERO)


def test_check_setup():
    assert check_setup(LaurentPoly({0: Q(1, 2), 2: Q(1, 2)}))
    assert not check_setup(LaurentPoly({0: Q(1, 2), 1: Q(-1, 2)}))


@pytest.mark.parametrize("d0, d1", [(1, 0), (Q(1, 2), Q(-1, 2)), (I, 3), (0, 1)])
def test_factor_sin_of_b2_wavelet(d0, d1):
    m1 = b2_wavelet(d0, d1)
    lam = factor_sin(m1)
    assert lam == LaurentPoly({0: d0, 1: d1}).scale(I)
    assert ESIN * lam == m1


def test_factor_sin_examples():
    f = Z * SIN2  # exp(-2 pi i g) sin^2
    assert f == LaurentPoly({0: Q(-1, 4), 1: Q(1, 2), 2: Q(-1, 4)})
    lam = factor_sin(f)
    assert ESIN * lam == f
    assert lam == LaurentPoly({0: -1, 1: 1}).scale(I / 2)
    assert factor_sin(ZERO) == ZERO
    with pytest.raises(PreconditionViolated):
        factor_sin(ONE + Z)


def test_factor_cos_examples():
    assert factor_cos(B2) == ECOS
    assert factor_cos(ECOS) == ONE
    assert factor_cos(LaurentPoly({0: Q(1, 2), 2: Q(-1, 2)})) == ONE - Z
    with pytest.raises(PreconditionViolated):
        factor_cos(ONE)


@settings(max_examples=300, deadline=None)
@given(laurent_polys())
def test_factorizations_round_trip(p):
    assert factor_sin(ESIN * p) == p
    assert factor_cos(ECOS * p) == p


# necessary conditions --------------------------------------------------------------


def test_necessary_conditions_worked_b2_pair():
    rep = necessary_conditions(B2, B2, b2_wavelet(1, 0), b2_wavelet(Q(1, 2), Q(-1, 2)))
    assert rep.all_pass
    assert rep.lam == ONE + COS2
    assert rep.lam.at_one() == 2
    assert SIN2 * rep.lam == ONE - B2.conj() * B2


def test_necessary_conditions_haar_like():
    b1 = ECOS
    m1 = ESIN.scale(I)
    rep = necessary_conditions(b1, b1, m1, m1)
    assert rep.all_pass and rep.lam == ONE


def test_necessary_conditions_reports_every_failure():
    rep = necessary_conditions(LaurentPoly({0: Q(3, 4), 1: Q(1, 4)}), B2, ONE, B2, require_setup=True)
    assert not rep.cond_a.passed and rep.cond_a.witnesses == (1, 1)
    assert not rep.cond_b.passed and rep.cond_b.witnesses == (Q(1, 2), 0)
    assert not rep.cond_c.passed and rep.lam is None
    data = rep.to_json()
    assert data["all_pass"] is False and data["cond_c"]["lambda"] is None


def test_necessary_conditions_setup():
    bad = LaurentPoly({0: Q(1, 2)})
    with pytest.raises(SetupViolated):
        necessary_conditions(bad, B2, ZERO, ZERO)
    rep = necessary_conditions(bad, B2, ZERO, ZERO, require_setup=False)
    assert not rep.setup_ok and not rep.all_pass


# defects -------------------------------------------------------------------------


def test_m_alpha_beta_cross_spline():
    m0 = ECOS
    mt0 = (ECOS**3).shift(-1)
    m1 = LaurentPoly({-2: Q(1, 8), -1: Q(1, 8), 0: Q(-1, 8), 1: Q(-1, 8)})
    mt1 = LaurentPoly({-1: Q(1, 2), 0: Q(-1, 2)})
    ma, mb = compute_m_alpha_beta(m0, mt0, m1, mt1)
    assert ma.poly == SIN2
    assert mb.poly == MISC
    assert extract_lambdas(ma, mb) == (ONE, ONE)


def test_m_alpha_beta_trivial():
    ma, mb = compute_m_alpha_beta(ONE, ONE, ZERO, ZERO)
    assert ma.poly == ZERO and mb.poly == -ONE


def test_m_alpha_beta_worked_b2_pair():
    ma, mb = compute_m_alpha_beta(B2, B2, b2_wavelet(1, 0), b2_wavelet(Q(1, 2), Q(-1, 2)))
    la, lb = extract_lambdas(ma, mb)
    # a quarter of (1+z)(z^-1+3) and (1+z)(z^-1-3)
    assert la == ((ONE + Z) * (Z**-1 + 3)).scale(Q(1, 4))
    assert lb == ((ONE + Z) * (Z**-1 - 3)).scale(Q(1, 4))
    assert ma.poly == SIN2 * la and mb.poly == MISC * lb


def test_extract_lambdas_zero():
    assert extract_lambdas(ZERO, ZERO) == (ZERO, ZERO)


@settings(max_examples=200, deadline=None)
@given(gaussians, gaussians, gaussians, gaussians)
def test_b2_defects_always_factor(d0, d1, dt0, dt1):
    ma, mb = compute_m_alpha_beta(B2, B2, b2_wavelet(d0, d1), b2_wavelet(dt0, dt1))
    la, lb = extract_lambdas(ma, mb)
    assert SIN2 * la == ma.poly and MISC * lb == mb.poly
