"""Refinement and wavelet masks.

A wavelet ``psi(x) = sum_k c_k phi(2x - k)`` has the mask
``m(z) = (1/2) sum_k c_k z**k`` with ``z = exp(-2 pi i gamma)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from .algebra import (
    COS2,
    ECOS,
    ESIN,
    MISC,
    ONE,
    SIN2,
    ZERO,
    GaussianRational,
    LaurentPoly,
    NotDivisible,
    ParseError,
    lp_divide_exact,
    parse_gaussian,
)

HALF = Fraction(1, 2)


class PreconditionViolated(ValueError):
    pass


class SetupViolated(ValueError):
    """The refinement mask does not satisfy m0(0) = 1."""


class CenteredOddOrder(ValueError):
    pass


@dataclass(frozen=True)
class Mask:
    poly: LaurentPoly
    label: str = ""

    def to_json(self) -> dict:
        return {"label": self.label, "poly": self.poly.to_json()}

    @classmethod
    def from_json(cls, data) -> "Mask":
        if isinstance(data, Mapping) and "poly" in data:
            label = data.get("label", "")
            if not isinstance(label, str):
                raise ParseError("mask label must be a string")
            return cls(LaurentPoly.from_json(data["poly"]), label)
        return cls(LaurentPoly.from_json(data))


@dataclass(frozen=True)
class TimeCoeffs:
    """Translate coefficients ``c_k`` of ``psi(x) = sum_k c_k phi(2x - k)``."""

    coeffs: Mapping[int, GaussianRational] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, v in dict(self.coeffs).items():
            g = parse_gaussian(v) if isinstance(v, str) else GaussianRational.coerce(v)
            if g:
                clean[int(k)] = g
        object.__setattr__(self, "coeffs", clean)

    def to_json(self) -> dict:
        return {"coeffs": {str(k): str(self.coeffs[k]) for k in sorted(self.coeffs)}}

    @classmethod
    def from_json(cls, data) -> "TimeCoeffs":
        if not isinstance(data, Mapping) or "coeffs" not in data:
            raise ParseError('time coefficients must look like {"coeffs": {...}}')
        return cls({int(k): v for k, v in LaurentPoly.from_json(data["coeffs"]).coeffs.items()})


def _poly(m) -> LaurentPoly:
    return m.poly if isinstance(m, Mask) else m


def mask_from_time_coeffs(c: TimeCoeffs, label: str = "") -> Mask:
    return Mask(LaurentPoly(c.coeffs).scale(HALF), label)


def time_coeffs_from_mask(m) -> TimeCoeffs:
    return TimeCoeffs({k: v * 2 for k, v in _poly(m).coeffs.items()})


def bspline_mask(order: int, centered: bool = False) -> Mask:
    """Mask of the B-spline of the given order.

    The uncentered spline lives on ``[0, order]`` and has mask ``((1+z)/2)**order``.
    The centered variant (even orders only) is ``cos(pi*gamma)**order``.
    """
    if order < 1:
        raise ValueError("B-spline order must be >= 1")
    if centered:
        if order % 2:
            raise CenteredOddOrder(f"centered B-spline needs an even order, got {order}")
        return Mask(COS2 ** (order // 2), f"B{order} centered")
    return Mask(ECOS**order, f"B{order}")


def binomial_bspline_mask(order: int) -> LaurentPoly:
    """``2**-order * sum_k C(order, k) z**k``; same polynomial as ``bspline_mask``."""
    return LaurentPoly({k: Fraction(comb(order, k), 2**order) for k in range(order + 1)})


def is_bessel_mask(m) -> bool:
    """A wavelet mask generates a Bessel system exactly when it vanishes at gamma = 0."""
    return _poly(m).at_one().is_zero()


def check_setup(m0) -> bool:
    return _poly(m0).at_one() == 1


def factor_sin(f) -> LaurentPoly:
    """Split off ``exp(-pi i gamma) sin(pi gamma)``: return L with f = ESIN * L."""
    p = _poly(f)
    if p.at_one():
        raise PreconditionViolated("f(0) != 0, so f has no sin(pi*gamma) factor")
    return lp_divide_exact(p, ESIN)


def factor_cos(g) -> LaurentPoly:
    """Split off ``exp(-pi i gamma) cos(pi gamma)``: return L with g = ECOS * L."""
    p = _poly(g)
    if p.at_minus_one():
        raise PreconditionViolated("g(1/2) != 0, so g has no cos(pi*gamma) factor")
    return lp_divide_exact(p, ECOS)


@dataclass(frozen=True)
class Condition:
    passed: bool
    witnesses: tuple[GaussianRational, ...] = ()

    def to_json(self) -> dict:
        return {"pass": self.passed, "witnesses": [str(w) for w in self.witnesses]}


@dataclass(frozen=True)
class NecessaryReport:
    setup_ok: bool
    cond_a: Condition
    cond_b: Condition
    cond_c: Condition
    lam: LaurentPoly | None

    @property
    def all_pass(self) -> bool:
        return self.setup_ok and self.cond_a.passed and self.cond_b.passed and self.cond_c.passed

    def to_json(self) -> dict:
        c = self.cond_c.to_json()
        c["lambda"] = None if self.lam is None else self.lam.to_json()
        return {
            "setup_ok": self.setup_ok,
            "cond_a": self.cond_a.to_json(),
            "cond_b": self.cond_b.to_json(),
            "cond_c": c,
            "all_pass": self.all_pass,
        }


def necessary_conditions(m0, mt0, m1, mt1, *, require_setup: bool = True) -> NecessaryReport:
    """Evaluate the three necessary conditions for dual MEP wavelet frames.

    (a) ``m1(0) = mt1(0) = 0``; (b) ``m0(1/2) = mt0(1/2) = 0``; (c)
    ``1 - conj(m0) mt0 = sin^2(pi gamma) * Lambda`` for a trigonometric
    polynomial ``Lambda``.  All three are reported even when an earlier one
    fails.  With ``require_setup`` a refinement mask that does not sum to 1
    raises :class:`SetupViolated`; otherwise it is only flagged.
    """
    m0, mt0, m1, mt1 = map(_poly, (m0, mt0, m1, mt1))
    setup_ok = check_setup(m0) and check_setup(mt0)
    if require_setup and not setup_ok:
        raise SetupViolated(f"m0(0) = {m0.at_one()}, mt0(0) = {mt0.at_one()}; both must be 1")

    a_vals = (m1.at_one(), mt1.at_one())
    b_vals = (m0.at_minus_one(), mt0.at_minus_one())
    defect = ONE - m0.conj() * mt0
    try:
        lam = lp_divide_exact(defect, SIN2)
    except NotDivisible:
        lam = None
    return NecessaryReport(
        setup_ok=setup_ok,
        cond_a=Condition(not any(a_vals), a_vals),
        cond_b=Condition(not any(b_vals), b_vals),
        cond_c=Condition(lam is not None, ()),
        lam=lam,
    )


def compute_m_alpha_beta(m0, mt0, m1, mt1) -> tuple[Mask, Mask]:
    """Defects that the added generators must reproduce.

    ``Ma = 1 - conj(m0) mt0 - conj(m1) mt1`` and
    ``Mb = -conj(m0) mt0(.+1/2) - conj(m1) mt1(.+1/2)``.
    """
    m0, mt0, m1, mt1 = map(_poly, (m0, mt0, m1, mt1))
    c0, c1 = m0.conj(), m1.conj()
    ma = ONE - c0 * mt0 - c1 * mt1
    mb = -(c0 * mt0.half_shift()) - c1 * mt1.half_shift()
    return Mask(ma, "M_alpha"), Mask(mb, "M_beta")


def extract_lambdas(ma, mb) -> tuple[LaurentPoly, LaurentPoly]:
    """Quotients with ``Ma = SIN2 * La`` and ``Mb = MISC * Lb``."""
    ma, mb = _poly(ma), _poly(mb)
    la = lp_divide_exact(ma, SIN2) if ma else ZERO
    lb = lp_divide_exact(mb, MISC) if mb else ZERO
    return la, lb
