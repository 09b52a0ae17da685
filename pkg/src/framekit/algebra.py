"""Exact Gaussian-rational and Laurent-polynomial arithmetic.

Trigonometric polynomials are stored as Laurent polynomials in
``z = exp(-2*pi*i*gamma)``.  Every value here is immutable.
"""

from __future__ import annotations

import re
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Union

import numpy as np

__all__ = [
    "GaussianRational",
    "LaurentPoly",
    "ParseError",
    "NotDivisible",
    "BothZero",
    "parse_gaussian",
    "lp_add",
    "lp_mul",
    "lp_conj",
    "lp_half_shift",
    "lp_eval_exact",
    "lp_eval_float",
    "lp_divide_exact",
    "lp_gcd",
    "unit_quotient",
    "Z",
    "ONE",
    "ZERO",
    "SIN2",
    "COS2",
    "ESIN",
    "ECOS",
    "MISC",
    "SINCOS",
]


class ParseError(ValueError):
    """Raised when text cannot be read as an exact Gaussian rational."""


class NotDivisible(ArithmeticError):
    """Exact division left a nonzero remainder."""


class BothZero(ValueError):
    """gcd(0, 0) is undefined."""


Number = Union[int, Fraction, "GaussianRational"]


class GaussianRational:
    """Complex number ``re + im*i`` with rational parts."""

    __slots__ = ("_re", "_im")

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0):
        if isinstance(re, float) or isinstance(im, float):
            raise TypeError("floats are not exact; pass int, Fraction or a string")
        self._re = Fraction(re)
        self._im = Fraction(im)

    @property
    def re(self) -> Fraction:
        return self._re

    @property
    def im(self) -> Fraction:
        return self._im

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, str):
            return parse_gaussian(value)
        raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")

    def conj(self) -> "GaussianRational":
        return GaussianRational(self._re, -self._im)

    def abs2(self) -> Fraction:
        return self._re * self._re + self._im * self._im

    def is_zero(self) -> bool:
        return not self._re and not self._im

    def is_real(self) -> bool:
        return not self._im

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self._re + o._re, self._im + o._im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self._re, -self._im)

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational(self._re - o._re, self._im - o._im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self._re, self._im, o._re, o._im
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        n = self.abs2()
        if not n:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(self._re / n, -self._im / n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result, base = GaussianRational(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except (TypeError, ParseError):
            return NotImplemented
        return self._re == o._re and self._im == o._im

    def __hash__(self):
        if not self._im:
            return hash(self._re)
        return hash((self._re, self._im))

    def __complex__(self):
        return complex(float(self._re), float(self._im))

    def __str__(self):
        return format_gaussian(self)

    def __repr__(self):
        return f"GaussianRational('{self}')"


I = GaussianRational(0, 1)


def _fmt_fraction(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_gaussian(x: GaussianRational) -> str:
    """Canonical text form, e.g. ``"1/2"``, ``"-3*i"``, ``"1/2-3/4*i"``."""
    re_, im_ = x.re, x.im
    if not im_:
        return _fmt_fraction(re_)
    if im_ == 1:
        im_txt = "i"
    elif im_ == -1:
        im_txt = "-i"
    else:
        im_txt = f"{_fmt_fraction(im_)}*i"
    if not re_:
        return im_txt
    if im_txt.startswith("-"):
        return f"{_fmt_fraction(re_)}{im_txt}"
    return f"{_fmt_fraction(re_)}+{im_txt}"


_NUM = r"(?:\d+/\d+|\d+\.\d*|\.\d+|\d+)"
_TERM = re.compile(rf"([+-]?)({_NUM})?(\*?i)?")


def _parse_number(txt: str) -> Fraction:
    if "/" in txt:
        num, den = txt.split("/")
        if int(den) == 0:
            raise ParseError(f"zero denominator in {txt!r}")
        return Fraction(int(num), int(den))
    if "." in txt:
        q = Fraction(txt)
        d = q.denominator
        if d & (d - 1):
            raise ParseError(f"decimal {txt!r} is not an exact dyadic rational")
        return q
    return Fraction(int(txt))


def parse_gaussian(text: str) -> GaussianRational:
    """Read a Gaussian rational.

    Accepts integers, ``p/q``, exact dyadic decimals such as ``0.5`` and sums of
    real and ``*i`` terms (``"1/2-3/4*i"``, ``"-i"``, ``"2i"``).  Anything else,
    including irrational notation, raises :class:`ParseError`.
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    # whitespace is allowed only around the + and - operators
    s = re.sub(r"\s*([+-])\s*", r"\1", text.strip())
    if any(ch.isspace() for ch in s):
        raise ParseError(f"stray whitespace in {text!r}")
    if not s:
        raise ParseError("empty coefficient")
    re_, im_ = Fraction(0), Fraction(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ParseError(f"cannot parse coefficient {text!r}")
        sign, num, imag = m.groups()
        if pos > 0 and not sign:
            raise ParseError(f"missing operator in {text!r}")
        if num is None and imag == "*i":
            raise ParseError(f"dangling '*' in {text!r}")
        value = _parse_number(num) if num is not None else Fraction(1)
        if sign == "-":
            value = -value
        if imag:
            im_ += value
        else:
            re_ += value
        pos = m.end()
    return GaussianRational(re_, im_)


def _coef(value) -> GaussianRational:
    if isinstance(value, str):
        return parse_gaussian(value)
    return GaussianRational.coerce(value)


class LaurentPoly:
    """Finite sum ``sum_n a_n z**n`` with Gaussian-rational ``a_n``.

    Zero coefficients are never stored, so equality is structural and the zero
    polynomial has empty support.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Number | str] | None = None):
        c = {}
        for k, v in (coeffs or {}).items():
            g = _coef(v)
            if g:
                c[int(k)] = g
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def const(cls, value) -> "LaurentPoly":
        return cls({0: value})

    @classmethod
    def monomial(cls, value, exponent: int) -> "LaurentPoly":
        return cls({exponent: value})

    @classmethod
    def from_list(cls, values: Iterable, start: int = 0) -> "LaurentPoly":
        """Coefficients listed by ascending exponent, beginning at ``start``."""
        return cls({start + k: v for k, v in enumerate(values)})

    @property
    def coeffs(self) -> Mapping[int, GaussianRational]:
        return MappingProxyType(self._c)

    def __getitem__(self, n: int) -> GaussianRational:
        return self._c.get(n, GaussianRational(0))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    @property
    def min_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return min(self._c)

    @property
    def max_exp(self) -> int:
        if not self._c:
            raise ValueError("zero polynomial has no exponents")
        return max(self._c)

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def is_real_on_circle(self) -> bool:
        return self.conj() == self

    def has_real_coeffs(self) -> bool:
        return all(v.is_real() for v in self._c.values())

    # ring operations -----------------------------------------------------

    def __add__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            s = c[k] + v if k in c else v
            if s:
                c[k] = s
            else:
                c.pop(k, None)
        return LaurentPoly._raw(c)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        c: dict[int, GaussianRational] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                k = i + j
                c[k] = c[k] + a * b if k in c else a * b
        return LaurentPoly._raw({k: v for k, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if not self.is_monomial():
                raise NotDivisible("only monomials are invertible")
            (k, v), = self._c.items()
            return LaurentPoly({-k * (-n): v.inverse() ** (-n)})
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, factor) -> "LaurentPoly":
        f = GaussianRational.coerce(factor)
        return LaurentPoly._raw({k: v * f for k, v in self._c.items()}) if f else ZERO

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``z**k``."""
        return LaurentPoly._raw({n + k: v for n, v in self._c.items()})

    def __eq__(self, other):
        other = _as_poly(other)
        if other is None:
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    # involutions ---------------------------------------------------------

    def conj(self) -> "LaurentPoly":
        """Complex conjugate on the unit circle: a_n z^n -> conj(a_n) z^-n."""
        return LaurentPoly._raw({-k: v.conj() for k, v in self._c.items()})

    def half_shift(self) -> "LaurentPoly":
        """gamma -> gamma + 1/2, i.e. z -> -z."""
        return LaurentPoly._raw({k: (-v if k & 1 else v) for k, v in self._c.items()})

    # evaluation ----------------------------------------------------------

    def at_one(self) -> GaussianRational:
        """Value at gamma = 0."""
        return sum(self._c.values(), GaussianRational(0))

    def at_minus_one(self) -> GaussianRational:
        """Value at gamma = 1/2."""
        return sum((-v if k & 1 else v for k, v in self._c.items()), GaussianRational(0))

    def __call__(self, gamma):
        return lp_eval_float(self, gamma)

    # serialization -------------------------------------------------------

    def to_json(self) -> dict[str, str]:
        return {str(k): format_gaussian(self._c[k]) for k in sorted(self._c)}

    @classmethod
    def from_json(cls, data: Mapping) -> "LaurentPoly":
        if not isinstance(data, Mapping):
            raise ParseError("polynomial must be a JSON object of exponent -> coefficient")
        out = {}
        for k, v in data.items():
            try:
                exp = int(k)
            except (TypeError, ValueError):
                raise ParseError(f"bad exponent {k!r}") from None
            if isinstance(v, bool) or not isinstance(v, (str, int)):
                raise ParseError(f"coefficient {v!r} must be a string or integer")
            out[exp] = parse_gaussian(v) if isinstance(v, str) else GaussianRational(v)
        return cls(out)

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for k in sorted(self._c):
            c = format_gaussian(self._c[k])
            if k == 0:
                parts.append(c)
            else:
                parts.append(f"({c})*z^{k}")
        return " + ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self.to_json()})"


def _as_poly(x) -> LaurentPoly | None:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, (int, Fraction, GaussianRational)):
        return LaurentPoly.const(x)
    return None


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
Z = LaurentPoly.monomial(1, 1)

_Q = Fraction
#: sin^2(pi*gamma)
SIN2 = LaurentPoly({-1: _Q(-1, 4), 0: _Q(1, 2), 1: _Q(-1, 4)})
#: cos^2(pi*gamma)
COS2 = LaurentPoly({-1: _Q(1, 4), 0: _Q(1, 2), 1: _Q(1, 4)})
#: exp(-pi*i*gamma) * sin(pi*gamma) = (1 - z) / (2i)
ESIN = LaurentPoly({0: GaussianRational(0, _Q(-1, 2)), 1: GaussianRational(0, _Q(1, 2))})
#: exp(-pi*i*gamma) * cos(pi*gamma) = (1 + z) / 2
ECOS = LaurentPoly({0: _Q(1, 2), 1: _Q(1, 2)})
#: -i * sin(pi*gamma) * cos(pi*gamma) = (z - 1/z) / 4
MISC = LaurentPoly({-1: _Q(-1, 4), 1: _Q(1, 4)})
#: sin(pi*gamma) * cos(pi*gamma) = (1/z - z) / (4i)
SINCOS = MISC.scale(I)


# functional surface ------------------------------------------------------

def lp_add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def lp_mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def lp_conj(p: LaurentPoly) -> LaurentPoly:
    return p.conj()


def lp_half_shift(p: LaurentPoly) -> LaurentPoly:
    return p.half_shift()


def lp_eval_exact(p: LaurentPoly, point: str) -> GaussianRational:
    """Exact value at ``point`` = ``"gamma_0"`` (z=1) or ``"gamma_half"`` (z=-1)."""
    if point in ("gamma_0", 0):
        return p.at_one()
    if point in ("gamma_half", "1/2"):
        return p.at_minus_one()
    raise ValueError(f"unknown evaluation point {point!r}")


def lp_eval_float(p: LaurentPoly, gamma):
    """Evaluate at real ``gamma`` (scalar or array) in double precision.

    Nonnegative and negative exponents are summed by separate Horner passes in
    ``w = exp(-2 pi i gamma)`` and ``conj(w)``.
    """
    g = np.asarray(gamma, dtype=float)
    w = np.exp(-2j * np.pi * g)
    out = np.zeros(g.shape, dtype=complex)
    if p._c:
        lo, hi = min(p._c), max(p._c)
        if hi >= 0:
            acc = np.zeros(g.shape, dtype=complex)
            for n in range(hi, -1, -1):
                acc = acc * w + complex(p[n])
            out = out + acc
        if lo < 0:
            wi = np.conj(w)
            acc = np.zeros(g.shape, dtype=complex)
            for n in range(lo, 0):
                acc = (acc + complex(p[n])) * wi
            out = out + acc
    return out[()] if out.ndim == 0 else out


# division and gcd ----------------------------------------------------------

def _dense(p: LaurentPoly) -> tuple[int, list[GaussianRational]]:
    """Return ``(lowest exponent, ascending coefficient list)``."""
    lo, hi = p.min_exp, p.max_exp
    return lo, [p[n] for n in range(lo, hi + 1)]


def _poly_divmod(num: list, den: list) -> tuple[list, list]:
    """Long division of ascending coefficient lists over the field."""
    num = list(num)
    dn = len(den) - 1
    lead_inv = den[-1].inverse()
    if len(num) - 1 < dn:
        return [], num
    quot = [GaussianRational(0)] * (len(num) - dn)
    for i in range(len(num) - 1 - dn, -1, -1):
        c = num[i + dn] * lead_inv
        quot[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] = num[i + j] - c * d
    rem = num[:dn]
    while rem and not rem[-1]:
        rem.pop()
    return quot, rem


def lp_divide_exact(p: LaurentPoly, d: LaurentPoly) -> LaurentPoly:
    """Return ``q`` with ``q * d == p``; raise :class:`NotDivisible` otherwise."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if p.is_zero():
        return ZERO
    plo, pc = _dense(p)
    dlo, dc = _dense(d)
    quot, rem = _poly_divmod(pc, dc)
    if rem or not quot:
        raise NotDivisible(f"{d} does not divide {p}")
    return LaurentPoly.from_list(quot, plo - dlo)


def _monic(c: list) -> list:
    inv = c[-1].inverse()
    return [x * inv for x in c]


def lp_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Greatest common divisor, normalized to lowest exponent 0 and a monic top term."""
    if p.is_zero() and q.is_zero():
        raise BothZero("gcd of two zero polynomials")
    a = _dense(p)[1] if p else []
    b = _dense(q)[1] if q else []
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    return LaurentPoly.from_list(_monic(a))


def unit_quotient(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly | None:
    """The Laurent unit ``u = c*z**k`` with ``p == u*q``, or None if there is none."""
    if p.is_zero() or q.is_zero():
        return None
    try:
        u = lp_divide_exact(p, q)
    except NotDivisible:
        return None
    return u if u.is_monomial() else None
