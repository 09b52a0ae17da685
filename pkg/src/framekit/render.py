"""Dyadic-grid sampling of scaling functions and wavelets, and frame reconstruction.

Everything here is floating point.  A :class:`SampledFunction` at level ``J``
holds values at ``x = (start + i) / 2**J`` and is zero elsewhere.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from pathlib import Path

import numpy as np

from .algebra import lp_eval_float
from .masks import SetupViolated, _poly, check_setup, time_coeffs_from_mask

DEFAULT_LEVEL = 8
DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 30
DEFAULT_JMIN = -6
DEFAULT_JMAX = 8
DEFAULT_SAMPLES = 1024


class NonConvergence(UserWarning):
    pass


class LevelMismatch(ValueError):
    pass


class ComplexMask(ValueError):
    pass


@dataclass
class SampledFunction:
    level: int
    start: int
    samples: np.ndarray
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = np.asarray(self.samples)
        if not np.iscomplexobj(self.samples):
            self.samples = self.samples.astype(float)

    @property
    def step(self) -> float:
        return 2.0 ** -self.level

    @property
    def stop(self) -> int:
        return self.start + len(self.samples)

    @property
    def x(self) -> np.ndarray:
        return (self.start + np.arange(len(self.samples))) * self.step

    def bounds(self) -> tuple[float, float]:
        """Real-line interval covered by the stored samples."""
        return self.start * self.step, (self.stop - 1) * self.step

    def take(self, idx: np.ndarray) -> np.ndarray:
        """Samples at absolute grid indices ``idx``; zero outside the stored range."""
        idx = np.asarray(idx)
        rel = idx - self.start
        ok = (rel >= 0) & (rel < len(self.samples))
        out = np.zeros(idx.shape, dtype=self.samples.dtype)
        out[ok] = self.samples[rel[ok]]
        return out

    def at(self, x: float):
        """Value at a grid point ``x``."""
        i = x * 2**self.level
        if i != int(i):
            raise ValueError(f"{x} is not on the level-{self.level} grid")
        return self.take(np.array([int(i)]))[0]

    def inner(self, other: "SampledFunction") -> complex | float:
        """Riemann-sum inner product ``<self, other>`` on the common grid."""
        if other.level != self.level:
            raise LevelMismatch("inner product needs a common level")
        lo, hi = max(self.start, other.start), min(self.stop, other.stop)
        if hi <= lo:
            return 0.0
        idx = np.arange(lo, hi)
        return np.sum(self.take(idx) * np.conj(other.take(idx))) * self.step

    def norm(self) -> float:
        return float(np.sqrt(abs(self.inner(self))))

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            if np.iscomplexobj(self.samples):
                w.writerow(["x", "value", "value_imag"])
                for x, v in zip(self.x, self.samples):
                    w.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])
            else:
                w.writerow(["x", "value"])
                for x, v in zip(self.x, self.samples):
                    w.writerow([repr(float(x)), repr(float(v))])


def _real_taps(m) -> tuple[int, np.ndarray]:
    p = _poly(m)
    if not p.has_real_coeffs():
        raise ComplexMask("cascade needs a mask with real coefficients")
    lo, hi = p.min_exp, p.max_exp
    return lo, np.array([float(p[k].re) for k in range(lo, hi + 1)])


def _two_scale(prev: SampledFunction, lo: int, taps: np.ndarray, out_level: int, start: int, n: int):
    """``2 * sum_k a_k prev(2x - k)`` at ``n`` points of level ``out_level`` from ``start``."""
    shift = out_level - prev.level  # 0 for a cascade step, 1 for refinement
    i = start + np.arange(n)
    base = i * (2 ** (1 - shift))
    out = np.zeros(n)
    step = 2**prev.level
    for j, a in enumerate(taps):
        if a:
            out += a * prev.take(base - (lo + j) * step)
    return 2.0 * out


def cascade(m0, level: int = DEFAULT_LEVEL, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SampledFunction:
    """Scaling function of ``m0`` by fixed-point iteration on the level-``level`` grid.

    Starts from a unit box placed at the first moment of ``phi`` and iterates
    ``phi(x) <- 2 sum_k a_k phi(2x - k)`` until the sup-norm change drops to
    ``tol``.  Hitting ``max_iter`` first emits :class:`NonConvergence` and
    records ``converged=False`` in ``info``.
    """
    p = _poly(m0)
    if not check_setup(p):
        raise SetupViolated(f"m0(0) = {p.at_one()}, expected 1")
    lo, taps = _real_taps(p)
    hi = lo + len(taps) - 1
    scale = 2**level
    start = lo * scale
    n = (hi - lo) * scale + 1
    idx = start + np.arange(n)
    # unit box centred on the first moment sum_k k a_k of phi, value 1/2 at its jumps
    c0 = int(round((float(np.dot(np.arange(lo, hi + 1), taps)) - 0.5) * scale))
    box = ((idx >= c0) & (idx <= c0 + scale)).astype(float)
    box[(idx == c0) | (idx == c0 + scale)] = 0.5
    phi = SampledFunction(level, start, box)
    change = np.inf
    it = 0
    while it < max_iter:
        it += 1
        new = _two_scale(phi, lo, taps, level, start, n)
        change = float(np.max(np.abs(new - phi.samples)))
        phi = SampledFunction(level, start, new)
        if change <= tol:
            break
    converged = change <= tol
    phi.info = {"iterations": it, "converged": converged, "change": change}
    if not converged:
        warnings.warn(
            NonConvergence(f"cascade stopped after {it} iterations with change {change:.3e} > {tol:.1e}"),
            stacklevel=2,
        )
    return phi


def refine(phi: SampledFunction, m0, levels: int = 1) -> SampledFunction:
    """Exact dyadic refinement of a refinable function through its two-scale relation."""
    lo, taps = _real_taps(m0)
    hi = lo + len(taps) - 1
    for _ in range(levels):
        out_level = phi.level + 1
        scale = 2**out_level
        # support of the result is contained in [lo, hi] and in the refined support of phi
        a = max(lo * scale, 2 * phi.start)
        b = min(hi * scale, 2 * (phi.stop - 1))
        phi = SampledFunction(out_level, a, _two_scale(phi, lo, taps, out_level, a, b - a + 1), dict(phi.info))
    return phi


def bspline_exact(order: int, level: int, shift: int = 0) -> SampledFunction:
    """Samples of ``B_order(x + shift)`` from the truncated-power formula, in exact arithmetic.

    Jumps are sampled at the mean of the one-sided limits, so ``B_1`` is 1/2 at 0 and 1.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    scale = 2**level
    n = order * scale + 1
    start = -shift * scale
    inv_fact = Fraction(1, factorial(order - 1))
    vals = np.empty(n)
    for i in range(n):
        t = Fraction(i, scale)  # argument of B_order
        s = Fraction(0)
        for j in range(order + 1):
            u = t - j
            if u > 0 or (u == 0 and order > 1):
                s += (-1) ** j * comb(order, j) * u ** (order - 1)
            elif u == 0:
                s += (-1) ** j * comb(order, j) * Fraction(1, 2)
        vals[i] = float(s * inv_fact)
    return SampledFunction(level, start, vals)


def wavelet_from_mask(m, phi: SampledFunction) -> SampledFunction:
    """``psi(x) = sum_k c_k phi(2x - k)`` on the grid of ``phi``, ``c_k = 2 * mask coefficient``."""
    tc = time_coeffs_from_mask(m).coeffs
    if not tc:
        return SampledFunction(phi.level, 0, np.zeros(1))
    scale = 2**phi.level
    kmin, kmax = min(tc), max(tc)
    a = -((-(phi.start + kmin * scale)) // 2)
    b = (phi.stop - 1 + kmax * scale) // 2
    i = np.arange(a, b + 1)
    complex_ = any(not v.is_real() for v in tc.values())
    out = np.zeros(len(i), dtype=complex if complex_ else float)
    for k in sorted(tc):
        c = complex(tc[k]) if complex_ else float(tc[k].re)
        out += c * phi.take(2 * i - k * scale)
    return SampledFunction(phi.level, a, out)


@dataclass
class FrameSpec:
    j_min: int
    j_max: int
    generators: list[tuple[SampledFunction, SampledFunction]]

    def __post_init__(self):
        if self.j_min > self.j_max:
            raise ValueError("j_min must not exceed j_max")
        if not self.generators:
            raise ValueError("need at least one generator pair")


def _k_range(f_lo: float, f_hi: float, g_lo: float, g_hi: float, j: int) -> range:
    """Translates k with supp(f) meeting supp(g(2^j . - k))."""
    lo = int(np.floor(2.0**j * f_lo - g_hi)) - 1
    hi = int(np.ceil(2.0**j * f_hi - g_lo)) + 1
    return range(lo, hi + 1)


def frame_reconstruct(f: SampledFunction, spec: FrameSpec) -> SampledFunction:
    """Truncated dual-frame expansion ``sum_l sum_j sum_k <f, psit_{l,j,k}> psi_{l,j,k}``.

    ``psi_{j,k}(x) = 2**(j/2) psi(2**j x - k)``.  Inner products are Riemann sums
    on the grid of ``f``.  Dilates with ``j < 0`` are read at points of level
    ``f.level - j``, so every generator must be sampled at level
    ``f.level - min(j_min, 0)`` or finer; all generators share one level.
    Summation runs over generators, then ``j`` ascending, then ``k`` ascending.
    """
    glevels = {g.level for pair in spec.generators for g in pair}
    if len(glevels) != 1:
        raise LevelMismatch(f"generators sampled at several levels: {sorted(glevels)}")
    L = glevels.pop()
    Q = f.level
    if L < Q - min(spec.j_min, 0):
        raise LevelMismatch(f"generators at level {L}; need >= {Q - min(spec.j_min, 0)} for j_min={spec.j_min}")

    fi = np.arange(f.start, f.stop)
    fv = f.samples
    f_lo, f_hi = f.bounds()
    hq = 2.0**-Q
    gscale = 2**L
    pieces: list[tuple[int, np.ndarray]] = []
    for psi, psit in spec.generators:
        t_lo, t_hi = psit.bounds()
        p_lo, p_hi = psi.bounds()
        for j in range(spec.j_min, spec.j_max + 1):
            mult = 2 ** (j + L - Q)  # generator index of x_i is i*mult - k*2^L
            amp = 2.0 ** (j / 2)
            ks = np.array(_k_range(f_lo, f_hi, t_lo, t_hi, j))
            idx = fi[None, :] * mult - ks[:, None] * gscale
            coef = (np.conj(psit.take(idx)) @ fv) * (amp * hq)
            for k, c in zip(ks, coef):
                if c == 0:
                    continue
                # support of psi_{j,k} on the level-Q grid
                a = int(np.floor((p_lo + k) * 2.0 ** (Q - j)))
                b = int(np.ceil((p_hi + k) * 2.0 ** (Q - j)))
                i = np.arange(a, b + 1)
                pieces.append((a, c * amp * psi.take(i * mult - int(k) * gscale)))

    if not pieces:
        return SampledFunction(Q, f.start, np.zeros_like(fv))
    lo = min(min(a for a, _ in pieces), f.start)
    hi = max(max(a + len(v) for a, v in pieces), f.stop)
    dtype = complex if any(np.iscomplexobj(v) for _, v in pieces) else float
    out = np.zeros(hi - lo, dtype=dtype)
    for a, v in pieces:
        out[a - lo : a - lo + len(v)] += v
    return SampledFunction(Q, lo, out)


def relative_l2_error(f: SampledFunction, g: SampledFunction) -> float:
    if f.level != g.level:
        raise LevelMismatch("error needs a common level")
    lo, hi = min(f.start, g.start), max(f.stop, g.stop)
    idx = np.arange(lo, hi)
    d = f.take(idx) - g.take(idx)
    return float(np.sqrt(np.sum(np.abs(d) ** 2)) / np.sqrt(np.sum(np.abs(f.take(idx)) ** 2)))


def mep_residual_float(sys, samples: int = DEFAULT_SAMPLES) -> tuple[float, float]:
    """Max over equispaced gamma of the two matrix-identity residuals, in floating point."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    g = np.arange(samples) / samples
    row1 = np.full(samples, -1.0 + 0j)
    row2 = np.zeros(samples, dtype=complex)
    for m, mt in sys.rows():
        mc = np.conj(lp_eval_float(m, g))
        row1 += mc * lp_eval_float(mt, g)
        row2 += mc * lp_eval_float(mt, g + 0.5)
    return float(np.max(np.abs(row1))), float(np.max(np.abs(row2)))


@dataclass
class RenderedSystem:
    phi: SampledFunction
    phit: SampledFunction
    psis: list[SampledFunction]
    psits: list[SampledFunction]


def render_system(sys, level: int = DEFAULT_LEVEL, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                  out_level: int | None = None) -> RenderedSystem:
    """Cascade both scaling functions at ``level``, refine to ``out_level`` and build all wavelets."""
    phi = cascade(sys.m0, level, tol, max_iter)
    phit = cascade(sys.mt0, level, tol, max_iter)
    return _wavelets(sys, phi, phit, level if out_level is None else out_level)


def _wavelets(sys, phi, phit, out_level: int) -> RenderedSystem:
    phi = refine(phi, sys.m0, out_level - phi.level)
    phit = refine(phit, sys.mt0, out_level - phit.level)
    psis = [wavelet_from_mask(m, phi) for m in sys.gens]
    psits = [wavelet_from_mask(m, phit) for m in sys.tgens]
    return RenderedSystem(phi, phit, psis, psits)


def quadrature_level(level: int, j_max: int) -> int:
    """Grid fine enough that the finest dilates still see their breakpoints."""
    return max(level, j_max + 2)


def reconstruction_experiment(sys, level: int = DEFAULT_LEVEL, j_min: int = DEFAULT_JMIN,
                              j_max: int = DEFAULT_JMAX, quad_level: int | None = None,
                              tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> dict:
    """Reconstruct ``f = psi_1`` from the truncated dual-frame expansion and report the error."""
    Q = quadrature_level(level, j_max) if quad_level is None else quad_level
    L = Q - min(j_min, 0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NonConvergence)
        phi = cascade(sys.m0, level, tol, max_iter)
        phit = cascade(sys.mt0, level, tol, max_iter)
    f = wavelet_from_mask(sys.gens[0], refine(phi, sys.m0, Q - level))
    gens = _wavelets(sys, phi, phit, L)
    spec = FrameSpec(j_min, j_max, list(zip(gens.psis, gens.psits)))
    rec = frame_reconstruct(f, spec)
    return {
        "j_min": j_min,
        "j_max": j_max,
        "level": level,
        "quad_level": Q,
        "l2_rel_error": relative_l2_error(f, rec),
        "cascade_converged": not any(issubclass(w.category, NonConvergence) for w in caught),
    }
