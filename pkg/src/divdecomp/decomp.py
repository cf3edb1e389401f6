"""Error term, arithmetic part and analytic part for a seed.

For a seed a(n) with ``sum a(n)/n^2 = 2*alpha`` and ``b = a * Id``::

    Er(x) = sum_{n<=x} b(n) - alpha x^2
    f(x)  = -sum_n a(n)/n {x/n}
    g(x)  =  sum_n a(n) {x/n}^2
    R(x)  =  sum_n a(n) (1/2 {x/n}^2 + 1/2 [x/n])  =  Er(x) - x f(x)

All three series are infinite, but for n > x we have {x/n} = x/n and
[x/n] = 0, so each collapses to a finite sum over n <= x plus a multiple of
``two_alpha - sum_{n<=x} a(n)/n^2``.  The finite sums use ``math.fsum`` and
the partial sum of a(n)/n^2 is carried in double-double; the large x^2
products are formed in exact rational arithmetic and rounded once.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from . import arith
from .arith import Real, floor_arg
from .seeds import ArithmeticSeed, get_seed

EULER_GAMMA = 0.57721566490153286

_SPLIT = 134217729.0  # 2**27 + 1
_EPS = np.finfo(float).eps


class UnsupportedFormError(ValueError):
    """The requested analytic-part form is not defined for this seed or x."""


class DecompositionError(ArithmeticError):
    """Er(x) = x f(x) + R(x) failed beyond the rounding tolerance."""


def _two_prod(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Dekker: p + e == a*b exactly
    p = a * b
    c = _SPLIT * a
    ah = c - (c - a)
    al = a - ah
    c = _SPLIT * b
    bh = c - (c - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def _recip_square_dd(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """1/n^2 as an unevaluated sum hi + lo."""
    h = 1.0 / n
    p, e = _two_prod(h, n)
    lo1 = ((1.0 - p) - e) / n
    sq, sq_e = _two_prod(h, h)
    return sq, sq_e + 2.0 * h * lo1


class _Sums(NamedTuple):
    x: Fraction
    X: int
    frac: float  # sum a(n)/n {x/n}
    frac_sq: float  # sum a(n) {x/n}^2
    floor: Fraction  # sum a(n) [x/n], exact
    tail: Fraction  # two_alpha - sum_{n<=x} a(n)/n^2


def _finite_sums(seed: ArithmeticSeed, x: Real) -> _Sums:
    X = floor_arg(x)
    xf = float(x)
    if X == 0:
        return _Sums(Fraction(xf), 0, 0.0, 0.0, Fraction(0), Fraction(seed.two_alpha))
    a = seed.coeffs(X)[1:]
    ni = np.arange(1, X + 1, dtype=np.int64)
    n = ni.astype(np.float64)
    q = X // ni
    frac = (xf - q * n) / n  # numerator is exact
    af = a.astype(np.float64)
    s_frac = math.fsum(af / n * frac)
    s_frac_sq = math.fsum(af * frac * frac)
    if a.dtype.kind in "iu":
        s_floor = Fraction(int(np.dot(a.astype(np.int64), q)))
    else:
        s_floor = sum((v * (X // k) for k, v in seed.exact_coeffs.items() if k <= X), Fraction(0))
    hi, lo = _recip_square_dd(n)
    t_hi, t_lo = _two_prod(af, hi)
    parts = np.concatenate([t_hi, t_lo + af * lo]).tolist()
    p_hi = math.fsum(parts)
    p_lo = math.fsum(parts + [-p_hi])
    tail = Fraction(seed.two_alpha) - Fraction(p_hi) - Fraction(p_lo)
    return _Sums(Fraction(xf), X, s_frac, s_frac_sq, s_floor, tail)


def b_summatory(seed: ArithmeticSeed, x: Real):
    """Exact ``sum_{n<=x} b(n)`` (int, or Fraction for rational seeds)."""
    X = floor_arg(x)
    if X == 0:
        return 0
    if seed.b_summatory == "phi":
        return arith.summatory_phi(X)
    if seed.b_summatory == "sigma1":
        return arith.summatory_sigma1(X)
    if seed.integral:
        a = seed.coeffs(X)[1:].astype(np.int64)
        q = X // np.arange(1, X + 1, dtype=np.int64)
        return int(np.dot(a, q * (q + 1) // 2))
    return sum((v * arith.triangular(X // k) for k, v in seed.exact_coeffs.items() if k <= X), Fraction(0))


def _er(seed: ArithmeticSeed, s: _Sums) -> Fraction:
    return Fraction(b_summatory(seed, s.X)) - Fraction(seed.two_alpha) / 2 * s.x * s.x


def _f(s: _Sums) -> Fraction:
    return -Fraction(s.frac) - s.x * s.tail


def _g(s: _Sums) -> Fraction:
    return Fraction(s.frac_sq) + s.x * s.x * s.tail


def _r(s: _Sums) -> Fraction:
    return (_g(s) + s.floor) / 2


def f_value(seed, x: Real) -> float:
    """f(x) = -sum_{n>=1} a(n)/n {x/n} for x >= 0."""
    return float(_f(_finite_sums(get_seed(seed), x)))


def g_value(seed, x: Real) -> float:
    """g(x) = sum_{n>=1} a(n) {x/n}^2 for x >= 0."""
    return float(_g(_finite_sums(get_seed(seed), x)))


def er_value(seed, x: Real) -> float:
    """Er(x) = sum_{n<=x} b(n) - alpha x^2."""
    seed = get_seed(seed)
    X = floor_arg(x)
    return float(Fraction(b_summatory(seed, X)) - Fraction(seed.two_alpha) / 2 * Fraction(float(x)) ** 2)


def r_value(seed, x: Real) -> float:
    """R(x) = sum_n a(n) (1/2 {x/n}^2 + 1/2 [x/n]), which equals Er(x) - x f(x)."""
    return float(_r(_finite_sums(get_seed(seed), x)))


@dataclass(frozen=True)
class AnalyticPart:
    """Analytic part at one x.

    ``exact`` is the closed split (mu: g/2 + 1/2, unit: g/2 + D(x)/2) or R(x)
    when ``split_defined`` is False.  ``asymptotic`` is only set for the unit
    seed, where D(x) is replaced by x log x + (2 gamma - 1) x.
    """

    exact: float
    asymptotic: Optional[float]
    split_defined: bool


def _analytic(seed: ArithmeticSeed, s: _Sums) -> AnalyticPart:
    half_g = _g(s) / 2
    if seed.name == "mu" and seed.b_summatory == "phi":
        return AnalyticPart(float(half_g + Fraction(1, 2)), None, True)
    if seed.name == "unit" and seed.b_summatory == "sigma1":
        exact = half_g + Fraction(arith.summatory_divcount(s.X)) / 2
        xf = float(s.x)
        main = Fraction(xf / 2 * (math.log(xf) + 2 * EULER_GAMMA - 1))
        return AnalyticPart(float(exact), float(half_g + main), True)
    return AnalyticPart(float(_r(s)), None, False)


def analytic_part(seed, x: Real) -> AnalyticPart:
    """E^AN(x) for x >= 1; generic seeds fall back to R(x) with ``split_defined=False``."""
    seed = get_seed(seed)
    if x < 1:
        raise UnsupportedFormError(f"analytic split requires x >= 1, got x={x}")
    return _analytic(seed, _finite_sums(seed, x))


def f_values(seed, ts) -> np.ndarray:
    """Vectorised f at many points (direct series; no panel structure used)."""
    seed = get_seed(seed)
    ts = np.asarray(ts, dtype=np.float64)
    out = np.empty_like(ts)
    N = int(math.floor(ts.max(initial=0.0)))
    if N == 0:
        return -seed.two_alpha * ts
    a = seed.coeffs(N)[1:].astype(np.float64)
    n = np.arange(1, N + 1, dtype=np.float64)
    w = a / n
    tail = float(_finite_sums(seed, N).tail)
    chunk = max(1, 2_000_000 // N)
    for i in range(0, ts.size, chunk):
        t = ts[i : i + chunk, None]
        frac = t / n - np.floor(t / n)
        out[i : i + chunk] = -(frac * w).sum(axis=1) - ts[i : i + chunk] * tail
    return out


class VolterraResult(NamedTuple):
    residual: float
    budget: float
    panels: int
    aligned: bool


def volterra_residual(seed, x: Real, A: float = 0.0, panels: int = 10_000) -> VolterraResult:
    """Residual of F(x) - int_0^x F(t) dt/t - Er(x) for F(t) = (f(t) + A) t.

    The integral is computed by the composite midpoint rule.  When there are
    at least as many panels as unit intervals the panels are aligned to the
    integers; f is linear between consecutive integers (all its breakpoints
    are multiples of some n), so the rule is exact and ``budget`` covers
    rounding only.  Otherwise panels are uniform and the budget is
    ``h * TV(f)``.
    """
    seed = get_seed(seed)
    if x <= 0:
        raise ValueError("volterra_residual needs x > 0")
    xf = float(x)
    X = math.floor(xf)
    edges = np.arange(0, X + 1, dtype=np.float64)
    if xf > X:
        edges = np.append(edges, xf)
    units = edges.size - 1
    if panels >= units:
        per = math.ceil(panels / units)
        frac = (np.arange(per) + 0.5) / per
        left, width = edges[:-1], np.diff(edges)
        mids = (left[:, None] + width[:, None] * frac[None, :]).ravel()
        widths = np.repeat(width / per, per)
        aligned = True
    else:
        h = xf / panels
        mids = (np.arange(panels) + 0.5) * h
        widths = np.full(panels, h)
        aligned = False
    fm = f_values(seed, mids)
    quad = math.fsum((widths * fm).tolist())
    fx = f_value(seed, xf)
    er = er_value(seed, xf)
    F = (fx + A) * xf
    integral = quad + A * xf
    residual = F - integral - er

    a_abs = np.abs(seed.coeffs(max(X, 1))[1:].astype(np.float64))
    n = np.arange(1, a_abs.size + 1, dtype=np.float64)
    fmax = float(np.sum(a_abs / n)) + xf * (abs(seed.two_alpha) + seed.coeff_bound)
    scale = xf * fmax + abs(F) + abs(er) + abs(A) * xf + seed.two_alpha * xf * xf
    budget = 16 * _EPS * (scale + math.log2(mids.size + 1) * xf * fmax)
    if not aligned:
        # slope part plus jumps of each {t/n}/n term, plus the linear tail
        tv = float(np.sum(a_abs * (xf / n**2 + np.floor(xf / n) / n))) + xf * abs(seed.two_alpha)
        budget += float(widths[0]) * tv
    return VolterraResult(float(residual), float(budget), int(mids.size), aligned)


@dataclass(frozen=True)
class DecompositionSample:
    seed: str
    x: float
    er: float
    f_val: float
    g_val: float
    arithmetic_part: float
    analytic_part_exact: float
    analytic_part_asymptotic: Optional[float]
    split_defined: bool
    r_val: float
    identity_residual: float
    volterra_residual: Optional[float]
    volterra_budget: Optional[float]

    def to_dict(self) -> dict:
        return asdict(self)


def decompose(seed, x: Real, A: float = 0.0, volterra_panels: Optional[int] = None) -> DecompositionSample:
    """Evaluate every decomposition quantity at one x >= 1.

    The Volterra residual is computed only when ``volterra_panels`` is given
    (its cost grows like ``x * panels``).
    """
    seed = get_seed(seed)
    if x < 1:
        raise UnsupportedFormError(f"analytic split requires x >= 1, got x={x}")
    s = _finite_sums(seed, x)
    er = _er(seed, s)
    f = _f(s)
    arith_part = s.x * f
    r = _r(s)
    an = _analytic(seed, s)
    er_f, ar_f, r_f = float(er), float(arith_part), float(r)
    resid = er_f - ar_f - r_f
    if abs(resid) > 1e-9 * max(1.0, abs(er_f)):
        raise DecompositionError(f"Er - x f - R = {resid:g} at x={float(x)} for seed {seed.name}")
    vr = vb = None
    if volterra_panels is not None:
        v = volterra_residual(seed, x, A, volterra_panels)
        vr, vb = v.residual, v.budget
    return DecompositionSample(
        seed=seed.name,
        x=float(x),
        er=er_f,
        f_val=float(f),
        g_val=float(_g(s)),
        arithmetic_part=ar_f,
        analytic_part_exact=an.exact,
        analytic_part_asymptotic=an.asymptotic,
        split_defined=an.split_defined,
        r_val=r_f,
        identity_residual=resid,
        volterra_residual=vr,
        volterra_budget=vb,
    )


# -- piecewise-polynomial form on unit panels ----------------------------------


@dataclass(frozen=True)
class UnitPanels:
    """Coefficients of f, g, R on every panel [k, k+1), k = 0..X-1.

    On such a panel [x/n] = [k/n] for all n, hence::

        f(x) = -2a x + s1[k]
        g(x) =  2a x^2 - 2 x s1[k] + s2[k]
        R(x) = (g(x) + s0[k]) / 2

    with 2a = two_alpha, s0[k] = sum a(n)[k/n], s1[k] = sum a(n)[k/n]/n and
    s2[k] = sum a(n)[k/n]^2.
    """

    two_alpha: float
    s0: np.ndarray
    s1: np.ndarray
    s2: np.ndarray

    @property
    def X(self) -> int:
        return self.s0.size


def unit_panels(seed, X: int) -> UnitPanels:
    """Build :class:`UnitPanels` up to X in O(X log X).

    Moving from panel k-1 to panel k changes [k/n] only for n | k, where it
    grows by one, so the three sums are accumulated divisor by divisor.
    """
    seed = get_seed(seed)
    X = int(X)
    a = seed.coeffs(max(X - 1, 1)).astype(np.float64)
    inc0 = np.zeros(X, dtype=np.float64)
    inc1 = np.zeros(X, dtype=np.float64)
    inc2 = np.zeros(X, dtype=np.float64)
    for n in range(1, X):
        if a[n] == 0:
            continue
        m = np.arange(1, (X - 1) // n + 1, dtype=np.float64)
        inc0[n::n] += a[n]
        inc1[n::n] += a[n] / n
        inc2[n::n] += a[n] * (2 * m - 1)
    return UnitPanels(seed.two_alpha, np.cumsum(inc0), np.cumsum(inc1), np.cumsum(inc2))
