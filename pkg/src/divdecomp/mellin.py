"""Truncated Mellin integrals of step and piecewise-polynomial functions.

Every integrand handled here is a polynomial in x on each unit panel
[k, k+1), so ``int_1^X`` is a finite sum of closed-form panel integrals.
The part of ``int_1^oo`` beyond X is not computed; each report carries an
explicit bound for it instead, and checks compare with
``tolerance + tail_bound``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

from . import arith
from .decomp import unit_panels
from .seeds import MU, UNIT
from .zeta import CONSTANTS, EULER_GAMMA, zeta

DEFAULT_TOL = 1e-3
MAX_PANEL_X = 10**5


@dataclass(frozen=True)
class MellinCheckReport:
    case: str
    s: complex
    X: int
    lhs: complex
    rhs: complex
    abs_error: float
    tail_bound: float
    tolerance: float
    passed: bool

    @property
    def residual(self) -> complex:
        return self.lhs - self.rhs

    def to_record(self) -> dict:
        return {
            "case": self.case,
            "s_re": self.s.real,
            "s_im": self.s.imag,
            "X": self.X,
            "lhs_re": self.lhs.real,
            "lhs_im": self.lhs.imag,
            "rhs_re": self.rhs.real,
            "rhs_im": self.rhs.imag,
            "abs_error": self.abs_error,
            "tail_bound": self.tail_bound,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "MellinCheckReport":
        return cls(
            case=rec["case"],
            s=complex(rec["s_re"], rec["s_im"]),
            X=int(rec["X"]),
            lhs=complex(rec["lhs_re"], rec["lhs_im"]),
            rhs=complex(rec["rhs_re"], rec["rhs_im"]),
            abs_error=float(rec["abs_error"]),
            tail_bound=float(rec["tail_bound"]),
            tolerance=float(rec.get("tolerance", DEFAULT_TOL)),
            passed=bool(rec["pass"]),
        )


def dump_reports(reports: Iterable[MellinCheckReport], path: Union[str, Path, None] = None) -> str:
    text = json.dumps([r.to_record() for r in reports], indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


def load_reports(path: Union[str, Path]) -> list[MellinCheckReport]:
    return [MellinCheckReport.from_record(r) for r in json.loads(Path(path).read_text())]


def _prepare(s: complex, X) -> tuple[complex, int]:
    s = complex(s)
    if not s.real > 2:
        raise ValueError(f"Mellin identities need Re(s) > 2, got Re(s) = {s.real}")
    X = int(math.floor(X))
    if X < 2:
        raise ValueError(f"truncation X must be >= 2, got {X}")
    if X > MAX_PANEL_X:
        raise ValueError(f"truncation X is capped at {MAX_PANEL_X}, got {X}")
    return s, X


def _panel_moments(X: int, s: complex, p: int) -> np.ndarray:
    """int_k^{k+1} x^{p-s-1} dx for k = 1..X-1."""
    k = np.arange(1, X + 1, dtype=np.float64)
    e = p - s
    pw = np.exp(e * np.log(k))
    return (pw[1:] - pw[:-1]) / e


def _power_integral(s: complex, p: int, X: int) -> complex:
    """int_1^X x^{p-s-1} dx."""
    e = p - s
    return (X**e - 1) / e


def _log_integral(s: complex, X: int) -> complex:
    """int_1^X x^{-s} log x dx."""
    u = 1 - s
    return X**u * (math.log(X) / u - 1 / u**2) + 1 / u**2


def _dot(c: np.ndarray, m: np.ndarray) -> complex:
    v = c * m
    return complex(math.fsum(v.real.tolist()), math.fsum(v.imag.tolist()))


def _report(case, s, X, lhs, rhs, tail, tol, passed=None) -> MellinCheckReport:
    err = abs(lhs - rhs)
    if passed is None:
        passed = bool(err <= tol + tail)
    return MellinCheckReport(case, s, X, complex(lhs), complex(rhs), float(err), float(tail), tol, passed)


def _abs_error_tail(s: complex, X: int, c0: float, c1: float) -> float:
    """Bound on int_X^oo (c0 + c1 log x) x^{1-sigma-1} ... for |h(x)| <= x (c0 + c1 log x)."""
    u = s.real - 1
    return X ** (-u) * ((c0 + c1 * math.log(X)) / u + c1 / u**2)


def mellin_summatory(kind: str, s: complex, X: int, tol: float = DEFAULT_TOL) -> MellinCheckReport:
    """int_1^X A(x) x^{-s-1} dx for A(x) = sum_{n<=x} sigma_1(n), or its error term.

    ``kind`` is ``"sigma1-summatory"`` (compare with zeta(s)zeta(s-1)/s) or
    ``"sigma1-error"`` (subtract the main term pi^2/12 x^2 and compare with
    zeta(s)zeta(s-1)/s - pi^2/12/(s-2)).  A is constant on each panel, so
    ``int_m^{m+1} A x^{-s-1} = A(m)(m^-s - (m+1)^-s)/s``.
    """
    s, X = _prepare(s, X)
    if kind not in ("sigma1-summatory", "sigma1-error"):
        raise ValueError(f"unknown kind {kind!r}")
    tab = arith.get_sieve(X)
    A = tab.prefix_sigma1[1:X].astype(np.float64)
    k = np.arange(1, X + 1, dtype=np.float64)
    pw = np.exp(-s * np.log(k))
    lhs = _dot(A, (pw[:-1] - pw[1:]) / s)
    zz = zeta(s) * zeta(s - 1)
    rhs = zz / s
    # |E_sigma1(x)| <= x (1.625 + 0.5 log x) for x >= 1
    tail = _abs_error_tail(s, X, 1.625, 0.5)
    if kind == "sigma1-error":
        lhs -= CONSTANTS.pi_sq_over_12 * _power_integral(s, 2, X)
        rhs -= CONSTANTS.pi_sq_over_12 / (s - 2)
    else:
        u = s.real - 2
        tail += CONSTANTS.pi_sq_over_12 * X ** (-u) / u
    return _report(kind, s, X, lhs, rhs, tail, tol)


def mellin_f2(s: complex, X: int, tol: float = DEFAULT_TOL) -> MellinCheckReport:
    """int_1^X f_2(x) x^{-s} dx against -pi^2/6/(s-2) + zeta(s)zeta(s-1)/(s-1).

    f_2 is linear on every unit panel (its breakpoints are the multiples of
    each n, all integers); panel coefficients come from :func:`unit_panels`.
    Tail bound from |f_2(x)| <= 3 + log x.
    """
    s, X = _prepare(s, X)
    pan = unit_panels(UNIT, X)
    lhs = -pan.two_alpha * _power_integral(s, 2, X) + _dot(pan.s1[1:X], _panel_moments(X, s, 1))
    rhs = -CONSTANTS.pi_sq_over_6 / (s - 2) + zeta(s) * zeta(s - 1) / (s - 1)
    u = s.real - 1
    tail = X ** (-u) * ((3 + math.log(X)) / u + 1 / u**2)
    return _report("f2", s, X, lhs, rhs, tail, tol)


def _ean_lhs(case: str, s: complex, X: int, form: str) -> complex:
    seed = MU if case == "phi" else UNIT
    pan = unit_panels(seed, X)
    # R = (2a x^2 - 2 x s1 + s2)/2 + const on each panel
    lhs = pan.two_alpha / 2 * _power_integral(s, 2, X) - _dot(pan.s1[1:X], _panel_moments(X, s, 1))
    const = pan.s2[1:X] / 2
    if case == "phi":
        const = const + 0.5
    elif form == "exact":
        const = const + pan.s0[1:X] / 2
    else:
        lhs += 0.5 * (_log_integral(s, X) + (2 * EULER_GAMMA - 1) * _power_integral(s, 1, X))
    return lhs + _dot(const, _panel_moments(X, s, 0))


def mellin_ean(case: str, s: complex, X: int, tol: float = DEFAULT_TOL, form: str = "asymptotic") -> MellinCheckReport:
    """Mellin transform of the analytic part over [1, X].

    ``case="phi"``: E^AN = g_1/2 + 1/2; the identity with
    3/pi^2/(s-2) + zeta(s-1)/(zeta(s) s(1-s)) is exact and ``passed`` means
    ``abs_error <= tol + tail_bound``.

    ``case="sigma1"``: compared with pi^2/12/(s-2) + zeta(s)zeta(s-1)/(s(1-s)).
    With ``form="asymptotic"`` (g_2/2 + x/2 (log x + 2 gamma - 1)) the
    difference is only bounded, and ``passed`` just records finiteness; use
    :func:`sigma1_boundedness` for the growth check.  ``form="exact"``
    (g_2/2 + D(x)/2) makes the identity exact.
    """
    s, X = _prepare(s, X)
    if case == "phi":
        rhs = CONSTANTS.three_over_pi_sq / (s - 2) + zeta(s - 1) / (zeta(s) * s * (1 - s))
        u = s.real
        tail = 1.5 * X ** (1 - u) / (u - 1) + 0.5 * X ** (-u) / u
        return _report("phi", s, X, _ean_lhs("phi", s, X, "exact"), rhs, tail, tol)
    if case != "sigma1":
        raise ValueError(f"unknown case {case!r}")
    if form not in ("asymptotic", "exact"):
        raise ValueError(f"unknown form {form!r}")
    lhs = _ean_lhs("sigma1", s, X, form)
    rhs = CONSTANTS.pi_sq_over_12 / (s - 2) + zeta(s) * zeta(s - 1) / (s * (1 - s))
    if form == "exact":
        return _report("sigma1-exact", s, X, lhs, rhs, _abs_error_tail(s, X, 2.0, 0.5), tol)
    tail = _abs_error_tail(s, X, 1.6, 0.5)
    return _report("sigma1", s, X, lhs, rhs, tail, tol, passed=bool(np.isfinite(abs(lhs - rhs))))


def asymptotic_defect(s: complex) -> complex:
    """Limit as X -> oo of the sigma1 asymptotic-form Mellin residual.

    The asymptotic form differs from the exact one by
    (x/2)(log x + 2 gamma - 1) - D(x)/2, whose transform over [1, oo) is
    (1/(s-1)^2 + (2 gamma - 1)/(s-1) - zeta(s)^2/s) / 2.
    """
    s = complex(s)
    return 0.5 * (1 / (s - 1) ** 2 + (2 * EULER_GAMMA - 1) / (s - 1) - zeta(s) ** 2 / s)


@dataclass(frozen=True)
class BoundednessSummary:
    s_values: tuple
    X_values: tuple
    residuals: dict  # (s, X) -> complex residual
    sup: float
    factor: float
    passed: bool


def sigma1_boundedness(
    s_values: Sequence[complex], X_values: Sequence[int] = (10**3, 10**4), factor: float = 2.0
) -> BoundednessSummary:
    """Check that the sigma1 residual stays within ``factor`` of its first-X value."""
    res = {}
    ok = True
    for s in s_values:
        first = None
        for X in X_values:
            r = mellin_ean("sigma1", s, X).residual
            res[(complex(s), int(X))] = r
            if first is None:
                first = abs(r)
            elif not (first / factor <= abs(r) <= factor * first):
                ok = False
    sup = max(abs(r) for r in res.values())
    ok = ok and math.isfinite(sup)
    return BoundednessSummary(tuple(complex(s) for s in s_values), tuple(X_values), res, sup, factor, ok)
