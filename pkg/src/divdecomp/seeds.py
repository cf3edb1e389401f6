"""Arithmetic seeds: a coefficient stream a(n) together with 2*alpha = sum a(n)/n^2.

A seed fixes ``b = a * Id`` (Dirichlet convolution with the identity), the
summatory main term ``alpha x^2`` and the series f, g, R built from a.
Three seeds are built in:

========== =========== ================ =====================
name       a(n)        2*alpha          b(n)
========== =========== ================ =====================
mu         mu(n)       6/pi^2           phi(n)
unit       1           pi^2/6           sigma_1(n)
liouville  lambda(n)   pi^2/15          sum_{d|n} lambda(d) n/d
========== =========== ================ =====================

Custom seeds are read from a small text file, see :func:`load_seed`.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Mapping, Optional, Union

import numpy as np

from . import arith


class SeedFormatError(ValueError):
    pass


class _GrowingArray:
    """Memoise ``make(N)`` and regrow geometrically when a larger N is asked for."""

    def __init__(self, make: Callable[[int], np.ndarray]):
        self._make = make
        self._arr: Optional[np.ndarray] = None
        self._lock = threading.Lock()

    def __call__(self, N: int) -> np.ndarray:
        with self._lock:
            if self._arr is None or self._arr.size <= N:
                have = 0 if self._arr is None else self._arr.size
                arr = self._make(max(N, 2 * have, 1 << 12))
                arr.setflags(write=False)
                self._arr = arr
            return self._arr[: N + 1]


def _ones(N: int) -> np.ndarray:
    arr = np.ones(N + 1, dtype=np.int64)
    arr[0] = 0
    return arr


@dataclass(frozen=True, eq=False)
class ArithmeticSeed:
    """An arithmetic function a(n) with the exact constant ``two_alpha``.

    ``coeffs(N)`` returns a(0..N) with slot 0 equal to 0.  ``b_summatory``
    picks how ``sum_{n<=x} b(n)`` is computed: ``"phi"`` and ``"sigma1"``
    use the dedicated routines in :mod:`divdecomp.arith`, ``"convolution"``
    uses ``sum_{d<=x} a(d) T([x/d])``.  ``tail_bound`` is the certified
    uncertainty of ``two_alpha`` (0 for closed forms) and ``coeff_bound``
    bounds ``|a(n)|``.
    """

    name: str
    two_alpha: float
    coeffs: Callable[[int], np.ndarray] = field(repr=False)
    b_summatory: str = "convolution"
    tail_bound: float = 0.0
    coeff_bound: float = 1.0
    note: str = ""
    exact_coeffs: Optional[Mapping[int, Fraction]] = field(default=None, repr=False)

    @property
    def alpha(self) -> float:
        return self.two_alpha / 2

    @property
    def integral(self) -> bool:
        return self.exact_coeffs is None or all(v.denominator == 1 for v in self.exact_coeffs.values())


MU = ArithmeticSeed(
    "mu",
    6 / math.pi**2,
    _GrowingArray(arith.mobius_array),
    b_summatory="phi",
    note="sum mu(n)/n^2 = 1/zeta(2)",
)
UNIT = ArithmeticSeed(
    "unit",
    math.pi**2 / 6,
    _ones,
    b_summatory="sigma1",
    note="sum 1/n^2 = zeta(2)",
)
LIOUVILLE = ArithmeticSeed(
    "liouville",
    math.pi**2 / 15,
    _GrowingArray(arith.liouville_array),
    note="sum lambda(n)/n^2 = zeta(4)/zeta(2)",
)

SEEDS: dict[str, ArithmeticSeed] = {s.name: s for s in (MU, UNIT, LIOUVILLE)}


def get_seed(name: Union[str, ArithmeticSeed]) -> ArithmeticSeed:
    if isinstance(name, ArithmeticSeed):
        return name
    try:
        return SEEDS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown seed {name!r}; known: {', '.join(sorted(SEEDS))}") from None


def b_values(seed: ArithmeticSeed, N: int) -> np.ndarray:
    """b(n) = sum_{d|n} a(d) n/d for n <= N (slot 0 is 0)."""
    a = seed.coeffs(N)
    b = np.zeros(N + 1, dtype=np.int64 if a.dtype.kind in "iu" else np.float64)
    for d in range(1, N + 1):
        if a[d]:
            b[d::d] += a[d] * np.arange(1, N // d + 1)
    return b


# -- seed files ---------------------------------------------------------------


def _parse_header(line: str) -> dict[str, str]:
    out = {}
    for item in line.split():
        key, sep, value = item.partition("=")
        if not sep:
            raise SeedFormatError(f"malformed header item {item!r}")
        out[key.strip()] = value.strip()
    return out


def parse_seed(text: str, name: str = "custom") -> ArithmeticSeed:
    """Parse a seed description.

    The first non-comment line is a header such as
    ``two_alpha=0.9 tail_bound=1e-12`` (``name=...`` is optional); every
    later line is ``n a(n)`` with ``a(n)`` an integer, decimal or ``p/q``.
    Unlisted n have a(n) = 0.
    """
    header = None
    values: dict[int, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if header is None:
            header = _parse_header(line)
            continue
        parts = line.split()
        if len(parts) != 2:
            raise SeedFormatError(f"line {lineno}: expected 'n a(n)', got {raw!r}")
        n = int(parts[0])
        if n < 1 or n in values:
            raise SeedFormatError(f"line {lineno}: bad or repeated index {n}")
        values[n] = Fraction(parts[1])
    if header is None or "two_alpha" not in header:
        raise SeedFormatError("seed header must define two_alpha")
    two_alpha = float(Fraction(header["two_alpha"]))
    tail_bound = float(Fraction(header.get("tail_bound", "0")))
    if tail_bound < 0:
        raise SeedFormatError("tail_bound must be nonnegative")
    integral = all(v.denominator == 1 for v in values.values())
    top = max(values, default=0)
    dense = np.zeros(top + 1, dtype=np.int64 if integral else np.float64)
    for n, v in values.items():
        dense[n] = int(v) if integral else float(v)
    dense.setflags(write=False)

    def coeffs(N: int) -> np.ndarray:
        if N <= top:
            return dense[: N + 1]
        out = np.zeros(N + 1, dtype=dense.dtype)
        out[: top + 1] = dense
        return out

    return ArithmeticSeed(
        header.get("name", name),
        two_alpha,
        coeffs,
        tail_bound=tail_bound,
        coeff_bound=float(max((abs(v) for v in values.values()), default=0)),
        note="loaded from seed file",
        exact_coeffs=values,
    )


def load_seed(path: Union[str, Path]) -> ArithmeticSeed:
    path = Path(path)
    return parse_seed(path.read_text(), name=path.stem)
