"""Sieves and exact summatory functions for mu, phi, sigma_1 and d.

Every array produced here is indexed by ``n`` directly: slot 0 is padding
(value 0) and slot ``n`` holds the value at ``n``.  Summatory functions
take a real ``x`` and floor it once, so ``sum_{n <= x}`` always includes
``n = floor(x)``.
"""

from __future__ import annotations

import math
import struct
import threading
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, NamedTuple, Union

import numpy as np

Real = Union[int, float, Fraction]

#: Largest sieve bound accepted by :func:`build_sieve` (about 4.5 GB of arrays).
MAX_SIEVE_BOUND = 10**8

CACHE_MAGIC = b"ADSV1"

_FIELDS = ("mobius", "phi", "sigma1", "divcount")


class SieveSizeError(ValueError):
    """Raised for a sieve bound outside ``1 <= N <= MAX_SIEVE_BOUND``."""


class SieveCacheError(OSError):
    """Raised when a sieve cache file is corrupt or describes another bound."""


def floor_arg(x: Real) -> int:
    """Floor a nonnegative real argument to the integer used by ``n <= x`` sums."""
    if x < 0:
        raise ValueError(f"argument must be nonnegative, got {x!r}")
    return math.floor(x)


def triangular(m: int) -> int:
    return m * (m + 1) // 2


def smallest_prime_factor(N: int) -> np.ndarray:
    """Smallest prime factor of every ``n <= N`` (``spf[1] = 1``)."""
    spf = np.zeros(N + 1, dtype=np.int64)
    for p in range(2, math.isqrt(N) + 1):
        if spf[p] == 0:
            seg = spf[p * p :: p]
            seg[seg == 0] = p
    idx = np.flatnonzero(spf == 0)
    spf[idx] = idx
    return spf


def _prime_power_rounds(N: int) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]]:
    # Each round strips the full power of the smallest remaining prime from
    # every n that still has a cofactor > 1; yields (n, p, e, p**e).
    spf = smallest_prime_factor(N)
    rest = np.arange(N + 1, dtype=np.int64)
    idx = np.arange(2, N + 1, dtype=np.int64)
    while idx.size:
        cur = rest[idx]
        p = spf[cur]
        cur //= p
        pk = p.copy()
        e = np.ones_like(p)
        hit = np.flatnonzero(cur % p == 0)
        while hit.size:
            cur[hit] //= p[hit]
            pk[hit] *= p[hit]
            e[hit] += 1
            hit = hit[cur[hit] % p[hit] == 0]
        yield idx, p, e, pk
        rest[idx] = cur
        idx = idx[cur > 1]


def mobius_array(N: int) -> np.ndarray:
    """mu(n) for ``0 <= n <= N`` as int8 (slot 0 is 0)."""
    mu = np.ones(N + 1, dtype=np.int8)
    mu[0] = 0
    for idx, _, e, _ in _prime_power_rounds(N):
        mu[idx] *= np.where(e == 1, -1, 0).astype(np.int8)
    return mu


def liouville_array(N: int) -> np.ndarray:
    """Liouville lambda(n) = (-1)^Omega(n) for ``0 <= n <= N`` (slot 0 is 0)."""
    lam = np.ones(N + 1, dtype=np.int8)
    lam[0] = 0
    for idx, _, e, _ in _prime_power_rounds(N):
        lam[idx] *= np.where(e % 2 == 1, -1, 1).astype(np.int8)
    return lam


@dataclass(frozen=True, eq=False)
class SieveTable:
    """mu, phi, sigma_1 and d up to ``bound`` with their prefix sums.

    Arrays have length ``bound + 1``; ``prefix_*[k]`` is the sum over
    ``1 <= n <= k``.  Prefix sums are int64, which is exact for every
    bound up to :data:`MAX_SIEVE_BOUND` (``sum sigma_1 < 10**16`` there).
    Treat instances as read-only; they are shared between callers.
    """

    bound: int
    mobius: np.ndarray
    phi: np.ndarray
    sigma1: np.ndarray
    divcount: np.ndarray
    prefix_mobius: np.ndarray
    prefix_phi: np.ndarray
    prefix_sigma1: np.ndarray
    prefix_divcount: np.ndarray

    def prefix(self, name: str, x: Real) -> int:
        """Exact ``sum_{n <= x}`` of the named column (``x <= bound``)."""
        k = floor_arg(x)
        if k > self.bound:
            raise ValueError(f"x={x} exceeds sieve bound {self.bound}")
        return int(getattr(self, "prefix_" + name)[k])


def _with_prefixes(N: int, arrays: dict[str, np.ndarray]) -> SieveTable:
    prefixes = {}
    for name in _FIELDS:
        col = arrays[name].astype(np.int64)
        prefixes["prefix_" + name] = np.cumsum(col)
    for arr in list(arrays.values()) + list(prefixes.values()):
        arr.setflags(write=False)
    return SieveTable(bound=N, **arrays, **prefixes)


def build_sieve(N: int) -> SieveTable:
    """Sieve mu, phi, sigma_1 and d up to ``N`` in one smallest-prime-factor pass."""
    if not isinstance(N, (int, np.integer)) or N < 1 or N > MAX_SIEVE_BOUND:
        raise SieveSizeError(f"sieve bound must be an integer in [1, {MAX_SIEVE_BOUND}], got {N!r}")
    N = int(N)
    mu = np.ones(N + 1, dtype=np.int8)
    phi = np.ones(N + 1, dtype=np.int64)
    sigma = np.ones(N + 1, dtype=np.int64)
    dcount = np.ones(N + 1, dtype=np.int64)
    for idx, p, e, pk in _prime_power_rounds(N):
        mu[idx] *= np.where(e == 1, -1, 0).astype(np.int8)
        phi[idx] *= pk - pk // p
        sigma[idx] *= (pk * p - 1) // (p - 1)
        dcount[idx] *= e + 1
    for arr in (mu, phi, sigma, dcount):
        arr[0] = 0
    return _with_prefixes(N, {"mobius": mu, "phi": phi, "sigma1": sigma, "divcount": dcount})


_shared_lock = threading.Lock()
_shared: SieveTable | None = None


def get_sieve(n: int) -> SieveTable:
    """Return a process-wide shared sieve with ``bound >= n``.

    The table grows geometrically so repeated calls with slowly increasing
    ``n`` stay cheap.
    """
    global _shared
    with _shared_lock:
        if _shared is None or _shared.bound < n:
            old = _shared.bound if _shared is not None else 0
            _shared = build_sieve(min(MAX_SIEVE_BOUND, max(n, 2 * old, 1 << 12)))
        return _shared


# -- summatory functions ----------------------------------------------------


def summatory_sigma1(x: Real) -> int:
    """A(x) = sum_{n <= x} sigma_1(n) = sum_{d <= x} d [x/d], in O(sqrt x) blocks."""
    X = floor_arg(x)
    total = 0
    d = 1
    while d <= X:
        q = X // d
        r = X // q
        total += q * (triangular(r) - triangular(d - 1))
        d = r + 1
    return total


def summatory_divcount(x: Real) -> int:
    """D(x) = sum_{n <= x} d(n) by the Dirichlet hyperbola method."""
    X = floor_arg(x)
    r = math.isqrt(X)
    return 2 * sum(X // d for d in range(1, r + 1)) - r * r


def summatory_phi(x: Real, table: SieveTable | None = None) -> int:
    """sum_{n <= x} phi(n), read from sieve prefix sums."""
    X = floor_arg(x)
    if X == 0:
        return 0
    table = table if table is not None and table.bound >= X else get_sieve(X)
    return table.prefix("phi", X)


def mertens(x: Real, table: SieveTable | None = None) -> int:
    """M(x) = sum_{n <= x} mu(n)."""
    X = floor_arg(x)
    if X == 0:
        return 0
    table = table if table is not None and table.bound >= X else get_sieve(X)
    return table.prefix("mobius", X)


def divisor_floor_sum(x: Real) -> int:
    """sum_{n <= x} [x/n] by direct floor division (the O(x) route)."""
    X = floor_arg(x)
    if X == 0:
        return 0
    return int(np.sum(X // np.arange(1, X + 1, dtype=np.int64)))


def summatory_divcount_many(xs) -> np.ndarray:
    """Vectorised hyperbola-method D(x) for an array of nonnegative integers."""
    xs = np.asarray(xs, dtype=np.int64)
    r = np.floor(np.sqrt(xs.astype(np.float64))).astype(np.int64)
    r -= r * r > xs
    r += (r + 1) * (r + 1) <= xs
    out = -(r * r)
    for d in range(1, int(r.max(initial=0)) + 1):
        out += np.where(d <= r, 2 * (xs // d), 0)
    return out


def summatory_sigma1_many(xs) -> np.ndarray:
    """Vectorised hyperbola form of A(x) for an array of nonnegative integers.

    Uses ``A(x) = sum_{d<=r} (d [x/d] + T([x/d])) - r T(r)`` with
    ``r = isqrt(x)``, a different decomposition from the block sum in
    :func:`summatory_sigma1`.
    """
    xs = np.asarray(xs, dtype=np.int64)
    r = np.floor(np.sqrt(xs.astype(np.float64))).astype(np.int64)
    r -= r * r > xs
    r += (r + 1) * (r + 1) <= xs
    out = -r * (r * (r + 1) // 2)
    for d in range(1, int(r.max(initial=0)) + 1):
        q = xs // d
        out += np.where(d <= r, d * q + q * (q + 1) // 2, 0)
    return out


class FloorSumCheck(NamedTuple):
    holds: bool
    mobius_floor_sum: int  # sum mu(n)[x/n], expected 1
    divisor_gap: int  # sum [x/n] - D(x), expected 0


def floor_sum_identity_check(x: Real, table: SieveTable | None = None) -> FloorSumCheck:
    """Check sum mu(n)[x/n] = 1 and sum [x/n] = D(x) exactly at ``x >= 1``."""
    X = floor_arg(x)
    if X < 1:
        raise ValueError("floor-sum identities need x >= 1")
    table = table if table is not None and table.bound >= X else get_sieve(X)
    q = X // np.arange(1, X + 1, dtype=np.int64)
    mob = int(np.dot(table.mobius[1 : X + 1].astype(np.int64), q))
    gap = int(q.sum()) - summatory_divcount(X)
    return FloorSumCheck(mob == 1 and gap == 0, mob, gap)


# -- cache file -------------------------------------------------------------
#
# Layout: b"ADSV1", <q N, four arrays (mu, phi, sigma1, d) of N <i8 values for
# n = 1..N, then four prefix-sum arrays of N (low <u8, high <i8) pairs.

_HEADER = struct.Struct("<5sq")


def _to_i128_pairs(values: np.ndarray) -> np.ndarray:
    out = np.empty((values.size, 2), dtype="<u8")
    out[:, 0] = values.astype(np.int64).view(np.uint64)
    out[:, 1] = np.where(values < 0, np.uint64(2**64 - 1), np.uint64(0))
    return out


def _from_i128_pairs(pairs: np.ndarray) -> np.ndarray:
    low = pairs[:, 0].view(np.int64)
    high = pairs[:, 1]
    expected = np.where(low < 0, np.uint64(2**64 - 1), np.uint64(0))
    if np.any(high != expected):
        raise SieveCacheError("prefix sum does not fit in 64 bits")
    return low.copy()


def save_sieve(table: SieveTable, path: Union[str, Path]) -> None:
    N = table.bound
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, N))
        for name in _FIELDS:
            fh.write(np.asarray(getattr(table, name)[1:], dtype="<i8").tobytes())
        for name in _FIELDS:
            fh.write(_to_i128_pairs(getattr(table, "prefix_" + name)[1:]).tobytes())


def read_cache_bound(path: Union[str, Path]) -> int:
    """Return the bound stored in a cache header, verifying the magic bytes."""
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
    if len(head) < _HEADER.size or head[:5] != CACHE_MAGIC:
        raise SieveCacheError(f"{path}: not a sieve cache (bad magic)")
    return _HEADER.unpack(head)[1]


def load_sieve(path: Union[str, Path], expected_bound: int | None = None) -> SieveTable:
    N = read_cache_bound(path)
    if expected_bound is not None and N != expected_bound:
        raise SieveCacheError(f"{path}: cache holds N={N}, expected N={expected_bound}")
    raw = Path(path).read_bytes()
    need = _HEADER.size + 4 * 8 * N + 4 * 16 * N
    if N < 1 or len(raw) != need:
        raise SieveCacheError(f"{path}: truncated or oversized cache for N={N}")
    off = _HEADER.size
    arrays = {}
    for name in _FIELDS:
        col = np.zeros(N + 1, dtype=np.int64)
        col[1:] = np.frombuffer(raw, dtype="<i8", count=N, offset=off)
        arrays[name] = col
        off += 8 * N
    prefixes = {}
    for name in _FIELDS:
        pairs = np.frombuffer(raw, dtype="<u8", count=2 * N, offset=off).reshape(N, 2)
        col = np.zeros(N + 1, dtype=np.int64)
        col[1:] = _from_i128_pairs(pairs)
        prefixes["prefix_" + name] = col
        off += 16 * N
    arrays["mobius"] = arrays["mobius"].astype(np.int8)
    for name in _FIELDS:
        if not np.array_equal(np.cumsum(arrays[name].astype(np.int64)), prefixes["prefix_" + name]):
            raise SieveCacheError(f"{path}: prefix sums disagree with stored values")
    for arr in list(arrays.values()) + list(prefixes.values()):
        arr.setflags(write=False)
    return SieveTable(bound=N, **arrays, **prefixes)
