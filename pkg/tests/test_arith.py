import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from divdecomp import arith
from divdecomp.arith import (
    SieveCacheError,
    SieveSizeError,
    build_sieve,
    divisor_floor_sum,
    floor_sum_identity_check,
    mertens,
    summatory_divcount,
    summatory_phi,
    summatory_sigma1,
)

import oracles


@pytest.fixture(scope="module")
def table():
    return build_sieve(10**4)


def test_sieve_n1():
    t = build_sieve(1)
    assert [t.mobius[1], t.phi[1], t.sigma1[1], t.divcount[1]] == [1, 1, 1, 1]


def test_sieve_n10_examples():
    t = build_sieve(10)
    assert t.sigma1[10] == 18
    assert t.divcount[10] == 4
    assert t.mobius[6] == 1
    assert t.mobius[4] == 0


@pytest.mark.parametrize("bad", [0, -3, arith.MAX_SIEVE_BOUND + 1])
def test_sieve_rejects_bad_bounds(bad):
    with pytest.raises(SieveSizeError):
        build_sieve(bad)


def test_sieve_matches_trial_division(table):
    N = table.bound
    mu = [oracles.mu(n) for n in range(1, N + 1)]
    dc = [oracles.divcount(n) for n in range(1, N + 1)]
    sg = [oracles.sigma1(n) for n in range(1, N + 1)]
    assert table.mobius[1:].tolist() == mu
    assert table.divcount[1:].tolist() == dc
    assert table.sigma1[1:].tolist() == sg


def test_phi_against_gcd_count(table):
    for n in list(range(1, 500)) + [997, 1024, 9240, 9973, 10**4]:
        assert table.phi[n] == oracles.phi(n)


def test_phi_divisor_sum_and_mobius_inversion(table):
    N = table.bound
    acc = np.zeros(N + 1, dtype=np.int64)
    inv = np.zeros(N + 1, dtype=np.int64)
    for d in range(1, N + 1):
        acc[d::d] += table.phi[d]
        inv[d::d] += int(table.mobius[d]) * np.arange(1, N // d + 1)
    assert np.array_equal(acc[1:], np.arange(1, N + 1))
    assert np.array_equal(inv[1:], table.phi[1:])


def test_mobius_primes_and_squares(table):
    N = table.bound
    primes = [p for p in range(2, N + 1) if table.divcount[p] == 2]
    assert all(table.mobius[p] == -1 for p in primes)
    for m in range(2, 40):
        assert not np.any(table.mobius[m * m :: m * m])


def test_prefix_sums_monotone(table):
    for name in ("phi", "sigma1", "divcount"):
        assert np.all(np.diff(getattr(table, "prefix_" + name)) > 0)


def test_liouville_against_trial_division():
    lam = arith.liouville_array(3000)
    assert lam[1:].tolist() == [oracles.liouville(n) for n in range(1, 3001)]


def test_smallest_prime_factor():
    spf = arith.smallest_prime_factor(500)
    for n in range(2, 501):
        assert spf[n] == min(oracles.factorize(n))


# -- summatory functions -------------------------------------------------------


def test_summatory_sigma1_examples():
    assert summatory_sigma1(0.5) == 0
    assert summatory_sigma1(10) == 87
    assert summatory_sigma1(10) == sum(oracles.sigma1(n) for n in range(1, 11))
    assert summatory_sigma1(10**6) == build_sieve(10**6).prefix("sigma1", 10**6)


def test_summatory_sigma1_block_sum_all_small_x(table):
    got = [summatory_sigma1(x) for x in range(table.bound + 1)]
    assert got == [0] + table.prefix_sigma1[1:].tolist()


def test_summatory_sigma1_hyperbola_to_1e5():
    t = arith.get_sieve(10**5)
    xs = np.arange(0, 10**5 + 1)
    assert np.array_equal(arith.summatory_sigma1_many(xs), t.prefix_sigma1[: 10**5 + 1])


def test_summatory_phi_examples():
    assert summatory_phi(1) == 1
    assert summatory_phi(10) == 32
    assert summatory_phi(100) == sum(oracles.phi(n) for n in range(1, 101))
    assert summatory_phi(100.9) == summatory_phi(100)
    assert summatory_phi(0.3) == 0


def test_summatory_divcount_examples():
    assert summatory_divcount(1) == 1
    assert summatory_divcount(10) == 27
    assert summatory_divcount(10**5) == divisor_floor_sum(10**5)


def test_summatory_divcount_many_matches_scalar():
    xs = np.arange(0, 3000)
    assert arith.summatory_divcount_many(xs).tolist() == [summatory_divcount(int(x)) for x in xs]


def test_mertens_examples():
    assert mertens(1) == 1
    assert mertens(10) == -1
    assert mertens(100) == 1


def test_negative_argument_rejected():
    with pytest.raises(ValueError):
        summatory_sigma1(-1)


@pytest.mark.parametrize("x", [1, 1000.5, 10**5])
def test_floor_sum_identities(x):
    c = floor_sum_identity_check(x)
    assert (c.mobius_floor_sum, c.divisor_gap) == (1, 0)
    assert c.holds


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1, max_value=10**6, allow_nan=False))
def test_floor_sum_identities_random(x):
    assert floor_sum_identity_check(x).holds


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1, max_value=10**6, allow_nan=False))
def test_divisor_floor_sum_equals_hyperbola(x):
    assert divisor_floor_sum(x) == summatory_divcount(x)


def test_real_argument_floors_once():
    assert summatory_sigma1(10.999) == summatory_sigma1(10)
    assert summatory_divcount(math.e * 1000) == summatory_divcount(2718)


# -- cache file ------------------------------------------------------------------


def test_cache_round_trip(tmp_path, table):
    path = tmp_path / "s.adsv"
    arith.save_sieve(table, path)
    raw = path.read_bytes()
    assert raw[:5] == b"ADSV1"
    assert int.from_bytes(raw[5:13], "little") == table.bound
    back = arith.load_sieve(path, expected_bound=table.bound)
    for name in ("mobius", "phi", "sigma1", "divcount"):
        assert np.array_equal(getattr(back, name), getattr(table, name))
        assert np.array_equal(getattr(back, "prefix_" + name), getattr(table, "prefix_" + name))
    # Mertens goes negative, exercising the sign-extended high word
    assert back.prefix("mobius", 10) == -1


def test_cache_prefix_layout(tmp_path):
    t = build_sieve(3)
    path = tmp_path / "s.adsv"
    arith.save_sieve(t, path)
    raw = path.read_bytes()
    off = 13 + 4 * 8 * 3  # header + four value arrays
    pairs = np.frombuffer(raw, dtype="<u8", offset=off).reshape(-1, 2)
    # prefix mobius: 1, 0, -1
    assert pairs[:3].tolist() == [[1, 0], [0, 0], [2**64 - 1, 2**64 - 1]]


def test_cache_bad_magic(tmp_path):
    path = tmp_path / "bad.adsv"
    path.write_bytes(b"NOPE!" + b"\0" * 20)
    with pytest.raises(SieveCacheError, match="bad magic"):
        arith.load_sieve(path)


def test_cache_wrong_bound(tmp_path):
    path = tmp_path / "s.adsv"
    arith.save_sieve(build_sieve(20), path)
    with pytest.raises(SieveCacheError, match="expected N=30"):
        arith.load_sieve(path, expected_bound=30)


def test_cache_truncated(tmp_path):
    path = tmp_path / "s.adsv"
    arith.save_sieve(build_sieve(20), path)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(SieveCacheError, match="truncated"):
        arith.load_sieve(path)


def test_table_is_read_only(table):
    with pytest.raises(ValueError):
        table.phi[3] = 7
