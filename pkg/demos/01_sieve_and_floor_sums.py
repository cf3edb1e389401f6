"""
Sieve tables and floor-sum identities
=====================================

A sieve table holds mu, phi, sigma_1 and d up to N together with their
prefix sums.  Two floor sums come for free once it exists.
"""

# %%
# Build a small table and look at the first few values.
import random

import numpy as np

from divdecomp import build_sieve, floor_sum_identity_check, mertens, summatory_divcount

table = build_sieve(20)
print("n      ", np.arange(1, 21))
print("mu(n)  ", table.mobius[1:])
print("phi(n) ", table.phi[1:])
print("sum phi up to 10:", table.prefix("phi", 10))
print("M(10), M(100):", mertens(10), mertens(100))

# %%
# ``sum_{n<=x} mu(n) [x/n]`` is always 1, and ``sum [x/n]`` counts divisors.
# Both hold for real x, so check a few random points.
rng = random.Random(0)
for x in (rng.uniform(1, 1e6) for _ in range(5)):
    c = floor_sum_identity_check(x)
    print(f"x = {x:12.3f}  sum mu[x/n] = {c.mobius_floor_sum}  gap = {c.divisor_gap}  ok = {c.holds}")

# %%
# The divisor summatory function uses the hyperbola method, so 1e12 is cheap.
print("D(1e12) =", summatory_divcount(10**12))
