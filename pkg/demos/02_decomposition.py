"""
Splitting an error term into arithmetic and analytic parts
==========================================================

For the totient, ``E(x) = sum_{n<=x} phi(n) - 3x^2/pi^2`` splits as
``x f(x) + g(x)/2 + 1/2``.  The same pattern holds for sigma_1 with D(x)/2
in place of 1/2.
"""

# %%
from divdecomp import analytic_part, decompose, volterra_residual

for x in (10, 1000.5, 123456.789):
    d = decompose("mu", x)
    print(f"x={x:<11} E={d.er:+.6f}  x f={d.arithmetic_part:+.6f}  "
          f"E^AN={d.analytic_part_exact:+.6f}  residual={d.identity_residual:.1e}")

# %%
# For sigma_1 the exact analytic part uses D(x); the asymptotic form swaps
# D(x) for x log x + (2 gamma - 1) x.  The gap is much smaller than sqrt(x).
for x in (1e2, 1e4, 1e6):
    ap = analytic_part("unit", x)
    print(f"x={x:>9.0f}  exact={ap.exact:+.3f}  asymptotic={ap.asymptotic:+.3f}  "
          f"gap/sqrt(x)={(ap.exact - ap.asymptotic) / x**0.5:+.4f}")

# %%
# ``F(t) = (f(t) + A) t`` solves ``F(x) - int_0^x F(t) dt/t = E(x)`` for any A.
# With integer-aligned panels the quadrature is exact up to rounding.
for A in (-1.0, 0.0, 3.7):
    v = volterra_residual("liouville", 100, A, panels=10_000)
    print(f"A={A:+.1f}  residual={v.residual:+.2e}  budget={v.budget:.2e}")

# Too few panels cannot resolve the jumps, and the budget says so.
print(volterra_residual("unit", 100, 0, panels=10))
