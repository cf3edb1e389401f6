"""
Mellin transforms of the analytic part
======================================

Every integrand is a polynomial on unit panels, so ``int_1^X`` is a finite
closed-form sum.  Each report pairs it with a bound on the part beyond X.
"""

# %%
from divdecomp import mellin_ean, mellin_f2, mellin_summatory
from divdecomp.mellin import asymptotic_defect, sigma1_boundedness
from divdecomp.zeta import dirichlet_phi, zeta

print("zeta(3) =", zeta(3).real)
p = dirichlet_phi(3.5 + 0.5j, 10**6)
print("sum phi(n) n^-s at N=1e6:", p.value, " target:", zeta(2.5 + 0.5j) / zeta(3.5 + 0.5j))

# %%
# The phi identity is exact; the error sits at rounding level.
for s in (3, 3.5 + 0.5j, 4 - 0.5j):
    r = mellin_ean("phi", s, 10**4)
    print(f"phi  s={s}: abs_error={r.abs_error:.1e}  tail_bound={r.tail_bound:.1e}  pass={r.passed}")

for r in (mellin_summatory("sigma1-error", 3.5, 10**4), mellin_f2(4, 10**3)):
    print(f"{r.case:<13} s={r.s}: abs_error={r.abs_error:.1e}  pass={r.passed}")

# %%
# For sigma_1 the asymptotic form leaves a bounded residual.  It settles to
# a closed-form limit as X grows.
summary = sigma1_boundedness([3, 3.5, 4])
for (s, X), res in summary.residuals.items():
    print(f"s={s.real}  X={X:>5}  residual={res.real:+.6f}  limit={asymptotic_defect(s).real:+.6f}")
print("bounded within factor 2:", summary.passed)
