"""
Growth of the analytic part against conditional envelopes
=========================================================

A scan evaluates the analytic part on a geometric grid and divides by an
envelope.  It cannot prove a bound, only show whether the data look
consistent with one on the scanned range.
"""

# %%
from pathlib import Path
import tempfile

from divdecomp import Envelope, envelope_value, scan
from divdecomp.growth import decade_growth_ok, decade_maxima

env = Envelope("thm121", delta=0.5)
print("envelope at 1e6:", envelope_value(env, 1e6))

# %%
report = scan("sigma1", 16, 1e6, 30, [env])
print("fitted exponent of |E^AN|:", round(report.fitted_exponent, 3))
for decade, top in decade_maxima(report, "thm121"):
    print(f"  max ratio in [1e{decade}, 1e{decade + 1}): {top:.3f}")
print("per-decade growth below 10x:", decade_growth_ok(report, "thm121"))

# %%
# The totient case against the envelope with A = 1.
phi_report = scan("phi", 16, 1e4, 20, [Envelope("thm111-2", A_const=1.0)])
print("phi sup ratio:", phi_report.sup_ratio)

# %%
# Reports write a CSV, a JSON twin and a gnuplot script side by side.
out = Path(tempfile.mkdtemp()) / "sigma1.csv"
for kind, path in report.write(out).items():
    print(kind, path)
print(out.read_text().splitlines()[0])
