"""Growth scans of the analytic part against conditional envelopes.

Envelope kinds:

``thm111-2``  x^{1/2} exp(A log x / log log x)       (phi case)
``thm121``    x^{d'} exp(log x / log log x)          (sigma_1 case)
``thm122``    x^{d' + eps}

with ``d' = max(1/2, delta)``.  The bounds are asymptotic and conditional,
so a scan can only show consistency on a finite range.  The constant A is
not known explicitly; it is a scan parameter.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .decomp import analytic_part

E_E = math.exp(math.e)
MAX_SCAN_X = 10**8
KINDS = ("thm111-2", "thm121", "thm122")
FIT_FLOOR = 1e-12


@dataclass(frozen=True)
class Envelope:
    kind: str
    delta: float = 0.5
    A_const: float = 1.0
    epsilon: float = 0.1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown envelope kind {self.kind!r}; known: {', '.join(KINDS)}")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.A_const <= 0 or self.epsilon <= 0:
            raise ValueError("A_const and epsilon must be positive")

    @property
    def delta_prime(self) -> float:
        return max(0.5, self.delta)


def envelope_value(env: Envelope, x: float) -> float:
    if not x >= E_E:
        raise ValueError(f"envelopes are defined for x >= e^e ~ {E_E:.4f}, got x = {x}")
    lx = math.log(x)
    llx = math.log(lx)
    if env.kind == "thm111-2":
        return math.sqrt(x) * math.exp(env.A_const * lx / llx)
    if env.kind == "thm121":
        return x**env.delta_prime * math.exp(lx / llx)
    return x ** (env.delta_prime + env.epsilon)


@dataclass
class ScanReport:
    case: str
    grid: list
    ean_values: list
    envelopes: list  # of Envelope
    envelope_values: dict  # kind -> list
    ratios: dict  # kind -> list of |E^AN| / envelope
    sup_ratio: dict  # kind -> float
    fitted_exponent: Optional[float]
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["envelopes"] = [asdict(e) for e in self.envelopes]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScanReport":
        d = dict(d)
        d["envelopes"] = [Envelope(**e) for e in d["envelopes"]]
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_csv(self) -> str:
        kinds = [e.kind for e in self.envelopes]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "ean"] + [f"ratio_{k}" for k in kinds] + [f"envelope_{k}" for k in kinds])
        for i, x in enumerate(self.grid):
            row = [x, self.ean_values[i]]
            row += [self.ratios[k][i] for k in kinds]
            row += [self.envelope_values[k][i] for k in kinds]
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    def gnuplot_script(self, csv_name: str) -> str:
        kinds = [e.kind for e in self.envelopes]
        lines = [
            "set datafile separator ','",
            "set key top left",
            "set xlabel 'log10 x'",
            "set ylabel 'log10 value'",
            f"set title 'analytic part ({self.case}) vs envelopes'",
        ]
        plots = [f"'{csv_name}' using (log10($1)):(log10(abs($2))) with linespoints title '|E^AN|'"]
        for j, k in enumerate(kinds):
            col = 3 + len(kinds) + j
            plots.append(f"'{csv_name}' using (log10($1)):(log10(${col})) with lines title '{k}'")
        lines.append("plot " + ", \\\n     ".join(plots))
        return "\n".join(lines) + "\n"

    def write(self, csv_path: Union[str, Path], plot: bool = True) -> dict:
        """Write CSV, a JSON twin and (optionally) a gnuplot script next to it."""
        csv_path = Path(csv_path)
        paths = {"csv": csv_path, "json": csv_path.with_suffix(".json")}
        csv_path.write_text(self.to_csv())
        paths["json"].write_text(self.to_json())
        if plot:
            paths["gnuplot"] = csv_path.with_suffix(".gp")
            paths["gnuplot"].write_text(self.gnuplot_script(csv_path.name))
        return paths


def geometric_grid(x_min: float, x_max: float, points: int) -> np.ndarray:
    if points < 2:
        raise ValueError("a scan grid needs at least 2 points")
    if not x_min >= E_E:
        raise ValueError(f"x_min must be >= e^e ~ {E_E:.4f}, got {x_min}")
    if not x_max > x_min:
        raise ValueError("x_max must exceed x_min")
    if x_max > MAX_SCAN_X:
        raise ValueError(f"x_max is capped at {MAX_SCAN_X:g}")
    return np.geomspace(x_min, x_max, points)


def fit_exponent(xs, values) -> Optional[float]:
    """OLS slope of log|E| on log x, skipping |E| < FIT_FLOOR."""
    xs = np.asarray(xs, dtype=float)
    v = np.abs(np.asarray(values, dtype=float))
    keep = v >= FIT_FLOOR
    if keep.sum() < 2:
        return None
    return float(np.polyfit(np.log(xs[keep]), np.log(v[keep]), 1)[0])


def _seed_for(case: str) -> str:
    if case == "phi":
        return "mu"
    if case == "sigma1":
        return "unit"
    raise ValueError(f"unknown scan case {case!r}; use 'phi' or 'sigma1'")


def scan(
    case: str,
    x_min: float,
    x_max: float,
    points: int,
    envelopes: Sequence[Envelope] = (Envelope("thm121"),),
) -> ScanReport:
    """Evaluate E^AN on a geometric grid and compare with each envelope.

    ``case="phi"`` uses g_1/2 + 1/2, ``case="sigma1"`` the exact split
    g_2/2 + D(x)/2.
    """
    seed = _seed_for(case)
    grid = geometric_grid(x_min, x_max, points)
    kinds = [e.kind for e in envelopes]
    if len(set(kinds)) != len(kinds):
        raise ValueError("envelope kinds within one scan must be distinct")
    values = [analytic_part(seed, float(x)).exact for x in grid]
    env_vals = {e.kind: [envelope_value(e, float(x)) for x in grid] for e in envelopes}
    ratios = {k: [abs(v) / ev for v, ev in zip(values, env_vals[k])] for k in kinds}
    return ScanReport(
        case=case,
        grid=[float(x) for x in grid],
        ean_values=values,
        envelopes=list(envelopes),
        envelope_values=env_vals,
        ratios=ratios,
        sup_ratio={k: max(r) for k, r in ratios.items()},
        fitted_exponent=fit_exponent(grid, values),
        metadata={
            "x_min": float(x_min),
            "x_max": float(x_max),
            "points": int(points),
            "seed": seed,
            "fit_floor": FIT_FLOOR,
            "form": "g/2 + 1/2" if case == "phi" else "g/2 + D(x)/2",
        },
    )


def decade_maxima(report: ScanReport, kind: str) -> list[tuple[int, float]]:
    """Largest ratio within each decade [10^k, 10^{k+1}) of the grid."""
    best: dict[int, float] = {}
    for x, r in zip(report.grid, report.ratios[kind]):
        dec = math.floor(math.log10(x))
        best[dec] = max(best.get(dec, 0.0), r)
    return sorted(best.items())


def decade_growth_ok(report: ScanReport, kind: str, factor: float = 10.0) -> bool:
    """True when every ratio is finite and decade maxima grow by < ``factor`` per decade."""
    if not all(math.isfinite(r) for r in report.ratios[kind]):
        return False
    maxima = decade_maxima(report, kind)
    for (d0, m0), (d1, m1) in zip(maxima, maxima[1:]):
        if m1 >= m0 * factor ** (d1 - d0):
            return False
    return True
