"""Command-line front end: ``divdecomp {sieve,eval,verify,mellin,scan}``.

Exit codes: 0 when every requested check passes, 1 when a check fails (or
a cache is corrupt), 2 for invalid arguments and precondition violations.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import arith, decomp, growth, mellin, seeds

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def default_cache_dir() -> Path:
    env = os.environ.get("DIVDECOMP_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "divdecomp"


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def parse_grid(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, pts = text.split(":")
        return float(lo), float(hi), int(pts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be x_min:x_max:points, got {text!r}") from None


def _resolve_seed(name: str) -> seeds.ArithmeticSeed:
    if name.lower() in seeds.SEEDS:
        return seeds.SEEDS[name.lower()]
    if Path(name).is_file():
        return seeds.load_seed(name)
    raise UsageError(f"unknown seed {name!r} (expected one of {', '.join(seeds.SEEDS)} or a seed file)")


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
    return buf.getvalue()


# -- commands ---------------------------------------------------------------


def cmd_sieve(args) -> int:
    N = args.N
    if N < 1 or N > arith.MAX_SIEVE_BOUND:
        raise UsageError(f"--N must lie in [1, {arith.MAX_SIEVE_BOUND}]")
    path = Path(args.cache) if args.cache else default_cache_dir() / "sieve.adsv"
    if path.exists():
        try:
            have = arith.read_cache_bound(path)
            if have == N:
                arith.load_sieve(path, expected_bound=N)
                print(f"{path}: cache up to date (N={N})")
                return EXIT_OK
        except arith.SieveCacheError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"{path}: cache holds N={have}, rebuilding for N={N}")
    path.parent.mkdir(parents=True, exist_ok=True)
    arith.save_sieve(arith.build_sieve(N), path)
    print(f"{path}: wrote sieve N={N}")
    return EXIT_OK


def cmd_eval(args) -> int:
    seed = _resolve_seed(args.seed)
    if args.x < 1:
        raise UsageError(f"analytic split requires x >= 1, got x={args.x}")
    sample = decomp.decompose(seed, args.x, args.A, volterra_panels=args.panels)
    row = sample.to_dict()
    if args.format == "csv":
        text = _rows_to_csv([row])
    else:
        text = json.dumps(row, indent=2, sort_keys=True) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _suite_identities(args, lines: list) -> int:
    rng = random.Random(args.rng_seed)
    failures = 0
    xs = [rng.uniform(1, args.x_max) for _ in range(args.samples)]
    bad = [(x, c) for x in xs if not (c := arith.floor_sum_identity_check(x)).holds]
    lines.append(f"identities/floor-sums: {len(xs) - len(bad)}/{len(xs)} pass")
    for x, c in bad:
        lines.append(f"  FAIL x={x!r} sum mu[x/n]={c.mobius_floor_sum} divisor gap={c.divisor_gap}")
    failures += len(bad)

    top = min(int(args.x_max), 10**5)
    xs_int = np.arange(1, top + 1)
    hyper = arith.summatory_divcount_many(xs_int)
    sieve = arith.get_sieve(top).prefix_divcount[1 : top + 1]
    nbad = int(np.count_nonzero(hyper != sieve))
    lines.append(f"identities/divisor-hyperbola: {top - nbad}/{top} integer x pass")
    failures += nbad

    for name in ("mu", "unit", "liouville"):
        ok = 0
        for x in xs:
            x = min(x, 10**5)
            s = decomp.decompose(name, x)
            if abs(s.identity_residual) <= 1e-9 * max(1.0, abs(s.er)):
                ok += 1
            else:
                lines.append(f"  FAIL seed={name} x={x!r} residual={s.identity_residual!r}")
        lines.append(f"identities/decomposition[{name}]: {ok}/{len(xs)} pass")
        failures += len(xs) - ok
    return failures


def _suite_volterra(args, lines: list) -> int:
    failures = 0
    for name in ("mu", "unit", "liouville"):
        for x in (10.0, 100.0):
            for A in (-1.0, 0.0, 3.7):
                v = decomp.volterra_residual(name, x, A, panels=args.panels)
                if v.budget > args.tol:
                    status = "inconclusive"
                elif abs(v.residual) <= v.budget:
                    status = "pass"
                else:
                    status = "FAIL"
                    failures += 1
                lines.append(
                    f"volterra[{name}] x={x:g} A={A:g}: {status} "
                    f"residual={v.residual:.3e} budget={v.budget:.3e} panels={v.panels}"
                )
    return failures


def cmd_verify(args) -> int:
    lines: list[str] = []
    failures = 0
    if args.suite in ("identities", "all"):
        failures += _suite_identities(args, lines)
    if args.suite in ("volterra", "all"):
        failures += _suite_volterra(args, lines)
    lines.append(f"summary: {'all checks pass' if failures == 0 else f'{failures} failure(s)'}")
    print("\n".join(lines))
    return EXIT_OK if failures == 0 else EXIT_FAIL


def cmd_mellin(args) -> int:
    s_list = args.s or [complex(3.5)]
    for s in s_list:
        if not s.real > 2:
            raise UsageError(f"Mellin checks require Re(s) > 2 (sigma > 2), got s={s}")
    X = int(args.X)
    reports = []
    ok = True
    if args.case == "sigma1":
        summary = mellin.sigma1_boundedness(s_list, (max(2, X // 10), X))
        for s in s_list:
            reports.append(mellin.mellin_ean("sigma1", s, X, tol=args.tol))
        for (s, Xv), r in summary.residuals.items():
            print(f"sigma1 s={s} X={Xv}: residual={r:.6g} |r|={abs(r):.6g}")
        print(f"boundedness: sup={summary.sup:.6g} factor={summary.factor:g} {'pass' if summary.passed else 'FAIL'}")
        ok = summary.passed
    else:
        for s in s_list:
            if args.case == "phi":
                r = mellin.mellin_ean("phi", s, X, tol=args.tol)
            elif args.case == "f2":
                r = mellin.mellin_f2(s, X, tol=args.tol)
            else:
                r = mellin.mellin_summatory(f"sigma1-{args.case}", s, X, tol=args.tol)
            reports.append(r)
            ok = ok and r.passed
            print(
                f"{r.case} s={s} X={X}: abs_error={r.abs_error:.3e} tail_bound={r.tail_bound:.3e} "
                f"{'pass' if r.passed else 'FAIL'}"
            )
    if args.format == "csv":
        text = _rows_to_csv([r.to_record() for r in reports])
        if args.out:
            Path(args.out).write_text(text)
    else:
        text = mellin.dump_reports(reports, args.out)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_scan(args) -> int:
    x_min, x_max, points = args.grid
    kinds = args.envelope or (["thm111-2"] if args.case == "phi" else ["thm121"])
    try:
        envs = [growth.Envelope(k, delta=args.delta, A_const=args.A, epsilon=args.epsilon) for k in kinds]
        report = growth.scan(args.case, x_min, x_max, points, envs)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        paths = report.write(args.out, plot=not args.no_plot)
        print("wrote " + ", ".join(str(p) for p in paths.values()))
    elif args.format == "json":
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.to_csv())
    ok = True
    for k in kinds:
        good = growth.decade_growth_ok(report, k, args.max_decade_growth)
        ok = ok and good
        print(
            f"{k}: sup ratio={report.sup_ratio[k]:.6g} decade growth < {args.max_decade_growth:g}x: "
            f"{'pass' if good else 'FAIL'}",
            file=sys.stderr,
        )
    print(f"fitted exponent: {report.fitted_exponent}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="divdecomp", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("sieve", help="build and cache a sieve table", allow_abbrev=False)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--cache", help="cache file (default: $DIVDECOMP_CACHE/sieve.adsv)")
    sp.set_defaults(func=cmd_sieve)

    sp = sub.add_parser("eval", help="evaluate the decomposition at one x", allow_abbrev=False)
    sp.add_argument("--seed", default="unit")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--A", type=float, default=0.0)
    sp.add_argument("--panels", type=int, default=None, help="also compute the Volterra residual")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("verify", help="run identity / Volterra suites", allow_abbrev=False)
    sp.add_argument("--suite", choices=("identities", "volterra", "all"), default="all")
    sp.add_argument("--samples", type=int, default=50)
    sp.add_argument("--x-max", type=float, default=1e5)
    sp.add_argument("--panels", type=int, default=10_000)
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--rng-seed", type=int, default=20240601)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("mellin", help="Mellin transform checks", allow_abbrev=False)
    sp.add_argument("--case", choices=("phi", "sigma1", "f2", "summatory", "error"), default="phi")
    sp.add_argument("--s", type=parse_complex, action="append")
    sp.add_argument("--X", type=int, default=10_000)
    sp.add_argument("--tol", type=float, default=mellin.DEFAULT_TOL)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_mellin)

    sp = sub.add_parser("scan", help="growth scan against envelopes", allow_abbrev=False)
    sp.add_argument("--case", choices=("phi", "sigma1"), default="sigma1")
    sp.add_argument("--grid", type=parse_grid, default=(16.0, 1e6, 30))
    sp.add_argument("--envelope", choices=growth.KINDS, action="append")
    sp.add_argument("--delta", type=float, default=0.5)
    sp.add_argument("--epsilon", type=float, default=0.1)
    sp.add_argument("--A", type=float, default=1.0)
    sp.add_argument("--max-decade-growth", type=float, default=10.0)
    sp.add_argument("--format", choices=("json", "csv"), default="csv")
    sp.add_argument("--out", help="CSV path; JSON and gnuplot files are written alongside")
    sp.add_argument("--no-plot", action="store_true")
    sp.set_defaults(func=cmd_scan)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
