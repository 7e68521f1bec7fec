"""Command-line surface: bound sweeps, sharpness-ratio sweeps, verification,
rate-function tables and Monte-Carlo estimates.

Output is deterministic: CSV files carry a fixed versioned header comment and
17-significant-digit decimals, JSON carries a schema_version field, and
nothing in the data depends on wall-clock time.

Exit codes: 0 success, 2 parse/argument error, 3 hypothesis violation,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .classical import bennett_bound, bernstein_bound, hoeffding_bound, mills_ratio
from .errors import (
    HypothesisError,
    ModelError,
    NoSaddlepointError,
    ParameterError,
    RangeError,
    UnsupportedModelError,
)
from .models import check_curvature_condition, load_model, rademacher_model
from .oracle import build_lattice, mc_tail, tilted_mc_tail
from .rate import chernoff_bound, fenchel_legendre, solve_target
from .sharp import (
    C3_UNIVERSAL,
    expansion_interval,
    normal_tail_upper,
    saddlepoint_interval,
    subgaussian_upper,
    third_moment_interval,
    two_sided_interval,
)
from .tilting import berry_esseen_tilted, inequality_suite

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_HYPOTHESIS = 3
EXIT_VERIFY = 4

ALL_BOUNDS = (
    "exact", "hoeffding", "bennett", "bernstein", "chernoff", "mills",
    "expansion", "saddlepoint", "third_moment", "two_sided",
    "normal_shape", "subgaussian",
)

_INTERVALS = ("expansion", "saddlepoint", "third_moment", "two_sided")


def _fmt(v) -> str:
    """One CSV cell: 17 significant digits, '.' decimal point, '' for missing."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    f = float(v)
    if math.isnan(f):
        return ""
    return format(f, ".17g")


def _parse_grid(text: str) -> np.ndarray:
    """'a:b:steps' -> linspace(a, b, steps)."""
    try:
        a, b, steps = text.split(":")
        a, b, steps = float(a), float(b), int(steps)
    except ValueError:
        raise ParameterError(f"grid must be 'a:b:steps', got {text!r}") from None
    if steps < 1 or b < a:
        raise ParameterError(f"bad grid {text!r}")
    return np.linspace(a, b, steps)


def _emit_csv(out, tag: str, header: list[str], rows):
    out.write(f"# sharptail {tag} v{SCHEMA_VERSION}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(_fmt(v) for v in row) + "\n")


def _emit_json(out, tag: str, header: list[str], rows):
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": tag,
        "rows": [dict(zip(header, row)) for row in rows],
    }
    json.dump(payload, out, indent=2, allow_nan=True, default=float)
    out.write("\n")


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

def _interval_cells(interval):
    if interval.valid:
        return [interval.lower, interval.center, interval.upper, True]
    return [None, None, interval.upper, False]


def cmd_bounds(args) -> int:
    model = load_model(args.model)
    xs = _parse_grid(args.x_grid)
    selected = ALL_BOUNDS if args.bounds == "all" else tuple(args.bounds.split(","))
    for name in selected:
        if name not in ALL_BOUNDS:
            raise ParameterError(f"unknown bound {name!r}; choose from {', '.join(ALL_BOUNDS)}")
    explicit = args.bounds != "all"
    B = args.b if args.b is not None else model.b_ratio
    strict = not args.nonstrict

    lattice = None
    if "exact" in selected:
        try:
            lattice = build_lattice(model)
        except UnsupportedModelError as exc:
            if explicit:
                raise
            print(f"exact oracle unavailable: {exc}", file=sys.stderr)

    header = ["x"]
    for name in selected:
        if name in _INTERVALS:
            header += [f"{name}_lower", f"{name}_center", f"{name}_upper", f"{name}_valid"]
        else:
            header.append(name)

    def interval_or_none(fn, name):
        try:
            return fn()
        except (HypothesisError, NoSaddlepointError):
            if explicit:
                raise
            return None

    rows = []
    for x in xs:
        row = [float(x)]
        for name in selected:
            if name == "exact":
                row.append(lattice.tail(x * model.sigma, strict) if lattice is not None else None)
            elif name == "hoeffding":
                row.append(hoeffding_bound(x, model.sigma, model.n))
            elif name == "bennett":
                row.append(bennett_bound(x, model.sigma))
            elif name == "bernstein":
                row.append(bernstein_bound(x, model.sigma))
            elif name == "chernoff":
                try:
                    row.append(chernoff_bound(model, x))
                except NoSaddlepointError:
                    row.append(None)
            elif name == "mills":
                row.append(mills_ratio(x))
            elif name == "expansion":
                iv = interval_or_none(
                    lambda: expansion_interval(model, x, B, args.delta, args.c3), name)
                row += _interval_cells(iv) if iv else [None, None, None, False]
            elif name == "saddlepoint":
                iv = interval_or_none(
                    lambda: saddlepoint_interval(model, x, args.delta, args.c3), name)
                row += _interval_cells(iv) if iv else [None, None, None, False]
            elif name == "third_moment":
                iv = interval_or_none(lambda: third_moment_interval(model, x), name)
                row += _interval_cells(iv) if iv else [None, None, None, False]
            elif name == "two_sided":
                iv = interval_or_none(lambda: two_sided_interval(model, x), name)
                row += _interval_cells(iv) if iv else [None, None, None, False]
            elif name == "normal_shape":
                try:
                    row.append(normal_tail_upper(model, x))
                except RangeError:
                    row.append(None)
                except HypothesisError:
                    if explicit:
                        raise
                    row.append(None)
            elif name == "subgaussian":
                try:
                    row.append(subgaussian_upper(model, x, args.c3))
                except RangeError:
                    row.append(None)
                except HypothesisError:
                    if explicit:
                        raise
                    row.append(None)
        rows.append(row)

    emit = _emit_csv if args.format == "csv" else _emit_json
    emit(sys.stdout, "bounds", header, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# ratio: exact symmetric +/-1 tails against the scaled-normal x Hoeffding product
# ---------------------------------------------------------------------------

def ratio_rows(n_list, x_max: float, points: int, tail_floor: float = 1e-12):
    """Rows (n, x, exact non-strict tail, Theta*H, ratio); rows whose exact
    tail falls below `tail_floor` are dropped."""
    rows = []
    for n in n_list:
        model = rademacher_model(n)
        lattice = build_lattice(model)
        sigma = model.sigma
        for x in np.linspace(0.0, x_max, points):
            p = lattice.tail(x * sigma, strict=False)
            if p < tail_floor:
                continue
            approx = mills_ratio(x) * hoeffding_bound(x, sigma, n)
            rows.append((int(n), float(x), p, approx, p / approx))
    return rows


def cmd_ratio(args) -> int:
    n_list = [int(s) for s in args.n_list.split(",")]
    if any(n < 1 for n in n_list):
        raise ParameterError("all n must be >= 1")
    rows = ratio_rows(n_list, args.x_max, args.points)
    header = ["n", "x", "exact_tail", "theta_hoeffding", "ratio"]
    emit = _emit_csv if args.format == "csv" else _emit_json
    emit(sys.stdout, "ratio", header, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def verify_report(model, B: float, delta: float, lambda_grid=None,
                  containment_points: int = 25) -> dict:
    report: dict = {"schema_version": SCHEMA_VERSION, "command": "verify"}

    curv = check_curvature_condition(model, B, lambda_grid)
    report["curvature_condition"] = {
        "B": curv.B, "holds": curv.holds,
        "worst_margin": curv.worst_margin, "worst_lambda": curv.worst_lambda,
    }

    suite = inequality_suite(model, B, delta, lambda_grid)
    report["inequalities"] = suite.to_dict()["checks"]

    failures = not curv.holds or not suite.all_hold

    try:
        lattice = build_lattice(model)
    except UnsupportedModelError as exc:
        lattice = None
        report["oracle"] = {"skipped": True, "reason": str(exc)}

    approx = []
    for lam in (0.0, 0.05, 0.1):
        if lattice is None:
            break
        rep = berry_esseen_tilted(model, lam, delta)
        approx.append(rep.to_dict())
        failures = failures or not rep.holds
    if approx:
        report["normal_approx"] = approx

    if lattice is not None:
        sigma = model.sigma
        checks = []
        builders = []
        if model.a_max <= 1.0 + 1e-12:
            builders.append(("expansion",
                             lambda x: expansion_interval(model, x, B, delta),
                             0.25 * sigma / B * (1 - 1e-9)))
            builders.append(("third_moment",
                             lambda x: third_moment_interval(model, x),
                             0.1 * sigma / model.b_ratio))
        else:
            checks.append({"name": "expansion", "skipped": True,
                           "reason": "needs xi_i <= 1"})
            checks.append({"name": "third_moment", "skipped": True,
                           "reason": "needs xi_i <= 1"})
        if model.a_max <= 1.0 + 1e-12 and model.lower_min >= -1.0 - 1e-12:
            builders.append(("two_sided", lambda x: two_sided_interval(model, x),
                             0.606 * sigma))
        else:
            checks.append({"name": "two_sided", "skipped": True,
                           "reason": "needs |xi_i| <= 1"})
        builders.append(("saddlepoint",
                         lambda x: saddlepoint_interval(model, x, delta),
                         0.9 * model.max_support / sigma))
        for name, fn, xmax in builders:
            worst = math.inf
            ok = True
            for x in np.linspace(0.0, xmax, containment_points):
                try:
                    iv = fn(x)
                except NoSaddlepointError:
                    continue
                if not iv.valid:
                    continue
                p = lattice.tail(x * sigma, strict=True)
                ok = ok and iv.lower <= p <= iv.upper
                worst = min(worst, iv.upper - p, p - iv.lower)
            checks.append({"name": name, "holds": ok,
                           "worst_margin": None if worst is math.inf else worst})
            failures = failures or not ok
        report["containment"] = checks

    report["ok"] = not failures
    return report


def cmd_verify(args) -> int:
    model = load_model(args.model)
    B = args.b if args.b is not None else model.b_ratio
    grid = _parse_grid(args.grid) if args.grid else None
    report = verify_report(model, B, args.delta, grid)
    json.dump(report, sys.stdout, indent=2, default=float)
    sys.stdout.write("\n")
    return EXIT_OK if report["ok"] else EXIT_VERIFY


# ---------------------------------------------------------------------------
# rate
# ---------------------------------------------------------------------------

def cmd_rate(args) -> int:
    model = load_model(args.model)
    ys = _parse_grid(args.y_grid)
    n = model.n
    rows = []
    for y in ys:
        try:
            rate = fenchel_legendre(model, y)
            lam = solve_target(model, n * y).lam if y > 0 else 0.0
            rows.append((float(y), rate, lam, math.exp(-n * rate), True))
        except NoSaddlepointError:
            rows.append((float(y), None, None, None, False))
    header = ["y", "rate", "lambda", "chernoff", "valid"]
    emit = _emit_csv if args.format == "csv" else _emit_json
    emit(sys.stdout, "rate", header, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# mc
# ---------------------------------------------------------------------------

def cmd_mc(args) -> int:
    model = load_model(args.model)
    strict = not args.nonstrict
    threshold = args.x * model.sigma
    if args.method == "tilted":
        est = tilted_mc_tail(model, threshold, strict, args.samples, args.seed)
    else:
        est = mc_tail(model, threshold, strict, args.samples, args.seed)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "mc",
        "x": args.x,
        "threshold": threshold,
        "strict": strict,
        "estimate": est.to_dict(),
    }
    if est.method == "tilted_mc":
        payload["relative_stderr"] = est.stderr / est.p if est.p > 0 else None
    if est.p == 0.0:
        payload["note"] = (
            "no hits: a one-sided 95% upper confidence bound is "
            f"{3.0 / args.samples:.3e}"
        )
    json.dump(payload, sys.stdout, indent=2, default=float)
    sys.stdout.write("\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="sharptail",
        description="Tail bounds for sums of independent bounded mean-zero "
                    "random variables, with exact and Monte-Carlo oracles.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bounds", help="sweep every bound over an x grid")
    b.add_argument("--model", required=True, help="JSON model file")
    b.add_argument("--x-grid", required=True, help="a:b:steps")
    b.add_argument("--bounds", default="all",
                   help=f"comma list from: {', '.join(ALL_BOUNDS)}")
    b.add_argument("--format", choices=("csv", "json"), default="csv")
    b.add_argument("--c3", type=float, default=C3_UNIVERSAL)
    b.add_argument("--delta", type=float, default=1.0)
    b.add_argument("--b", type=float, default=None,
                   help="curvature constant B (default: third-moment ratio)")
    b.add_argument("--strict", dest="nonstrict", action="store_false", default=False)
    b.add_argument("--nonstrict", dest="nonstrict", action="store_true")
    b.set_defaults(fn=cmd_bounds)

    r = sub.add_parser("ratio", help="exact +/-1 tails over Theta(x) * Hoeffding")
    r.add_argument("--n-list", default="100,400,2500,10000")
    r.add_argument("--x-max", type=float, default=3.0)
    r.add_argument("--points", type=int, default=31)
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.set_defaults(fn=cmd_ratio)

    v = sub.add_parser("verify", help="machine-check the inequality suite")
    v.add_argument("--model", required=True)
    v.add_argument("--b", type=float, default=None)
    v.add_argument("--delta", type=float, default=1.0)
    v.add_argument("--grid", default=None, help="lambda grid a:b:steps")
    v.set_defaults(fn=cmd_verify)

    ra = sub.add_parser("rate", help="rate function table")
    ra.add_argument("--model", required=True)
    ra.add_argument("--y-grid", required=True, help="a:b:steps")
    ra.add_argument("--format", choices=("csv", "json"), default="csv")
    ra.set_defaults(fn=cmd_rate)

    m = sub.add_parser("mc", help="Monte-Carlo tail estimate")
    m.add_argument("--model", required=True)
    m.add_argument("--x", type=float, required=True)
    m.add_argument("--samples", type=int, default=100_000)
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--method", choices=("mc", "tilted"), default="mc")
    m.add_argument("--strict", dest="nonstrict", action="store_false", default=False)
    m.add_argument("--nonstrict", dest="nonstrict", action="store_true")
    m.set_defaults(fn=cmd_mc)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except (ModelError, ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except HypothesisError as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NoSaddlepointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
