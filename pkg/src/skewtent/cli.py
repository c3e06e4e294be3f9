"""Command-line front end.

Subcommands: kneading, tangent-table, isentrope, raster, markov, gamma.
Failures print one line ``error: <category>: <message>`` to stderr and exit
with status 2.
"""

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

from .birkhoff import (
    DEFAULT_N,
    DEFAULT_SEED,
    estimate_gamma,
    lyapunov_from_gamma,
    slope_from_gamma,
)
from .errors import SkewTentError
from .isentrope import DEFAULT_BETA_TOL, trace_isentrope
from .kneading import DEFAULT_C_TOL, DEFAULT_PREFIX_LEN, kneading_prefix
from .map_core import DEFAULT_BURN_IN, SkewTentMap
from .markov import DEFAULT_MAX_ITER, DEFAULT_TOL, solve_markov
from .raster import Overlay, RasterConfig, kneading_raster
from .theta import theta_slope

OUTPUT_DIR_ENV = "SKEWTENT_OUTPUT_DIR"

REFERENCE_PAIRS = [(0.3, 0.8), (0.49, 0.56), (0.5, 0.7), (0.5, 0.8), (0.6, 0.75), (0.6, 0.9)]

TABLE_COLUMNS = [
    "alpha",
    "beta",
    "gamma_birkhoff",
    "slope_from_gamma",
    "slope_from_theta",
    "slope_discrepancy",
    "lambda_birkhoff",
    "lambda_markov",
    "error",
]


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def _jsonable(x):
    if isinstance(x, float):
        # 17 significant digits, round-trip safe
        return float(f"{x:.17g}") if math.isfinite(x) else None
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dump_json(doc) -> str:
    return json.dumps(_jsonable(doc), indent=2)


def _pair(text, name="range"):
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"{name} must be 'lo,hi', got {text!r}")
    return lo, hi


def _size(text):
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"size must be 'WxH', got {text!r}")
    return w, h


def _overlay(text):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"overlay must be 'alpha,beta,source', got {text!r}")
    return Overlay(float(parts[0]), float(parts[1]), parts[2].strip())


def parse_params(source: str):
    """Parameter pairs from a file (one ``alpha,beta`` per line) or ``a,b;a,b``."""
    if source and os.path.exists(source):
        text = Path(source).read_text()
        items = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    else:
        items = [s for s in source.split(";") if s.strip()]
    pairs = []
    for item in items:
        a, b = item.replace(" ", "").split(",")[:2]
        pairs.append((float(a), float(b)))
    return pairs


def _output_path(out, default_name):
    if out is None:
        base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
        return base / default_name
    return Path(out)


def _write_text(out, text):
    if out == "-" or out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_kneading(args):
    seq = kneading_prefix(SkewTentMap(args.alpha, args.beta), args.len, args.ctol)
    print(seq.render())


def table_row(alpha, beta, n, seed, prefix_len, burn_in=DEFAULT_BURN_IN):
    row = dict.fromkeys(TABLE_COLUMNS)
    row.update(alpha=alpha, beta=beta)
    try:
        tmap = SkewTentMap(alpha, beta)
        gamma = estimate_gamma(tmap, n, seed, burn_in).gamma
        sg = slope_from_gamma(alpha, beta, gamma)
        st = theta_slope(tmap, prefix_len)
        sol = solve_markov(tmap)
        row.update(
            gamma_birkhoff=gamma,
            slope_from_gamma=sg,
            slope_from_theta=st,
            slope_discrepancy=abs(sg - st),
            lambda_birkhoff=lyapunov_from_gamma(alpha, beta, gamma),
            lambda_markov=sol.tangent.lambda_exponent if sol is not None else None,
        )
    except SkewTentError as exc:
        row["error"] = f"{exc.category}: {exc}"
    return row


def cmd_tangent_table(args):
    pairs = REFERENCE_PAIRS if args.params is None else parse_params(args.params)
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", newline="")
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(TABLE_COLUMNS)
        for alpha, beta in pairs:
            row = table_row(alpha, beta, args.n, args.seed, args.prefix)
            writer.writerow([fmt(row[c]) for c in TABLE_COLUMNS])
    finally:
        if out is not sys.stdout:
            out.close()


def cmd_isentrope(args):
    tmap = SkewTentMap(args.alpha0, args.beta0)
    lo, hi = args.range if args.range else (args.alpha0 - 0.05, args.alpha0 + 0.05)
    trace = trace_isentrope(tmap, lo, hi, args.steps, args.prefix, args.beta_tol)
    text = trace.to_json() if args.format == "json" else trace.to_csv()
    _write_text(args.out, text)


def cmd_raster(args):
    width, height = args.size
    config = RasterConfig(
        alpha_range=args.alpha_range,
        beta_range=args.beta_range,
        width=width,
        height=height,
        prefix_len=args.prefix,
        overlays=tuple(args.overlay or ()),
    )
    image = kneading_raster(config)
    path = _output_path(args.out, "raster.ppm")
    image.write_ppm(path)
    if args.csv:
        Path(args.csv).write_text(image.to_csv())
    print(dump_json({
        "out": str(path),
        "width": width,
        "height": height,
        "overlays": [
            {"alpha": o.alpha, "beta": o.beta, "source": o.source, "slope": o.slope}
            for o in image.config.overlays
        ],
    }))


def cmd_markov(args):
    tmap = SkewTentMap(args.alpha, args.beta)
    sol = solve_markov(tmap, args.maxiter, args.tol)
    if sol is None:
        doc = {"status": "no period found", "alpha": args.alpha, "beta": args.beta}
    else:
        doc = {
            "status": "ok",
            "alpha": args.alpha,
            "beta": args.beta,
            "period": sol.partition.period,
            "partition": sol.partition.points.tolist(),
            "density": sol.density.values.tolist(),
            "gamma": sol.tangent.gamma,
            "lambda": sol.tangent.lambda_exponent,
            "slope": sol.tangent.psi_prime,
        }
        if args.density_csv:
            Path(args.density_csv).write_text(sol.density.to_csv())
    print(dump_json(doc))


def cmd_gamma(args):
    tmap = SkewTentMap(args.alpha, args.beta)
    est = estimate_gamma(tmap, args.n, args.seed, args.burn_in)
    print(dump_json({
        "alpha": args.alpha,
        "beta": args.beta,
        "gamma": est.gamma,
        "lambda": lyapunov_from_gamma(args.alpha, args.beta, est.gamma),
        "slope": slope_from_gamma(args.alpha, args.beta, est.gamma),
        "n": est.n_iterates,
        "seed": est.seed,
        "x0": est.x0,
        "restarts": est.restarts,
    }))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skewtent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kneading", help="print the kneading prefix")
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("--len", type=int, default=DEFAULT_PREFIX_LEN)
    p.add_argument("--ctol", type=float, default=DEFAULT_C_TOL)
    p.set_defaults(func=cmd_kneading)

    p = sub.add_parser("tangent-table", help="tangent slopes from gamma and theta as CSV")
    p.add_argument("--params", default=None,
                   help="file of 'alpha,beta' lines or inline 'a,b;a,b' (default: the six reference pairs)")
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--prefix", type=int, default=DEFAULT_PREFIX_LEN)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_tangent_table)

    p = sub.add_parser("isentrope", help="trace an isentrope as CSV or JSON")
    p.add_argument("alpha0", type=float)
    p.add_argument("beta0", type=float)
    p.add_argument("--range", type=_pair, default=None)
    p.add_argument("--steps", type=int, default=21)
    p.add_argument("--prefix", type=int, default=DEFAULT_PREFIX_LEN)
    p.add_argument("--beta-tol", type=float, default=DEFAULT_BETA_TOL)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_isentrope)

    p = sub.add_parser("raster", help="kneading-prefix raster as binary PPM")
    p.add_argument("--alpha-range", type=_pair, default=(0.0, 1.0))
    p.add_argument("--beta-range", type=_pair, default=(0.5, 1.0))
    p.add_argument("--size", type=_size, default=(512, 256))
    p.add_argument("--prefix", type=int, default=10)
    p.add_argument("--overlay", type=_overlay, action="append",
                   help="'alpha,beta,gamma' or 'alpha,beta,theta'; repeatable")
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None, help="also write per-pixel identifiers")
    p.set_defaults(func=cmd_raster)

    p = sub.add_parser("markov", help="exact invariant density for a Markov map")
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("--maxiter", type=int, default=DEFAULT_MAX_ITER)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--density-csv", default=None)
    p.set_defaults(func=cmd_markov)

    p = sub.add_parser("gamma", help="Birkhoff estimate of gamma and the Lyapunov exponent")
    p.add_argument("alpha", type=float)
    p.add_argument("beta", type=float)
    p.add_argument("--n", type=int, default=DEFAULT_N)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
    p.set_defaults(func=cmd_gamma)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except SkewTentError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: invalid: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
