"""Batch command-line surface.

Subcommands: corr, sample, curves, surface, price, verify.  Output is CSV
(with `# key=value` provenance comments) or JSON with a `meta` block; both
embed the seed, the parameters, and the package version, and identical
invocations are byte-identical.  Numbers are printed at 12 significant
digits.

Exit codes: 0 success, 1 numerical failure (non-convergence or a failed
verification), 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__, gini, oracle, verify, wipm
from .distributions import (
    BVP1,
    BVP2,
    BVP3,
    EllipticalT,
    Normal,
    PairedSample,
    joint_ddf,
    pearson_closed_form,
    sample,
)
from .errors import (
    ConvergenceError,
    DegenerateSampleError,
    DomainError,
    GiniCorrError,
    MomentError,
    NoLinearRegressionError,
    QuadratureError,
    UnsupportedPairError,
)
from .weights import WeightFunction

_USAGE_ERRORS = (DomainError, MomentError, UnsupportedPairError,
                 NoLinearRegressionError, DegenerateSampleError)
_NUMERIC_ERRORS = (ConvergenceError, QuadratureError)


def _fmt(x) -> str:
    return format(float(x), ".12g")


class CliError(Exception):
    """Usage/validation failure destined for exit code 2."""


# ---------------------------------------------------------------------------
# flag parsing helpers
# ---------------------------------------------------------------------------

def parse_weight(spec: str) -> WeightFunction:
    """Weight flag grammar: identity | power:G | beta:A,B | table:PATH."""
    name, _, rest = spec.partition(":")
    try:
        if name == "identity":
            return WeightFunction.identity()
        if name == "power":
            return WeightFunction.power(float(rest))
        if name == "beta":
            a, b = (float(v) for v in rest.split(","))
            return WeightFunction.beta_cdf(a, b)
        if name == "table":
            return WeightFunction.from_csv(rest)
    except (ValueError, OSError, DomainError) as exc:
        raise CliError(f"bad weight spec {spec!r}: {exc}") from exc
    raise CliError(
        f"unknown weight kind {name!r}; use identity, power:G, beta:A,B or table:PATH"
    )


def build_family(args):
    """Assemble a family from CLI flags; None when --family was not given."""
    if args.family is None:
        return None
    common = dict(mu_x=args.mu_x, mu_y=args.mu_y,
                  sigma_x=args.sigma_x, sigma_y=args.sigma_y)

    def need(*names):
        missing = [n for n in names if getattr(args, n) is None]
        if missing:
            raise CliError(
                f"family {args.family!r} needs --" + " --".join(m.replace("_", "-")
                                                                for m in missing)
            )

    try:
        if args.family == "normal":
            need("rho")
            return Normal(rho=args.rho, **common)
        if args.family == "elliptical_t":
            need("sigma_xy", "nu")
            return EllipticalT(sigma_xy=args.sigma_xy, nu=args.nu, **common)
        if args.family == "bvp1":
            need("delta")
            return BVP1(delta=args.delta, **common)
        if args.family == "bvp2":
            need("delta", "delta_y")
            return BVP2(delta=args.delta, delta_y=args.delta_y, **common)
        if args.family == "bvp3":
            need("delta", "delta_x", "delta_y")
            return BVP3(delta=args.delta, delta_x=args.delta_x,
                        delta_y=args.delta_y, **common)
    except DomainError as exc:
        raise CliError(str(exc)) from exc
    raise CliError(f"unknown family {args.family!r}")


def _add_family_flags(p: argparse.ArgumentParser):
    p.add_argument("--family",
                   choices=["normal", "elliptical_t", "bvp1", "bvp2", "bvp3"])
    p.add_argument("--mu-x", dest="mu_x", type=float, default=0.0)
    p.add_argument("--mu-y", dest="mu_y", type=float, default=0.0)
    p.add_argument("--sigma-x", dest="sigma_x", type=float, default=1.0)
    p.add_argument("--sigma-y", dest="sigma_y", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--sigma-xy", dest="sigma_xy", type=float, default=None)
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--delta-x", dest="delta_x", type=float, default=None)
    p.add_argument("--delta-y", dest="delta_y", type=float, default=None)


def _add_global_flags(p: argparse.ArgumentParser, default_format="csv"):
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", default="-", help="output path, or - for stdout")
    p.add_argument("--format", choices=["csv", "json"], default=default_format)


def load_pairs_csv(path) -> PairedSample:
    xs, ys = [], []
    try:
        with open(path, newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    xs.append(float(row[0]))
                    ys.append(float(row[1]))
                except (IndexError, ValueError):
                    continue  # header
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    if len(xs) < 3:
        raise CliError(f"no (x, y) rows found in {path}")
    return PairedSample(np.array(xs), np.array(ys), {"source": str(path)})


# ---------------------------------------------------------------------------
# output plumbing
# ---------------------------------------------------------------------------

def _emit(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _meta(args, **extra) -> dict:
    meta = {"version": __version__, "seed": args.seed}
    meta.update(extra)
    return meta


def _write_table(args, meta: dict, header, rows):
    """Emit rows of raw cells (floats, strings, None) as CSV or JSON.

    Floats are printed (or round-tripped, for JSON) at 12 significant
    digits; None becomes an empty CSV cell / JSON null.
    """
    if args.format == "json":
        def enc(v):
            return float(_fmt(v)) if isinstance(v, float) else v

        payload = {"meta": meta,
                   "results": [dict(zip(header, (enc(c) for c in row)))
                               for row in rows]}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
        return
    buf = io.StringIO()
    for key in sorted(meta):
        buf.write(f"# {key}={meta[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows([_cell(c) for c in row] for row in rows)
    _emit(buf.getvalue(), args.out)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return _fmt(value)
    return value


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_corr(args) -> int:
    w = parse_weight(args.weight)
    fam = build_family(args)
    data = load_pairs_csv(args.data) if args.data else None
    if fam is None and data is None:
        raise CliError("corr needs --data PATH or --family flags")

    methods = [args.method] if args.method != "all" else \
        ["empirical", "closed", "regression", "oracle"]
    rows = []
    for method in methods:
        try:
            if method == "empirical":
                s = data if data is not None else sample(fam, args.n, args.seed)
                rep = gini.empirical_cw(s, w, n_boot=args.bootstrap, seed=args.seed)
            elif method in ("closed", "regression", "oracle"):
                if fam is None:
                    if args.method == "all":
                        rows.append([method, None, None, w.describe(),
                                     "needs --family flags"])
                        continue
                    raise CliError(f"--method {method} needs --family flags")
                if method == "closed":
                    rep = gini.closed_cw(fam, w)
                elif method == "regression":
                    rep = gini.cw_via_regression(fam, w)
                else:
                    mean, se = oracle.mc_reference(fam, "cw", args.n, args.seed,
                                                   args.replications, weight=w)
                    rep = gini.CorrelationReport(mean, "oracle", se, w.describe())
            else:
                raise CliError(f"unknown method {method!r}")
        except (UnsupportedPairError, NoLinearRegressionError) as exc:
            if args.method != "all":
                raise
            rows.append([method, None, None, w.describe(), f"unsupported: {exc}"])
            continue
        rows.append([rep.method, rep.value, rep.std_error, rep.weight, ""])

    meta = _meta(args, weight=w.describe(), n=args.n,
                 family=fam.describe() if fam else "", data=args.data or "")
    _write_table(args, meta, ["method", "value", "std_error", "weight", "note"],
                 rows)
    return 0


def cmd_sample(args) -> int:
    fam = build_family(args)
    if fam is None:
        raise CliError("sample needs --family flags")
    if args.n < 1:
        raise CliError(f"need -n >= 1, got {args.n}")
    s = sample(fam, args.n, args.seed)
    if args.format == "json":
        payload = {"meta": _meta(args, family=fam.describe(), n=args.n),
                   "x": [float(_fmt(v)) for v in s.xs],
                   "y": [float(_fmt(v)) for v in s.ys]}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
        return 0
    buf = io.StringIO()
    buf.write(f"# version={__version__}\n# family={fam.describe()}\n")
    buf.write(f"# n={args.n}\n# seed={args.seed}\n")
    buf.write("x,y\n")
    for x, y in zip(s.xs, s.ys):
        buf.write(f"{_fmt(x)},{_fmt(y)}\n")
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_curves(args) -> int:
    if args.delta_y is None:
        raise CliError("curves needs --delta-y")
    if args.steps < 2 or not args.delta_max > args.delta_min:
        raise CliError("curves needs --delta-min < --delta-max and --steps >= 2")
    if args.delta_min <= 1.0:
        raise CliError("extended Gini needs delta > 1 across the sweep")
    deltas = np.linspace(args.delta_min, args.delta_max, args.steps)
    ginis, pearsons = [], []
    for d in deltas:
        fam = BVP2(delta=float(d), delta_y=args.delta_y)
        ginis.append(gini.closed_cw(fam, WeightFunction.power(args.gamma)).value)
        if d > 2.0 and fam.delta_y_star > 2.0:
            pearsons.append(pearson_closed_form(fam))
        else:
            pearsons.append(None)
    g = np.array(ginis)
    decreasing = bool(np.all(np.diff(g) < 0.0))
    finite_p = [p for p in pearsons if p is not None]
    interior_max = False
    if len(finite_p) >= 3:
        kmax = int(np.argmax(finite_p))
        interior_max = 0 < kmax < len(finite_p) - 1
    meta = _meta(args, delta_y=args.delta_y, gamma=args.gamma,
                 gini_strictly_decreasing=str(decreasing).lower(),
                 pearson_interior_max=str(interior_max).lower())
    rows = [[float(d), gv, pv] for d, gv, pv in zip(deltas, ginis, pearsons)]
    _write_table(args, meta, ["delta", "gini", "pearson"], rows)
    return 0


def cmd_surface(args) -> int:
    fam = build_family(args)
    if fam is None:
        raise CliError("surface needs --family flags")
    if args.x_steps < 2 or args.y_steps < 2:
        raise CliError("surface needs at least 2 steps per axis")
    if not (args.x_max > args.x_min and args.y_max > args.y_min):
        raise CliError("surface needs increasing axis ranges")
    if isinstance(fam, (BVP1, BVP2, BVP3)):
        if args.x_min < fam.mu_x or args.y_min < fam.mu_y:
            raise CliError(
                f"grid below support: need x >= {fam.mu_x:g} and y >= {fam.mu_y:g}"
            )
    xs = np.linspace(args.x_min, args.x_max, args.x_steps)
    ys = np.linspace(args.y_min, args.y_max, args.y_steps)
    rows = []
    for x in xs:
        vals = joint_ddf(fam, np.full_like(ys, x), ys)
        rows.extend([float(x), float(y), float(v)] for y, v in zip(ys, vals))
    meta = _meta(args, family=fam.describe())
    _write_table(args, meta, ["x", "y", "ddf"], rows)
    return 0


def cmd_price(args) -> int:
    try:
        portfolio = wipm.Portfolio.from_csv(args.portfolio)
    except (OSError, DomainError, ValueError) as exc:
        raise CliError(f"cannot load portfolio: {exc}") from exc
    w = parse_weight(args.weight)
    meta = _meta(args, portfolio=str(args.portfolio), weight=w.describe(),
                 orientation=args.orientation)
    if args.allocate:
        allocs = wipm.allocate(portfolio, w, orientation=args.orientation)
        agg = portfolio.aggregate
        total = wipm.gini_premium(PairedSample(agg, agg), w,
                                  orientation=args.orientation).premium
        results = [
            {"column": a.detail["column"], "premium": float(_fmt(a.premium)),
             "base": float(_fmt(a.base)), "loading": float(_fmt(a.loading))}
            for a in allocs
        ]
        payload = {
            "meta": meta,
            "allocations": results,
            "aggregate_premium": float(_fmt(total)),
            "allocation_sum": float(_fmt(sum(a.premium for a in allocs))),
        }
    else:
        agg = portfolio.aggregate
        results = []
        for j, name in enumerate(portfolio.names):
            res = wipm.gini_premium(
                PairedSample(portfolio.columns[:, j], agg), w,
                orientation=args.orientation)
            results.append({"column": name, "premium": float(_fmt(res.premium)),
                            "base": float(_fmt(res.base)),
                            "loading": float(_fmt(res.loading))})
        payload = {"meta": meta, "premiums": results}
    if args.format == "csv":
        rows = [[r["column"], r["premium"], r["base"], r["loading"]]
                for r in payload.get("allocations", payload.get("premiums"))]
        _write_table(args, meta, ["column", "premium", "base", "loading"], rows)
    else:
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    try:
        results = verify.run(args.suite)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(verify.format_table(results) + "\n", args.out)
    return 0 if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ginicorr",
        description="Weighted Gini correlations, bivariate Pareto families, "
                    "and Gini-type weighted insurance pricing.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("corr", help="correlation estimates from data or a family")
    p.add_argument("--data", help="CSV with columns x,y")
    _add_family_flags(p)
    p.add_argument("--weight", default="identity")
    p.add_argument("--method", default="closed",
                   choices=["empirical", "closed", "regression", "oracle", "all"])
    p.add_argument("-n", type=int, default=100_000,
                   help="sample size for empirical/oracle methods")
    p.add_argument("--replications", type=int, default=10)
    p.add_argument("--bootstrap", type=int, default=200,
                   help="bootstrap resamples for the empirical standard error "
                        "(0 disables)")
    _add_global_flags(p)
    p.set_defaults(fn=cmd_corr)

    p = sub.add_parser("sample", help="draw pairs from a family")
    _add_family_flags(p)
    p.add_argument("-n", type=int, default=1000)
    _add_global_flags(p)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("curves", help="extended Gini and Pearson vs delta (BVP2)")
    p.add_argument("--delta-min", dest="delta_min", type=float, default=2.05)
    p.add_argument("--delta-max", dest="delta_max", type=float, default=10.0)
    p.add_argument("--steps", type=int, default=60)
    p.add_argument("--delta-y", dest="delta_y", type=float, default=0.5254)
    p.add_argument("--gamma", type=float, default=1.0)
    _add_global_flags(p)
    p.set_defaults(fn=cmd_curves)

    p = sub.add_parser("surface", help="joint ddf values on a grid")
    _add_family_flags(p)
    p.add_argument("--x-min", dest="x_min", type=float, default=0.0)
    p.add_argument("--x-max", dest="x_max", type=float, default=5.0)
    p.add_argument("--x-steps", dest="x_steps", type=int, default=30)
    p.add_argument("--y-min", dest="y_min", type=float, default=0.0)
    p.add_argument("--y-max", dest="y_max", type=float, default=5.0)
    p.add_argument("--y-steps", dest="y_steps", type=int, default=30)
    _add_global_flags(p)
    p.set_defaults(fn=cmd_surface)

    p = sub.add_parser("price", help="Gini premiums / capital allocation for a portfolio CSV")
    p.add_argument("--portfolio", required=True)
    p.add_argument("--weight", default="identity")
    p.add_argument("--allocate", action="store_true",
                   help="price each column against the aggregate")
    p.add_argument("--orientation", choices=list(wipm.ORIENTATIONS), default="survival")
    _add_global_flags(p, default_format="json")
    p.set_defaults(fn=cmd_price)

    p = sub.add_parser("verify", help="run the self-verification suites")
    p.add_argument("suite", choices=list(verify.SUITES) + ["all"])
    _add_global_flags(p)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _USAGE_ERRORS as exc:
        suggestion = getattr(exc, "suggestion", None)
        hint = f" (try: {suggestion})" if suggestion else ""
        print(f"error: {exc}{hint}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    except GiniCorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
