"""Command-line front end.

Every subcommand writes one CSV or JSON file whose header records the run
configuration and library version, and prints a short summary.  Exit codes:
0 success, 1 criterion violated, 2 usage error, 3 numeric budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from . import __version__
from .errors import (CacheError, CapacityError, ConditioningError, DomainError,
                     PrecisionBudgetError, ZeroTableError)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

COLUMNS = {
    "zeta-table": ["m", "zeta_2m", "inv_zeta_2m"],
    "ck": ["k", "c_k", "precision"],
    "riesz": ["x", "R_x"],
    "bridge": ["k", "r_over_k", "c_k", "gap", "bound", "allowance", "ratio", "passed"],
    "identity": ["x", "K", "lhs", "rhs", "discrepancy"],
    "altsum": ["method", "value", "uncertainty"],
    "lagarias": ["n", "sigma", "threshold", "ratio", "near_miss"],
    "koch": ["x", "pi_x", "li_x", "ratio"],
    "li": ["n", "lambda_n", "tail_bound", "lower", "verdict"],
    "phi": ["t", "phi", "terms_used"],
    "hplot": ["z", "lambda", "H", "quadrature_error"],
    "zeroscan": ["index", "lo", "hi", "z"],
}

# options that never change file contents and so stay out of the header
_NOT_CONFIG = {"out", "workers", "cache_dir", "func"}


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    precision: int
    fmt: str
    params: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, args):
        params = {k: v for k, v in sorted(vars(args).items())
                  if k not in _NOT_CONFIG | {"subcommand", "precision", "format"}}
        return cls(args.subcommand, args.precision, args.format, params)

    def as_dict(self):
        return {"subcommand": self.subcommand, "precision": self.precision,
                "format": self.fmt, **self.params}

    def header(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))


@dataclass
class Result:
    rows: list
    summary: dict
    violated: bool = False
    stdout: str | None = None


def fmt_value(v, digits: int) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, str):
        return v
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "item"):  # numpy scalar
        return fmt_value(v.item(), digits)
    return mpmath.nstr(v, digits, strip_zeros=False)


def render(config: RunConfig, columns, result: Result) -> str:
    digits = config.precision
    rows = [[fmt_value(v, digits) for v in row] for row in result.rows]
    summary = {k: (v if isinstance(v, (bool, int, str, list, type(None))) else fmt_value(v, digits))
               for k, v in result.summary.items()}
    if config.fmt == "json":
        doc = {"rhlab_version": __version__, "config": config.as_dict(), "columns": columns,
               "rows": rows, "summary": summary}
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# rhlab {__version__}\n")
    buf.write(f"# config {config.header()}\n")
    buf.write(f"# summary {json.dumps(summary, sort_keys=True, separators=(',', ':'))}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    return buf.getvalue()


def _num(text):
    try:
        return mpmath.mpmathify(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _grid(lo, hi, step):
    if step <= 0:
        raise DomainError("step must be positive")
    n = int(mpmath.floor((hi - lo) / step + mpf("1e-12")))
    return [lo + i * step for i in range(n + 1)]


# --------------------------------------------------------------------------
# subcommands

def cmd_zeta_table(args):
    from .cache import load_or_build
    from .mp_kernel import zeta_even_table
    if args.cache_dir is not None or args.use_cache:
        table = load_or_build(args.count, args.precision, args.cache_dir)
    else:
        table = zeta_even_table(args.count, args.precision)
    rows = [(m, table.zeta(m), table.inverse(m)) for m in range(1, args.count + 1)]
    return Result(rows, {"count": args.count})


def cmd_ck(args):
    from .baez_duarte import ck_range
    policy = None
    if args.working_precision is not None:
        policy = lambda k: args.working_precision  # noqa: E731
    series = ck_range(args.kmin, args.kmax, args.stride, args.precision, policy,
                      workers=args.workers)
    rows = [(e.k, e.value, e.precision_used) for e in series]
    stat = series.envelope_stat
    return Result(rows, {"rows": len(rows), "envelope_sup_k34": stat,
                         "envelope_argmax": series.envelope_argmax})


def cmd_riesz(args):
    from .riesz import riesz_R
    xs = _grid(args.xmin, args.xmax, args.step)
    rows = [(x, riesz_R(x, args.precision)) for x in xs]
    return Result(rows, {"rows": len(rows)})


def cmd_bridge(args):
    from .riesz import bridge_check
    reports = [bridge_check(k, args.precision) for k in args.k]
    rows = [(r.k, r.r_over_k, r.c_k, r.gap, r.bound, r.allowance, r.ratio, r.passed)
            for r in reports]
    failed = [r.k for r in reports if not r.passed]
    return Result(rows, {"failed": failed, "max_ratio": max(r.ratio for r in reports)},
                  violated=bool(failed))


def cmd_identity(args):
    from .riesz import series_identity_sides
    lhs, rhs = series_identity_sides(args.x, args.K, args.precision)
    with mp.workdps(args.precision + 10):
        d = abs(lhs - rhs)
    violated = d > args.tol
    return Result([(args.x, args.K, lhs, rhs, d)], {"discrepancy": d, "tol": args.tol},
                  violated=bool(violated))


def cmd_altsum(args):
    from .baez_duarte import alternating_sum_closed, alternating_sum_direct
    if args.method == "closed":
        value = alternating_sum_closed(args.precision)
        unc = mpf(0)
    else:
        res = alternating_sum_direct(args.N, args.depth, args.precision)
        value, unc = res.value, res.uncertainty
    text = mpmath.nstr(value, args.precision, strip_zeros=False)
    return Result([(args.method, value, unc)], {"value": text}, stdout=text)


def cmd_lagarias(args):
    from .classical import lagarias_scan
    rep = lagarias_scan(args.N, args.near_band, keep=args.keep)
    cut = 1 - args.near_band
    rows = [(int(n), int(s), float(t), float(r), bool(r >= cut))
            for n, s, t, r in zip(rep.index, rep.lhs, rep.threshold, rep.ratio)]
    summary = rep.summary()
    return Result(rows, summary, violated=len(summary["violations"]) > 0)


def cmd_koch(args):
    from .classical import default_koch_checkpoints, koch_check
    cps = default_koch_checkpoints(int(args.xmax), int(args.xmin))
    rep = koch_check(cps, args.precision, args.near_band)
    rows = [(int(x), int(p), li, float(r))
            for x, p, li, r in zip(rep.index, rep.extra["pi"], rep.extra["li"], rep.ratio)]
    summary = rep.summary()
    summary["bound"] = args.bound
    return Result(rows, summary, violated=rep.max_ratio >= args.bound)


def cmd_li(args):
    from .li_coefficients import li_lambdas, load_zeros
    zeros = load_zeros(args.zeros)
    if args.count is not None:
        zeros = zeros.head(args.count)
    ests = li_lambdas(range(args.nmin, args.nmax + 1), zeros, args.precision)
    rows = [(e.n, e.value, e.tail_bound, e.lower, e.verdict) for e in ests]
    negative = [e.n for e in ests if e.value + e.tail_bound < 0]
    undecided = [e.n for e in ests if e.verdict != "positive"]
    return Result(rows, {"zeros_used": zeros.count, "undecided": undecided,
                         "negative": negative}, violated=bool(negative))


def cmd_phi(args):
    from .debruijn import phi
    rows = []
    for t in _grid(args.tmin, args.tmax, args.step):
        p = phi(t, args.precision)
        rows.append((t, p.value, p.terms_used))
    return Result(rows, {"rows": len(rows)})


def cmd_hplot(args):
    from .debruijn import HIntegrator
    integ = HIntegrator(args.lam, args.precision)
    rows = []
    for z in _grid(args.zmin, args.zmax, args.step):
        ev = integ.evaluate(z)
        rows.append((z, args.lam, ev.value, ev.quadrature_error))
    return Result(rows, {"rows": len(rows)})


def cmd_zeroscan(args):
    from .debruijn import real_zero_scan
    found = real_zero_scan(args.lam, (args.zmin, args.zmax), args.step, args.precision, args.tol)
    rows = [(i + 1, b.lo, b.hi, b.z) for i, b in enumerate(found)]
    summary = {"zeros": len(found)}
    if args.zeros:
        from .li_coefficients import load_zeros
        table = load_zeros(args.zeros)
        k = min(len(found), table.count)
        if k:
            with mp.workdps(30):
                dev = max(abs(found[i].z - 2 * mpf(table.gammas[i])) for i in range(k))
            summary["max_dev_from_2gamma"] = dev
    return Result(rows, summary)


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=30, help="decimal digits (default 30)")
    common.add_argument("--out", type=Path, default=None,
                        help="output file (default <subcommand>.<format> in the current directory)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--cache-dir", type=Path, default=None)

    p = argparse.ArgumentParser(prog="rhlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"rhlab {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("zeta-table", cmd_zeta_table, "zeta(2m) and 1/zeta(2m)")
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--use-cache", action="store_true", help="use the default cache directory")

    sp = add("ck", cmd_ck, "Baez-Duarte coefficients c_k")
    sp.add_argument("--kmin", type=int, default=0)
    sp.add_argument("--kmax", type=int, default=100)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--working-precision", type=int, default=None)

    sp = add("riesz", cmd_riesz, "Riesz function R(x) on a grid")
    sp.add_argument("--xmin", type=_num, default=mpf(0))
    sp.add_argument("--xmax", type=_num, default=mpf(10))
    sp.add_argument("--step", type=_num, default=mpf(1))

    sp = add("bridge", cmd_bridge, "R(k)/k against c_k")
    sp.add_argument("--k", type=int, nargs="+", default=[50, 100, 200, 500, 1000])

    sp = add("identity", cmd_identity, "generating-function identity at x")
    sp.add_argument("--x", type=_num, default=mpf(10))
    sp.add_argument("--K", type=int, default=100)
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("altsum", cmd_altsum, "sum of (-1)^k c_k")
    sp.add_argument("--method", choices=("closed", "direct"), default="closed")
    sp.add_argument("--N", type=int, default=200)
    sp.add_argument("--depth", type=int, default=4)

    sp = add("lagarias", cmd_lagarias, "sigma(n) against H_n + exp(H_n) log H_n")
    sp.add_argument("--N", type=int, default=10**6)
    sp.add_argument("--near-band", type=float, default=0.05)
    sp.add_argument("--keep", choices=("near", "all"), default="near")

    sp = add("koch", cmd_koch, "|pi(x) - Li(x)| / (sqrt(x) ln x)")
    sp.add_argument("--xmin", type=float, default=100)
    sp.add_argument("--xmax", type=float, default=1e6)
    sp.add_argument("--near-band", type=float, default=0.05)
    sp.add_argument("--bound", type=float, default=0.15)

    sp = add("li", cmd_li, "Li coefficients from a zero table")
    sp.add_argument("--zeros", type=Path, required=True)
    sp.add_argument("--count", type=int, default=None, help="use only the first COUNT zeros")
    sp.add_argument("--nmin", type=int, default=1)
    sp.add_argument("--nmax", type=int, default=20)

    sp = add("phi", cmd_phi, "Polya kernel Phi(t)")
    sp.add_argument("--tmin", type=_num, default=mpf(0))
    sp.add_argument("--tmax", type=_num, default=mpf(1))
    sp.add_argument("--step", type=_num, default=mpf("0.05"))

    for name, func, help_ in (("hplot", cmd_hplot, "H(z, lambda) on a grid"),
                              ("zeroscan", cmd_zeroscan, "real zeros of H(., lambda)")):
        sp = add(name, func, help_)
        sp.add_argument("--lam", type=_num, default=mpf(0))
        sp.add_argument("--zmin", type=_num, default=mpf(0) if name == "hplot" else mpf(1))
        sp.add_argument("--zmax", type=_num, default=mpf(50) if name == "hplot" else mpf(100))
        sp.add_argument("--step", type=_num, default=mpf(1) if name == "hplot" else mpf("0.5"))
        if name == "zeroscan":
            sp.add_argument("--tol", type=float, default=1e-8)
            sp.add_argument("--zeros", type=Path, default=None,
                            help="zero table to compare against 2*gamma_k")
    return p


def _jsonable(v):
    if isinstance(v, Path):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return mpmath.nstr(v, 30)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.precision < 10:
        parser.print_usage(sys.stderr)
        print(f"rhlab: error: --precision must be >= 10, got {args.precision}", file=sys.stderr)
        return EXIT_USAGE
    if args.workers < 1:
        print("rhlab: error: --workers must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    raw = {k: _jsonable(v) for k, v in vars(args).items() if k != "func"}
    config = RunConfig.from_args(argparse.Namespace(**raw))
    try:
        result = args.func(args)
    except (PrecisionBudgetError, ConditioningError, CapacityError) as exc:
        print(f"rhlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (DomainError, ZeroTableError, CacheError) as exc:
        print(f"rhlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = args.out or Path(f"{args.subcommand}.{args.format}")
    text = render(config, COLUMNS[args.subcommand], result)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="ascii")
    if result.stdout is not None:
        print(result.stdout)
    for key, value in result.summary.items():
        print(f"{key}: {_jsonable(value) if not isinstance(value, list) or len(value) < 20 else f'{len(value)} items'}")
    print(f"wrote {out}")
    return EXIT_VIOLATION if result.violated else EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
