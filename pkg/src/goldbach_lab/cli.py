"""Command-line front end.

One subcommand per invocation; reports stream to stdout (or ``--output``) as
JSON lines or CSV.  Exit status: 0 success, 1 invalid usage or arguments,
2 internal, resource or verification failure.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import os
import secrets
import sys
from pathlib import Path

from . import __version__
from .cache import cache_path_for, load_table, save_table
from .errors import CorruptCacheError, GoldbachError, GoldbachValueError, ResourceError
from .identities import euler_bivariate_check, verify_derivative_identities, verify_lemma1
from .moments import (
    QUANTITIES,
    cdf_point,
    convergence_sweep,
    exact_moment,
    exact_variance,
    kolmogorov_distance,
)
from .primes import build_prime_table
from .reports import ReportWriter
from .sampler import (
    enumerate_partitions,
    make_stream,
    sample_numbers,
    summarize_draws,
    two_step_estimate,
    two_step_exact,
)
from .series import (
    TAUBERIAN_QUANTITIES,
    eval_series,
    lemma2_constants,
    lemma2_ratios,
    required_limit,
    tauberian_consistency,
    tauberian_ratio,
)
from .table import build_table, cardinality

log = logging.getLogger("goldbach_lab")

MOMENT_FIELDS = [
    "quantity", "n", "order", "exact_num", "exact_den", "float", "limit", "deviation",
    "u", "k", "argmax_k", "left_limit", "method",
]


class UsageError(GoldbachValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _int_list(text: str) -> list[int]:
    try:
        return [_big_int(t) for t in text.split(",") if t.strip()]
    except argparse.ArgumentTypeError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _big_int(text: str) -> int:
    # accepts 1e6 style as well as plain integers
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        value = None
    if value is None or not value.is_integer():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="goldbach-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    def output_opts(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", type=Path, help="write reports here instead of stdout")

    def table_opts(p, required_n=False):
        p.add_argument("--n", type=_big_int, required=required_n, help="half of the largest even number")
        if not required_n:
            p.add_argument("--table", type=Path, help="load counts from a cache file")
        p.add_argument("--method", choices=("convolution", "direct"), default="convolution")
        p.add_argument("--transform", choices=("fft", "ntt"), default="fft")
        p.add_argument("--cache-dir", type=Path, help="defaults to $GOLDBACH_CACHE_DIR")

    def seed_opts(p):
        p.add_argument("--seed", type=_big_int, help="64-bit seed; generated and printed if omitted")
        p.add_argument("--stream", type=_big_int, default=0, help="stream id (default 0)")
        p.add_argument("--trials", type=_big_int, default=100_000)

    p = sub.add_parser("count", help="build Q2 counts and write the cache file")
    table_opts(p, required_n=True)
    p.add_argument("--out", type=Path, help="cache file (default: cache dir)")
    p.add_argument("--force", action="store_true", help="rebuild even if a valid cache exists")
    output_opts(p)

    p = sub.add_parser("verify", help="generating-function identities and Euler product check")
    table_opts(p)
    p.add_argument("--euler-n", type=int, default=60)
    p.add_argument("--euler-m", type=int, default=5)
    output_opts(p)

    p = sub.add_parser("sample", help="Monte Carlo draws of G_n against exact moments")
    table_opts(p)
    seed_opts(p)
    p.add_argument("--emit-draws", action="store_true", help="also write one row per draw")
    output_opts(p)

    p = sub.add_parser("partitions", help="list the Goldbach partitions of one even m")
    p.add_argument("--m", type=_big_int, required=True)
    output_opts(p)

    p = sub.add_parser("moments", help="exact moments and variance of G_n / n")
    table_opts(p)
    p.add_argument("--orders", type=_int_list, default=[1, 2])
    output_opts(p)

    p = sub.add_parser("cdf", help="Kolmogorov distance to F(u) = u^2")
    table_opts(p)
    p.add_argument("--u", type=_float_list, default=[], help="also report the CDF at these points")
    output_opts(p)

    p = sub.add_parser("sweep", help="convergence of moments and CDF distance over n")
    table_opts(p)
    p.add_argument("--n-list", type=_int_list, required=True)
    p.add_argument("--quantities", type=_str_list, default=list(QUANTITIES))
    output_opts(p)

    p = sub.add_parser("series", help="f, f', f'' near z = 1 with certified tails")
    p.add_argument("--z", type=_float_list, required=True)
    p.add_argument("--eps", type=float, default=1e-9)
    p.add_argument("--relative", action="store_true", help="eps is relative to each series value")
    p.add_argument("--limit", type=_big_int, help="sieve limit (default: smallest certified)")
    p.add_argument("--max-limit", type=_big_int, default=400_000_000)
    output_opts(p)

    p = sub.add_parser("tauberian", help="partial sums against their n^p / log^2 n asymptotes")
    table_opts(p)
    p.add_argument("--at", type=_int_list, help="evaluation points (default: n)")
    p.add_argument("--quantities", type=_str_list, default=list(TAUBERIAN_QUANTITIES))
    output_opts(p)

    p = sub.add_parser("twostep", help="estimate Pr(R_n <= G_n)")
    table_opts(p)
    seed_opts(p)
    output_opts(p)
    return parser


def _resolve_table(args, need_n: int | None = None):
    if getattr(args, "table", None):
        table = load_table(args.table)
        log.info("loaded %s (n=%d)", args.table, table.n)
        return table
    n = args.n if args.n is not None else need_n
    if n is None:
        raise UsageError("either --n or --table is required")
    path = cache_path_for(n, args.cache_dir)
    if path.exists():
        try:
            return load_table(path)
        except CorruptCacheError as exc:
            log.warning("ignoring cache: %s", exc)
    kwargs = {"transform": args.transform} if args.method == "convolution" else {}
    log.info("building table n=%d by %s", n, args.method)
    return build_table(n, args.method, **kwargs)


def _seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(64)
        print(f"seed={args.seed}", file=sys.stderr)
    return args.seed


def cmd_count(args, out):
    path = args.out or cache_path_for(args.n, args.cache_dir)
    rebuilt = True
    table = None
    if path.exists() and not args.force:
        try:
            cached = load_table(path)
            if cached.n == args.n:
                table, rebuilt = cached, False
        except CorruptCacheError as exc:
            log.warning("rebuilding: %s", exc)
    if table is None:
        kwargs = {"transform": args.transform} if args.method == "convolution" else {}
        table = build_table(args.n, args.method, **kwargs)
        path.parent.mkdir(parents=True, exist_ok=True)
        save_table(table, path)
    w = ReportWriter(out, args.format, ["n", "cardinality", "path", "rebuilt", "method"], _meta(table))
    w.write({"n": table.n, "cardinality": cardinality(table), "path": str(path), "rebuilt": rebuilt})
    return 0


def _meta(table=None, seed=None, stream=None) -> dict:
    meta = {"version": __version__}
    if table is not None:
        meta["method"] = table.method_tag
    if seed is not None:
        meta["seed"] = seed
        meta["stream_id"] = stream
    return meta


def cmd_verify(args, out):
    table = _resolve_table(args)
    primes = build_prime_table(2 * table.n)
    w = ReportWriter(out, args.format, ["check", "n", "max_residual"], _meta(table))
    first, second = verify_derivative_identities(table, primes)
    results = [
        ("lemma1", table.n, verify_lemma1(table, primes)),
        ("first_derivative", table.n, first),
        ("second_derivative", table.n, second),
        ("euler_product", args.euler_n, euler_bivariate_check(args.euler_n, args.euler_m)),
    ]
    for check, n, residual in results:
        w.write({"check": check, "n": n, "max_residual": residual})
    return 0 if all(r == 0 for _, _, r in results) else 2


def cmd_sample(args, out):
    table = _resolve_table(args)
    seed = _seed(args)
    stream = make_stream(table, seed, args.stream)
    ks = sample_numbers(stream, args.trials)
    s = summarize_draws(table.n, ks)
    mean = exact_moment(table, 1).exact
    var = exact_variance(table).exact
    fields = ["n", "draws", "mean", "mean_se", "exact_mean", "mean_z",
              "variance", "variance_se", "exact_variance", "variance_z"]
    meta = _meta(table, seed, args.stream)
    if args.emit_draws:
        dw = ReportWriter(out, args.format, ["draw", "k", "m"], meta)
        for i, k in enumerate(ks.tolist()):
            dw.write({"draw": i, "k": k, "m": 2 * k})
        if args.format == "csv":
            out.write("\n")
    w = ReportWriter(out, args.format, fields, meta)
    w.write({
        "n": s.n, "draws": s.draws,
        "mean": s.mean, "mean_se": s.mean_se, "exact_mean": float(mean),
        "mean_z": (s.mean - float(mean)) / s.mean_se if s.mean_se else 0.0,
        "variance": s.variance, "variance_se": s.variance_se, "exact_variance": float(var),
        "variance_z": (s.variance - float(var)) / s.variance_se if s.variance_se else 0.0,
    })
    return 0


def cmd_partitions(args, out):
    primes = build_prime_table(max(args.m, 3))
    w = ReportWriter(out, args.format, ["m", "p", "q"], _meta())
    for part in enumerate_partitions(primes, args.m):
        w.write(part._asdict())
    return 0


def cmd_moments(args, out):
    table = _resolve_table(args)
    w = ReportWriter(out, args.format, MOMENT_FIELDS, _meta(table))
    for r in args.orders:
        w.write(exact_moment(table, r).as_row())
    w.write(exact_variance(table).as_row())
    return 0


def cmd_cdf(args, out):
    table = _resolve_table(args)
    w = ReportWriter(out, args.format, MOMENT_FIELDS, _meta(table))
    rep = kolmogorov_distance(table)
    w.write({**rep.as_row(), "argmax_k": rep.argmax_k, "left_limit": rep.left_limit})
    for u in args.u:
        pt = cdf_point(table, u)
        w.write({
            "quantity": "cdf_point", "n": table.n, "u": u, "k": pt["k"],
            "float": pt["cdf"], "limit": pt["limit_cdf"],
            "deviation": abs(pt["cdf"] - pt["limit_cdf"]), "method": table.method_tag,
        })
    return 0


def cmd_sweep(args, out):
    n_list = args.n_list
    if not n_list:
        raise UsageError("--n-list is empty")
    table = _resolve_table(args, need_n=max(n_list))
    w = ReportWriter(out, args.format, MOMENT_FIELDS, _meta(table))
    builder = None
    if table.n < max(n_list):
        builder = lambda n: build_table(n, args.method)  # noqa: E731
    for rep in convergence_sweep(n_list, args.quantities, table=table, builder=builder):
        row = rep.as_row()
        if row["quantity"] == "kolmogorov":
            row.update(argmax_k=rep.argmax_k, left_limit=rep.left_limit)
        w.write(row)
    return 0


def cmd_series(args, out):
    fields = ["z", "f", "f_prime", "f_double_prime", "p_max", "tail_bound", "eps", "relative",
              "ratio_f", "ratio_f_prime", "ratio_f_double_prime",
              "const_f", "const_f_prime", "const_f_double_prime", "sieve_limit"]
    w = ReportWriter(out, args.format, fields, _meta())
    primes = None
    for z in args.z:
        if not 0 <= z < 1:
            raise UsageError(f"z must lie in [0, 1), got {z}")
        if args.limit:
            limit = args.limit
        elif args.relative:
            limit = min(args.max_limit, max(1000, int(40 / (1 - z))))
        else:
            limit = min(args.max_limit, max(1000, required_limit(z, args.eps)))
        for _ in range(4):
            if primes is None or primes.limit < limit:
                primes = build_prime_table(limit)
            try:
                point = eval_series(primes, z, args.eps, args.relative)
                break
            except ResourceError:
                if args.limit:
                    raise
                scale = (1.0, 1.0, 1.0)
                if args.relative:
                    p = eval_series(primes, z, float("inf"), True)
                    scale = (p.f, p.f_prime, p.f_double_prime)
                limit = int(required_limit(z, args.eps, scale) * 1.05) + 1
                if limit > args.max_limit:
                    raise ResourceError(f"z={z} needs a sieve limit of {limit} > --max-limit {args.max_limit}")
        else:
            raise ResourceError(f"could not certify z={z}")
        row = {**point.as_row(), "sieve_limit": primes.limit}
        if z >= 0.9:
            r, c = lemma2_ratios(point), lemma2_constants(point)
            row.update(ratio_f=r.f, ratio_f_prime=r.f_prime, ratio_f_double_prime=r.f_double_prime,
                       const_f=c.f, const_f_prime=c.f_prime, const_f_double_prime=c.f_double_prime)
        w.write(row)
    return 0


def cmd_tauberian(args, out):
    table = _resolve_table(args)
    w = ReportWriter(out, args.format,
                     ["quantity", "n", "measured", "predicted", "ratio", "implied_constant", "consistency"],
                     _meta(table))
    for n in args.at or [table.n]:
        consistency = tauberian_consistency(table, n)
        for q in args.quantities:
            w.write({**tauberian_ratio(table, q, n).as_row(), "consistency": str(consistency)})
    return 0


def cmd_twostep(args, out):
    table = _resolve_table(args)
    seed = _seed(args)
    est = two_step_estimate(make_stream(table, seed, args.stream), args.trials)
    exact = two_step_exact(table)
    mean = exact_moment(table, 1).exact
    w = ReportWriter(out, args.format,
                     ["n", "trials", "hits", "estimate", "se", "exact_two_step", "exact_mean", "gap"],
                     _meta(table, seed, args.stream))
    w.write({"n": est.n, "trials": est.trials, "hits": est.hits, "estimate": est.estimate, "se": est.se,
             "exact_two_step": float(exact), "exact_mean": float(mean), "gap": float(exact - mean)})
    return 0


COMMANDS = {
    "count": cmd_count,
    "verify": cmd_verify,
    "sample": cmd_sample,
    "partitions": cmd_partitions,
    "moments": cmd_moments,
    "cdf": cmd_cdf,
    "sweep": cmd_sweep,
    "series": cmd_series,
    "tauberian": cmd_tauberian,
    "twostep": cmd_twostep,
}


def run(argv=None, stdout=None) -> int:
    """Parse ``argv``, run one subcommand, return the exit status."""
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        with contextlib.ExitStack() as stack:
            out = stdout
            if getattr(args, "output", None):
                out = stack.enter_context(open(args.output, "w", newline=""))
            return COMMANDS[args.command](args, out)
    except BrokenPipeError:
        # reader went away (e.g. piped into head); not an error worth reporting
        with contextlib.suppress(OSError):
            sys.stdout = open(os.devnull, "w")
        return 0
    except GoldbachValueError as exc:
        print(f"goldbach-lab {args.command}: {exc}", file=sys.stderr)
        return 1
    except (GoldbachError, OSError, MemoryError) as exc:
        print(f"goldbach-lab {args.command}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
