"""
Command-line interface::

    polyeval generate (--coeffs FILE | --exp-taylor M | --geometric N) [options]
    polyeval evaluate REPORT MATRIX [--method scheme|ps|westreich] [--out FILE] [--force]
    polyeval sweep --exp-range A..B [--csv FILE]
    polyeval bench --table2 | --sizes N [N ...] [--trials K] [--seed S] [--csv FILE]

Exit codes: 0 success/stable, 1 hard error, 2 stability warning,
3 degree without a saving (use PS).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys

from . import bench
from .apps import exp_taylor_coeffs, geometric_coeffs, westreich_eval
from .matrixeval import evaluate_scheme, norm1, read_matrix_csv, write_matrix_csv
from .pipeline import generate
from .psm import ps_eval
from .report import dump_report, load_report
from .scheme import RecommendPSError

EXIT_OK, EXIT_ERROR, EXIT_WARNING, EXIT_USE_PS = 0, 1, 2, 3

log = logging.getLogger("polyeval")


def _parse_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}")
    return range(int(lo), int(hi) + 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polyeval", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="compute stable coefficients for a polynomial")
    src = g.add_mutually_exclusive_group(required=True)
    src.add_argument("--coeffs", metavar="FILE", help="JSON array of coefficient strings b_0..b_m")
    src.add_argument("--exp-taylor", type=int, metavar="M", help="Taylor polynomial of exp of degree M")
    src.add_argument("--geometric", type=int, metavar="N", help="geometric series I + A + ... + A^(N-1)")
    g.add_argument("--precision", default="double")
    g.add_argument("--type-pol", type=int, default=1, choices=(1, 2, 3))
    g.add_argument("--ndigits", type=int)
    g.add_argument("--s", type=int, dest="s")
    g.add_argument("--out", metavar="FILE", help="write the JSON report here instead of stdout")

    e = sub.add_parser("evaluate", help="evaluate a saved report on a CSV matrix")
    e.add_argument("report")
    e.add_argument("matrix")
    e.add_argument("--method", choices=("scheme", "ps", "westreich"), default="scheme")
    e.add_argument("--out", metavar="FILE", help="result CSV (default: stdout)")
    e.add_argument("--force", action="store_true", help="evaluate even if the report carries a warning")

    w = sub.add_parser("sweep", help="stability sweep over exp Taylor degrees")
    w.add_argument("--exp-range", type=_parse_range, required=True, metavar="A..B")
    w.add_argument("--csv", metavar="FILE")

    b = sub.add_parser("bench", help="geometric-series accuracy comparison")
    b.add_argument("--table2", action="store_true", help="sizes 100 and 1000 with 100 trials")
    b.add_argument("--with-10000", action="store_true", help="add the n=10000 row (slow)")
    b.add_argument("--sizes", type=int, nargs="+")
    b.add_argument("--trials", type=int)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--csv", metavar="FILE")
    return parser


def _load_coeffs(path):
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(x, (str, int)) for x in data):
        raise ValueError("coefficient file must hold a JSON array of strings")
    return [str(x) for x in data]


def cmd_generate(args) -> int:
    if args.coeffs:
        b = _load_coeffs(args.coeffs)
    elif args.exp_taylor is not None:
        b = exp_taylor_coeffs(args.exp_taylor)
    else:
        b = geometric_coeffs(args.geometric)
    report = generate(b, args.precision, args.type_pol, args.ndigits, args.s)
    if args.out:
        with open(args.out, "w") as fh:
            dump_report(report, fh)
    else:
        dump_report(report, sys.stdout)
    print(report.message, file=sys.stderr)
    return EXIT_WARNING if report.warning else EXIT_OK


def cmd_evaluate(args) -> int:
    rep = load_report(args.report)
    if rep.warning and not args.force:
        print("report carries a stability warning; pass --force to evaluate anyway", file=sys.stderr)
        return EXIT_WARNING
    dtype = rep.target.dtype
    A = read_matrix_csv(args.matrix, dtype=dtype)
    if args.method == "scheme":
        res = evaluate_scheme(A, rep.spec, rep.c_prec, rep.tail_prec)
    elif args.method == "ps":
        b = [dtype(float(x)) for x in rep.b]
        res = ps_eval(A, b)
    else:
        if any(x != 1 for x in rep.b):
            raise ValueError("the Westreich formulas only evaluate the geometric series")
        res = westreich_eval(A, rep.spec.m + 1)
    if args.out:
        with open(args.out, "w") as fh:
            write_matrix_csv(res.value, fh)
    else:
        write_matrix_csv(res.value, sys.stdout)
    print(json.dumps({"product_count": res.product_count, "norm1": norm1(res.value)}))
    return EXIT_OK


def cmd_sweep(args) -> int:
    rows = bench.sweep_exp(list(args.exp_range))
    header = ["m", "s", "p", "savings", "n_real", "er_min", "warning"]
    fh = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for r in rows:
            writer.writerow([r.m, r.s, r.p, r.savings, r.n_real, repr(r.er_min), int(r.warning)])
    finally:
        if args.csv:
            fh.close()
    worst = max(rows, key=lambda r: r.er_min)
    print(f"max er_min = {worst.er_min:.3g} at m={worst.m} (s={worst.s}, p={worst.p})", file=sys.stderr)
    return EXIT_WARNING if any(r.warning for r in rows) else EXIT_OK


def cmd_bench(args) -> int:
    sizes = args.sizes or ([100, 1000] if args.table2 else [100])
    if args.with_10000:
        sizes = list(sizes) + [10000]
    trials = args.trials or (100 if args.table2 else 10)
    rows = bench.bench_geometric(sizes, trials, args.seed)
    fh = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["n", "scheme_vs_ps", "scheme_vs_w", "w_vs_ps"])
        for r in rows:
            writer.writerow([r.n, bench.fmt(r.scheme_vs_ps), bench.fmt(r.scheme_vs_w), bench.fmt(r.w_vs_ps)])
    finally:
        if args.csv:
            fh.close()
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "evaluate": cmd_evaluate, "sweep": cmd_sweep, "bench": cmd_bench}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except RecommendPSError as exc:
        print(f"recommend PS: {exc}", file=sys.stderr)
        return EXIT_USE_PS
    except (ValueError, ArithmeticError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
