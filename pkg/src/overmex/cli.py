"""Command line entry point: ``overmex {table,verify,density,eta,asym}``.

Exit codes: 0 pass, 1 verification mismatch, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import contextlib
import logging
import sys
from pathlib import Path

from . import commands, eta, oracle
from .store import FORMATS, TableCache, UnsupportedFormat, write_rows

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


def _common(p: argparse.ArgumentParser, need_k=False):
    p.add_argument("--r", type=int, default=1, help="gap order r (default 1)")
    p.add_argument("--k", type=int, default=None if need_k else 1,
                   required=need_k, help="power of two modulus exponent")
    p.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=FORMATS, default="csv")
    p.add_argument("--cache-dir", type=Path, default=None)
    p.add_argument("--no-cache", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overmex", description="Least r-gaps of overpartitions: tables and checks."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="write sigma_r mex-bar(n) for n <= max-n")
    _common(p)
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser("verify", help="run an identity check")
    _common(p)
    p.add_argument("--suite", choices=commands.SUITES, required=True)
    p.add_argument("--max-n", type=int, required=True,
                   help="range of n (number of terms for eta-congruence)")
    p.add_argument("--oracle-max", type=int, default=20,
                   help="brute force bound inside the d3 suite")
    p.add_argument("--cap", type=int, default=oracle.DEFAULT_CAP,
                   help="enumeration cap for brute force suites")

    p = sub.add_parser("density", help="count sigma_r mex-bar(n) != 0 mod 2^k for n <= x")
    _common(p)
    p.add_argument("--x", type=int, required=True)

    p = sub.add_parser("eta", help="certify f_{r,k} as a holomorphic modular form")
    _common(p, need_k=True)

    p = sub.add_parser("asym", help="compare exact values with the asymptotic formula")
    _common(p)
    p.add_argument("--points", type=int, nargs="*", default=[])
    p.add_argument("--max-n", type=int, default=100_000, help="truncation budget")
    return parser


@contextlib.contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _cache(args):
    if args.no_cache:
        return None
    return TableCache(args.cache_dir)


def _run(args) -> int:
    if args.command == "table":
        rows = commands.cmd_table(args.r, args.max_n, _cache(args))
        with _output(args.out) as fh:
            write_rows(fh, ("n", "value"), rows, args.format)
        return EXIT_OK

    if args.command == "verify":
        report = commands.cmd_verify(args.suite, args.max_n, r=args.r, k=args.k,
                                     oracle_max=args.oracle_max, cap=args.cap)
        with _output(args.out) as fh:
            fh.write("\n".join(report.lines()) + "\n")
        return EXIT_OK if report.passed else EXIT_MISMATCH

    if args.command == "density":
        report = commands.cmd_density(args.r, args.k, args.x, _cache(args))
        if report.warning:
            logging.getLogger("overmex").warning(report.warning)
        with _output(args.out) as fh:
            write_rows(fh, report.HEADER, [report.row()], args.format)
        return EXIT_OK

    if args.command == "eta":
        report = commands.cmd_eta(args.r, args.k)
        with _output(args.out) as fh:
            fh.write("\n".join(report.lines()) + "\n")
        return EXIT_OK if report.cusps.holomorphic and all(report.ghn) else EXIT_MISMATCH

    if args.command == "asym":
        rows = commands.cmd_asym(args.r, args.points, _cache(args), max_n=args.max_n)
        with _output(args.out) as fh:
            write_rows(fh, commands.ASYM_HEADER, rows, args.format)
        return EXIT_OK

    raise AssertionError(args.command)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _run(args)
    except (eta.UnsupportedR, eta.KTooSmall, oracle.CapExceeded, UnsupportedFormat,
            ValueError) as exc:
        print(f"overmex: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"overmex: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
