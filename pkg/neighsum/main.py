#!/usr/bin/env python

# neighsum: exact neighbour-sum boards
# Usage:
#   neighsum exists --family square --dims 5
#   neighsum count --d 3 --n-range 2:17
#   neighsum fill --mode semi --rows primes.txt --cols fib.txt --window 6x6

import argparse
import json
import sys
from enum import IntEnum
from fractions import Fraction

from . import logs
from .boardio import basis_to_csv, read_board, read_cross, read_sequence, render_ascii, write_board
from .config import FORMATS, load_config, validate_config
from .cyclotomic import g, valuation_eta, valuation_omega
from .errors import DomainError, NeighsumError, UnsupportedSpecError
from .existence import (
    count_hypercube,
    count_sequence,
    d3_converse_scan,
    decomposition_certificate,
    kernel_verdict,
    neumann_square_report,
    rational_solutions_scan,
    rule_verdict,
    spectral_search,
    sufficient_decomposition,
)
from .generators import basis_boards, fill_infinite, fill_semi_infinite
from .grid import FAMILIES, build_operator, family_spec, hypercube_side, verify_board
from .linalg import kernel_basis
from .logs import _dbg, _err, _log
from .models import SequencePair

VERSION = "0.1.0"

METHODS = ("rule", "spectral", "kernel", "all")


class ExitCode(IntEnum):
    SUCCESS = 0
    FAILED = 1
    ERROR = 2
    UNHANDLED = 9


def _ints(text):
    return [int(x) for x in text.replace(",", " ").split()]


class _FlattenInts(argparse.Action):
    """Collects `--dims 4 6`, `--dims 4,6` or `--dims '4 6'` into one list."""

    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, [x for chunk in values for x in chunk])


def _range(text):
    try:
        lo, hi = text.split(":")
        return int(lo), int(hi)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected <a>:<b>, got '{text}'") from e


def _window(text):
    try:
        rows, cols = text.lower().split("x")
        return int(rows), int(cols)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected RxC, got '{text}'") from e


def _common_flags(suppress=False):
    """Flags accepted both before and after the subcommand."""
    default = argparse.SUPPRESS if suppress else None
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--config", default=default, help="Path to config file", metavar="FILE")
    parser.add_argument("--threads", type=int, default=default, help="Worker processes for counting", metavar="N")
    parser.add_argument("--format", choices=FORMATS, default=default, help="Output format")
    parser.add_argument(
        "--logprefix", default=argparse.SUPPRESS if suppress else "", help="Prefix used in log messages", metavar="PREFIX"
    )
    parser.add_argument(
        "--verbose", action="store_true", default=argparse.SUPPRESS if suppress else False, help="Verbose output"
    )
    parser.add_argument(
        "--progress",
        action="store_true",
        default=argparse.SUPPRESS if suppress else False,
        help="Show a progress bar for count ranges",
    )
    return parser


def _add_board_args(parser, dims_required=True):
    parser.add_argument("--family", required=True, choices=FAMILIES, help="Board family")
    parser.add_argument(
        "--dims",
        type=_ints,
        nargs="+",
        action=_FlattenInts,
        required=dims_required,
        help="Board size(s): 1, 2 or d integers, e.g. 5, 4 6 or 3 3 3",
        metavar="N",
    )
    parser.add_argument("--d", type=int, default=None, help="Dimension (hypercube)")


def create_arg_parser():
    parser = argparse.ArgumentParser(description=f"neighsum v{VERSION}", parents=[_common_flags()])
    parser.add_argument("--version", action="version", version=f"neighsum v{VERSION}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    common = [_common_flags(suppress=True)]

    p = sub.add_parser("exists", parents=common, help="Decide whether a non-trivial board exists")
    _add_board_args(p)
    p.add_argument("--method", choices=METHODS, default="rule", help="Decision method")

    p = sub.add_parser("kernel", parents=common, help="Canonical integer kernel basis of the operator")
    _add_board_args(p)
    p.add_argument("--neighbourhood", choices=("moore", "neumann"), default=None)
    p.add_argument("--mode", choices=("sum", "average"), default=None)

    p = sub.add_parser("count", parents=common, help="Count solutions on n^d boards")
    p.add_argument("--d", type=int, required=True, help="Dimension")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=int, help="Board side")
    group.add_argument("--n-range", type=_range, help="Board sides a..b inclusive", metavar="A:B")

    p = sub.add_parser("gm", parents=common, help="Norm g(m) of 1 + 2cos(2 pi / m)")
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("valuation", parents=common, help="2-adic valuation closed forms")
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--eta", action="store_true", help="v(eta + 1 + eta^-1), eta of order m")
    kind.add_argument("--omega", action="store_true", help="v(omega - 1), omega of order m")
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("decompose", parents=common, help="g-factor decomposition proving existence on n^d")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)

    p = sub.add_parser("fill", parents=common, help="Fill a window of a semi-infinite or infinite board")
    p.add_argument("--mode", choices=("semi", "infinite"), required=True)
    p.add_argument("--rows", default=None, help="First-row sequence file", metavar="FILE")
    p.add_argument("--cols", default=None, help="First-column sequence file", metavar="FILE")
    p.add_argument("--cross", default=None, help="Cross file with sections [a] [b] [c] [d]", metavar="FILE")
    p.add_argument("--window", type=_window, required=True, help="Window size RxC", metavar="RxC")

    p = sub.add_parser("verify", parents=common, help="Check a board against the neighbour-sum property")
    p.add_argument("--board", required=True, metavar="FILE")
    _add_board_args(p, dims_required=False)
    p.add_argument("--neighbourhood", choices=("moore", "neumann"), default=None)
    p.add_argument("--mode", choices=("sum", "average"), default=None)

    p = sub.add_parser("render", parents=common, help="Print a board as an ASCII grid")
    p.add_argument("--board", required=True, metavar="FILE")

    p = sub.add_parser("scan-rational", parents=common, help="Rational angle solutions of the 2-D product equation")
    p.add_argument("--nmax", type=int, required=True)

    p = sub.add_parser("scan-d3", parents=common, help="Compare n^3 solution counts with 6 | n+1 or 15 | n+1")
    p.add_argument("--nmax", type=int, required=True)

    p = sub.add_parser("neumann-report", parents=common, help="Neumann square kernel dimension vs the claimed 2")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kernel", action="store_true", help="Also run exact elimination")
    return parser


def _print_json(data):
    print(json.dumps(data, indent=2))


def _check_kernel_size(spec, config):
    if spec.size > config["kernelCellLimit"]:
        raise UnsupportedSpecError(
            f"operator of size {spec.size} exceeds kernelCellLimit={config['kernelCellLimit']}"
        )


def cmd_exists(cli_args, config):
    dims, d = cli_args.dims, cli_args.d
    if cli_args.family == "hypercube":
        side, d = hypercube_side(dims, d)
        dims = [side]
    spec = family_spec(cli_args.family, dims, d)
    methods = ("rule", "spectral", "kernel") if cli_args.method == "all" else (cli_args.method,)
    verdicts = {}
    for method in methods:
        try:
            if method == "rule":
                verdict = rule_verdict(cli_args.family, dims, d)
            elif method == "spectral":
                verdict = spectral_search(spec, config["prefilterTolerance"])
            else:
                _check_kernel_size(spec, config)
                verdict = kernel_verdict(spec, config["denseLimit"])
        except UnsupportedSpecError as e:
            if cli_args.method != "all":
                raise
            verdicts[method] = {"unsupported": str(e)}
            continue
        _log(f"{method}: exists={verdict.exists} ({verdict.rule})")
        verdicts[method] = verdict.to_dict()

    if cli_args.method != "all":
        verdict = verdicts[cli_args.method]
        _print_json(verdict)
        return ExitCode.SUCCESS if verdict["exists"] else ExitCode.FAILED

    answers = {v["exists"] for v in verdicts.values() if "exists" in v}
    agree = len(answers) == 1
    _print_json({"agree": agree, "verdicts": verdicts})
    if not agree:
        return ExitCode.FAILED
    return ExitCode.SUCCESS if answers.pop() else ExitCode.FAILED


def cmd_kernel(cli_args, config, fmt):
    spec = family_spec(cli_args.family, cli_args.dims, cli_args.d, cli_args.neighbourhood, cli_args.mode)
    _check_kernel_size(spec, config)
    basis = kernel_basis(build_operator(spec), config["denseLimit"])
    if fmt == "ascii":
        print("\n\n".join(render_ascii(b) for b in basis_boards(basis, spec.dims)) or "(trivial kernel)")
    elif fmt == "csv":
        text = basis_to_csv(basis)
        if text:
            print(text)
    else:
        _print_json(basis.to_dict())
    return ExitCode.SUCCESS if basis.dim else ExitCode.FAILED


def cmd_count(cli_args, config, fmt):
    threads = config["threads"]
    if cli_args.n is not None:
        record = count_hypercube(cli_args.n, cli_args.d, threads=threads, tolerance=config["prefilterTolerance"])
        if fmt == "json":
            _print_json(record.to_dict())
        else:
            print(record.count)
        return ExitCode.SUCCESS

    lo, hi = cli_args.n_range
    records = count_sequence(cli_args.d, lo, hi, threads=threads, progress=cli_args.progress)
    if fmt == "json":
        _print_json([r.to_dict() for r in records])
    elif fmt == "ascii":
        print(", ".join(str(r.count) for r in records))
    else:
        print("n,d,count")
        for r in records:
            print(f"{r.n},{r.d},{r.count}")
    return ExitCode.SUCCESS


def cmd_decompose(cli_args, fmt):
    moduli = sufficient_decomposition(cli_args.n, cli_args.d)
    if moduli is None:
        print("none")
        return ExitCode.FAILED
    certificate = decomposition_certificate(cli_args.n, moduli)
    if fmt == "json":
        _print_json({"n": cli_args.n, "d": cli_args.d, "moduli": moduli, "certificate": list(certificate)})
    else:
        print(" ".join(str(m) for m in moduli))
    return ExitCode.SUCCESS


def cmd_fill(cli_args, fmt):
    rows, cols = cli_args.window
    if cli_args.mode == "semi":
        if not cli_args.rows or not cli_args.cols:
            raise DomainError("fill --mode semi needs --rows and --cols")
        grid = fill_semi_infinite(SequencePair(read_sequence(cli_args.rows), read_sequence(cli_args.cols)), rows, cols)
    else:
        if not cli_args.cross:
            raise DomainError("fill --mode infinite needs --cross")
        grid = fill_infinite(read_cross(cli_args.cross), rows, cols)
    print(write_board(grid, fmt))
    return ExitCode.SUCCESS


def cmd_verify(cli_args):
    grid = read_board(cli_args.board)
    dims = cli_args.dims
    if dims is None:
        dims = [grid.dims[0]] if cli_args.family in ("hypercube", "neumann-square") else list(grid.dims)
        if cli_args.family == "strip":
            dims = [grid.dims[-1]]
    d = cli_args.d if cli_args.d is not None else (grid.ndim if cli_args.family == "hypercube" else None)
    spec = family_spec(cli_args.family, dims, d, cli_args.neighbourhood, cli_args.mode)
    violations = verify_board(grid, spec)
    _print_json({"ok": not violations, "violations": [v.to_dict() for v in violations]})
    return ExitCode.FAILED if violations else ExitCode.SUCCESS


def cmd_scan_rational(cli_args):
    solutions = rational_solutions_scan(cli_args.nmax)
    angles = sorted({(Fraction(2 * p, N), Fraction(2 * q, N)) for N, p, q in solutions})
    _print_json(
        {
            "solutions": [{"N": N, "p": p, "q": q} for N, p, q in solutions],
            "angles": [[str(u), str(v)] for u, v in angles],
        }
    )
    return ExitCode.SUCCESS


def cmd_scan_d3(cli_args, config, fmt):
    rows = d3_converse_scan(cli_args.nmax, threads=config["threads"])
    if fmt == "csv":
        print("n,count,predicted,agrees")
        for row in rows:
            print(f"{row['n']},{row['count']},{str(row['predicted']).lower()},{str(row['agrees']).lower()}")
    else:
        _print_json(rows)
    return ExitCode.SUCCESS if all(row["agrees"] for row in rows) else ExitCode.FAILED


def cli_exec(cli_args, extra_args):
    logs.set_verbose(cli_args.verbose, cli_args.logprefix)
    if extra_args:
        _err("Unrecognized arguments", " ".join(extra_args))
        return ExitCode.ERROR
    if not cli_args.command:
        return ExitCode.UNHANDLED

    try:
        config = load_config(cli_args.config)
        if cli_args.threads is not None:
            config["threads"] = cli_args.threads
            validate_config(config)
        fmt = cli_args.format
        if fmt is None:
            fmt = "csv" if cli_args.command == "count" and cli_args.n_range else config["format"]
        _dbg(f"command={cli_args.command} config={config} format={fmt}")

        command = cli_args.command
        if command == "exists":
            return cmd_exists(cli_args, config)
        if command == "kernel":
            return cmd_kernel(cli_args, config, fmt)
        if command == "count":
            return cmd_count(cli_args, config, fmt)
        if command == "gm":
            print(g(cli_args.m))
            return ExitCode.SUCCESS
        if command == "valuation":
            value = valuation_eta(cli_args.m) if cli_args.eta else valuation_omega(cli_args.m)
            print(value)
            return ExitCode.SUCCESS
        if command == "decompose":
            return cmd_decompose(cli_args, fmt)
        if command == "fill":
            return cmd_fill(cli_args, fmt)
        if command == "verify":
            return cmd_verify(cli_args)
        if command == "render":
            print(render_ascii(read_board(cli_args.board)))
            return ExitCode.SUCCESS
        if command == "scan-rational":
            return cmd_scan_rational(cli_args)
        if command == "scan-d3":
            return cmd_scan_d3(cli_args, config, fmt)
        if command == "neumann-report":
            report = neumann_square_report(cli_args.n, with_kernel=cli_args.kernel, dense_limit=config["denseLimit"])
            _print_json(report)
            return ExitCode.SUCCESS if report["agrees"] else ExitCode.FAILED
    except NeighsumError as e:
        _err(type(e).__name__, e)
        return ExitCode.ERROR
    return ExitCode.UNHANDLED


def main():
    parser = create_arg_parser()
    cli_args, extra_args = parser.parse_known_args()
    exit_code = cli_exec(cli_args, extra_args)

    if exit_code == ExitCode.UNHANDLED:
        # show usage from ArgumentParser
        parser.print_help()
        sys.exit(0)

    sys.exit(exit_code)


if __name__ == "__main__":
    main()
