"""dyadic-cesaro: run a verification experiment and emit its report.

Exit status is 0 when the verdict passes, 2 when it fails and 1 on usage,
parameter or I/O errors.

Examples:
  dyadic-cesaro kernels --alpha 0.5 --resolution 8 --nmax 256
  dyadic-cesaro l1norms --alpha 0.25 --resolution 12 --format csv --out l1.csv
  dyadic-cesaro lemma3 --alpha 0.5 --resolution 4,5,6
  dyadic-cesaro theorem1a --alpha 0.5 --resolution 3,4,5,6 --seeds 100
  dyadic-cesaro counterexample --alpha 0.5 --nk 1,2,3 --phi log-power:1.0
  dyadic-cesaro strongsum --alpha 0.5 --resolution 3,4,5 --nmax 512 --seeds 50
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import experiments as ex
from .errors import DyadicError
from .phi import PhiSchedule
from .report import emit

EXIT_PASS, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def int_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def phi_spec(text: str) -> PhiSchedule:
    try:
        return PhiSchedule.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--alpha", type=float, default=0.5, help="Cesaro order in (0, 1] (default: 0.5)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (default: standard output)")

    parser = _Parser(prog="dyadic-cesaro", description=__doc__.splitlines()[0],
                     formatter_class=argparse.RawDescriptionHelpFormatter,
                     epilog="\n".join(__doc__.splitlines()[5:]))
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kernels", parents=[common], help="dyadic closed forms and pointwise kernel majorization")
    p.add_argument("--resolution", type=int_list, default=[8])
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--stability", type=float, default=ex.STABILITY_FACTOR)

    p = sub.add_parser("l1norms", parents=[common], help="L1 norms of the (C,alpha) kernels")
    p.add_argument("--resolution", type=int, default=12)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--tail-ratio", type=float, default=ex.TAIL_FACTOR)

    p = sub.add_parser("lemma3", parents=[common], help="kernel integrals over I_M per coset class")
    p.add_argument("--resolution", type=int_list, default=[4, 5, 6])
    p.add_argument("--probes", type=int, default=None, help="number of orders in (2^M, 2^(M+offset)]")
    p.add_argument("--offset", type=int, default=2, help="working resolution is M + offset")
    p.add_argument("--stability", type=float, default=ex.STABILITY_FACTOR)

    p = sub.add_parser("theorem1a", parents=[common], help="atom estimates for the log-weighted maximal operator")
    p.add_argument("--resolution", type=int_list, default=[3, 4, 5, 6])
    p.add_argument("--nmax", type=int, default=None, help="largest order (default: 2^(M+2) per M)")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="first seed of the atom ensemble")
    p.add_argument("--atom-depth", type=int, default=2)
    p.add_argument("--stability", type=float, default=ex.STABILITY_FACTOR)

    p = sub.add_parser("counterexample", parents=[common], help="divergence of the f_nk family")
    p.add_argument("--nk", type=int_list, default=[1, 2, 3])
    p.add_argument("--phi", type=phi_spec, default=PhiSchedule.parse("log-power:1.0"),
                   help="log-power:<beta> | log-over-loglog | table:<v1>,<v2>,...")
    p.add_argument("--stability", type=float, default=ex.STABILITY_FACTOR)
    p.add_argument("--slope-tolerance", type=float, default=ex.SLOPE_TOLERANCE)

    p = sub.add_parser("strongsum", parents=[common], help="logarithmic strong sums over atoms")
    p.add_argument("--resolution", type=int_list, default=[3, 4, 5])
    p.add_argument("--nmax", type=int, default=512)
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--atom-depth", type=int, default=2)
    p.add_argument("--plateau", type=float, default=ex.PLATEAU_FACTOR)
    return parser


def run(args: argparse.Namespace):
    if args.command == "kernels":
        return ex.run_kernels(args.alpha, args.resolution, args.nmax, args.stability)
    if args.command == "l1norms":
        return ex.run_l1norms(args.alpha, args.resolution, args.nmax, args.tail_ratio)
    if args.command == "lemma3":
        return ex.run_lemma3(args.alpha, args.resolution, args.probes, args.offset, args.stability)
    if args.command == "theorem1a":
        return ex.run_theorem1a(args.alpha, args.resolution, args.nmax, args.seeds, args.seed,
                                args.atom_depth, args.stability)
    if args.command == "counterexample":
        return ex.run_counterexample(args.alpha, args.nk, args.phi, args.stability, args.slope_tolerance)
    if args.command == "strongsum":
        return ex.run_strongsum(args.alpha, args.resolution, args.nmax, args.seeds, args.seed,
                                args.atom_depth, args.plateau)
    raise UsageError(f"unknown command {args.command!r}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        report = run(args)
        emit(report, args.format, args.out)
    except (UsageError, DyadicError, ValueError) as exc:
        print(f"dyadic-cesaro: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"dyadic-cesaro: cannot write report: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_PASS if report.verdict else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
