from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Callable, Sequence, Tuple

from .analysis import DEFAULT_ALPHAS, analyze
from .checks import reference_suite
from .classical import RoadColoring, sync_report
from .dilation import validate
from .errors import HorizonTooLarge, NotStrictlyPositive, QmcError, SpecFormatError
from .report import TableFormatter
from .specfile import load_dilation_spec, load_road_coloring

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PARSE = 3
EXIT_GUARD = 4

CLASSICAL_HEADERS = ("n", "exact_nonsync", "binomial_sum", "closed_form", "mixing_bound")


def _floats(text: str) -> Tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _cmd_validate(args: argparse.Namespace) -> int:
    report = validate(load_dilation_spec(args.path))
    table = TableFormatter(["residual", "value", "status"])
    table.extend(report.rows())
    print(table.format_table())
    return EXIT_OK if report.passed else EXIT_VALIDATION


def _cmd_analyze(args: argparse.Namespace) -> int:
    dil = load_dilation_spec(args.path)
    report = analyze(
        dil,
        max_n=args.max_n,
        alphas=args.alpha or DEFAULT_ALPHAS,
        samples=args.samples,
        seed=args.seed,
        defect_n=args.defect_n,
    )
    if args.out == "json":
        print(json.dumps(report.to_dict(), indent=2))
    elif args.out == "csv":
        print(report.bound_table().format_table("csv"), end="")
    else:
        print(report.summary_table().format_table())
        if report.bounds:
            print(report.bound_table().format_table())
    return EXIT_OK if report.validation.passed else EXIT_VALIDATION


def _alternating_weights(rc: RoadColoring, explicit: Tuple[float, ...] | None) -> Tuple[float, float, float] | None:
    if explicit is not None:
        if len(explicit) != 3:
            raise SpecFormatError("--alternating takes RED,IDLE,BLUE")
        return explicit[0], explicit[1], explicit[2]
    if set(rc.colors) == {"r", "g", "b"}:
        return rc.weight("r"), rc.weight("g"), rc.weight("b")
    return None


def _cmd_classical(args: argparse.Namespace) -> int:
    rc = load_road_coloring(args.path)
    report = sync_report(
        rc,
        args.n_max,
        alternating=_alternating_weights(rc, args.alternating),
        enumerate_max=args.enumerate_max,
    )
    table = TableFormatter(CLASSICAL_HEADERS)
    table.extend(report.rows())
    print(table.format_table("csv"), end="")

    print(f"synchronizable: {str(report.synchronizable).lower()}", file=sys.stderr)
    print(f"rate: {report.rate:.12e}", file=sys.stderr)
    if report.oracle_agreement is not None:
        print(f"oracle agreement: {str(report.oracle_agreement).lower()}", file=sys.stderr)
    return EXIT_OK


def _cmd_reproduce(args: argparse.Namespace) -> int:
    suite = reference_suite(args.seed)
    ok = suite.verify()
    print(suite.to_json() if args.json else suite.table().format_table())
    return EXIT_OK if ok else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmc", description="Coupling certificates for quantum and classical Markov chains."
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a dilation spec")
    p.add_argument("path")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("analyze", help="certify mixing of a dilation")
    p.add_argument("path")
    p.add_argument("--alpha", type=float, action="append", help="duality parameter in [0, 1/2]; repeatable")
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--out", choices=("pretty", "json", "csv"), default="pretty")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--defect-n", type=int, default=6)
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("classical", help="synchronization analysis of a road coloring")
    p.add_argument("path")
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--enumerate-max", type=int, default=0)
    p.add_argument("--alternating", type=_floats, default=None, metavar="RED,IDLE,BLUE")
    p.set_defaults(handler=_cmd_classical)

    p = sub.add_parser("reproduce", help="recompute every reference constant")
    p.add_argument("--json", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=_cmd_reproduce)
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s", force=True)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    handler: Callable[[argparse.Namespace], int] = args.handler
    logger.debug("running %s", args.command)

    try:
        return handler(args)
    except (SpecFormatError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except (HorizonTooLarge, NotStrictlyPositive) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_GUARD
    except QmcError as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return EXIT_VALIDATION

