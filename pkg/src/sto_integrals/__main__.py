import sys
from argparse import ArgumentParser

from . import __version__
from ._cli import cmd_batch, cmd_eval, cmd_verify
from .core import IntegralClass
from .log import config_sto_integrals_logging

__all__ = ["main"]


def _add_tolerances(parser: ArgumentParser) -> None:
    parser.add_argument("--mu-tol", type=float, help="relative mu-sum tolerance")
    parser.add_argument("--series-tol", type=float, help="B series tolerance")
    parser.add_argument(
        "--precision-tol",
        type=float,
        help="relative error below which floats are trusted, else mpmath is used",
    )
    parser.add_argument("--mu-cap", type=int, help="largest mu to evaluate")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="sto-integrals")
    parser.add_argument("-v", "--version", action="version", version=__version__)
    parser.add_argument("--log-level", default="WARNING", help="logging level")
    commands = parser.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", help="evaluate one integral")
    evaluate.add_argument(
        "--class",
        dest="integral_class",
        choices=[c.value for c in IntegralClass],
        default=IntegralClass.EXCHANGE.value,
    )
    for slot in range(1, 5):
        evaluate.add_argument(
            f"--orb{slot}", required=True, metavar='"n l m delta"'
        )
    evaluate.add_argument("--R", type=float, required=True, help="distance in bohr")
    evaluate.add_argument("--format", choices=["text", "json"], default="text")
    _add_tolerances(evaluate)
    evaluate.set_defaults(func=cmd_eval)

    batch = commands.add_parser("batch", help="evaluate one case per input line")
    batch.add_argument("input")
    batch.add_argument("output")
    batch.add_argument("--workers", type=int, default=1)
    batch.add_argument(
        "--timing", action="store_true", help="record the wall time of each case"
    )
    _add_tolerances(batch)
    batch.set_defaults(func=cmd_batch)

    verify = commands.add_parser("verify", help="run the invariant and oracle checks")
    verify.add_argument("--grid", choices=["small", "full"], default="small")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(args=None) -> int:
    parser = build_parser()
    parsed = parser.parse_args(args)
    try:
        config_sto_integrals_logging(file=sys.stderr, level=parsed.log_level)
    except ValueError as error:
        parser.error(f"--log-level: {error}")
    return parsed.func(parsed)


# test with: python -m sto_integrals
if __name__ == "__main__":
    sys.exit(main())
