import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Type

from pydantic import ValidationError

from convforge.approx.fitting import FitStrategy
from convforge.approx.targets import TargetFunction
from convforge.cli import commands
from convforge.exceptions import ConvForgeNumericalError, ConvForgeValidationError
from convforge.settings import get_settings
from convforge.symbolic.roots import RootFindingMethod
from convforge.utils.enums import BaseEnum

logger = logging.getLogger(__name__)


def _int_list(value: str) -> List[int]:
    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Expected a comma separated list of integers, got '{value}'") from exc


def _enum_choice(enum_class: Type[BaseEnum]) -> Callable[[str], BaseEnum]:
    def parse(value: str) -> BaseEnum:
        member = enum_class.get_by_lowered_value(value)

        if member is None:
            raise argparse.ArgumentTypeError(f"Expected one of {enum_class.get_description()}, got '{value}'")

        return member

    return parse


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--log-level", dest="log_level", default=None, help="Logging level, overrides settings")


def _add_root_finding(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tol", type=float, default=None, help="Backward-error tolerance of the root finder")
    parser.add_argument(
        "--method",
        type=_enum_choice(RootFindingMethod),
        default=RootFindingMethod.ABERTH,
        help=f"Root finder, one of {RootFindingMethod.get_description()}",
    )


def _add_threads(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threads", type=int, default=None, help="Evaluation threads, overrides settings")


def _add_target(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--target", required=True, help=f"Target function, one of {','.join(TargetFunction.names())}"
    )
    parser.add_argument("--d", type=int, required=True, help="Input dimension")
    parser.add_argument("--seed", type=int, required=True, help="Seed of the random ridge pool and samples")
    parser.add_argument(
        "--param", action="append", metavar="KEY=VALUE", help="Target parameter, VALUE parsed as JSON when possible"
    )
    parser.add_argument(
        "--strategy",
        type=_enum_choice(FitStrategy),
        default=FitStrategy.GREEDY,
        help=f"Ridge fitting strategy, one of {FitStrategy.get_description()}",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convforge",
        description="Factorize sequences into convolutional masks and build deep CNNs realising ridge expansions",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    factorize = subparsers.add_parser("factorize", help="Factorize a sequence into masks of length s+1")
    factorize.add_argument("--input", type=Path, required=True, help="Sequence file")
    factorize.add_argument("--s", type=int, required=True, help="Filter length")
    factorize.add_argument("--out", type=Path, required=True, help="Factorization file to write")
    _add_root_finding(factorize)
    factorize.set_defaults(handler=commands.run_factorize)

    build = subparsers.add_parser("build", help="Build the deep CNN realising a ridge expansion")
    build.add_argument("--ridge", type=Path, required=True, help="Ridge expansion file")
    build.add_argument("--s", type=int, required=True, help="Filter length")
    build.add_argument("--J", type=int, required=True, help="Depth")
    build.add_argument("--domain-bound", dest="domain_bound", type=float, default=1.0, help="max_k |x_k| on the domain")
    build.add_argument("--out", type=Path, required=True, help="Network file to write")
    _add_root_finding(build)
    build.set_defaults(handler=commands.run_build)

    evaluate = subparsers.add_parser("eval", help="Evaluate a network on a points file")
    evaluate.add_argument("--net", type=Path, required=True, help="Network file")
    evaluate.add_argument("--points", type=Path, required=True, help="Points file")
    evaluate.add_argument("--out", type=Path, default=None, help="Evaluation file, stdout when omitted")
    _add_threads(evaluate)
    evaluate.set_defaults(handler=commands.run_eval)

    verify = subparsers.add_parser("verify", help="Check a network against its ridge expansion")
    verify.add_argument("--net", type=Path, required=True, help="Network file")
    verify.add_argument("--ridge", type=Path, required=True, help="Ridge expansion file")
    verify.add_argument("--samples", type=int, default=1000, help="Latin-hypercube sample count")
    verify.add_argument("--seed", type=int, default=0, help="Seed of the sample points")
    verify.add_argument("--tolerance", type=float, default=1e-8, help="Allowed deviation relative to the value scale")
    verify.add_argument("--out", type=Path, default=None, help="Verification file to write")
    _add_threads(verify)
    verify.set_defaults(handler=commands.run_verify)

    rate = subparsers.add_parser("rate-study", help="Measure sup errors of networks of growing depth")
    _add_target(rate)
    rate.add_argument("--s", type=int, required=True, help="Filter length")
    rate.add_argument("--J", type=_int_list, required=True, help="Comma separated depths")
    rate.add_argument("--samples", type=int, default=None, help="Latin-hypercube sample count, overrides settings")
    rate.add_argument("--out", type=Path, required=True, help="Report file to write")
    rate.add_argument("--csv", type=Path, default=None, help="Also write the reports as CSV")
    _add_threads(rate)
    rate.set_defaults(handler=commands.run_rate_study)

    fit = subparsers.add_parser("fit", help="Fit a ramp-ridge expansion to a target function")
    _add_target(fit)
    fit.add_argument("--m", type=int, required=True, help="Number of ramp terms")
    fit.add_argument("--out", type=Path, required=True, help="Ridge expansion file to write")
    fit.set_defaults(handler=commands.run_fit)

    preset = subparsers.add_parser("preset", help="Filter length and depth for s = ceil(1 + d^tau/2)")
    preset.add_argument("--d", type=int, required=True, help="Input dimension")
    preset.add_argument("--tau", type=float, required=True, help="Exponent in [0, 1]")
    preset.add_argument("--L", type=int, default=1, help="Depth multiplier")
    preset.add_argument("--out", type=Path, default=None, help="Preset file to write")
    preset.set_defaults(handler=commands.run_preset)

    for subparser in subparsers.choices.values():
        _add_common(subparser)

    return parser


def configure_logging(level: Optional[str]) -> None:
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


def _report_error(payload: Dict[str, Any]) -> None:
    sys.stderr.write(json.dumps(payload, sort_keys=True, default=str) + "\n")


def dispatch(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs one subcommand; 0 on success, 2 on invalid input, 3 on numerical failure
    """
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    configure_logging(args.log_level)

    try:
        return args.handler(args)
    except ConvForgeValidationError as exc:
        logger.error(f"{args.command} rejected its input: {exc.message}")
        _report_error(exc.to_dict())
        return commands.EXIT_VALIDATION
    except ValidationError as exc:
        logger.error(f"{args.command} could not validate its input")
        _report_error(
            {
                "error": "ValidationError",
                "message": str(exc),
                "errors": exc.errors(include_url=False, include_context=False),
            }
        )
        return commands.EXIT_VALIDATION
    except ConvForgeNumericalError as exc:
        logger.error(f"{args.command} failed numerically: {exc.message}")
        _report_error(exc.to_dict())
        return commands.EXIT_NUMERICAL


def main() -> None:
    sys.exit(dispatch())
