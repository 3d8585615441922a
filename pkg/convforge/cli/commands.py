import csv
import io
import json
import logging
import sys
from argparse import Namespace
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np

from convforge.approx.fitting import fit_ridge
from convforge.approx.measurement import GridSpec, sample_points
from convforge.approx.study import loglog_slope, rate_study
from convforge.approx.targets import TargetFunction
from convforge.cli.files import FileKind, atomic_write_text, dumps
from convforge.cli.manifest import RunRecorder
from convforge.exceptions import DimensionMismatch
from convforge.network.construction import build_network
from convforge.network.model import DeepCnn, evaluate_batch
from convforge.network.parameters import count_free_parameters, scaling_preset
from convforge.network.ridge import RidgeExpansion
from convforge.settings import get_settings
from convforge.signal.sequences import FiniteSequence
from convforge.symbolic.factorization import factorize_mask
from convforge.utils.context_managers import log_execution_time
from convforge.utils.numeric import scale_of

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _emit(payload: Any) -> None:
    sys.stdout.write(dumps(payload))


def _threads(args: Namespace) -> int:
    return args.threads or get_settings().threads


def _target_params(pairs: Optional[List[str]]) -> Dict[str, Any]:
    params: Dict[str, Any] = {}

    for pair in pairs or []:
        key, _, raw = pair.partition("=")

        try:
            params[key.replace("-", "_")] = json.loads(raw)
        except json.JSONDecodeError:
            params[key.replace("-", "_")] = raw

    return params


def _load_points(recorder: RunRecorder, path: Path, d: int) -> np.ndarray:
    data = recorder.read(path, FileKind.POINTS)
    points = np.atleast_2d(np.asarray(data["points"] if isinstance(data, dict) else data, dtype=np.float64))

    if points.shape[1] != d:
        raise DimensionMismatch(f"Points have dimension {points.shape[1]}, expected d={d}", {"d": d})

    return points


def run_factorize(args: Namespace) -> int:
    recorder = RunRecorder("factorize", vars(args))

    with log_execution_time("factorize command", logger):
        W = recorder.read(args.input, FileKind.SEQUENCE, FiniteSequence)
        result = factorize_mask(W, args.s, args.tol, method=args.method)
        recorder.write(args.out, FileKind.FACTORIZATION, result.model_dump(mode="json"))

    recorder.finish()
    _emit({"J": result.J, "degree": result.degree, "max_rel_error": result.max_rel_error})

    return EXIT_OK


def run_build(args: Namespace) -> int:
    recorder = RunRecorder("build", vars(args))

    with log_execution_time("build command", logger):
        ridge = recorder.read(args.ridge, FileKind.RIDGE, RidgeExpansion)
        net = build_network(ridge, args.s, args.J, args.domain_bound, tol=args.tol, method=args.method)
        recorder.write(args.out, FileKind.NETWORK, net.model_dump(mode="json"))

    recorder.finish()
    _emit({"J": net.config.J, "width": net.config.output_width, "param_count": count_free_parameters(net)})

    return EXIT_OK


def run_eval(args: Namespace) -> int:
    recorder = RunRecorder("eval", vars(args))

    with log_execution_time("eval command", logger):
        net = recorder.read(args.net, FileKind.NETWORK, DeepCnn)
        points = _load_points(recorder, args.points, net.config.d)
        outputs = evaluate_batch(net, points, threads=_threads(args))
        payload = {"outputs": outputs.tolist()}

        if args.out is not None:
            recorder.write(args.out, FileKind.EVALUATION, payload)

    recorder.finish()

    if args.out is None:
        _emit(payload)

    return EXIT_OK


def run_verify(args: Namespace) -> int:
    """
    Compares the network with the ridge expansion it was built from at `samples` Latin-hypercube points
    """
    recorder = RunRecorder("verify", vars(args), seed=args.seed)

    with log_execution_time("verify command", logger):
        net = recorder.read(args.net, FileKind.NETWORK, DeepCnn)
        ridge = recorder.read(args.ridge, FileKind.RIDGE, RidgeExpansion)

        if ridge.d != net.config.d:
            raise DimensionMismatch(f"Ridge has d={ridge.d}, network has d={net.config.d}")

        points = sample_points(GridSpec.latin_hypercube(args.samples, seed=args.seed), net.config.d)
        expected = ridge(points)
        deviation = float(np.max(np.abs(evaluate_batch(net, points, threads=_threads(args)) - expected)))
        scale = scale_of(expected)
        passed = deviation <= args.tolerance * scale

        payload = {
            "max_deviation": deviation,
            "tolerance": args.tolerance,
            "scale": scale,
            "samples": args.samples,
            "passed": passed,
        }

        if args.out is not None:
            recorder.write(args.out, FileKind.VERIFICATION, payload)

    recorder.finish()
    _emit(payload)

    if not passed:
        logger.warning(f"Network deviates from its ridge expansion by {deviation:.3e} > {args.tolerance * scale:.3e}")
        return EXIT_NUMERICAL

    return EXIT_OK


def run_fit(args: Namespace) -> int:
    recorder = RunRecorder("fit", vars(args), seed=args.seed)

    with log_execution_time("fit command", logger):
        target = TargetFunction.create(args.target, args.d, **_target_params(args.param))
        ridge = fit_ridge(target, args.d, args.m, args.seed, strategy=args.strategy)
        recorder.write(args.out, FileKind.RIDGE, ridge.model_dump(mode="json"))

    recorder.finish()
    _emit({"target": target.descriptor, "m": ridge.m, "v": ridge.v})

    return EXIT_OK


def _write_csv(path: Path, rows: List[Dict[str, Any]]) -> None:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(rows[0]) if rows else [])
    writer.writeheader()
    writer.writerows(rows)
    atomic_write_text(path, buffer.getvalue())


def run_rate_study(args: Namespace) -> int:
    recorder = RunRecorder("rate-study", vars(args), seed=args.seed)

    with log_execution_time("rate-study command", logger):
        target = TargetFunction.create(args.target, args.d, **_target_params(args.param))
        grid_spec = GridSpec.latin_hypercube(args.samples or get_settings().sample_count, seed=args.seed)
        reports = rate_study(
            target, args.d, args.s, args.J, args.seed, grid_spec=grid_spec, strategy=args.strategy, threads=args.threads
        )
        slope = loglog_slope(reports) if len(reports) > 1 else None

        payload = {
            "target": target.descriptor,
            "loglog_slope": slope,
            "reports": [report.model_dump(mode="json") for report in reports],
        }
        recorder.write(args.out, FileKind.RATE_STUDY, payload)

        if args.csv is not None:
            _write_csv(args.csv, [report.csv_row() for report in reports])
            recorder.record_output(args.csv)

    recorder.finish()
    _emit({"J": args.J, "sup_error": [report.sup_error for report in reports], "loglog_slope": slope})

    return EXIT_OK


def run_preset(args: Namespace) -> int:
    preset = scaling_preset(args.d, args.tau, args.L)
    payload = preset.model_dump(mode="json")

    if args.out is not None:
        recorder = RunRecorder("preset", vars(args))
        recorder.write(args.out, FileKind.PRESET, payload)
        recorder.finish()

    _emit(payload)

    return EXIT_OK
