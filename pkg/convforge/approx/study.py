import logging
from typing import List, Optional, Sequence

import numpy as np

from convforge.approx.fitting import FitStrategy, fit_ridge
from convforge.approx.measurement import ErrorReport, GridSpec, sample_points
from convforge.approx.targets import TargetFunction
from convforge.exceptions import InvalidFilterLength
from convforge.network.construction import build_network
from convforge.network.model import evaluate_batch
from convforge.network.parameters import count_free_parameters
from convforge.settings import get_settings
from convforge.utils.context_managers import log_execution_time

logger = logging.getLogger(__name__)


def induced_ridge_size(J: int, d: int, s: int) -> int:
    """
    Largest m with (m+1)d <= J(s-1), i.e. the integer part of (s-1)J/d - 1
    """
    if s < 2:
        raise InvalidFilterLength(f"s must be ≥ 2, got {s}", {"s": s})

    return ((s - 1) * J) // d - 1


def theoretical_rate(J: int, d: int) -> float:
    """
    sqrt(log J) J^(-1/2 - 1/d), the shape of the decay bound without its constant
    """
    return float(np.sqrt(np.log(J)) * J ** (-0.5 - 1.0 / d))


def loglog_slope(reports: Sequence[ErrorReport]) -> float:
    depths = np.log([report.J for report in reports])
    errors = np.log([max(report.sup_error, np.finfo(float).tiny) for report in reports])
    slope, _ = np.polyfit(depths, errors, 1)
    return float(slope)


def rate_study(
    target: TargetFunction,
    d: int,
    s: int,
    J_list: Sequence[int],
    seed: int,
    *,
    grid_spec: Optional[GridSpec] = None,
    strategy: FitStrategy = FitStrategy.GREEDY,
    threads: Optional[int] = None,
) -> List[ErrorReport]:
    """
    For each depth J: fit m = induced_ridge_size(J, d, s) ramp terms, build the depth-J network and
    measure its sup error against the target
    """
    settings = get_settings()
    grid_spec = grid_spec or GridSpec.latin_hypercube(settings.sample_count, seed=seed)
    threads = threads or settings.threads
    points = sample_points(grid_spec, d)
    exact = target(points)
    reports = []

    for J in J_list:
        m = induced_ridge_size(J, d, s)

        with log_execution_time("rate_study step", logger, J=J, m=m):
            ridge = fit_ridge(target, d, max(m, 0), seed, strategy=strategy)
            net = build_network(ridge, s, J)

            realized = evaluate_batch(net, points, threads=threads)
            fitted = ridge(points)

            reports.append(
                ErrorReport(
                    sup_error=float(np.max(np.abs(exact - realized))),
                    grid_spec=grid_spec,
                    J=J,
                    param_count=count_free_parameters(net),
                    m=m,
                    s=s,
                    d=d,
                    width=net.config.output_width,
                    fit_error=float(np.max(np.abs(exact - fitted))),
                    realization_error=float(np.max(np.abs(fitted - realized))),
                    theoretical_rate=theoretical_rate(J, d),
                )
            )

    return reports
