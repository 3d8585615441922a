from .fitting import FitStrategy, central_gradient, fit_ridge
from .measurement import ErrorReport, GridKind, GridSpec, sample_points, sup_error
from .study import induced_ridge_size, loglog_slope, rate_study, theoretical_rate
from .targets import CosineRidge, GaussianBump, Linear, Quadratic, Ramp, TargetFunction

__all__ = [
    "CosineRidge",
    "ErrorReport",
    "FitStrategy",
    "GaussianBump",
    "GridKind",
    "GridSpec",
    "Linear",
    "Quadratic",
    "Ramp",
    "TargetFunction",
    "central_gradient",
    "fit_ridge",
    "induced_ridge_size",
    "loglog_slope",
    "rate_study",
    "sample_points",
    "sup_error",
    "theoretical_rate",
]
