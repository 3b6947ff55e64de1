"""Error and calibration metrics against the exact solution."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np


@dataclass(frozen=True)
class MetricsReport:
    """Pointwise error summary on an evaluation grid."""

    mae: float
    max_ae: float
    two_sigma_coverage: float
    n_eval_points: int
    wall_time_seconds: float = 0.0
    parameter_errors: Optional[Tuple[float, ...]] = None


def evaluate(means, variances, exact, wall_time_seconds: float = 0.0,
             parameter_errors: Optional[Tuple[float, ...]] = None) -> MetricsReport:
    """MAE, Max-AE and two-sigma coverage of predictions against exact values.

    Coverage is the fraction of points whose absolute error is at most twice
    the predictive standard deviation.
    """
    means = np.asarray(means, dtype=float).reshape(-1)
    variances = np.asarray(variances, dtype=float).reshape(-1)
    exact = np.asarray(exact, dtype=float).reshape(-1)
    if means.size == 0:
        raise ValueError("need at least one evaluation point")
    if means.shape != exact.shape or means.shape != variances.shape:
        raise ValueError("means, variances and exact values must have equal length")
    abs_err = np.abs(means - exact)
    coverage = float(np.mean(abs_err <= 2.0 * np.sqrt(variances)))
    return MetricsReport(
        mae=float(np.mean(abs_err)),
        max_ae=float(np.max(abs_err)),
        two_sigma_coverage=coverage,
        n_eval_points=means.size,
        wall_time_seconds=float(wall_time_seconds),
        parameter_errors=parameter_errors,
    )
