"""Pseudoinverse baseline: minimum-norm least squares via SVD."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .assembly import CollocationSystem
from .basis import RandomBasis, network_output
from .errors import NumericalError


def default_cutoff(system: CollocationSystem) -> float:
    """Default relative singular-value cutoff: ``1e-12 * max(n_rows, n_cols)``."""
    return 1e-12 * max(system.n_rows, system.n_cols)


@dataclass(frozen=True)
class PointSolution:
    """Minimum-norm least-squares solution with its effective rank."""

    omega: np.ndarray
    rank: int
    svd_cutoff: float

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        omega.setflags(write=False)
        object.__setattr__(self, "omega", omega)


def solve_pinv(system: CollocationSystem,
               relative_cutoff: Optional[float] = None) -> PointSolution:
    """Solve ``H w = Y`` by Moore-Penrose pseudoinverse.

    Singular values below ``relative_cutoff`` times the largest singular value
    are zeroed; among all least-squares minimizers the returned solution has
    minimal Euclidean norm.
    """
    if relative_cutoff is None:
        relative_cutoff = default_cutoff(system)
    if relative_cutoff <= 0:
        raise ValueError("relative_cutoff must be positive")
    try:
        omega, _, rank, _ = np.linalg.lstsq(system.H, system.Y, rcond=relative_cutoff)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed on the assembled system: {exc}") from exc
    if not np.all(np.isfinite(omega)):
        raise NumericalError("pseudoinverse solution contains non-finite entries")
    return PointSolution(omega=omega, rank=int(rank), svd_cutoff=float(relative_cutoff))


def predict_mean(solution: PointSolution, basis: RandomBasis, points) -> np.ndarray:
    """Point predictions of the solution; parameter entries are ignored."""
    return network_output(basis, solution.omega, points)
