"""Collocation-system assembly for forward and inverse problems.

Forward problems stack PDE residual rows over interior collocation points and
boundary sensor rows into one dense system ``H w = Y``.  Inverse problems
append one column per unknown source coefficient; boundary and data rows
carry exact zeros in those columns.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .basis import RandomBasis, feature_matrix
from .errors import EmptySystemError
from .operators import (
    BoundaryCondition,
    Coefficient,
    LinearOperator,
    SeparableSource,
    boundary_row,
    evaluate_pointwise,
    operator_rows,
)

ROW_PDE = "pde"
ROW_BOUNDARY = "boundary"
ROW_DATA = "data"


@dataclass(frozen=True)
class SensorSet:
    """Noisy point measurements of the solution."""

    points: np.ndarray
    values: np.ndarray
    noise_sigma: float = 0.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float).reshape(-1, 2)
        vals = np.asarray(self.values, dtype=float).reshape(-1)
        if pts.shape[0] != vals.shape[0]:
            raise ValueError(
                f"{pts.shape[0]} sensor points but {vals.shape[0]} values")
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be non-negative")
        pts.setflags(write=False)
        vals.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return self.points.shape[0]

    @classmethod
    def empty(cls) -> "SensorSet":
        return cls(np.zeros((0, 2)), np.zeros(0), 0.0)


@dataclass(frozen=True)
class CollocationSystem:
    """Dense pair ``(H, Y)`` with column layout metadata.

    The first ``n_basis`` columns multiply network weights; the trailing
    ``n_params`` columns (inverse problems only) multiply unknown source
    coefficients.  ``row_labels`` tags each row as pde, boundary or data.
    """

    H: np.ndarray
    Y: np.ndarray
    n_basis: int
    n_params: int
    row_labels: Tuple[str, ...]

    def __post_init__(self):
        H = np.asarray(self.H, dtype=float)
        Y = np.asarray(self.Y, dtype=float).reshape(-1)
        if H.shape[0] != Y.shape[0] or H.shape[0] != len(self.row_labels):
            raise ValueError("row count mismatch between H, Y and row_labels")
        if H.shape[1] != self.n_basis + self.n_params:
            raise ValueError("column count must equal n_basis + n_params")
        H.setflags(write=False)
        Y.setflags(write=False)
        object.__setattr__(self, "H", H)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))

    @property
    def n_rows(self) -> int:
        return self.H.shape[0]

    @property
    def n_cols(self) -> int:
        return self.H.shape[1]


def assemble_forward(basis: RandomBasis, op: LinearOperator, source: Coefficient,
                     collocation_points,
                     boundary_sensors: Sequence[Tuple[BoundaryCondition, float]],
                     ) -> CollocationSystem:
    """Stack PDE residual rows and boundary sensor rows into one system.

    The first block holds one ``operator_rows`` row per collocation point with
    the source value on the right-hand side; the second block holds one
    ``boundary_row`` per sensor with its measured value (0 for periodic pairs).
    """
    colloc = np.asarray(collocation_points, dtype=float).reshape(-1, 2)
    blocks = []
    targets = []
    labels = []
    if colloc.shape[0]:
        blocks.append(operator_rows(basis, op, colloc))
        targets.append(evaluate_pointwise(source, colloc))
        labels.extend([ROW_PDE] * colloc.shape[0])
    for bc, value in boundary_sensors:
        blocks.append(boundary_row(basis, bc)[None, :])
        targets.append(np.array([float(value)]))
        labels.append(ROW_BOUNDARY)
    if not blocks:
        raise EmptySystemError("system has no collocation points and no boundary sensors")
    return CollocationSystem(H=np.vstack(blocks), Y=np.concatenate(targets),
                             n_basis=basis.n, n_params=0, row_labels=tuple(labels))


def assemble_inverse(basis: RandomBasis, op: LinearOperator, source: SeparableSource,
                     collocation_points,
                     boundary_sensors: Sequence[Tuple[BoundaryCondition, float]],
                     data_sensors: SensorSet) -> CollocationSystem:
    """Assemble the augmented system with unknown source coefficients.

    PDE rows are ``[L rows | +phi_j(point)]`` with the residual term on the
    right-hand side, so the trailing solution entries are the coefficients
    multiplying each ``phi_j``.  Boundary and data rows are zero-padded over
    the parameter columns.
    """
    m = source.n_params
    colloc = np.asarray(collocation_points, dtype=float).reshape(-1, 2)
    blocks = []
    targets = []
    labels = []
    if colloc.shape[0]:
        phi_cols = np.column_stack(
            [evaluate_pointwise(fn, colloc) for fn in source.basis_functions])
        blocks.append(np.hstack([operator_rows(basis, op, colloc), phi_cols]))
        targets.append(evaluate_pointwise(source.residual_term, colloc))
        labels.extend([ROW_PDE] * colloc.shape[0])
    pad = np.zeros(m)
    for bc, value in boundary_sensors:
        blocks.append(np.concatenate([boundary_row(basis, bc), pad])[None, :])
        targets.append(np.array([float(value)]))
        labels.append(ROW_BOUNDARY)
    if len(data_sensors):
        data_rows = feature_matrix(basis, data_sensors.points)
        blocks.append(np.hstack([data_rows, np.zeros((len(data_sensors), m))]))
        targets.append(data_sensors.values)
        labels.extend([ROW_DATA] * len(data_sensors))
    if not blocks:
        raise EmptySystemError("system has no rows")
    return CollocationSystem(H=np.vstack(blocks), Y=np.concatenate(targets),
                             n_basis=basis.n, n_params=m, row_labels=tuple(labels))


def dump_system_csv(system: CollocationSystem, path) -> None:
    """Debug dump: one CSV row per system row (label, H entries, then y)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label"] + [f"h{j}" for j in range(system.n_cols)] + ["y"])
        for label, row, y in zip(system.row_labels, system.H, system.Y):
            writer.writerow([label] + [repr(v) for v in row] + [repr(y)])
