"""Linear differential operators and boundary conditions as data.

Operators are stored as lists of scaled partial-derivative terms rather than
callbacks so that assembly can introspect derivative orders and validate them
against the basis cap.  Coefficients stay callable to support spatially
varying terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple, Union

import numpy as np

from .basis import MAX_DERIVATIVE_ORDER, RandomBasis, feature_matrix

#: A term coefficient: a constant, or a vectorized function of (x, y) arrays.
Coefficient = Union[float, Callable[[np.ndarray, np.ndarray], np.ndarray]]


def evaluate_pointwise(fn_or_const: Coefficient, points: np.ndarray) -> np.ndarray:
    """Evaluate a constant or a vectorized ``f(x, y)`` at an ``(N, 2)`` point array."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if callable(fn_or_const):
        values = np.asarray(fn_or_const(pts[:, 0], pts[:, 1]), dtype=float)
        return np.broadcast_to(values, (pts.shape[0],)).copy()
    return np.full(pts.shape[0], float(fn_or_const))


@dataclass(frozen=True)
class DifferentialTerm:
    """One scaled partial derivative ``coeff(x, y) * d^(kx+ky) / dx^kx dy^ky``."""

    coeff: Coefficient
    order_x: int
    order_y: int

    def __post_init__(self):
        if self.order_x < 0 or self.order_y < 0:
            raise ValueError("derivative orders must be non-negative")
        if self.order_x + self.order_y > MAX_DERIVATIVE_ORDER:
            raise ValueError(
                f"total term order {self.order_x + self.order_y} exceeds cap "
                f"{MAX_DERIVATIVE_ORDER}")


@dataclass(frozen=True)
class LinearOperator:
    """Sum of differential terms; evaluation is structurally linear."""

    terms: Tuple[DifferentialTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise ValueError("operator needs at least one term")

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.terms + other.terms)

    @classmethod
    def from_orders(cls, *specs: Tuple[Coefficient, int, int]) -> "LinearOperator":
        """Build from ``(coeff, order_x, order_y)`` triples."""
        return cls(tuple(DifferentialTerm(c, kx, ky) for c, kx, ky in specs))


@dataclass(frozen=True)
class BoundaryCondition:
    """A single boundary/initial constraint row.

    ``dirichlet`` and ``initial`` rows equate the network value at ``point``
    with a measured value; ``periodic_pair`` rows equate the network values at
    two distinct points (target 0).
    """

    kind: str
    point: Tuple[float, float]
    point_b: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.kind not in ("dirichlet", "periodic_pair", "initial"):
            raise ValueError(f"unknown boundary condition kind {self.kind!r}")
        object.__setattr__(self, "point", (float(self.point[0]), float(self.point[1])))
        if self.kind == "periodic_pair":
            if self.point_b is None:
                raise ValueError("periodic_pair needs a second point")
            pb = (float(self.point_b[0]), float(self.point_b[1]))
            if pb == self.point:
                raise ValueError("periodic_pair points must be distinct")
            object.__setattr__(self, "point_b", pb)
        elif self.point_b is not None:
            raise ValueError(f"{self.kind} takes a single point")

    @property
    def measures_value(self) -> bool:
        """Whether this condition carries a sensor measurement (periodic rows do not)."""
        return self.kind != "periodic_pair"

    @classmethod
    def dirichlet(cls, point) -> "BoundaryCondition":
        return cls("dirichlet", tuple(point))

    @classmethod
    def initial(cls, point) -> "BoundaryCondition":
        return cls("initial", tuple(point))

    @classmethod
    def periodic_pair(cls, point_a, point_b) -> "BoundaryCondition":
        return cls("periodic_pair", tuple(point_a), tuple(point_b))


@dataclass(frozen=True)
class SeparableSource:
    """Source term ``sum_j lambda_j * phi_j(x, y) - f_res(x, y)`` with unknown lambda.

    ``basis_functions`` are the known shapes ``phi_j`` multiplying the unknown
    coefficients; ``residual_term`` is the known remainder moved to the
    right-hand side.
    """

    basis_functions: Tuple[Coefficient, ...]
    residual_term: Coefficient = 0.0

    def __post_init__(self):
        object.__setattr__(self, "basis_functions", tuple(self.basis_functions))
        if not self.basis_functions:
            raise ValueError("separable source needs at least one basis function")

    @property
    def n_params(self) -> int:
        return len(self.basis_functions)


def operator_rows(basis: RandomBasis, op: LinearOperator, points) -> np.ndarray:
    """Constraint rows applying ``op`` to the network at each point.

    Row ``i`` dotted with a weight vector equals ``(L u_net)(point_i)``.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    rows = np.zeros((pts.shape[0], basis.n))
    for term in op.terms:
        coeff = evaluate_pointwise(term.coeff, pts)
        rows += coeff[:, None] * feature_matrix(basis, pts, term.order_x, term.order_y)
    return rows


def operator_row(basis: RandomBasis, op: LinearOperator, point) -> np.ndarray:
    """Single-point version of :func:`operator_rows`."""
    return operator_rows(basis, op, [point])[0]


def boundary_row(basis: RandomBasis, bc: BoundaryCondition) -> np.ndarray:
    """Feature row encoding one boundary/initial constraint.

    Dirichlet/initial rows are plain feature rows; periodic rows are the
    difference of the feature rows at the two points, constrained to 0.
    """
    if bc.kind == "periodic_pair":
        pair = feature_matrix(basis, [bc.point, bc.point_b])
        return pair[0] - pair[1]
    return feature_matrix(basis, [bc.point])[0]
