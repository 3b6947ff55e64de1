"""Frozen random feature layer and its analytic tanh derivatives.

The hidden layer of the network is a bank of ``n`` tanh neurons whose input
weights are drawn once from a seeded generator and never trained.  All
solvers in this package operate on feature matrices produced here, either
plain activations or their exact partial derivatives with respect to the
two input coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UnsupportedOrderError

#: Highest total derivative order with a closed form below.
MAX_DERIVATIVE_ORDER = 3


@dataclass(frozen=True)
class RandomBasis:
    """Immutable bank of ``n`` tanh neurons with random affine inputs.

    Neuron ``j`` computes ``tanh(alpha[j] * x + beta[j] * y + gamma[j])``.
    For problems posed on an interval, ``beta`` is all zeros and the second
    coordinate is carried as 0.
    """

    n: int
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    weight_range: float
    seed: int

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != (self.n,):
                raise ValueError(f"{name} must have shape ({self.n},), got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)


def init_basis(n: int, weight_range: float = 1.0, seed: int = 0,
               zero_beta: bool = False) -> RandomBasis:
    """Draw the 3n input weights uniformly from [-weight_range, weight_range].

    The generator is NumPy's default PCG64 seeded with ``seed``; identical
    ``(n, weight_range, seed)`` arguments reproduce bit-identical weights on
    any platform.  ``zero_beta=True`` zeroes the second-coordinate weights
    after drawing (interval problems); the alpha and gamma draws are
    unaffected by the flag.
    """
    if n < 1:
        raise ValueError(f"neuron count must be a positive integer, got {n}")
    if weight_range <= 0:
        raise ValueError(f"weight_range must be positive, got {weight_range}")
    rng = np.random.default_rng(seed)
    alpha, beta, gamma = rng.uniform(-weight_range, weight_range, size=(3, n))
    if zero_beta:
        beta = np.zeros(n)
    return RandomBasis(n=n, alpha=alpha, beta=beta, gamma=gamma,
                       weight_range=float(weight_range), seed=int(seed))


def activation_derivative(z, order: int):
    """Closed-form ``d^k tanh / dz^k`` for ``k`` in 0..3, elementwise over ``z``."""
    if order not in (0, 1, 2, 3):
        raise UnsupportedOrderError(f"derivative order must be in 0..3, got {order}")
    t = np.tanh(z)
    if order == 0:
        return t
    s = 1.0 - t * t
    if order == 1:
        return s
    if order == 2:
        return -2.0 * t * s
    return (6.0 * t * t - 2.0) * s


def feature_matrix(basis: RandomBasis, points, order_x: int = 0,
                   order_y: int = 0) -> np.ndarray:
    """Feature values or exact partial derivatives at the given points.

    Entry ``(i, j)`` is ``alpha[j]**order_x * beta[j]**order_y *
    phi^(order_x+order_y)(z_ij)`` with ``z_ij = alpha[j]*x_i + beta[j]*y_i +
    gamma[j]``; orders ``(0, 0)`` give the plain feature matrix.  An empty
    point list yields a ``(0, n)`` matrix.
    """
    if order_x < 0 or order_y < 0:
        raise UnsupportedOrderError(
            f"derivative orders must be non-negative, got ({order_x}, {order_y})")
    if order_x + order_y > MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrderError(
            f"total derivative order {order_x + order_y} exceeds cap {MAX_DERIVATIVE_ORDER}")
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        return np.zeros((0, basis.n))
    pts = np.atleast_2d(pts)
    if pts.shape[1] != 2:
        raise ValueError(f"points must be 2D, got shape {pts.shape}")
    z = pts[:, :1] * basis.alpha + pts[:, 1:] * basis.beta + basis.gamma
    coeff = basis.alpha ** order_x * basis.beta ** order_y
    return coeff * activation_derivative(z, order_x + order_y)


def network_output(basis: RandomBasis, omega: np.ndarray, points) -> np.ndarray:
    """Scalar network output ``phi(z) @ omega[:n]`` at the given points.

    Trailing entries of ``omega`` beyond the basis width (inverse-problem
    parameters) are ignored.
    """
    return feature_matrix(basis, points) @ np.asarray(omega, dtype=float)[:basis.n]
