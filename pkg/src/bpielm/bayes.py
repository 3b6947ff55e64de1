"""Bayesian linear regression over an assembled collocation system.

A zero-mean isotropic Gaussian prior with precision ``eta`` on the stacked
weight vector, combined with a Gaussian likelihood of variance ``sigma2``
over all rows, gives a Gaussian posterior in closed form.  The two
hyperparameters are tuned by the evidence procedure: alternate the posterior
with fixed-point updates of ``eta`` and ``sigma2`` until the posterior mean
stops moving.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg

from .assembly import CollocationSystem
from .basis import RandomBasis, feature_matrix
from .errors import DegenerateFitError, IllPosedEvidenceError, NumericalError


@dataclass(frozen=True)
class EvidenceConfig:
    """Hyperparameter iteration settings.

    ``eta0`` is the initial prior precision and ``sigma2_0`` the initial noise
    variance.  When ``fix_sigma2`` is set, the noise variance is pinned there
    and only ``eta`` is updated.
    """

    eta0: float = 0.2
    sigma2_0: float = 1.0
    max_iterations: int = 200
    tolerance: float = 1e-6
    fix_sigma2: Optional[float] = None

    def __post_init__(self):
        if self.eta0 <= 0:
            raise ValueError("eta0 must be positive")
        if self.sigma2_0 <= 0:
            raise ValueError("sigma2_0 must be positive")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.fix_sigma2 is not None and self.fix_sigma2 <= 0:
            raise ValueError("fix_sigma2 must be positive when set")


@dataclass(frozen=True)
class Posterior:
    """Gaussian posterior over the stacked weight vector."""

    mu: np.ndarray
    sigma_mat: np.ndarray
    eta: float
    sigma2: float
    iterations_used: int = 0
    converged: bool = True

    def __post_init__(self):
        mu = np.asarray(self.mu, dtype=float)
        sigma_mat = np.asarray(self.sigma_mat, dtype=float)
        mu.setflags(write=False)
        sigma_mat.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma_mat", sigma_mat)

    @property
    def n_cols(self) -> int:
        return self.mu.shape[0]


def posterior(system: CollocationSystem, eta: float, sigma2: float) -> Posterior:
    """Closed-form posterior for fixed hyperparameters.

    Solves ``(H^T H + eta * sigma2 * I) mu = H^T Y`` through a Cholesky
    factorization and recovers the covariance as ``sigma2`` times the inverse
    of the same matrix; the mean is never formed via an explicit inverse.

    The diagonal shift is floored at ``10 * eps * trace(H^T H)`` so the
    factorization stays positive definite when the evidence iteration drives
    ``eta * sigma2`` below the rounding noise of the Gram matrix; the floor
    is orders of magnitude below any statistically meaningful ridge.
    """
    if eta <= 0 or sigma2 <= 0:
        raise ValueError("eta and sigma2 must be positive")
    H, Y = system.H, system.Y
    if H.shape[0] == 0:
        raise ValueError("system has no rows")
    n_cols = H.shape[1]
    gram = H.T @ H
    ridge = max(eta * sigma2, 10.0 * np.finfo(float).eps * float(np.trace(gram)))
    penalized = gram + ridge * np.eye(n_cols)
    try:
        factor = scipy.linalg.cho_factor(penalized, lower=True)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(
            f"Cholesky factorization failed for eta={eta!r}, sigma2={sigma2!r}: {exc}"
        ) from exc
    mu = scipy.linalg.cho_solve(factor, H.T @ Y)
    sigma_mat = sigma2 * scipy.linalg.cho_solve(factor, np.eye(n_cols))
    sigma_mat = 0.5 * (sigma_mat + sigma_mat.T)
    return Posterior(mu=mu, sigma_mat=sigma_mat, eta=float(eta), sigma2=float(sigma2))


def evidence_step(system: CollocationSystem,
                  current: Posterior) -> Tuple[float, float, float]:
    """One fixed-point update of the hyperparameters.

    Returns ``(eta_new, sigma2_new, gamma)`` where ``gamma = n_cols - eta *
    trace(Sigma)`` is the effective number of parameters, ``eta_new = gamma /
    (mu^T mu)`` and ``sigma2_new = ||Y - H mu||^2 / (n_rows - gamma)``.
    """
    n_rows, n_cols = system.H.shape
    gamma = n_cols - current.eta * float(np.trace(current.sigma_mat))
    mu_sq = float(current.mu @ current.mu)
    if mu_sq == 0.0:
        raise DegenerateFitError("posterior mean is identically zero")
    dof = n_rows - gamma
    if dof <= 0:
        raise IllPosedEvidenceError(
            f"effective parameters {gamma:.3f} >= row count {n_rows}")
    residual = system.Y - system.H @ current.mu
    sigma2_new = float(residual @ residual) / dof
    return gamma / mu_sq, sigma2_new, gamma


def fit_evidence(system: CollocationSystem, config: EvidenceConfig = EvidenceConfig()
                 ) -> Posterior:
    """Alternate posterior computation and evidence updates until the mean settles.

    Convergence is declared when the max-norm change of the posterior mean
    between successive iterations falls below ``config.tolerance``.
    Non-convergence within ``max_iterations`` is reported through the
    ``converged`` flag, not an error.
    """
    eta = config.eta0
    sigma2 = config.fix_sigma2 if config.fix_sigma2 is not None else config.sigma2_0
    prev_mu = None
    post = None
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        post = posterior(system, eta, sigma2)
        if prev_mu is not None and float(np.max(np.abs(post.mu - prev_mu))) < config.tolerance:
            converged = True
            break
        prev_mu = post.mu
        eta, sigma2_new, _ = evidence_step(system, post)
        if config.fix_sigma2 is None:
            sigma2 = sigma2_new
    return dataclasses.replace(post, iterations_used=iterations, converged=converged)


def predict(post: Posterior, basis: RandomBasis, points,
            n_params: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """Predictive mean and variance of the solution at each point.

    The feature row is zero-padded over any parameter columns, so the mean is
    the network output under the posterior mean weights and the variance is
    ``sigma2 + h Sigma h^T`` (never below ``sigma2``).
    """
    phi = feature_matrix(basis, points)
    if phi.shape[1] + n_params != post.n_cols:
        raise ValueError(
            f"basis width {phi.shape[1]} + n_params {n_params} != posterior "
            f"columns {post.n_cols}")
    if n_params:
        phi = np.hstack([phi, np.zeros((phi.shape[0], n_params))])
    means = phi @ post.mu
    quad = np.einsum("ij,ij->i", phi @ post.sigma_mat, phi)
    variances = post.sigma2 + np.maximum(quad, 0.0)
    return means, variances


def extract_parameters(post: Posterior, n_basis: int) -> List[Tuple[float, float]]:
    """Posterior means and standard deviations of the trailing parameter entries."""
    n_params = post.n_cols - n_basis
    if n_params <= 0:
        raise ValueError("posterior has no parameter columns")
    means = post.mu[n_basis:]
    stds = np.sqrt(np.maximum(np.diag(post.sigma_mat)[n_basis:], 0.0))
    return [(float(m), float(s)) for m, s in zip(means, stds)]
