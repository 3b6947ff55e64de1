"""Benchmark problem definitions: domains, operators, exact solutions, sensors.

Five problems are provided: a 2D Poisson equation on a butterfly-shaped
region, a periodic 1D advection equation, a forced 1D diffusion equation,
and two inverse problems (1D Poisson and 1D Helmholtz) whose source
coefficients are recovered from interior data sensors.

Time-dependent 1D problems carry time in the second coordinate; interval
problems carry 0 there and use a zero-beta basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple, Union

import numpy as np

from .assembly import SensorSet
from .operators import BoundaryCondition, Coefficient, LinearOperator, SeparableSource

MEMBERSHIP_TOL = 1e-12


@dataclass(frozen=True)
class ButterflyDomain:
    """Region enclosed by x = a*rho(t)*cos(t), y = b*rho(t)*sin(t)."""

    x_scale: float = 0.55
    y_scale: float = 0.75

    kind = "butterfly"

    @staticmethod
    def rho(theta):
        return 1.0 + np.cos(theta) * np.sin(4.0 * theta)

    def boundary_points(self, thetas) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        r = self.rho(thetas)
        return np.column_stack([self.x_scale * r * np.cos(thetas),
                                self.y_scale * r * np.sin(thetas)])

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        u = pts[:, 0] / self.x_scale
        v = pts[:, 1] / self.y_scale
        radius = np.hypot(u, v)
        theta = np.arctan2(v, u)
        return radius <= self.rho(theta) + MEMBERSHIP_TOL

    @property
    def bounding_box(self) -> Tuple[float, float, float, float]:
        return (-1.1, 1.1, -1.5, 1.5)

    def sample_interior(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Rejection sampling from the bounding box against the membership test."""
        x0, x1, y0, y1 = self.bounding_box
        points = np.zeros((0, 2))
        while points.shape[0] < n:
            cand = rng.uniform([x0, y0], [x1, y1], size=(2 * n, 2))
            points = np.vstack([points, cand[self.contains(cand)]])
        return points[:n]


@dataclass(frozen=True)
class RectangleDomain:
    """Space-time box [x1, x2] x [t0, t1]."""

    x_range: Tuple[float, float]
    t_range: Tuple[float, float]

    kind = "rectangle"

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        (x1, x2), (t0, t1) = self.x_range, self.t_range
        return ((pts[:, 0] >= x1) & (pts[:, 0] <= x2)
                & (pts[:, 1] >= t0) & (pts[:, 1] <= t1))

    @property
    def bounding_box(self) -> Tuple[float, float, float, float]:
        return (*self.x_range, *self.t_range)

    def sample_interior(self, n: int, rng: np.random.Generator) -> np.ndarray:
        x0, x1, y0, y1 = self.bounding_box
        return rng.uniform([x0, y0], [x1, y1], size=(n, 2))


@dataclass(frozen=True)
class IntervalDomain:
    """1D interval [a, b]; points are embedded as (x, 0)."""

    x_range: Tuple[float, float]

    kind = "interval"

    def contains(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        a, b = self.x_range
        return (pts[:, 0] >= a) & (pts[:, 0] <= b)

    @property
    def bounding_box(self) -> Tuple[float, float, float, float]:
        a, b = self.x_range
        return (a, b, 0.0, 0.0)

    def sample_interior(self, n: int, rng: np.random.Generator) -> np.ndarray:
        a, b = self.x_range
        return np.column_stack([rng.uniform(a, b, size=n), np.zeros(n)])


DomainDescriptor = Union[ButterflyDomain, RectangleDomain, IntervalDomain]


@dataclass(frozen=True)
class ProblemSpec:
    """One benchmark problem: PDE, domain, exact solution, sensor layouts."""

    name: str
    operator: LinearOperator
    source: Union[Coefficient, SeparableSource]
    domain: DomainDescriptor
    exact_solution: Callable[[np.ndarray, np.ndarray], np.ndarray]
    boundary_layout: Callable[[int], List[BoundaryCondition]]
    data_layout: Optional[Callable[[int], np.ndarray]] = None
    exact_parameters: Optional[Tuple[float, ...]] = None

    @property
    def is_inverse(self) -> bool:
        return isinstance(self.source, SeparableSource)

    def exact_at(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.asarray(self.exact_solution(pts[:, 0], pts[:, 1]), dtype=float)


def poisson2d_butterfly() -> ProblemSpec:
    """2D Poisson equation on the butterfly region with a Gaussian-bump solution."""
    domain = ButterflyDomain()

    def exact(x, y):
        return 0.5 + np.exp(-(2.0 * x ** 2 + 4.0 * y ** 2))

    def source(x, y):
        return (16.0 * x ** 2 + 64.0 * y ** 2 - 12.0) * np.exp(-(2.0 * x ** 2 + 4.0 * y ** 2))

    def boundary_layout(n_boundary: int) -> List[BoundaryCondition]:
        if n_boundary < 1:
            raise ValueError("need at least one boundary sensor")
        thetas = 2.0 * np.pi * np.arange(n_boundary) / n_boundary
        return [BoundaryCondition.dirichlet(p) for p in domain.boundary_points(thetas)]

    return ProblemSpec(
        name="poisson2d_butterfly",
        operator=LinearOperator.from_orders((1.0, 2, 0), (1.0, 0, 2)),
        source=source,
        domain=domain,
        exact_solution=exact,
        boundary_layout=boundary_layout,
    )


#: Advection wave speed.
WAVE_SPEED = -2.0


def advection1d() -> ProblemSpec:
    """Periodic 1D advection of a sech pulse; u_t - c u_x = 0 with c = -2."""
    domain = RectangleDomain(x_range=(0.0, 1.0), t_range=(0.0, 1.0))

    def exact(x, t):
        xi = np.mod(x - 0.5 + WAVE_SPEED * t + 0.5, 1.0)
        return 2.0 / np.cosh(3.0 * (xi - 0.5))

    def boundary_layout(n_boundary: int) -> List[BoundaryCondition]:
        n_initial, lateral_t = _rectangle_edge_split(domain, n_boundary)
        bcs = [BoundaryCondition.initial((x, 0.0))
               for x in _edge_positions(domain.x_range, n_initial)]
        bcs.extend(BoundaryCondition.periodic_pair((0.0, t), (1.0, t)) for t in lateral_t)
        return bcs

    return ProblemSpec(
        name="advection1d",
        operator=LinearOperator.from_orders((1.0, 0, 1), (-WAVE_SPEED, 1, 0)),
        source=0.0,
        domain=domain,
        exact_solution=exact,
        boundary_layout=boundary_layout,
    )


#: Diffusion coefficient.
DIFFUSIVITY = 0.01


def _diffusion_profile(s):
    return 2.0 * np.cos(np.pi * s + np.pi / 5.0) + 1.5 * np.cos(2.0 * np.pi * s - 3.0 * np.pi / 5.0)


def _diffusion_profile_d1(s):
    return (-2.0 * np.pi * np.sin(np.pi * s + np.pi / 5.0)
            - 3.0 * np.pi * np.sin(2.0 * np.pi * s - 3.0 * np.pi / 5.0))


def _diffusion_profile_d2(s):
    return (-2.0 * np.pi ** 2 * np.cos(np.pi * s + np.pi / 5.0)
            - 6.0 * np.pi ** 2 * np.cos(2.0 * np.pi * s - 3.0 * np.pi / 5.0))


def diffusion1d() -> ProblemSpec:
    """Forced 1D diffusion with a separable two-cosine exact solution.

    The source is derived in closed form from the exact solution:
    f = X(x) T'(t) - v X''(x) T(t).
    """
    domain = RectangleDomain(x_range=(0.0, 1.0), t_range=(0.0, 2.0))

    def exact(x, t):
        return _diffusion_profile(x) * _diffusion_profile(t)

    def source(x, t):
        return (_diffusion_profile(x) * _diffusion_profile_d1(t)
                - DIFFUSIVITY * _diffusion_profile_d2(x) * _diffusion_profile(t))

    def boundary_layout(n_boundary: int) -> List[BoundaryCondition]:
        n_initial, lateral_t = _rectangle_edge_split(domain, n_boundary)
        bcs = [BoundaryCondition.initial((x, 0.0))
               for x in _edge_positions(domain.x_range, n_initial)]
        bcs.extend(BoundaryCondition.dirichlet((0.0, t)) for t in lateral_t)
        bcs.extend(BoundaryCondition.dirichlet((1.0, t)) for t in lateral_t)
        return bcs

    return ProblemSpec(
        name="diffusion1d",
        operator=LinearOperator.from_orders((1.0, 0, 1), (-DIFFUSIVITY, 2, 0)),
        source=source,
        domain=domain,
        exact_solution=exact,
        boundary_layout=boundary_layout,
    )


def inverse_poisson1d() -> ProblemSpec:
    """1D Poisson with two unknown source coefficients on [-10, 10].

    The exact solution sin(0.7x) + cos(1.5x) - 0.1x fixes the coefficient
    vector at (0.49, 2.25) under the column convention of assemble_inverse.
    """
    domain = IntervalDomain(x_range=(-10.0, 10.0))

    def exact(x, _y):
        return np.sin(0.7 * x) + np.cos(1.5 * x) - 0.1 * x

    source = SeparableSource(basis_functions=(
        lambda x, _y: np.sin(0.7 * x),
        lambda x, _y: np.cos(1.5 * x),
    ))

    return ProblemSpec(
        name="inverse_poisson1d",
        operator=LinearOperator.from_orders((1.0, 2, 0)),
        source=source,
        domain=domain,
        exact_solution=exact,
        boundary_layout=lambda n: _interval_boundary(domain, n),
        data_layout=lambda n: _interval_interior(domain, n),
        exact_parameters=(0.49, 2.25),
    )


#: Helmholtz squared wave number.
WAVE_NUMBER_SQ = 10.0


def inverse_helmholtz1d() -> ProblemSpec:
    """1D Helmholtz with three unknown source coefficients on [-2pi, 2pi].

    Substituting the exact solution sin(2x)cos(4x) + 1 into u_xx + 10 u gives
    -10 f1 - 16 f2 + 10, so under the column convention of assemble_inverse
    the true coefficients over (f1, f2, 1) are (10, 16, -10).
    """
    domain = IntervalDomain(x_range=(-2.0 * math.pi, 2.0 * math.pi))

    def exact(x, _y):
        return np.sin(2.0 * x) * np.cos(4.0 * x) + 1.0

    source = SeparableSource(basis_functions=(
        lambda x, _y: np.sin(2.0 * x) * np.cos(4.0 * x),
        lambda x, _y: np.cos(2.0 * x) * np.sin(4.0 * x),
        1.0,
    ))

    return ProblemSpec(
        name="inverse_helmholtz1d",
        operator=LinearOperator.from_orders((1.0, 2, 0), (WAVE_NUMBER_SQ, 0, 0)),
        source=source,
        domain=domain,
        exact_solution=exact,
        boundary_layout=lambda n: _interval_boundary(domain, n),
        data_layout=lambda n: _interval_interior(domain, n),
        exact_parameters=(10.0, 16.0, -10.0),
    )


PROBLEM_BUILDERS = {
    "poisson2d_butterfly": poisson2d_butterfly,
    "advection1d": advection1d,
    "diffusion1d": diffusion1d,
    "inverse_poisson1d": inverse_poisson1d,
    "inverse_helmholtz1d": inverse_helmholtz1d,
}


def build_problem(name: str) -> ProblemSpec:
    try:
        return PROBLEM_BUILDERS[name]()
    except KeyError:
        raise ValueError(
            f"unknown problem {name!r}; known: {', '.join(sorted(PROBLEM_BUILDERS))}"
        ) from None


def _edge_positions(span: Tuple[float, float], count: int) -> np.ndarray:
    """``count`` equidistant positions along an edge, endpoints included."""
    lo, hi = span
    if count == 1:
        return np.array([0.5 * (lo + hi)])
    return np.linspace(lo, hi, count)


def _rectangle_edge_split(domain: RectangleDomain,
                          n_boundary: int) -> Tuple[int, np.ndarray]:
    """Split the sensor budget over the initial edge and the two lateral edges.

    Sensors are allocated proportionally to edge length, rounding down on the
    lateral edges with the remainder going to the initial edge.  Lateral
    sensors sit at equal time increments excluding t0 (those corners belong
    to the initial edge).
    """
    if n_boundary < 3:
        raise ValueError("rectangle problems need at least 3 boundary sensors")
    (x1, x2), (t0, t1) = domain.x_range, domain.t_range
    length_x = x2 - x1
    length_t = t1 - t0
    per_lateral = int(n_boundary * length_t // (length_x + 2.0 * length_t))
    n_initial = n_boundary - 2 * per_lateral
    lateral_t = np.linspace(t0, t1, per_lateral + 1)[1:] if per_lateral else np.zeros(0)
    return n_initial, lateral_t


def _interval_boundary(domain: IntervalDomain, n_boundary: int) -> List[BoundaryCondition]:
    """Alternating endpoint sensors; two sensors cover both ends."""
    if n_boundary < 2:
        raise ValueError("interval problems need at least 2 boundary sensors")
    a, b = domain.x_range
    return [BoundaryCondition.dirichlet((a if i % 2 == 0 else b, 0.0))
            for i in range(n_boundary)]


def _interval_interior(domain: IntervalDomain, n_data: int) -> np.ndarray:
    """``n_data`` equidistant interior points, endpoints excluded."""
    if n_data < 1:
        raise ValueError("need at least one data sensor")
    a, b = domain.x_range
    xs = np.linspace(a, b, n_data + 2)[1:-1]
    return np.column_stack([xs, np.zeros(n_data)])


def place_sensors(spec: ProblemSpec, n_boundary: int, n_data: int,
                  noise_sigma: float, seed: int) -> Tuple[SensorSet, SensorSet]:
    """Place boundary and interior sensors and draw their noisy values.

    Boundary sensors follow the problem's layout; only value-carrying
    conditions (dirichlet/initial) produce measurements, periodic pairs are
    structural.  Values are the exact solution plus independent zero-mean
    Gaussian noise of scale ``noise_sigma``, drawn from a generator seeded
    with ``seed`` (boundary values first, then data values).
    """
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be non-negative")
    if n_data < 0:
        raise ValueError("n_data must be non-negative")
    bcs = spec.boundary_layout(n_boundary)
    measured = np.array([bc.point for bc in bcs if bc.measures_value], dtype=float)
    measured = measured.reshape(-1, 2)
    rng = np.random.default_rng(seed)
    boundary_values = spec.exact_at(measured) if measured.size else np.zeros(0)
    if noise_sigma > 0 and measured.size:
        boundary_values = boundary_values + noise_sigma * rng.standard_normal(len(measured))
    boundary = SensorSet(measured, boundary_values, noise_sigma)
    if n_data == 0:
        return boundary, SensorSet.empty()
    if spec.data_layout is None:
        raise ValueError(f"problem {spec.name!r} takes no interior data sensors")
    data_points = spec.data_layout(n_data)
    data_values = spec.exact_at(data_points)
    if noise_sigma > 0:
        data_values = data_values + noise_sigma * rng.standard_normal(len(data_points))
    return boundary, SensorSet(data_points, data_values, noise_sigma)


def boundary_condition_pairs(spec: ProblemSpec, n_boundary: int,
                             boundary_sensors: SensorSet,
                             ) -> List[Tuple[BoundaryCondition, float]]:
    """Pair layout conditions with measured values (periodic rows target 0)."""
    bcs = spec.boundary_layout(n_boundary)
    values = iter(boundary_sensors.values)
    return [(bc, next(values) if bc.measures_value else 0.0) for bc in bcs]


def sample_collocation(spec: ProblemSpec, n_collocation: int, seed: int) -> np.ndarray:
    """Uniform random interior collocation points, seeded and reproducible."""
    if n_collocation < 0:
        raise ValueError("n_collocation must be non-negative")
    return spec.domain.sample_interior(n_collocation, np.random.default_rng(seed))


def evaluation_grid(spec: ProblemSpec) -> np.ndarray:
    """Metric evaluation points: 101x101 box grid filtered by membership for
    2D domains, 201 equidistant points for intervals."""
    if isinstance(spec.domain, IntervalDomain):
        a, b = spec.domain.x_range
        xs = np.linspace(a, b, 201)
        return np.column_stack([xs, np.zeros_like(xs)])
    x0, x1, y0, y1 = spec.domain.bounding_box
    xs, ys = np.meshgrid(np.linspace(x0, x1, 101), np.linspace(y0, y1, 101))
    grid = np.column_stack([xs.ravel(), ys.ravel()])
    return grid[spec.domain.contains(grid)]
