"""Seeded experiment runner: single runs, sweeps, and machine-readable outputs.

A run is one (problem, method, parameter set, seed) combination.  The runner
derives three independent sub-seeds from the run seed (basis weights,
collocation sampling, sensor noise), assembles and solves the system, and
evaluates predictions on the problem's evaluation grid.  ``run_experiment``
iterates sweep values x seeds x methods and writes results.csv, one grid CSV
per run, and summary.json with per-method medians.
"""

from __future__ import annotations

import contextlib
import csv
import json
import time
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

try:
    from threadpoolctl import threadpool_limits
except ImportError:  # pragma: no cover
    threadpool_limits = None

from .assembly import assemble_forward, assemble_inverse
from .basis import init_basis
from .bayes import EvidenceConfig, extract_parameters, fit_evidence, predict
from .errors import (
    DegenerateFitError,
    EmptySystemError,
    IllPosedEvidenceError,
    NumericalError,
)
from .metrics import MetricsReport, evaluate
from .pinv import predict_mean, solve_pinv
from .problems import (
    IntervalDomain,
    PROBLEM_BUILDERS,
    ProblemSpec,
    boundary_condition_pairs,
    build_problem,
    evaluation_grid,
    place_sensors,
    sample_collocation,
)

METHODS = ("bpielm", "pielm")
SWEEP_AXES = ("neurons", "boundary", "noise")

#: Fixed results.csv header; lambda columns stay empty for forward problems.
RESULTS_HEADER = (
    "seed", "method", "problem", "sweep_axis", "sweep_value",
    "n_neurons", "n_collocation", "n_boundary", "n_data",
    "noise_sigma", "weight_range",
    "mae", "max_ae", "coverage",
    "lambda1", "lambda1_std", "lambda2", "lambda2_std", "lambda3", "lambda3_std",
    "wall_time_seconds", "status", "error",
)

_RUN_FAILURES = (NumericalError, DegenerateFitError, IllPosedEvidenceError,
                 EmptySystemError)


def _solver_threads():
    """Single-threaded BLAS for the timed assemble+solve region.

    The systems are small and dense; multi-threaded BLAS adds per-call
    synchronization that dominates the evidence loop, and reported wall
    times are specified as single-threaded.
    """
    if threadpool_limits is None:  # pragma: no cover
        return contextlib.nullcontext()
    return threadpool_limits(limits=1)


class ConfigError(ValueError):
    """The experiment configuration is missing, malformed or inconsistent."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment (optionally a one-axis sweep)."""

    problem: str
    method: str = "both"
    n_neurons: int = 100
    n_collocation: int = 400
    n_boundary: int = 19
    n_data: int = 0
    noise_sigma: float = 0.01
    weight_range: float = 1.0
    seeds: Tuple[int, ...] = (0,)
    evidence: EvidenceConfig = field(default_factory=EvidenceConfig)
    sweep_axis: Optional[str] = None
    sweep_values: Optional[Tuple[float, ...]] = None
    output_dir: str = "results"
    pinv_cutoff: Optional[float] = None

    def __post_init__(self):
        if self.problem not in PROBLEM_BUILDERS:
            raise ConfigError(
                f"unknown problem {self.problem!r}; known: "
                f"{', '.join(sorted(PROBLEM_BUILDERS))}")
        if self.method not in METHODS + ("both",):
            raise ConfigError(f"method must be one of bpielm, pielm, both; got {self.method!r}")
        for name in ("n_neurons", "n_collocation", "n_boundary"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be positive")
        if self.n_data < 0:
            raise ConfigError("n_data must be non-negative")
        if self.noise_sigma < 0:
            raise ConfigError("noise_sigma must be non-negative")
        if self.weight_range <= 0:
            raise ConfigError("weight_range must be positive")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        if (self.sweep_axis is None) != (self.sweep_values is None):
            raise ConfigError("sweep needs both an axis and a value list")
        if self.sweep_axis is not None:
            if self.sweep_axis not in SWEEP_AXES:
                raise ConfigError(
                    f"sweep axis must be one of {', '.join(SWEEP_AXES)}")
            if not self.sweep_values:
                raise ConfigError("sweep value list must be non-empty")
            object.__setattr__(self, "sweep_values",
                               tuple(float(v) for v in self.sweep_values))

    @property
    def methods(self) -> Tuple[str, ...]:
        return METHODS if self.method == "both" else (self.method,)


def load_config(path, output_dir: Optional[str] = None,
                seeds: Optional[Sequence[int]] = None) -> ExperimentConfig:
    """Load and validate a JSON experiment configuration.

    ``output_dir`` and ``seeds`` override the corresponding file entries.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    known = {"problem", "method", "n_neurons", "n_collocation", "n_boundary",
             "n_data", "noise_sigma", "weight_range", "seeds", "evidence",
             "sweep", "output_dir", "pinv_cutoff"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "problem" not in raw:
        raise ConfigError("config must name a problem")
    kwargs = {k: raw[k] for k in known - {"evidence", "sweep", "seeds"} if k in raw}
    if "seeds" in raw:
        kwargs["seeds"] = tuple(raw["seeds"])
    try:
        if "evidence" in raw:
            kwargs["evidence"] = EvidenceConfig(**raw["evidence"])
        sweep = raw.get("sweep")
        if sweep is not None:
            kwargs["sweep_axis"] = sweep.get("axis")
            kwargs["sweep_values"] = tuple(sweep.get("values", ()))
        if output_dir is not None:
            kwargs["output_dir"] = str(output_dir)
        if seeds is not None:
            kwargs["seeds"] = tuple(int(s) for s in seeds)
        return ExperimentConfig(**kwargs)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


@dataclass
class RunRecord:
    """Outcome of a single run, including the evaluation-grid predictions."""

    seed: int
    method: str
    problem: str
    sweep_axis: Optional[str]
    sweep_value: Optional[float]
    n_neurons: int
    n_collocation: int
    n_boundary: int
    n_data: int
    noise_sigma: float
    weight_range: float
    status: str = "ok"
    error: str = ""
    metrics: Optional[MetricsReport] = None
    lambdas: Optional[List[Tuple[float, Optional[float]]]] = None
    grid_points: Optional[np.ndarray] = None
    grid_exact: Optional[np.ndarray] = None
    grid_mean: Optional[np.ndarray] = None
    grid_std: Optional[np.ndarray] = None


def derive_subseeds(seed: int) -> Tuple[int, int, int]:
    """Basis, collocation and noise sub-seeds from one run seed."""
    state = np.random.SeedSequence(seed).generate_state(3, dtype=np.uint64)
    return tuple(int(s) for s in state)


def run_single(spec: ProblemSpec, method: str, *, n_neurons: int,
               n_collocation: int, n_boundary: int, n_data: int,
               noise_sigma: float, weight_range: float,
               evidence: EvidenceConfig, seed: int,
               pinv_cutoff: Optional[float] = None,
               grid_points: Optional[np.ndarray] = None) -> RunRecord:
    """Solve one benchmark instance with one method and evaluate it.

    Only assembly and the solve are timed; problem construction, sensor
    placement and grid evaluation are excluded.  ``grid_points`` overrides
    the default evaluation grid (used to share a precomputed grid across
    runs).
    """
    record = RunRecord(
        seed=seed, method=method, problem=spec.name, sweep_axis=None,
        sweep_value=None, n_neurons=n_neurons, n_collocation=n_collocation,
        n_boundary=n_boundary, n_data=n_data, noise_sigma=noise_sigma,
        weight_range=weight_range)
    basis_seed, colloc_seed, noise_seed = derive_subseeds(seed)
    basis = init_basis(n_neurons, weight_range, basis_seed,
                       zero_beta=isinstance(spec.domain, IntervalDomain))
    colloc = sample_collocation(spec, n_collocation, colloc_seed)
    b_sensors, d_sensors = place_sensors(spec, n_boundary, n_data,
                                         noise_sigma, noise_seed)
    pairs = boundary_condition_pairs(spec, n_boundary, b_sensors)
    if grid_points is None:
        grid_points = evaluation_grid(spec)
    try:
        with _solver_threads():
            start = time.perf_counter()
            if spec.is_inverse:
                system = assemble_inverse(basis, spec.operator, spec.source,
                                          colloc, pairs, d_sensors)
            else:
                system = assemble_forward(basis, spec.operator, spec.source,
                                          colloc, pairs)
            if method == "bpielm":
                post = fit_evidence(system, evidence)
                wall = time.perf_counter() - start
            elif method == "pielm":
                solution = solve_pinv(system, pinv_cutoff)
                wall = time.perf_counter() - start
            else:
                raise ValueError(f"unknown method {method!r}")
        if method == "bpielm":
            means, variances = predict(post, basis, grid_points, system.n_params)
            if system.n_params:
                record.lambdas = list(extract_parameters(post, basis.n))
        else:
            means = predict_mean(solution, basis, grid_points)
            variances = np.zeros_like(means)
            if system.n_params:
                record.lambdas = [(float(v), None)
                                  for v in solution.omega[basis.n:]]
    except _RUN_FAILURES as exc:
        record.status = "failed"
        record.error = f"{type(exc).__name__}: {exc}"
        return record
    exact = spec.exact_at(grid_points)
    param_errors = None
    if record.lambdas is not None and spec.exact_parameters is not None:
        param_errors = tuple(abs(est - true) for (est, _), true
                             in zip(record.lambdas, spec.exact_parameters))
    record.metrics = evaluate(means, variances, exact, wall_time_seconds=wall,
                              parameter_errors=param_errors)
    record.grid_points = grid_points
    record.grid_exact = exact
    record.grid_mean = means
    record.grid_std = np.sqrt(variances)
    finite = [record.metrics.mae, record.metrics.max_ae]
    finite.extend(est for est, _ in (record.lambdas or []))
    if not np.all(np.isfinite(finite)):
        record.status = "failed"
        record.error = "non-finite metric or parameter estimate"
    return record


def _sweep_overrides(config: ExperimentConfig, value: float) -> Dict[str, object]:
    if config.sweep_axis == "neurons":
        return {"n_neurons": int(value)}
    if config.sweep_axis == "boundary":
        return {"n_boundary": int(value)}
    return {"noise_sigma": float(value)}


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    records: List[RunRecord]
    summary: Dict
    output_dir: Path

    @property
    def n_failed(self) -> int:
        return sum(r.status != "ok" for r in self.records)


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    """Execute all runs of a configuration and write the output files.

    Writes ``results.csv`` (one row per sweep value x seed x method, in that
    loop order), one ``grid_*.csv`` per run, and ``summary.json`` with
    per-method medians over successful runs.
    """
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    spec = build_problem(config.problem)
    grid_points = evaluation_grid(spec)
    sweep_values = config.sweep_values if config.sweep_axis else (None,)
    records: List[RunRecord] = []
    with open(out_dir / "results.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESULTS_HEADER)
        for value in sweep_values:
            overrides = _sweep_overrides(config, value) if value is not None else {}
            for seed in config.seeds:
                for method in config.methods:
                    record = run_single(
                        spec, method,
                        n_neurons=overrides.get("n_neurons", config.n_neurons),
                        n_collocation=config.n_collocation,
                        n_boundary=overrides.get("n_boundary", config.n_boundary),
                        n_data=config.n_data,
                        noise_sigma=overrides.get("noise_sigma", config.noise_sigma),
                        weight_range=config.weight_range,
                        evidence=config.evidence,
                        seed=seed,
                        pinv_cutoff=config.pinv_cutoff,
                        grid_points=grid_points)
                    record.sweep_axis = config.sweep_axis
                    record.sweep_value = value
                    writer.writerow(_result_row(record))
                    if record.status == "ok":
                        _write_grid(record, out_dir)
                        record.grid_points = record.grid_exact = None
                        record.grid_mean = record.grid_std = None
                    records.append(record)
    summary = _summarize(config, records)
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return ExperimentResult(config=config, records=records, summary=summary,
                            output_dir=out_dir)


def _fmt(value) -> str:
    """Full round-trip formatting; empty string for missing values."""
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def _result_row(record: RunRecord) -> List[str]:
    lambdas: List[Optional[float]] = [None] * 6
    for i, (est, std) in enumerate(record.lambdas or []):
        if i < 3:
            lambdas[2 * i] = est
            lambdas[2 * i + 1] = std
    m = record.metrics
    return [
        _fmt(record.seed), record.method, record.problem,
        record.sweep_axis or "", _fmt(record.sweep_value),
        _fmt(record.n_neurons), _fmt(record.n_collocation),
        _fmt(record.n_boundary), _fmt(record.n_data),
        _fmt(record.noise_sigma), _fmt(record.weight_range),
        _fmt(m.mae if m else None), _fmt(m.max_ae if m else None),
        _fmt(m.two_sigma_coverage if m else None),
        *[_fmt(v) for v in lambdas],
        _fmt(m.wall_time_seconds if m else None),
        record.status, record.error,
    ]


def grid_filename(record: RunRecord) -> str:
    parts = ["grid", record.method]
    if record.sweep_axis is not None:
        parts.append(f"{record.sweep_axis}{record.sweep_value:g}")
    parts.append(f"seed{record.seed}")
    return "_".join(parts) + ".csv"


def _write_grid(record: RunRecord, out_dir: Path) -> None:
    with open(out_dir / grid_filename(record), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "exact", "mean", "std", "abs_error"])
        abs_err = np.abs(record.grid_mean - record.grid_exact)
        for point, exact, mean, std, err in zip(
                record.grid_points, record.grid_exact, record.grid_mean,
                record.grid_std, abs_err):
            writer.writerow([_fmt(point[0]), _fmt(point[1]), _fmt(exact),
                             _fmt(mean), _fmt(std), _fmt(err)])


def _median(values: List[float]) -> Optional[float]:
    return float(np.median(values)) if values else None


def _summarize(config: ExperimentConfig, records: List[RunRecord]) -> Dict:
    entries = []
    sweep_values = config.sweep_values if config.sweep_axis else (None,)
    for value in sweep_values:
        for method in config.methods:
            group = [r for r in records
                     if r.method == method and r.sweep_value == value
                     and r.status == "ok"]
            entry = {
                "method": method,
                "sweep_value": value,
                "n_runs": len(group),
                "mae": _median([r.metrics.mae for r in group]),
                "max_ae": _median([r.metrics.max_ae for r in group]),
                "coverage": _median([r.metrics.two_sigma_coverage for r in group]),
                "wall_time_seconds": _median(
                    [r.metrics.wall_time_seconds for r in group]),
            }
            if group and group[0].lambdas:
                n_params = len(group[0].lambdas)
                entry["lambdas"] = [
                    _median([r.lambdas[i][0] for r in group])
                    for i in range(n_params)]
            entries.append(entry)
    return {
        "problem": config.problem,
        "sweep_axis": config.sweep_axis,
        "n_seeds": len(config.seeds),
        "medians": entries,
    }
