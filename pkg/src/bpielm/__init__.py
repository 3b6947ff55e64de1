"""Bayesian physics-informed extreme learning machines for linear PDEs.

Forward and inverse linear PDE problems with noisy sensor data are encoded
as dense linear systems over a frozen random tanh feature layer.  The
Bayesian solver places a Gaussian prior on the output weights, tunes its
hyperparameters by the evidence procedure, and returns predictive means with
calibrated variances; the pseudoinverse baseline solves the same system by
minimum-norm least squares.
"""

from .assembly import (
    CollocationSystem,
    SensorSet,
    assemble_forward,
    assemble_inverse,
    dump_system_csv,
)
from .basis import (
    RandomBasis,
    activation_derivative,
    feature_matrix,
    init_basis,
    network_output,
)
from .bayes import (
    EvidenceConfig,
    Posterior,
    evidence_step,
    extract_parameters,
    fit_evidence,
    posterior,
    predict,
)
from .errors import (
    DegenerateFitError,
    EmptySystemError,
    IllPosedEvidenceError,
    NumericalError,
    UnsupportedOrderError,
)
from .experiment import (
    ConfigError,
    ExperimentConfig,
    RunRecord,
    load_config,
    run_experiment,
    run_single,
)
from .metrics import MetricsReport, evaluate
from .operators import (
    BoundaryCondition,
    DifferentialTerm,
    LinearOperator,
    SeparableSource,
    boundary_row,
    operator_row,
    operator_rows,
)
from .pinv import PointSolution, predict_mean, solve_pinv
from .problems import (
    ButterflyDomain,
    IntervalDomain,
    ProblemSpec,
    RectangleDomain,
    advection1d,
    boundary_condition_pairs,
    build_problem,
    diffusion1d,
    evaluation_grid,
    inverse_helmholtz1d,
    inverse_poisson1d,
    place_sensors,
    poisson2d_butterfly,
    sample_collocation,
)

__version__ = "0.1.0"
