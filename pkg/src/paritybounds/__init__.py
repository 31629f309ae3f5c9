"""Minimal constraint strengths for parity-encoded Ising optimization.

Exact small-instance solvers, analytic limits, LP/SDP bounds, extreme-value
models and a reproducible ensemble harness.
"""

from .analytic import antiferro_limit, eigenvalue_covariance, ferro_limit, level_count, mean_split
from .bounds import (
    BoundsReport,
    ConstraintAssignment,
    LpSolution,
    Verdict,
    homogeneous_optimum,
    solve_lp,
    verify_assignment,
)
from .evt import (
    DEFAULT_DELTA,
    EULER_GAMMA,
    EvtCalibration,
    GumbelParams,
    approx_chain,
    calibrate_delta,
    expected_a1_independent,
    expected_l0_independent,
    expected_min_independent,
    f1_scaling,
    gumbel_params,
    probit,
)
from .fitting import FitResult, fit_power_law
from .harness import (
    ConfigError,
    EnsembleConfig,
    EnsembleResult,
    SampleSchedule,
    run_ensemble,
    scaling_sweep,
)
from .instances import (
    AUTO,
    DistributionSpec,
    EdgeListGraph,
    GraphSpec,
    IsingInstance,
    encode_maxcut,
    encode_minbisection,
    load_instance,
    sample_instance,
    save_instance,
)
from .parity import ParityLayout, PhysicalState, layout
from .sdp import SdpResult, c1_sdp_bound, solve_maxcut_sdp, tripartition_a1_upper
from .solver import (
    CapacityError,
    SpectrumSummary,
    all_defect_minima,
    logical_spectrum,
    min_over_defect_count,
    restricted_minimum,
)

__version__ = "0.1.0"
