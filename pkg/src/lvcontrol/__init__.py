"""Simulation and analysis toolkit for boundary control of a two-species
competition-diffusion system on an interval."""

from .core import (
    BoundaryControl,
    CoexistencePoint,
    CompetitionParams,
    DirichletConst,
    DirichletPiecewise,
    Grid1D,
    NeumannZero,
    SpeciesState,
    coexistence_equilibrium,
    constant_state,
    make_grid,
    separatrix_value,
)
from .pde import (
    Classification,
    SimConfig,
    SteadyOutcome,
    Trajectory,
    auto_dt,
    residual,
    run_to_steady,
    simulate,
    stability_dt,
    step,
)
from .elliptic import (
    BarrierProfile,
    LogisticProfile,
    SubsolutionRecipe,
    VerificationReport,
    as_barrier_profile,
    barrier_exceeds_coexistence,
    construct_a_small_subsolution,
    construct_bbarrier_subsolution,
    construct_psi_lemma,
    solve_barrier,
    solve_logistic_steady,
    verify_subsolution,
)
from .dynamics import (
    BasinClass,
    EquilibriumInfo,
    OdeState,
    StabilityLabel,
    classify_basin,
    equilibria,
    integrate_ode,
    jacobian,
    phase_portrait,
)
from .waves import FrontEstimate, estimate_front
from .thresholds import (
    LSweepResult,
    ThresholdResult,
    barrier_exists,
    find_a_star,
    find_b_star,
    sweep_L,
)
from .control_opt import (
    ControlProblem,
    OptResult,
    objective,
    optimize_controls,
    structured_guesses,
)
from .checks import (
    CheckReport,
    check_comparison,
    check_neumann_basin,
    check_no_joint_extinction,
    check_sum_supersolution,
)
from .errors import (
    BracketError,
    ConfigError,
    DomainTooSmallError,
    LvControlError,
    NonConvergedError,
    NumericalError,
    ResolutionFailureError,
    SearchFailureError,
    StabilityError,
    UnreliableEstimateError,
)

__version__ = "0.1.0"
