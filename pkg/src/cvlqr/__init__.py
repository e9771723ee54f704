"""LQR for discrete-time complex-valued linear systems.

Bimatrix algebra, stabilizability rank tests, three fixed-point Riccati
solvers (bimatrix, conjugate-twisted, normal), controller synthesis, and a
reduction of one-step-delay LQR to the complex-valued setting.
"""

from .bimatrix import (
    Bimatrix,
    HermitianBimatrix,
    bnorm,
    psd_leq,
    quadratic_form,
)
from .delay import (
    DelayInitialCondition,
    DelayLqr,
    DelaySystem,
    DelayTrajectory,
    RealFeedback,
    lift_state,
    normalize_input_weight,
    pad_odd_input,
    realize_gain,
    simulate_delay,
    solve_delay_lqr,
    to_complex_system,
)
from .exceptions import (
    CvlqrError,
    DivergedError,
    InputError,
    InvalidWeightsError,
    NotConvergentError,
    NotPositiveDefiniteError,
    SingularBimatrixError,
    SolverError,
    StructureViolationError,
)
from .lqr import (
    AntilinearCrossCheck,
    AntilinearLqr,
    ComplexLqr,
    cross_validate_antilinear,
    lqr_antilinear_anti,
    lqr_antilinear_normal,
    lqr_complex,
)
from .riccati import (
    NmeBridge,
    NormalData,
    RiccatiSolution,
    SolverOptions,
    anti_riccati_iterates,
    anti_riccati_residual,
    bimatrix_riccati_iterates,
    bimatrix_riccati_residual,
    build_normal_data,
    compare_iteration_counts,
    gramian_bimatrix,
    nme_transform,
    normal_riccati_iterates,
    normal_riccati_residual,
    riccati_step,
    solve_anti_riccati,
    solve_bimatrix_riccati,
    solve_normal_riccati,
)
from .stabilizability import (
    is_stabilizable_antilinear,
    is_stabilizable_complex,
    unstabilizable_modes_antilinear,
    unstabilizable_modes_complex,
)
from .systems import (
    AntilinearSystem,
    ComplexLinearSystem,
    CostWeights,
    FeedbackGain,
    Trajectory,
    closed_loop,
    closed_loop_cost,
    cost_truncated,
    simulate,
    spectral_radius,
)

__version__ = "0.1.0"
