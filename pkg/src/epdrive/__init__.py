"""Driven two-level non-Hermitian dynamics: exceptional-point encircling with
counterdiabatic control.

Layers: spectrum (eigenstructure) -> paths (schedules, branch tracking) ->
counterdiabatic (drive synthesis) -> propagator (norm-tracked evolution) ->
adiabaticity / metrics (diagnostics) -> experiments / cli (datasets).
"""

from ._kernels import BACKEND
from .adiabaticity import (
    AdiabaticityReport,
    adiabaticity_parameter,
    cosine_sweep_family,
    eigenvalue_arrays,
    sweep_max_a,
)
from .counterdiabatic import (
    CDDrive,
    CDMode,
    berry_connection_integral,
    cd_exact,
    cd_general_form,
    cd_hermitian_approx,
    cd_parallel_transport,
    drive_form_coefficients,
    eigvector_arrays,
    eigvector_derivatives,
    left_dright_matrix,
)
from .errors import (
    AmbiguousBranch,
    AtExceptionalPoint,
    ConfigError,
    DegenerateGap,
    DegenerateRatio,
    EPDriveError,
    HyperbolicSingularity,
    NonFiniteState,
    NotADensityMatrix,
    PathTooCloseToEP,
    SamplingTooCoarse,
    StepTooLarge,
)
from .experiments import (
    Experiment,
    ExperimentConfig,
    config_from_ini,
    config_to_ini,
    default_config,
    load_config,
    run_adiabaticity_sweep,
    run_apollonius_deviation,
    run_encircle,
    run_experiment,
    run_period_sweep,
    run_topology_scan,
)
from .metrics import (
    LoopSummary,
    density_from_bloch,
    pure_density,
    summarize_loop,
    trace_distance,
)
from .paths import (
    ApolloniusCircle,
    ControlSchedule,
    PathPoint,
    ScheduleKind,
    TrackedPath,
    apollonius_from_ratio,
    cosine_loop,
    custom_from_csv,
    enclosed_ep_count,
    j_delta_from_angles,
    sample_cosine_loop,
    torus_schedule,
    tracked_angle,
    winding_numbers,
)
from .propagator import (
    Trajectory,
    effective_hamiltonian_table,
    evolve,
    evolve_with_cd,
    pauli_expectations,
    reference_triples,
)
from .spectrum import (
    BlochVector,
    ChiralReport,
    ComplexAngle,
    Eigensystem,
    SystemParams,
    bloch_coordinates,
    branch_root,
    build_hamiltonian,
    chiral_checks,
    chiral_operator,
    complex_rotation_y,
    eigensystem,
    mixing_angle,
    overlap_angle,
    overlap_probability,
    rotation_z,
)

__version__ = "1.0.0"
