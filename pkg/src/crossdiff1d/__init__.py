"""1D laboratory for a singular cross-diffusion system with segregated data.

Three legs that cross-validate each other: a regularized Eulerian P1 scheme
with semi-implicit stepping (scheme), a Lagrangian front tracker built on the
modified Darcy law (fronttrack), and closed-form self-similar references
(oracle). Configuration, presets, CSV output, and the CLI live in config,
presets, snapshot_io, and cli.
"""
from .diagnostics import (
    Snapshot,
    contact_point,
    gradient_jump,
    make_snapshot,
    mass,
    segregation_defect,
)
from .errors import (
    ConfigError,
    ConfigParseError,
    ConfigValidationError,
    DegenerateDensityError,
    DegenerateJacobianError,
    MeshMismatchError,
    NanDetectedError,
    NoConvergenceError,
    NumericalError,
    SingularPivotBlockError,
    StencilError,
    TangledMeshError,
)
from .fronttrack import (
    FrontState,
    PressureSolution,
    barenblatt_split_front,
    current_density,
    front_step,
    interface_velocity,
    node_velocities,
    resample_front,
    run_front,
    side_mass,
    solve_pressure,
)
from .linsolve import BlockTridiagonal, solve_block_thomas
from .mesh_fem import (
    FeField,
    Mesh1D,
    SymTridiagonal,
    assemble_weighted_stiffness,
    build_uniform_mesh,
    element_gradient,
    lumped_inner_product,
)
from .model import (
    LotkaVolterra,
    ModelParams,
    cutoff,
    gaussian_bump_initial,
    lv_reaction,
    regularized_flux_coefficients,
)
from .oracle import (
    BARENBLATT_MASS,
    BarenblattProfile,
    InterfaceTrajectory,
    barenblatt,
    barenblatt_dx,
    eta_closed_form,
    explicit_segregated,
    explicit_segregated_fields,
    integrate_interface_ode,
    mollified_heaviside,
    support_radius,
)
from .scheme import (
    State,
    TimeStepping,
    assemble_step_system,
    inner_fixed_point,
    run,
    step_states,
)
from .config import (
    BarenblattPme,
    BarenblattSplit,
    FromFile,
    GaussianBumps,
    SimulationConfig,
    SpeciesConfig,
    parse_config,
    parse_config_file,
    render_config,
    validate_config,
)
from .presets import (
    RunResult,
    barenblatt_validation_config,
    barenblatt_validation_error,
    exp1,
    exp2,
    run_config,
    sweep_delta,
)
from .snapshot_io import read_meta, read_snapshot_csv, write_snapshot_csv

__version__ = "0.1.0"
