"""Semi-Lagrangian large-time-step solvers for the 1D BGK kinetic equation."""

from .cons_bgk import (
    advance_step_conservative,
    corrector,
    interface_flux,
    predictor,
    split_flux,
    swept_interface_flux,
    transport_term,
)
from .dirk import (
    S1,
    S2,
    S3,
    ButcherTableau,
    implicit_relax,
    ode_relax_solve,
    relax_stage,
    stage_flux,
    tableau,
)
from .harness import RunReport, SolverConfig, entropy, error_table, run
from .phase_grid import (
    ConstantTau,
    MacroFields,
    NonPositiveDensity,
    NonPositiveTemperature,
    PhaseGrid,
    PowerLawTau,
    UnphysicalState,
    fields_from_moments,
    macro_fields,
    maxwellian,
    moments,
    tau_eval,
)
from .riemann import EulerState, exact_riemann_euler, riemann_star
from .sl_bgk import Periodic, PrescribedMoments, advance_step, fill_ghosts, foot_point, interpolate_field
from .weno import (
    WenoConfig,
    conservative_derivative,
    linear_weights,
    smoothness_indicators,
    weno5_interface_values,
    weno_interpolate,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
