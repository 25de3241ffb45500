"""Exact solution and numerical verification of H = p^2 + x^2 + 2i f(t) x."""

from .closed_form import (
    ClosedFormState,
    closed_form_state,
    parity_condition_check,
    pde_residual,
    psi_eval,
    psi_sample,
    pt_check_hamiltonian,
    pt_check_state,
)
from .errors import (
    CapabilityError,
    ConsistencyError,
    DivergenceError,
    DriveRangeError,
    NotApplicableError,
    ReflectionWarning,
    TruncationError,
    UndecidableError,
)
from .model import (
    AnalyticShift,
    ComplexEnergy,
    ConstantDrive,
    Drive,
    GridState,
    NumericShift,
    PolynomialDrive,
    SampledDrive,
    SpatialGrid,
    drive_eval,
    hermite_eval,
)
from .observables import (
    energy_closed,
    energy_quadrature,
    expectation_report,
    norm_sq,
    u_imag_expectation,
)
from .shift_solver import (
    phase_integral,
    shift_residual,
    solve_shift_analytic,
    solve_shift_numeric,
)
from .tdse_oracle import (
    PropagationConfig,
    crank_nicolson_propagate,
    drive_potential,
    norm_trajectory,
    relative_l2_error,
    state_trajectory,
)

__version__ = "0.1.0"
