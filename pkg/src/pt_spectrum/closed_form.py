"""Exact eigenfunctions of p^2 + x^2 + 2i f(t) x and symmetry checks on them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotApplicableError, TruncationError, UndecidableError
from .model import (
    Drive,
    GridState,
    HERMITE_N_MAX,
    PhaseIntegral,
    SampledDrive,
    ShiftSolution,
    SpatialGrid,
    hermite_array,
)
from .shift_solver import check_shift, phase_integral, solve_shift_analytic

DECAY_RTOL = 1e-12
PT_TOL = 1e-8
PARITY_TOL = 1e-10
SAMPLED_EVEN_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class ClosedFormState:
    n: int
    drive: Drive
    shift: ShiftSolution
    phase: PhaseIntegral

    def __post_init__(self):
        if int(self.n) != self.n or not 0 <= self.n <= HERMITE_N_MAX:
            raise ValueError(f"quantum number must be in [0, {HERMITE_N_MAX}], got {self.n}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def energy_level(self) -> float:
        """Oscillator constant E_n = 2n + 1."""
        return 2.0 * self.n + 1.0


def closed_form_state(
    n: int, drive: Drive, shift: Optional[ShiftSolution] = None
) -> ClosedFormState:
    """Bundle a quantum number with a drive, its shift and phase integral.

    Without an explicit ``shift`` the polynomial particular solution is used,
    which only exists for constant and polynomial drives.
    """
    if shift is None:
        shift = solve_shift_analytic(drive)
    else:
        check_shift(drive, shift)
    return ClosedFormState(n, drive, shift, phase_integral(drive, shift))


def psi_eval(s: ClosedFormState, x, t: float):
    r"""Psi_n(x, t) = exp(-i E_n t - i theta) exp(alpha z - z^2/2) H_n(z), z = x + i g."""
    x = np.asarray(x, dtype=float)
    g = float(s.shift.g(t))
    alpha = float(s.shift.alpha(t))
    theta = float(s.phase.theta(t))
    z = x + 1j * g
    out = np.exp(-1j * (s.energy_level * t + theta) + alpha * z - 0.5 * z * z)
    out = out * hermite_array(s.n, z)
    return out[()] if out.ndim == 0 else out


def _check_decay(amps: np.ndarray, what: str = "state") -> None:
    mag = np.abs(amps)
    peak = mag.max()
    edge = max(mag[0], mag[-1])
    if not edge < DECAY_RTOL * peak:
        raise TruncationError(
            f"{what} has not decayed at the grid edge: |psi_edge|/max|psi| = "
            f"{edge / peak:.3e} (need < {DECAY_RTOL:g})"
        )


def psi_sample(s: ClosedFormState, grid: SpatialGrid, t: float) -> GridState:
    amps = psi_eval(s, grid.x, t)
    _check_decay(amps)
    return GridState(grid, float(t), amps, s.n)


def pde_residual(s: ClosedFormState, grid: SpatialGrid, t: float, dt_fd: float) -> float:
    """Relative discrete L2 norm of i Psi_t + Psi_xx - (x^2 + 2i f x) Psi.

    Second-order central differences in x and t; two nodes at each edge are
    excluded.
    """
    if not dt_fd > 0:
        raise ValueError(f"dt_fd must be positive, got {dt_fd}")
    x = grid.x
    h = grid.h
    psi = psi_eval(s, x, t)
    psi_t = (psi_eval(s, x, t + dt_fd) - psi_eval(s, x, t - dt_fd)) / (2 * dt_fd)
    psi_xx = (psi[2:] - 2 * psi[1:-1] + psi[:-2]) / h**2
    f = float(s.drive(t))
    inner = slice(2, -2)
    pot = x**2 + 2j * f * x
    res = 1j * psi_t[inner] + psi_xx[1:-1] - pot[inner] * psi[inner]
    return float(np.sqrt(np.sum(np.abs(res) ** 2) / np.sum(np.abs(psi[inner]) ** 2)))


def pt_check_hamiltonian(d: Drive) -> bool:
    """Whether the drive is even in time, i.e. H is invariant under PT."""
    exact = d.is_even_in_time()
    if exact is not None:
        return exact
    if isinstance(d, SampledDrive):
        lo, hi = d.span
        if abs(lo + hi) > 1e-12 * max(abs(lo), abs(hi), 1.0):
            raise UndecidableError(
                f"time parity needs a span symmetric about t=0, got [{lo}, {hi}]"
            )
        t = np.asarray(d.times)
        return bool(np.max(np.abs(d(-t) - d(t))) <= SAMPLED_EVEN_TOL)
    raise UndecidableError(f"cannot decide time parity of {type(d).__name__}")


@dataclass(frozen=True)
class PTCheck:
    deviation: float
    phase: complex


def _require_symmetric(grid: SpatialGrid) -> None:
    if not grid.is_symmetric:
        raise ValueError(
            f"parity checks need a grid symmetric about x=0, got "
            f"[{grid.x_min}, {grid.x_max}]"
        )


def pt_check_state(s: ClosedFormState, grid: SpatialGrid, t: float) -> PTCheck:
    """Distance of PT Psi(x, t) = conj(Psi(-x, -t)) from the best multiple lambda Psi.

    lambda is the unit-modulus phase of <Psi, PT Psi>; the deviation is
    ||PT Psi - lambda Psi|| / ||Psi||.
    """
    _require_symmetric(grid)
    if not pt_check_hamiltonian(s.drive):
        raise NotApplicableError("drive is not even in time; H is not PT symmetric")
    x = grid.x
    psi = psi_eval(s, x, t)
    pt_psi = np.conj(psi_eval(s, -x, -t))
    overlap = np.vdot(psi, pt_psi)
    lam = overlap / abs(overlap) if abs(overlap) > 0 else 1.0 + 0j
    dev = np.linalg.norm(pt_psi - lam * psi) / np.linalg.norm(psi)
    return PTCheck(float(dev), complex(lam))


@dataclass(frozen=True)
class ParityCheck:
    uimag_odd_defect: float
    modulus_even_defect: float
    satisfied: bool


def parity_condition_check(s: ClosedFormState, grid: SpatialGrid, t: float) -> ParityCheck:
    """Test U_I(-x) = -U_I(x) with U_I = 2 f(t) x, and |Psi(-x)|^2 = |Psi(x)|^2."""
    _require_symmetric(grid)
    x = grid.x
    f = float(s.drive(t))
    u = 2 * f * x
    u_ref = np.max(np.abs(u))
    u_defect = 0.0 if u_ref == 0 else float(np.max(np.abs(2 * f * (-x) + u)) / u_ref)

    rho = np.abs(psi_eval(s, x, t)) ** 2
    rho_reflected = np.abs(psi_eval(s, -x, t)) ** 2
    rho_defect = float(np.max(np.abs(rho_reflected - rho)) / np.max(rho))
    ok = u_defect <= PARITY_TOL and rho_defect <= PARITY_TOL
    return ParityCheck(u_defect, rho_defect, ok)
