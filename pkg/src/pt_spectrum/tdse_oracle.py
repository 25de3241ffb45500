"""Crank-Nicolson propagation of i Psi_t = -Psi_xx + V(x, t) Psi.

This is an independent numerical check on the closed-form solution.  With a
complex potential the scheme is deliberately not unitary: the norm grows or
decays at the rate 2<U_I>.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from numba import njit

from .closed_form import _check_decay
from .errors import DivergenceError, ReflectionWarning
from .model import Drive, GridState, Potential, SpatialGrid
from .observables import norm_sq

GROWTH_LIMIT = 1e12
BOUNDARY_RTOL = 1e-8


@njit(cache=True)
def thomas_solve(lower, diag, upper, rhs):
    """Solve a tridiagonal system without pivoting.

    ``lower[i]`` multiplies x[i-1] in row i (lower[0] unused), ``upper[i]``
    multiplies x[i+1] (upper[-1] unused).
    """
    n = diag.shape[0]
    c = np.empty(n, dtype=diag.dtype)
    d = np.empty(n, dtype=rhs.dtype)
    c[0] = upper[0] / diag[0]
    d[0] = rhs[0] / diag[0]
    for i in range(1, n):
        denom = diag[i] - lower[i] * c[i - 1]
        c[i] = upper[i] / denom
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom
    x = np.empty(n, dtype=rhs.dtype)
    x[n - 1] = d[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = d[i] - c[i] * x[i + 1]
    return x


def drive_potential(d: Drive) -> Potential:
    """V(x, t) = x^2 + 2i f(t) x."""

    def potential(x, t):
        return x**2 + 2j * float(d(t)) * x

    return potential


@dataclass(frozen=True)
class PropagationConfig:
    grid: SpatialGrid
    dt: float
    t0: float
    t1: float
    potential: Potential

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not self.grid.is_symmetric:
            raise ValueError("propagation grid must be symmetric about x=0")
        steps = abs(self.t1 - self.t0) / self.dt
        if round(steps) < 1 or abs(steps - round(steps)) > 1e-6 * max(1.0, steps):
            raise ValueError(
                f"|t1 - t0| / dt = {steps} is not a positive integer number of steps"
            )

    @property
    def n_steps(self) -> int:
        return int(round(abs(self.t1 - self.t0) / self.dt))

    @property
    def signed_dt(self) -> float:
        return (self.t1 - self.t0) / self.n_steps


def _propagate(initial: GridState, cfg: PropagationConfig) -> Iterator[tuple[float, np.ndarray]]:
    if initial.grid != cfg.grid:
        raise ValueError("initial state lives on a different grid from the config")
    if abs(initial.t - cfg.t0) > 1e-12 * max(1.0, abs(cfg.t0)):
        raise ValueError(f"initial state is at t={initial.t}, config starts at {cfg.t0}")
    _check_decay(initial.amplitudes, "initial state")

    x = cfg.grid.x[1:-1]
    m = x.size
    dt = cfg.signed_dt
    r = 0.5j * dt / cfg.grid.h**2
    off = np.full(m, -r, dtype=complex)

    psi = np.array(initial.amplitudes[1:-1], dtype=complex)
    norm0 = float(np.sum(np.abs(psi) ** 2))
    warned = False
    for k in range(cfg.n_steps):
        t = cfg.t0 + k * dt
        v = np.asarray(cfg.potential(x, t + 0.5 * dt), dtype=complex)
        # A = 1 + i dt/2 H,  B = 1 - i dt/2 H,  H = -D2 + V
        a_diag = 1.0 + 2.0 * r + 0.5j * dt * v
        b_diag = 1.0 - 2.0 * r - 0.5j * dt * v
        rhs = b_diag * psi
        rhs[1:] += r * psi[:-1]
        rhs[:-1] += r * psi[1:]
        psi = thomas_solve(off, a_diag, off, rhs)
        nrm = float(np.sum(np.abs(psi) ** 2))
        if not np.isfinite(nrm) or nrm > GROWTH_LIMIT * norm0:
            raise DivergenceError(f"norm grew beyond {GROWTH_LIMIT:g}x at t={t + dt}")
        edge = max(abs(psi[0]), abs(psi[-1])) ** 2
        if not warned and edge > BOUNDARY_RTOL**2 * float(np.max(np.abs(psi) ** 2)):
            warned = True
            warnings.warn(
                f"amplitude next to the Dirichlet wall reached "
                f"{np.sqrt(edge / np.max(np.abs(psi) ** 2)):.2e} of the peak at "
                f"t={t + dt}; the wall is reflecting",
                ReflectionWarning,
                stacklevel=3,
            )
        yield cfg.t0 + (k + 1) * dt, psi


def _to_state(psi: np.ndarray, t: float, cfg: PropagationConfig, n) -> GridState:
    full = np.zeros(cfg.grid.n_points, dtype=complex)
    full[1:-1] = psi
    return GridState(cfg.grid, t, full, n)


def crank_nicolson_propagate(initial: GridState, cfg: PropagationConfig) -> GridState:
    """Advance ``initial`` from cfg.t0 to cfg.t1 with Dirichlet walls at the grid ends."""
    t, psi = cfg.t0, initial.amplitudes[1:-1]
    for t, psi in _propagate(initial, cfg):
        pass
    return _to_state(psi, cfg.t1, cfg, initial.n)


def norm_trajectory(
    initial: GridState, cfg: PropagationConfig, sample_every: int = 1
) -> list[tuple[float, float]]:
    """(t, norm_sq) at t0 and after every ``sample_every`` steps."""
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    out = [(cfg.t0, norm_sq(initial))]
    for k, (t, psi) in enumerate(_propagate(initial, cfg), start=1):
        if k % sample_every == 0 or k == cfg.n_steps:
            out.append((t, norm_sq(_to_state(psi, t, cfg, initial.n))))
    return out


def state_trajectory(
    initial: GridState, cfg: PropagationConfig, sample_every: int = 1
) -> list[GridState]:
    """Propagated states at t0 and after every ``sample_every`` steps."""
    if sample_every < 1:
        raise ValueError("sample_every must be >= 1")
    out = [initial]
    for k, (t, psi) in enumerate(_propagate(initial, cfg), start=1):
        if k % sample_every == 0 or k == cfg.n_steps:
            out.append(_to_state(psi, t, cfg, initial.n))
    return out


def relative_l2_error(a: GridState, b: GridState) -> float:
    return float(np.linalg.norm(a.amplitudes - b.amplitudes) / np.linalg.norm(b.amplitudes))
