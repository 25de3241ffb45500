"""Energy expectations, <U_I> and norms of sampled states.

All expectations use the ordinary conjugate-linear inner product and are
divided by the grid norm, since the closed-form states are not normalised.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import simpson

from .closed_form import _check_decay
from .errors import CapabilityError
from .model import ComplexEnergy, Drive, GridState, ShiftSolution

SELF_CHECK_TOL = 1e-10


class Method(str, Enum):
    CLOSED = "closed"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class ExpectationReport:
    energy: ComplexEnergy
    u_imag: float
    norm_sq: float
    method: Method

    def __post_init__(self):
        if not self.norm_sq > 0:
            raise ValueError(f"norm_sq must be positive, got {self.norm_sq}")


def energy_closed(n: int, d: Drive, s: ShiftSolution, t: float) -> ComplexEnergy:
    """Closed-form <E> for the ground and first excited states."""
    g = float(s.g(t))
    a = float(s.alpha(t))
    f = float(d(t))
    g2, a2 = g * g, a * a
    if n == 0:
        return ComplexEnergy(1 + g2 + a2, 2 * a * f)
    if n == 1:
        e11 = 3 + 7 * (g2 + a2) + 4 * a2 * g2 + 2 * (a2 * a2 + g2 * g2)
        den = 1 + 2 * g2 + 2 * a2
        return ComplexEnergy(e11 / den, 2 * a * f * (3 + 2 * a2 + 2 * g2) / den)
    raise CapabilityError(f"no closed-form energy for n={n}; use quadrature")


def norm_sq(state: GridState) -> float:
    return float(simpson(np.abs(state.amplitudes) ** 2, dx=state.grid.h))


def second_derivative(psi: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central second difference, zero padding beyond the grid."""
    p = np.pad(psi, 2)
    return (-p[4:] + 16 * p[3:-1] - 30 * p[2:-2] + 16 * p[1:-3] - p[:-4]) / (12 * h * h)


def energy_quadrature(state: GridState, d: Drive) -> ComplexEnergy:
    """<E> = int conj(Psi) H Psi dx / int |Psi|^2 dx on the grid."""
    psi = state.amplitudes
    _check_decay(psi)
    x = state.grid.x
    h = state.grid.h
    f = float(d(state.t))
    h_psi = -second_derivative(psi, h) + (x**2 + 2j * f * x) * psi
    num = simpson(np.conj(psi) * h_psi, dx=h)
    den = simpson(np.abs(psi) ** 2, dx=h)
    return ComplexEnergy.from_complex(complex(num / den))


def position_expectation(state: GridState) -> float:
    psi = state.amplitudes
    _check_decay(psi)
    h = state.grid.h
    num = complex(simpson(np.conj(psi) * state.grid.x * psi, dx=h))
    den = simpson(np.abs(psi) ** 2, dx=h)
    mean = num / den
    if abs(mean.imag) > SELF_CHECK_TOL * max(1.0, abs(mean.real)):
        raise ArithmeticError(f"<x> has imaginary part {mean.imag:.3e}")
    return float(mean.real)


def u_imag_expectation(state: GridState, d: Drive) -> float:
    """<U_I> = 2 f(t) <x>."""
    return 2.0 * float(d(state.t)) * position_expectation(state)


def expectation_report(
    state: GridState,
    d: Drive,
    method: Method = Method.QUADRATURE,
    shift: Optional[ShiftSolution] = None,
) -> ExpectationReport:
    method = Method(method)
    if method is Method.CLOSED:
        if state.n not in (0, 1) or shift is None:
            raise CapabilityError(
                "closed-form report needs n in {0, 1} and the shift solution"
            )
        energy = energy_closed(state.n, d, shift, state.t)
    else:
        energy = energy_quadrature(state, d)
    return ExpectationReport(energy, u_imag_expectation(state, d), norm_sq(state), method)
