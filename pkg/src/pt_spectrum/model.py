"""Shared domain types and Hermite polynomials at complex argument.

Units follow hbar = 2m = 1, so the Hamiltonian is ``p^2 + x^2 + 2i f(t) x``
with kinetic operator ``-d^2/dx^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from .errors import CapabilityError, DriveRangeError

HERMITE_N_MAX = 64


def hermite_eval(n: int, z: complex) -> complex:
    """Physicists' Hermite polynomial H_n(z) by forward recurrence.

    Seeds are H_0 = 1 and H_1 = 2z; each step applies
    H_{k+1} = 2z H_k - 2k H_{k-1}.
    """
    return complex(hermite_array(n, np.asarray(z, dtype=complex)))


def hermite_array(n: int, z: np.ndarray) -> np.ndarray:
    """Vectorised :func:`hermite_eval` over an array of complex arguments."""
    if n < 0:
        raise ValueError(f"Hermite index must be non-negative, got {n}")
    if n > HERMITE_N_MAX:
        raise CapabilityError(
            f"Hermite index {n} exceeds n_max={HERMITE_N_MAX}; "
            "forward recurrence may overflow"
        )
    z = np.asarray(z, dtype=complex)
    h_prev = np.ones_like(z)
    if n == 0:
        return h_prev
    h = 2.0 * z
    for k in range(1, n):
        h_prev, h = h, 2.0 * z * h - 2.0 * k * h_prev
    return h


# ---------------------------------------------------------------------------
# Drives


class Drive:
    """Real-valued coefficient f(t) of the imaginary linear potential."""

    span: Optional[tuple[float, float]] = None

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError

    def is_even_in_time(self) -> Optional[bool]:
        """Exact time parity, or ``None`` if it cannot be decided symbolically."""
        return None

    def as_polynomial(self) -> Optional[Polynomial]:
        return None


@dataclass(frozen=True)
class ConstantDrive(Drive):
    f0: float

    def __post_init__(self):
        if not np.isfinite(self.f0):
            raise ValueError("constant drive must be finite")

    def __call__(self, t):
        return np.full_like(np.asarray(t, dtype=float), float(self.f0))[()]

    def derivative(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))[()]

    def is_even_in_time(self) -> bool:
        return True

    def as_polynomial(self) -> Polynomial:
        return Polynomial([float(self.f0)])


@dataclass(frozen=True)
class PolynomialDrive(Drive):
    """f(t) = sum_k coeffs[k] * t**k."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        if not coeffs:
            raise ValueError("polynomial drive needs at least one coefficient")
        if not all(np.isfinite(coeffs)):
            raise ValueError("polynomial drive coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, t):
        return self.as_polynomial()(np.asarray(t, dtype=float))[()]

    def derivative(self, t):
        return self.as_polynomial().deriv()(np.asarray(t, dtype=float))[()]

    def is_even_in_time(self) -> bool:
        return all(c == 0.0 for c in self.coeffs[1::2])

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.coeffs)


@dataclass(frozen=True)
class SampledDrive(Drive):
    """Drive tabulated at increasing times, interpolated by a cubic spline."""

    times: tuple[float, ...]
    values: tuple[float, ...]
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or times.shape != values.shape:
            raise ValueError("times and values must be 1-D and of equal length")
        if times.size < 4:
            raise ValueError("sampled drive needs at least 4 samples")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(values))):
            raise ValueError("sampled drive must be finite")
        if np.any(np.diff(times) <= 0):
            raise ValueError("sample times must be strictly increasing")
        object.__setattr__(self, "times", tuple(times))
        object.__setattr__(self, "values", tuple(values))
        object.__setattr__(self, "_spline", CubicSpline(times, values))

    @property
    def span(self) -> tuple[float, float]:
        return (self.times[0], self.times[-1])

    def _check(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.span
        tol = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(t < lo - tol) or np.any(t > hi + tol):
            raise DriveRangeError(
                f"t outside sampled span [{lo}, {hi}]: {t.min()}..{t.max()}"
            )
        return np.clip(t, lo, hi)

    def __call__(self, t):
        return self._spline(self._check(t))[()]

    def derivative(self, t):
        return self._spline(self._check(t), 1)[()]


def drive_eval(d: Drive, t: float) -> float:
    return float(d(t))


# ---------------------------------------------------------------------------
# Shift solutions g(t), alpha(t) = gdot(t)/2


class ShiftSolution:
    """Imaginary coordinate shift g(t) and gauge factor alpha(t) = gdot(t)/2."""

    span: Optional[tuple[float, float]] = None

    def g(self, t):
        raise NotImplementedError

    def gdot(self, t):
        raise NotImplementedError

    def alpha(self, t):
        return 0.5 * self.gdot(t)


@dataclass(frozen=True)
class AnalyticShift(ShiftSolution):
    """Polynomial shift, defined for all t."""

    g_coeffs: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "g_coeffs", tuple(float(c) for c in self.g_coeffs))

    @property
    def poly(self) -> Polynomial:
        return Polynomial(self.g_coeffs)

    def g(self, t):
        return self.poly(np.asarray(t, dtype=float))[()]

    def gdot(self, t):
        return self.poly.deriv()(np.asarray(t, dtype=float))[()]

    def gddot(self, t):
        return self.poly.deriv(2)(np.asarray(t, dtype=float))[()]


@dataclass(frozen=True, eq=False)
class NumericShift(ShiftSolution):
    """Shift trajectory on a uniform time mesh with cubic Hermite dense output.

    ``gddot_values`` are the ODE right-hand side at the nodes and serve as the
    slopes for the interpolant of gdot.
    """

    times: np.ndarray
    g_values: np.ndarray
    gdot_values: np.ndarray
    gddot_values: np.ndarray
    _g: CubicHermiteSpline = field(init=False, repr=False, compare=False)
    _gdot: CubicHermiteSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_g", CubicHermiteSpline(self.times, self.g_values, self.gdot_values)
        )
        object.__setattr__(
            self,
            "_gdot",
            CubicHermiteSpline(self.times, self.gdot_values, self.gddot_values),
        )

    @property
    def span(self) -> tuple[float, float]:
        return (float(self.times[0]), float(self.times[-1]))

    def _check(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.span
        tol = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(t < lo - tol) or np.any(t > hi + tol):
            raise DriveRangeError(f"t outside shift-solution span [{lo}, {hi}]")
        return np.clip(t, lo, hi)

    def g(self, t):
        return self._g(self._check(t))[()]

    def gdot(self, t):
        return self._gdot(self._check(t))[()]


# ---------------------------------------------------------------------------
# Phase integral theta(t) = int_0^t [(2f - g) g + gdot^2 / 4] dt'


class PhaseIntegral:
    def theta(self, t):
        raise NotImplementedError

    def __call__(self, t):
        return self.theta(t)


@dataclass(frozen=True)
class AnalyticPhase(PhaseIntegral):
    coeffs: tuple[float, ...]

    def theta(self, t):
        return Polynomial(self.coeffs)(np.asarray(t, dtype=float))[()]


@dataclass(frozen=True, eq=False)
class NumericPhase(PhaseIntegral):
    """Cumulative quadrature of the integrand, shifted so that theta(0) = 0."""

    times: np.ndarray
    cumulative: np.ndarray
    integrand: np.ndarray
    _spline: CubicHermiteSpline = field(init=False, repr=False, compare=False)
    _offset: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        spline = CubicHermiteSpline(self.times, self.cumulative, self.integrand)
        object.__setattr__(self, "_spline", spline)
        object.__setattr__(self, "_offset", float(spline(0.0)))

    def theta(self, t):
        t = np.asarray(t, dtype=float)
        lo, hi = self.times[0], self.times[-1]
        tol = 1e-12 * max(1.0, abs(lo), abs(hi))
        if np.any(t < lo - tol) or np.any(t > hi + tol):
            raise DriveRangeError(f"t outside phase-integral span [{lo}, {hi}]")
        return (self._spline(np.clip(t, lo, hi)) - self._offset)[()]


# ---------------------------------------------------------------------------
# Grids and sampled states


@dataclass(frozen=True)
class SpatialGrid:
    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"need x_min < x_max, got {self.x_min}, {self.x_max}")
        if int(self.n_points) != self.n_points or self.n_points < 3:
            raise ValueError(f"need integer n_points >= 3, got {self.n_points}")
        object.__setattr__(self, "n_points", int(self.n_points))

    @classmethod
    def symmetric(cls, half_width: float, n_points: int) -> "SpatialGrid":
        return cls(-half_width, half_width, n_points)

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def is_symmetric(self) -> bool:
        return abs(self.x_min + self.x_max) <= 1e-12 * max(abs(self.x_min), 1.0)


@dataclass(frozen=True, eq=False)
class GridState:
    """Raw (unnormalised) amplitudes on a grid at one time."""

    grid: SpatialGrid
    t: float
    amplitudes: np.ndarray
    n: Optional[int] = None

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n_points,):
            raise ValueError(
                f"expected {self.grid.n_points} amplitudes, got shape {amps.shape}"
            )
        norm = float(np.sum(np.abs(amps) ** 2))
        if not np.isfinite(norm) or norm == 0.0:
            raise ValueError("grid state norm must be finite and nonzero")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def scaled(self, c: complex) -> "GridState":
        return GridState(self.grid, self.t, c * self.amplitudes, self.n)


@dataclass(frozen=True)
class ComplexEnergy:
    re: float
    im: float

    def __post_init__(self):
        if not (np.isfinite(self.re) and np.isfinite(self.im)):
            raise ValueError(f"energy components must be finite: {self.re}, {self.im}")
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexEnergy":
        return cls(z.real, z.imag)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


Potential = Callable[[np.ndarray, float], np.ndarray]
