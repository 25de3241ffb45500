"""Auxiliary driven oscillator gddot + 4 g = 4 f(t) and its phase integral.

Eliminating alpha = gdot/2 from the pair of shift conditions leaves a single
second-order linear ODE for g.  Polynomial drives have a unique polynomial
particular solution; other drives are integrated numerically.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_simpson

from .errors import ConsistencyError, DivergenceError
from .model import (
    AnalyticPhase,
    AnalyticShift,
    Drive,
    NumericPhase,
    NumericShift,
    PhaseIntegral,
    ShiftSolution,
)

DEFAULT_DT = 1e-3
RESIDUAL_RTOL = 1e-9


def solve_shift_analytic(d: Drive) -> AnalyticShift:
    """Polynomial particular solution of gddot + 4g = 4f.

    Iterates g <- f - gddot/4 starting from g = f. Each pass lowers the degree
    of the correction by two, so the loop ends after deg(f)/2 + 1 passes.
    No cos(2t)/sin(2t) component is included.
    """
    f = d.as_polynomial()
    if f is None:
        raise TypeError(f"analytic shift needs a constant or polynomial drive, got {d!r}")
    f = f.trim()
    g = f
    for _ in range(f.degree() // 2 + 1):
        g = f - g.deriv(2) / 4.0
    return AnalyticShift(tuple(g.trim().coef))


def solve_shift_numeric(
    d: Drive,
    t_span: Sequence[float],
    g0: float,
    gdot0: float,
    dt: float = DEFAULT_DT,
) -> NumericShift:
    """Classic RK4 on the first-order system (g, gdot), fixed step.

    The step is adjusted down so that an integer number of steps covers
    ``t_span`` exactly.
    """
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    if not t0 < t1:
        raise ValueError(f"need t0 < t1, got {t0}, {t1}")
    n_steps = int(np.ceil((t1 - t0) / dt - 1e-9))
    times = np.linspace(t0, t1, n_steps + 1)
    h = (t1 - t0) / n_steps

    def rhs(t, y):
        return np.array([y[1], 4.0 * (float(d(t)) - y[0])])

    ys = np.empty((n_steps + 1, 2))
    ys[0] = (g0, gdot0)
    y = ys[0].copy()
    for k in range(n_steps):
        t = times[k]
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(y)):
            raise DivergenceError(f"shift ODE diverged at t={times[k + 1]}")
        ys[k + 1] = y

    g, gdot = ys[:, 0].copy(), ys[:, 1].copy()
    gddot = 4.0 * (np.asarray(d(times), dtype=float) - g)
    return NumericShift(times, g, gdot, gddot)


def shift_residual(d: Drive, s: ShiftSolution, times=None) -> float:
    """max |gddot + 4g - 4f| over the solution's own time nodes.

    Analytic shifts are checked through their exact polynomial coefficients.
    For numeric trajectories gddot is recovered independently of the ODE
    right-hand side, by a fourth-order central difference of the stored gdot.
    """
    if isinstance(s, AnalyticShift):
        f = d.as_polynomial()
        if f is not None and times is None:
            res = s.poly.deriv(2) + 4.0 * s.poly - 4.0 * f
            return float(np.max(np.abs(res.coef)))
        if times is None:
            lo, hi = d.span
            times = np.linspace(lo, hi, 1001)
        times = np.asarray(times, dtype=float)
        return float(np.max(np.abs(s.gddot(times) + 4 * s.g(times) - 4 * d(times))))

    if not isinstance(s, NumericShift):
        raise TypeError(f"unsupported shift solution {type(s).__name__}")
    h = s.times[1] - s.times[0]
    v = s.gdot_values
    if v.size < 5:
        raise ValueError("numeric shift too short for a residual check")
    gddot = (-v[4:] + 8 * v[3:-1] - 8 * v[1:-3] + v[:-4]) / (12 * h)
    inner = s.times[2:-2]
    res = gddot + 4 * s.g_values[2:-2] - 4 * np.asarray(d(inner), dtype=float)
    return float(np.max(np.abs(res)))


def residual_tolerance(d: Drive, s: ShiftSolution) -> float:
    """RESIDUAL_RTOL * (1 + max|f|) over the region the shift covers."""
    if isinstance(s, NumericShift):
        fmax = float(np.max(np.abs(d(s.times))))
    else:
        span = d.span or (-1.0, 1.0)
        fmax = float(np.max(np.abs(d(np.linspace(span[0], span[1], 201)))))
    return RESIDUAL_RTOL * (1.0 + fmax)


def check_shift(d: Drive, s: ShiftSolution) -> float:
    res = shift_residual(d, s)
    tol = residual_tolerance(d, s)
    if not res <= tol:
        raise ConsistencyError(
            f"shift solution does not solve gddot + 4g = 4f: residual {res:.3e} > {tol:.3e}"
        )
    return res


def phase_integral(d: Drive, s: ShiftSolution) -> PhaseIntegral:
    """theta(t) = int_0^t [(2f - g) g + gdot^2/4] dt'.

    Exact antiderivative for polynomial pairs; otherwise cumulative Simpson on
    the shift's own time mesh.
    """
    check_shift(d, s)
    f = d.as_polynomial()
    if isinstance(s, AnalyticShift) and f is not None:
        g = s.poly
        integrand = (2 * f - g) * g + g.deriv() ** 2 / 4.0
        return AnalyticPhase(tuple(float(c) for c in integrand.integ(lbnd=0.0).coef))

    if isinstance(s, AnalyticShift):
        lo, hi = d.span
        n = int(np.ceil((hi - lo) / DEFAULT_DT))
        times = np.linspace(lo, hi, n + 1)
        g, gdot = s.g(times), s.gdot(times)
    else:
        times, g, gdot = s.times, s.g_values, s.gdot_values
    if not times[0] <= 0.0 <= times[-1]:
        raise ConsistencyError(
            f"phase integral starts at t=0, outside the solution span "
            f"[{times[0]}, {times[-1]}]"
        )
    fv = np.asarray(d(times), dtype=float)
    integrand = (2 * fv - g) * g + gdot**2 / 4.0
    cum = cumulative_simpson(integrand, x=times, initial=0.0)
    return NumericPhase(times, cum, integrand)


def analytic_pair(d: Drive) -> tuple[AnalyticShift, PhaseIntegral]:
    s = solve_shift_analytic(d)
    return s, phase_integral(d, s)
