import numpy as np
import pytest
from scipy.integrate import quad

from pt_spectrum import (
    AnalyticShift,
    ConsistencyError,
    ConstantDrive,
    DivergenceError,
    PolynomialDrive,
    SampledDrive,
    phase_integral,
    solve_shift_analytic,
    solve_shift_numeric,
)
from pt_spectrum.shift_solver import check_shift, residual_tolerance, shift_residual

T = np.linspace(-3, 3, 61)


@pytest.mark.parametrize(
    "drive, g, alpha",
    [
        (ConstantDrive(1.7), lambda t: 1.7 + 0 * t, lambda t: 0 * t),
        (PolynomialDrive((0, 1)), lambda t: t, lambda t: 0.5 + 0 * t),
        (PolynomialDrive((0, 0, 1)), lambda t: t**2 - 0.5, lambda t: t),
        (PolynomialDrive((0,)), lambda t: 0 * t, lambda t: 0 * t),
    ],
    ids=["const", "t", "t2", "zero"],
)
def test_analytic_matches_worked_cases(drive, g, alpha):
    s = solve_shift_analytic(drive)
    assert np.array_equal(s.g(T), g(T))
    assert np.array_equal(s.alpha(T), alpha(T))
    assert shift_residual(drive, s) == 0.0


def test_analytic_higher_degree():
    # f = t^4: g = t^4 - 3 t^2 + 3/2 solves g'' + 4g = 4 t^4
    s = solve_shift_analytic(PolynomialDrive((0, 0, 0, 0, 1)))
    assert s.g_coeffs == pytest.approx((1.5, 0, -3, 0, 1))
    assert np.allclose(s.alpha(T), 0.5 * (4 * T**3 - 6 * T))


def test_analytic_rejects_sampled():
    d = SampledDrive(tuple(np.linspace(0, 1, 5)), (0.0,) * 5)
    with pytest.raises(TypeError):
        solve_shift_analytic(d)


def test_alpha_is_half_gdot():
    s = solve_shift_analytic(PolynomialDrive((0.3, -1, 2, 0.5)))
    assert np.array_equal(s.alpha(T), 0.5 * s.gdot(T))


class TestNumeric:
    def test_quadratic_drive_matches_particular_solution(self):
        d = PolynomialDrive((0, 0, 1))
        s = solve_shift_numeric(d, (0.0, 1.0), g0=-0.5, gdot0=0.0, dt=1e-3)
        assert abs(s.g(1.0) - 0.5) <= 1e-9
        assert abs(s.alpha(1.0) - 1.0) <= 1e-9

    def test_zero_drive_stays_zero(self):
        s = solve_shift_numeric(PolynomialDrive((0,)), (0.0, 5.0), 0.0, 0.0)
        assert np.all(s.g_values == 0) and np.all(s.gdot_values == 0)

    def test_constant_drive_stays_constant(self):
        s = solve_shift_numeric(ConstantDrive(1.0), (0.0, 5.0), 1.0, 0.0)
        assert np.max(np.abs(s.g_values - 1.0)) <= 1e-12
        assert np.max(np.abs(s.gdot_values)) <= 1e-12

    def test_homogeneous_component(self):
        # f = f0, g(0) = f0 + A, gdot(0) = 2B  =>  g = f0 + A cos 2t + B sin 2t
        f0, a, b = 0.7, 0.3, -0.2
        s = solve_shift_numeric(ConstantDrive(f0), (0.0, 10.0), f0 + a, 2 * b)
        t = np.linspace(0, 10, 97)
        exact = f0 + a * np.cos(2 * t) + b * np.sin(2 * t)
        assert np.max(np.abs(s.g(t) - exact)) <= 1e-9
        assert np.max(np.abs(s.gdot(t) - 2 * (b * np.cos(2 * t) - a * np.sin(2 * t)))) <= 1e-9

    def test_dense_output_between_nodes(self):
        d = PolynomialDrive((0, 1, 1))
        exact = solve_shift_analytic(d)
        s = solve_shift_numeric(d, (-2.0, 3.0), exact.g(-2.0), exact.gdot(-2.0), dt=1e-3)
        t = np.linspace(-2, 3, 1237)
        assert np.max(np.abs(s.g(t) - exact.g(t))) <= 1e-9
        assert np.max(np.abs(s.alpha(t) - exact.alpha(t))) <= 1e-8

    @pytest.mark.parametrize(
        "drive", [ConstantDrive(2.0), PolynomialDrive((0, 1)), PolynomialDrive((1, -2, 0.5, 0.1))]
    )
    def test_residual_bound(self, drive):
        s = solve_shift_numeric(drive, (-5.0, 5.0), 0.3, -0.1, dt=1e-3)
        assert shift_residual(drive, s) <= residual_tolerance(drive, s)

    def test_residual_detects_wrong_drive(self):
        s = solve_shift_numeric(PolynomialDrive((0, 1)), (0.0, 2.0), 0.0, 1.0)
        with pytest.raises(ConsistencyError):
            check_shift(PolynomialDrive((0, 0, 1)), s)

    def test_sampled_drive(self):
        t = np.linspace(-3, 3, 601)
        d = SampledDrive(tuple(t), tuple(np.cos(t)))
        # particular solution of g'' + 4g = 4 cos t is (4/3) cos t
        s = solve_shift_numeric(d, d.span, 4 / 3 * np.cos(-3.0), 4 / 3 * np.sin(3.0))
        tt = np.linspace(-3, 3, 71)
        assert np.max(np.abs(s.g(tt) - 4 / 3 * np.cos(tt))) <= 1e-6
        phase_integral(d, s)

    @pytest.mark.filterwarnings("ignore::RuntimeWarning")
    def test_divergence(self):
        with pytest.raises(DivergenceError):
            solve_shift_numeric(PolynomialDrive((0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1e300)),
                                (0.0, 100.0), 0.0, 0.0, dt=1.0)

    @pytest.mark.parametrize("span, dt", [((1.0, 0.0), 1e-3), ((0.0, 1.0), 0.0)])
    def test_bad_arguments(self, span, dt):
        with pytest.raises(ValueError):
            solve_shift_numeric(ConstantDrive(0.0), span, 0.0, 0.0, dt)


class TestPhaseIntegral:
    @pytest.mark.parametrize(
        "drive, theta",
        [
            (PolynomialDrive((0, 1)), lambda t: t**3 / 3 + t / 4),
            (PolynomialDrive((0, 0, 1)), lambda t: t**5 / 5 + t**3 / 3 - t / 4),
            (ConstantDrive(1.5), lambda t: 2.25 * t),
        ],
        ids=["t", "t2", "const"],
    )
    def test_worked_exponents(self, drive, theta):
        ph = phase_integral(drive, solve_shift_analytic(drive))
        assert ph(0.0) == 0.0
        assert np.allclose(ph(T), theta(T), rtol=1e-14, atol=1e-14)

    @pytest.mark.parametrize(
        "coeffs", [(0, 1), (0, 0, 1), (0.5, -1, 0.25, 0.3)]
    )
    def test_analytic_against_adaptive_quadrature(self, coeffs):
        d = PolynomialDrive(coeffs)
        s = solve_shift_analytic(d)
        ph = phase_integral(d, s)

        def integrand(t):
            g, gd = s.g(t), s.gdot(t)
            return (2 * d(t) - g) * g + gd**2 / 4

        for t in (0.4, 1.0, 2.7):
            assert ph(t) == pytest.approx(quad(integrand, 0, t, epsabs=1e-13)[0], abs=1e-11)

    @pytest.mark.parametrize("coeffs", [(0, 1), (0, 0, 1), (1.0,), (0.5, -1, 0.25, 0.3)])
    def test_analytic_vs_cumulative_simpson(self, coeffs):
        d = PolynomialDrive(coeffs)
        exact = solve_shift_analytic(d)
        s = solve_shift_numeric(d, (0.0, 3.0), exact.g(0.0), exact.gdot(0.0))
        t = np.linspace(0, 3, 301)
        assert np.max(np.abs(phase_integral(d, s)(t) - phase_integral(d, exact)(t))) <= 1e-8

    def test_mismatched_pair(self):
        with pytest.raises(ConsistencyError):
            phase_integral(PolynomialDrive((0, 0, 1)), AnalyticShift((0.0, 1.0)))

    def test_span_must_contain_origin(self):
        d = ConstantDrive(1.0)
        s = solve_shift_numeric(d, (1.0, 2.0), 1.0, 0.0)
        with pytest.raises(ConsistencyError):
            phase_integral(d, s)
