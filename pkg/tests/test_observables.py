import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import LINEAR, ONE, QUADRATIC, ZERO
from pt_spectrum import (
    CapabilityError,
    ConstantDrive,
    GridState,
    SpatialGrid,
    TruncationError,
    closed_form_state,
    energy_closed,
    energy_quadrature,
    expectation_report,
    norm_sq,
    psi_sample,
    u_imag_expectation,
)
from pt_spectrum.observables import Method, second_derivative

SWEEP_DRIVES = (ZERO, ONE, LINEAR, QUADRATIC)
SWEEP_T = (0.0, 0.5, 1.0, 2.0)


def gaussian_moments(n, g, a):
    """Norm and <x> of the n = 0, 1 states from Gaussian integrals.

    |Psi_0|^2 = exp(2 a x - x^2 + g^2), |Psi_1|^2 = 4 (x^2 + g^2) |Psi_0|^2.
    """
    base = np.sqrt(np.pi) * np.exp(a * a + g * g)
    if n == 0:
        return base, a
    norm = 4 * base * (0.5 + a * a + g * g)
    return norm, a * (3 + 2 * a * a + 2 * g * g) / (1 + 2 * a * a + 2 * g * g)


class TestEnergyClosed:
    @pytest.mark.parametrize(
        "n, drive, t, expected",
        [
            (0, LINEAR, 1.0, 2.25 + 1.0j),
            (1, LINEAR, 1.0, (119 + 44j) / 28),
            (0, QUADRATIC, 1.0, 2.25 + 2.0j),
            (0, ConstantDrive(2.0), 3.3, 5.0),
            (1, ConstantDrive(2.0), -0.4, 7.0),
        ],
    )
    def test_values(self, n, drive, t, expected):
        cf = closed_form_state(n, drive)
        e = energy_closed(n, drive, cf.shift, t)
        assert complex(e) == pytest.approx(expected, abs=1e-12)

    def test_linear_drive_excited_state_formula(self):
        cf = closed_form_state(1, LINEAR)
        for t in np.linspace(-2, 2, 9):
            ref = (39 + 16 * (4 * t**2 + t**4) + 4j * (7 * t + 4 * t**3)) / (4 * (3 + 4 * t**2))
            assert complex(energy_closed(1, LINEAR, cf.shift, t)) == pytest.approx(ref, rel=1e-13)

    def test_higher_n_unsupported(self):
        cf = closed_form_state(2, ZERO)
        with pytest.raises(CapabilityError):
            energy_closed(2, ZERO, cf.shift, 0.0)


class TestNorm:
    def test_gaussian(self, grid):
        st = psi_sample(closed_form_state(0, ZERO), SpatialGrid(-12, 12, 2400), 0.0)
        assert norm_sq(st) == pytest.approx(np.sqrt(np.pi), abs=1e-10)

    def test_homogeneous(self, grid):
        st = psi_sample(closed_form_state(1, QUADRATIC), grid, 0.5)
        assert norm_sq(st.scaled(2.0)) == pytest.approx(4 * norm_sq(st), rel=1e-14)

    @pytest.mark.parametrize("n", [0, 1])
    @pytest.mark.parametrize("drive", [LINEAR, QUADRATIC, ONE], ids=["t", "t2", "const"])
    @pytest.mark.parametrize("t", [0.0, 1.0, 2.0])
    def test_against_gaussian_integrals(self, grid, n, drive, t):
        cf = closed_form_state(n, drive)
        st = psi_sample(cf, grid, t)
        ref_norm, ref_x = gaussian_moments(n, cf.shift.g(t), cf.shift.alpha(t))
        assert norm_sq(st) == pytest.approx(ref_norm, rel=1e-10)
        assert u_imag_expectation(st, drive) == pytest.approx(2 * drive(t) * ref_x, abs=1e-10)


class TestQuadrature:
    def test_second_derivative_is_fourth_order(self):
        errs = []
        for n in (201, 401):
            x = np.linspace(-10, 10, n)
            f = np.exp(-(x**2))
            exact = (4 * x**2 - 2) * f
            errs.append(np.max(np.abs(second_derivative(f, x[1] - x[0]) - exact)))
        assert 14 <= errs[0] / errs[1] <= 18

    @pytest.mark.parametrize("npts", [2400, 2401])
    def test_linear_drive_ground_state(self, npts):
        st = psi_sample(closed_form_state(0, LINEAR), SpatialGrid(-12, 12, npts), 1.0)
        assert complex(energy_quadrature(st, LINEAR)) == pytest.approx(2.25 + 1j, abs=1e-6)

    def test_oscillator_n2(self, grid):
        for t in (0.0, 1.3):
            st = psi_sample(closed_form_state(2, ZERO), grid, t)
            assert complex(energy_quadrature(st, ZERO)) == pytest.approx(5.0, abs=1e-8)

    def test_quadratic_drive_excited_state(self, grid):
        cf = closed_form_state(1, QUADRATIC)
        st = psi_sample(cf, grid, 1.0)
        ref = complex(energy_closed(1, QUADRATIC, cf.shift, 1.0))
        assert complex(energy_quadrature(st, QUADRATIC)) == pytest.approx(ref, abs=1e-6)

    def test_truncated_state(self):
        g = SpatialGrid(-2, 2, 401)
        amps = np.exp(-g.x**2 / 2)
        with pytest.raises(TruncationError):
            energy_quadrature(GridState(g, 0.0, amps), ZERO)
        with pytest.raises(TruncationError):
            u_imag_expectation(GridState(g, 0.0, amps), ZERO)

    @pytest.mark.parametrize("drive", SWEEP_DRIVES, ids=["zero", "const", "t", "t2"])
    def test_closed_and_quadrature_agree(self, grid, drive):
        for n in (0, 1):
            cf = closed_form_state(n, drive)
            for t in SWEEP_T:
                ref = complex(energy_closed(n, drive, cf.shift, t))
                got = complex(energy_quadrature(psi_sample(cf, grid, t), drive))
                assert abs(got - ref) <= 1e-6 * abs(ref)

    @pytest.mark.parametrize("drive", SWEEP_DRIVES, ids=["zero", "const", "t", "t2"])
    def test_imaginary_energy_is_uimag(self, grid, drive):
        for n in range(4):
            cf = closed_form_state(n, drive)
            for t in SWEEP_T:
                st = psi_sample(cf, grid, t)
                assert abs(energy_quadrature(st, drive).im - u_imag_expectation(st, drive)) <= 1e-8

    def test_uimag_vanishes_iff_alpha_or_drive_vanishes(self, grid):
        for drive in SWEEP_DRIVES + (ConstantDrive(-1.5), ConstantDrive(0.5)):
            for n in range(4):
                cf = closed_form_state(n, drive)
                for t in SWEEP_T:
                    u = u_imag_expectation(psi_sample(cf, grid, t), drive)
                    trivial = abs(cf.shift.alpha(t)) <= 1e-10 or drive(t) == 0
                    assert (abs(u) <= 1e-10) == trivial, (drive, n, t, u)

    @settings(max_examples=40, deadline=None)
    @given(
        re=st.floats(-1e3, 1e3, allow_nan=False),
        im=st.floats(-1e3, 1e3, allow_nan=False),
        n=st.integers(0, 3),
        t=st.floats(-1.5, 1.5),
    )
    def test_scale_invariance(self, re, im, n, t):
        c = complex(re, im)
        if abs(c) < 1e-6:
            return
        g = SpatialGrid(-12, 12, 1201)
        st = psi_sample(closed_form_state(n, QUADRATIC), g, t)
        e1, e2 = complex(energy_quadrature(st, QUADRATIC)), complex(energy_quadrature(st.scaled(c), QUADRATIC))
        assert abs(e1 - e2) <= 1e-12 * abs(e1)
        assert u_imag_expectation(st.scaled(c), QUADRATIC) == pytest.approx(
            u_imag_expectation(st, QUADRATIC), rel=1e-12, abs=1e-14
        )


class TestReport:
    def test_closed_and_quadrature_reports(self, grid):
        cf = closed_form_state(1, LINEAR)
        st = psi_sample(cf, grid, 1.0)
        quad = expectation_report(st, LINEAR)
        closed = expectation_report(st, LINEAR, "closed", cf.shift)
        assert quad.method is Method.QUADRATURE and closed.method is Method.CLOSED
        assert complex(closed.energy) == pytest.approx(complex(quad.energy), abs=1e-6)
        assert quad.norm_sq > 0 and quad.u_imag == closed.u_imag

    def test_closed_report_needs_low_n(self, grid):
        cf = closed_form_state(2, ZERO)
        with pytest.raises(CapabilityError):
            expectation_report(psi_sample(cf, grid, 0.0), ZERO, "closed", cf.shift)
