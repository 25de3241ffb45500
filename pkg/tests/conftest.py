import numpy as np
import pytest

from pt_spectrum import ConstantDrive, PolynomialDrive, SpatialGrid

@pytest.fixture(scope="session")
def grid():
    return SpatialGrid(-12.0, 12.0, 2401)


@pytest.fixture(scope="session")
def fine_grid():
    return SpatialGrid(-12.0, 12.0, 9601)


ZERO = PolynomialDrive((0.0,))
LINEAR = PolynomialDrive((0.0, 1.0))
QUADRATIC = PolynomialDrive((0.0, 0.0, 1.0))
ONE = ConstantDrive(1.0)

DRIVES = {"zero": ZERO, "const1": ONE, "t": LINEAR, "t2": QUADRATIC}


def pytest_configure(config):
    config.acceptance_lines = {}


def pytest_terminal_summary(terminalreporter, config):
    lines = config.acceptance_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for key in sorted(lines):
            terminalreporter.write_line(lines[key])


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for a criterion, then assert it."""

    def record(number: int, ok: bool, detail: str):
        status = "PASS" if ok else "FAIL"
        request.config.acceptance_lines[number] = f"[{status}] criterion {number}: {detail}"
        print(request.config.acceptance_lines[number])
        assert ok, detail

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
