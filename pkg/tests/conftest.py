import numpy as np
import pytest

from gdsbp.codes import gb_single_shot_a, load_gb_code, rotated_toric
from gdsbp.matrices import single_shot_matrix


@pytest.fixture(scope="session")
def toric4():
    return rotated_toric(4)


@pytest.fixture(scope="session")
def gb_code():
    return load_gb_code()


@pytest.fixture(scope="session")
def gb_pair(gb_code):
    return single_shot_matrix(gb_code.h, gb_single_shot_a())


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def report(request):
    """Record one PASS/FAIL line per acceptance criterion and fail on FAIL."""
    lines = request.config.acceptance_lines

    def _report(number: int, ok: bool, detail: str) -> None:
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        assert ok, line

    return _report


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
