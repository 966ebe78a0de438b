import math

import pytest

from dispersion_qed.polarizability import two_level_model

LAMBDA_UNIT = 2.0 * math.pi  # shortest wavelength of the k0 = 1 two-level atom


@pytest.fixture
def unit_atom():
    """Two-level atom with k0 = 1 and unit static polarizability."""
    return two_level_model(1.0, 1.5, name="unit")


def log_slope(fn, r, rel=1e-3):
    """Centered d ln|f| / d ln r."""
    hi, lo = fn(r * (1 + rel)), fn(r * (1 - rel))
    return math.log(abs(hi / lo)) / math.log((1 + rel) / (1 - rel))


_CRITERIA: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(n, ok, detail) returns ok."""
    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} {detail}"
        _CRITERIA[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
