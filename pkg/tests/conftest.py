import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from rydsim.model import AtomParams, DriveParams, khz, mhz  # noqa: E402

_CRITERIA = {}


def record_criterion(number, passed, detail):
    """Store one acceptance result; printed in the terminal summary."""
    line = f"CRITERION {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    _CRITERIA[number] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(_CRITERIA[n])


# Parameter sets used across modules (rad/us).

@pytest.fixture
def eia_atom():
    return AtomParams(khz(7.5), khz(15), khz(15))


@pytest.fixture
def eia_drive():
    return DriveParams(omega_p=mhz(0.3), omega_c=mhz(0.45), omega_m=5 * khz(15), delta3=mhz(6))


@pytest.fixture
def fluor_atom():
    return AtomParams(khz(7.5), khz(15), khz(15))


@pytest.fixture
def fluor_drive():
    return DriveParams(omega_p=mhz(1.5), omega_c=mhz(1.5), omega_m=mhz(0.1))
