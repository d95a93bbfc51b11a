import math

import numpy as np
import pytest

from saftw.nsawt import admissibility_for, nsawt_direct
from saftw.numerics import SampledSignal, ScaleGrid
from saftw.params import fourier
from saftw.signals import MotherWavelet, bump, gaussian

# shared grids of the wavelet runs
SIGNAL_GRID = (-16.0, 1.0 / 32, 1024)
T_GRID = (-48.0, 0.125, 769)
SCALES = ScaleGrid(0.25, 8.0, 64)
WIDE_SCALES = ScaleGrid(0.1, 16.0, 128)

_ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in _ACCEPTANCE:
        terminalreporter.write_line(line)


@pytest.fixture
def criterion():
    """Record and print one pass/fail line per acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        _ACCEPTANCE.append(line)
        print(line)
        return ok

    return record


@pytest.fixture(scope="session")
def rng_seed():
    return 20240611


def sample(func, grid=SIGNAL_GRID) -> SampledSignal:
    return SampledSignal.from_function(func, *grid)


@pytest.fixture(scope="session")
def gauss():
    return sample(gaussian())


@pytest.fixture(scope="session")
def bump_signal():
    return sample(bump())


@pytest.fixture(scope="session")
def morlet():
    return MotherWavelet.morlet()


@pytest.fixture(scope="session")
def bump_admissibility(morlet, bump_signal):
    return admissibility_for(morlet, fourier(), bump_signal)


@pytest.fixture(scope="session")
def bump_scalograms(morlet, bump_signal):
    """Scalograms of the bump on the default and the wide scale grid."""
    return {
        "default": nsawt_direct(bump_signal, morlet, T_GRID, SCALES, fourier()),
        "wide": nsawt_direct(bump_signal, morlet, T_GRID, WIDE_SCALES, fourier()),
    }


def rel_inf(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a) - np.asarray(b))) / np.max(np.abs(b)))


def rel_l2(a, b) -> float:
    return math.sqrt(float(np.sum(np.abs(np.asarray(a) - np.asarray(b)) ** 2))
                     / float(np.sum(np.abs(b) ** 2)))
