import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from saftw.errors import DegenerateB, GridMismatch
from saftw.convolution import chirp_pair, convolution_theorem_residual, phase_factor, saft_convolve
from saftw.numerics import SampledSignal
from saftw.params import SaftMatrix, fourier, fresnel, random_unimodular
from saftw.signals import gaussian

GRID = (-8.0, 1 / 16, 257)


def sample(func):
    return SampledSignal.from_function(func, *GRID)


def test_chirp_pair_trivial_and_algebra():
    rng = np.random.default_rng(0)
    f = SampledSignal(-2.0, 0.1, rng.standard_normal(41) + 1j * rng.standard_normal(41))
    p = chirp_pair(f, fourier())
    assert np.array_equal(p.forward.samples, f.samples) and np.array_equal(p.backward.samples, f.samples)
    m = fresnel(1.5)
    p = chirp_pair(f, m)
    expected = np.abs(f.samples) ** 2 * np.exp(1j * m.A * f.x ** 2 / m.B)
    assert np.allclose(p.forward.samples * np.conj(p.backward.samples), expected, atol=1e-13)
    assert np.allclose(np.abs(p.forward.samples), np.abs(f.samples), atol=1e-14)
    assert np.allclose(np.abs(p.backward.samples), np.abs(f.samples), atol=1e-14)


def test_delta_identity():
    m = fresnel(2.0, 0.3, 0.1)
    f = sample(gaussian(0.8, 0.5))
    delta = np.zeros(f.n, complex)
    delta[np.argmin(np.abs(f.x))] = 1 / f.dx
    h = saft_convolve(f, f.with_samples(delta), m)
    assert np.allclose(h.samples, f.samples / math.sqrt(2 * math.pi * m.B), atol=1e-14)


def test_zero():
    z = SampledSignal(*GRID[:2], np.zeros(GRID[2]))
    assert not np.any(saft_convolve(z, z, fresnel(1.0)).samples)


def test_fourier_matches_double_loop():
    f, g = sample(gaussian()), sample(gaussian(0.6, 0.4))
    h = saft_convolve(f, g, fourier())
    x, dx = f.x, f.dx
    # h(t) = K int f(s) g(t - s) ds with g sampled on the shifted grid
    oracle = np.array([np.sum(f.samples * np.exp(-(t - x - 0.4) ** 2 / (2 * 0.36))) * dx for t in x])
    oracle /= math.sqrt(2 * math.pi)
    assert np.max(np.abs(h.samples - oracle)) <= 1e-10


def test_commutative_and_bilinear():
    m = SaftMatrix(1, 2, 0, 1, 0.5, 0.25)
    f, g, k = sample(gaussian()), sample(gaussian(0.7, 0.5)), sample(gaussian(0.9, -0.8))
    assert np.allclose(saft_convolve(f, g, m).samples, saft_convolve(g, f, m).samples, atol=1e-12)
    a, b = 2 - 1j, 0.5j
    lhs = saft_convolve(f.with_samples(a * f.samples + b * k.samples), g, m).samples
    rhs = a * saft_convolve(f, g, m).samples + b * saft_convolve(k, g, m).samples
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_errors():
    f = sample(gaussian())
    with pytest.raises(DegenerateB):
        saft_convolve(f, f, SaftMatrix(1, 0, 0, 1))
    with pytest.raises(GridMismatch):
        saft_convolve(f, SampledSignal(-8.0, 1 / 8, np.zeros(129)), fourier())


def test_phase_factor():
    assert phase_factor(fresnel(2.0, 0.5, 0.3), 0.0) == 1
    w = np.linspace(-5, 5, 11)
    assert np.allclose(phase_factor(SaftMatrix(1, 1, -1, 0), w), 1)
    rng = np.random.default_rng(4)
    for _ in range(20):
        m = random_unimodular(rng)
        assert abs(abs(phase_factor(m, rng.uniform(-10, 10))) - 1) <= 1e-14


def test_theorem_residuals():
    f, g = sample(gaussian()), sample(gaussian(0.7, 0.5))
    assert convolution_theorem_residual(f, g, fourier()) <= 1e-5
    assert convolution_theorem_residual(f, g, SaftMatrix(1, 2, 0, 1, 0.5, 0.25)) <= 1e-4
    z = f.with_samples(np.zeros(f.n))
    assert convolution_theorem_residual(f, z, fresnel(1.0), absolute=True) <= 1e-12


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_theorem_random_matrices(seed):
    m = random_unimodular(np.random.default_rng(seed))
    f, g = sample(gaussian()), sample(gaussian(0.7, 0.5))
    assert convolution_theorem_residual(f, g, m) <= 1e-4
