import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import rel_l2, sample
from saftw.errors import DegenerateB, DegenerateD, UnderResolved
from saftw.numerics import FrequencyGrid, SampledSignal
from saftw.params import SaftMatrix, fourier, fresnel, random_unimodular
from saftw.saft import (guard_band, isaft, kernel, parseval_residual, saft, saft_bzero, saft_direct,
                        saft_fast, saft_uniform)
from saftw.signals import chirp, gaussian, hermite


def test_kernel_fourier_origin():
    assert kernel(fourier(), 0.0, 0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-15)


def test_kernel_fourier_general():
    x, w = np.meshgrid(np.linspace(-3, 3, 7), np.linspace(-2, 2, 5))
    assert np.allclose(kernel(fourier(), x, w), np.exp(-1j * x * w) / math.sqrt(2 * math.pi), atol=1e-15)


def test_kernel_modulus():
    rng = np.random.default_rng(1)
    for _ in range(100):
        m = random_unimodular(rng)
        x, w = rng.uniform(-10, 10, 2)
        assert abs(kernel(m, x, w)) == pytest.approx(1 / math.sqrt(2 * math.pi * abs(m.B)), rel=1e-14)


def test_kernel_degenerate():
    with pytest.raises(DegenerateB):
        kernel(SaftMatrix(1, 0, 0, 1), 0.0, 0.0)


def test_direct_fourier_gaussian():
    f = SampledSignal.from_function(lambda x: np.exp(-x * x / 2), -10.0, 20 / 2047, 2048)
    out = FrequencyGrid.span(-6, 6, 241)
    F = saft_direct(f, fourier(), out)
    assert np.max(np.abs(F.values - np.exp(-out.omega ** 2 / 2))) <= 1e-8


def test_direct_zero_signal():
    f = SampledSignal(-4.0, 0.05, np.zeros(161))
    F = saft_direct(f, fresnel(1.3, 0.2, 0.1), FrequencyGrid.span(-3, 3, 31))
    assert not np.any(F.values)


def test_direct_fresnel_matches_oversampled():
    m = SaftMatrix(1, 2, 0, 1, 0, 0)
    func = chirp(0.5)
    coarse = SampledSignal.from_function(func, -12.0, 1 / 16, 385)
    fine = SampledSignal.from_function(func, -12.0, 1 / 64, 1537)
    out = FrequencyGrid.span(-10, 10, 201)
    a = saft_direct(coarse, m, out).values
    b = saft_direct(fine, m, out).values
    assert np.max(np.abs(a - b)) <= 1e-7 * np.max(np.abs(b))


def test_direct_underresolved():
    f = SampledSignal.from_function(gaussian(), -8.0, 0.5, 33)
    with pytest.raises(UnderResolved):
        saft_direct(f, fourier(), FrequencyGrid.span(-20, 20, 5))


def test_bzero_identity():
    f = SampledSignal.from_function(gaussian(0.8, 0.3), -5.0, 0.05, 201)
    F = saft_bzero(f, SaftMatrix(1, 0, 0, 1), FrequencyGrid(f.x0, f.dx, f.n))
    assert np.allclose(F.values, f.samples, atol=1e-15)


def test_bzero_shift():
    f = SampledSignal.from_function(gaussian(), -6.0, 0.05, 241)
    p = 0.5  # ten grid steps
    out = FrequencyGrid(-4.0, 0.05, 161)
    F = saft_bzero(f, SaftMatrix(1, 0, 0, 1, p, 0), out)
    assert np.allclose(F.values, np.exp(-(out.omega - p) ** 2 / 2), atol=1e-12)


def test_bzero_chirp_formula():
    C = 0.7
    f = SampledSignal.from_function(gaussian(), -6.0, 0.05, 241)
    out = FrequencyGrid(-2.0, 0.05, 81)
    F = saft_bzero(f, SaftMatrix(1, 0, C, 1), out)
    idx = np.arange(0, 81, 8)[:10]
    w = out.omega[idx]
    oracle = np.exp(0.5j * C * w * w) * np.exp(-w * w / 2)
    assert np.max(np.abs(F.values[idx] - oracle)) <= 1e-12


def test_bzero_rejects():
    f = SampledSignal(0.0, 1.0, np.ones(4))
    with pytest.raises(DegenerateD):
        saft_bzero(f, SaftMatrix(-1, 0, 0, -1), FrequencyGrid(0, 1, 4))
    with pytest.raises(DegenerateB):
        saft_bzero(f, fourier(), FrequencyGrid(0, 1, 4))


def test_dispatch_bzero():
    f = SampledSignal.from_function(gaussian(), -5.0, 0.1, 101)
    assert np.allclose(saft(f, SaftMatrix(1, 0, 0, 1)).values, f.samples)


def _native(f, m):
    F = saft_fast(f, m)
    lo, hi = guard_band(f, m)
    keep = np.nonzero((F.omega >= lo) & (F.omega <= hi))[0]
    return F.values[keep], FrequencyGrid(float(F.omega[keep[0]]), F.dw, keep.size)


def test_fast_fourier_matches_direct():
    f = sample(gaussian())
    fast, grid = _native(f, fourier())
    assert np.max(np.abs(fast - saft_direct(f, fourier(), grid).values)) <= 1e-9


def test_fast_random_matrices():
    rng = np.random.default_rng(11)
    for _ in range(10):
        m = random_unimodular(rng)
        for func in (gaussian(), chirp(0.25, 0.5), hermite(1)):
            f = sample(func)
            fast, grid = _native(f, m)
            direct = saft_direct(f, m, grid).values
            assert np.max(np.abs(fast - direct)) <= 1e-7 * np.max(np.abs(direct))


def test_fast_negative_b():
    m = SaftMatrix(1, -1.5, 0, 1, 0.3, -0.2)
    f = sample(gaussian())
    fast, grid = _native(f, m)
    direct = saft_direct(f, m, grid).values
    assert np.max(np.abs(fast - direct)) <= 1e-7 * np.max(np.abs(direct))


def test_fast_impulse_flat():
    dx = 1 / 64
    f = SampledSignal.from_function(gaussian(dx / 4), -8.0, dx, 1024)
    fast, _ = _native(f, fresnel(1.0))
    mod = np.abs(fast)
    assert (mod.max() - mod.min()) / mod.max() <= 0.05


def test_uniform_matches_direct():
    f = sample(gaussian(0.7))
    m = fresnel(1.5, 0.3, 0.1)
    out = FrequencyGrid.span(-5.3, 4.1, 77)
    assert np.allclose(saft_uniform(f, m, out).values, saft_direct(f, m, out).values, atol=1e-12)


def test_round_trip_fourier():
    f = sample(gaussian())
    back = isaft(saft_fast(f, fourier()), fourier())
    assert back.n == f.n and rel_l2(back.samples, f.samples) <= 1e-7


def test_round_trip_fresnel_chirp():
    f = sample(chirp(0.5))
    m = fresnel(2.0, 0.5, 0.25)
    assert rel_l2(isaft(saft_fast(f, m), m).samples, f.samples) <= 1e-6


def test_round_trip_direct_path():
    f = sample(gaussian())
    m = fresnel(1.0)
    F = saft_direct(f, m, FrequencyGrid.span(-10, 10, 1001))
    back = isaft(F, m, out=(-6.0, 0.125, 97), path="direct")
    assert np.max(np.abs(back.samples - np.exp(-back.x ** 2 / 2))) <= 1e-6


def test_round_trip_family():
    rng = np.random.default_rng(5)
    for _ in range(5):
        m = random_unimodular(rng)
        for func in (gaussian(), hermite(2), chirp(0.3, 0.2)):
            f = sample(func)
            assert rel_l2(isaft(saft_fast(f, m), m).samples, f.samples) <= 1e-6


def test_isaft_zero():
    F = saft_fast(SampledSignal(-4.0, 1 / 16, np.zeros(128)), fourier())
    assert not np.any(isaft(F, fourier()).samples)


def test_parseval_examples():
    g = sample(gaussian())
    assert parseval_residual(g, g, fourier()) <= 1e-6
    c = sample(chirp(0.5))
    m = random_unimodular(np.random.default_rng(2))
    assert parseval_residual(c, c, m) <= 1e-5
    h0, h1 = sample(hermite(0)), sample(hermite(1))
    assert parseval_residual(h0, h1, fourier(), absolute=True) <= 1e-8
    assert parseval_residual(g, g, fresnel(1.0), path="direct") <= 1e-5


@settings(max_examples=25, deadline=None)
@given(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_linearity(a, b):
    m = fresnel(1.2, 0.3, -0.1)
    f, g = sample(gaussian()), sample(hermite(1))
    out = FrequencyGrid.span(-4, 4, 33)
    lhs = saft_direct(f.with_samples(a * f.samples + b * g.samples), m, out).values
    rhs = a * saft_direct(f, m, out).values + b * saft_direct(g, m, out).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, abs(a) + abs(b))
