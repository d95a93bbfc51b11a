import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from saftw.errors import BadParameter, DegenerateB, NonUnimodular, SingularAngle
from saftw.params import (SaftMatrix, chirp_modulation, fourier, fractional, fresnel, inverse_matrix,
                          kernel_constant, parse_matrix, random_unimodular, reduction_presets, validate)


def block(m):
    return np.array([[m.A, m.B], [m.C, m.D]])


def test_validate_fourier_nondegenerate():
    r = validate(SaftMatrix(0, 1, -1, 0))
    assert r.determinant == 1 and not r.degenerate and r.branch == "B!=0"


def test_validate_identity_degenerate():
    assert validate(SaftMatrix(1, 0, 0, 1)).branch == "B=0"


def test_validate_rejects_singular():
    with pytest.raises(NonUnimodular) as info:
        validate(SaftMatrix(1, 1, 1, 1))
    assert info.value.determinant == 0


def test_validate_tolerance_edge():
    validate(SaftMatrix(1 + 5e-13, 0, 0, 1))
    with pytest.raises(NonUnimodular):
        validate(SaftMatrix(1 + 1e-10, 0, 0, 1))


def test_kernel_constant_positive_b():
    k = kernel_constant(SaftMatrix(1, 2, 0, 1)).value
    assert k.imag == 0 and k.real == pytest.approx(1 / math.sqrt(4 * math.pi), rel=1e-15)
    assert abs(k) ** 2 == pytest.approx(1 / (2 * math.pi * 2), rel=1e-14)


def test_kernel_constant_negative_b_uses_modulus():
    assert abs(kernel_constant(-2.0).value) ** 2 == pytest.approx(1 / (4 * math.pi), rel=1e-14)


def test_kernel_constant_degenerate():
    with pytest.raises(DegenerateB):
        kernel_constant(0.0)


def test_inverse_fourier():
    assert inverse_matrix(fourier()).as_tuple() == (0, -1, 1, 0, 0, 0)


def test_inverse_fresnel():
    B, p, q = 2.0, 0.7, -0.3
    assert inverse_matrix(fresnel(B, p, q)).as_tuple() == pytest.approx((1, -B, 0, 1, B * q - p, -q))


def test_inverse_is_matrix_inverse_and_involution():
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = random_unimodular(rng)
        inv = inverse_matrix(m)
        assert np.allclose(block(inv), np.linalg.inv(block(m)), atol=1e-12, rtol=0)
        assert np.allclose(block(inverse_matrix(inv)), block(m), atol=1e-12, rtol=0)


def test_inverse_propagates_nonunimodular():
    with pytest.raises(NonUnimodular):
        inverse_matrix(SaftMatrix(1, 1, 1, 1))


def test_chirp_modulation_examples():
    assert chirp_modulation(SaftMatrix(0, 1, -1, 0), 3.7) == 1
    assert chirp_modulation(fresnel(2.0), 0.0) == 1
    assert chirp_modulation(SaftMatrix(1, 1, 0, 1), math.sqrt(2 * math.pi)) == pytest.approx(-1, abs=1e-14)


def test_chirp_modulation_degenerate():
    with pytest.raises(DegenerateB):
        chirp_modulation(SaftMatrix(1, 0, 0, 1), 1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(-50, 50), st.floats(0.1, 3.0), st.floats(-2, 2))
def test_chirp_unit_modulus(x, B, A):
    m = SaftMatrix(A, B, (A - 1) / B, 1.0)
    validate(m)
    assert abs(abs(chirp_modulation(m, x)) - 1) <= 1e-14


def test_presets():
    assert fractional(math.pi / 2).as_tuple() == pytest.approx((0, 1, -1, 0, 0, 0), abs=1e-15)
    assert fresnel(2, 1, 0).as_tuple() == (1, 2, 0, 1, 1, 0)
    assert fourier().as_tuple() == (0, 1, -1, 0, 0, 0)
    with pytest.raises(SingularAngle):
        fractional(math.pi)
    for m in (fourier(), fresnel(0.5), fractional(0.3, 1, 2), reduction_presets("lct", block=(1, 2, 0, 1))):
        validate(m)


def test_parse_matrix():
    assert parse_matrix("0,1,-1,0,0,0") == fourier()
    assert parse_matrix("fresnel:2,0.5,0.25") == fresnel(2, 0.5, 0.25)
    assert parse_matrix("fourier") == fourier()
    with pytest.raises(BadParameter):
        parse_matrix("1,2,3")
    with pytest.raises(BadParameter):
        parse_matrix("a,b,c,d,e,f")


def test_random_unimodular_range():
    rng = np.random.default_rng(0)
    for _ in range(50):
        m = random_unimodular(rng)
        validate(m)
        assert 0.5 <= m.B <= 2.0
