"""Forward and inverse special affine Fourier transform on sampled signals.

Two independent routes compute the same integral

    F(w) = K_B int f(x) exp{i/(2B) (A x^2 + 2x(p - w) - 2w(Dp - Bq) + D w^2)} dx

``saft_direct`` evaluates it by trapezoidal quadrature at any requested
frequency. ``saft_fast`` factors the kernel into a pre-chirp, one FFT and a
post-chirp, and returns values on the grid induced by the FFT,
``w_k = |B| (k - N/2) 2 pi / (N dx)``.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.signal import czt

from .errors import DegenerateB, DegenerateD, GridMismatch, UnderResolved
from .numerics import (FrequencyGrid, SampledSignal, Spectrum, check_resolution,
                       effective_xmax, inner_product, next_pow2, require_same_grid,
                       trapezoid_weights, SAMPLES_PER_PERIOD)
from .params import SaftMatrix, inverse_matrix, kernel_constant, validate

_CHUNK = 1 << 22  # complex entries per block of the direct-sum matrix


def _require_kernel_branch(m: SaftMatrix) -> None:
    validate(m)
    if m.B == 0:
        raise DegenerateB()


def kernel(m: SaftMatrix, x, w):
    """SAFT kernel ``K(x, w)``; broadcasts over ``x`` and ``w``."""
    _require_kernel_branch(m)
    A, B, C, D, p, q = m.as_tuple()
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    phase = (A * x * x + 2 * x * (p - w) - 2 * w * (D * p - B * q) + D * w * w) / (2 * B)
    out = np.conj(kernel_constant(m).value) * np.exp(1j * phase)
    return out[()] if out.ndim == 0 else out


def _post_phase(m: SaftMatrix, w: np.ndarray) -> np.ndarray:
    A, B, C, D, p, q = m.as_tuple()
    return np.exp(1j * (D * w * w - 2 * w * (D * p - B * q)) / (2 * B))


def guard_radius(f: SampledSignal, m: SaftMatrix) -> float:
    """Half-width of the frequency band around ``p`` where the kernel is resolved.

    Inside ``[p - r, p + r]`` the local kernel frequency
    ``|A/B| x_max + |p - w| / |B|`` stays below ``2 pi / (8 dx)``.
    """
    _require_kernel_branch(m)
    xmax = effective_xmax(f)
    limit = 2.0 * math.pi / (SAMPLES_PER_PERIOD * f.dx)
    r = abs(m.B) * (limit - abs(m.A / m.B) * xmax)
    if r <= 0:
        raise UnderResolved("the chirp alone exceeds the sampling limit of this grid")
    return r


def guard_band(f: SampledSignal, m: SaftMatrix) -> tuple[float, float]:
    r = guard_radius(f, m)
    return (m.p - r, m.p + r)


def _check_direct(f: SampledSignal, m: SaftMatrix, omega: np.ndarray) -> None:
    if not np.any(f.samples):
        return
    xmax = effective_xmax(f)
    bound = abs(m.A / m.B) * xmax + np.max(np.abs(m.p - omega)) / abs(m.B)
    check_resolution(bound, f.dx, "SAFT kernel")


def saft_eval(f: SampledSignal, m: SaftMatrix, omega, check: bool = True) -> np.ndarray:
    """Quadrature of the SAFT integral at arbitrary frequencies ``omega``."""
    _require_kernel_branch(m)
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    if check:
        _check_direct(f, m, omega)
    A, B, C, D, p, q = m.as_tuple()
    x = f.x
    pre = trapezoid_weights(f.n, f.dx) * f.samples * np.exp(1j * (A * x * x + 2 * x * p) / (2 * B))
    out = np.empty(omega.size, dtype=complex)
    step = max(1, _CHUNK // f.n)
    for s in range(0, omega.size, step):
        w = omega[s:s + step]
        out[s:s + step] = np.exp(-1j * np.outer(w, x) / B) @ pre
    return kernel_constant(m).value * _post_phase(m, omega) * out


def saft_direct(f: SampledSignal, m: SaftMatrix, out: FrequencyGrid, check: bool = True) -> Spectrum:
    """Direct quadrature of the SAFT on the frequency grid ``out``."""
    return Spectrum(out.w0, out.dw, saft_eval(f, m, out.omega, check=check))


def saft_bzero(f: SampledSignal, m: SaftMatrix, out: FrequencyGrid) -> Spectrum:
    """The ``B = 0`` branch: a scaled, chirped and shifted copy of ``f``.

    ``F(w) = sqrt(D) exp{i/2 (C D (w-p)^2 + 2 w q)} f(D (w - p))`` with ``f``
    linearly interpolated (zero outside its grid).
    """
    validate(m)
    if m.B != 0:
        raise DegenerateB("the B = 0 branch was requested for a matrix with B != 0")
    A, B, C, D, p, q = m.as_tuple()
    if D == 0:
        raise DegenerateD("B = 0 branch requires D != 0")
    if D < 0:
        raise DegenerateD("B = 0 branch with D < 0 has no defined square-root branch")
    w = out.omega
    arg = D * (w - p)
    vals = (np.interp(arg, f.x, f.samples.real, left=0.0, right=0.0)
            + 1j * np.interp(arg, f.x, f.samples.imag, left=0.0, right=0.0))
    phase = np.exp(0.5j * (C * D * (w - p) ** 2 + 2 * w * q))
    return Spectrum(out.w0, out.dw, math.sqrt(D) * phase * vals)


def _pad(f: SampledSignal, n_total: int) -> SampledSignal:
    extra = n_total - f.n
    if extra <= 0:
        return f
    left = extra // 2
    samples = np.concatenate([np.zeros(left, complex), f.samples, np.zeros(extra - left, complex)])
    return SampledSignal(f.x0 - left * f.dx, f.dx, samples)


def fast_grid(n: int, dx: float, B: float) -> FrequencyGrid:
    """Native output grid of the fast path for ``n`` samples at spacing ``dx``."""
    dw = abs(B) * 2.0 * math.pi / (n * dx)
    return FrequencyGrid(-(n // 2) * dw, dw, n)


def saft_fast(f: SampledSignal, m: SaftMatrix, pad_to: int | None = None,
              check: bool = True) -> Spectrum:
    """Chirp-FFT-chirp evaluation of the SAFT on its native grid.

    The signal is zero-padded (symmetrically) to a power of two of at least
    ``pad_to`` samples.
    """
    _require_kernel_branch(m)
    A, B, C, D, p, q = m.as_tuple()
    n = next_pow2(max(f.n, pad_to or 0))
    f = _pad(f, n)
    if check and np.any(f.samples):
        bound = (abs(A) * effective_xmax(f) + abs(p)) / abs(B)
        check_resolution(bound, f.dx, "SAFT pre-chirp")
    x = f.x
    g = f.samples * np.exp(1j * (A * x * x + 2 * x * p) / (2 * B))
    g = g * (-1.0) ** np.arange(n)
    grid = fast_grid(n, f.dx, B)
    w = grid.omega
    nu = w / B
    if B > 0:
        s = np.fft.fft(g)
    else:
        s = np.fft.ifft(g) * n
    s = s * np.exp(-1j * f.x0 * nu)
    vals = kernel_constant(m).value * f.dx * _post_phase(m, w) * s
    return Spectrum(grid.w0, grid.dw, vals)


def saft_uniform(f: SampledSignal, m: SaftMatrix, out: FrequencyGrid) -> Spectrum:
    """Same sum as ``saft_fast`` (no padding) on an arbitrary uniform grid.

    The chirp-z transform evaluates the discrete-time Fourier sum exactly at
    ``w / B``, so this is the band-limited interpolation of the fast-path
    spectrum. No resolution guard is applied.
    """
    _require_kernel_branch(m)
    A, B, C, D, p, q = m.as_tuple()
    x = f.x
    g = f.samples * np.exp(1j * (A * x * x + 2 * x * p) / (2 * B))
    nu0, dnu = out.w0 / B, out.dw / B
    s = czt(g, out.count, w=np.exp(-1j * f.dx * dnu), a=np.exp(1j * f.dx * nu0))
    w = out.omega
    s = s * np.exp(-1j * f.x0 * w / B)
    return Spectrum(out.w0, out.dw, kernel_constant(m).value * f.dx * _post_phase(m, w) * s)


def saft(f: SampledSignal, m: SaftMatrix, out: FrequencyGrid | None = None,
         path: str = "direct") -> Spectrum:
    """Dispatch to the ``B = 0`` branch, the direct path or the fast path."""
    validate(m)
    if m.B == 0:
        if out is None:
            out = FrequencyGrid(f.x0, f.dx, f.n)
        return saft_bzero(f, m, out)
    if path == "fast":
        return saft_fast(f, m)
    if out is None:
        g = fast_grid(next_pow2(f.n), f.dx, m.B)
        lo, hi = guard_band(f, m)
        w = g.omega
        keep = w[(w >= lo) & (w <= hi)]
        out = FrequencyGrid(float(keep[0]), g.dw, keep.size)
    return saft_direct(f, m, out)


def isaft(F: Spectrum, m: SaftMatrix, out: tuple[float, float, int] | None = None,
          path: str = "fast") -> SampledSignal:
    """Inverse SAFT: the transform with ``inverse_matrix(m)`` applied to ``F``.

    ``path="fast"`` returns samples on the fast path's native grid, which for
    a spectrum produced by ``saft_fast`` is the centred input grid; it is the
    exact discrete inverse of ``saft_fast`` and needs no resolution guard.
    ``path="direct"`` evaluates the quadrature on ``out = (x0, dx, n)``.
    """
    _require_kernel_branch(m)
    mi = inverse_matrix(m)
    src = F.as_signal()
    if path == "fast":
        res = saft_fast(src, mi, check=False)
        return SampledSignal(res.w0, res.dw, res.values)
    if out is None:
        g = fast_grid(next_pow2(F.n), F.dw, mi.B)
        out = (g.w0, g.dw, g.count)
    x0, dx, n = out
    vals = saft_eval(src, mi, x0 + dx * np.arange(n))
    return SampledSignal(x0, dx, vals)


def spectrum_inner(F: Spectrum, G: Spectrum) -> complex:
    if F.n != G.n or abs(F.dw - G.dw) > 1e-12 * F.dw or abs(F.w0 - G.w0) > 1e-12 * max(F.dw, abs(F.w0)):
        raise GridMismatch("spectra live on different grids")
    return complex(np.sum(trapezoid_weights(F.n, F.dw) * F.values * np.conj(G.values)))


def parseval_residual(f: SampledSignal, g: SampledSignal, m: SaftMatrix,
                      path: str = "fast", absolute: bool = False, eps: float = 1e-300) -> float:
    """Relative gap between ``<f, g>`` and ``<F f, F g>``.

    With ``absolute=True`` the raw difference is returned, which is the
    meaningful figure for orthogonal pairs.
    """
    require_same_grid(f, g)
    lhs = inner_product(f, g)
    if path == "fast":
        Ff, Fg = saft_fast(f, m), saft_fast(g, m)
    else:
        Ff = saft(f, m, path="direct")
        Fg = saft_direct(g, m, FrequencyGrid(Ff.w0, Ff.dw, Ff.n))
    rhs = spectrum_inner(Ff, Fg)
    diff = abs(lhs - rhs)
    if absolute:
        return diff
    return diff / max(abs(lhs), eps)
