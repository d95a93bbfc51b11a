"""Time and SAFT-domain windows of the analysing wavelets.

Moments see only ``|w|^2``, so the daughter chirp never affects the time
window. In the SAFT domain the chirps of ``Gamma`` cancel against the kernel:

    Gamma_zeta(nu) = K_B e^{i phi(nu)} int conj(psi(-x)) e^{-i x (nu - zeta p) / B} dx,

hence ``|Gamma_zeta(zeta w)|`` is the mother's spectrum read at
``zeta (w - p) / B``. Its window in ``w`` therefore shrinks like ``1 / zeta``
about ``p``, and with ``p = 0`` the ratio radius/center does not depend on
``zeta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZeroCenter, ZeroNorm
from .numerics import FrequencyGrid, SampledSignal, effective_support, trapezoid_weights
from .nsawt import _as_grid, _check_scale, _kernel_grid, _require_b, daughter_wavelet
from .params import SaftMatrix
from .saft import saft_fast, saft_uniform
from .signals import MotherWavelet

Q_CENTER_CUTOFF = 1e-8
SAFD_NODES = 4097


@dataclass(frozen=True)
class WindowStats:
    center: float
    radius: float


def window_stats(w: SampledSignal) -> WindowStats:
    """Center ``int x |w|^2 / int |w|^2`` and root second central moment."""
    wt = trapezoid_weights(w.n, w.dx) * np.abs(w.samples) ** 2
    mass = float(wt.sum())
    if not mass > 0:
        raise ZeroNorm("window has zero norm")
    x = w.x
    center = float(np.sum(wt * x) / mass)
    var = float(np.sum(wt * (x - center) ** 2) / mass)
    return WindowStats(center, math.sqrt(max(var, 0.0)))


def mother_stats(psi: MotherWavelet) -> WindowStats:
    """Time window of the mother, from its metadata when both values are set."""
    if psi.center is not None and psi.radius is not None:
        return WindowStats(float(psi.center), float(psi.radius))
    return window_stats(psi.signal)


def daughter_window_law(psi: MotherWavelet, t: float, zeta: float, m: SaftMatrix,
                        grid=None) -> tuple[WindowStats, WindowStats]:
    """Predicted ``(t + zeta E, zeta Delta)`` and the measured daughter window."""
    _check_scale(zeta)
    _require_b(m)
    base = mother_stats(psi)
    predicted = WindowStats(t + zeta * base.center, zeta * base.radius)
    if grid is None:
        grid = _kernel_grid(psi, [(t, zeta)], m)
    measured = window_stats(daughter_wavelet(psi, t, zeta, m, grid))
    return predicted, measured


def gamma_source(psi: MotherWavelet, zeta: float, m: SaftMatrix, grid=None) -> SampledSignal:
    """The chirped reflection ``exp{i/(2B)(2 x zeta p - 2 x p - A x^2)} conj(psi(-x))``."""
    _check_scale(zeta)
    _require_b(m)
    x0, dx, n = _as_grid(grid if grid is not None else psi.signal)
    x = x0 + dx * np.arange(n)
    A, B, C, D, p, q = m.as_tuple()
    phase = np.exp(1j * (2 * x * zeta * p - 2 * x * p - A * x * x) / (2 * B))
    return SampledSignal(x0, dx, phase * np.conj(psi(-x)))


def safd_window(psi: MotherWavelet, zeta: float, m: SaftMatrix, grid=None,
                nodes: int = SAFD_NODES) -> WindowStats:
    """Window of ``w -> Gamma(zeta w)``.

    ``Gamma`` is first located on the fast path's native grid; the scaled
    function is then sampled on ``nodes`` points spanning that support.
    """
    src = gamma_source(psi, zeta, m, grid)
    native = saft_fast(src, m, pad_to=2 * src.n, check=False)
    lo, hi = effective_support(native.as_signal())
    wlo, whi = sorted((lo / zeta, hi / zeta))
    out = FrequencyGrid.span(zeta * wlo, zeta * whi, nodes)
    vals = saft_uniform(src, m, out).values
    return window_stats(SampledSignal(wlo, (whi - wlo) / (nodes - 1), vals))


def q_factor(psi: MotherWavelet, m: SaftMatrix, zeta_samples, grid=None) -> np.ndarray:
    """``radius / center`` of the SAFT-domain window at each scale."""
    out = []
    for z in np.atleast_1d(np.asarray(zeta_samples, dtype=float)):
        s = safd_window(psi, float(z), m, grid)
        if abs(s.center) < Q_CENTER_CUTOFF * s.radius:
            raise ZeroCenter(f"SAFT-domain window is centred at 0 (scale {z:g}); Q is undefined")
        out.append(s.radius / s.center)
    return np.asarray(out)


@dataclass(frozen=True)
class TimeFrequencyBox:
    time: tuple[float, float]
    freq: tuple[float, float]

    @property
    def area(self) -> float:
        return (self.time[1] - self.time[0]) * (self.freq[1] - self.freq[0])


def tf_box(psi: MotherWavelet, t: float, zeta: float, m: SaftMatrix, grid=None) -> TimeFrequencyBox:
    """Time window ``t + zeta E_psi +- zeta Delta_psi`` times the window of ``Gamma(zeta .)``.

    The frequency side is measured, so its width is ``2 Delta_Gamma / zeta``
    and the area is the scale-free ``4 Delta_psi Delta_Gamma``.
    """
    base = mother_stats(psi)
    c, r = t + zeta * base.center, zeta * base.radius
    s = safd_window(psi, zeta, m, grid)
    return TimeFrequencyBox((c - r, c + r), (s.center - s.radius, s.center + s.radius))
