"""Analytic test functions and mother wavelets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import eval_hermite

from .errors import BadParameter
from .numerics import SampledSignal


def gaussian(sigma: float = 1.0, x0: float = 0.0) -> Callable:
    if not sigma > 0:
        raise BadParameter("gaussian width must be positive")
    return lambda x: np.exp(-((np.asarray(x) - x0) ** 2) / (2 * sigma ** 2)) + 0j


def chirp(a: float, b: float = 0.0, sigma: float = 1.0) -> Callable:
    """Gaussian carrying the phase ``a x^2 + b x``."""
    if not sigma > 0:
        raise BadParameter("chirp envelope width must be positive")
    return lambda x: np.exp(-np.asarray(x) ** 2 / (2 * sigma ** 2) + 1j * (a * np.asarray(x) ** 2 + b * np.asarray(x)))


def hermite(n: int) -> Callable:
    """Normalised Hermite function of order 0, 1 or 2."""
    if n not in (0, 1, 2):
        raise BadParameter(f"hermite order must be 0, 1 or 2, got {n!r}")
    c = 1.0 / math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    return lambda x: c * eval_hermite(n, np.asarray(x, float)) * np.exp(-np.asarray(x, float) ** 2 / 2) + 0j


def bump(carrier: float = 3.0, sigma: float = 1.0, x0: float = 0.0) -> Callable:
    """Gaussian envelope on a cosine carrier; its spectrum avoids the origin."""
    return lambda x: (np.exp(-((np.asarray(x) - x0) ** 2) / (2 * sigma ** 2))
                      * np.cos(carrier * np.asarray(x)) + 0j)


def morlet(omega0: float = 5.0, analytic: bool = False) -> Callable:
    """Morlet wavelet with the admissibility correction term (exact zero mean).

    The default is the real-valued form, whose spectrum is even; with
    ``analytic=True`` the complex form concentrated at ``+omega0``.
    """
    k = math.exp(-omega0 ** 2 / 2)
    norm = math.pi ** -0.25

    def real(x):
        x = np.asarray(x, float)
        return norm * (np.cos(omega0 * x) - k) * np.exp(-x * x / 2) + 0j

    def cplx(x):
        x = np.asarray(x, float)
        return norm * (np.exp(1j * omega0 * x) - k) * np.exp(-x * x / 2)

    return cplx if analytic else real


def mexican_hat() -> Callable:
    c = 2.0 / (math.sqrt(3.0) * math.pi ** 0.25)
    return lambda x: c * (1 - np.asarray(x, float) ** 2) * np.exp(-np.asarray(x, float) ** 2 / 2) + 0j


FAMILIES = {
    "gaussian": gaussian,
    "chirp": chirp,
    "hermite": hermite,
    "bump": bump,
    "morlet": morlet,
}


def generate(kind: str, grid: tuple[float, float, int], **params) -> SampledSignal:
    """Sample one analytic family on ``grid = (x0, dx, n)``."""
    try:
        family = FAMILIES[kind]
    except KeyError:
        raise BadParameter(f"unknown signal family {kind!r}") from None
    try:
        func = family(**params)
    except TypeError as exc:
        raise BadParameter(str(exc)) from exc
    return SampledSignal.from_function(func, *grid)


def centered_grid(half_width: float, n: int) -> tuple[float, float, int]:
    dx = 2.0 * half_width / n
    return (-(n // 2) * dx, dx, n)


@dataclass(frozen=True, eq=False)
class MotherWavelet:
    """A mother wavelet: samples plus, when known, its closed form.

    Evaluation at off-grid points uses the closed form if there is one and
    linear interpolation of the samples otherwise.
    """

    signal: SampledSignal
    name: str = "custom"
    func: Callable | None = None
    center: float | None = None
    radius: float | None = None

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if self.func is not None:
            return np.asarray(self.func(u), dtype=complex)
        s = self.signal
        flat = u.ravel()
        out = (np.interp(flat, s.x, s.samples.real, left=0.0, right=0.0)
               + 1j * np.interp(flat, s.x, s.samples.imag, left=0.0, right=0.0))
        return out.reshape(u.shape)

    @classmethod
    def from_function(cls, func: Callable, name: str, half_width: float = 16.0,
                      n: int = 2048, **meta) -> "MotherWavelet":
        sig = SampledSignal.centered(func, half_width, n)
        return cls(sig, name, func, **meta)

    @classmethod
    def morlet(cls, omega0: float = 5.0, analytic: bool = False, **kw) -> "MotherWavelet":
        name = f"{'cmorlet' if analytic else 'morlet'}({omega0:g})"
        return cls.from_function(morlet(omega0, analytic), name, **kw)

    @classmethod
    def gaussian(cls, sigma: float = 1.0, **kw) -> "MotherWavelet":
        return cls.from_function(gaussian(sigma), f"gaussian({sigma:g})",
                                 center=0.0, radius=sigma / math.sqrt(2.0), **kw)

    @classmethod
    def mexican_hat(cls, **kw) -> "MotherWavelet":
        return cls.from_function(mexican_hat(), "mexhat", **kw)

    @classmethod
    def from_signal(cls, signal: SampledSignal, name: str = "custom") -> "MotherWavelet":
        return cls(signal, name)


def parse_wavelet(text: str, reader=None) -> MotherWavelet:
    """``morlet[:w0]``, ``cmorlet[:w0]``, ``mexhat``, ``gaussian[:sigma]`` or ``csv:PATH``."""
    kind, _, arg = text.partition(":")
    if kind == "morlet":
        return MotherWavelet.morlet(float(arg) if arg else 5.0)
    if kind == "cmorlet":
        return MotherWavelet.morlet(float(arg) if arg else 5.0, analytic=True)
    if kind == "mexhat":
        return MotherWavelet.mexican_hat()
    if kind == "gaussian":
        return MotherWavelet.gaussian(float(arg) if arg else 1.0)
    if kind == "csv":
        if reader is None:
            from .io import read_signal_csv as reader
        return MotherWavelet.from_signal(reader(arg), name=f"csv:{arg}")
    raise BadParameter(f"unknown wavelet {text!r}")
