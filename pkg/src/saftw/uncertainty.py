"""Uncertainty inequalities in the SAFT and NSAWT domains, checked by quadrature.

Every check returns an ``InequalityReport`` whose ``ratio`` is the dominant
side over the bounded side, so a valid inequality gives ``ratio >= 1``.
SAFT-domain moments use the fast path's native grid, which contains
``w = 0`` and needs no interpolation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma

from .errors import AlphaOutOfRange, DegenerateB, EdgeDecayWarning, ExponentOutOfRange, ZeroNorm
from .numerics import SampledSignal, ScaleGrid, Spectrum, edge_decay_ok, norm, p_moment, power_integral
from .nsawt import _resolve_constant, nsawt_direct
from .params import SaftMatrix, fourier, fractional, fresnel, validate
from .saft import saft_fast
from .signals import MotherWavelet, chirp, gaussian, hermite

HEISENBERG_TOL = 1e-3
NSAWT_TOL = 5e-2


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    ratio: float
    passed: bool
    tolerance: float
    extra: dict = field(default_factory=dict, compare=False)


def _report(name: str, big: float, small: float, tol: float, lhs: float, rhs: float,
            **extra) -> InequalityReport:
    ratio = big / small
    return InequalityReport(name, lhs, rhs, ratio, bool(ratio >= 1 - tol), tol, extra)


def _spectrum(f: SampledSignal, m: SaftMatrix) -> Spectrum:
    validate(m)
    if m.B == 0:
        raise DegenerateB()
    if norm(f) == 0:
        raise ZeroNorm("uncertainty checks need a nonzero signal")
    F = saft_fast(f, m, pad_to=2 * f.n)
    if not edge_decay_ok(F.as_signal()):
        warnings.warn("SAFT spectrum has not decayed at the edges of its grid; "
                      "frequency moments are truncated", EdgeDecayWarning, stacklevel=3)
    return F


def _omega_moment(F: Spectrum, p: float, power: float) -> float:
    return power_integral(np.abs(F.values) ** power, F.w0, F.dw, p)


def heisenberg_saft(f: SampledSignal, m: SaftMatrix, tol: float = HEISENBERG_TOL) -> InequalityReport:
    """``sqrt(int x^2 |f|^2) sqrt(int w^2 |F|^2) >= |B|/2 ||f||^2``."""
    return _generalized(f, m, 2.0, tol, "heisenberg")


def _generalized(f: SampledSignal, m: SaftMatrix, p: float, tol: float, name: str) -> InequalityReport:
    F = _spectrum(f, m)
    lhs = p_moment(f, p, mode="power") ** (1 / p) * _omega_moment(F, p, p) ** (1 / p)
    rhs = abs(m.B) ** ((p + 2) / (2 * p)) / 2 * norm(f) ** 2
    return _report(name, lhs, rhs, tol, lhs, rhs, p=p)


def generalized_saft(f: SampledSignal, m: SaftMatrix, p: float,
                     tol: float = HEISENBERG_TOL) -> InequalityReport:
    """``(int |x|^p |f|^p)^{1/p} (int |w|^p |F|^p)^{1/p} >= |B|^{(p+2)/(2p)}/2 ||f||^2``."""
    if not 1 <= p <= 2:
        raise ExponentOutOfRange(f"exponent must lie in [1, 2], got {p!r}")
    return _generalized(f, m, float(p), tol, f"generalized(p={p:g})")


def pitt_constant(alpha: float) -> float:
    return math.pi ** alpha * (gamma((1 - alpha) / 4) / gamma((1 + alpha) / 4)) ** 2


def pitt_saft(f: SampledSignal, m: SaftMatrix, alpha: float, tol: float = HEISENBERG_TOL) -> InequalityReport:
    """``|B|^alpha int |w|^-alpha |F|^2 <= C_alpha int |x|^alpha |f|^2``.

    The singularity at ``w = 0`` (a node of the native grid) is handled by
    the corrected rule of ``power_integral``.
    """
    if not 0 <= alpha < 1:
        raise AlphaOutOfRange(f"alpha must lie in [0, 1), got {alpha!r}")
    F = _spectrum(f, m)
    dens = np.abs(F.values) ** 2
    spec = power_integral(dens, F.w0, F.dw, -alpha)
    lhs = abs(m.B) ** alpha * spec
    if alpha == 0:
        xmom = norm(f) ** 2
    else:
        xmom = p_moment(f, alpha, mode="energy")
    rhs = pitt_constant(alpha) * xmom
    return _report(f"pitt(alpha={alpha:g})", rhs, lhs, tol, lhs, rhs, alpha=alpha,
                   c_alpha=pitt_constant(alpha))


def heisenberg_nsawt(f: SampledSignal, psi: MotherWavelet, m: SaftMatrix, t_grid,
                     scale_grid: ScaleGrid, c_psi=None, tol: float = NSAWT_TOL) -> InequalityReport:
    """``sqrt(int int t^2 |W|^2 dt dz/z^2) sqrt(int w^2 |F|^2) >= sqrt(C) |B|/2 ||f||^2``.

    ``extra["ratio_with_c"]`` repeats the comparison with ``C`` in place of
    ``sqrt(C)``.
    """
    F = _spectrum(f, m)
    c = _resolve_constant(c_psi, psi, m, (f,))
    W = nsawt_direct(f, psi, t_grid, scale_grid, m)
    t = W.t
    tmom = float(np.sum(W.measure_weights() * (t[:, None] ** 2) * np.abs(W.coeffs) ** 2))
    lhs = math.sqrt(tmom) * math.sqrt(_omega_moment(F, 2, 2))
    energy = norm(f) ** 2
    rhs = math.sqrt(c) * abs(m.B) / 2 * energy
    rhs_c = c * abs(m.B) / 2 * energy
    return _report("heisenberg_nsawt", lhs, rhs, tol, lhs, rhs, c_psi=c,
                   ratio_with_c=lhs / rhs_c)


def matched_gaussian(m: SaftMatrix, grid: tuple[float, float, int]) -> SampledSignal:
    """``exp(-x^2 / (2|B|)) exp{-i (A x^2 + 2 p x) / (2B)}``, the Heisenberg extremiser.

    The conjugate chirp cancels the kernel's pre-chirp, leaving a centred
    Gaussian whose spectrum is centred at ``w = 0``.
    """
    validate(m)
    if m.B == 0:
        raise DegenerateB()
    A, B = m.A, m.B
    return SampledSignal.from_function(
        lambda x: np.exp(-x * x / (2 * abs(B)) - 1j * (A * x * x + 2 * m.p * x) / (2 * B)), *grid)


BATTERY_GRID = (-16.0, 1.0 / 32, 1024)


def battery_signals(grid=BATTERY_GRID) -> dict[str, SampledSignal]:
    funcs = {
        "gaussian": gaussian(),
        "narrow_gaussian": gaussian(0.3),
        "chirped_gaussian": chirp(0.5, 0.0),
        "hermite0": hermite(0),
        "hermite1": hermite(1),
        "hermite2": hermite(2),
    }
    return {k: SampledSignal.from_function(v, *grid) for k, v in funcs.items()}


def battery_matrices() -> dict[str, SaftMatrix]:
    return {
        "fourier": fourier(),
        "fresnel(0.5)": fresnel(0.5),
        "fresnel(1)": fresnel(1.0),
        "fresnel(2)": fresnel(2.0),
        "fractional(pi/4)": fractional(math.pi / 4),
        "offset": SaftMatrix(1.0, 2.0, 0.0, 1.0, 0.5, 0.25),
    }


def battery(grid=BATTERY_GRID, exponents=(1.0, 1.5, 2.0),
            alphas=(0.0, 0.25, 0.5, 0.75)) -> list[tuple[str, str, InequalityReport]]:
    """Every SAFT-domain check over the standard signals and matrices.

    Returns ``(signal, matrix, report)`` triples, including the matched
    Gaussian of each matrix.
    """
    out = []
    for mname, m in battery_matrices().items():
        sigs = dict(battery_signals(grid))
        sigs["matched_gaussian"] = matched_gaussian(m, grid)
        for sname, f in sigs.items():
            out.append((sname, mname, heisenberg_saft(f, m)))
            for p in exponents:
                out.append((sname, mname, generalized_saft(f, m, p)))
            for a in alphas:
                out.append((sname, mname, pitt_saft(f, m, a)))
    return out
