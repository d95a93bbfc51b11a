"""The special affine wavelet transform (NSAWT).

Daughter wavelets

    psi_{t,z}(x) = (K_B / sqrt(z)) psi((x - t) / z) exp{i A x (t - x) / B}

are correlated against the signal, ``W(t, z) = int f(x) conj(psi_{t,z}(x)) dx``.
The direct path does exactly that by quadrature. The spectral path works
scale by scale in the SAFT domain, where

    SAFT[W(., z)](w) = sqrt(z) exp{i/(2B) (2 w z (Dp - Bq) - D w^2 z^2)}
                       F(w) Psi^(z w, z)

with ``Psi(x, z) = exp{i/(2B) (A x^2 (z^2 - 1) + 2 x p (z - 1))} conj(psi(-x))``,
and an inverse SAFT recovers the translation axis.

Scale integrals use the measure ``dt dz / z^2``; on a log grid a node gets
weight ``dlog / z``.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import czt

from .errors import (AdmissibilitySpreadTooLarge, BadParameter, DivergentAdmissibility,
                     GridMismatch, InterpolationOutOfBand, NonpositiveScale, UnderResolved)
from .numerics import (SAMPLES_PER_PERIOD, FrequencyGrid, SampledSignal, ScaleGrid, Spectrum,
                       check_resolution, effective_support, effective_xmax, inner_product,
                       next_pow2, norm, scale_measure_weights, thread_count, trapezoid_weights)
from .params import SaftMatrix, kernel_constant, validate
from .saft import _post_phase, isaft, saft_eval, saft_fast, saft_uniform
from .signals import MotherWavelet

SPECTRAL_FLOOR = 1e-13  # |F| below this fraction of its peak is treated as zero
DECADE_SHARE = 0.10
SPREAD_GATE = 0.05
_BLOCK = 1 << 21


@dataclass(frozen=True, eq=False)
class Scalogram:
    """Coefficients ``coeffs[i, j] = W(t0 + i dt, zeta_j)``."""

    t_grid: tuple[float, float, int]
    scale_grid: ScaleGrid
    coeffs: np.ndarray
    matrix: SaftMatrix
    wavelet_id: str = "custom"

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        t0, dt, nt = self.t_grid
        if c.shape != (int(nt), self.scale_grid.count):
            raise GridMismatch(f"coefficient shape {c.shape} does not match grids "
                               f"({nt}, {self.scale_grid.count})")
        if not np.all(np.isfinite(c)):
            raise BadParameter("scalogram coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "t_grid", (float(t0), float(dt), int(nt)))

    @property
    def t(self) -> np.ndarray:
        t0, dt, nt = self.t_grid
        return t0 + dt * np.arange(nt)

    @property
    def zeta(self) -> np.ndarray:
        return self.scale_grid.nodes

    def with_coeffs(self, coeffs) -> "Scalogram":
        return Scalogram(self.t_grid, self.scale_grid, coeffs, self.matrix, self.wavelet_id)

    def __add__(self, other: "Scalogram") -> "Scalogram":
        _require_same_layout(self, other)
        return self.with_coeffs(self.coeffs + other.coeffs)

    def measure_weights(self) -> np.ndarray:
        """Quadrature weights of ``dt dz / z^2`` on the grid, shape ``(Nt, Nz)``."""
        t0, dt, nt = self.t_grid
        wt = trapezoid_weights(nt, dt) if nt > 1 else np.array([dt])
        return np.outer(wt, scale_measure_weights(self.scale_grid))


@dataclass(frozen=True)
class AdmissibilityReport:
    omega_grid: np.ndarray
    c_psi_per_omega: np.ndarray
    c_psi_mean: float
    relative_spread: float
    scale_grid: ScaleGrid | None = field(default=None, compare=False)


def _require_same_layout(a: Scalogram, b: Scalogram) -> None:
    if (a.coeffs.shape != b.coeffs.shape or not np.allclose(a.t_grid, b.t_grid, rtol=1e-12, atol=0)
            or a.scale_grid != b.scale_grid):
        raise GridMismatch("scalograms live on different grids")


def _as_grid(grid) -> tuple[float, float, int]:
    if isinstance(grid, SampledSignal):
        return grid.grid
    x0, dx, n = grid
    return (float(x0), float(dx), int(n))


def _check_scale(zeta: float) -> None:
    if not zeta > 0:
        raise NonpositiveScale(f"scale must be positive, got {zeta!r}")


def _require_b(m: SaftMatrix) -> None:
    validate(m)
    if m.B == 0:
        from .errors import DegenerateB
        raise DegenerateB()


def _daughter_block(psi: MotherWavelet, t: np.ndarray, zeta: float, m: SaftMatrix,
                    x: np.ndarray) -> np.ndarray:
    """Daughters for every ``t`` as rows, sampled at ``x``."""
    kb = kernel_constant(m).value.real
    tt = t[:, None]
    block = psi((x[None, :] - tt) / zeta) * (kb / math.sqrt(zeta))
    if m.A != 0:
        block = block * np.exp(1j * m.A * x[None, :] * (tt - x[None, :]) / m.B)
    return block


def daughter_wavelet(psi: MotherWavelet, t: float, zeta: float, m: SaftMatrix, grid) -> SampledSignal:
    """Sample ``psi_{t,zeta}`` on ``grid`` (a signal or ``(x0, dx, n)``)."""
    _check_scale(zeta)
    _require_b(m)
    x0, dx, n = _as_grid(grid)
    x = x0 + dx * np.arange(n)
    return SampledSignal(x0, dx, _daughter_block(psi, np.array([float(t)]), zeta, m, x)[0])


def capital_psi(psi: MotherWavelet, zeta: float, m: SaftMatrix, grid) -> SampledSignal:
    """The chirped reflection ``Psi(x, zeta)`` sampled on ``grid``."""
    _check_scale(zeta)
    _require_b(m)
    x0, dx, n = _as_grid(grid)
    x = x0 + dx * np.arange(n)
    A, B, C, D, p, q = m.as_tuple()
    phase = np.exp(1j * (A * x * x * (zeta * zeta - 1) + 2 * x * p * (zeta - 1)) / (2 * B))
    return SampledSignal(x0, dx, phase * np.conj(psi(-x)))


def _t_nodes(t_grid) -> np.ndarray:
    t0, dt, nt = _as_grid(t_grid)
    return t0 + dt * np.arange(nt)


def _map_rows(func, zetas: np.ndarray, threads: int | None) -> list:
    n = threads if threads is not None else thread_count()
    if n <= 1 or zetas.size <= 1:
        return [func(z) for z in zetas]
    with ThreadPoolExecutor(max_workers=min(n, zetas.size)) as pool:
        return list(pool.map(func, zetas))


def _check_direct_chirp(f: SampledSignal, t: np.ndarray, m: SaftMatrix) -> None:
    # the daughter chirp exp{iAx(t-x)/B} oscillates at |A (t - 2x) / B|
    if m.A == 0 or not np.any(f.samples):
        return
    lo, hi = effective_support(f)
    reach = max(np.max(np.abs(t - 2 * lo)), np.max(np.abs(t - 2 * hi)))
    check_resolution(abs(m.A / m.B) * reach, f.dx, "daughter chirp")


def nsawt_direct(f: SampledSignal, psi: MotherWavelet, t_grid, scale_grid: ScaleGrid,
                 m: SaftMatrix, threads: int | None = None) -> Scalogram:
    """Scalogram by quadrature of ``<f, psi_{t,zeta}>`` at every node.

    Scales are processed independently, optionally on a thread pool sized
    by ``SAFTW_THREADS``.
    """
    _require_b(m)
    t_grid = _as_grid(t_grid)
    t = _t_nodes(t_grid)
    _check_direct_chirp(f, t, m)
    x = f.x
    wf = trapezoid_weights(f.n, f.dx) * f.samples
    step = max(1, _BLOCK // f.n)

    def row(zeta: float) -> np.ndarray:
        out = np.empty(t.size, dtype=complex)
        for s in range(0, t.size, step):
            out[s:s + step] = np.conj(_daughter_block(psi, t[s:s + step], zeta, m, x)) @ wf
        return out

    zetas = scale_grid.nodes
    if not np.any(f.samples):
        coeffs = np.zeros((t.size, zetas.size), complex)
    else:
        coeffs = np.column_stack(_map_rows(row, zetas, threads))
    return Scalogram(t_grid, scale_grid, coeffs, m, psi.name)


def _select_rows(native: tuple[float, float, int], t_grid) -> np.ndarray:
    n0, ndt, nn = native
    t0, dt, nt = _as_grid(t_grid)
    start = (t0 - n0) / ndt
    stride = dt / ndt
    i0, k = int(round(start)), int(round(stride))
    if abs(start - i0) > 1e-9 * max(1.0, abs(start)) or abs(stride - k) > 1e-9 * stride or k < 1:
        raise GridMismatch("requested translations are not on the spectral path's native grid")
    idx = i0 + k * np.arange(nt)
    if idx[0] < 0 or idx[-1] >= nn:
        raise GridMismatch("requested translations fall outside the spectral path's native grid")
    return idx


def nsawt_spectral(f: SampledSignal, psi: MotherWavelet, scale_grid: ScaleGrid, m: SaftMatrix,
                   t_grid=None, pad_to: int | None = None, threads: int | None = None) -> Scalogram:
    """Scalogram through the SAFT-domain factorisation, one scale at a time.

    ``F`` comes from the fast path on the signal padded to at least twice
    its length. ``Psi^(zeta w, zeta)`` is the exact discrete-time sum of
    ``capital_psi`` at the scaled arguments (band-limited interpolation of
    its fast-path spectrum). The inverse fast path then returns each scale
    on the centred native grid ``(k - n/2) dx``; ``t_grid``, if given, must
    be a sub-lattice of it. That grid is periodic, so the scalogram rows must
    decay inside it (raise ``pad_to`` for signals far from the origin).
    """
    _require_b(m)
    A, B, C, D, p, q = m.as_tuple()
    n = next_pow2(max(2 * f.n, pad_to or 0))
    F = saft_fast(f, m, pad_to=n)
    native = (-(n // 2) * f.dx, f.dx, n)
    idx = None if t_grid is None else _select_rows(native, t_grid)
    out_grid = native if t_grid is None else _as_grid(t_grid)

    w = F.omega
    mag = np.abs(F.values)
    peak = mag.max()
    zetas = scale_grid.nodes
    if peak == 0:
        return Scalogram(out_grid, scale_grid, np.zeros((out_grid[2], zetas.size), complex), m, psi.name)
    live = mag > SPECTRAL_FLOOR * peak
    wl = w[live]
    nyquist = math.pi / f.dx
    psi_xmax = effective_xmax(psi.signal)
    psi_grid = (-(n // 2) * f.dx, f.dx, n)

    def row(zeta: float) -> np.ndarray:
        nu = zeta * wl / B
        if np.max(np.abs(nu)) > nyquist:
            raise InterpolationOutOfBand(
                f"scale {zeta:g} needs the wavelet spectrum at |w/B| = {np.max(np.abs(nu)):.4g}, "
                f"beyond the grid's band {nyquist:.4g}")
        check_resolution((abs(A) * zeta * zeta * psi_xmax + abs(p) * zeta) / abs(B), f.dx,
                         "wavelet pre-chirp")
        cap = capital_psi(psi, zeta, m, psi_grid)
        zg = FrequencyGrid(zeta * F.w0, zeta * F.dw, n)
        hat = saft_uniform(cap, m, zg).values
        pref = np.sqrt(zeta) * np.exp(1j * (2 * w * zeta * (D * p - B * q) - D * w * w * zeta * zeta) / (2 * B))
        prod = np.where(live, pref * F.values * hat, 0.0)
        rec = isaft(Spectrum(F.w0, F.dw, prod), m, path="fast").samples
        return rec if idx is None else rec[idx]

    coeffs = np.column_stack(_map_rows(row, zetas, threads))
    return Scalogram(out_grid, scale_grid, coeffs, m, psi.name)


# -- admissibility -----------------------------------------------------------

def _mother_band(psi: MotherWavelet) -> float:
    """Frequency beyond which the mother's spectrum is below 1e-10 of its peak."""
    s = psi.signal
    spec = np.abs(np.fft.fftshift(np.fft.fft(s.samples)))
    freqs = np.fft.fftshift(np.fft.fftfreq(s.n, s.dx)) * 2 * math.pi
    keep = spec > 1e-10 * spec.max()
    return float(np.max(np.abs(freqs[keep])))


def _mother_support(psi: MotherWavelet) -> tuple[float, float]:
    return effective_support(psi.signal)


def _psi_hat_scaled(psi: MotherWavelet, zeta: float, m: SaftMatrix, omega: np.ndarray,
                    max_samples: int = 1 << 20, method: str = "auto") -> np.ndarray:
    """``Psi^(zeta w, zeta)`` by quadrature, in whichever domain is cheaper.

    The integrand is ``conj(psi(-x)) exp{i (a x^2 - k x)}`` with
    ``a = A zeta^2 / (2B)`` and ``k = (zeta w - p zeta) / B``. For large
    ``|a|`` the chirp is better integrated against the mother's spectrum
    ``G`` through Parseval:

        int g e^{i(a x^2 - k x)} dx
            = sqrt(pi/|a|) e^{i sgn(a) pi/4} / (2 pi) int G(s) e^{-i (s - k)^2 / (4a)} ds
    """
    A, B, C, D, p, q = m.as_tuple()
    lo, hi = _mother_support(psi)
    xmax = max(abs(lo), abs(hi))
    band = _mother_band(psi)
    nu = zeta * omega
    a = A * zeta * zeta / (2 * B)
    k = (nu - p * zeta) / B
    kmax = float(np.max(np.abs(k)))
    cycle = 2 * math.pi / SAMPLES_PER_PERIOD
    bound_x = 2 * abs(a) * xmax + kmax + band
    n_x = (hi - lo) * bound_x / cycle
    n_s = math.inf
    if a != 0:
        bound_s = (band + kmax) / (2 * abs(a)) + xmax
        n_s = 2 * band * bound_s / cycle
    kb = kernel_constant(m).value.real
    if method == "space" or (method == "auto" and n_x <= n_s):
        dx = min(psi.signal.dx, 2 * math.pi / (SAMPLES_PER_PERIOD * bound_x))
        count = int(math.ceil((hi - lo) / dx)) + 1
        if count > max_samples:
            raise UnderResolved(f"scale {zeta:g} needs {count} samples to resolve the wavelet integrand")
        # Psi(x) involves psi(-x): cover the reflected support
        cap = capital_psi(psi, zeta, m, (-hi, dx, count))
        return saft_eval(cap, m, nu, check=False)
    ds = 2 * math.pi / (SAMPLES_PER_PERIOD * bound_s)
    count = int(math.ceil(2 * band / ds)) + 1
    if count > max_samples:
        raise UnderResolved(f"scale {zeta:g} needs {count} spectral samples")
    ds = 2 * band / (count - 1)
    sig = psi.signal
    g = np.conj(psi(-sig.x))
    s_nodes = -band + ds * np.arange(count)
    G = sig.dx * czt(g, count, w=np.exp(-1j * sig.dx * ds), a=np.exp(-1j * sig.dx * band))
    G = G * np.exp(-1j * sig.x0 * s_nodes)
    G = G * trapezoid_weights(count, ds)
    out = np.empty(k.size, complex)
    step = max(1, _BLOCK // count)
    for st in range(0, k.size, step):
        kk = k[st:st + step, None]
        out[st:st + step] = np.exp(-1j * (s_nodes[None, :] - kk) ** 2 / (4 * a)) @ G
    out *= math.sqrt(math.pi / abs(a)) * np.exp(1j * math.copysign(math.pi / 4, a)) / (2 * math.pi)
    return kb * _post_phase(m, nu) * out


def admissibility(psi: MotherWavelet, m: SaftMatrix, omega_grid, scale_grid: ScaleGrid,
                  check_decades: bool = True) -> AdmissibilityReport:
    """``C(w) = int |Psi^(zeta w, zeta)|^2 / zeta dzeta`` for each ``w`` in ``omega_grid``.

    The integral runs on the log grid (``dzeta / zeta = dlog``). If the first
    or last decade of scales carries more than 10% of the total at any ``w``
    the integral is declared divergent.
    """
    _require_b(m)
    omega = np.atleast_1d(np.asarray(omega_grid.omega if isinstance(omega_grid, FrequencyGrid)
                                     else omega_grid, dtype=float))
    zetas = scale_grid.nodes
    decades = math.log10(scale_grid.zeta_max / scale_grid.zeta_min)
    if check_decades and decades < 3 - 1e-9:
        raise BadParameter(f"admissibility check needs a scale grid spanning 3 decades, got {decades:.3g}")
    terms = np.empty((zetas.size, omega.size))
    for j, z in enumerate(zetas):
        terms[j] = np.abs(_psi_hat_scaled(psi, z, m, omega)) ** 2
    wts = np.full(zetas.size, scale_grid.dlog)
    wts[0] = wts[-1] = 0.5 * scale_grid.dlog
    contrib = wts[:, None] * terms
    c = contrib.sum(axis=0)
    if check_decades:
        first = contrib[zetas < scale_grid.zeta_min * 10].sum(axis=0)
        last = contrib[zetas > scale_grid.zeta_max / 10].sum(axis=0)
        with np.errstate(invalid="ignore", divide="ignore"):
            share = np.maximum(first, last) / c
        bad = np.nonzero((c > 0) & (share > DECADE_SHARE))[0]
        if bad.size:
            k = bad[np.argmax(share[bad])]
            end = "small" if first[k] >= last[k] else "large"
            exc = DivergentAdmissibility(
                f"admissibility integral does not converge at {end} scales: an end decade carries "
                f"{share[k]:.1%} of the total at w = {omega[k]:.4g}")
            exc.end = end
            raise exc
    mean = float(c.mean())
    spread = float((c.max() - c.min()) / mean) if mean > 0 else math.inf
    return AdmissibilityReport(omega, c, mean, spread, scale_grid)


def signal_band(m: SaftMatrix, *signals: SampledSignal, rel: float = 1e-3, hole: float = 0.1,
                max_nodes: int = 32) -> np.ndarray:
    """Frequencies where the signals carry energy, for evaluating ``C(w)``.

    Nodes within ``hole`` (relative) of ``w = p`` are dropped, since the
    integrand there degenerates for every zero-mean wavelet.
    """
    dens = None
    grid = None
    for s in signals:
        if not np.any(s.samples):
            continue
        F = saft_fast(s, m)
        if grid is None:
            grid = F.omega
            dens = np.abs(F.values) ** 2
        else:
            G = saft_eval(s, m, grid, check=False)
            dens = dens + np.abs(G) ** 2
    if dens is None:
        raise BadParameter("all signals are zero; no frequency band to evaluate")
    w = grid[dens >= rel * dens.max()]
    d = np.abs(w - m.p)
    w = w[d >= hole * d.max()]
    if w.size > max_nodes:
        w = w[np.unique(np.linspace(0, w.size - 1, max_nodes).round().astype(int))]
    return w


def default_admissibility_scales(psi: MotherWavelet, m: SaftMatrix, omega: np.ndarray,
                                 per_decade: int = 40, margin: float = 10.0) -> ScaleGrid:
    """A log grid wide enough to contain the whole admissibility integrand.

    The mother's spectral energy (offset from ``p``) is located between its
    1e-4 and 1 - 1e-4 quantiles; dividing by the extreme ``|w - p|`` of the
    band and adding a factor ``margin`` at each end gives the range.
    """
    Fpsi = saft_fast(capital_psi(psi, 1.0, m, psi.signal), m)
    r = np.abs(Fpsi.omega - m.p)
    e = np.abs(Fpsi.values) ** 2
    order = np.argsort(r)
    cum = np.cumsum(e[order])
    cum /= cum[-1]
    r_lo = max(float(r[order][np.searchsorted(cum, 1e-4)]), Fpsi.dw)
    r_hi = float(r[order][min(np.searchsorted(cum, 1 - 1e-4), r.size - 1)])
    d = np.abs(np.asarray(omega) - m.p)
    d = d[d > 0]
    if d.size == 0:
        raise BadParameter("frequency band collapses onto w = p")
    zmin = r_lo / d.max() / margin
    zmax = r_hi / d.min() * margin
    if math.log10(zmax / zmin) < 3:
        mid = math.sqrt(zmin * zmax)
        zmin, zmax = mid / 10 ** 1.5, mid * 10 ** 1.5
    count = int(math.ceil(per_decade * math.log10(zmax / zmin))) + 1
    return ScaleGrid(zmin, zmax, count)


def admissibility_for(psi: MotherWavelet, m: SaftMatrix, *signals: SampledSignal,
                      scale_grid: ScaleGrid | None = None, omega=None) -> AdmissibilityReport:
    """Admissibility on the signals' band and a scale grid wide enough for it.

    With a chirp (``A != 0``) the large-scale tail decays only like
    ``zeta^-2`` in ``dlog``; the default grid is then extended a decade at a
    time, up to three times, before divergence is reported. ``omega``
    replaces the band taken from the signals.
    """
    omega = signal_band(m, *signals) if omega is None else np.atleast_1d(np.asarray(omega, float))
    if scale_grid is not None:
        return admissibility(psi, m, omega, scale_grid)
    grid = default_admissibility_scales(psi, m, omega)
    for attempt in range(4):
        try:
            return admissibility(psi, m, omega, grid)
        except DivergentAdmissibility as exc:
            if m.A == 0 or getattr(exc, "end", "") != "large" or attempt == 3:
                raise
            per = (grid.count - 1) / math.log10(grid.zeta_max / grid.zeta_min)
            zmax = grid.zeta_max * 10
            grid = ScaleGrid(grid.zeta_min, zmax,
                             int(round(per * math.log10(zmax / grid.zeta_min))) + 1)


def gated_constant(report: AdmissibilityReport, gate: float = SPREAD_GATE) -> float:
    """Mean ``C`` once the spread across frequencies is within ``gate``."""
    if not report.relative_spread <= gate:
        raise AdmissibilitySpreadTooLarge(
            f"admissibility constant varies by {report.relative_spread:.3g} across the band "
            f"(gate {gate:g}); no single constant exists for this wavelet and matrix")
    return report.c_psi_mean


def _resolve_constant(c_psi, psi, m, signals) -> float:
    if c_psi is None:
        return gated_constant(admissibility_for(psi, m, *signals))
    if isinstance(c_psi, AdmissibilityReport):
        return gated_constant(c_psi)
    return float(c_psi)


# -- Moyal, synthesis and range ------------------------------------------------

def scalogram_inner(W: Scalogram, V: Scalogram) -> complex:
    """``int int W conj(V) dt dzeta / zeta^2`` on the shared grid."""
    _require_same_layout(W, V)
    return complex(np.sum(W.measure_weights() * W.coeffs * np.conj(V.coeffs)))


def scalogram_norm(W: Scalogram) -> float:
    return math.sqrt(max(scalogram_inner(W, W).real, 0.0))


def moyal_terms(f: SampledSignal, g: SampledSignal, psi: MotherWavelet, m: SaftMatrix,
                t_grid, scale_grid: ScaleGrid, c_psi=None) -> tuple[complex, complex, float]:
    """Both sides of Moyal's identity: ``(LHS, C <f, g>, C)``."""
    if not np.any(f.samples) or not np.any(g.samples):
        c = float(c_psi.c_psi_mean if isinstance(c_psi, AdmissibilityReport) else (c_psi or 0.0))
        return 0j, 0j, c
    c = _resolve_constant(c_psi, psi, m, (f, g))
    Wf = nsawt_direct(f, psi, t_grid, scale_grid, m)
    Wg = Wf if g is f else nsawt_direct(g, psi, t_grid, scale_grid, m)
    return scalogram_inner(Wf, Wg), c * inner_product(f, g), c


def moyal_residual(f: SampledSignal, g: SampledSignal, psi: MotherWavelet, m: SaftMatrix,
                   t_grid, scale_grid: ScaleGrid, c_psi=None) -> float:
    """``|LHS - C <f, g>| / (C ||f|| ||g||)``; 0 when either signal vanishes.

    ``c_psi`` may be a number, an ``AdmissibilityReport`` (spread-gated) or
    ``None`` to compute and gate it on the signals' band.
    """
    lhs, rhs, c = moyal_terms(f, g, psi, m, t_grid, scale_grid, c_psi)
    denom = c * norm(f) * norm(g)
    if denom == 0:
        return abs(lhs - rhs)
    return abs(lhs - rhs) / denom


def synthesize(W: Scalogram, psi: MotherWavelet, grid) -> SampledSignal:
    """``int int W(t, z) psi_{t,z}(x) dt dz / z^2`` sampled on ``grid``."""
    x0, dx, n = _as_grid(grid)
    x = x0 + dx * np.arange(n)
    t = W.t
    wts = W.measure_weights()
    acc = np.zeros(n, complex)
    step = max(1, _BLOCK // n)
    for j, z in enumerate(W.zeta):
        col = wts[:, j] * W.coeffs[:, j]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        for s in range(0, t.size, step):
            c = col[s:s + step]
            if not np.any(c):
                continue
            acc += c @ _daughter_block(psi, t[s:s + step], z, W.matrix, x)
    return SampledSignal(x0, dx, acc)


def nsawt_invert(W: Scalogram, psi: MotherWavelet, grid, c_psi) -> SampledSignal:
    """Reconstruct a signal on ``grid`` from its scalogram, divided by ``C``.

    ``c_psi`` is a number or a spread-gated ``AdmissibilityReport``.
    """
    c = _resolve_constant(c_psi, psi, W.matrix, ())
    if not c > 0:
        raise BadParameter("admissibility constant must be positive")
    s = synthesize(W, psi, grid)
    return s.with_samples(s.samples / c)


def _kernel_grid(psi: MotherWavelet, pairs, m: SaftMatrix) -> tuple[float, float, int]:
    lo, hi = effective_support(psi.signal)
    span_lo = min(t + z * lo for t, z in pairs)
    span_hi = max(t + z * hi for t, z in pairs)
    zmin = min(z for _, z in pairs)
    dx = psi.signal.dx * min(1.0, zmin)
    if m.A != 0:
        reach = max(abs(t) + 2 * max(abs(span_lo), abs(span_hi)) for t, _ in pairs)
        dx = min(dx, 2 * math.pi / (SAMPLES_PER_PERIOD * abs(m.A / m.B) * reach))
    n = int(math.ceil((span_hi - span_lo) / dx)) + 1
    return (span_lo, dx, n)


def reproducing_kernel(t: float, zeta: float, t2: float, zeta2: float, psi: MotherWavelet,
                       m: SaftMatrix, grid=None) -> complex:
    """``<psi_{t,zeta}, psi_{t2,zeta2}>`` by quadrature."""
    _check_scale(zeta)
    _check_scale(zeta2)
    if grid is None:
        grid = _kernel_grid(psi, [(t, zeta), (t2, zeta2)], m)
    a = daughter_wavelet(psi, t, zeta, m, grid)
    b = daughter_wavelet(psi, t2, zeta2, m, grid)
    return inner_product(a, b)


def range_projection(F: Scalogram, psi: MotherWavelet, grid, c_psi) -> Scalogram:
    """Kernel projection ``(1/C) int int F K dt dz / z^2`` of a field.

    Evaluated as analysis of the synthesis, which equals the kernel
    integral on the same grids.
    """
    c = _resolve_constant(c_psi, psi, F.matrix, ())
    s = synthesize(F, psi, grid)
    s = s.with_samples(s.samples / c)
    return nsawt_direct(s, psi, F.t_grid, F.scale_grid, F.matrix)


def range_projection_residual(F: Scalogram, psi: MotherWavelet, grid, c_psi) -> float:
    """Relative weighted L2 distance between a field and its kernel projection."""
    total = scalogram_norm(F)
    if total == 0:
        return 0.0
    P = range_projection(F, psi, grid, c_psi)
    return scalogram_norm(F.with_coeffs(F.coeffs - P.coeffs)) / total
