"""The theorem suite behind ``saftw verify-all``.

Each check yields one ``CheckResult``. A check that raises is recorded as a
failed row carrying the exception name, so one broken identity never hides
the others.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .config import RunConfig
from .convolution import convolution_theorem_residual
from .errors import SaftError
from .io import fmt
from .localization import daughter_window_law, q_factor
from .nsawt import (admissibility_for, gated_constant, nsawt_direct, nsawt_invert,
                    nsawt_spectral, range_projection_residual, scalogram_norm)
from .numerics import FrequencyGrid, SampledSignal, ScaleGrid, norm
from .params import SaftMatrix, fourier, fractional, fresnel, random_unimodular
from .saft import guard_band, parseval_residual, saft_direct, saft_fast
from .signals import FAMILIES, bump, chirp, gaussian, hermite, parse_wavelet
from .uncertainty import (battery, generalized_saft, heisenberg_nsawt, heisenberg_saft,
                          matched_gaussian, pitt_saft)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    relation: str
    passed: bool
    note: str = ""

    def row(self) -> list[str]:
        return [self.name, fmt(self.value), self.relation, fmt(self.tolerance),
                "pass" if self.passed else "fail", self.note]


REPORT_HEADER = ["check", "value", "relation", "tolerance", "status", "note"]


def _judge(name: str, value: float, tol: float, relation: str, note: str = "") -> CheckResult:
    if relation == "<=":
        ok = value <= tol
    elif relation == ">=":
        ok = value >= tol
    elif relation == "<":
        ok = value < tol
    else:
        raise ValueError(relation)
    return CheckResult(name, float(value), float(tol), relation, bool(ok and math.isfinite(value)), note)


def _sig(cfg: RunConfig, func) -> SampledSignal:
    return SampledSignal.from_function(func, *cfg.grid)


def _test_signal(cfg: RunConfig) -> SampledSignal:
    kind = cfg.signal
    if kind == "bump":
        return _sig(cfg, bump())
    return _sig(cfg, FAMILIES[kind]())


def _native_band(f: SampledSignal, m: SaftMatrix) -> tuple[FrequencyGrid, np.ndarray]:
    F = saft_fast(f, m)
    lo, hi = guard_band(f, m)
    w = F.omega
    keep = np.nonzero((w >= lo) & (w <= hi))[0]
    return FrequencyGrid(float(w[keep[0]]), F.dw, keep.size), keep


def check_fourier_gaussian(cfg: RunConfig) -> Iterator[CheckResult]:
    f = _sig(cfg, gaussian())
    m = fourier()
    F = saft_fast(f, m)
    err_fast = np.max(np.abs(F.values - np.exp(-F.omega ** 2 / 2)))
    out = FrequencyGrid.span(-8.0, 8.0, 321)
    D = saft_direct(f, m, out)
    err_direct = np.max(np.abs(D.values - np.exp(-out.omega ** 2 / 2)))
    tol = cfg.tol("fourier_gaussian")
    yield _judge("fourier_gaussian_fast", err_fast, tol, "<=")
    yield _judge("fourier_gaussian_direct", err_direct, tol, "<=")


def check_fast_vs_direct(cfg: RunConfig) -> Iterator[CheckResult]:
    rng = np.random.default_rng(cfg.seed)
    sigs = [_sig(cfg, gaussian()), _sig(cfg, chirp(0.25, 0.5)), _sig(cfg, hermite(2))]
    worst = 0.0
    for _ in range(cfg.random_matrices):
        m = random_unimodular(rng)
        for f in sigs:
            grid, keep = _native_band(f, m)
            fast = saft_fast(f, m).values[keep]
            direct = saft_direct(f, m, grid).values
            worst = max(worst, np.max(np.abs(fast - direct)) / np.max(np.abs(direct)))
    yield _judge("fast_vs_direct", worst, cfg.tol("fast_vs_direct"), "<=",
                 f"{cfg.random_matrices} matrices x {len(sigs)} signals")


def _parseval_matrices(cfg: RunConfig) -> list[SaftMatrix]:
    return [fourier(), fresnel(0.5), fresnel(2.0), fractional(math.pi / 4),
            SaftMatrix(1.0, 2.0, 0.0, 1.0, 0.5, 0.25), cfg.matrix]


def check_parseval(cfg: RunConfig) -> Iterator[CheckResult]:
    sigs = [_sig(cfg, gaussian()), _sig(cfg, gaussian(0.3)), _sig(cfg, chirp(0.5)),
            _sig(cfg, hermite(0)), _sig(cfg, hermite(1)), _sig(cfg, hermite(2))]
    worst = 0.0
    for m in _parseval_matrices(cfg):
        for i, f in enumerate(sigs):
            for g in sigs[i:]:
                gap = parseval_residual(f, g, m, absolute=True) / (norm(f) * norm(g))
                worst = max(worst, gap)
    yield _judge("parseval", worst, cfg.tol("parseval"), "<=", "|<f,g> - <F,G>| / (||f|| ||g||)")


def check_convolution(cfg: RunConfig) -> Iterator[CheckResult]:
    f, g = _sig(cfg, gaussian()), _sig(cfg, gaussian(0.7, 0.5))
    for label, m in (("fourier", fourier()), ("fresnel", fresnel(2.0, 0.5, 0.25)), ("config", cfg.matrix)):
        yield _judge(f"convolution_{label}", convolution_theorem_residual(f, g, m),
                     cfg.tol("convolution"), "<=")


def check_spectral(cfg: RunConfig) -> Iterator[CheckResult]:
    f = _test_signal(cfg)
    psi = parse_wavelet(cfg.wavelet)
    sg = ScaleGrid(0.5, 2.0, 8)
    dx = f.dx
    tg = (-128 * dx, 8 * dx, 32)
    Ws = nsawt_spectral(f, psi, sg, cfg.matrix, t_grid=tg)
    Wd = nsawt_direct(f, psi, tg, sg, cfg.matrix)
    gap = np.max(np.abs(Ws.coeffs - Wd.coeffs)) / np.max(np.abs(Wd.coeffs))
    yield _judge("spectral_vs_direct", gap, cfg.tol("spectral_vs_direct"), "<=", "32 x 8 grid")


def _nsawt_context(cfg: RunConfig):
    f = _test_signal(cfg)
    psi = parse_wavelet(cfg.wavelet)
    rep = admissibility_for(psi, cfg.matrix, f)
    return f, psi, rep


def check_nsawt(cfg: RunConfig) -> Iterator[CheckResult]:
    try:
        f, psi, rep = _nsawt_context(cfg)
    except SaftError as exc:
        yield CheckResult("admissibility", math.nan, cfg.tol("admissibility_spread"), "<=", False,
                          f"{type(exc).__name__}: {exc}")
        return
    yield _judge("admissibility_spread", rep.relative_spread, cfg.tol("admissibility_spread"), "<=",
                 f"C = {fmt(rep.c_psi_mean)}")
    c = gated_constant(rep, cfg.tol("admissibility_spread"))
    tg = cfg.translations
    res = {}
    for label, sg in (("", cfg.scales), ("_wide", cfg.wide_scales)):
        W = nsawt_direct(f, psi, tg, sg, cfg.matrix)
        # energy form of Moyal's identity, reusing the scalogram
        moy = abs(scalogram_norm(W) ** 2 - c * norm(f) ** 2) / (c * norm(f) ** 2)
        rec = nsawt_invert(W, psi, f, c)
        inv = norm(rec.with_samples(rec.samples - f.samples)) / norm(f)
        res[label] = (moy, inv, W, sg)
    moy, inv, W, sg = res[""]
    yield _judge("moyal", moy, cfg.tol("moyal"), "<=")
    yield _judge("moyal_widening", res["_wide"][0] - moy, 0.0, "<", "wide minus default residual")
    yield _judge("inversion", inv, cfg.tol("inversion"), "<=")
    yield _judge("inversion_refinement", res["_wide"][1] - inv, 0.0, "<", "wide minus default error")
    yield _judge("range", range_projection_residual(W, psi, f, c), cfg.tol("range"), "<=")
    rng = np.random.default_rng(cfg.seed)
    noise = W.with_coeffs(rng.standard_normal(W.coeffs.shape) + 1j * rng.standard_normal(W.coeffs.shape))
    yield _judge("range_noise", range_projection_residual(noise, psi, f, c),
                 cfg.tol("range_noise"), ">=")
    g = _sig(cfg, gaussian())
    r = heisenberg_nsawt(g, psi, cfg.matrix, tg, cfg.scales, c)
    yield _judge("heisenberg_nsawt", r.ratio, 1 - cfg.tol("heisenberg_nsawt"), ">=",
                 f"ratio with C in place of sqrt(C): {fmt(r.extra['ratio_with_c'])}")


def check_windows(cfg: RunConfig) -> Iterator[CheckResult]:
    psi = parse_wavelet(cfg.wavelet)
    pred, meas = daughter_window_law(psi, 3.0, 2.0, cfg.matrix)
    yield _judge("window_center", abs(pred.center - meas.center), cfg.tol("window_law"), "<=")
    yield _judge("window_radius", abs(pred.radius - meas.radius), cfg.tol("window_law"), "<=")
    q = q_factor(parse_wavelet(cfg.q_wavelet), cfg.matrix, [0.5, 1.0, 2.0])
    spread = float((q.max() - q.min()) / abs(q.mean()))
    yield _judge("q_constancy", spread, cfg.tol("q_constancy"), "<=", f"Q = {fmt(q[1])}")


def check_uncertainty(cfg: RunConfig) -> Iterator[CheckResult]:
    reports = battery(cfg.grid)
    heis = [r.ratio for _, _, r in reports if r.name == "heisenberg"]
    yield _judge("heisenberg_min_ratio", min(heis), 1 - cfg.tol("heisenberg"), ">=")
    gens = [r.ratio for _, _, r in reports if r.name.startswith("generalized")]
    yield _judge("generalized_min_ratio", min(gens), 1 - cfg.tol("heisenberg"), ">=")
    mg = matched_gaussian(cfg.matrix, cfg.grid)
    yield _judge("matched_gaussian", abs(heisenberg_saft(mg, cfg.matrix).ratio - 1),
                 cfg.tol("matched_gaussian"), "<=")
    gap = 0.0
    p0 = 0.0
    for f in (_sig(cfg, gaussian()), _sig(cfg, hermite(1)), _sig(cfg, chirp(0.5))):
        gap = max(gap, abs(generalized_saft(f, cfg.matrix, 2).ratio - heisenberg_saft(f, cfg.matrix).ratio))
        p0 = max(p0, abs(pitt_saft(f, cfg.matrix, 0.0).ratio - 1))
    yield _judge("generalized_p2", gap, cfg.tol("generalized_p2"), "<=")
    yield _judge("pitt_alpha0", p0, cfg.tol("pitt_alpha0"), "<=")
    pitt = [r.ratio for _, _, r in reports if r.name.startswith("pitt") and r.extra["alpha"] > 0]
    yield _judge("pitt_min_ratio", min(pitt), 1 - cfg.tol("pitt"), ">=")


CHECKS: list[tuple[str, Callable[[RunConfig], Iterator[CheckResult]]]] = [
    ("fourier_gaussian", check_fourier_gaussian),
    ("fast_vs_direct", check_fast_vs_direct),
    ("parseval", check_parseval),
    ("convolution", check_convolution),
    ("spectral_vs_direct", check_spectral),
    ("nsawt", check_nsawt),
    ("windows", check_windows),
    ("uncertainty", check_uncertainty),
]


def run_checks(cfg: RunConfig) -> list[CheckResult]:
    out: list[CheckResult] = []
    for name, check in CHECKS:
        try:
            for res in check(cfg):
                out.append(res)
        except SaftError as exc:
            out.append(CheckResult(name, math.nan, math.nan, "", False, f"{type(exc).__name__}: {exc}"))
    return out
