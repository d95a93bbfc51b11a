"""Run configuration: a flat ``key = value`` file with bracketed sections."""
from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field, replace

from .errors import BadParameter
from .numerics import ScaleGrid
from .params import SaftMatrix, fourier, parse_matrix, validate

DEFAULT_TOLERANCES = {
    "fourier_gaussian": 1e-8,
    "fast_vs_direct": 1e-7,
    "parseval": 1e-5,
    "convolution": 1e-4,
    "spectral_vs_direct": 1e-4,
    "admissibility_spread": 5e-2,
    "moyal": 5e-2,
    "inversion": 5e-2,
    "range": 8e-2,
    "range_noise": 0.5,
    "window_law": 1e-6,
    "q_constancy": 1e-2,
    "heisenberg": 1e-3,
    "matched_gaussian": 1e-3,
    "generalized_p2": 1e-12,
    "pitt_alpha0": 1e-5,
    "pitt": 1e-3,
    "heisenberg_nsawt": 5e-2,
}


def parse_triple(text: str, what: str = "grid") -> tuple[float, float, int]:
    """``a:b:n`` with integer ``n``."""
    try:
        a, b, n = text.split(":")
        return (float(a), float(b), int(n))
    except ValueError as exc:
        raise BadParameter(f"cannot parse {what} {text!r}; expected a:b:count") from exc


@dataclass(frozen=True)
class RunConfig:
    matrix: SaftMatrix = field(default_factory=fourier)
    path: str = "direct"
    grid: tuple[float, float, int] = (-16.0, 1.0 / 32, 1024)
    wavelet: str = "morlet:5"
    q_wavelet: str = "cmorlet:5"
    signal: str = "bump"
    scales: ScaleGrid = ScaleGrid(0.25, 8.0, 64)
    wide_scales: ScaleGrid = ScaleGrid(0.1, 16.0, 128)
    translations: tuple[float, float, int] = (-48.0, 0.125, 769)
    seed: int = 0
    random_matrices: int = 10
    report: str = "verify_report.csv"
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def tol(self, name: str) -> float:
        return self.tolerances[name]


_KEYS = {
    ("transform", "matrix"), ("transform", "path"),
    ("grid", "x0"), ("grid", "dx"), ("grid", "n"),
    ("nsawt", "wavelet"), ("nsawt", "q_wavelet"), ("nsawt", "signal"), ("nsawt", "scales"),
    ("nsawt", "wide_scales"), ("nsawt", "translations"),
    ("verify", "seed"), ("verify", "random_matrices"),
    ("output", "report"),
}


def _check_wavelet_file(spec: str, base: str) -> str:
    if spec.startswith("csv:"):
        p = spec[4:]
        if not os.path.isabs(p):
            p = os.path.join(base, p)
        if not os.path.exists(p):
            raise BadParameter(f"wavelet file {p!r} does not exist")
        return "csv:" + p
    return spec


def load_config(path: str | None = None, matrix: str | None = None) -> RunConfig:
    """Read ``path`` (optional) over the defaults; ``matrix`` overrides the file."""
    cfg = RunConfig()
    updates: dict = {}
    if path is not None:
        if not os.path.exists(path):
            raise BadParameter(f"config file {path!r} does not exist")
        cp = configparser.ConfigParser(interpolation=None)
        try:
            cp.read(path)
        except configparser.Error as exc:
            raise BadParameter(f"cannot parse config {path!r}: {exc}") from exc
        base = os.path.dirname(os.path.abspath(path))
        tols = dict(cfg.tolerances)
        for sec in cp.sections():
            for key, val in cp.items(sec):
                if sec == "tolerances":
                    if key not in tols:
                        raise BadParameter(f"unknown tolerance {key!r}")
                    tols[key] = float(val)
                    continue
                if (sec, key) not in _KEYS:
                    raise BadParameter(f"unknown config key [{sec}] {key}")
        updates["tolerances"] = tols
        g = lambda s, k: cp.get(s, k, fallback=None)  # noqa: E731
        if g("transform", "matrix"):
            updates["matrix"] = parse_matrix(g("transform", "matrix"))
        if g("transform", "path"):
            updates["path"] = g("transform", "path")
        if any(g("grid", k) for k in ("x0", "dx", "n")):
            x0, dx, n = cfg.grid
            updates["grid"] = (float(g("grid", "x0") or x0), float(g("grid", "dx") or dx),
                               int(g("grid", "n") or n))
        for k in ("wavelet", "q_wavelet"):
            if g("nsawt", k):
                updates[k] = _check_wavelet_file(g("nsawt", k), base)
        if g("nsawt", "signal"):
            updates["signal"] = g("nsawt", "signal")
        for k in ("scales", "wide_scales"):
            if g("nsawt", k):
                updates[k] = ScaleGrid.parse(g("nsawt", k))
        if g("nsawt", "translations"):
            updates["translations"] = parse_triple(g("nsawt", "translations"), "translations")
        if g("verify", "seed"):
            updates["seed"] = int(g("verify", "seed"))
        if g("verify", "random_matrices"):
            updates["random_matrices"] = int(g("verify", "random_matrices"))
        if g("output", "report"):
            updates["report"] = g("output", "report")
    if matrix is not None:
        updates["matrix"] = parse_matrix(matrix)
    cfg = replace(cfg, **updates)
    validate(cfg.matrix)
    if cfg.path not in ("direct", "fast", "spectral"):
        raise BadParameter(f"unknown path {cfg.path!r}")
    if not cfg.grid[1] > 0 or cfg.grid[2] < 2:
        raise BadParameter("grid needs dx > 0 and at least two samples")
    return cfg
