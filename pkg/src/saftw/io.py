"""CSV exchange formats and the scalogram heatmap.

Signals are ``x,re,im``, spectra ``omega,re,im`` and scalograms the long
form ``t,zeta,re,im``. Numbers are written with 17 significant digits so a
round trip through text is exact.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .errors import BadParameter, GridMismatch
from .nsawt import Scalogram
from .numerics import SampledSignal, ScaleGrid, Spectrum
from .params import SaftMatrix

GRID_JITTER = 1e-9


def fmt(v: float) -> str:
    return f"{float(v):.17g}"


def _write_rows(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _read_table(path, header: list[str]) -> np.ndarray:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise BadParameter(f"{path}: empty file")
    got = [h.strip() for h in rows[0]]
    if got != header:
        raise BadParameter(f"{path}: expected header {','.join(header)}, got {','.join(got)}")
    body = [r for r in rows[1:] if r and any(c.strip() for c in r)]
    try:
        data = np.array([[float(c) for c in r] for r in body], dtype=float)
    except ValueError as exc:
        raise BadParameter(f"{path}: non-numeric entry ({exc})") from exc
    if data.ndim != 2 or data.shape[1] != len(header):
        raise BadParameter(f"{path}: every row needs {len(header)} columns")
    return data


def uniform_axis(values: np.ndarray, what: str = "x") -> tuple[float, float]:
    """Start and spacing of a strictly uniform axis (1e-9 relative jitter)."""
    if values.size < 2:
        raise GridMismatch(f"{what} axis needs at least two points")
    step = (values[-1] - values[0]) / (values.size - 1)
    if not step > 0:
        raise GridMismatch(f"{what} axis must increase")
    if np.max(np.abs(np.diff(values) - step)) > GRID_JITTER * step:
        raise GridMismatch(f"{what} axis is not uniform to {GRID_JITTER:g} relative spacing")
    return float(values[0]), float(step)


def write_signal_csv(path, f: SampledSignal) -> None:
    _write_rows(path, ["x", "re", "im"],
                ([fmt(x), fmt(v.real), fmt(v.imag)] for x, v in zip(f.x, f.samples)))


def read_signal_csv(path) -> SampledSignal:
    d = _read_table(path, ["x", "re", "im"])
    x0, dx = uniform_axis(d[:, 0], "x")
    return SampledSignal(x0, dx, d[:, 1] + 1j * d[:, 2])


def write_spectrum_csv(path, F: Spectrum) -> None:
    _write_rows(path, ["omega", "re", "im"],
                ([fmt(w), fmt(v.real), fmt(v.imag)] for w, v in zip(F.omega, F.values)))


def read_spectrum_csv(path) -> Spectrum:
    d = _read_table(path, ["omega", "re", "im"])
    w0, dw = uniform_axis(d[:, 0], "omega")
    return Spectrum(w0, dw, d[:, 1] + 1j * d[:, 2])


def write_scalogram_csv(path, W: Scalogram) -> None:
    t, z, c = W.t, W.zeta, W.coeffs
    rows = ([fmt(t[i]), fmt(z[j]), fmt(c[i, j].real), fmt(c[i, j].imag)]
            for j in range(z.size) for i in range(t.size))
    _write_rows(path, ["t", "zeta", "re", "im"], rows)


def read_scalogram_csv(path, m: SaftMatrix, wavelet_id: str = "custom") -> Scalogram:
    """Rebuild a scalogram; the matrix is not stored in the file."""
    d = _read_table(path, ["t", "zeta", "re", "im"])
    ts = np.unique(d[:, 0])
    zs = np.unique(d[:, 1])
    if d.shape[0] != ts.size * zs.size:
        raise GridMismatch(f"{path}: rows do not form a full t x zeta grid")
    t0, dt = uniform_axis(ts, "t")
    if zs.size > 1:
        uniform_axis(np.log(zs), "log zeta")
        grid = ScaleGrid(float(zs[0]), float(zs[-1]), zs.size)
    else:
        grid = ScaleGrid(float(zs[0]), float(zs[0]), 1, dlog_override=1.0)
    ti = np.searchsorted(ts, d[:, 0])
    zi = np.searchsorted(zs, d[:, 1])
    coeffs = np.zeros((ts.size, zs.size), complex)
    coeffs[ti, zi] = d[:, 2] + 1j * d[:, 3]
    return Scalogram((t0, dt, ts.size), grid, coeffs, m, wavelet_id)


def gray_ramp(steps: int = 256) -> list[str]:
    """Grays evenly spaced in CIE lightness, white (0) to black (peak)."""
    out = []
    for k in range(steps):
        L = 100.0 * (1 - k / (steps - 1))
        y = ((L + 16) / 116) ** 3 if L > 8 else L / 903.3
        srgb = 12.92 * y if y <= 0.0031308 else 1.055 * y ** (1 / 2.4) - 0.055
        g = int(round(255 * min(max(srgb, 0.0), 1.0)))
        out.append(f"#{g:02x}{g:02x}{g:02x}")
    return out


def heatmap_svg(W: Scalogram, max_columns: int = 256, cell: int = 3) -> str:
    """|W| as an SVG raster: translation across, log scale upward."""
    mag = np.abs(W.coeffs)
    nt, nz = mag.shape
    stride = max(1, math.ceil(nt / max_columns))
    cols = [mag[i:i + stride].max(axis=0) for i in range(0, nt, stride)]
    mag = np.array(cols)
    peak = mag.max()
    levels = np.zeros_like(mag, dtype=int) if peak == 0 else np.rint(255 * mag / peak).astype(int)
    ramp = gray_ramp()
    left, bottom = 60, 40
    width, height = mag.shape[0] * cell, nz * cell
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width + left + 10}" '
             f'height="{height + bottom + 10}" font-family="sans-serif" font-size="10">']
    for i in range(mag.shape[0]):
        for j in range(nz):
            y = 10 + (nz - 1 - j) * cell
            parts.append(f'<rect x="{left + i * cell}" y="{y}" width="{cell}" height="{cell}" '
                         f'fill="{ramp[levels[i, j]]}"/>')
    z = W.zeta
    lz = np.log10(z)
    ticks = sorted({math.floor(lz[0]), *range(math.ceil(lz[0]), math.floor(lz[-1]) + 1)})
    span = (lz[-1] - lz[0]) or 1.0
    for k in ticks:
        if not lz[0] - 1e-12 <= k <= lz[-1] + 1e-12:
            continue
        y = 10 + height - (k - lz[0]) / span * height
        parts.append(f'<text x="{left - 4}" y="{y:.2f}" text-anchor="end">1e{k}</text>')
    t = W.t
    parts.append(f'<text x="{left}" y="{height + 24}">t = {t[0]:.6g}</text>')
    parts.append(f'<text x="{left + width}" y="{height + 24}" text-anchor="end">t = {t[-1]:.6g}</text>')
    parts.append(f'<text x="12" y="{10 + height / 2:.2f}" transform="rotate(-90 12 {10 + height / 2:.2f})">'
                 f'zeta (log)</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_heatmap_svg(path, W: Scalogram, **kw) -> None:
    Path(path).write_text(heatmap_svg(W, **kw))
