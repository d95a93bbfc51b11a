"""Uniform grids, sampled signals and the trapezoidal quadrature shared by
every transform in the package."""
from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import zeta

from .errors import (EdgeDecayWarning, GridMismatch, NegativeExponent,
                     NonpositiveScale, UnderResolved, BadParameter)

EDGE_DECAY = 1e-10
SAMPLES_PER_PERIOD = 8


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Complex samples ``samples[k]`` at ``x0 + k*dx``."""

    x0: float
    dx: float
    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size < 2:
            raise BadParameter("a signal needs at least two samples")
        if not self.dx > 0:
            raise BadParameter(f"grid spacing must be positive, got {self.dx!r}")
        if not np.all(np.isfinite(s)):
            raise BadParameter("signal samples must be finite")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "dx", float(self.dx))

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.n)

    @property
    def grid(self) -> tuple[float, float, int]:
        return (self.x0, self.dx, self.n)

    def with_samples(self, samples) -> "SampledSignal":
        return SampledSignal(self.x0, self.dx, samples)

    @classmethod
    def from_function(cls, func, x0: float, dx: float, n: int) -> "SampledSignal":
        x = x0 + dx * np.arange(n)
        return cls(x0, dx, np.asarray(func(x), dtype=complex))

    @classmethod
    def centered(cls, func, half_width: float, n: int) -> "SampledSignal":
        """Sample ``func`` on ``x_k = (k - n/2) dx`` covering ``[-L, L)``."""
        dx = 2.0 * half_width / n
        return cls.from_function(func, -(n // 2) * dx, dx, n)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """SAFT-domain samples ``values[k]`` at ``w0 + k*dw``."""

    w0: float
    dw: float
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if not self.dw > 0:
            raise BadParameter(f"frequency spacing must be positive, got {self.dw!r}")
        if not np.all(np.isfinite(v)):
            raise BadParameter("spectrum values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "w0", float(self.w0))
        object.__setattr__(self, "dw", float(self.dw))

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def omega(self) -> np.ndarray:
        return self.w0 + self.dw * np.arange(self.n)

    def as_signal(self) -> SampledSignal:
        return SampledSignal(self.w0, self.dw, self.values)


@dataclass(frozen=True)
class FrequencyGrid:
    w0: float
    dw: float
    count: int

    @property
    def omega(self) -> np.ndarray:
        return self.w0 + self.dw * np.arange(self.count)

    @classmethod
    def span(cls, lo: float, hi: float, count: int) -> "FrequencyGrid":
        return cls(lo, (hi - lo) / (count - 1), count)


@dataclass(frozen=True)
class ScaleGrid:
    """Logarithmically spaced scales ``zeta_j = zeta_min * r**j``."""

    zeta_min: float
    zeta_max: float
    count: int
    dlog_override: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.zeta_min > 0:
            raise NonpositiveScale(f"zeta_min must be positive, got {self.zeta_min!r}")
        if self.zeta_max < self.zeta_min:
            raise BadParameter("zeta_max must not be below zeta_min")
        if self.count < 1:
            raise BadParameter("scale grid needs at least one node")
        if self.count == 1 and self.dlog_override is None and self.zeta_max != self.zeta_min:
            raise BadParameter("single-node grid spans no range")

    @property
    def dlog(self) -> float:
        if self.dlog_override is not None:
            return self.dlog_override
        if self.count == 1:
            raise BadParameter("single-node grid needs an explicit log spacing")
        return math.log(self.zeta_max / self.zeta_min) / (self.count - 1)

    @property
    def nodes(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.zeta_min])
        return self.zeta_min * np.exp(self.dlog * np.arange(self.count))

    @classmethod
    def parse(cls, text: str) -> "ScaleGrid":
        """Parse ``zmin:zmax:count``."""
        try:
            lo, hi, n = text.split(":")
            return cls(float(lo), float(hi), int(n))
        except ValueError as exc:
            raise BadParameter(f"cannot parse scale grid {text!r}") from exc


def trapezoid_weights(n: int, dx: float) -> np.ndarray:
    w = np.full(n, dx)
    w[0] = w[-1] = 0.5 * dx
    return w


def same_grid(f: SampledSignal, g: SampledSignal, rtol: float = 1e-12) -> bool:
    return (f.n == g.n and abs(f.dx - g.dx) <= rtol * f.dx
            and abs(f.x0 - g.x0) <= rtol * max(f.dx, abs(f.x0)))


def require_same_grid(f: SampledSignal, g: SampledSignal) -> None:
    if not same_grid(f, g):
        raise GridMismatch(f"grids differ: {f.grid} vs {g.grid}")


def inner_product(f: SampledSignal, g: SampledSignal) -> complex:
    """Trapezoidal ``<f, g> = int f conj(g) dx``."""
    require_same_grid(f, g)
    w = trapezoid_weights(f.n, f.dx)
    return complex(np.sum(w * f.samples * np.conj(g.samples)))


def norm(f: SampledSignal) -> float:
    w = trapezoid_weights(f.n, f.dx)
    return math.sqrt(float(np.sum(w * np.abs(f.samples) ** 2)))


def integrate(values, dx: float) -> complex | float:
    values = np.asarray(values)
    return np.sum(trapezoid_weights(values.shape[0], dx) * values)


def power_integral(values, x0: float, dx: float, s: float) -> float:
    """``int |x|^s v(x) dx`` for smooth ``v`` and ``s > -1``.

    When ``x = 0`` is a grid node the trapezoid sum skips it and adds the
    Navot correction ``-2 zeta(-s) dx^(1+s) v(0)``, which keeps the error at
    ``O(dx^(s+3))`` despite the cusp or singularity of ``|x|^s``. For even
    integer ``s`` the correction vanishes and the rule is the trapezoid.
    Without a node at 0 the plain trapezoid rule is used.
    """
    if not s > -1:
        raise BadParameter(f"|x|^s is not integrable at 0 for s = {s!r}")
    v = np.asarray(values)
    x = x0 + dx * np.arange(v.shape[0])
    k = int(round(-x0 / dx))
    on_node = 0 <= k < v.shape[0] and abs(x[k]) <= 1e-9 * dx
    ax = np.abs(x)
    if on_node:
        ax[k] = 1.0  # placeholder, weight removed below
    wts = trapezoid_weights(v.shape[0], dx) * ax ** s
    if not on_node:
        return float(np.sum(wts * v).real) if np.isrealobj(v) else complex(np.sum(wts * v))
    wts[k] = 0.0
    total = np.sum(wts * v) - 2.0 * float(zeta(-s)) * dx ** (1.0 + s) * v[k]
    return float(total.real) if np.isrealobj(v) else complex(total)


def p_moment(f: SampledSignal, p: float, center: float = 0.0, mode: str = "energy") -> float:
    """Weighted moment of a sampled signal.

    ``mode="energy"``: int |x - c|^p |f|^2 dx;
    ``mode="power"``:  int |x - c|^p |f|^p dx;
    ``mode="signed"``: int (x - c)^p |f|^2 dx for integer ``p``.

    The absolute-value modes integrate the cusp of ``|x - c|^p`` with
    ``power_integral``.
    """
    if not p > 0:
        raise NegativeExponent(f"moment exponent must be positive, got {p!r}")
    a = np.abs(f.samples)
    if mode == "energy":
        return power_integral(a ** 2, f.x0 - center, f.dx, p)
    if mode == "power":
        return power_integral(a ** p, f.x0 - center, f.dx, p)
    if mode == "signed":
        if int(p) != p:
            raise BadParameter("signed moments need an integer order")
        return float(integrate((f.x - center) ** int(p) * a ** 2, f.dx))
    raise BadParameter(f"unknown moment mode {mode!r}")


def scale_measure_weights(g: ScaleGrid) -> np.ndarray:
    """Weights for ``int F(zeta) dzeta / zeta**2`` on the log grid.

    Since ``dzeta = zeta dln(zeta)``, each node gets ``dlog / zeta_j``.
    """
    return g.dlog / g.nodes


def effective_support(f: SampledSignal, rel: float = EDGE_DECAY) -> tuple[float, float]:
    """Smallest interval holding every sample above ``rel * max|f|``."""
    a = np.abs(f.samples)
    peak = a.max()
    if peak == 0:
        return (0.0, 0.0)
    idx = np.nonzero(a > rel * peak)[0]
    x = f.x
    return (float(x[idx[0]]), float(x[idx[-1]]))


def effective_xmax(f: SampledSignal, rel: float = EDGE_DECAY) -> float:
    lo, hi = effective_support(f, rel)
    return max(abs(lo), abs(hi))


def edge_decay_ok(f: SampledSignal, rel: float = EDGE_DECAY) -> bool:
    a = np.abs(f.samples)
    peak = a.max()
    if peak == 0:
        return True
    return max(a[0], a[-1]) <= rel * peak


def check_edge_decay(f: SampledSignal, what: str = "signal", rel: float = EDGE_DECAY) -> bool:
    ok = edge_decay_ok(f, rel)
    if not ok:
        warnings.warn(f"{what} does not decay below {rel:g} of its peak at the grid edges",
                      EdgeDecayWarning, stacklevel=3)
    return ok


def check_resolution(freq_bound: float, dx: float, what: str = "kernel") -> None:
    """Require ``SAMPLES_PER_PERIOD`` samples per period of ``freq_bound``."""
    if freq_bound <= 0:
        return
    per_period = 2.0 * math.pi / (freq_bound * dx)
    if per_period < SAMPLES_PER_PERIOD:
        raise UnderResolved(
            f"{what} oscillates at up to {freq_bound:.6g} rad/unit: "
            f"{per_period:.3g} samples per period < {SAMPLES_PER_PERIOD}")


def next_pow2(n: int) -> int:
    return 1 << max(1, (int(n) - 1).bit_length())


def thread_count() -> int:
    """Worker count from ``SAFTW_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("SAFTW_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n
