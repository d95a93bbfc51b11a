"""Augmented SAFT parameter matrices.

A matrix ``(A, B, C, D : p, q)`` holds the unimodular 2x2 block
``[[A, B], [C, D]]`` and the offset vector ``(p, q)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, DegenerateB, NonUnimodular, SingularAngle

UNIMODULAR_TOL = 1e-12


@dataclass(frozen=True)
class SaftMatrix:
    A: float
    B: float
    C: float
    D: float
    p: float = 0.0
    q: float = 0.0

    @property
    def det(self) -> float:
        return self.A * self.D - self.B * self.C

    @property
    def is_degenerate(self) -> bool:
        return self.B == 0

    def as_tuple(self) -> tuple[float, ...]:
        return (self.A, self.B, self.C, self.D, self.p, self.q)

    def __str__(self) -> str:
        return ",".join(repr(float(v)) for v in self.as_tuple())

    @classmethod
    def parse(cls, text: str) -> "SaftMatrix":
        """Parse ``"A,B,C,D,p,q"`` (offsets may be omitted)."""
        try:
            vals = [float(v) for v in text.split(",")]
        except ValueError as exc:
            raise BadParameter(f"cannot parse matrix literal {text!r}") from exc
        if len(vals) == 4:
            vals += [0.0, 0.0]
        if len(vals) != 6:
            raise BadParameter(f"matrix literal needs 4 or 6 numbers, got {len(vals)}")
        return cls(*vals)


@dataclass(frozen=True)
class ValidationResult:
    determinant: float
    degenerate: bool

    @property
    def branch(self) -> str:
        return "B=0" if self.degenerate else "B!=0"


@dataclass(frozen=True)
class KernelConstant:
    value: complex


def validate(m: SaftMatrix) -> ValidationResult:
    det = m.det
    if not abs(det - 1.0) <= UNIMODULAR_TOL:
        raise NonUnimodular(det)
    return ValidationResult(determinant=det, degenerate=m.is_degenerate)


def kernel_constant(m: SaftMatrix | float) -> KernelConstant:
    """Normalisation ``K_B = 1/sqrt(2 pi |B|)``.

    Using ``|B|`` keeps the transform with the inverse matrix (which has
    ``-B``) an exact inverse of the forward transform.
    """
    B = m.B if isinstance(m, SaftMatrix) else float(m)
    if B == 0:
        raise DegenerateB()
    return KernelConstant(1.0 / math.sqrt(2.0 * math.pi * abs(B)) + 0j)


def inverse_matrix(m: SaftMatrix) -> SaftMatrix:
    validate(m)
    A, B, C, D, p, q = m.as_tuple()
    return SaftMatrix(D, -B, -C, A, B * q - D * p, C * p - A * q)


def chirp_modulation(m: SaftMatrix, x):
    """``exp(i A x^2 / (2B))``; scalar in, scalar out, array in, array out."""
    if m.B == 0:
        raise DegenerateB()
    x = np.asarray(x, dtype=float)
    out = np.exp(1j * m.A * x * x / (2.0 * m.B))
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class Preset:
    """A named reduction of the SAFT; angles stay symbolic until materialised."""

    kind: str
    theta: float | None = None
    B: float | None = None
    p: float = 0.0
    q: float = 0.0
    block: tuple[float, float, float, float] | None = None

    def materialize(self) -> SaftMatrix:
        if self.kind == "fourier":
            return SaftMatrix(0.0, 1.0, -1.0, 0.0, 0.0, 0.0)
        if self.kind == "fractional":
            s = math.sin(self.theta)
            if abs(s) < 1e-12:
                raise SingularAngle(f"fractional angle {self.theta!r} is a multiple of pi")
            c = math.cos(self.theta)
            # exact zeros where the angle lands on quarter turns
            if abs(c) < 1e-15:
                c = 0.0
            return SaftMatrix(c, s, -s, c, self.p, self.q)
        if self.kind == "fresnel":
            if not self.B:
                raise DegenerateB("fresnel preset requires B != 0")
            return SaftMatrix(1.0, float(self.B), 0.0, 1.0, self.p, self.q)
        if self.kind == "lct":
            A, B, C, D = self.block
            return SaftMatrix(A, B, C, D, 0.0, 0.0)
        raise BadParameter(f"unknown preset {self.kind!r}")


def reduction_presets(name: str, theta: float | None = None, B: float | None = None,
                      p: float = 0.0, q: float = 0.0, block=None) -> SaftMatrix:
    """Materialise one of ``fourier``, ``lct``, ``fractional``, ``fresnel``."""
    if name == "fractional" and theta is None:
        raise BadParameter("fractional preset needs theta")
    if name == "fresnel" and B is None:
        raise BadParameter("fresnel preset needs B")
    if name == "lct" and block is None:
        raise BadParameter("lct preset needs an (A, B, C, D) block")
    m = Preset(name, theta=theta, B=B, p=p, q=q,
               block=tuple(block) if block is not None else None).materialize()
    validate(m)
    return m


def fourier() -> SaftMatrix:
    return reduction_presets("fourier")


def fresnel(B: float, p: float = 0.0, q: float = 0.0) -> SaftMatrix:
    return reduction_presets("fresnel", B=B, p=p, q=q)


def fractional(theta: float, p: float = 0.0, q: float = 0.0) -> SaftMatrix:
    return reduction_presets("fractional", theta=theta, p=p, q=q)


def parse_matrix(text: str) -> SaftMatrix:
    """Parse a CLI/config matrix: a literal ``A,B,C,D,p,q`` or a preset.

    Presets: ``fourier``, ``fresnel:B[,p,q]``, ``fractional:theta[,p,q]``.
    """
    text = text.strip()
    if text == "fourier":
        return fourier()
    if ":" in text:
        kind, _, rest = text.partition(":")
        args = [float(v) for v in rest.split(",") if v.strip()]
        if kind == "fresnel":
            return fresnel(*args)
        if kind == "fractional":
            return fractional(*args)
        raise BadParameter(f"unknown preset {kind!r}")
    return SaftMatrix.parse(text)


def random_unimodular(rng: np.random.Generator, b_range=(0.5, 2.0), offsets=True) -> SaftMatrix:
    """Draw a unimodular matrix with ``B`` uniform in ``b_range``."""
    B = rng.uniform(*b_range)
    A = rng.uniform(-1.0, 1.0)
    D = rng.uniform(-1.0, 1.0)
    C = (A * D - 1.0) / B
    p, q = (rng.uniform(-1.0, 1.0, 2) if offsets else (0.0, 0.0))
    return SaftMatrix(A, B, C, D, float(p), float(q))
