"""Shared value types for the defect-backflow eigenvalue problem.

Units are fixed to hbar = m = 1 throughout.  Lengths are measured in the
length unit of the averaging function, momenta in its inverse, and the
backflow constant beta carries no further conversion anywhere.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# Assembly / solver tolerances shared across modules.
HERMITICITY_TOL = 1e-10   # |M_ij - conj(M_ji)| allowed in a stored matrix
DIAG_IMAG_TOL = 1e-12     # |Im M_ii| allowed before the diagonal is realified
RESIDUAL_TOL = 1e-8       # ||M v - beta v|| / ||v|| for an accepted eigenpair


class ConfigurationError(ValueError):
    """Invalid defect, test-function or grid configuration."""


class NumericalError(RuntimeError):
    """A numerical routine could not meet its accuracy contract."""


class DefectKind(str, Enum):
    FREE = "free"
    DELTA = "delta"
    JUMP = "jump"


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class DefectSpec:
    """Point interaction at the origin.

    kind = FREE carries no parameters; DELTA is the delta potential of
    strength lambda; JUMP is the purely transmitting discontinuous defect of
    strength alpha, optionally with the probability-current fixing term
    (conserved=True).  Zero strength is rejected rather than aliased to FREE
    so the strength -> 0 limit stays a tested kernel property.
    """

    kind: DefectKind
    strength: float | None = None
    conserved: bool = False

    def __post_init__(self):
        kind = DefectKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is DefectKind.FREE:
            if self.strength is not None:
                raise ConfigurationError("the free case takes no strength parameter")
        else:
            s = self.strength
            if s is None or not math.isfinite(s) or s == 0.0:
                raise ConfigurationError(
                    f"{kind.value} defect needs a finite nonzero strength; "
                    "request the interaction-free case as kind=free"
                )
            object.__setattr__(self, "strength", float(s))
        if self.conserved and kind is not DefectKind.JUMP:
            raise ConfigurationError("conserved flag only applies to the jump defect")

    @staticmethod
    def free() -> "DefectSpec":
        return DefectSpec(DefectKind.FREE)

    @staticmethod
    def delta(strength: float) -> "DefectSpec":
        return DefectSpec(DefectKind.DELTA, strength)

    @staticmethod
    def jump(strength: float, conserved: bool = False) -> "DefectSpec":
        return DefectSpec(DefectKind.JUMP, strength, conserved)


@dataclass(frozen=True)
class GaussianTest:
    """Normalized Gaussian averaging function of an extended detector.

    f(x) = exp(-(x-x0)^2 / 2 sigma^2) / (sigma sqrt(2 pi)), truncated to
    [x0 - c sigma, x0 + c sigma] with c = support_halfwidth_factor, so the
    mass lost to truncation is at most erfc(c / sqrt(2)).
    """

    x0: float
    sigma: float
    support_halfwidth_factor: float = 8.0

    def __post_init__(self):
        if not math.isfinite(self.x0):
            raise ConfigurationError("x0 must be finite")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ConfigurationError("sigma must be positive")
        if not (math.isfinite(self.support_halfwidth_factor) and self.support_halfwidth_factor > 0):
            raise ConfigurationError("support_halfwidth_factor must be positive")

    @property
    def support(self) -> tuple[float, float]:
        half = self.support_halfwidth_factor * self.sigma
        return (self.x0 - half, self.x0 + half)


@dataclass(frozen=True)
class GridSpec:
    """Midpoint discretization of the momentum interval [0, p_cutoff]."""

    n: int
    p_cutoff: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigurationError("n must be a positive integer")
        if not (math.isfinite(self.p_cutoff) and self.p_cutoff > 0):
            raise ConfigurationError("p_cutoff must be positive and finite")

    @property
    def step(self) -> float:
        return self.p_cutoff / self.n


def make_grid(spec: GridSpec) -> np.ndarray:
    """Midpoint momentum nodes k_i = (i + 1/2) (p_cutoff / n), all > 0."""
    return (np.arange(spec.n) + 0.5) * spec.step


@dataclass(frozen=True, eq=False)
class HermitianKernelMatrix:
    """Discretized current operator with the configuration that produced it."""

    entries: np.ndarray = field(repr=False)
    meta: tuple  # (DefectSpec, GaussianTest, GridSpec)

    def __post_init__(self):
        m = self.entries
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigurationError("entries must be a square matrix")
        dev = float(np.max(np.abs(m - m.conj().T)))
        if dev > HERMITICITY_TOL:
            raise ConfigurationError(f"matrix is not Hermitian: max deviation {dev:.3e}")
        diag_imag = float(np.max(np.abs(m.diagonal().imag)))
        if diag_imag > DIAG_IMAG_TOL:
            raise ConfigurationError(f"diagonal is not real: max imag {diag_imag:.3e}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Lowest eigenvalue beta and its unit-norm eigenvector on the grid nodes."""

    beta: float
    eigenvector: np.ndarray = field(repr=False)
    residual_norm: float

    def __post_init__(self):
        if self.residual_norm > RESIDUAL_TOL:
            raise NumericalError(
                f"eigenpair residual {self.residual_norm:.3e} exceeds {RESIDUAL_TOL:.1e}"
            )
        norm = float(np.linalg.norm(self.eigenvector))
        if abs(norm - 1.0) > 1e-12:
            raise NumericalError(f"eigenvector norm {norm!r} is not 1")
