"""Closed-form stationary scattering data for the point defects.

Each state is a right-incoming plane wave at momentum k > 0; u_k denotes
the branch on the left half-line, v_k the branch on the right, and the
dispersion is omega = k^2 / 2 (hbar = m = 1).

    free :  u_k = v_k = e^{ikx}
    delta:  u_k = e^{ikx} + R e^{-ikx},  v_k = T e^{ikx},
            T = ik / (ik - lambda), R = lambda / (ik - lambda)
    jump :  u_k = e^{ikx},  v_k = T e^{ikx},  T = (k + i alpha)/(k - i alpha)

The jump wavefunction is discontinuous at the defect and carries no value
at x = 0.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

from .core import ConfigurationError, DefectKind, DefectSpec, Side


@dataclass(frozen=True)
class ScatteringCoefficients:
    t: complex
    r: complex
    k: float


@dataclass(frozen=True)
class DefectBoundState:
    """Exponential defect mode: |profile| = e^{-decay_rate |x|} on one side,
    identically zero on the other, with phase e^{i energy_phase_rate t}."""

    decay_rate: float
    side: Side
    energy_phase_rate: float


def _require_momentum(k: float) -> None:
    if not k > 0:
        raise ValueError(f"momentum must be positive, got {k!r}")


def coefficients(defect: DefectSpec, k: float) -> ScatteringCoefficients:
    """Transmission and reflection amplitudes T(k), R(k)."""
    _require_momentum(k)
    if defect.kind is DefectKind.FREE:
        return ScatteringCoefficients(1.0 + 0j, 0j, k)
    if defect.kind is DefectKind.DELTA:
        denom = 1j * k - defect.strength
        return ScatteringCoefficients(1j * k / denom, defect.strength / denom, k)
    alpha = defect.strength
    return ScatteringCoefficients((k + 1j * alpha) / (k - 1j * alpha), 0j, k)


def state_left(defect: DefectSpec, k: float, x: float) -> complex:
    """Left branch u_k evaluated at x (analytic continuation for any x)."""
    _require_momentum(k)
    if defect.kind is DefectKind.DELTA:
        r = coefficients(defect, k).r
        return cmath.exp(1j * k * x) + r * cmath.exp(-1j * k * x)
    return cmath.exp(1j * k * x)


def state_right(defect: DefectSpec, k: float, x: float) -> complex:
    """Right branch v_k = T(k) e^{ikx}."""
    t = coefficients(defect, k).t
    return t * cmath.exp(1j * k * x)


def dstate_left(defect: DefectSpec, k: float, x: float) -> complex:
    _require_momentum(k)
    if defect.kind is DefectKind.DELTA:
        r = coefficients(defect, k).r
        return 1j * k * (cmath.exp(1j * k * x) - r * cmath.exp(-1j * k * x))
    return 1j * k * cmath.exp(1j * k * x)


def dstate_right(defect: DefectSpec, k: float, x: float) -> complex:
    return 1j * k * state_right(defect, k, x)


def scattering_state(defect: DefectSpec, k: float, x: float) -> complex:
    """u_k(x) for x < 0, v_k(x) for x > 0.

    At x = 0 the delta and free states are continuous and the common value
    is returned; the jump state has no value there.
    """
    _require_momentum(k)
    if x < 0:
        return state_left(defect, k, x)
    if x > 0:
        return state_right(defect, k, x)
    if defect.kind is DefectKind.JUMP:
        raise ValueError("value at the defect is undefined for the jump state")
    return state_left(defect, k, 0.0)


def check_sewing(defect: DefectSpec, k: float) -> float:
    """Max absolute residual of the defect sewing conditions at x = 0.

    Evaluated on the stationary state with time derivatives replaced by
    -i omega, omega = k^2 / 2, so the check is purely algebraic.
    """
    _require_momentum(k)
    u = state_left(defect, k, 0.0)
    ux = dstate_left(defect, k, 0.0)
    v = state_right(defect, k, 0.0)
    vx = dstate_right(defect, k, 0.0)
    if defect.kind is DefectKind.FREE:
        # Degenerate case: plain continuity of the field and its derivative.
        return max(abs(u - v), abs(ux - vx))
    if defect.kind is DefectKind.DELTA:
        lam = defect.strength
        return max(abs(u - v), abs((vx - ux) - 2.0 * lam * u))
    alpha = defect.strength
    # u_x - v_x = alpha (u + v);  u_x + v_x = -(2i/alpha) d_t(u - v),
    # and d_t -> -i k^2/2 turns the second condition into
    # u_x + v_x = -(k^2/alpha)(u - v).
    first = (ux - vx) - alpha * (u + v)
    second = (ux + vx) + (k * k / alpha) * (u - v)
    return max(abs(first), abs(second))


def bound_states(defect: DefectSpec) -> list[DefectBoundState]:
    """The two square-integrable defect modes of the jump defect.

    For alpha > 0 the pair is (e^{-alpha x} on the right, e^{+alpha x} on
    the left), each with phase rate alpha^2 / 2 and the other branch
    identically zero; these satisfy the sewing conditions.  For alpha < 0
    the same exponential profiles are square-integrable on the swapped
    sides, and the returned pair mirrors accordingly.
    """
    if defect.kind is not DefectKind.JUMP:
        raise ConfigurationError("bound states are only supported for the jump defect")
    alpha = defect.strength
    rate = abs(alpha)
    phase_rate = 0.5 * alpha * alpha
    if alpha > 0:
        sides = (Side.RIGHT, Side.LEFT)
    else:
        sides = (Side.LEFT, Side.RIGHT)
    return [
        DefectBoundState(rate, sides[0], phase_rate),
        DefectBoundState(rate, sides[1], phase_rate),
    ]
