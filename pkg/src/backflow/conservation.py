"""Executable defect conservation laws for exact mode superpositions.

For finite sums of stationary scattering modes the time derivative of each
bulk quantity (energy, momentum, total probability) reduces to boundary
terms at the defect, and the matching defect correction has an exactly
computable time derivative; conserved quantities must give a vanishing sum
of the two rates, with no spatial quadrature involved.

    quantity     jump correction              delta correction
    energy       -(alpha/4) |u + v|^2 |_0     + lambda |u|^2 |_0
    momentum     +(i/2)(u* v - v* u) |_0      none (not conserved)
    probability  -(1/2 alpha) |u - v|^2 |_0   none needed (conserved as is)

The delta momentum rate instead equals the closed form
(lambda (v v*)_x - 2 lambda^2 v v*) |_0, which is not a time derivative.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import scattering
from .core import ConfigurationError, DefectKind, DefectSpec, GaussianTest, GridSpec, make_grid
from .kernels import _fixing_terms
from .quadrature import gaussian_eval

_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)


class Quantity(str, Enum):
    ENERGY = "energy"
    MOMENTUM = "momentum"
    PROBABILITY = "probability"


@dataclass(frozen=True)
class ModeSuperposition:
    """Finite sum of right-moving scattering modes sum_m a_m phi_{k_m} e^{-i w_m t}."""

    modes: tuple[tuple[float, complex], ...]
    defect: DefectSpec

    def __post_init__(self):
        if len(self.modes) < 1:
            raise ConfigurationError("a mode superposition needs at least one mode")
        momenta = [k for k, _ in self.modes]
        if any(not k > 0 for k in momenta):
            raise ConfigurationError("all mode momenta must be positive (right-movers)")
        if len(set(momenta)) != len(momenta):
            raise ConfigurationError("mode momenta must be distinct")


@dataclass(frozen=True)
class RatePair:
    """Boundary-flux rate of the bulk quantity and the rate of its defect term."""

    bulk_flux_rate: complex
    defect_term_rate: complex
    conserved: bool

    @property
    def residual(self) -> complex:
        return self.bulk_flux_rate + self.defect_term_rate


class _Boundary:
    """One-sided limits at x = 0 of the superposition and its derivatives."""

    __slots__ = ("u", "ux", "ut", "uxx", "v", "vx", "vt", "vxx")

    def __init__(self, state: ModeSuperposition, t: float):
        self.u = self.ux = self.ut = self.uxx = 0j
        self.v = self.vx = self.vt = self.vxx = 0j
        defect = state.defect
        for k, amp in state.modes:
            omega = 0.5 * k * k
            phase = amp * cmath.exp(-1j * omega * t)
            lu = scattering.state_left(defect, k, 0.0)
            lux = scattering.dstate_left(defect, k, 0.0)
            rv = scattering.state_right(defect, k, 0.0)
            rvx = scattering.dstate_right(defect, k, 0.0)
            self.u += phase * lu
            self.ux += phase * lux
            self.ut += -1j * omega * phase * lu
            # Each branch solves the free equation, so d2/dx2 -> -k^2.
            self.uxx += -k * k * phase * lu
            self.v += phase * rv
            self.vx += phase * rvx
            self.vt += -1j * omega * phase * rv
            self.vxx += -k * k * phase * rv


def _d_dt_abs2(a: complex, a_t: complex) -> complex:
    # d/dt |a|^2 given a and its time derivative.
    return a_t * a.conjugate() + a * a_t.conjugate()


def boundary_rates(state: ModeSuperposition, quantity: Quantity, t: float) -> RatePair:
    """Bulk boundary-flux rate and the matching defect-correction rate at time t.

    For the delta defect and momentum there is no correction; the pair is
    returned with defect_term_rate = 0 and conserved = False, and the bulk
    rate is the non-conservation residual (see delta_momentum_residual).
    """
    b = _Boundary(state, t)
    kind = state.defect.kind
    strength = state.defect.strength

    if quantity is Quantity.ENERGY:
        bulk = 0.5 * (b.ut.conjugate() * b.ux + b.ux.conjugate() * b.ut) \
             - 0.5 * (b.vt.conjugate() * b.vx + b.vx.conjugate() * b.vt)
        if kind is DefectKind.JUMP:
            rate = -0.25 * strength * _d_dt_abs2(b.u + b.v, b.ut + b.vt)
            return RatePair(bulk, rate, True)
        if kind is DefectKind.DELTA:
            rate = strength * _d_dt_abs2(b.u, b.ut)
            return RatePair(bulk, rate, True)
        return RatePair(bulk, 0j, True)

    if quantity is Quantity.MOMENTUM:
        bulk = 0.25 * (-2.0 * b.ux.conjugate() * b.ux
                       + b.u.conjugate() * b.uxx + b.u * b.uxx.conjugate()) \
             - 0.25 * (-2.0 * b.vx.conjugate() * b.vx
                       + b.v.conjugate() * b.vxx + b.v * b.vxx.conjugate())
        if kind is DefectKind.JUMP:
            rate = 0.5j * (b.ut.conjugate() * b.v + b.u.conjugate() * b.vt
                           - b.vt.conjugate() * b.u - b.v.conjugate() * b.ut)
            return RatePair(bulk, rate, True)
        if kind is DefectKind.DELTA:
            return RatePair(bulk, 0j, False)
        return RatePair(bulk, 0j, True)

    bulk = 0.5 * (-1j * b.ux.conjugate() * b.u + 1j * b.u.conjugate() * b.ux) \
         - 0.5 * (-1j * b.vx.conjugate() * b.v + 1j * b.v.conjugate() * b.vx)
    if kind is DefectKind.JUMP:
        rate = -_d_dt_abs2(b.u - b.v, b.ut - b.vt) / (2.0 * strength)
        return RatePair(bulk, rate, True)
    # The delta defect conserves total probability with no correction.
    return RatePair(bulk, 0j, True)


def delta_momentum_residual(state: ModeSuperposition, lam: float, t: float) -> tuple[complex, complex]:
    """Momentum rate for the delta defect, two ways.

    Returns (boundary_flux, closed_form) where the closed form is
    (lambda (v v*)_x - 2 lambda^2 v v*) |_0; the two must agree, which pins
    the non-conservation down to exactly that defect-located expression.
    """
    if state.defect.kind is not DefectKind.DELTA:
        raise ConfigurationError("delta_momentum_residual needs a delta-defect state")
    flux = boundary_rates(state, Quantity.MOMENTUM, t).bulk_flux_rate
    b = _Boundary(state, t)
    vv_x = b.vx * b.v.conjugate() + b.v * b.vx.conjugate()
    closed = lam * vv_x - 2.0 * lam * lam * (b.v * b.v.conjugate())
    return flux, closed


def fixing_term_consistency(
    alpha: float,
    test: GaussianTest,
    grid: GridSpec,
    n_random: int = 8,
    seed: int = 0,
) -> float:
    """Max deviation between the fixing-term quadratic form and the
    defect-located momentum correction, over a basket of discretized
    momentum profiles.

    Both sides discretize (i/2)(u* v - v* u)|_0 f(0) with the same midpoint
    weights, so the agreement is an algebraic identity up to rounding.
    """
    if alpha == 0.0:
        raise ConfigurationError("fixing term needs a nonzero jump strength")
    nodes = make_grid(grid)
    h = grid.step
    defect = DefectSpec.jump(alpha)
    t_of_k = np.array([scattering.coefficients(defect, float(k)).t for k in nodes])
    f0 = gaussian_eval(test, 0.0)
    fix = _fixing_terms(nodes[:, None], nodes[None, :], alpha, f0)

    basket = [np.eye(grid.n, dtype=complex)[i] for i in {0, grid.n // 2, grid.n - 1}]
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        basket.append(rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n))

    worst = 0.0
    for g in basket:
        u0 = (h / _SQRT_TWO_PI) * np.sum(g)          # u_k(0-) = 1 for the jump
        v0 = (h / _SQRT_TWO_PI) * np.sum(g * t_of_k)
        lhs = 0.5j * (np.conj(u0) * v0 - np.conj(v0) * u0) * f0
        rhs = h * h * (np.conj(g) @ fix @ g)
        worst = max(worst, abs(lhs - rhs))
    return worst
