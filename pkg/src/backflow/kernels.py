"""Momentum-space kernels K(k', k) = L(k', k) / (2 pi) of the smeared
current operator, one closed form per defect.

The row argument k' is the conjugated side, so every kernel satisfies
K(k', k) = conj(K(k, k')).  The -i/2 prefactor of the position-space
current kernel is already absorbed: with I_L(q), I_R(q) the half-line
Fourier integrals of the test function,

    free :  4 pi K = (k + k') [I_L(k-k') + I_R(k-k')]
    delta:  4 pi K = (k + k') I_L(k-k')
                   + lam (k'-k)/(ik - lam)              I_L(-(k+k'))
                   - lam (k-k')/(ik' + lam)             I_L(k+k')
                   + lam^2 (k+k') / ((ik'+lam)(ik-lam)) I_L(-(k-k'))
                   - k k' (k+k') / ((ik'+lam)(ik-lam))  I_R(k-k')
    jump :  4 pi K = (k + k') [I_L(k-k') + T*(k') T(k) I_R(k-k')]

The conserved-current mode adds the defect-located fixing term

    -(1/2 pi) alpha (k + k') / ((k - i alpha)(k' + i alpha)) f(0)

as a kernel-level term, which changes the eigenvector as well as the
eigenvalue.  The `_*_terms` helpers take the integral values as arguments
so matrix assembly can reuse them with precomputed tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ConfigurationError, DefectKind, DefectSpec, GaussianTest, Side
from .quadrature import HalfLineIntegralRequest, gaussian_eval, halfline_fourier

_TWO_PI = 2.0 * math.pi
_FOUR_PI = 4.0 * math.pi


@dataclass(frozen=True)
class KernelPointRequest:
    k_prime: float
    k: float
    defect: DefectSpec
    test: GaussianTest

    def __post_init__(self):
        if not (self.k > 0 and self.k_prime > 0):
            raise ConfigurationError("kernel momenta must be positive")


def _il(q: float, test: GaussianTest) -> complex:
    return halfline_fourier(HalfLineIntegralRequest(Side.LEFT, q, test))


def _ir(q: float, test: GaussianTest) -> complex:
    return halfline_fourier(HalfLineIntegralRequest(Side.RIGHT, q, test))


def _free_terms(k_prime, k, il_diff, ir_diff):
    return (k + k_prime) * (il_diff + ir_diff) / _FOUR_PI


def _delta_terms(k_prime, k, lam, il_diff, il_sum_neg, il_sum_pos, il_diff_neg, ir_diff):
    dk = 1j * k - lam        # ik - lambda
    dkp = 1j * k_prime + lam  # ik' + lambda
    ksum = k + k_prime
    t1 = ksum * il_diff
    t2 = lam * (k_prime - k) / dk * il_sum_neg
    t3 = -lam * (k - k_prime) / dkp * il_sum_pos
    t4 = lam * lam * ksum / (dkp * dk) * il_diff_neg
    t5 = -k * k_prime * ksum / (dkp * dk) * ir_diff
    return (t1 + t2 + t3 + t4 + t5) / _FOUR_PI


def _jump_coefficient(k_prime, k, alpha):
    # T*(k') T(k) written as one rational expression.
    num = k * k_prime + 1j * alpha * (k_prime - k) + alpha * alpha
    return num / ((k_prime + 1j * alpha) * (k - 1j * alpha))


def _jump_terms(k_prime, k, alpha, il_diff, ir_diff):
    return (k + k_prime) * (il_diff + _jump_coefficient(k_prime, k, alpha) * ir_diff) / _FOUR_PI


def _fixing_terms(k_prime, k, alpha, f_at_origin):
    return (
        -alpha * (k + k_prime)
        / ((k - 1j * alpha) * (k_prime + 1j * alpha))
        * f_at_origin / _TWO_PI
    )


def kernel_free(k_prime: float, k: float, test: GaussianTest) -> complex:
    q = k - k_prime
    return _free_terms(k_prime, k, _il(q, test), _ir(q, test))


def kernel_delta(k_prime: float, k: float, lam: float, test: GaussianTest) -> complex:
    q = k - k_prime
    s = k + k_prime
    return _delta_terms(
        k_prime, k, lam,
        _il(q, test), _il(-s, test), _il(s, test), _il(-q, test), _ir(q, test),
    )


def kernel_jump(k_prime: float, k: float, alpha: float, test: GaussianTest) -> complex:
    q = k - k_prime
    return _jump_terms(k_prime, k, alpha, _il(q, test), _ir(q, test))


def fixing_term(k_prime: float, k: float, alpha: float, test: GaussianTest) -> complex:
    """Defect-located correction that makes the probability current conserved.

    Zero whenever the test-function support excludes the origin.
    """
    return _fixing_terms(k_prime, k, alpha, gaussian_eval(test, 0.0))


def jump_point_term(k_prime: float, k: float, alpha: float, test: GaussianTest) -> complex:
    """Would-be defect-point contribution of the jump kernel.

    This is the uv/vu cross term that appears if one insists on integrating
    across the discontinuity with theta(0) = 1/2.  It equals exactly -2x
    the fixing term; it is bookkeeping only and is never added to a kernel.
    """
    f0 = gaussian_eval(test, 0.0)
    return 2.0 * alpha * (k + k_prime) / ((k_prime + 1j * alpha) * (k - 1j * alpha)) * f0 / _TWO_PI


def kernel(req: KernelPointRequest) -> complex:
    """Dispatch on the defect; conserved jump = kernel_jump + fixing_term."""
    defect, test = req.defect, req.test
    if defect.kind is DefectKind.FREE:
        return kernel_free(req.k_prime, req.k, test)
    if defect.kind is DefectKind.DELTA:
        return kernel_delta(req.k_prime, req.k, defect.strength, test)
    value = kernel_jump(req.k_prime, req.k, defect.strength, test)
    if defect.conserved:
        value += fixing_term(req.k_prime, req.k, defect.strength, test)
    return value
