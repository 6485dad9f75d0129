"""Reduced-scale invariant suites behind the `validate` CLI command.

Each suite re-runs the module invariants at a scale that finishes in
seconds and reports pass/fail with a short detail line.  The fault
parameter exists so a negative control can verify the suites actually
fail when an invariant is broken.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import conservation, kernels, scan, scattering, spectral
from .core import (
    ConfigurationError,
    DefectKind,
    DefectSpec,
    GaussianTest,
    GridSpec,
    Side,
    make_grid,
)
from .quadrature import HalfLineIntegralRequest, halfline_fourier, halfline_fourier_closed_form

FAULT_HERMITICITY = "hermiticity"
KNOWN_FAULTS = (FAULT_HERMITICITY,)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


class _Checker:
    def __init__(self):
        self.failures: list[str] = []
        self.checks = 0

    def expect(self, condition: bool, label: str):
        self.checks += 1
        if not condition:
            self.failures.append(label)

    def result(self, name: str) -> SuiteResult:
        if self.failures:
            return SuiteResult(name, False, "; ".join(self.failures[:4]))
        return SuiteResult(name, True, f"{self.checks} checks")


def _suite_core(fault) -> SuiteResult:
    c = _Checker()
    nodes = make_grid(GridSpec(4, 200.0))
    c.expect(np.allclose(nodes, [25.0, 75.0, 125.0, 175.0]), "midpoint nodes")
    c.expect(np.all(nodes > 0) and np.all(np.diff(nodes) > 0), "node ordering")
    for bad in (lambda: DefectSpec.jump(0.0), lambda: DefectSpec.delta(math.inf),
                lambda: DefectSpec(DefectKind.DELTA, 1.0, conserved=True)):
        try:
            bad()
            c.expect(False, "invalid spec accepted")
        except ConfigurationError:
            c.expect(True, "")
    return c.result("core")


def _suite_quadrature(fault) -> SuiteResult:
    c = _Checker()
    rng = np.random.default_rng(11)
    for _ in range(40):
        test = GaussianTest(float(rng.uniform(-1.5, 1.5)), 0.1)
        q = float(rng.uniform(-60, 60))
        side = Side.LEFT if rng.random() < 0.5 else Side.RIGHT
        val = halfline_fourier(HalfLineIntegralRequest(side, q, test))
        mirror = halfline_fourier(HalfLineIntegralRequest(side, -q, test))
        c.expect(abs(val - mirror.conjugate()) <= 1e-12, f"conjugation at q={q:.3g}")
        c.expect(abs(val) <= 1.0 + 1e-12, f"|I| <= 1 at q={q:.3g}")
        if abs(q) * test.sigma < 4:
            closed = halfline_fourier_closed_form(HalfLineIntegralRequest(side, q, test))
            c.expect(abs(val - closed) <= 1e-10, f"closed form at q={q:.3g}")
        both = val + halfline_fourier(
            HalfLineIntegralRequest(Side.RIGHT if side is Side.LEFT else Side.LEFT, q, test)
        )
        full = cmath.exp(1j * q * test.x0 - 0.5 * q * q * test.sigma ** 2)
        c.expect(abs(both - full) <= 2e-11 + math.erfc(8 / math.sqrt(2)), "additivity")
    return c.result("quadrature")


def _suite_scattering(fault) -> SuiteResult:
    c = _Checker()
    rng = np.random.default_rng(12)
    lam = rng.uniform(-8, 8, 200)
    lam[lam == 0] = 1.0
    k = rng.uniform(1e-3, 50, 200)
    r = lam / (1j * k - lam)
    t = 1j * k / (1j * k - lam)
    c.expect(float(np.max(np.abs(np.abs(r) ** 2 + np.abs(t) ** 2 - 1))) <= 1e-12, "delta unitarity")
    alpha = rng.uniform(-8, 8, 200)
    alpha[alpha == 0] = 1.0
    tj = (k + 1j * alpha) / (k - 1j * alpha)
    c.expect(float(np.max(np.abs(np.abs(tj) - 1))) <= 1e-12, "jump pure phase")
    worst = 0.0
    for _ in range(200):
        kk = float(rng.uniform(1e-2, 20))
        s = float(rng.uniform(-8, 8)) or 1.0
        d = DefectSpec.delta(s) if rng.random() < 0.5 else DefectSpec.jump(s)
        worst = max(worst, scattering.check_sewing(d, kk))
    c.expect(worst <= 1e-12, f"sewing residual {worst:.2e}")
    # Finite-difference check that each branch solves the free equation.
    h = 1e-4
    for d in (DefectSpec.free(), DefectSpec.delta(1.5), DefectSpec.jump(-2.0)):
        for kk, x in ((0.7, -0.4), (2.0, 0.6)):
            phi = [scattering.scattering_state(d, kk, x + s * h) for s in (-1, 0, 1)]
            second = (phi[0] - 2 * phi[1] + phi[2]) / (h * h)
            c.expect(abs(-0.5 * second - 0.5 * kk * kk * phi[1]) <= 1e-6 * kk * kk, "TISE")
    return c.result("scattering")


def _suite_kernels(fault) -> SuiteResult:
    c = _Checker()
    rng = np.random.default_rng(13)
    test = GaussianTest(0.15, 0.1)
    for _ in range(40):
        kp, kk = rng.uniform(0.05, 12, 2)
        lam = float(rng.uniform(-5, 5)) or 1.0
        alpha = float(rng.uniform(-5, 5)) or 1.0
        for name, f in (
            ("free", lambda a, b: kernels.kernel_free(a, b, test)),
            ("delta", lambda a, b: kernels.kernel_delta(a, b, lam, test)),
            ("jump", lambda a, b: kernels.kernel_jump(a, b, alpha, test)),
            ("fixing", lambda a, b: kernels.fixing_term(a, b, alpha, test)),
        ):
            dev = abs(f(kp, kk) - f(kk, kp).conjugate())
            scale = max(1.0, abs(f(kp, kk)))
            c.expect(dev <= 1e-12 * scale, f"{name} hermiticity")
        point = kernels.jump_point_term(kp, kk, alpha, test)
        fix = kernels.fixing_term(kp, kk, alpha, test)
        c.expect(abs(point + 2.0 * fix) <= 1e-14 * max(1.0, abs(fix)), "point term = -2 fixing")
        # Defect-point uv/vu contributions of the delta kernel cancel by
        # continuity, so adding them explicitly changes nothing.
        d = DefectSpec.delta(lam)
        uv = scattering.state_left(d, kp, 0.0).conjugate() * scattering.state_right(d, kk, 0.0)
        vu = -scattering.state_right(d, kp, 0.0).conjugate() * scattering.state_left(d, kk, 0.0)
        c.expect(abs(uv + vu) <= 1e-14, "delta uv/vu cancellation")
    for kp, kk in ((0.5, 1.5), (2.0, 3.0)):
        free = kernels.kernel_free(kp, kk, test)
        c.expect(abs(kernels.kernel_delta(kp, kk, 1e-8, test) - free) <= 1e-7, "delta reduction")
        c.expect(abs(kernels.kernel_jump(kp, kk, 1e-8, test) - free) <= 1e-7, "jump reduction")
    return c.result("kernels")


def _suite_spectral(fault) -> SuiteResult:
    c = _Checker()
    test = GaussianTest(0.0, 0.1)
    raw = spectral.assemble_raw(DefectSpec.jump(5.0, conserved=True), test, GridSpec(12, 6.0))
    if fault == FAULT_HERMITICITY:
        raw = raw.copy()
        raw[0, -1] += 1e-6  # negative control: break the symmetry on purpose
    c.expect(spectral.hermiticity_report(raw) <= 1e-11, "raw assembly hermiticity")
    m = spectral.build_matrix(DefectSpec.delta(-0.8), test, GridSpec(24, 12.0))
    c.expect(spectral.hermiticity_report(m) == 0.0, "mirrored matrix")
    r = spectral.lowest_eigenpair(m)
    dense = float(np.linalg.eigvalsh(m.entries)[0])
    c.expect(abs(r.beta - dense) <= 1e-10, "partial vs dense")
    rng = np.random.default_rng(14)
    for _ in range(50):
        v = rng.normal(size=m.dim) + 1j * rng.normal(size=m.dim)
        v /= np.linalg.norm(v)
        c.expect(float((np.conj(v) @ m.entries @ v).real) >= r.beta - 1e-10, "variational bound")
    two = spectral.build_matrix(DefectSpec.free(), test, GridSpec(2, 2.0))
    a, cc, b = two.entries[0, 0].real, two.entries[1, 1].real, two.entries[0, 1]
    hand = (a + cc) / 2 - math.sqrt(((a - cc) / 2) ** 2 + abs(b) ** 2)
    c.expect(abs(spectral.lowest_eigenpair(two).beta - hand) <= 1e-12, "2x2 closed form")
    return c.result("spectral")


def _suite_conservation(fault) -> SuiteResult:
    c = _Checker()
    rng = np.random.default_rng(15)
    worst = 0.0
    for _ in range(20):
        nm = int(rng.integers(2, 4))
        ks = np.sort(rng.uniform(0.1, 8.0, nm))
        amps = rng.normal(size=nm) + 1j * rng.normal(size=nm)
        alpha = float(rng.uniform(-10, 10)) or 1.0
        st = conservation.ModeSuperposition(
            tuple((float(k), complex(a)) for k, a in zip(ks, amps)), DefectSpec.jump(alpha)
        )
        for q in conservation.Quantity:
            for t in (0.0, 1.3):
                worst = max(worst, abs(conservation.boundary_rates(st, q, t).residual))
    c.expect(worst <= 1e-12, f"jump conservation {worst:.2e}")
    st = conservation.ModeSuperposition(((0.9, 1.0 + 0j), (2.1, 0.4 - 0.6j)), DefectSpec.delta(2.0))
    c.expect(
        abs(conservation.boundary_rates(st, conservation.Quantity.PROBABILITY, 0.4).residual) <= 1e-13,
        "delta probability",
    )
    c.expect(
        abs(conservation.boundary_rates(st, conservation.Quantity.ENERGY, 0.4).residual) <= 1e-12,
        "delta energy",
    )
    flux, closed = conservation.delta_momentum_residual(st, 2.0, 0.4)
    c.expect(abs(flux - closed) <= 1e-12, "delta momentum closed form")
    dev = conservation.fixing_term_consistency(2.5, GaussianTest(0.0, 0.1), GridSpec(16, 8.0))
    c.expect(dev <= 1e-10, "fixing-term quadratic form")
    return c.result("conservation")


def _suite_scan(fault) -> SuiteResult:
    c = _Checker()
    plan = scan.SweepPlan(
        defect_family=DefectKind.FREE,
        conserved=False,
        strengths=(0.0,),
        x0_values=(-0.5, 0.0, 0.5),
        sigma=0.1,
        grid=GridSpec(8, 4.0),
    )
    serial = scan.run_sweep(plan, workers=1)
    again = scan.run_sweep(plan, workers=1)
    strip = lambda rows: [(r.defect, r.strength, r.x0, r.beta, r.residual) for r in rows]
    c.expect(strip(serial) == strip(again), "determinism")
    parallel = scan.run_sweep(plan, workers=2)
    c.expect(strip(serial) == strip(parallel), "parallel/serial equivalence")
    betas = [r.beta for r in serial]
    c.expect(max(betas) - min(betas) <= 1e-8, "free translation invariance")
    body = scan.rows_to_csv(serial)
    c.expect(body.splitlines()[0] == scan.CSV_HEADER, "CSV header")
    c.expect(all(f in scan.PRESETS for f in ("delta-peak", "jump-fig6a", "free-reference")),
             "preset catalog")
    return c.result("scan")


_SUITES = {
    "core": _suite_core,
    "quadrature": _suite_quadrature,
    "scattering": _suite_scattering,
    "kernels": _suite_kernels,
    "spectral": _suite_spectral,
    "conservation": _suite_conservation,
    "scan": _suite_scan,
}


def suite_names() -> list[str]:
    return list(_SUITES)


def run_suites(names=None, fault: str | None = None) -> list[SuiteResult]:
    if fault is not None and fault not in KNOWN_FAULTS:
        raise ConfigurationError(f"unknown fault {fault!r}; known: {', '.join(KNOWN_FAULTS)}")
    selected = suite_names() if not names else list(names)
    unknown = [n for n in selected if n not in _SUITES]
    if unknown:
        raise ConfigurationError(
            f"unknown suite(s) {', '.join(unknown)}; available: {', '.join(_SUITES)}"
        )
    return [_SUITES[name](fault) for name in selected]
