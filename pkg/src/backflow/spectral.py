"""Nystrom discretization of the current kernel and its lowest eigenpair.

M_ij = (p_cutoff / n) K(k_i, k_j) at the midpoint nodes.  On the midpoint
grid the kernels only ever need the half-line integrals at the difference
momenta m h (m = 0 .. n-1) and, for the delta defect, the sum momenta
(m + 1) h (m = 0 .. 2n-2), so assembly tabulates those once and combines
them vectorized.  Each table is probed against the adaptive quadrature
path before use.
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

from . import kernels
from .core import (
    DIAG_IMAG_TOL,
    RESIDUAL_TOL,
    DefectKind,
    DefectSpec,
    GaussianTest,
    GridSpec,
    HermitianKernelMatrix,
    NumericalError,
    Side,
    SpectralResult,
    make_grid,
)
from .quadrature import (
    HalfLineIntegralRequest,
    QuadratureError,
    gaussian_eval,
    halfline_fourier,
    halfline_fourier_table,
)

_TABLE_PROBE_TOL = 5e-10


class AssemblyError(NumericalError):
    """Matrix assembly failed on an identifiable entry."""


class SpectralError(NumericalError):
    """Eigensolver failure or unacceptable residual."""


def _probed_table(side: Side, qs: np.ndarray, test: GaussianTest, entry_of) -> np.ndarray:
    """Tabulate the integrals and spot-check them against the adaptive path."""
    table = halfline_fourier_table(side, qs, test)
    if qs.size == 0:
        return table
    for m in {0, qs.size // 2, qs.size - 1}:
        try:
            reference = halfline_fourier(HalfLineIntegralRequest(side, float(qs[m]), test))
        except QuadratureError as exc:
            i, j = entry_of(m)
            raise AssemblyError(f"quadrature failed for entry ({i}, {j}): {exc}") from exc
        if abs(table[m] - reference) > _TABLE_PROBE_TOL:
            i, j = entry_of(m)
            raise AssemblyError(
                f"integral table disagrees with adaptive quadrature at entry ({i}, {j}): "
                f"|delta| = {abs(table[m] - reference):.3e}"
            )
    return table


def _kernel_grid(defect: DefectSpec, test: GaussianTest, grid: GridSpec) -> np.ndarray:
    """K(k_i, k_j) for all node pairs, row index = conjugated momentum k'."""
    n = grid.n
    h = grid.step
    nodes = make_grid(grid)
    q_diff = np.arange(n) * h

    def diff_entry(m):  # k_j - k_i = m h is first realized at (0, m)
        return 0, m

    il_diff = _probed_table(Side.LEFT, q_diff, test, diff_entry)
    ir_diff = _probed_table(Side.RIGHT, q_diff, test, diff_entry)

    idx = np.arange(n)
    dm = idx[None, :] - idx[:, None]  # column k index minus row k' index
    adm = np.abs(dm)
    il = np.where(dm >= 0, il_diff[adm], np.conj(il_diff[adm]))
    ir = np.where(dm >= 0, ir_diff[adm], np.conj(ir_diff[adm]))
    kp = nodes[:, None]
    kk = nodes[None, :]

    if defect.kind is DefectKind.FREE:
        return kernels._free_terms(kp, kk, il, ir)

    if defect.kind is DefectKind.DELTA:
        q_sum = (np.arange(2 * n - 1) + 1.0) * h

        def sum_entry(m):  # k_i + k_j = (m + 1) h is realized at (i, m - i)
            i = max(0, m - (n - 1))
            return i, m - i

        il_sum = _probed_table(Side.LEFT, q_sum, test, sum_entry)
        sm = idx[:, None] + idx[None, :]
        il_sum_pos = il_sum[sm]
        return kernels._delta_terms(
            kp, kk, defect.strength,
            il, np.conj(il_sum_pos), il_sum_pos, np.conj(il), ir,
        )

    value = kernels._jump_terms(kp, kk, defect.strength, il, ir)
    if defect.conserved:
        value = value + kernels._fixing_terms(kp, kk, defect.strength, gaussian_eval(test, 0.0))
    return value


def build_matrix(defect: DefectSpec, test: GaussianTest, grid: GridSpec) -> HermitianKernelMatrix:
    """Assemble M with Hermiticity enforced by construction.

    The upper triangle and diagonal carry the computed values; the lower
    triangle is the conjugate mirror.  Diagonal imaginary parts are checked
    against the 1e-12 budget and then zeroed.
    """
    raw = grid.step * _kernel_grid(defect, test, grid)
    diag = raw.diagonal()
    worst = float(np.max(np.abs(diag.imag)))
    if worst > DIAG_IMAG_TOL:
        i = int(np.argmax(np.abs(diag.imag)))
        raise AssemblyError(f"diagonal entry ({i}, {i}) has imaginary part {diag.imag[i]:.3e}")
    upper = np.triu(raw, 1)
    entries = upper + upper.conj().T + np.diag(diag.real.astype(float))
    return HermitianKernelMatrix(entries=entries, meta=(defect, test, grid))


def assemble_raw(defect: DefectSpec, test: GaussianTest, grid: GridSpec) -> np.ndarray:
    """Every entry computed independently from the scalar kernel, no mirroring.

    Quadratically many adaptive integrals; intended for small grids and for
    auditing the Hermiticity of the analytic kernels via hermiticity_report.
    """
    nodes = make_grid(grid)
    n = grid.n
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            try:
                req = kernels.KernelPointRequest(nodes[i], nodes[j], defect, test)
                out[i, j] = kernels.kernel(req)
            except QuadratureError as exc:
                raise AssemblyError(f"quadrature failed for entry ({i}, {j}): {exc}") from exc
    return grid.step * out


def hermiticity_report(m) -> float:
    """max |M_ij - conj(M_ji)|; zero for any mirrored matrix."""
    a = m.entries if isinstance(m, HermitianKernelMatrix) else np.asarray(m)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def lowest_eigenpair(m: HermitianKernelMatrix) -> SpectralResult:
    """Algebraically smallest eigenvalue and unit-norm eigenvector.

    Complex Hermitian reduction to tridiagonal form with selected-eigenpair
    extraction (LAPACK MRRR); the residual ||M v - beta v|| is recomputed
    directly and must meet the 1e-8 budget.
    """
    a = m.entries
    try:
        w, v = scipy.linalg.eigh(a, subset_by_index=(0, 0), driver="evr")
    except scipy.linalg.LinAlgError as exc:
        raise SpectralError(f"eigensolver failed on a {m.dim}x{m.dim} matrix: {exc}") from exc
    beta = float(w[0])
    vec = v[:, 0]
    vec = vec / np.linalg.norm(vec)
    residual = float(np.linalg.norm(a @ vec - beta * vec))
    if residual > RESIDUAL_TOL:
        raise SpectralError(
            f"eigenpair residual {residual:.3e} exceeds {RESIDUAL_TOL:.1e} "
            f"(dim {m.dim}, beta {beta:.6g})"
        )
    return SpectralResult(beta=beta, eigenvector=vec, residual_norm=residual)
