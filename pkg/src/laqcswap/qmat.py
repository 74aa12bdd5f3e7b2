"""Dense complex-matrix substrate for the two- and four-qubit oracles.

Qubit ordering is fixed everywhere in this package: subsystems A, B, C, D
with A the most significant bit.  A four-qubit basis ket |abcd> is row
index 8a + 4b + 2c + d; a two-qubit ket |ab> is row index 2a + b.  This
convention is deliberately not configurable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Default tolerances.  Double-precision closed forms in this package are
# exact to ~1e-14; the eigensolver on 16x16 matrices adds a little noise,
# hence the looser PSD bound.
TOL_HERM = 1e-10
TOL_TRACE = 1e-10
TOL_PSD = 1e-9

# Matrices above 16x16 are out of scope (two pairs of qubits at most).
MAX_DIM = 16

ID2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class QmatError(ValueError):
    """Raised for matrices outside this module's contracts."""


def dag(m):
    return np.asarray(m).conj().T


def kron(a, b):
    """Tensor product with the fixed big-endian subsystem ordering.

    The first factor holds the more significant bits, so
    kron(rho_AB, rho_CD) is the joint state indexed |abcd>.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise QmatError(f"first factor is not square: shape {a.shape}")
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise QmatError(f"second factor is not square: shape {b.shape}")
    if a.shape[0] * b.shape[0] > MAX_DIM:
        raise QmatError(
            f"product dimension {a.shape[0] * b.shape[0]} exceeds {MAX_DIM}"
        )
    return np.kron(a, b)


def partial_trace_bc(rho):
    """Trace the middle pair (B, C) out of a four-qubit operator.

    Input is 16x16 ordered |abcd>; the result is the 4x4 operator on the
    outer pair (A, D).  The trace is preserved.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (16, 16):
        raise QmatError(f"expected a 16x16 matrix, got shape {rho.shape}")
    t = rho.reshape(2, 2, 2, 2, 2, 2, 2, 2)
    return np.einsum("abcdibcj->adij", t).reshape(4, 4)


def hermitian_eigenvalues(m, tol_herm: float = TOL_HERM):
    """Real spectrum of a Hermitian matrix, in descending order.

    The matrix is explicitly symmetrized as (M + M†)/2 before
    diagonalization to suppress round-off asymmetry.  Inputs whose
    Hermiticity residual exceeds ``tol_herm`` are rejected.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise QmatError(f"matrix is not square: shape {m.shape}")
    residual = np.max(np.abs(m - dag(m)))
    if residual > tol_herm:
        raise QmatError(f"matrix is not Hermitian: residual {residual:.3e}")
    vals = np.linalg.eigvalsh((m + dag(m)) / 2.0)
    return vals[::-1].copy()


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of a density-matrix check (report-style, never raises)."""

    herm_residual: float
    trace_deviation: float
    min_eigenvalue: float
    hermitian_ok: bool
    trace_ok: bool
    psd_ok: bool
    unnormalized: bool

    @property
    def passed(self) -> bool:
        return self.hermitian_ok and self.trace_ok and self.psd_ok


def validate_density(
    m,
    *,
    tol_herm: float = TOL_HERM,
    tol_trace: float = TOL_TRACE,
    tol_psd: float = TOL_PSD,
    unnormalized: bool = False,
) -> ValidityReport:
    """Check Hermiticity, unit trace and positivity of a density matrix.

    Raw post-measurement operators legitimately carry trace != 1; pass
    ``unnormalized=True`` to skip the trace test for those (the report
    still records the deviation).
    """
    m = np.asarray(m, dtype=complex)
    herm_residual = float(np.max(np.abs(m - dag(m))))
    trace_deviation = float(abs(np.trace(m) - 1.0))
    sym = (m + dag(m)) / 2.0
    min_eig = float(np.min(np.linalg.eigvalsh(sym)))
    return ValidityReport(
        herm_residual=herm_residual,
        trace_deviation=trace_deviation,
        min_eigenvalue=min_eig,
        hermitian_ok=herm_residual <= tol_herm,
        trace_ok=unnormalized or trace_deviation <= tol_trace,
        psd_ok=min_eig >= -tol_psd,
        unnormalized=unnormalized,
    )


def two_qubit_pauli_repr(rho):
    """Local Bloch vectors and correlation matrix of a 4x4 state.

    Returns (u, v, T) with u_i = Tr[rho (sigma_i x 1)],
    v_j = Tr[rho (1 x sigma_j)], T_ij = Tr[rho (sigma_i x sigma_j)].
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise QmatError(f"expected a 4x4 matrix, got shape {rho.shape}")
    u = np.array([np.trace(rho @ np.kron(p, ID2)).real for p in PAULIS])
    v = np.array([np.trace(rho @ np.kron(ID2, p)).real for p in PAULIS])
    t = np.array(
        [
            [np.trace(rho @ np.kron(p, q)).real for q in PAULIS]
            for p in PAULIS
        ]
    )
    return u, v, t


def random_density_matrix(rng, dim: int = 4):
    """Haar-ish random full-rank density matrix (Wishart construction)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ dag(g)
    return m / np.trace(m).real


def random_unitary(rng, dim: int = 2):
    """Haar-random unitary via QR of a complex Gaussian matrix."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))
