"""Dense linear algebra helpers for bipartite operators.

All matrices are numpy complex128 arrays in C (row-major) order. A bipartite
operator on dimensions (d_a, d_b) is a (d_a*d_b) x (d_a*d_b) matrix whose
composite index packs the A index first: row i*d_b + j corresponds to the
basis vector |i>_A |j>_B.
"""

from __future__ import annotations

import numpy as np

from .defaults import HERMITICITY_TOL, PSD_TOL, RANK_TOL
from .errors import (
    DimensionMismatchError,
    NegativeEigenvalueError,
    NotHermitianError,
    NotSquareError,
)

__all__ = [
    "hermitian_eig",
    "singular_values",
    "psd_sqrt",
    "psd_pinv_sqrt",
    "kron",
    "partial_trace",
    "partial_transpose",
    "realign",
]


def _as_square(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSquareError(f"expected a square matrix, got shape {m.shape}")
    return m


def _check_bipartite(m: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    m = _as_square(m)
    if d_a < 1 or d_b < 1:
        raise DimensionMismatchError(f"dimensions must be positive, got ({d_a}, {d_b})")
    if m.shape[0] != d_a * d_b:
        raise DimensionMismatchError(
            f"matrix of size {m.shape[0]} does not factor as {d_a} x {d_b}"
        )
    return m


def hermitian_eig(m: np.ndarray, tol: float = HERMITICITY_TOL):
    """Eigendecomposition of a hermitian matrix.

    Returns (w, v) with eigenvalues w sorted descending and eigenvectors in
    the matching columns of v. The input is symmetrized before the solve;
    deviations from the adjoint beyond tol raise NotHermitianError.
    """
    m = _as_square(m)
    dev = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if dev > tol:
        raise NotHermitianError(f"matrix deviates from its adjoint by {dev:.3e}")
    w, v = np.linalg.eigh((m + m.conj().T) / 2.0)
    return w[::-1].copy(), v[:, ::-1].copy()


def singular_values(m: np.ndarray) -> np.ndarray:
    """Singular values of m, descending."""
    return np.linalg.svd(np.asarray(m, dtype=np.complex128), compute_uv=False)


def psd_sqrt(m: np.ndarray, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Hermitian square root of a positive semidefinite matrix."""
    w, v = hermitian_eig(m)
    if w.size and w[-1] < -psd_tol * max(1.0, float(w[0])):
        raise NegativeEigenvalueError(f"eigenvalue {w[-1]:.3e} below zero")
    root = np.sqrt(np.clip(w, 0.0, None))
    out = (v * root) @ v.conj().T
    return (out + out.conj().T) / 2.0


def psd_pinv_sqrt(
    m: np.ndarray, rank_tol: float = RANK_TOL, psd_tol: float = PSD_TOL
) -> np.ndarray:
    """Pseudo-inverse square root of a positive semidefinite matrix.

    Eigenvalues above rank_tol (relative to the largest) map to 1/sqrt(w);
    the rest map to 0, so the result acts only on the support of m.
    """
    w, v = hermitian_eig(m)
    if w.size and w[-1] < -psd_tol * max(1.0, float(w[0])):
        raise NegativeEigenvalueError(f"eigenvalue {w[-1]:.3e} below zero")
    cut = rank_tol * max(float(w[0]), 0.0) if w.size else 0.0
    inv = np.where(w > cut, 1.0 / np.sqrt(np.clip(w, 1e-300, None)), 0.0)
    out = (v * inv) @ v.conj().T
    return (out + out.conj().T) / 2.0


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the A index packed first."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def partial_trace(m: np.ndarray, d_a: int, d_b: int, side: str) -> np.ndarray:
    """Trace out the named subsystem, returning the other side's operator."""
    m = _check_bipartite(m, d_a, d_b)
    m4 = m.reshape(d_a, d_b, d_a, d_b)
    if side == "A":
        return np.einsum("ijik->jk", m4)
    if side == "B":
        return np.einsum("ijkj->ik", m4)
    raise DimensionMismatchError(f"side must be 'A' or 'B', got {side!r}")


def partial_transpose(m: np.ndarray, d_a: int, d_b: int, side: str) -> np.ndarray:
    """Transpose the named subsystem, leaving the other untouched."""
    m = _check_bipartite(m, d_a, d_b)
    m4 = m.reshape(d_a, d_b, d_a, d_b)
    if side == "A":
        out = m4.transpose(2, 1, 0, 3)
    elif side == "B":
        out = m4.transpose(0, 3, 2, 1)
    else:
        raise DimensionMismatchError(f"side must be 'A' or 'B', got {side!r}")
    return out.reshape(d_a * d_b, d_a * d_b).copy()


def realign(m: np.ndarray, d_a: int, d_b: int) -> np.ndarray:
    """Realign a bipartite operator so operator Schmidt structure becomes an SVD.

    The output R has shape (d_a^2, d_b^2) with
    R[i*d_a + i', j*d_b + j'] = m[i*d_b + j, i'*d_b + j'], so a product term
    A (x) B realigns to the rank-one outer product vec(A) vec(B)^T and the
    singular values of R are the operator Schmidt coefficients of m under the
    Hilbert-Schmidt inner product.
    """
    m = _check_bipartite(m, d_a, d_b)
    m4 = m.reshape(d_a, d_b, d_a, d_b)
    return m4.transpose(0, 2, 1, 3).reshape(d_a * d_a, d_b * d_b).copy()
