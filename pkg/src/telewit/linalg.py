"""Dense complex linear algebra for small bipartite operators (d <= 8 local).

Conventions used throughout the package:

* matrices are dense ``numpy`` arrays of ``complex128`` in row-major order;
* composite indices are row-major with the first tensor factor ("A") as the
  slow index: row of ``a (x) b`` = ``a_row * b.rows + b_row``.
"""

from typing import NamedTuple

import numpy as np

HERMITICITY_TOL = 1e-10
RANK_RTOL = 1e-8


class RankDeficientError(np.linalg.LinAlgError):
    """Input matrix is numerically rank deficient."""


class Spectrum(NamedTuple):
    """Hermitian eigendecomposition: ascending eigenvalues, orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(m):
    """Coerce to a finite complex128 2-D array."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def is_hermitian(m, tol=HERMITICITY_TOL):
    m = np.asarray(m)
    return bool(m.shape[0] == m.shape[1] and np.linalg.norm(m - m.conj().T) <= tol)


def kron(a, b):
    """Kronecker product; first factor is subsystem A (slow index)."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_transpose(m, dims, subsystem="A"):
    """Transpose one tensor factor of a square bipartite matrix.

    ``dims = (dA, dB)``; the result is an exact entry permutation, so the
    operation is an involution with no roundoff.
    """
    m = as_matrix(m)
    da, db = dims
    if m.shape != (da * db, da * db):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    t = m.reshape(da, db, da, db)
    if subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    else:
        raise ValueError("subsystem must be 'A' or 'B'")
    return t.reshape(da * db, da * db)


def hermitian_eigen(m, tol=HERMITICITY_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises ``ValueError`` if ``m`` deviates from Hermiticity by more than
    ``tol`` in Frobenius norm.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    defect = np.linalg.norm(m - m.conj().T)
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")
    vals, vecs = np.linalg.eigh(m)
    return Spectrum(vals, vecs)


def trace_product(a, b):
    """Tr(a b) as sum over a_ij * b_ji, without forming the product."""
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0] or a.shape[0] != b.shape[1]:
        raise ValueError(f"incompatible shapes for trace product: {a.shape}, {b.shape}")
    return complex(np.sum(a * b.T))


def span_rank(vectors, tol=RANK_RTOL):
    """Number of singular values of the stacked vectors above tol * largest."""
    if len(vectors) == 0:
        raise ValueError("span_rank of an empty vector list")
    cols = [np.asarray(v, dtype=np.complex128).reshape(-1) for v in vectors]
    n = cols[0].size
    if any(c.size != n for c in cols):
        raise ValueError("vectors must all have the same length")
    s = np.linalg.svd(np.column_stack(cols), compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol * s[0]))


def polar_unitary(m, rank_rtol=RANK_RTOL):
    """Unitary factor U of the polar decomposition m = U P (P positive).

    Raises ``RankDeficientError`` when the smallest singular value falls
    below ``rank_rtol`` times the largest; callers treat that as a signal
    to restart from a fresh point rather than trust the factor.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("polar decomposition requires a square matrix")
    u, s, vh = np.linalg.svd(m)
    if s[0] == 0.0 or s[-1] <= rank_rtol * s[0]:
        raise RankDeficientError(f"matrix is rank deficient (singular values {s})")
    return u @ vh


def partial_trace(m, dims, keep="A"):
    """Trace out one tensor factor of a square bipartite matrix."""
    m = as_matrix(m)
    da, db = dims
    if m.shape != (da * db, da * db):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    t = m.reshape(da, db, da, db)
    if keep == "A":
        return np.einsum("ijkj->ik", t)
    if keep == "B":
        return np.einsum("ijil->jl", t)
    raise ValueError("keep must be 'A' or 'B'")
