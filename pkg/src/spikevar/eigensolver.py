"""Lowest eigenvalues of dense real symmetric matrices.

Thin contract layer over LAPACK's symmetric solver (Householder
tridiagonalization plus divide-and-conquer, via numpy.linalg.eigh): ascending
eigenvalues, optional orthonormal eigenvectors, deterministic for fixed input.
The test suite checks it against an independent Sturm-sequence bisection
oracle built on leading-principal-minor sign counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import SymMatrix

__all__ = ["Spectrum", "eigen_symmetric"]


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and, when requested, unit-norm eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray | None = None


def eigen_symmetric(H, k: int | None = None, want_vectors: bool = False) -> Spectrum:
    """The k algebraically smallest eigenvalues of a symmetric matrix.

    Accepts a SymMatrix or a plain square ndarray (which must be exactly
    symmetric and finite).  Degenerate eigenvalues come out in ascending
    order with a stable vector set.  LAPACK convergence failures surface as
    numpy.linalg.LinAlgError rather than a silently truncated spectrum.
    """
    if isinstance(H, SymMatrix):
        A = H.data
    else:
        A = np.asarray(H, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {A.shape}")
        if not np.array_equal(A, A.T):
            raise ValueError("matrix is not exactly symmetric")
        if not np.all(np.isfinite(A)):
            raise ValueError("matrix has non-finite entries")
    D = A.shape[0]
    if k is None:
        k = D
    if not 1 <= k <= D:
        raise ValueError(f"need 1 <= k <= {D}, got k={k}")
    if want_vectors:
        vals, vecs = np.linalg.eigh(A)
        return Spectrum(vals[:k].copy(), vecs[:, :k].copy())
    vals = np.linalg.eigvalsh(A)
    return Spectrum(vals[:k].copy())
