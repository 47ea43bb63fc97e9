"""Small dense-linear-algebra helpers used across modules."""

from __future__ import annotations

import numpy as np


def null_space(m: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal basis of the null space of m, as columns.

    Singular values below ``tol * (1 + sigma_max)`` count as zero.
    """
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return np.eye(m.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(m)
    cutoff = tol * (1.0 + (s[0] if len(s) else 0.0))
    rank = int((s > cutoff).sum())
    return vh[rank:].conj().T


def nearest_unitary(a: np.ndarray) -> np.ndarray | None:
    """Unitary polar factor of a square matrix, or None when singular."""
    a = np.asarray(a, dtype=complex)
    if a.shape[0] != a.shape[1]:
        return None
    if a.shape[0] == 0:
        return a.copy()
    u, s, vh = np.linalg.svd(a)
    if s.min() <= 1e-12 * (1.0 + s.max()):
        return None
    return u @ vh


def matrix_rank(columns: np.ndarray, tol: float) -> int:
    """Rank with the package's relative singular-value cutoff."""
    columns = np.asarray(columns, dtype=complex)
    if columns.size == 0:
        return 0
    s = np.linalg.svd(columns, compute_uv=False)
    return int((s > tol * (1.0 + s[0])).sum())


def max_abs(a: np.ndarray) -> float:
    a = np.asarray(a)
    return float(np.abs(a).max()) if a.size else 0.0
