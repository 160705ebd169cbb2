"""Deterministic complex matrix decompositions.

Thin wrappers around LAPACK (via numpy) that pin down the conventions every
estimator in this package relies on:

* eigenvalues / singular values are sorted in descending order,
* each eigenvector (and each left singular vector) is rotated by a unit
  complex scalar so that its largest-magnitude entry is real and strictly
  positive (ties broken by lowest index),
* right singular vectors are rotated together with the left ones so that
  ``U @ diag(s) @ V^H`` still reproduces the input.

With these conventions, identical input bytes give identical output bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class EvdResult:
    """Hermitian eigendecomposition, eigenvalues descending.

    Column ``m`` of ``eigenvectors`` pairs with ``eigenvalues[m]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


@dataclass(frozen=True)
class SvdResult:
    """Singular value decomposition ``u @ diag(singular_values) @ v^H``.

    ``v`` holds the right singular vectors as columns (not conjugated).
    """

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray


def _as_complex_matrix(a, name="matrix"):
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {a.shape}")
    if a.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def _phase_fix_columns(vectors):
    """Rotate each column so its largest-magnitude entry is real-positive.

    Returns the rotated matrix and the unit phases that were divided out
    (needed by :func:`svd` to co-rotate the right singular vectors).
    np.argmax picks the first maximum, which implements the lowest-index
    tie-break.
    """
    pivots_idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[pivots_idx, np.arange(vectors.shape[1])]
    phases = pivots / np.abs(pivots)
    return vectors / phases[np.newaxis, :], phases


def hermitian_evd(a, tol: float = DEFAULT_TOL) -> EvdResult:
    """Eigendecomposition of a Hermitian matrix with fixed conventions.

    The input is symmetrized as ``(A + A^H) / 2`` before the solve, but an
    asymmetry larger than ``tol`` (relative Frobenius) is treated as a
    contract violation and raises ``ValueError``.
    """
    a = _as_complex_matrix(a)
    n, m = a.shape
    if n != m:
        raise ValueError(f"hermitian_evd needs a square matrix, got {n}x{m}")
    a_h = a.conj().T
    norm = np.linalg.norm(a)
    if np.linalg.norm(a - a_h) > tol * max(norm, 1.0):
        raise ValueError("matrix is not Hermitian within tolerance")
    sym = (a + a_h) / 2.0
    eigenvalues, eigenvectors = np.linalg.eigh(sym)
    order = np.argsort(eigenvalues)[::-1]  # eigh returns ascending
    eigenvalues = eigenvalues[order]
    eigenvectors, _ = _phase_fix_columns(eigenvectors[:, order])
    return EvdResult(eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def svd(a) -> SvdResult:
    """SVD with descending singular values and pinned vector phases."""
    a = _as_complex_matrix(a)
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    u, phases = _phase_fix_columns(u)
    # Co-rotate right vectors: (u/c) s (v/c)^H == u s v^H for unit c.
    v = vh.conj().T / phases[np.newaxis, :]
    return SvdResult(u=u, singular_values=s, v=v)


def numerical_rank(a, rel_tol: float = DEFAULT_TOL) -> int:
    """Number of singular values above ``rel_tol`` times the largest one."""
    if not 0.0 < rel_tol < 1.0:
        raise ValueError(f"rel_tol must lie in (0, 1), got {rel_tol}")
    s = np.linalg.svd(_as_complex_matrix(a), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))
