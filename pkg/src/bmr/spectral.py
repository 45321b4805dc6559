"""Nearest-neighbour coupling matrix and its closed-form eigensystem.

Correlations of the channel environment are generated by a symmetric
tridiagonal Toeplitz coupling between successive uses.  Its eigensystem is
known in closed form, so every basis change in this package is written down
directly instead of calling an iterative eigensolver.  Mode indices in
documentation and error messages are 1-based (j, k = 1..n); array storage is
0-based as usual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Spectrum",
    "coupling_matrix",
    "coupling_spectrum",
    "to_collective",
    "from_collective",
    "congruence_to_collective",
    "congruence_from_collective",
    "interleave_modes",
]


def _check_uses(n) -> int:
    if n != int(n) or int(n) < 1:
        raise ValueError(f"number of channel uses must be a positive integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class Spectrum:
    """Closed-form eigensystem of :func:`coupling_matrix` for ``n`` uses.

    ``eigenvalues[j - 1]`` holds 2*cos(pi*j/(n + 1)) for mode j = 1..n, a
    strictly decreasing sequence, and row ``j - 1`` of ``eigenvectors`` is the
    matching unit eigenvector with components sqrt(2/(n + 1)) * sin(j*k*pi/(n + 1)).
    The eigenvector matrix is orthogonal, so its transpose undoes the
    local-to-collective basis change.
    """

    n: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)


def coupling_matrix(n) -> np.ndarray:
    """Symmetric tridiagonal matrix with zero diagonal and unit off-diagonals."""
    n = _check_uses(n)
    omega = np.zeros((n, n))
    k = np.arange(n - 1)
    omega[k, k + 1] = 1.0
    omega[k + 1, k] = 1.0
    return omega


def coupling_spectrum(n) -> Spectrum:
    """Eigensystem of ``coupling_matrix(n)`` from the closed form, eigenvalues descending."""
    n = _check_uses(n)
    j = np.arange(1, n + 1, dtype=float)
    eigenvalues = 2.0 * np.cos(np.pi * j / (n + 1))
    eigenvectors = np.sqrt(2.0 / (n + 1)) * np.sin(np.pi * np.outer(j, j) / (n + 1))
    return Spectrum(n=n, eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def to_collective(vec_local, spectrum: Spectrum) -> np.ndarray:
    """Components of a per-use vector in the eigenbasis of the coupling matrix."""
    vec = np.asarray(vec_local, dtype=float)
    if vec.shape != (spectrum.n,):
        raise ValueError(f"expected a length-{spectrum.n} vector, got shape {vec.shape}")
    return spectrum.eigenvectors @ vec


def from_collective(vec_collective, spectrum: Spectrum) -> np.ndarray:
    """Inverse of :func:`to_collective`; the eigenvector matrix is orthogonal."""
    vec = np.asarray(vec_collective, dtype=float)
    if vec.shape != (spectrum.n,):
        raise ValueError(f"expected a length-{spectrum.n} vector, got shape {vec.shape}")
    return spectrum.eigenvectors.T @ vec


def _checked_covariance(cov, n: int) -> np.ndarray:
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2 * n, 2 * n):
        raise ValueError(f"expected a {2 * n}x{2 * n} covariance, got shape {cov.shape}")
    scale = max(1.0, float(np.abs(cov).max()))
    if float(np.abs(cov - cov.T).max()) > 1e-10 * scale:
        raise ValueError("covariance matrix is not symmetric")
    return cov


def _block_congruence(cov: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    out = np.empty_like(cov)
    out[:n, :n] = v @ cov[:n, :n] @ v.T
    out[:n, n:] = v @ cov[:n, n:] @ v.T
    out[n:, :n] = v @ cov[n:, :n] @ v.T
    out[n:, n:] = v @ cov[n:, n:] @ v.T
    return 0.5 * (out + out.T)


def congruence_to_collective(cov, spectrum: Spectrum) -> np.ndarray:
    """Covariance in the collective basis: (v + v) cov (v + v)^T blockwise.

    The congruence acts separately on the qq, qp and pp blocks of the
    (q_1..q_n, p_1..p_n)-ordered covariance; being orthogonal it preserves the
    trace. Asymmetric input (beyond rounding, relative 1e-10) is rejected.
    """
    cov = _checked_covariance(cov, spectrum.n)
    return _block_congruence(cov, spectrum.eigenvectors, spectrum.n)


def congruence_from_collective(cov, spectrum: Spectrum) -> np.ndarray:
    """Inverse congruence, mapping a collective-basis covariance back to local modes."""
    cov = _checked_covariance(cov, spectrum.n)
    return _block_congruence(cov, spectrum.eigenvectors.T, spectrum.n)


def interleave_modes(cov) -> np.ndarray:
    """Reorder a (q_1..q_n, p_1..p_n) covariance into per-mode (q_j, p_j) pairs.

    Useful for reading off the 2x2 single-mode blocks of a block-ordered matrix.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
        raise ValueError(f"expected a square even-dimensional matrix, got shape {cov.shape}")
    n = cov.shape[0] // 2
    perm = np.empty(2 * n, dtype=int)
    perm[0::2] = np.arange(n)
    perm[1::2] = np.arange(n) + n
    return cov[np.ix_(perm, perm)]
