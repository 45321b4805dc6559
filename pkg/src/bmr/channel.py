"""Beam-splitter channel action, homodyne statistics and Gaussian information.

Every Gaussian state here has zero mean and is handled purely through its
covariance matrix, ordered (q_1..q_n, p_1..p_n).  The channel mixes each input
mode with the matching environment mode at a beam splitter of transmissivity
eta, so covariances transform as eta*sigma + (1 - eta)*V; the same rule with
sigma + Y in place of sigma gives the ensemble average over the modulated
alphabet.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .environment import ChannelParams, EnvModel
from .spectral import congruence_to_collective

__all__ = [
    "BASES",
    "Encoding",
    "HomodynePlan",
    "apply_channel",
    "homodyne_covariance",
    "input_covariances",
    "mutual_information",
    "per_mode_information",
    "scheme_mutual_information",
]

BASES = ("local", "collective")

_FIELDS = ("r", "c_q", "c_p", "theta")


@dataclass(frozen=True)
class Encoding:
    """Gaussian encoding: per-mode squeezing, modulation variances, homodyne angles.

    ``basis`` says whether the diagonal description lives in the local
    (per-use) modes or in the collective ones (the environment eigenbasis).
    The reference state of mode k has quadrature variances exp(+-r[k])/2, the
    classical alphabet adds modulation variances c_q[k] and c_p[k] on top, and
    the receiver measures cos(theta[k]) q + sin(theta[k]) p of each mode.
    The excitation cost of mode k is (cosh r + c_q + c_p - 1)/2.
    """

    basis: str
    r: np.ndarray
    c_q: np.ndarray
    c_p: np.ndarray
    theta: np.ndarray

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"basis must be one of {BASES}, got {self.basis!r}")
        for name in _FIELDS:
            arr = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            if arr.ndim != 1:
                raise ValueError(f"{name} must be a vector")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if len({getattr(self, name).size for name in _FIELDS}) != 1 or self.r.size == 0:
            raise ValueError("encoding vectors must share one positive length")
        if np.any(self.c_q < 0.0) or np.any(self.c_p < 0.0):
            raise ValueError("modulation variances must be non-negative")

    @property
    def n(self) -> int:
        return self.r.size

    def mode_budgets(self) -> np.ndarray:
        """Mean excitation number each mode consumes, squeezing plus modulation."""
        return 0.5 * (np.cosh(self.r) + self.c_q + self.c_p - 1.0)


@dataclass(frozen=True)
class HomodynePlan:
    """Commuting set of n output quadratures z = Q q + P p.

    The coefficient matrices must satisfy Q Q^T + P P^T = 1 and
    Q P^T - P Q^T = 0, which makes the measured operators a complete set of
    mutually commuting, unit-normalized quadratures.
    """

    q_coeff: np.ndarray
    p_coeff: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q_coeff, dtype=float)
        p = np.asarray(self.p_coeff, dtype=float)
        if q.ndim != 2 or q.shape[0] != q.shape[1] or q.shape != p.shape:
            raise ValueError("coefficient matrices must be square and equally sized")
        eye = np.eye(q.shape[0])
        if float(np.abs(q @ q.T + p @ p.T - eye).max()) > 1e-10:
            raise ValueError("quadrature coefficients are not normalized")
        if float(np.abs(q @ p.T - p @ q.T).max()) > 1e-10:
            raise ValueError("quadratures do not commute")
        q.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "q_coeff", q)
        object.__setattr__(self, "p_coeff", p)

    @classmethod
    def rotated(cls, theta) -> "HomodynePlan":
        """Per-mode rotated quadratures cos(theta_k) q_k + sin(theta_k) p_k."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        return cls(np.diag(np.cos(theta)), np.diag(np.sin(theta)))


def _mix(sigma: np.ndarray, env_cov: np.ndarray, eta: float) -> np.ndarray:
    return eta * sigma + (1.0 - eta) * env_cov


def apply_channel(sigma_in, env: EnvModel, eta) -> np.ndarray:
    """Output covariance eta*sigma + (1 - eta)*V of the beam-splitter channel.

    Passing sigma + Y as input yields the ensemble-averaged output covariance.
    """
    sigma = np.asarray(sigma_in, dtype=float)
    m = 2 * env.params.n
    if sigma.shape != (m, m):
        raise ValueError(f"expected a {m}x{m} covariance, got shape {sigma.shape}")
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {eta}")
    return _mix(sigma, env.cov_local, eta)


def homodyne_covariance(sigma_out, plan: HomodynePlan) -> np.ndarray:
    """Covariance of the homodyne record for the given quadrature plan."""
    sigma = np.asarray(sigma_out, dtype=float)
    q, p = plan.q_coeff, plan.p_coeff
    n = q.shape[0]
    if sigma.shape != (2 * n, 2 * n):
        raise ValueError(f"expected a {2 * n}x{2 * n} covariance, got shape {sigma.shape}")
    z = (
        q @ sigma[:n, :n] @ q.T
        + q @ sigma[:n, n:] @ p.T
        + p @ sigma[n:, :n] @ q.T
        + p @ sigma[n:, n:] @ p.T
    )
    z = 0.5 * (z + z.T)
    try:
        np.linalg.cholesky(z)
    except np.linalg.LinAlgError:
        raise ValueError("record covariance is not positive definite; invalid input covariance") from None
    return z


def _logdet2(mat: np.ndarray) -> float:
    # triangular factorization instead of a determinant product: immune to
    # overflow of det() at large dimension or strong squeezing
    chol = np.linalg.cholesky(mat)
    return 2.0 * float(np.sum(np.log2(np.diag(chol))))


def _checked_symmetric(mat, name: str) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    scale = max(1.0, float(np.abs(mat).max()))
    if float(np.abs(mat - mat.T).max()) > 1e-10 * scale:
        raise ValueError(f"{name} must be symmetric")
    return mat


def mutual_information(z_cov, z_cov_given_y) -> float:
    """Gaussian mutual information, in bits, between record and alphabet.

    Computes (1/2) log2 det(Z) - (1/2) log2 det(Z_y) where Z_y is the record
    covariance conditioned on the transmitted letter.  Z - Z_y must be
    positive semi-definite: modulation can only add variance.
    """
    z = _checked_symmetric(z_cov, "record covariance")
    zy = _checked_symmetric(z_cov_given_y, "conditional covariance")
    if z.shape != zy.shape:
        raise ValueError("covariances must have equal shapes")
    scale = max(1.0, float(np.abs(z).max()))
    if float(np.linalg.eigvalsh(z - zy).min()) < -1e-9 * scale:
        raise ValueError("conditional covariance exceeds the record covariance")
    try:
        value = 0.5 * (_logdet2(z) - _logdet2(zy))
    except np.linalg.LinAlgError:
        raise ValueError("covariances must be positive definite") from None
    return max(value, 0.0)


def per_mode_information(z_cov, z_cov_given_y) -> float:
    """Summed single-mode informations: only the record's variances are used.

    The schemes studied here decode every measured quadrature on its own, so
    cross-mode correlations of the record carry no usable information and the
    total reduces to (1/2) sum_k log2 of the per-mode variance ratios.
    """
    z = np.asarray(z_cov, dtype=float)
    zy = np.asarray(z_cov_given_y, dtype=float)
    return mutual_information(np.diag(np.diag(z)), np.diag(np.diag(zy)))


def input_covariances(enc: Encoding) -> tuple[np.ndarray, np.ndarray]:
    """Reference and modulation covariances of an encoding, in its own basis."""
    sigma = 0.5 * np.diag(np.concatenate([np.exp(enc.r), np.exp(-enc.r)]))
    modulation = np.diag(np.concatenate([enc.c_q, enc.c_p]))
    return sigma, modulation


def scheme_mutual_information(params: ChannelParams, enc: Encoding) -> float:
    """Information rate, in bits, of an encoding sent through the channel.

    Builds the reference and modulation covariances in the encoding's basis,
    mixes them with the environment at the beam splitter (the channel acts
    identically on collective modes), measures the per-mode rotated
    quadratures and returns the per-mode-decoded information.  The mean
    excitation cost must respect the channel's budget.
    """
    if enc.n != params.n:
        raise ValueError(f"encoding has {enc.n} modes but the channel uses {params.n}")
    if float(enc.mode_budgets().mean()) > params.n_mean + 1e-12:
        raise ValueError("encoding exceeds the mean excitation budget")
    env = EnvModel(params)
    if enc.basis == "local":
        env_cov = env.cov_local
    else:
        env_cov = congruence_to_collective(env.cov_local, env.spectrum)
    sigma, modulation = input_covariances(enc)
    plan = HomodynePlan.rotated(enc.theta)
    z = homodyne_covariance(_mix(sigma + modulation, env_cov, params.eta), plan)
    zy = homodyne_covariance(_mix(sigma, env_cov, params.eta), plan)
    return per_mode_information(z, zy)
