"""Correlated environment of the lossy channel and its derived quantities.

The environment of the n uses is a pure multimode squeezed vacuum whose
covariance matrix, in block (q_1..q_n, p_1..p_n) ordering, is

    V = (1/2) [exp(s*Omega)  0; 0  exp(-s*Omega)],

with Omega the nearest-neighbour coupling matrix and s the memory parameter.
In the eigenbasis of Omega the state factorizes into single-mode squeezed
vacua with squeezings s_j = s*lambda_j, while each local mode on its own looks
thermal with a mean excitation number that grows with |s|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .spectral import Spectrum, coupling_spectrum

__all__ = [
    "ChannelParams",
    "EnvModel",
    "env_covariance",
    "collective_squeezings",
    "effective_temperature",
    "effective_temperatures",
]

# beyond this exponent the dense covariance overflows float64
_DENSE_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class ChannelParams:
    """Physical scenario of a transmission.

    n       number of channel uses
    eta     beam-splitter transmissivity, in [0, 1]
    s       memory (environment squeezing) parameter, any finite real
    n_mean  largest mean number of excitations per use allowed at the input
    """

    n: int
    eta: float
    s: float
    n_mean: float

    def __post_init__(self):
        if self.n != int(self.n) or int(self.n) < 1:
            raise ValueError(f"number of channel uses must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "n_mean", float(self.n_mean))
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"transmissivity must lie in [0, 1], got {self.eta}")
        if not math.isfinite(self.s):
            raise ValueError("memory parameter must be finite")
        if not (math.isfinite(self.n_mean) and self.n_mean >= 0.0):
            raise ValueError(f"excitation budget must be a non-negative finite number, got {self.n_mean}")


def env_covariance(n, s) -> np.ndarray:
    """Dense 2n x 2n covariance of the environment state.

    Built through the closed-form eigensystem, exp(s*Omega) = v^T diag(e^{s_j}) v.
    Rejects 2|s| > 700, where the matrix exponential leaves the float64 range;
    the derived quantities (squeezings, temperatures) remain available far
    beyond that point.
    """
    spectrum = coupling_spectrum(n)
    s = float(s)
    if not math.isfinite(s):
        raise ValueError("memory parameter must be finite")
    if 2.0 * abs(s) > _DENSE_EXP_LIMIT:
        raise ValueError(f"|s| = {abs(s):g} overflows the dense covariance; largest supported is {_DENSE_EXP_LIMIT / 2:g}")
    v = spectrum.eigenvectors
    plus = (v.T * np.exp(s * spectrum.eigenvalues)) @ v
    minus = (v.T * np.exp(-s * spectrum.eigenvalues)) @ v
    cov = np.zeros((2 * n, 2 * n))
    cov[:n, :n] = 0.25 * (plus + plus.T)
    cov[n:, n:] = 0.25 * (minus + minus.T)
    return cov


def collective_squeezings(spectrum: Spectrum, s) -> np.ndarray:
    """Per-mode squeezings s_j = s * lambda_j of the environment eigenmodes."""
    s = float(s)
    if not math.isfinite(s):
        raise ValueError("memory parameter must be finite")
    return s * spectrum.eigenvalues


def effective_temperatures(spectrum: Spectrum, s) -> np.ndarray:
    """Mean excitation number of every local environment mode.

    Evaluates (1/2) sum_j v[j,k]^2 exp(s*lambda_j) - 1/2 for k = 1..n with the
    largest exponent factored out, so strong memory stays finite as long as
    |s*lambda_1| <= 700, far beyond where the dense covariance overflows.
    Clipped at zero; the memoryless point returns exact zeros (the weights sum
    to one only up to rounding).
    """
    sj = collective_squeezings(spectrum, s)
    if s == 0.0:
        return np.zeros(spectrum.n)
    peak = float(sj.max())
    if peak > _DENSE_EXP_LIMIT:
        raise ValueError(f"|s*lambda_1| = {peak:g} overflows the temperatures; largest supported is {_DENSE_EXP_LIMIT:g}")
    weights = spectrum.eigenvectors**2
    summed = (weights * np.exp(sj - peak)[:, None]).sum(axis=0)
    return np.maximum(0.5 * math.exp(peak) * summed - 0.5, 0.0)


def effective_temperature(spectrum: Spectrum, s, k) -> float:
    """Mean excitation number of local environment mode k (1-based)."""
    if k != int(k) or not 1 <= int(k) <= spectrum.n:
        raise ValueError(f"mode index must lie in 1..{spectrum.n}, got {k!r}")
    return float(effective_temperatures(spectrum, s)[int(k) - 1])


class EnvModel:
    """Environment state for one parameter set.

    Holds the collective squeezings and the local temperatures eagerly; the
    dense covariance is built on first access only, so rate computations,
    which never touch it, keep working at memory strengths where the dense
    matrix would overflow.
    """

    def __init__(self, params: ChannelParams, spectrum: Spectrum | None = None):
        if spectrum is None:
            spectrum = coupling_spectrum(params.n)
        elif spectrum.n != params.n:
            raise ValueError("spectrum size does not match the channel parameters")
        self.params = params
        self.spectrum = spectrum
        self.squeezings = collective_squeezings(spectrum, params.s)
        self.temperatures = effective_temperatures(spectrum, params.s)

    @cached_property
    def cov_local(self) -> np.ndarray:
        return env_covariance(self.params.n, self.params.s)
