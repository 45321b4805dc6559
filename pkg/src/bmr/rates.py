"""Closed-form transmission rates of the local and collective schemes.

Optimizing the per-mode squeezing and modulation analytically collapses both
schemes onto one rate function of an effective noise t and a mode budget N:

    rate(t, N) = (1/2) log2[1 + 2 (2N + 1 - cosh r) / (e^-r + t)],
    e^r       = [sqrt(1 + t (t + 4N + 2)) - 1] / t,

with t = nu (2 T_k + 1) for the local scheme and t = nu e^{-|s_j|} for the
collective one, where nu = (1 - eta)/eta, T_k is the local environment
temperature and s_j the collective squeezing.  Everything else in this module
is bookkeeping around that function: effective noises, budget allocation,
edge cases of eta and the infinite-memory limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .channel import Encoding
from .environment import ChannelParams, EnvModel
from .spectral import coupling_spectrum

__all__ = [
    "SCHEMES",
    "EffectiveNoise",
    "RateResult",
    "optimal_squeezing",
    "mode_rate",
    "effective_noise",
    "scheme_rate",
    "scheme_rate_many",
    "noiseless_rate",
    "asymptotic_rates",
    "optimal_encoding",
]

SCHEMES = ("local", "collective")

_LN2 = math.log(2.0)


def _check_scheme(scheme: str) -> None:
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")


def _exp_r(t, n_k):
    # cancellation-free form of (sqrt(1 + t(t + 4N + 2)) - 1)/t; splitting the
    # square root keeps t*(t + 4N + 2) from overflowing at extreme noise
    a = t + 4.0 * n_k + 2.0
    root = np.sqrt(t) * np.sqrt(1.0 / t + a)
    return a / (1.0 + root)


def _rate(t, n_k):
    # analytic in n_k (slightly negative arguments are fine), which the
    # finite-difference marginals rely on; log1p keeps sub-eps ratios alive
    e = _exp_r(t, n_k)
    gap = 2.0 * n_k + 1.0 - 0.5 * (e + 1.0 / e)
    return 0.5 * np.log1p(2.0 * gap / (1.0 / e + t)) / _LN2


def _validated(t, n_k):
    t = np.asarray(t, dtype=float)
    n_k = np.asarray(n_k, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t <= 0.0):
        raise ValueError("effective noise must be positive and finite")
    if not np.all(np.isfinite(n_k)) or np.any(n_k < 0.0):
        raise ValueError("mode budgets must be non-negative and finite")
    return t, n_k


def optimal_squeezing(t, n_k):
    """Rate-maximizing squeezing of the measured quadrature.

    Returns r with e^r = [sqrt(1 + t (t + 4 n_k + 2)) - 1]/t; always
    non-negative, with cosh(r) <= 2 n_k + 1, so the modulation budget stays
    feasible.  Accepts scalars or arrays.
    """
    scalar = np.ndim(t) == 0 and np.ndim(n_k) == 0
    t, n_k = _validated(t, n_k)
    out = np.log(_exp_r(t, n_k))
    return float(out) if scalar else out


def mode_rate(t, n_k):
    """Largest information, in bits, one mode sends at noise t and budget n_k.

    Evaluated at the optimal squeezing; zero at zero budget, increasing in the
    budget and decreasing in the noise.  Accepts scalars or arrays.
    """
    scalar = np.ndim(t) == 0 and np.ndim(n_k) == 0
    t, n_k = _validated(t, n_k)
    out = np.maximum(_rate(t, n_k), 0.0)
    return float(out) if scalar else out


@dataclass(frozen=True)
class EffectiveNoise:
    """Per-mode noise floor of a scheme's rate denominator, with nu = (1 - eta)/eta."""

    t: np.ndarray
    nu: float


def effective_noise(params: ChannelParams, env: EnvModel, scheme: str) -> EffectiveNoise:
    """Effective noise vector of a scheme; defined for 0 < eta < 1 only.

    Local modes pay nu (2 T_k + 1) >= nu; collective modes pay
    nu e^{-|s_j|} <= nu, with equality exactly when the memory vanishes.
    """
    _check_scheme(scheme)
    if not 0.0 < params.eta < 1.0:
        raise ValueError("effective noise needs 0 < eta < 1; the edges are handled by scheme_rate")
    nu = (1.0 - params.eta) / params.eta
    if scheme == "local":
        t = nu * (2.0 * env.temperatures + 1.0)
    else:
        t = nu * np.exp(-np.abs(env.squeezings))
    return EffectiveNoise(t=t, nu=nu)


@dataclass(frozen=True)
class RateResult:
    """Optimal rate of one scheme: totals, per-mode split and the optimizers."""

    scheme: str
    total_bits: float
    per_mode_bits: np.ndarray
    allocation: np.ndarray
    r_opt: np.ndarray
    per_use_bits: float


def noiseless_rate(n_mean) -> float:
    """Homodyne rate of the lossless channel per use, log2(2 N + 1)."""
    n_mean = float(n_mean)
    if not (math.isfinite(n_mean) and n_mean >= 0.0):
        raise ValueError(f"excitation budget must be a non-negative finite number, got {n_mean}")
    return math.log2(2.0 * n_mean + 1.0)


def asymptotic_rates(params: ChannelParams) -> tuple[float, float]:
    """Per-use rates in the infinite-memory limit: (local, collective).

    The local scheme drowns in the environment noise and tends to zero; the
    collective scheme reaches log2(2N + 1), the lossless-channel rate.  Both
    limits hold for any number of uses n >= 2 and any 0 < eta < 1.
    """
    if params.n < 2:
        raise ValueError("the infinite-memory limit needs at least two uses")
    if not 0.0 < params.eta < 1.0:
        raise ValueError("the infinite-memory limit needs 0 < eta < 1")
    return 0.0, noiseless_rate(params.n_mean)


def _silent_result(params: ChannelParams, scheme: str) -> RateResult:
    n = params.n
    zeros = np.zeros(n)
    return RateResult(
        scheme=scheme,
        total_bits=0.0,
        per_mode_bits=zeros,
        allocation=np.full(n, params.n_mean),
        r_opt=zeros.copy(),
        per_use_bits=0.0,
    )


def _noiseless_result(params: ChannelParams, scheme: str) -> RateResult:
    n = params.n
    per_use = noiseless_rate(params.n_mean)
    return RateResult(
        scheme=scheme,
        total_bits=n * per_use,
        per_mode_bits=np.full(n, per_use),
        allocation=np.full(n, params.n_mean),
        r_opt=np.full(n, math.log(2.0 * params.n_mean + 1.0)),
        per_use_bits=per_use,
    )


def scheme_rate(params: ChannelParams, scheme: str) -> RateResult:
    """Best achievable rate of a scheme: optimal allocation, squeezings, bits.

    eta = 0 returns the all-zero result and eta = 1 the lossless rate, both
    without touching the noise machinery (they are removable singularities of
    nu); everything else goes through water-filling of the excitation budget
    over the per-mode effective noises.
    """
    return scheme_rate_many([params], scheme)[0]


def scheme_rate_many(params_seq: Iterable[ChannelParams], scheme: str) -> list[RateResult]:
    """Evaluate :func:`scheme_rate` over many parameter points.

    Points sharing a number of uses are water-filled in one vectorized pass,
    which keeps sweeps and figure grids fast.
    """
    _check_scheme(scheme)
    params_list = list(params_seq)
    results: list[RateResult | None] = [None] * len(params_list)
    groups: dict[int, list[int]] = {}
    for i, params in enumerate(params_list):
        if params.eta == 0.0:
            results[i] = _silent_result(params, scheme)
        elif params.eta == 1.0:
            results[i] = _noiseless_result(params, scheme)
        else:
            groups.setdefault(params.n, []).append(i)

    from .allocation import waterfill  # deferred: allocation builds on this module

    for n, idx in groups.items():
        spectrum = coupling_spectrum(n)
        noise = np.stack(
            [effective_noise(params_list[i], EnvModel(params_list[i], spectrum), scheme).t for i in idx]
        )
        budgets = np.array([n * params_list[i].n_mean for i in idx])
        allocation = waterfill(noise, budgets)
        per_mode = np.maximum(_rate(noise, allocation), 0.0)
        r_opt = np.log(_exp_r(noise, allocation))
        for row, i in enumerate(idx):
            total = float(per_mode[row].sum())
            results[i] = RateResult(
                scheme=scheme,
                total_bits=total,
                per_mode_bits=per_mode[row],
                allocation=allocation[row],
                r_opt=r_opt[row],
                per_use_bits=total / n,
            )
    return results  # type: ignore[return-value]


def optimal_encoding(params: ChannelParams, result: RateResult) -> Encoding:
    """Encoding that achieves a scheme's closed-form rate through the pipeline.

    Each mode measures the quadrature with the smaller environment noise
    (either one for the local scheme, whose environment marginals are
    symmetric), squeezes that quadrature down to variance e^{-r_opt}/2 and
    rides all modulation on it.
    """
    n = params.n
    if result.allocation.shape != (n,):
        raise ValueError("rate result does not match the channel parameters")
    r_star = np.asarray(result.r_opt, dtype=float)
    modulation = np.maximum(2.0 * result.allocation + 1.0 - np.cosh(r_star), 0.0)
    zeros = np.zeros(n)
    if result.scheme == "local":
        return Encoding(basis="local", r=-r_star, c_q=modulation, c_p=zeros, theta=zeros)
    squeezings = params.s * coupling_spectrum(n).eigenvalues
    measure_p = squeezings > 0.0
    return Encoding(
        basis="collective",
        r=np.where(measure_p, r_star, -r_star),
        c_q=np.where(measure_p, 0.0, modulation),
        c_p=np.where(measure_p, modulation, 0.0),
        theta=np.where(measure_p, 0.5 * math.pi, 0.0),
    )
