"""Bit rates of a lossy bosonic memory channel under homodyne detection.

The channel mixes each of n input modes with the matching mode of a common
environment at a beam splitter of transmissivity eta.  The environment is a
multimode squeezed vacuum whose squeezing strength s correlates successive
uses, i.e. gives the channel memory.  This package computes the largest
classical information rate homodyne detection achieves under a mean
excitation budget, for two Gaussian strategies: a local scheme (separable
states, per-use encoding and decoding) and a collective scheme (states
entangled across uses, encoded and decoded in the environment eigenbasis),
together with parameter sweeps, report figures and the infinite-memory
limits.
"""

from .allocation import AllocationProblem, brute_force, marginal_rate, optimize, waterfill
from .channel import (
    Encoding,
    HomodynePlan,
    apply_channel,
    homodyne_covariance,
    input_covariances,
    mutual_information,
    per_mode_information,
    scheme_mutual_information,
)
from .environment import (
    ChannelParams,
    EnvModel,
    collective_squeezings,
    effective_temperature,
    effective_temperatures,
    env_covariance,
)
from .rates import (
    EffectiveNoise,
    RateResult,
    asymptotic_rates,
    effective_noise,
    mode_rate,
    noiseless_rate,
    optimal_encoding,
    optimal_squeezing,
    scheme_rate,
    scheme_rate_many,
)
from .spectral import (
    Spectrum,
    congruence_from_collective,
    congruence_to_collective,
    coupling_matrix,
    coupling_spectrum,
    from_collective,
    interleave_modes,
    to_collective,
)

__version__ = "0.1.0"

__all__ = [
    "AllocationProblem",
    "ChannelParams",
    "EffectiveNoise",
    "Encoding",
    "EnvModel",
    "HomodynePlan",
    "RateResult",
    "Spectrum",
    "apply_channel",
    "asymptotic_rates",
    "brute_force",
    "collective_squeezings",
    "congruence_from_collective",
    "congruence_to_collective",
    "coupling_matrix",
    "coupling_spectrum",
    "effective_noise",
    "effective_temperature",
    "effective_temperatures",
    "env_covariance",
    "from_collective",
    "homodyne_covariance",
    "input_covariances",
    "interleave_modes",
    "marginal_rate",
    "mode_rate",
    "mutual_information",
    "noiseless_rate",
    "optimal_encoding",
    "optimal_squeezing",
    "optimize",
    "per_mode_information",
    "scheme_mutual_information",
    "scheme_rate",
    "scheme_rate_many",
    "to_collective",
    "waterfill",
    "__version__",
]
