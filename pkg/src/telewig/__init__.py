"""Wigner-function negativity of teleported single-photon states.

The package computes the value of the Wigner function at the phase-space
origin after continuous-variable teleportation of a single photon: the
unconditional protocol at arbitrary gain, the gain-optimized protocol, the
measurement-conditioned (post-selected) protocol and the protocol fed by an
impure entangled pair.  Every closed formula is cross-checked by independent
numerical oracles (quadrature over the channel kernel, truncated Fock-space
simulation, Monte Carlo outcome averaging).
"""

from .conditional_teleport import (
    origin_disk_attenuated,
    origin_disk_fock1,
    origin_pointlimit_attenuated,
    optimize_gain_disk,
    success_prob_disk,
    success_prob_disk_attenuated,
)
from .gain_optimizer import minimize_numeric, optimal_gain, ralph_gain
from .gaussian_channel import (
    GaussianMap,
    TeleportParams,
    apply_map,
    build_map,
    compensating_params,
    is_completely_positive,
    origin_symmetric,
    origin_unity,
    threshold_unconditional,
)
from .noisy_epr import (
    origin_point_attenuated,
    origin_point_fock1,
    origin_square_fock1,
    success_prob_square,
    threshold_point,
    threshold_square,
)
from .phase_space import (
    NoisyEprSpec,
    PolyGaussWigner,
    SqueezeSpec,
    WignerMixture,
    make_attenuated,
    make_fock1,
    make_squeezed_fock1,
    make_vacuum,
)

__version__ = "0.1.0"

__all__ = [
    "GaussianMap",
    "NoisyEprSpec",
    "PolyGaussWigner",
    "SqueezeSpec",
    "TeleportParams",
    "WignerMixture",
    "apply_map",
    "build_map",
    "compensating_params",
    "is_completely_positive",
    "make_attenuated",
    "make_fock1",
    "make_squeezed_fock1",
    "make_vacuum",
    "minimize_numeric",
    "optimal_gain",
    "optimize_gain_disk",
    "origin_disk_attenuated",
    "origin_disk_fock1",
    "origin_point_attenuated",
    "origin_point_fock1",
    "origin_pointlimit_attenuated",
    "origin_square_fock1",
    "origin_symmetric",
    "origin_unity",
    "ralph_gain",
    "success_prob_disk",
    "success_prob_disk_attenuated",
    "success_prob_square",
    "threshold_point",
    "threshold_square",
    "threshold_unconditional",
    "__version__",
]
