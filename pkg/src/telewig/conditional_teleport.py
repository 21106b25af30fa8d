"""Post-selected teleportation with a pure shared EPR pair.

The Bell measurement outcome beta = (x_u + i p_v)/sqrt(2) is accepted when
it falls inside a disk of radius K centered at the origin.  All closed forms
below are parameterized by lambda = tanh r of the shared pair, the
normalized gain G and the disk radius K; eta < 1 attenuates the input
photon before teleportation.

Naming note: the exponent a_cond = (1 - lambda^2) + 2 (G - lambda)^2 of the
conditional formulas is distinct from the square half-side a_half used for
the noisy-entanglement appendix region; the two never mix.
"""

import math
from dataclasses import dataclass

from .gain_optimizer import minimize_numeric

__all__ = [
    "DiskRegion",
    "cond_exponent",
    "success_prob_disk",
    "origin_disk_fock1",
    "success_prob_disk_attenuated",
    "origin_disk_attenuated",
    "origin_pointlimit_attenuated",
    "optimize_gain_disk",
]


@dataclass(frozen=True)
class DiskRegion:
    """Acceptance disk |beta| <= K in the measurement-outcome plane."""

    K: float

    def __post_init__(self):
        if self.K <= 0:
            raise ValueError("disk radius must be positive")


def _check(lam: float, K: float, eta: float = 1.0):
    if not 0 <= lam < 1:
        raise ValueError("lambda must lie in [0, 1)")
    if K <= 0:
        raise ValueError("K must be positive")
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")


def cond_exponent(lam: float, G: float) -> float:
    """Exponent a_cond = (1 - lambda^2) + 2 (G - lambda)^2; positive for lambda < 1."""
    return (1.0 - lam * lam) + 2.0 * (G - lam) ** 2


def success_prob_disk(lam: float, K: float) -> float:
    """Probability of the outcome falling inside the disk (gain independent)."""
    _check(lam, K)
    s = 1.0 - lam * lam
    return 1.0 - (1.0 + s * s * K * K) * math.exp(-s * K * K)


def origin_disk_fock1(lam: float, G: float, K: float) -> float:
    """Origin Wigner value of the disk-conditioned teleported photon.

    Parity readout of the accepted-and-renormalized state; reduces to -1/pi
    as K -> 0 with G -> lambda.
    """
    _check(lam, K)
    if G < 0:
        raise ValueError("G must be >= 0")
    s = 1.0 - lam * lam
    a = cond_exponent(lam, G)
    ak2 = a * K * K
    t1 = -(lam * lam / a) * (1.0 - math.exp(-ak2))
    t2 = ((lam * lam - 2.0 * G * lam + 1.0) ** 2 / (a * a)) \
        * (1.0 - (1.0 + ak2) * math.exp(-ak2))
    return (s / (math.pi * success_prob_disk(lam, K))) * (t1 + t2)


def success_prob_disk_attenuated(lam: float, K: float, eta: float) -> float:
    _check(lam, K, eta)
    s = 1.0 - lam * lam
    return 1.0 - (1.0 + eta * s * s * K * K) * math.exp(-s * K * K)


def origin_disk_attenuated(lam: float, G: float, K: float, eta: float) -> float:
    """Attenuated input: eta-weighted photon branch plus vacuum branch.

    The photon branch is origin_disk_fock1 rescaled by P/P_eta; the vacuum
    branch is the coherent-state parity average over the disk.
    """
    _check(lam, K, eta)
    s = 1.0 - lam * lam
    a = cond_exponent(lam, G)
    p_eta = success_prob_disk_attenuated(lam, K, eta)
    w1 = origin_disk_fock1(lam, G, K) * success_prob_disk(lam, K) / p_eta
    w0 = (s / (math.pi * p_eta * a)) * (1.0 - math.exp(-a * K * K))
    return eta * w1 + (1.0 - eta) * w0


def origin_pointlimit_attenuated(lam: float, eta: float) -> float:
    """K -> 0 limit of the attenuated conditional origin value.

    (1/pi)(1 - eta - eta lambda^2)/(1 - eta + eta lambda^2); equals -1/pi at
    eta = 1 and changes sign exactly at lambda^2 = (1 - eta)/eta, the same
    threshold as the unconditional protocol.
    """
    if not 0 <= lam < 1:
        raise ValueError("lambda must lie in [0, 1)")
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")
    return (1.0 - eta - eta * lam * lam) / (math.pi * (1.0 - eta + eta * lam * lam))


def optimize_gain_disk(lam: float, K: float, eta: float = 1.0,
                       bracket=(1e-6, 2.0)) -> float:
    """Gain minimizing the conditional origin value (numeric)."""
    _check(lam, K, eta)
    if eta == 1.0:
        return minimize_numeric(lambda g: origin_disk_fock1(lam, g, K), bracket)
    return minimize_numeric(lambda g: origin_disk_attenuated(lam, g, K, eta), bracket)
