"""Point- and square-post-selected teleportation with impure entanglement.

The shared pair is built from two squeezed thermal modes with variances
(V_sq, V_an); V = V_sq + V_an, C = V_an - V_sq, mean thermal photon number
nbar = (V - 1)/2 and noise excess N = 2 V_sq V_an.  The combination
m = 4 V_sq V_an = sqrt(det gamma_AB) shows up in every closed form below.

Symbols q_sigma, alpha_sigma, delta_sigma and the half-side a_half belong to
the square-region formulas only; they are unrelated to the conditional-disk
exponent and to the gain cubic despite the letter collisions in the usual
notation.
"""

import math
from dataclasses import dataclass

from .phase_space import NoisyEprSpec

__all__ = [
    "SquareRegion",
    "AppendixAux",
    "appendix_aux",
    "density_fock1",
    "density_vac",
    "density_attenuated",
    "origin_point_fock1",
    "origin_point_attenuated",
    "PointThreshold",
    "threshold_point",
    "success_prob_square",
    "origin_square_fock1",
    "threshold_square",
]


@dataclass(frozen=True)
class SquareRegion:
    """Acceptance square |x_u| <= a_half, |p_v| <= a_half in the quadrature plane."""

    a_half: float

    def __post_init__(self):
        if self.a_half <= 0:
            raise ValueError("square half-side must be positive")


def density_fock1(beta: complex, nbar: float) -> float:
    """Outcome density for the single-photon input (d^2 beta measure).

    nbar = 0 is the pure-EPR limit |beta|^2 e^(-|beta|^2) (up to the 1/pi
    absorbed into the measure convention used throughout).
    """
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    b2 = abs(beta) ** 2
    if nbar == 0:
        return b2 * math.exp(-b2)
    return (nbar / (1.0 + nbar) ** 2) * (1.0 + b2 / (nbar * (1.0 + nbar))) \
        * math.exp(-b2 / (1.0 + nbar))


def density_vac(beta: complex, nbar: float) -> float:
    """Outcome density for the vacuum input."""
    if nbar < 0:
        raise ValueError("nbar must be >= 0")
    b2 = abs(beta) ** 2
    return math.exp(-b2 / (1.0 + nbar)) / (1.0 + nbar)


def density_attenuated(beta: complex, nbar: float, eta: float) -> float:
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")
    return eta * density_fock1(beta, nbar) + (1.0 - eta) * density_vac(beta, nbar)


def origin_point_fock1(spec: NoisyEprSpec) -> float:
    """Origin value conditioned on the exact outcome beta = 0.

    -(V - m)/(pi (V - 1)) * ((V + 1)/(V + m))^2 with m = 4 V_sq V_an; equals
    -1/pi for every pure pair (m = 1 makes V - m cancel V - 1).
    """
    v = spec.V
    m = 4.0 * spec.v_sq * spec.v_an
    if abs(v - 1.0) < 1e-14:
        raise ValueError("V = 1 leaves no conditioned photon to teleport")
    return -((v - m) / (math.pi * (v - 1.0))) * ((v + 1.0) / (v + m)) ** 2


def origin_point_attenuated(spec: NoisyEprSpec, eta: float) -> float:
    """Attenuated input, beta = 0 post-selection."""
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")
    v = spec.V
    m = 4.0 * spec.v_sq * spec.v_an
    if abs(v + 1.0 - 2.0 * eta) < 1e-14:
        raise ValueError("degenerate normalization V + 1 - 2 eta = 0")
    return (m + v * (1.0 - 2.0 * eta)) / (math.pi * (v + 1.0 - 2.0 * eta)) \
        * ((v + 1.0) / (v + m)) ** 2


@dataclass(frozen=True)
class PointThreshold:
    v_th: float
    db: float
    v_asymptote: float       # N -> infinity limit (2 eta - 1)/4
    db_asymptote: float


def threshold_point(eta: float, n_excess: float) -> PointThreshold:
    """Threshold squeezed variance for the beta = 0 protocol.

    V_th = [2N - sqrt(4N^2 - 2N(2 eta - 1)^2)]/(2 (2 eta - 1)); negativity
    requires V_sq < V_th.
    """
    if not 0.5 < eta <= 1.0:
        raise ValueError("threshold exists only for 1/2 < eta <= 1")
    if n_excess < 0.5:
        raise ValueError("N >= 1/2 required")
    e = 2.0 * eta - 1.0
    disc = 4.0 * n_excess ** 2 - 2.0 * n_excess * e * e
    assert disc >= 0.0, "discriminant cannot go negative for N >= 1/2"
    v_th = (2.0 * n_excess - math.sqrt(disc)) / (2.0 * e)
    v_inf = e / 4.0
    to_db = lambda v: 10.0 * math.log10(2.0 * v)
    return PointThreshold(v_th, to_db(v_th), v_inf, to_db(v_inf))


@dataclass(frozen=True)
class AppendixAux:
    """Auxiliary quantities of the square-region origin formula."""

    q_sigma: float
    alpha_sigma: float
    delta_sigma: float
    b_erf: float


def appendix_aux(spec: NoisyEprSpec, G: float, a_half: float) -> AppendixAux:
    v, c = spec.V, spec.C
    m = 4.0 * spec.v_sq * spec.v_an
    q = (v * (1.0 + G * G) - 2.0 * c * G + G * G) / (v + m)
    alpha = (v + m) / m
    delta = (c * G - v) / m
    b = a_half / math.sqrt(2.0 * (1.0 + spec.nbar))
    return AppendixAux(q, alpha, delta, b)


def success_prob_square(a_half: float, nbar: float) -> float:
    """Probability of the outcome quadratures falling inside the square."""
    if a_half <= 0:
        raise ValueError("a_half must be positive")
    if nbar <= 0:
        raise ValueError("nbar must be positive")
    b = a_half / math.sqrt(2.0 * (1.0 + nbar))
    erf_b = math.erf(b)
    return erf_b * (erf_b - 2.0 * b * math.exp(-b * b) / (math.sqrt(math.pi) * (1.0 + nbar)))


def origin_square_fock1(spec: NoisyEprSpec, G: float, a_half: float) -> float:
    """Origin value conditioned on the square region (single-photon input)."""
    if G < 0:
        raise ValueError("G must be >= 0")
    if a_half <= 0:
        raise ValueError("a_half must be positive")
    aux = appendix_aux(spec, G, a_half)
    q, al, de = aux.q_sigma, aux.alpha_sigma, aux.delta_sigma
    p_sigma = success_prob_square(a_half, spec.nbar)
    erf_q = math.erf(a_half * math.sqrt(q))
    pref = erf_q / (4.0 * math.pi * p_sigma * spec.v_sq * spec.v_an * al * q)
    inner = (2.0 / al + 2.0 * de * de / (al * al * q) - 1.0) * erf_q \
        - (4.0 * de * de * a_half / (al * al * math.sqrt(math.pi * q))) \
        * math.exp(-q * a_half * a_half)
    return pref * inner


def threshold_square(n_excess: float, G: float, a_half: float,
                     tol: float = 1e-6) -> float:
    """Squeezed variance where the square-conditioned origin changes sign.

    Bisection in V_sq over (1e-4, 1/2); returned in dB like the tables.
    """
    if n_excess < 0.5:
        raise ValueError("N >= 1/2 required")

    def w_of(v_sq):
        return origin_square_fock1(NoisyEprSpec.from_excess(v_sq, n_excess), G, a_half)

    # stop 1e-6 short of V_sq = 1/2: for N = 1/2 that endpoint is the bare
    # vacuum pair and nbar rounds to zero in floating point
    lo, hi = 1e-4, 0.5 - 1e-6
    w_lo, w_hi = w_of(lo), w_of(hi)
    if w_lo * w_hi > 0:
        raise ValueError("no sign change in the bisection bracket")
    while hi - lo > tol * 0.5:
        mid = 0.5 * (lo + hi)
        if w_of(mid) * w_lo > 0:
            lo = mid
        else:
            hi = mid
    v_th = 0.5 * (lo + hi)
    return 10.0 * math.log10(2.0 * v_th)
