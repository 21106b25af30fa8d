"""The nonunity-gain teleportation channel as a Gaussian CP map.

A map is the pair (S, Q): the output Wigner function is the input smeared
by a Gaussian kernel of covariance Q after the linear action S.  For the
teleportation protocol with EPR squeezing r, beam-splitter transmissivity
T and electronic gains (g_x, g_p),

    S = diag(g_x sqrt(R), g_p sqrt(T)),    R = 1 - T,
    Q = diag(Q_x, Q_p),
    Q_x = cosh 2r + g_x^2 T cosh 2r - 2 g_x sqrt(T) sinh 2r,
    Q_p = cosh 2r + g_p^2 R cosh 2r - 2 g_p sqrt(R) sinh 2r.

The symmetric protocol (T = 1/2, g_x = g_p = g) is parameterized by the
normalized gain G = g/sqrt(2), giving S = G*I and Q = alpha(G)*I with
alpha(G) = cosh 2r (1 + G^2) - 2 G sinh 2r.
"""

import math
from dataclasses import dataclass

import numpy as np

from .phase_space import PolyGaussWigner, WignerMixture

__all__ = [
    "LAMBDA",
    "J",
    "TeleportParams",
    "GaussianMap",
    "build_map",
    "is_completely_positive",
    "apply_map",
    "origin_fock1",
    "alpha_gain",
    "origin_symmetric",
    "origin_unity",
    "threshold_unconditional",
    "compensating_params",
]

LAMBDA = np.diag([1.0, -1.0])            # reflection entering the channel kernel
J = np.array([[0.0, 1.0], [-1.0, 0.0]])  # single-mode symplectic form


@dataclass(frozen=True)
class TeleportParams:
    """Protocol parameters: EPR squeezing r, transmissivity T, gains g_x, g_p."""

    r: float
    T: float
    g_x: float
    g_p: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("squeezing r must be >= 0")
        if not 0 < self.T < 1:
            raise ValueError("transmissivity must lie in (0, 1)")
        if self.g_x < 0 or self.g_p < 0 or not (math.isfinite(self.g_x) and math.isfinite(self.g_p)):
            raise ValueError("gains must be finite and nonnegative")

    @classmethod
    def symmetric(cls, r: float, G: float) -> "TeleportParams":
        """Balanced splitter with normalized gain G (g = G sqrt(2))."""
        g = G * math.sqrt(2.0)
        return cls(r=r, T=0.5, g_x=g, g_p=g)

    @property
    def G(self) -> float:
        """Normalized gain; defined for the symmetric protocol only."""
        if abs(self.T - 0.5) > 1e-12 or abs(self.g_x - self.g_p) > 1e-12:
            raise ValueError("normalized gain needs T=1/2 and g_x=g_p")
        return self.g_x / math.sqrt(2.0)


@dataclass(frozen=True)
class GaussianMap:
    S: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.S, dtype=float)
        q = np.asarray(self.Q, dtype=float)
        if s.shape != (2, 2) or q.shape != (2, 2):
            raise ValueError("S and Q must be 2x2")
        if not np.allclose(q, q.T, atol=1e-12):
            raise ValueError("Q must be symmetric")
        q = 0.5 * (q + q.T)
        if np.linalg.eigvalsh(q)[0] < -1e-12:
            raise ValueError("Q must be positive semidefinite")
        object.__setattr__(self, "S", s)
        object.__setattr__(self, "Q", q)


def build_map(params: TeleportParams) -> GaussianMap:
    r, t = params.r, params.T
    rr = 1.0 - t
    ch, sh = math.cosh(2.0 * r), math.sinh(2.0 * r)
    s = np.diag([params.g_x * math.sqrt(rr), params.g_p * math.sqrt(t)])
    q_x = ch + params.g_x ** 2 * t * ch - 2.0 * params.g_x * math.sqrt(t) * sh
    q_p = ch + params.g_p ** 2 * rr * ch - 2.0 * params.g_p * math.sqrt(rr) * sh
    return GaussianMap(s, np.diag([q_x, q_p]))


def is_completely_positive(gmap: GaussianMap, tol: float = 1e-12) -> bool:
    """CP condition Q + iJ - i S J S^T >= 0 (Hermitian eigenvalue test)."""
    m = gmap.Q.astype(complex) + 1j * J - 1j * (gmap.S @ J @ gmap.S.T)
    return bool(np.linalg.eigvalsh(m)[0] >= -tol)


def _apply_one(gmap: GaussianMap, w: PolyGaussWigner) -> PolyGaussWigner:
    s, q = gmap.S, gmap.Q
    gamma = w.Gamma
    gamma_out = s @ gamma @ s.T + q
    if np.linalg.eigvalsh(gamma_out)[0] <= 0:
        raise ValueError("singular output Gaussian; map is not usable on this input")
    gi = np.linalg.inv(gamma_out)
    sg = s @ gamma
    m_out = gi @ sg @ w.M @ sg.T @ gi
    # c_out keeps tr(M Gamma) + c invariant, the closed-form normalization
    c_out = float(np.trace(w.M @ gamma) - np.trace(w.M @ gamma @ s.T @ gi @ sg) + w.c)
    return PolyGaussWigner(m_out, c_out, gamma_out)


def apply_map(gmap: GaussianMap, w):
    """Channel action on a PolyGaussWigner or term-by-term on a mixture."""
    if isinstance(w, WignerMixture):
        return WignerMixture(tuple((wt, _apply_one(gmap, term)) for wt, term in w.terms))
    return _apply_one(gmap, w)


def origin_fock1(gmap: GaussianMap) -> float:
    """Origin value of the teleported single photon, closed determinant form."""
    s, q = gmap.S, gmap.Q
    det_s = np.linalg.det(s)
    det_q = np.linalg.det(q)
    det_g = np.linalg.det(s @ s.T + q)
    return float((det_q - det_s ** 2) / (math.pi * det_g ** 1.5))


def alpha_gain(G: float, r: float) -> float:
    """Added-noise coefficient alpha(G) of the symmetric protocol."""
    return math.cosh(2.0 * r) * (1.0 + G * G) - 2.0 * G * math.sinh(2.0 * r)


def origin_symmetric(r: float, G: float, eta: float = 1.0) -> float:
    """Origin value for the symmetric protocol.

    eta = 1 is the single-photon input (alpha - G^2)/(pi (alpha + G^2)^2);
    eta < 1 mixes in the teleported-vacuum term 1/(pi (alpha + G^2)).
    """
    if r < 0 or G < 0:
        raise ValueError("r and G must be >= 0")
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")
    a = alpha_gain(G, r)
    fock = (a - G * G) / (math.pi * (a + G * G) ** 2)
    if eta == 1.0:
        return fock
    return eta * fock + (1.0 - eta) / (math.pi * (a + G * G))


def origin_unity(r: float) -> float:
    """Unity-gain origin value (2 e^(-2r) - 1)/(pi (2 e^(-2r) + 1)^2)."""
    if r < 0:
        raise ValueError("r must be >= 0")
    e = 2.0 * math.exp(-2.0 * r)
    return (e - 1.0) / (math.pi * (e + 1.0) ** 2)


@dataclass(frozen=True)
class UnconditionalThresholds:
    r_th_gain: float      # optimal-gain protocol
    r_th_unity: float     # unity-gain protocol
    db_gain: float
    db_unity: float


def threshold_unconditional(eta: float) -> UnconditionalThresholds:
    """Squeezing thresholds for negativity of the attenuated-input output.

    Defined for 1/2 < eta <= 1; below eta = 1/2 the input itself is
    nonnegative at the origin and no threshold exists.
    """
    if not 0.5 < eta <= 1.0:
        raise ValueError("thresholds exist only for 1/2 < eta <= 1")
    r_gain = math.atanh(math.sqrt((1.0 - eta) / eta))
    r_unity = math.log(math.sqrt(2.0 / (2.0 * eta - 1.0)))
    to_db = lambda r: 10.0 * math.log10(math.exp(-2.0 * r))
    return UnconditionalThresholds(r_gain, r_unity, to_db(r_gain), to_db(r_unity))


def compensating_params(t: float, G: float, r: float) -> TeleportParams:
    """Protocol compensating an input squeezed by t at normalized gain G.

    Unbalancing the splitter to T/R = e^(-2t) with gains g_x = e^t G/sqrt(R),
    g_p = e^(-t) G/sqrt(T) turns the channel on the squeezed photon into the
    symmetric channel on the unsqueezed one.
    """
    if G < 0:
        raise ValueError("G must be >= 0")
    T = 1.0 / (1.0 + math.exp(2.0 * t))
    R = 1.0 - T
    return TeleportParams(r=r, T=T,
                          g_x=math.exp(t) * G / math.sqrt(R),
                          g_p=math.exp(-t) * G / math.sqrt(T))
