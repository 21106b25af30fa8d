"""States, conventions and unit conversions.

Conventions fixed once here and assumed everywhere else: [x, p] = i with
vacuum quadrature variance 1/2, so the vacuum Wigner function is
exp(-x^2 - p^2)/pi.  Two-mode covariance matrices are scaled so that
gamma_vac = identity (entries are twice the quadrature covariances).

Squeezing is reported in dB as 10*log10(2*V_sq) with V_sq = exp(-2r)/2;
noise excess as 10*log10(2*N) with N = 2*V_sq*V_an (N = 1/2 when pure).
"""

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PhasePoint",
    "SqueezeSpec",
    "PolyGaussWigner",
    "WignerMixture",
    "NoisyEprSpec",
    "TwoModeCM",
    "make_fock1",
    "make_vacuum",
    "make_squeezed_fock1",
    "make_attenuated",
    "subtraction_squeeze",
    "cm_is_physical",
    "squeeze_db",
    "v_sq_from_db",
    "r_from_db",
    "db_from_r",
    "noise_excess_db",
    "noise_from_db",
]

SIGMA_Z = np.diag([1.0, -1.0])


class PhasePoint(tuple):
    """A point (x, p) in single-mode phase space."""

    def __new__(cls, x: float, p: float):
        if not (math.isfinite(x) and math.isfinite(p)):
            raise ValueError("phase-space coordinates must be finite")
        return super().__new__(cls, (float(x), float(p)))

    @property
    def x(self):
        return self[0]

    @property
    def p(self):
        return self[1]


# dB conversions ------------------------------------------------------------

def squeeze_db(v_sq: float) -> float:
    """Squeezed variance in dB relative to vacuum (1/2)."""
    if v_sq <= 0:
        raise ValueError("v_sq must be positive")
    return 10.0 * math.log10(2.0 * v_sq)


def v_sq_from_db(db: float) -> float:
    return 0.5 * 10.0 ** (db / 10.0)


def r_from_db(db: float) -> float:
    """Squeezing parameter r with e^(-2r)/2 at the given dB level."""
    return -db * math.log(10.0) / 20.0


def db_from_r(r: float) -> float:
    return squeeze_db(0.5 * math.exp(-2.0 * r))


def noise_excess_db(n_excess: float) -> float:
    """Noise-excess parameter N = 2*V_sq*V_an in dB (0 dB = pure)."""
    if n_excess <= 0:
        raise ValueError("N must be positive")
    return 10.0 * math.log10(2.0 * n_excess)


def noise_from_db(db: float) -> float:
    return 0.5 * 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class SqueezeSpec:
    """Single squeezing parameter with its derived forms."""

    r: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("squeezing parameter must be >= 0")

    @property
    def lam(self) -> float:
        return math.tanh(self.r)

    @property
    def v_sq(self) -> float:
        return 0.5 * math.exp(-2.0 * self.r)

    @property
    def db(self) -> float:
        return squeeze_db(self.v_sq)

    @classmethod
    def from_db(cls, db: float) -> "SqueezeSpec":
        return cls(r_from_db(db))

    @classmethod
    def from_lambda(cls, lam: float) -> "SqueezeSpec":
        if not 0 <= lam < 1:
            raise ValueError("lambda must lie in [0, 1)")
        return cls(math.atanh(lam))


# Wigner family ------------------------------------------------------------

def _sym2(mat) -> np.ndarray:
    m = np.asarray(mat, dtype=float)
    if m.shape != (2, 2) or not np.allclose(m, m.T, atol=1e-12):
        raise ValueError("expected a symmetric 2x2 matrix")
    return 0.5 * (m + m.T)


@dataclass(frozen=True)
class PolyGaussWigner:
    """Wigner function (2 r^T M r + c) * exp(-r^T Gamma^-1 r) / (pi sqrt(det Gamma)).

    The family is closed under the teleportation channel and covers the
    single-photon state (M=I, c=-1, Gamma=I), its squeezed version, the
    vacuum (M=0, c=1) and every channel output of these.
    """

    M: np.ndarray
    c: float
    Gamma: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "M", _sym2(self.M))
        object.__setattr__(self, "Gamma", _sym2(self.Gamma))
        object.__setattr__(self, "c", float(self.c))
        if np.linalg.eigvalsh(self.Gamma)[0] <= 0:
            raise ValueError("Gamma must be positive definite")

    def __call__(self, x, p):
        """Evaluate on scalars or broadcastable arrays of (x, p)."""
        x = np.asarray(x, dtype=float)
        p = np.asarray(p, dtype=float)
        gi = np.linalg.inv(self.Gamma)
        quad = 2.0 * (self.M[0, 0] * x * x + 2.0 * self.M[0, 1] * x * p
                      + self.M[1, 1] * p * p) + self.c
        expo = gi[0, 0] * x * x + 2.0 * gi[0, 1] * x * p + gi[1, 1] * p * p
        out = quad * np.exp(-expo) / (math.pi * math.sqrt(np.linalg.det(self.Gamma)))
        return out if out.shape else float(out)

    def origin(self) -> float:
        return self.c / (math.pi * math.sqrt(np.linalg.det(self.Gamma)))

    def integral(self) -> float:
        """Total phase-space integral, closed form tr(M Gamma) + c."""
        return float(np.trace(self.M @ self.Gamma)) + self.c


@dataclass(frozen=True)
class WignerMixture:
    """Convex combination of PolyGaussWigner terms."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(w), t) for w, t in self.terms)
        object.__setattr__(self, "terms", terms)
        total = sum(w for w, _ in terms)
        if abs(total - 1.0) > 1e-12:
            raise ValueError("mixture weights must sum to 1")
        if any(w < -1e-15 for w, _ in terms):
            raise ValueError("mixture weights must be nonnegative")

    def __call__(self, x, p):
        return sum(w * t(x, p) for w, t in self.terms)

    def origin(self) -> float:
        return sum(w * t.origin() for w, t in self.terms)

    def integral(self) -> float:
        return sum(w * t.integral() for w, t in self.terms)


def make_fock1() -> PolyGaussWigner:
    """Single-photon Fock state; origin value -1/pi."""
    return PolyGaussWigner(np.eye(2), -1.0, np.eye(2))


def make_vacuum() -> PolyGaussWigner:
    return PolyGaussWigner(np.zeros((2, 2)), 1.0, np.eye(2))


def make_squeezed_fock1(t: float) -> PolyGaussWigner:
    """Squeezed single photon; t > 0 squeezes x (variance e^(-2t)/2)."""
    gamma = np.diag([math.exp(-2.0 * t), math.exp(2.0 * t)])
    return PolyGaussWigner(np.linalg.inv(gamma), -1.0, gamma)


def make_attenuated(eta: float) -> WignerMixture:
    """Single photon after a lossy channel: eta |1><1| + (1-eta) |0><0|."""
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")
    return WignerMixture(((eta, make_fock1()), (1.0 - eta, make_vacuum())))


def subtraction_squeeze(tau: float, s: float) -> float:
    """Effective squeeze t of a photon subtracted through a beam splitter,
    tanh t = tau * tanh s."""
    if not 0 <= tau <= 1:
        raise ValueError("transmissivity must lie in [0, 1]")
    if s < 0:
        raise ValueError("source squeeze must be >= 0")
    return math.atanh(tau * math.tanh(s))


# two-mode covariance matrices ----------------------------------------------

@dataclass(frozen=True)
class NoisyEprSpec:
    """Squeezed/antisqueezed variances of the two modes building the EPR pair."""

    v_sq: float
    v_an: float

    def __post_init__(self):
        if self.v_sq <= 0 or self.v_an <= 0:
            raise ValueError("variances must be positive")
        if self.v_sq * self.v_an < 0.25 - 1e-12:
            raise ValueError("V_sq * V_an >= 1/4 required")

    @property
    def V(self) -> float:
        return self.v_sq + self.v_an

    @property
    def C(self) -> float:
        return self.v_an - self.v_sq

    @property
    def nbar(self) -> float:
        """Mean thermal photon number of either reduced mode."""
        return 0.5 * (self.V - 1.0)

    @property
    def n_excess(self) -> float:
        return 2.0 * self.v_sq * self.v_an

    @property
    def is_pure(self) -> bool:
        return abs(self.v_sq * self.v_an - 0.25) < 1e-12

    @classmethod
    def pure(cls, v_sq: float) -> "NoisyEprSpec":
        return cls(v_sq, 0.25 / v_sq)

    @classmethod
    def from_excess(cls, v_sq: float, n_excess: float) -> "NoisyEprSpec":
        """Fix V_an through N = 2*V_sq*V_an."""
        return cls(v_sq, n_excess / (2.0 * v_sq))

    def cm(self) -> "TwoModeCM":
        return TwoModeCM.from_spec(self)


@dataclass(frozen=True)
class TwoModeCM:
    """4x4 covariance matrix, blocks A = B = V*I and D = C*sigma_z."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        if m.shape != (4, 4) or not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("expected a symmetric 4x4 matrix")
        object.__setattr__(self, "mat", 0.5 * (m + m.T))

    @classmethod
    def from_spec(cls, spec: NoisyEprSpec) -> "TwoModeCM":
        m = np.block([[spec.V * np.eye(2), spec.C * SIGMA_Z],
                      [spec.C * SIGMA_Z, spec.V * np.eye(2)]])
        return cls(m)

    @property
    def A(self) -> np.ndarray:
        return self.mat[:2, :2]

    @property
    def B(self) -> np.ndarray:
        return self.mat[2:, 2:]

    @property
    def D(self) -> np.ndarray:
        return self.mat[:2, 2:]


def cm_is_physical(gamma: TwoModeCM, tol: float = 1e-12) -> bool:
    """Physicality of a two-mode covariance matrix (gamma_vac = I scaling).

    Checks A, B > 0 together with
        det A + det B + 2 det D <= 1 + det gamma
        2 sqrt(det A det B) + (det D)^2 <= det gamma + det A det B
    """
    a, b, d = gamma.A, gamma.B, gamma.D
    if np.linalg.eigvalsh(a)[0] <= tol or np.linalg.eigvalsh(b)[0] <= tol:
        return False
    det_a, det_b, det_d = (np.linalg.det(m) for m in (a, b, d))
    det_g = np.linalg.det(gamma.mat)
    if det_a + det_b + 2.0 * det_d > 1.0 + det_g + tol:
        return False
    if 2.0 * math.sqrt(det_a * det_b) + det_d ** 2 > det_g + det_a * det_b + tol:
        return False
    return True
