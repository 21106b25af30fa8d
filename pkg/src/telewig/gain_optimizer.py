"""Gain optimization for the symmetric teleportation protocol.

For the single-photon input the stationarity condition of the origin value
with respect to the normalized gain G is the cubic

    G^3 + a G^2 + b G + c = 0,
    a = -3 coth r,
    b = 2 + coth^2(2r) + 3 cosh 2r / sinh^2(2r),
    c = -coth 2r,

which has three real roots in the regime of interest; the physical optimum
is the middle-valued one (the trigonometric branch labeled 2 here).  For
other inputs (attenuated photon, post-selected protocols) the gain is found
numerically by a bracketing scan plus golden-section refinement.
"""

import math
from dataclasses import dataclass

import numpy as np

from .gaussian_channel import TeleportParams, build_map, origin_fock1, origin_symmetric

__all__ = [
    "R_MIN",
    "CubicCoeffs",
    "coth",
    "cubic_coefficients",
    "cubic_roots",
    "optimal_gain",
    "minimize_numeric",
    "three_variable_check",
    "ralph_gain",
]

R_MIN = 1e-3          # below this coth(r) makes the cubic ill-conditioned
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def coth(x: float) -> float:
    return math.cosh(x) / math.sinh(x)


@dataclass(frozen=True)
class CubicCoeffs:
    """Coefficients of G^3 + a G^2 + b G + c and its depressed form."""

    a: float
    b: float
    c: float

    @property
    def p(self) -> float:
        return self.b - self.a ** 2 / 3.0

    @property
    def q_cub(self) -> float:
        return self.c - self.a * self.b / 3.0 + 2.0 * self.a ** 3 / 27.0

    @property
    def cos_phi(self) -> float:
        if self.p >= 0:
            raise ValueError("depressed cubic must have p < 0 for three real roots")
        return -(self.q_cub / 2.0) * math.sqrt(-27.0 / self.p ** 3)


def cubic_coefficients(r: float) -> CubicCoeffs:
    if r <= R_MIN:
        raise ValueError("cubic is ill-conditioned for r <= %g; use minimize_numeric" % R_MIN)
    a = -3.0 * coth(r)
    b = 2.0 + coth(2.0 * r) ** 2 + 3.0 * math.cosh(2.0 * r) / math.sinh(2.0 * r) ** 2
    c = -coth(2.0 * r)
    return CubicCoeffs(a, b, c)


def cubic_roots(cc: CubicCoeffs) -> tuple:
    """The three real roots (G_1, G_2, G_3) by the trigonometric method.

    G_2 carries the (phi + pi) cosine branch; it is the middle root by value
    and the one minimizing the output Wigner origin.
    """
    cphi = cc.cos_phi
    if abs(cphi) > 1.0 + 1e-12:
        raise ValueError("cos(phi) outside [-1, 1] beyond clamp tolerance")
    phi = math.acos(max(-1.0, min(1.0, cphi)))
    amp = 2.0 * math.sqrt(-cc.p / 3.0)
    shift = -cc.a / 3.0
    g1 = amp * math.cos(phi / 3.0) + shift
    g2 = -amp * math.cos((phi + math.pi) / 3.0) + shift
    g3 = -amp * math.cos((phi - math.pi) / 3.0) + shift
    return g1, g2, g3


def optimal_gain(r: float) -> float:
    """Gain minimizing the single-photon origin value at squeezing r."""
    if r <= 0:
        raise ValueError("r must be positive")
    if r <= R_MIN:
        return minimize_numeric(lambda g: origin_symmetric(r, g), (1e-6, 2.0 * coth(r)))
    roots = cubic_roots(cubic_coefficients(r))
    vals = [origin_symmetric(r, g) for g in roots]
    best = int(np.argmin(vals))
    if vals.count(min(vals)) > 1:           # never observed; deterministic tie-break
        best = min(i for i, v in enumerate(vals) if v == min(vals))
    return roots[best]


def minimize_numeric(objective, bracket, tol: float = 1e-10, n_scan: int = 241) -> float:
    """Scalar minimizer: coarse scan to bracket, golden-section to refine.

    The scan must locate an interior minimum; hitting either bracket edge
    raises, since golden-section is only trustworthy on a unimodal interval.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise ValueError("empty bracket")
    grid = np.linspace(lo, hi, n_scan)
    vals = [objective(g) for g in grid]
    i = int(np.argmin(vals))
    if i == 0 or i == n_scan - 1:
        raise ValueError("no interior minimum found in bracket")
    a, b = grid[i - 1], grid[i + 1]
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = objective(d)
    return 0.5 * (a + b)


@dataclass(frozen=True)
class ThreeVariableReport:
    g_x: float
    g_p: float
    T: float
    value: float
    symmetric_value: float   # origin at T=1/2, g_x=g_p=sqrt(2) G_opt


def three_variable_check(r: float, sweeps: int = 40) -> ThreeVariableReport:
    """Free minimization over (g_x, g_p, T) of the general origin formula.

    Confirms the symmetric protocol: the minimum sits at T = 1/2 with
    g_x = g_p, matching the normalized-gain optimum.
    """
    if not 0.1 <= r <= 1.5:
        raise ValueError("check is calibrated for r in [0.1, 1.5]")

    def objective(g_x, g_p, t):
        return origin_fock1(build_map(TeleportParams(r=r, T=t, g_x=g_x, g_p=g_p)))

    best = None
    for t in np.linspace(0.2, 0.8, 13):
        for gx in np.linspace(0.3, 3.0, 14):
            for gp in np.linspace(0.3, 3.0, 14):
                v = objective(gx, gp, t)
                if best is None or v < best[0]:
                    best = (v, gx, gp, t)
    _, gx, gp, t = best
    for _ in range(sweeps):
        gx = minimize_numeric(lambda z: objective(z, gp, t), (max(gx - 0.3, 0.01), gx + 0.3))
        gp = minimize_numeric(lambda z: objective(gx, z, t), (max(gp - 0.3, 0.01), gp + 0.3))
        t = minimize_numeric(lambda z: objective(gx, gp, z), (max(t - 0.2, 0.02), min(t + 0.2, 0.98)))
    g_opt = optimal_gain(r)
    return ThreeVariableReport(gx, gp, t, objective(gx, gp, t),
                               origin_symmetric(r, g_opt))


def ralph_gain(r: float) -> float:
    """Comparison gain coth(2r); an amplifier for every finite squeezing."""
    if r <= 0:
        raise ValueError("r must be positive")
    return coth(2.0 * r)
