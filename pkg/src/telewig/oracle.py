"""Independent brute-force checks for the closed-form origin values.

Three families, none of which reuses the formula it is meant to confirm:

* direct 2-D quadrature of the two-mode channel kernel acting on an input
  Wigner function,
* truncated Fock-space simulation of the conditioned output state with a
  parity readout, driven either pointwise or by seeded Monte Carlo over an
  acceptance disk,
* overlap integrals built from the shared-pair covariance matrix for the
  point-post-selected impure protocol (2-D reduction by default, full 4-D
  behind slow=True).

All reductions use pairwise numpy sums or math.fsum so results do not depend
on summation order beyond 1e-12.
"""

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .gaussian_channel import LAMBDA, GaussianMap, is_completely_positive
from .phase_space import NoisyEprSpec, PolyGaussWigner, WignerMixture

__all__ = [
    "TAIL_BOUND",
    "FockVector",
    "QuadratureGrid",
    "DiskMcResult",
    "default_trunc",
    "displaced_fock_columns",
    "conditional_state_fock",
    "conditional_state_vacuum",
    "origin_via_parity",
    "origin_via_quadrature",
    "disk_average_mc",
    "noisy_point_via_quadrature",
    "grid_integral",
]

TAIL_BOUND = 1e-12


def _gauss_nodes(n: int, half_width: float):
    x, w = np.polynomial.legendre.leggauss(n)
    return x * half_width, w * half_width


@dataclass(frozen=True)
class QuadratureGrid:
    """Tensor-product Gauss-Legendre nodes on [-half_width, half_width]^2."""

    half_width: float
    n_nodes: int = 120
    tol: float = 1e-9

    def __post_init__(self):
        if self.half_width <= 0 or self.n_nodes < 8:
            raise ValueError("need a positive domain and at least 8 nodes")

    def nodes(self):
        return _gauss_nodes(self.n_nodes, self.half_width)

    def refined(self) -> "QuadratureGrid":
        # wider and denser at once so both truncation and resolution
        # errors shrink between convergence checks
        return QuadratureGrid(1.25 * self.half_width, (3 * self.n_nodes) // 2, self.tol)


class FockVector:
    """Truncated number-basis amplitude vector c_0..c_N."""

    __slots__ = ("amps",)

    def __init__(self, amps):
        a = np.asarray(amps, dtype=complex)
        if a.ndim != 1 or a.size < 2:
            raise ValueError("amplitudes must be a 1-D vector with N >= 1")
        ns = float(np.sum(np.abs(a) ** 2))
        if ns > 0 and abs(a[-1]) ** 2 / ns >= TAIL_BOUND:
            raise ValueError("truncation insufficient: tail mass above 1e-12")
        object.__setattr__(self, "amps", a)

    @property
    def n_trunc(self) -> int:
        return self.amps.size - 1

    @property
    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def normalized(self) -> "FockVector":
        ns = self.norm_sq
        if ns <= 0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amps / math.sqrt(ns))

    def parity(self) -> float:
        """<psi|(-1)^n|psi> without normalization."""
        probs = np.abs(self.amps) ** 2
        signs = np.where(np.arange(probs.size) % 2 == 0, 1.0, -1.0)
        return float(np.sum(signs * probs))


def default_trunc(alpha_abs: float, tail: float = 1e-14) -> int:
    """Smallest N with e^(-|a|^2)|a|^(2N)/N! below tail (floor 10)."""
    if alpha_abs < 0:
        raise ValueError("|alpha| must be >= 0")
    if alpha_abs == 0:
        return 10
    a2 = alpha_abs * alpha_abs
    log_tail = math.log(tail)
    n = 10
    while -a2 + n * math.log(a2) - math.lgamma(n + 1) >= log_tail:
        n += 1
        if n > 1000:
            raise ValueError("displacement too large for a sane truncation")
    return n


def displaced_fock_columns(alpha: complex, n_trunc: int):
    """Columns <m|D(alpha)|0> and <m|D(alpha)|1> for m = 0..n_trunc.

    Upward recurrences on the Laguerre closed form; every factor stays
    O(1) so the columns are stable to machine precision at any truncation.
    """
    a = complex(alpha)
    aa = abs(a) ** 2
    e = math.exp(-0.5 * aa)
    c0 = np.zeros(n_trunc + 1, dtype=complex)
    c1 = np.zeros(n_trunc + 1, dtype=complex)
    t = complex(e)
    c0[0] = t
    for m in range(1, n_trunc + 1):
        t = t * a / math.sqrt(m)
        c0[m] = t
    c1[0] = -np.conj(a) * e
    s = complex(e)                  # s_m = a^(m-1) e^(-|a|^2/2)/sqrt(m!)
    for m in range(1, n_trunc + 1):
        c1[m] = s * (m - aa)
        s = s * a / math.sqrt(m + 1)
    return c0, c1


def conditional_state_fock(lam: float, G: float, beta: complex,
                           n_trunc: int | None = None) -> FockVector:
    """Unnormalized conditioned output for the single-photon input.

    sqrt(1-lam^2) e^(-(1-lam^2)|beta|^2/2) D[(G-lam)beta]
    [(1-lam^2) conj(beta) |0> + lam |1>]; norm^2 / pi is the outcome density.
    """
    if not 0 <= lam < 1:
        raise ValueError("lam must lie in [0, 1)")
    alpha = (G - lam) * beta
    if n_trunc is None:
        n_trunc = default_trunc(abs(alpha))
    c0, c1 = displaced_fock_columns(alpha, n_trunc)
    pref = math.sqrt(1.0 - lam * lam) * math.exp(-0.5 * (1.0 - lam * lam) * abs(beta) ** 2)
    return FockVector(pref * ((1.0 - lam * lam) * np.conj(beta) * c0 + lam * c1))


def conditional_state_vacuum(lam: float, G: float, beta: complex,
                             n_trunc: int | None = None) -> FockVector:
    """Vacuum-input branch of the conditioned output (attenuated blends)."""
    if not 0 <= lam < 1:
        raise ValueError("lam must lie in [0, 1)")
    alpha = (G - lam) * beta
    if n_trunc is None:
        n_trunc = default_trunc(abs(alpha))
    c0, _ = displaced_fock_columns(alpha, n_trunc)
    pref = math.sqrt(1.0 - lam * lam) * math.exp(-0.5 * (1.0 - lam * lam) * abs(beta) ** 2)
    return FockVector(pref * c0)


StateOrMixture = Union[FockVector, Iterable]


def origin_via_parity(state: StateOrMixture) -> float:
    """(1/pi) sum_k (-1)^k rho_kk for a normalized pure state or mixture.

    Mixtures are (weight, FockVector) pairs; the weighted trace must be 1.
    """
    if isinstance(state, FockVector):
        pairs = [(1.0, state)]
    else:
        pairs = [(float(w), s) for w, s in state]
    trace = math.fsum(w * s.norm_sq for w, s in pairs)
    if abs(trace - 1.0) > 1e-9:
        raise ValueError("input must be normalized (weighted trace 1)")
    return math.fsum(w * s.parity() for w, s in pairs) / math.pi


def _wigner_terms(w_in) -> Sequence[PolyGaussWigner]:
    if isinstance(w_in, PolyGaussWigner):
        return (w_in,)
    if isinstance(w_in, WignerMixture):
        return tuple(t for _, t in w_in.terms)
    raise TypeError("w_in must be a PolyGaussWigner or WignerMixture")


def _envelope_half_width(gmap: GaussianMap, w_in) -> float:
    # integrand Gaussian: exp(-r' P r') with P the kernel precision pulled
    # back through S Lambda plus the input precision through Lambda
    q_inv = np.linalg.inv(gmap.Q)
    lam_s = gmap.S @ LAMBDA
    widths = []
    for term in _wigner_terms(w_in):
        p_comb = lam_s.T @ q_inv @ lam_s + LAMBDA @ np.linalg.inv(term.Gamma) @ LAMBDA
        w_min = float(np.linalg.eigvalsh(p_comb)[0])
        widths.append(8.0 / math.sqrt(2.0 * w_min))
    return max(widths)


def _channel_origin_on_grid(gmap: GaussianMap, w_in, grid: QuadratureGrid) -> float:
    x, wx = grid.nodes()
    X, P = np.meshgrid(x, x, indexing="ij")
    pts = np.stack([X, P], axis=-1)
    w2 = np.outer(wx, wx)
    q_inv = np.linalg.inv(gmap.Q)
    det_q = float(np.linalg.det(gmap.Q))
    # origin value: displacement in the kernel is -S Lambda r_in
    d = -np.einsum("ij,...j->...i", gmap.S @ LAMBDA, pts)
    kernel = np.exp(-np.einsum("...i,ij,...j->...", d, q_inv, d)) \
        / (2.0 * math.pi ** 2 * math.sqrt(det_q))
    win = w_in(X * LAMBDA[0, 0], P * LAMBDA[1, 1])
    return 2.0 * math.pi * float(np.sum(w2 * kernel * win))


def origin_via_quadrature(gmap: GaussianMap, w_in,
                          grid: QuadratureGrid | None = None,
                          max_refine: int = 3) -> float:
    """Origin of the channel output by direct 2-D quadrature of the kernel.

    Refines (wider, denser) until two successive grids agree within grid.tol;
    raises if the refinement cap is hit first.
    """
    if not is_completely_positive(gmap):
        raise ValueError("map is not completely positive")
    if grid is None:
        grid = QuadratureGrid(_envelope_half_width(gmap, w_in))
    val = _channel_origin_on_grid(gmap, w_in, grid)
    for _ in range(max_refine):
        grid = grid.refined()
        nxt = _channel_origin_on_grid(gmap, w_in, grid)
        if abs(nxt - val) < grid.tol:
            return nxt
        val = nxt
    raise RuntimeError("quadrature did not converge within the refinement cap")


class DiskMcResult(NamedTuple):
    p_est: float
    w_est: float
    stderr: tuple  # (sigma_P, sigma_W), the latter by the delta method


def _branch_sums(lam: float, G: float, betas: np.ndarray, n_trunc: int):
    """Per-sample norm^2 and parity for both input branches, vectorized.

    Runs the displaced-Fock recurrences across the whole sample batch at
    once; equivalent to conditional_state_fock / conditional_state_vacuum
    term by term.
    """
    al = (G - lam) * betas
    aa = np.abs(al) ** 2
    e = np.exp(-0.5 * aa)
    u = (1.0 - lam * lam) * np.conj(betas)
    t = e.astype(complex)           # running <m|D|0>
    s = e.astype(complex)           # running s_m for <m|D|1>
    psi = u * t + lam * (-np.conj(al) * e)
    a1 = np.abs(psi) ** 2
    a0 = np.abs(t) ** 2
    n1 = a1.copy(); p1 = a1.copy()
    n0 = a0.copy(); p0 = a0.copy()
    sgn = 1.0
    for m in range(1, n_trunc + 1):
        t = t * al / math.sqrt(m)
        c1m = s * (m - aa)
        s = s * al / math.sqrt(m + 1)
        psi = u * t + lam * c1m
        a1 = np.abs(psi) ** 2
        a0 = np.abs(t) ** 2
        sgn = -sgn
        n1 += a1; p1 += sgn * a1
        n0 += a0; p0 += sgn * a0
    pr2 = (1.0 - lam * lam) * np.exp(-(1.0 - lam * lam) * np.abs(betas) ** 2)
    return pr2 * n1, pr2 * p1, pr2 * n0, pr2 * p0


def disk_average_mc(lam: float, G: float, K: float, eta: float,
                    n_samples: int, seed: int) -> DiskMcResult:
    """Monte Carlo estimate of (P_region, W_region(0)) over the disk |beta| <= K.

    Uniform area sampling; per-sample norm and parity come from the truncated
    Fock simulation, so the estimate is independent of every closed form.
    Identical seeds give bit-identical results.
    """
    if n_samples < 10_000:
        raise ValueError("need at least 1e4 samples")
    if not 0 <= lam < 1:
        raise ValueError("lam must lie in [0, 1)")
    if K <= 0:
        raise ValueError("disk radius must be positive")
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    radii = K * np.sqrt(rng.random(n_samples))
    angles = 2.0 * math.pi * rng.random(n_samples)
    betas = radii * np.exp(1j * angles)
    n_trunc = default_trunc(abs(G - lam) * K)

    h = np.empty(n_samples)
    g = np.empty(n_samples)
    chunk = 65536
    for s0 in range(0, n_samples, chunk):
        n1, p1, n0, p0 = _branch_sums(lam, G, betas[s0:s0 + chunk], n_trunc)
        h[s0:s0 + chunk] = eta * n1 + (1.0 - eta) * n0
        g[s0:s0 + chunk] = eta * p1 + (1.0 - eta) * p0

    # P = area * mean(density), density = blended norm^2 / pi, area = pi K^2
    ph = K * K * h
    pg = K * K * g
    p_est = float(ph.mean())
    x = float(pg.mean())
    w_est = x / (math.pi * p_est)
    cov = np.cov(pg, ph, ddof=1) / n_samples
    ratio = x / p_est
    var_w = (cov[0, 0] - 2.0 * ratio * cov[0, 1] + ratio * ratio * cov[1, 1]) \
        / (math.pi * p_est) ** 2
    return DiskMcResult(p_est, w_est,
                        (math.sqrt(cov[1, 1]), math.sqrt(max(var_w, 0.0))))


def _point_origin_2d(spec: NoisyEprSpec, eta: float, n: int) -> float:
    """2-D reduction of the beta = 0 overlap: mode B is marginalized exactly.

    Numerator uses the xi_B = 0 slice of the pair Wigner, denominator its
    mode-A marginal; both come straight from the covariance matrix.
    """
    gamma = spec.cm().mat
    gi = np.linalg.inv(gamma)
    det_g = float(np.linalg.det(gamma))
    half = 8.0 * math.sqrt(max(spec.V, 1.0))
    x, w = _gauss_nodes(n, half)
    X, P = np.meshgrid(x, x, indexing="ij")
    s2 = X * X + P * P
    w2 = np.outer(w, w)
    pts = np.stack([X, P], axis=-1)
    # slice W_AB(xi_A, 0) and marginal W_A(xi_A)
    q_slice = np.einsum("...i,ij,...j->...", pts, gi[:2, :2], pts)
    slice_ab = np.exp(-q_slice) / (math.pi ** 2 * math.sqrt(det_g))
    gamma_a = gamma[:2, :2]
    q_marg = np.einsum("...i,ij,...j->...", pts, np.linalg.inv(gamma_a), pts)
    marg_a = np.exp(-q_marg) / (math.pi * math.sqrt(np.linalg.det(gamma_a)))
    w_fock1 = (2.0 * s2 - 1.0) * np.exp(-s2) / math.pi
    w_vac = np.exp(-s2) / math.pi
    w_in = eta * w_fock1 + (1.0 - eta) * w_vac
    num = 2.0 * math.pi * float(np.sum(w2 * slice_ab * w_in))
    den = 2.0 * math.pi * float(np.sum(w2 * marg_a * w_in))
    return num / den


def _conditioned_b_grid(gi, det_g, eta, xb, n_a, half_a):
    """Unnormalized Wigner of the conditioned B mode on the given B grid."""
    xa, wa = _gauss_nodes(n_a, half_a)
    XA, PA = np.meshgrid(xa, xa, indexing="ij")
    A = np.stack([XA, PA], -1).reshape(-1, 2)
    wA = np.outer(wa, wa).reshape(-1)
    sA = A[:, 0] ** 2 + A[:, 1] ** 2
    w_in = eta * (2.0 * sA - 1.0) * np.exp(-sA) / math.pi \
        + (1.0 - eta) * np.exp(-sA) / math.pi
    qA = np.einsum("ai,ij,aj->a", A, gi[:2, :2], A)
    lhs = wA * w_in * np.exp(-qA)
    XB, PB = np.meshgrid(xb, xb, indexing="ij")
    B = np.stack([XB, PB], -1).reshape(-1, 2)
    qB = np.einsum("bi,ij,bj->b", B, gi[2:, 2:], B)
    out = np.empty(B.shape[0])
    chunk = 4096
    for s0 in range(0, B.shape[0], chunk):
        cross = 2.0 * np.einsum("ai,ij,bj->ab", A, gi[:2, 2:], B[s0:s0 + chunk])
        out[s0:s0 + chunk] = lhs @ np.exp(-cross)
    out *= np.exp(-qB) / (math.pi ** 2 * math.sqrt(det_g))
    return 2.0 * math.pi * out, B


def _point_origin_4d(spec: NoisyEprSpec, eta: float, n_a: int = 72,
                     n_b_trace: int = 72, n_b_parity: int = 180,
                     n_max: int = 150) -> float:
    """Full 4-D audit: conditioned B-mode Wigner, then a parity-series readout.

    Two B grids: a wide one for the trace (the bare conditioned state) and a
    narrow dense one for the oscillatory number-state kernels.  The kernels
    use the scaled recurrence phi_n = L_n(2s)e^(-s), |phi_n| <= 1.
    """
    gamma = spec.cm().mat
    gi = np.linalg.inv(gamma)
    det_g = float(np.linalg.det(gamma))
    sig_tr = np.linalg.inv(gi + np.diag([1.0, 1.0, 0.0, 0.0]))
    half_a = 8.0 * math.sqrt(max(sig_tr[0, 0], sig_tr[1, 1]) / 2.0)
    half_b_tr = 8.0 * math.sqrt(max(sig_tr[2, 2], sig_tr[3, 3]) / 2.0)
    sig_par = np.linalg.inv(gi + np.eye(4))
    half_b_par = 8.0 * math.sqrt(max(sig_par[2, 2], sig_par[3, 3]) / 2.0)

    xbt, wbt = _gauss_nodes(n_b_trace, half_b_tr)
    f_tr, _ = _conditioned_b_grid(gi, det_g, eta, xbt, n_a, half_a)
    trace = float(np.outer(wbt, wbt).reshape(-1) @ f_tr)

    xbp, wbp = _gauss_nodes(n_b_parity, half_b_par)
    f_par, B = _conditioned_b_grid(gi, det_g, eta, xbp, n_a, half_a)
    wB = np.outer(wbp, wbp).reshape(-1)
    sB = B[:, 0] ** 2 + B[:, 1] ** 2
    x2 = 2.0 * sB
    phi_prev = np.exp(-sB)
    phi = (1.0 - x2) * np.exp(-sB)
    # number-state Wigner at B: W_n = (-1)^n phi_n / pi; the parity series
    # sum (-1)^n <n|rho|n> makes the sign factors cancel pairwise
    parity = 2.0 * float(wB @ (f_par * phi_prev)) + 2.0 * float(wB @ (f_par * phi))
    # populations decay geometrically to the grid's noise floor (~1e-8,
    # alternating); summing the fixed-length tail lets the noise cancel
    tail = 0.0
    for n in range(2, n_max + 1):
        phi_prev, phi = phi, ((2 * n - 1 - x2) * phi - (n - 1) * phi_prev) / n
        term = 2.0 * float(wB @ (f_par * phi))
        parity += term
        tail = abs(term) if n == n_max else tail
    if tail > 1e-6 * max(1.0, abs(parity)):
        raise RuntimeError("parity series did not converge")
    return parity / (math.pi * trace)


def noisy_point_via_quadrature(spec: NoisyEprSpec, eta: float = 1.0,
                               slow: bool = False, tol: float = 1e-9) -> float:
    """beta = 0 conditioned origin value from the covariance matrix alone.

    Default path integrates over mode A only (exact marginalization of B);
    slow=True runs the full 4-D overlap with the parity-series readout.
    """
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")
    if slow:
        return _point_origin_4d(spec, eta)
    val = _point_origin_2d(spec, eta, 160)
    for n in (240, 360, 540, 810):
        nxt = _point_origin_2d(spec, eta, n)
        if abs(nxt - val) < tol:
            return nxt
        val = nxt
    raise RuntimeError("quadrature did not converge within the refinement cap")


def grid_integral(f, half_width: float, n: int = 200) -> float:
    """Plain 2-D integral of a vectorized f(x, p) over the centered square."""
    x, w = _gauss_nodes(n, half_width)
    X, P = np.meshgrid(x, x, indexing="ij")
    return float(np.sum(np.outer(w, w) * f(X, P)))
