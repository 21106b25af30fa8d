"""Row builders behind every CLI command and service endpoint.

Each builder takes a RunConfig and returns a TableResponse (or VerifyResponse)
with a fixed column order.  Rows are ordered by grid index; evaluation of the
grid points is independent, so a parallel executor would change nothing in
the output.
"""

import math

import numpy as np

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
    TeleportParams,
    apply_map,
    build_map,
    compensating_params,
    is_completely_positive,
    origin_fock1,
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
from .oracle import (
    conditional_state_fock,
    conditional_state_vacuum,
    disk_average_mc,
    grid_integral,
    noisy_point_via_quadrature,
    origin_via_parity,
    origin_via_quadrature,
)
from .phase_space import (
    NoisyEprSpec,
    db_from_r,
    make_attenuated,
    make_fock1,
    make_squeezed_fock1,
    make_vacuum,
    noise_from_db,
    r_from_db,
    v_sq_from_db,
)
from .service.models import (
    RunConfig,
    TableResponse,
    VerifyResponse,
    VerifySuite,
)

__all__ = ["UsageError", "run_table", "run_verify"]


class UsageError(ValueError):
    """Bad or inconsistent request parameters (CLI exit code 2)."""


def _vsq_grid_db(config: RunConfig, default: tuple) -> list:
    if config.vsq_db is not None and config.vsq_r is not None:
        raise UsageError("give the squeezing grid in dB or in r, not both")
    if config.vsq_r is not None:
        dbs = [db_from_r(r) for r in config.vsq_r.values()]
    elif config.vsq_db is not None:
        dbs = config.vsq_db.values()
    else:
        start, stop, step = default
        dbs = [start + k * step for k in range(int(round((stop - start) / step)) + 1)]
    if not dbs:
        raise UsageError("empty squeezing range")
    return dbs


def _input_wigner(state):
    if state.kind == "fock1":
        return make_fock1()
    if state.kind == "sqfock1":
        return make_squeezed_fock1(state.t)
    return make_attenuated(state.eta)


def _unconditional_gain(config: RunConfig, r: float, eta: float) -> float:
    mode = config.gain.mode
    if mode == "unity":
        return 1.0
    if mode == "fixed":
        return config.gain.value
    if r <= 0:
        raise UsageError("optimal and ralph gains need nonzero squeezing")
    if mode == "ralph":
        return ralph_gain(r)
    if eta >= 1.0:
        return optimal_gain(r)
    return minimize_numeric(lambda G: origin_symmetric(r, G, eta=eta), (1e-6, 3.0))


def _disk_gain(config: RunConfig, r: float, lam: float, K: float, eta: float) -> float:
    mode = config.gain.mode
    if mode == "unity":
        return 1.0
    if mode == "fixed":
        return config.gain.value
    if r <= 0:
        raise UsageError("optimal and ralph gains need nonzero squeezing")
    if mode == "ralph":
        return ralph_gain(r)
    return optimize_gain_disk(lam, K, eta=eta)


def _sweep(config: RunConfig) -> TableResponse:
    if config.region.kind in ("disk", "point"):
        return _conditional(config)
    if config.region.kind == "square":
        raise UsageError("square regions belong to the noisy command")
    dbs = _vsq_grid_db(config, (-15.0, -1.0, 1.0))
    eta = config.state.eta_value
    rows = []
    for db in dbs:
        r = r_from_db(db)
        G = _unconditional_gain(config, r, eta)
        if config.state.kind == "sqfock1":
            params = compensating_params(config.state.t, G, r)
        else:
            params = TeleportParams.symmetric(r, G)
        w_out = apply_map(build_map(params), _input_wigner(config.state))
        rows.append([db, G, w_out.origin()])
    return TableResponse(config=config,
                         columns=["V_sq_dB", "gain_used", "W_origin"], rows=rows)


def _conditional(config: RunConfig) -> TableResponse:
    region = config.region
    if region.kind == "none":
        region = region.model_copy(update={"kind": "disk", "size": 0.3})
    if region.kind not in ("disk", "point"):
        raise UsageError("conditional runs accept disk or point regions")
    dbs = _vsq_grid_db(config, (-15.0, -1.0, 1.0))
    eta = config.state.eta_value
    rows = []
    for db in dbs:
        r = r_from_db(db)
        lam = math.tanh(r)
        if region.kind == "point":
            rows.append([db, origin_pointlimit_attenuated(lam, eta)])
            continue
        K = region.size
        G = _disk_gain(config, r, lam, K, eta)
        if eta >= 1.0:
            w = origin_disk_fock1(lam, G, K)
            p = success_prob_disk(lam, K)
        else:
            w = origin_disk_attenuated(lam, G, K, eta)
            p = success_prob_disk_attenuated(lam, K, eta)
        rows.append([db, G, w, p])
    if region.kind == "point":
        return TableResponse(config=config, columns=["V_sq_dB", "W_origin"], rows=rows)
    return TableResponse(config=config,
                         columns=["V_sq_dB", "gain_used", "W_origin", "P_success"],
                         rows=rows)


def _single_noise_db(config: RunConfig) -> float:
    if config.noise_db is None:
        return 3.0
    vals = config.noise_db.values()
    if len(vals) != 1:
        raise UsageError("this command wants a single noise level")
    return vals[0]


def _noisy(config: RunConfig) -> TableResponse:
    noise_db = _single_noise_db(config)
    n_excess = noise_from_db(noise_db)
    dbs = _vsq_grid_db(config, (-15.0, -1.0, 1.0))
    eta = config.state.eta_value
    region = config.region
    if region.kind in ("none", "point"):
        rows = []
        for db in dbs:
            spec = NoisyEprSpec.from_excess(v_sq_from_db(db), n_excess)
            if eta >= 1.0:
                rows.append([db, origin_point_fock1(spec)])
            else:
                rows.append([db, origin_point_attenuated(spec, eta)])
        return TableResponse(config=config, columns=["V_sq_dB", "W_origin"], rows=rows)
    if region.kind != "square":
        raise UsageError("noisy runs accept point or square regions")
    if eta < 1.0:
        raise UsageError("the square-region formula covers the undamped photon only")
    if config.gain.mode == "unity":
        G = 1.0
    elif config.gain.mode == "fixed":
        G = config.gain.value
    else:
        raise UsageError("square regions take unity or fixed gain")
    rows = []
    for db in dbs:
        spec = NoisyEprSpec.from_excess(v_sq_from_db(db), n_excess)
        rows.append([db, G, origin_square_fock1(spec, G, region.size),
                     success_prob_square(region.size, spec.nbar)])
    return TableResponse(config=config,
                         columns=["V_sq_dB", "gain_used", "W_origin", "P_success"],
                         rows=rows)


def _threshold_disk_db(K: float, eta: float, tol_db: float = 1e-6) -> float:
    """Squeezing (dB) where the gain-optimized conditional origin changes sign."""

    def w_at(db):
        lam = math.tanh(r_from_db(db))
        try:
            g = optimize_gain_disk(lam, K, eta=eta)
        except ValueError:
            # far above threshold the minimum leaves the gain bracket while
            # staying positive; a coarse scan settles the sign
            return min(origin_disk_attenuated(lam, g, K, eta)
                       for g in np.linspace(1e-6, 2.0, 241))
        return origin_disk_attenuated(lam, g, K, eta)

    lo, hi = -14.0, -4.0
    if not (w_at(lo) < 0.0 < w_at(hi)):
        raise UsageError("no negativity sign change in the squeezing bracket")
    while hi - lo > tol_db:
        mid = 0.5 * (lo + hi)
        if w_at(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _threshold(config: RunConfig) -> TableResponse:
    region = config.region
    if region.kind == "none":
        etas = config.eta.values() if config.eta is not None else [1.0]
        if not etas:
            raise UsageError("empty eta range")
        rows = []
        for eta in etas:
            th = threshold_unconditional(eta)
            rows.append([eta, th.r_th_gain, th.db_gain, th.r_th_unity, th.db_unity,
                         th.db_gain - th.db_unity])
        return TableResponse(config=config,
                             columns=["eta", "r_th_gain", "V_th_gain_dB",
                                      "r_th_unity", "V_th_unity_dB", "diff_dB"],
                             rows=rows)
    if config.eta is not None and len(config.eta.values()) != 1:
        raise UsageError("post-selected thresholds want a single eta")
    eta = config.eta.values()[0] if config.eta is not None else 1.0
    if region.kind == "point":
        if config.noise_db is None:
            raise UsageError("point thresholds need --noise-db")
        rows = []
        for ndb in config.noise_db.values():
            th = threshold_point(eta, noise_from_db(ndb))
            rows.append([ndb, th.db, th.db_asymptote])
        if not rows:
            raise UsageError("empty noise range")
        return TableResponse(config=config,
                             columns=["noise_dB", "V_th_dB", "V_th_asymptote_dB"],
                             rows=rows)
    if region.kind == "square":
        if config.noise_db is None:
            raise UsageError("square thresholds need --noise-db")
        if config.gain.mode == "unity":
            G = 1.0
        elif config.gain.mode == "fixed":
            G = config.gain.value
        else:
            raise UsageError("square thresholds take unity or fixed gain")
        rows = [[ndb, threshold_square(noise_from_db(ndb), G, region.size)]
                for ndb in config.noise_db.values()]
        if not rows:
            raise UsageError("empty noise range")
        return TableResponse(config=config, columns=["noise_dB", "V_th_dB"], rows=rows)
    # disk region: sign change of the gain-optimized conditional protocol
    return TableResponse(config=config, columns=["K", "eta", "V_th_dB"],
                         rows=[[region.size, eta, _threshold_disk_db(region.size, eta)]])


def run_table(config: RunConfig) -> TableResponse:
    if config.command == "sweep":
        return _sweep(config)
    if config.command == "conditional":
        return _conditional(config)
    if config.command == "noisy":
        return _noisy(config)
    if config.command == "threshold":
        return _threshold(config)
    raise UsageError(f"{config.command} does not produce a table")


# ---------------------------------------------------------------------------
# verification suites


def _parity_closed(lam: float, G: float, beta: complex):
    """Closed per-outcome (norm^2, parity) pairs for both input branches."""
    s = 1.0 - lam * lam
    aa = abs((G - lam) * beta) ** 2
    b2 = abs(beta) ** 2
    pref2 = s * math.exp(-s * b2)
    norm1 = pref2 * (s * s * b2 + lam * lam)
    par1 = pref2 * math.exp(-2.0 * aa) * (
        s * s * b2 - 4.0 * lam * (G - lam) * s * b2 - lam * lam * (1.0 - 4.0 * aa))
    norm0 = pref2
    par0 = pref2 * math.exp(-2.0 * aa)
    return norm1, par1, norm0, par0


def _suite_channel_quadrature(config: RunConfig) -> VerifySuite:
    tol = config.tol or 1e-6
    bump = 1e-3 if config.perturb else 0.0
    max_dev = 0.0
    r_grid = np.linspace(0.12, 1.2, 8)
    for r in r_grid:
        for G in (0.8, 1.0, 1.25):
            for eta in (1.0, 0.6304):
                gmap = build_map(TeleportParams.symmetric(r, G))
                w_in = make_fock1() if eta == 1.0 else make_attenuated(eta)
                quad = origin_via_quadrature(gmap, w_in)
                closed = origin_symmetric(r, G, eta=eta) + bump
                acted = apply_map(gmap, w_in).origin()
                max_dev = max(max_dev, abs(quad - closed), abs(acted - closed))
                if eta == 1.0:
                    max_dev = max(max_dev, abs(origin_fock1(gmap) - closed))
                    if G == 1.0:
                        max_dev = max(max_dev, abs(origin_unity(r) - closed))
        t = 0.5 * math.log(2.0)
        gmap_c = build_map(compensating_params(t, 1.1, r))
        quad_c = origin_via_quadrature(gmap_c, make_squeezed_fock1(t))
        max_dev = max(max_dev, abs(quad_c - origin_symmetric(r, 1.1)))
    return VerifySuite(name="channel-quadrature", max_dev=max_dev, tol=tol,
                       passed=max_dev < tol)


def _suite_noisy_point(config: RunConfig) -> VerifySuite:
    tol = config.tol or 1e-6
    max_dev = 0.0
    for v_sq in np.linspace(0.05, 0.45, 9):
        for excess_db in (0.0, 1.0, 3.0, 5.0):
            spec = NoisyEprSpec.from_excess(float(v_sq), noise_from_db(excess_db))
            for eta in (1.0, 0.8, 0.6304):
                quad = noisy_point_via_quadrature(spec, eta=eta)
                closed = origin_point_fock1(spec) if eta == 1.0 \
                    else origin_point_attenuated(spec, eta)
                max_dev = max(max_dev, abs(quad - closed))
    # zero at the closed-form threshold
    th = threshold_point(0.6304, noise_from_db(4.0))
    spec_th = NoisyEprSpec.from_excess(th.v_th, noise_from_db(4.0))
    max_dev = max(max_dev, abs(noisy_point_via_quadrature(spec_th, eta=0.6304)))
    return VerifySuite(name="noisy-point-quadrature", max_dev=max_dev, tol=tol,
                       passed=max_dev < tol)


def _suite_fock_parity(config: RunConfig) -> VerifySuite:
    tol = config.tol or 1e-12
    max_dev = 0.0
    betas = [0.25, -0.2 + 0.1j, 0.05 - 0.3j, 0.4j]
    for lam, G in ((1.0 / 3.0, 1.238), (0.5, 0.6), (0.6, 1.0)):
        for beta in betas:
            st1 = conditional_state_fock(lam, G, beta)
            st0 = conditional_state_vacuum(lam, G, beta)
            n1, p1, n0, p0 = _parity_closed(lam, G, beta)
            max_dev = max(
                max_dev,
                abs(st1.norm_sq - n1), abs(st1.parity() - p1),
                abs(st0.norm_sq - n0), abs(st0.parity() - p0),
                abs(origin_via_parity(st1.normalized()) - p1 / (n1 * math.pi)))
    return VerifySuite(name="fock-parity-pointwise", max_dev=max_dev, tol=tol,
                       passed=max_dev < tol)


def _suite_mc_disk(config: RunConfig) -> VerifySuite:
    cases = []
    lam3 = 1.0 / 3.0
    g3 = optimize_gain_disk(lam3, 0.3)
    cases.append((lam3, g3, 0.3, 1.0,
                  success_prob_disk(lam3, 0.3), origin_disk_fock1(lam3, g3, 0.3)))
    lam5 = math.tanh(r_from_db(-5.0))
    g5 = optimize_gain_disk(lam5, 0.3)
    cases.append((lam5, g5, 0.3, 1.0,
                  success_prob_disk(lam5, 0.3), origin_disk_fock1(lam5, g5, 0.3)))
    lam10 = math.tanh(r_from_db(-10.0))
    g10 = optimize_gain_disk(lam10, 0.3, eta=0.6304)
    cases.append((lam10, g10, 0.3, 0.6304,
                  success_prob_disk_attenuated(lam10, 0.3, 0.6304),
                  origin_disk_attenuated(lam10, g10, 0.3, 0.6304)))
    max_z = 0.0
    for i, (lam, G, K, eta, p_ref, w_ref) in enumerate(cases):
        res = disk_average_mc(lam, G, K, eta, config.mc_samples, config.seed + i)
        max_z = max(max_z, abs(res.p_est - p_ref) / res.stderr[0],
                    abs(res.w_est - w_ref) / res.stderr[1])
    return VerifySuite(name="mc-disk", max_dev=max_z, tol=3.0, passed=max_z < 3.0)


def _suite_square_region(config: RunConfig) -> VerifySuite:
    tol = config.tol or 1e-4
    max_dev = 0.0
    for v_sq in (0.1, 0.2, 0.3, 0.4):
        for excess_db in (0.0, 2.0, 4.0):
            spec = NoisyEprSpec.from_excess(v_sq, noise_from_db(excess_db))
            # shrinking square meets the exact-outcome value
            dev = abs(origin_square_fock1(spec, 1.0, 1e-3) - origin_point_fock1(spec))
            max_dev = max(max_dev, dev)
            if spec.nbar <= 0:
                continue
            # success probability vs direct integral of the outcome density;
            # beta = (x_u + i p_v)/sqrt(2), so d^2 beta = dx dp / 2
            nbar = spec.nbar
            a_half = 0.3

            def dens(X, P):
                b2 = (X * X + P * P) / 2.0
                return (nbar / (1.0 + nbar) ** 2) \
                    * (1.0 + b2 / (nbar * (1.0 + nbar))) \
                    * np.exp(-b2 / (1.0 + nbar)) / (2.0 * math.pi)

            quad = grid_integral(dens, a_half, 80)
            dev_p = abs(quad - success_prob_square(a_half, nbar)) * (tol / 1e-8)
            max_dev = max(max_dev, dev_p)
    return VerifySuite(name="square-region", max_dev=max_dev, tol=tol,
                       passed=max_dev < tol)


def _suite_invariants(config: RunConfig) -> VerifySuite:
    tol = config.tol or 1e-6
    max_dev = 0.0
    # Wigner normalization, analytically and on a plain grid
    states = [make_fock1(), make_vacuum(), make_attenuated(0.6304),
              make_squeezed_fock1(0.5 * math.log(2.0))]
    for w in states:
        max_dev = max(max_dev, abs(w.integral() - 1.0) * (tol / 1e-9))
        max_dev = max(max_dev, abs(grid_integral(w, 9.0, 220) - 1.0) * (tol / 1e-9))
    for r in np.linspace(0.15, 1.2, 6):
        for G in (0.7, 1.0, 1.4):
            if not is_completely_positive(build_map(TeleportParams.symmetric(r, G))):
                max_dev = max(max_dev, 1.0)
        # stationarity of the analytic optimum
        g_star = optimal_gain(r)
        h = 1e-5
        grad = (origin_symmetric(r, g_star + h) - origin_symmetric(r, g_star - h)) / (2 * h)
        max_dev = max(max_dev, abs(grad))
        if not is_completely_positive(build_map(compensating_params(0.3, 1.1, r))):
            max_dev = max(max_dev, 1.0)
    # purity limit of the point-conditioned formula
    for v_sq in np.linspace(0.05, 0.45, 9):
        dev = abs(origin_point_fock1(NoisyEprSpec.pure(v_sq)) + 1.0 / math.pi)
        max_dev = max(max_dev, dev * (tol / 1e-9))
    # shrinking disk reaches the ideal negativity for any gain
    for lam in (0.1, 0.3, 0.6):
        for G in (lam, 1.0):
            dev = abs(origin_disk_fock1(lam, G, 1e-3) + 1.0 / math.pi)
            max_dev = max(max_dev, dev * (tol / 1e-4))
    # first-order expansion of the point limit near perfect entanglement
    for eta in (0.6304, 0.8):
        for lam in (0.95, 0.97, 0.99):
            exact = origin_pointlimit_attenuated(lam, eta)
            approx = (1.0 - 2.0 * eta + 4.0 * eta * (1.0 - eta) * (1.0 - lam)) / math.pi
            max_dev = max(max_dev, (abs(approx - exact) / abs(exact)) * (tol / 1e-2))
    return VerifySuite(name="invariants", max_dev=max_dev, tol=tol,
                       passed=max_dev < tol)


def run_verify(config: RunConfig) -> VerifyResponse:
    suites = [
        _suite_channel_quadrature(config),
        _suite_noisy_point(config),
        _suite_fock_parity(config),
        _suite_mc_disk(config),
        _suite_square_region(config),
        _suite_invariants(config),
    ]
    return VerifyResponse(config=config, suites=suites,
                          passed=all(s.passed for s in suites))
