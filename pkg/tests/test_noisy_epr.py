import math

import numpy as np
import pytest

from telewig.noisy_epr import (
    SquareRegion,
    appendix_aux,
    density_attenuated,
    density_fock1,
    density_vac,
    origin_point_attenuated,
    origin_point_fock1,
    origin_square_fock1,
    success_prob_square,
    threshold_point,
    threshold_square,
)
from telewig.oracle import grid_integral
from telewig.phase_space import NoisyEprSpec, noise_from_db, v_sq_from_db

INV_PI = 1.0 / math.pi

# Table rows frozen after cross-checking the closed forms against the
# quadrature oracle: noise level in dB -> threshold squeezing in dB
POINT_TABLE = {1.0: -1.6242, 2.0: -2.0615, 3.0: -2.3205, 4.0: -2.4940, 5.0: -2.6172}
SQUARE_TABLE = {0.0: -1.1297, 1.0: -1.7739, 2.0: -2.1236, 3.0: -2.3512,
                4.0: -2.5105, 5.0: -2.6265}


def _density_grid(nbar, eta=None):
    # outcome density over quadratures, d^2 beta = dx dp / 2 and the 1/pi
    # measure fold into 1/(2 pi)
    def f(X, P):
        b2 = (X * X + P * P) / 2.0
        if eta is None:
            if nbar == 0:
                return b2 * np.exp(-b2) / (2.0 * math.pi)
            core = (nbar / (1 + nbar) ** 2) * (1 + b2 / (nbar * (1 + nbar))) \
                * np.exp(-b2 / (1 + nbar))
            return core / (2.0 * math.pi)
        core_vac = np.exp(-b2 / (1 + nbar)) / (1 + nbar)
        core_f = (nbar / (1 + nbar) ** 2) * (1 + b2 / (nbar * (1 + nbar))) \
            * np.exp(-b2 / (1 + nbar)) if nbar else b2 * np.exp(-b2)
        return (eta * core_f + (1 - eta) * core_vac) / (2.0 * math.pi)
    return f


def test_densities_normalize():
    for nbar in (0.0, 0.3, 1.7):
        total = grid_integral(_density_grid(nbar), 9.0 * math.sqrt(1 + nbar), 240)
        assert total == pytest.approx(1.0, abs=1e-8)
        total_att = grid_integral(_density_grid(nbar, eta=0.6304),
                                  9.0 * math.sqrt(1 + nbar), 240)
        assert total_att == pytest.approx(1.0, abs=1e-8)


def test_density_pointwise():
    for beta in (0.0, 0.3 + 0.2j, 1.1j):
        b2 = abs(beta) ** 2
        assert density_fock1(beta, 0.0) == pytest.approx(b2 * math.exp(-b2))
        assert density_vac(beta, 0.0) == pytest.approx(math.exp(-b2))
        assert density_attenuated(beta, 0.4, 1.0) == pytest.approx(
            density_fock1(beta, 0.4))
        assert density_attenuated(beta, 0.4, 0.0) == pytest.approx(
            density_vac(beta, 0.4))
    # continuity of the nbar -> 0 limit
    assert density_fock1(0.5, 1e-12) == pytest.approx(density_fock1(0.5, 0.0),
                                                      abs=1e-9)


def test_point_origin_pure_is_ideal():
    for v_sq in (0.05, 0.2, 0.45):
        spec = NoisyEprSpec.pure(v_sq)
        assert origin_point_fock1(spec) == pytest.approx(-INV_PI, abs=1e-13)


def test_point_origin_frozen_value():
    spec = NoisyEprSpec.from_excess(0.25, noise_from_db(3.0))
    assert origin_point_fock1(spec) == pytest.approx(-0.037427405614130035,
                                                     abs=1e-14)
    # eta = 1 branch of the attenuated formula coincides
    assert origin_point_attenuated(spec, 1.0) == pytest.approx(
        origin_point_fock1(spec), abs=1e-15)


def test_point_threshold_table():
    for noise_db, ref_db in POINT_TABLE.items():
        th = threshold_point(1.0, noise_from_db(noise_db))
        assert th.db == pytest.approx(ref_db, abs=5e-4)
        assert th.db_asymptote == pytest.approx(-10.0 * math.log10(2.0), abs=1e-10)


def test_point_threshold_closed_vs_bisection():
    # the closed root must agree with a direct sign-change search of the
    # conditioned origin value
    for noise_db in (1.0, 3.0, 5.0):
        n_excess = noise_from_db(noise_db)
        th = threshold_point(1.0, n_excess)

        def w_of(v_sq):
            return origin_point_fock1(NoisyEprSpec.from_excess(v_sq, n_excess))

        lo, hi = 1e-4, 0.499
        assert w_of(lo) < 0 < w_of(hi)
        while hi - lo > 1e-12:
            mid = 0.5 * (lo + hi)
            if w_of(mid) < 0:
                lo = mid
            else:
                hi = mid
        assert th.v_th == pytest.approx(0.5 * (lo + hi), abs=1e-8)


def test_point_threshold_saturation():
    # N -> infinity: V_th -> (2 eta - 1)/4, i.e. 1/4 at eta = 1
    for eta in (0.6304, 0.8, 1.0):
        th = threshold_point(eta, 1e7)
        assert th.v_asymptote == pytest.approx((2 * eta - 1) / 4.0, abs=1e-15)
        assert th.v_th == pytest.approx(th.v_asymptote, rel=1e-3)
    with pytest.raises(ValueError):
        threshold_point(0.5, 1.0)
    with pytest.raises(ValueError):
        threshold_point(0.8, 0.3)


def test_attenuated_point_threshold_frozen():
    th4 = threshold_point(0.6304, noise_from_db(4.0))
    assert th4.db == pytest.approx(-8.817521515688252, abs=1e-9)
    assert th4.db_asymptote == pytest.approx(-8.847224086040988, abs=1e-9)


def test_success_prob_square_against_quadrature():
    for nbar in (0.2, 0.8):
        for a_half in (0.3, 0.7):
            def f(X, P, nbar=nbar):
                b2 = (X * X + P * P) / 2.0
                return (nbar / (1 + nbar) ** 2) \
                    * (1 + b2 / (nbar * (1 + nbar))) \
                    * np.exp(-b2 / (1 + nbar)) / (2.0 * math.pi)
            quad = grid_integral(f, a_half, 80)
            assert success_prob_square(a_half, nbar) == pytest.approx(quad, abs=1e-12)
    with pytest.raises(ValueError):
        success_prob_square(0.0, 0.5)
    with pytest.raises(ValueError):
        success_prob_square(0.3, 0.0)


def test_square_region_validation():
    assert SquareRegion(0.3).a_half == pytest.approx(0.3)
    with pytest.raises(ValueError):
        SquareRegion(-0.1)


def test_square_origin_point_limit():
    # a -> 0 recovers the exact-outcome formula
    for v_sq in (0.1, 0.25, 0.4):
        for excess_db in (1.0, 3.0):
            spec = NoisyEprSpec.from_excess(v_sq, noise_from_db(excess_db))
            assert origin_square_fock1(spec, 1.0, 1e-3) == pytest.approx(
                origin_point_fock1(spec), abs=1e-4)


def test_square_weaker_than_point():
    # enlarging the accepted region can only wash out negativity
    for v_sq in (0.1, 0.25):
        spec = NoisyEprSpec.from_excess(v_sq, noise_from_db(2.0))
        w_point = origin_point_fock1(spec)
        for a_half in (0.1, 0.3, 0.6):
            w_sq = origin_square_fock1(spec, 1.0, a_half)
            assert abs(w_sq) <= abs(w_point) + 1e-12
            assert w_sq >= w_point


def test_square_threshold_table():
    for noise_db, ref_db in SQUARE_TABLE.items():
        v_th_db = threshold_square(noise_from_db(noise_db), 1.0, 0.3)
        assert v_th_db == pytest.approx(ref_db, abs=5e-4)
    with pytest.raises(ValueError):
        threshold_square(0.3, 1.0, 0.3)


def test_appendix_aux_shapes():
    spec = NoisyEprSpec.from_excess(0.25, 1.0)
    aux = appendix_aux(spec, 1.0, 0.3)
    m = 4.0 * spec.v_sq * spec.v_an
    assert aux.alpha_sigma == pytest.approx((spec.V + m) / m)
    assert aux.delta_sigma == pytest.approx((spec.C - spec.V) / m)
    assert aux.b_erf == pytest.approx(0.3 / math.sqrt(2.0 * (1.0 + spec.nbar)))
    assert aux.q_sigma > 0
