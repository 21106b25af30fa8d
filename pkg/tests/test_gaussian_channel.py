import math

import numpy as np
import pytest

from telewig.gaussian_channel import (
    TeleportParams,
    alpha_gain,
    apply_map,
    build_map,
    compensating_params,
    is_completely_positive,
    origin_fock1,
    origin_symmetric,
    origin_unity,
    threshold_unconditional,
)
from telewig.phase_space import (
    make_attenuated,
    make_fock1,
    make_squeezed_fock1,
    r_from_db,
)

INV_PI = 1.0 / math.pi


def test_params_validation():
    with pytest.raises(ValueError):
        TeleportParams(r=-0.1, T=0.5, g_x=1.0, g_p=1.0)
    with pytest.raises(ValueError):
        TeleportParams(r=0.5, T=0.0, g_x=1.0, g_p=1.0)
    with pytest.raises(ValueError):
        TeleportParams(r=0.5, T=1.0, g_x=1.0, g_p=1.0)
    with pytest.raises(ValueError):
        TeleportParams(r=0.5, T=0.5, g_x=-1.0, g_p=1.0)
    p = TeleportParams.symmetric(0.5, 1.2)
    assert p.T == pytest.approx(0.5)
    assert p.G == pytest.approx(1.2)


def test_symmetric_map_structure():
    r, G = 0.6, 1.1
    gmap = build_map(TeleportParams.symmetric(r, G))
    assert np.allclose(gmap.S, G * np.eye(2))
    # added noise is isotropic: (1+G)^2 e^(-2r)/2 + (1-G)^2 e^(2r)/2 = alpha
    assert np.allclose(gmap.Q, alpha_gain(G, r) * np.eye(2))
    q = (1 + G) ** 2 * math.exp(-2 * r) / 2 + (1 - G) ** 2 * math.exp(2 * r) / 2
    assert gmap.Q[0, 0] == pytest.approx(q, rel=1e-14)
    assert is_completely_positive(gmap)


def test_closed_form_matches_channel_action():
    for r in (0.2, 0.45, 0.9):
        for G in (0.8, 1.0, 1.3):
            gmap = build_map(TeleportParams.symmetric(r, G))
            w_out = apply_map(gmap, make_fock1())
            ref = origin_symmetric(r, G)
            assert w_out.origin() == pytest.approx(ref, abs=1e-15)
            assert origin_fock1(gmap) == pytest.approx(ref, abs=1e-15)
            # the channel is trace preserving
            assert w_out.integral() == pytest.approx(1.0, abs=1e-12)


def test_unity_gain_closed_form():
    for r in (0.1, 0.35, 0.8):
        assert origin_unity(r) == pytest.approx(origin_symmetric(r, 1.0), abs=1e-15)
    # sign change exactly at e^(-2r) = 1/2
    r0 = 0.5 * math.log(2.0)
    assert origin_unity(r0) == pytest.approx(0.0, abs=1e-16)
    assert origin_unity(r0 + 1e-3) < 0 < origin_unity(r0 - 1e-3)


def test_attenuated_closed_form():
    eta = 0.6304
    for r in (0.3, 0.8):
        for G in (0.9, 1.05):
            gmap = build_map(TeleportParams.symmetric(r, G))
            w_out = apply_map(gmap, make_attenuated(eta))
            assert w_out.origin() == pytest.approx(origin_symmetric(r, G, eta=eta),
                                                   abs=1e-15)
    # eta = 1 reduces to the pure-input formula
    assert origin_symmetric(0.5, 1.1, eta=1.0) == pytest.approx(
        origin_symmetric(0.5, 1.1))


def test_unconditional_thresholds():
    th = threshold_unconditional(0.6304)
    assert th.r_th_gain == pytest.approx(1.009846799647513, abs=1e-12)
    assert th.db_gain == pytest.approx(-8.77141785309147, abs=1e-10)
    assert th.r_th_unity == pytest.approx(math.log(math.sqrt(2.0 / (2 * 0.6304 - 1))))
    # eta = 1: no threshold for the optimal-gain protocol, 3 dB for unity
    th1 = threshold_unconditional(1.0)
    assert th1.r_th_gain == pytest.approx(0.0, abs=1e-12)
    assert th1.db_unity == pytest.approx(-10.0 * math.log10(2.0), abs=1e-12)
    with pytest.raises(ValueError):
        threshold_unconditional(0.5)
    # the unity-gain origin value actually changes sign there
    eta = 0.6304
    assert origin_symmetric(th.r_th_unity + 1e-4, 1.0, eta=eta) < 0
    assert origin_symmetric(th.r_th_unity - 1e-4, 1.0, eta=eta) > 0


def _best_gain(r, eta):
    from telewig.gain_optimizer import minimize_numeric
    return minimize_numeric(lambda g: origin_symmetric(r, g, eta=eta), (1e-6, 3.0))


def test_gain_threshold_is_sign_change_of_optimized_curve():
    eta = 0.6304
    r_th = threshold_unconditional(eta).r_th_gain
    w_lo = origin_symmetric(r_th - 1e-3, _best_gain(r_th - 1e-3, eta), eta=eta)
    w_hi = origin_symmetric(r_th + 1e-3, _best_gain(r_th + 1e-3, eta), eta=eta)
    assert w_lo > 0 > w_hi


def test_compensating_protocol():
    t = 0.5 * math.log(2.0)   # e^(2t) = 2 input squeezing
    for db in (-3.0, -7.0):
        r = r_from_db(db)
        for G in (0.95, 1.2):
            params = compensating_params(t, G, r)
            assert params.T == pytest.approx(1.0 / (1.0 + math.exp(2.0 * t)))
            gmap = build_map(params)
            assert is_completely_positive(gmap)
            w_out = apply_map(gmap, make_squeezed_fock1(t))
            assert w_out.origin() == pytest.approx(origin_symmetric(r, G), abs=1e-12)
            assert w_out.integral() == pytest.approx(1.0, abs=1e-12)
