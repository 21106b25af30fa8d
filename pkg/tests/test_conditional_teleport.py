import math

import numpy as np
import pytest

from telewig.conditional_teleport import (
    DiskRegion,
    cond_exponent,
    optimize_gain_disk,
    origin_disk_attenuated,
    origin_disk_fock1,
    origin_pointlimit_attenuated,
    success_prob_disk,
    success_prob_disk_attenuated,
)
from telewig.phase_space import r_from_db

INV_PI = 1.0 / math.pi


def test_disk_region_validation():
    assert DiskRegion(0.3).K == pytest.approx(0.3)
    with pytest.raises(ValueError):
        DiskRegion(0.0)


def test_success_prob_monotone_in_radius():
    lam = math.tanh(r_from_db(-5.0))
    ps = [success_prob_disk(lam, K) for K in (0.1, 0.3, 0.6, 1.5)]
    assert all(0 < p < 1 for p in ps)
    assert ps == sorted(ps)
    # attenuation barely moves the acceptance probability
    assert success_prob_disk_attenuated(lam, 0.3, 1.0) == pytest.approx(
        success_prob_disk(lam, 0.3), abs=1e-15)


def test_frozen_optimized_disk_values():
    # squeezing in dB -> (P, W, G*) for the K = 0.3 disk
    targets = {
        -3.0: (0.0111986, -0.2174132, 1.2380095),
        -5.0: (0.018672629215626513, -0.28416087257197015, 0.9899914207430969),
        -10.0: (0.0197667, -0.3152312, 0.9529107),
    }
    for db, (p_ref, w_ref, g_ref) in targets.items():
        lam = math.tanh(r_from_db(db))
        g = optimize_gain_disk(lam, 0.3)
        assert g == pytest.approx(g_ref, abs=1e-6)
        assert success_prob_disk(lam, 0.3) == pytest.approx(p_ref, abs=1e-6)
        assert origin_disk_fock1(lam, g, 0.3) == pytest.approx(w_ref, abs=1e-6)


def test_point_limit_of_disk():
    # shrinking acceptance disk restores the ideal negativity for any gain
    for lam in (0.1, 0.3, 0.6):
        for G in (lam, 1.0):
            assert origin_disk_fock1(lam, G, 1e-3) == pytest.approx(-INV_PI, abs=1e-4)
    assert origin_disk_fock1(0.1, 0.1, 1e-3) == pytest.approx(-0.31827869, abs=1e-6)


def test_point_limit_attenuated():
    # closed beta = 0 limit; eta = 1 gives -1/pi at any entanglement
    for lam in (0.2, 0.5, 0.9):
        assert origin_pointlimit_attenuated(lam, 1.0) == pytest.approx(-INV_PI)
    eta = 0.6304
    lam10 = math.tanh(r_from_db(-10.0))
    assert origin_pointlimit_attenuated(lam10, eta) == pytest.approx(
        -0.021071779486283512, abs=1e-12)
    # small disk converges onto the point value
    assert origin_disk_attenuated(lam10, 1.0, 1e-3, eta) == pytest.approx(
        origin_pointlimit_attenuated(lam10, eta), abs=1e-4)


def test_near_unit_lambda_expansion():
    # (1 - 2 eta + 4 eta (1 - eta)(1 - lambda))/pi within 1% for lambda >= 0.95
    for eta in (0.6304, 0.8):
        for lam in (0.95, 0.97, 0.99):
            exact = origin_pointlimit_attenuated(lam, eta)
            approx = (1 - 2 * eta + 4 * eta * (1 - eta) * (1 - lam)) / math.pi
            assert abs(approx - exact) / abs(exact) < 0.01


def test_attenuated_disk_frozen():
    eta = 0.6304
    lam = math.tanh(r_from_db(-10.0))
    g = optimize_gain_disk(lam, 0.3, eta=eta)
    assert g == pytest.approx(1.0083951126107655, abs=1e-6)
    assert origin_disk_attenuated(lam, g, 0.3, eta) == pytest.approx(
        -0.020917919183914613, abs=1e-9)
    assert success_prob_disk_attenuated(lam, 0.3, eta) == pytest.approx(
        0.023295, abs=1e-5)


def test_cond_exponent_positive():
    for lam in (0.1, 0.5, 0.9):
        for G in (0.5, 1.0, 1.5):
            assert cond_exponent(lam, G) > 0


def test_parameter_validation():
    with pytest.raises(ValueError):
        origin_disk_fock1(1.0, 1.0, 0.3)
    with pytest.raises(ValueError):
        origin_disk_fock1(0.5, 1.0, 0.0)
    with pytest.raises(ValueError):
        origin_disk_attenuated(0.5, 1.0, 0.3, 1.5)
