import numpy as np
import pytest

import singwave as sw
from singwave.coefficients import Branch, JumpCoefficient
from singwave.errors import ZoneError
from singwave.zones import (
    SingularPoint,
    ZoneLabel,
    ZonePoint,
    boundary_polyline,
    choose_zone_constant,
    classify,
    hyp_boundary_times,
    path_in_hyp,
    sing_boundary_taus,
    to_singular,
    to_zone,
)


def test_zone_constant_default(default_ev):
    zc = choose_zone_constant(default_ev)
    moll, coeff = default_ev.moll, default_ev.coeff
    # |h|/b0 = 2 for the default coefficient, so c1 = 2 c_psiPhi
    assert zc.c1 == pytest.approx(2.0 * moll.c_psi_phi, rel=1e-14)
    assert zc.c2 == 0.0
    assert zc.N == pytest.approx(2.0 * zc.c1, rel=1e-14)
    # sampling oracle: |d_eps| <= c1 Phi_eps + c2 on a (t, eps) grid
    for eps in (0.5, 0.1, 0.02):
        for t in np.linspace(0.85, 1.15, 61):
            d = abs(default_ev.dissipation_value(t, eps))
            bound = zc.c1 * moll.phi_eps(t - 1.0, eps) + zc.c2
            assert d <= bound + 1e-10


def test_zone_constant_no_jump(const_ev):
    assert choose_zone_constant(const_ev).N == 1.0


def test_zone_constant_affine_right_branch():
    ev = sw.RegularizedEval(JumpCoefficient(Branch.constant(0.5),
                                            Branch.polynomial((0.0, 1.0))))
    zc = choose_zone_constant(ev)
    assert zc.c2 == pytest.approx(1.0 / ev.coeff.b0, rel=1e-14)
    assert zc.N >= 2.0 / ev.coeff.b0


def test_zone_constant_guarantees_small_diagonalizer(default_ev):
    zc = choose_zone_constant(default_ev)
    moll = default_ev.moll
    rng = np.random.default_rng(3)
    for _ in range(300):
        eps = float(rng.uniform(0.01, 1.0))
        t = float(rng.uniform(0.0, 2.0))
        thresh = zc.N * (moll.phi_eps(t - 1.0, eps) + 1.0)
        xi = thresh * float(rng.uniform(1.0, 10.0))
        d = default_ev.dissipation_value(t, eps)
        assert abs(d) / (4.0 * xi) <= 0.25 + 1e-12


def test_classify_examples(default_ev):
    moll = default_ev.moll
    assert classify(moll, ZonePoint(0.5, 0.5, 0.1), 1.0) is ZoneLabel.BD
    # N=2, eps=0.1, t=1: threshold 2*(20+1) = 42
    assert classify(moll, ZonePoint(1.0, 50.0, 0.1), 2.0) is ZoneLabel.HYP
    assert classify(moll, ZonePoint(1.0, 30.0, 0.1), 2.0) is ZoneLabel.SING


def test_hyp_boundary_times(default_ev):
    moll = default_ev.moll
    t1, t2 = hyp_boundary_times(moll, 42.0, 0.1, 2.0)
    assert t1 == pytest.approx(1.0) and t2 == pytest.approx(1.0)
    t1, t2 = hyp_boundary_times(moll, 22.0, 0.1, 2.0)
    assert (t1, t2) == (pytest.approx(0.9), pytest.approx(1.1))
    assert hyp_boundary_times(moll, 43.0, 0.1, 2.0) is None
    with pytest.raises(ZoneError):
        hyp_boundary_times(moll, 1.5, 0.1, 2.0)


def test_sing_boundary_taus(default_ev):
    moll = default_ev.moll
    # Lambda = N (Phi(tau) + eps) with N=2, eps=0.1: Lambda=2.2 -> |tau| = 1
    taus = sing_boundary_taus(moll, 2.2, 0.1, 2.0)
    assert taus == (pytest.approx(-1.0), pytest.approx(1.0))
    # apex: Lambda = N (Phi(0) + eps)
    taus = sing_boundary_taus(moll, 2.0 * (moll.K_prime + 0.1), 0.1, 2.0)
    assert taus == (pytest.approx(0.0, abs=1e-14), pytest.approx(0.0, abs=1e-14))
    assert sing_boundary_taus(moll, 4.3, 0.1, 2.0) is None
    with pytest.raises(ZoneError):
        sing_boundary_taus(moll, 0.15, 0.1, 2.0)


def test_boundary_parameterizations_agree(default_ev):
    # the same curve in both charts: tau_i = (t_i - 1)/eps, Lambda = eps |xi|
    moll = default_ev.moll
    eps, N = 0.1, 2.0
    for xi in (22.0, 30.0, 41.0):
        t1, t2 = hyp_boundary_times(moll, xi, eps, N)
        tau1, tau2 = sing_boundary_taus(moll, eps * xi, eps, N)
        assert tau1 == pytest.approx((t1 - 1.0) / eps, abs=1e-12)
        assert tau2 == pytest.approx((t2 - 1.0) / eps, abs=1e-12)


def test_partition_and_boundary_agreement(default_ev):
    moll = default_ev.moll
    N = 2.0
    rng = np.random.default_rng(11)
    for _ in range(500):
        p = ZonePoint(float(rng.uniform(0, 2)), float(rng.uniform(0, 80)),
                      float(rng.uniform(0.02, 1.0)))
        label = classify(moll, p, N)
        assert label in (ZoneLabel.HYP, ZoneLabel.SING, ZoneLabel.BD)
    # points epsilon-close to the computed boundary classify consistently
    eps = 0.1
    t1, t2 = hyp_boundary_times(moll, 22.0, eps, N)
    for t_star in (t1, t2):
        thresh = N * (moll.phi_eps(t_star - 1.0, eps) + 1.0)
        assert abs(thresh - 22.0) < 1e-12
        assert classify(moll, ZonePoint(t_star, 22.0 + 1e-9, eps), N) is ZoneLabel.HYP
        assert classify(moll, ZonePoint(t_star, 22.0 - 1e-9, eps), N) is ZoneLabel.SING


def test_classification_monotone_in_xi(default_ev):
    moll = default_ev.moll
    order = {ZoneLabel.BD: 0, ZoneLabel.SING: 1, ZoneLabel.HYP: 2}
    for t, eps in ((1.0, 0.1), (0.95, 0.05), (1.3, 0.4)):
        labels = [order[classify(moll, ZonePoint(t, xi, eps), 2.0)]
                  for xi in np.linspace(0.1, 100, 200)]
        assert all(b >= a for a, b in zip(labels, labels[1:]))


def test_coordinate_round_trip():
    # exact up to 1 ulp of the t representation, i.e. ~eps^-1 ulps in tau
    rng = np.random.default_rng(5)
    for _ in range(100):
        eps = float(rng.uniform(0.001, 1.0))
        p = ZonePoint(float(rng.uniform(0, 2)), float(rng.uniform(0.01, 100)), eps)
        q = to_zone(to_singular(p))
        assert q.t == pytest.approx(p.t, rel=0, abs=4e-16 * max(1, abs(p.t)))
        assert q.xi_abs == pytest.approx(p.xi_abs, rel=4e-16)
        sp = SingularPoint(float(rng.uniform(-3, 3)), float(rng.uniform(0.01, 4)), eps)
        sq = to_singular(to_zone(sp))
        assert sq.tau == pytest.approx(sp.tau, rel=4e-16, abs=5e-16 / eps)
        assert sq.lam == pytest.approx(sp.lam, rel=4e-16)


def test_path_in_hyp_boundary_inclusive(default_ev):
    moll = default_ev.moll
    eps, N, xi = 0.1, 2.0, 22.0
    t1, t2 = hyp_boundary_times(moll, xi, eps, N)
    assert path_in_hyp(moll, 0.0, t1, xi, eps, N)
    assert path_in_hyp(moll, t2, 2.0, xi, eps, N)
    assert not path_in_hyp(moll, 0.0, t1 + 1e-6, xi, eps, N)


def test_boundary_polyline_columns(default_ev):
    table = boundary_polyline(default_ev.moll, 0.1, 2.0, 65)
    assert table.shape == (65, 4)
    t, xi, tau, lam = table.T
    assert np.allclose(tau, (t - 1.0) / 0.1)
    assert np.allclose(lam, 0.1 * xi)
