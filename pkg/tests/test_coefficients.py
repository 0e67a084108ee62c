import math

import numpy as np
import pytest

import singwave as sw
from singwave.coefficients import (
    Branch,
    JumpCoefficient,
    MollifierPair,
    beta_zero,
    eval_branch,
    uniform_bound_report,
    parse_scenario_text,
    scenario_from_config,
    smoothed_heaviside,
    window_refined_grid,
)
from singwave.errors import ResolutionError, UnsupportedOrderError


def trapz_oracle(f, a, b, n=200001):
    """Independent fine trapezoid rule, deliberately not Gauss-based."""
    x = np.linspace(a, b, n)
    return float(np.trapezoid(f(x), x))


# ---------------------------------------------------------------------------
# branches and the jump coefficient


def test_eval_branch_default():
    coeff = sw.default_jump()
    assert eval_branch(coeff, 0.3, 0) == 0.5
    assert eval_branch(coeff, 1.7, 1) == 0.0


def test_eval_branch_polynomial_derivative():
    coeff = JumpCoefficient(Branch.constant(0.5), Branch.polynomial((1.0, 0.0, 0.25)))
    # right branch 1 + t^2/4, derivative at 1.5 is 0.75
    assert abs(eval_branch(coeff, 1.5, 1) - 0.75) < 1e-15


def test_eval_branch_side_at_jump():
    coeff = sw.default_jump()
    assert eval_branch(coeff, 1.0, 0) == 1.5
    assert eval_branch(coeff, 1.0, 0, side="left") == 0.5


def test_eval_branch_order_error():
    coeff = sw.default_jump()
    with pytest.raises(UnsupportedOrderError):
        eval_branch(coeff, 0.5, coeff.k_max + 1)


def test_jump_constants():
    coeff = sw.default_jump()
    assert coeff.h == 1.0
    assert coeff.H == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert coeff.b0 == 0.5


def test_nonpositive_coefficient_rejected():
    with pytest.raises(ValueError):
        JumpCoefficient(Branch.constant(0.5), Branch.polynomial((0.0, 1.0, -1.0)))


# ---------------------------------------------------------------------------
# mollifier pair


def test_mollifier_admissibility():
    moll = MollifierPair()
    mass = trapz_oracle(moll.psi, -moll.K, moll.K)
    assert abs(mass - 1.0) < 1e-10  # trapezoid oracle limit; Gauss path is 1e-15
    assert abs(moll._psi_integral(-moll.K, moll.K) - 1.0) < 1e-12
    t = np.linspace(-moll.K, moll.K, 1001)
    assert np.max(np.abs(moll.psi(t) - moll.psi(-t))) < 1e-14
    assert np.all(moll.psi(t) >= 0.0)
    assert np.all(moll.psi(t) <= moll.c_psi_phi * moll.phi(t) + 1e-12)


def test_shape_function_square_bound():
    # triangular Phi has -Phi' = 1 on (0, K'), so Phi^2 <= K'^2 * (-Phi')
    moll = MollifierPair()
    t = np.linspace(1e-6, moll.K_prime - 1e-6, 1001)
    assert np.all(moll.phi(t) ** 2 <= moll.K_prime**2 + 1e-12)


def test_psi_zero_value_against_oracle():
    moll = MollifierPair()
    base_mass = trapz_oracle(lambda u: np.exp(-1.0 / (1.0 - np.clip(u, -0.999999, 0.999999) ** 2)), -1.0, 1.0)
    assert abs(moll.psi(0.0) - math.exp(-1.0) / base_mass) < 1e-6
    assert moll.psi(0.0) == pytest.approx(0.82857, abs=2e-5)


def test_mollifier_requires_strict_support_ordering():
    with pytest.raises(ValueError):
        MollifierPair(K=2.0, K_prime=2.0)


def test_polynomial_bump_variant():
    moll = MollifierPair(psi_kind="polynomial_bump")
    assert abs(moll._psi_integral(-moll.K, moll.K) - 1.0) < 1e-12
    assert moll.psi(moll.K) == 0.0
    with pytest.raises(UnsupportedOrderError):
        moll.psi(0.0, k=moll.poly_degree)


def test_smoothed_heaviside():
    moll = MollifierPair()
    assert smoothed_heaviside(moll, 0.0) == pytest.approx(0.5, abs=1e-13)
    assert smoothed_heaviside(moll, -moll.K) == 0.0
    assert smoothed_heaviside(moll, moll.K) == 1.0
    taus = np.linspace(-1.5, 1.5, 31)
    for tv in taus:
        assert abs(moll.theta(tv) + moll.theta(-tv) - 1.0) < 1e-12
    vals = moll.theta(taus)
    assert np.all(np.diff(vals) >= -1e-15)


# ---------------------------------------------------------------------------
# regularized evaluation


def test_mollified_away_from_jump(default_ev):
    # mollifier support [0.4, 0.6] misses the jump
    assert default_ev.mollified_coeff(0.5, 0.1, 0) == 0.5


def test_mollified_at_jump(default_ev):
    # b_eps(1) = b(1-0) + h*Theta(0)
    assert default_ev.mollified_coeff(1.0, 0.1, 0) == pytest.approx(1.0, abs=1e-12)


def test_mollified_derivative_at_jump(default_ev):
    # b_eps'(t) = h psi_eps(t-1) for piecewise-constant b
    psi0 = default_ev.moll.psi(0.0)
    val = default_ev.mollified_coeff(1.0, 0.05, 1)
    assert val == pytest.approx(20.0 * psi0, rel=1e-12)
    assert val == pytest.approx(16.571, abs=2e-3)


def test_dissipation_away_from_jump(default_ev):
    assert default_ev.dissipation_coeff(0.2, 0.1) == (0.0, 0.0)


def test_dissipation_at_jump(default_ev):
    val, _ = default_ev.dissipation_coeff(1.0, 0.1)
    assert val == pytest.approx(default_ev.moll.psi_eps(0.0, 0.1), rel=1e-11)
    assert val == pytest.approx(8.2857, abs=2e-4)


def test_dissipation_defining_identity(curved_ev):
    rng = np.random.default_rng(7)
    for _ in range(20):
        t = rng.uniform(0.0, 2.0)
        eps = rng.uniform(0.01, 0.5)
        d, _ = curved_ev.dissipation_coeff(t, eps)
        b0v = curved_ev.mollified_coeff(t, eps, 0)
        b1 = curved_ev.mollified_coeff(t, eps, 1)
        assert abs(d * b0v - b1) < 1e-12


def test_dissipation_derivative_consistency(curved_ev):
    # the recursion's first derivative equals the quotient-rule closed form
    t, eps = 1.02, 0.07
    d, dp = curved_ev.dissipation_coeff(t, eps)
    ds = curved_ev.dissipation_derivatives(t, eps, 1)
    assert abs(ds[0] - d) < 1e-13
    assert abs(ds[1] - dp) < 1e-11


def test_beta_eps_center(default_ev):
    psi0 = default_ev.moll.psi(0.0)
    for eps in (0.5, 0.1, 0.01):
        assert default_ev.beta_eps(0.0, eps) == pytest.approx(psi0, rel=1e-11)


def test_beta_eps_outside_support_vanishes(curved_ev):
    # |tau| >= K+1 and the window misses the jump: O(eps), decreasing
    tau = curved_ev.moll.K + 1.0
    v2 = abs(curved_ev.beta_eps(tau, 1e-2))
    v3 = abs(curved_ev.beta_eps(tau, 1e-3))
    assert v2 < 0.02
    assert v3 < v2 / 5.0


def test_beta_eps_no_jump_rate():
    # same smooth branch on both sides: sup |beta_eps| = O(eps)
    branch = Branch.polynomial((1.0, 0.0, 0.125))
    ev = sw.RegularizedEval(JumpCoefficient(branch, branch))
    assert ev.coeff.h == 0.0
    taus = np.linspace(-2.0, 2.0, 41)
    pairs = []
    for k in range(3, 9):
        eps = 2.0**-k
        pairs.append((eps, max(abs(ev.beta_eps(tv, eps)) for tv in taus)))
    assert sw.fit_rate(pairs).slope >= 0.9


def test_beta_identity_piecewise_constant(default_ev):
    coeff, moll = default_ev.coeff, default_ev.moll
    for tau in np.linspace(-1.5, 1.5, 21):
        for eps in (0.3, 0.05):
            assert abs(default_ev.beta_eps(tau, eps) - beta_zero(coeff, moll, tau)) < 1e-10


def test_beta_rate_general_coefficient(curved_ev):
    coeff, moll = curved_ev.coeff, curved_ev.moll
    taus = np.linspace(-2.5, 2.5, 61)
    pairs = []
    for k in range(3, 10):
        eps = 2.0**-k
        sup = max(abs(curved_ev.beta_eps(tv, eps) - beta_zero(coeff, moll, tv))
                  for tv in taus)
        pairs.append((eps, sup))
    assert sw.fit_rate(pairs).slope >= 0.9


def test_beta_zero_values(default_ev):
    coeff, moll = default_ev.coeff, default_ev.moll
    assert beta_zero(coeff, moll, 0.0) == pytest.approx(moll.psi(0.0), rel=1e-12)
    assert beta_zero(coeff, moll, moll.K) == 0.0
    assert beta_zero(coeff, moll, -moll.K) == 0.0


def test_beta_zero_integral_is_log_jump(default_ev):
    coeff, moll = default_ev.coeff, default_ev.moll
    total = trapz_oracle(lambda tau: beta_zero(coeff, moll, tau), -moll.K, moll.K, 100001)
    assert total == pytest.approx(math.log(3.0), abs=1e-9)


def test_positivity_invariant(curved_ev):
    for eps in (0.7, 0.2, 0.03):
        for t in np.linspace(0.0, 2.0, 41):
            assert curved_ev.mollified_coeff(t, eps, 0) >= curved_ev.coeff.b0 - 1e-12


def test_exactness_on_constants(const_ev):
    for eps in (0.9, 0.1):
        for t in (0.1, 0.97, 1.0, 1.4):
            assert abs(const_ev.mollified_coeff(t, eps, 0) - 1.0) < 1e-13
            d, dp = const_ev.dissipation_coeff(t, eps)
            assert abs(d) < 1e-12 and abs(dp) < 1e-11


def test_piecewise_constant_closed_forms(default_ev):
    coeff, moll = default_ev.coeff, default_ev.moll
    for eps in (0.2, 0.05):
        for t in np.linspace(0.8, 1.2, 17):
            tau = (t - 1.0) / eps
            b_closed = coeff.b_left + coeff.h * moll.theta(tau)
            db_closed = coeff.h * moll.psi_eps(t - 1.0, eps)
            assert abs(default_ev.mollified_coeff(t, eps, 0) - b_closed) < 1e-10
            assert abs(default_ev.mollified_coeff(t, eps, 1) - db_closed) < 1e-10 * (
                1.0 + abs(db_closed)
            )


# ---------------------------------------------------------------------------
# bound / rate report


EPS_LIST = [2.0**-k for k in range(3, 9)]


def test_bound_report_constant_branches(default_ev):
    report = uniform_bound_report(default_ev, 1, EPS_LIST)
    for row in report.rows_for(0):
        assert row.sup_diff == 0.0  # constant branches are mollifier-transparent
    assert math.isnan(report.diff_slopes[0])
    # k = 1: sup |b_eps'|/(Phi_eps+1) <= |h| c_psiPhi
    bound = abs(default_ev.coeff.h) * default_ev.moll.c_psi_phi
    for row in report.rows_for(1):
        assert row.sup_b_ratio <= bound * (1.0 + 1e-9)


def test_bound_report_affine_branch_transparent():
    # a straight-line branch is reproduced exactly by the symmetric mollifier,
    # so the difference sup collapses to rounding and no slope can be fitted
    ev = sw.RegularizedEval(JumpCoefficient(Branch.constant(0.5),
                                            Branch.polynomial((0.0, 1.0))))
    report = uniform_bound_report(ev, 0, EPS_LIST)
    assert all(r.sup_diff < 1e-12 for r in report.rows_for(0))
    assert math.isnan(report.diff_slopes[0])


def test_bound_report_curved_branch_rate(curved_ev):
    report = uniform_bound_report(curved_ev, 0, EPS_LIST)
    assert report.diff_slopes[0] >= 0.9  # observed ~2 (symmetric mollifier)
    assert report.bin_ratio(0, "b") <= 2.0
    assert report.bin_ratio(0, "d") <= 2.0


def test_bound_report_resolution_error(default_ev):
    with pytest.raises(ResolutionError):
        uniform_bound_report(default_ev, 0, EPS_LIST, t_grid=np.linspace(0, 2, 11))


def test_window_refined_grid_resolves_smallest_window(default_ev):
    grid = window_refined_grid(default_ev.moll, EPS_LIST)
    win = np.abs(grid - 1.0) <= EPS_LIST[-1] * default_ev.moll.K
    assert np.count_nonzero(win) >= 3


def test_bound_report_csv(tmp_path, default_ev):
    report = uniform_bound_report(default_ev, 1, EPS_LIST[:4])
    paths = report.write_csv(str(tmp_path / "report"))
    header = open(paths[0]).readline().strip()
    assert header == "k,eps,sup_ratio,slope"


# ---------------------------------------------------------------------------
# scenario configuration


def test_parse_scenario_text():
    cfg = parse_scenario_text("# comment\nleft = constant:0.5\nK = 1.0\n")
    assert cfg == {"left": "constant:0.5", "K": "1.0"}


def test_scenario_builtin_and_file(tmp_path):
    ev = scenario_from_config("curved")
    assert ev.coeff.h == 0.5
    path = tmp_path / "scen.cfg"
    path.write_text("left = constant:1.0\nright = poly:2.0,1.0\nquad_order = 24\n")
    ev2 = scenario_from_config(str(path))
    assert ev2.coeff.b_right == 3.0
    assert ev2.quad_order == 24
