"""Hyperbolic-zone construction: one diagonalization step and the propagator.

After conjugating with the constant diagonalizer M, one further transformation
N_1 = I + N^(1) pushes the dissipation into a diagonal phase F^(0) plus a
remainder R_1 that decays like 1/|xi|.  The propagator is then

    E_hyp(t, s) = sqrt(b_eps(s)/b_eps(t)) M N_1(t) E_0(t, s) Q(t, s) N_1(s)^-1 M^-1

with Q solving D_t Q = E_0(s,t) R_1(t) E_0(t,s) Q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ZoneConstantError, ZoneError
from .mat2 import I2, M, M_INV, det2, inv2
from .oracle import IntegratorConfig, IntegratorStats, integrate_matrix_ode
from .quadrature import PanelGrid, split_panels
from .zones import path_in_hyp

_J2 = np.array([[0.0, -1.0], [1.0, 0.0]], dtype=complex)
_ONES = np.ones((2, 2), dtype=complex)


def e0(t: float, s: float, xi_abs: float):
    """Fundamental solution of the hyperbolic principal part: unitary phases."""
    ph = 1j * (t - s) * xi_abs
    return np.array([[np.exp(ph), 0.0], [0.0, np.exp(-ph)]], dtype=complex)


def _n1_from_d(d: float, xi_abs: float):
    n1 = I2 + (1j * d / (4.0 * xi_abs)) * _J2
    det = det2(n1)
    if abs(det) < 0.5:
        raise ZoneConstantError(
            f"det N_1 = {det:.3g}; zone constant too small for |xi| = {xi_abs}"
        )
    return n1, inv2(n1)


def n1_matrix(ev, t: float, xi_abs: float, eps: float):
    """Diagonalizer correction N_1 = I + i d_eps/(4|xi|) [[0,-1],[1,0]] and its inverse."""
    d = ev.dissipation_value(t, eps)
    return _n1_from_d(d, xi_abs)


def f0_diag(ev, t: float, eps: float):
    """Diagonal phase correction (i/2) d_eps(t) I."""
    return (0.5j * ev.dissipation_value(t, eps)) * I2.copy()


def _r1_from_d(d: float, dprime: float, xi_abs: float):
    n1, n1_inv = _n1_from_d(d, xi_abs)
    noff = (1j * d / (4.0 * xi_abs)) * _J2
    r_full = (0.5j * d) * _ONES
    f0 = (0.5j * d) * I2
    dt_noff = (dprime / (4.0 * xi_abs)) * _J2  # D_t = -i d/dt applied to N^(1)
    return n1_inv @ (r_full @ noff - dt_noff - noff @ f0)


def r1_matrix(ev, t: float, xi_abs: float, eps: float):
    """Remainder R_1 = N_1^-1 (R N^(1) - D_t N^(1) - N^(1) F^(0))."""
    d, dprime = ev.dissipation_coeff(t, eps)
    return _r1_from_d(d, dprime, xi_abs)


# ---------------------------------------------------------------------------
# Q: fundamental solution of the remainder system


def _q_ode(r1_of_t, t: float, s: float, xi_abs: float, tol: float,
           window=None):
    def gen(theta):
        return 1j * (e0(s, theta, xi_abs) @ r1_of_t(theta) @ e0(theta, s, xi_abs))

    # local tolerance well below the requested accuracy so the accumulated
    # global error stays within tol
    cfg = IntegratorConfig(rel_tol=max(tol / 50.0, 1e-13), abs_tol=max(tol / 5e3, 1e-13))
    windows = [window] if window is not None else []
    return integrate_matrix_ode(gen, s, t, cfg, slow_windows=windows)


def _q_series(r1_of_t, t: float, s: float, xi_abs: float, tol: float,
              jump_window=None, max_order: int = 40):
    """Peano-Baker sum for Q; cross-check mode for the ODE route."""
    if not t > s:
        raise ValueError("series mode needs s < t")
    knots = [s, t]
    if jump_window is not None:
        lo, hi = jump_window
        knots += [x for x in (lo, hi) if s < x < t]
    width_out = min(0.25, 2.0 / max(xi_abs, 1.0))
    edges = []
    for a, b in zip(sorted(knots)[:-1], sorted(knots)[1:]):
        w = width_out
        if jump_window is not None and a >= jump_window[0] - 1e-12 and b <= jump_window[1] + 1e-12:
            w = min(w, (jump_window[1] - jump_window[0]) / 24.0)
        edges.append(split_panels([a, b], w))
    breakpoints = np.unique(np.concatenate(edges))
    grid = PanelGrid(breakpoints, 10)
    vals = np.empty((len(grid.nodes), 2, 2), dtype=complex)
    for i, theta in enumerate(grid.nodes):
        vals[i] = 1j * (e0(s, theta, xi_abs) @ r1_of_t(theta) @ e0(theta, s, xi_abs))
    q = I2.copy()
    term_nodes = np.broadcast_to(I2, vals.shape).copy()
    for _ in range(max_order):
        integrand = vals @ term_nodes
        term_end = grid.integrate(integrand)
        q = q + term_end
        if np.max(np.abs(term_end)) < tol:
            break
        term_nodes = grid.cumulative(integrand)
    return q


def q_matrix(ev, t: float, s: float, xi_abs: float, eps: float, tol: float = 1e-9,
             series_check: bool = False):
    """Solve D_t Q = E_0(s,.) R_1 E_0(.,s) Q on [s, t]; returns (Q, stats).

    With series_check=True the Peano-Baker sum is evaluated on the same data
    and the discrepancy is stored in stats.series_discrepancy; the two routes
    must agree within 10*tol.
    """
    K = ev.moll.K
    lo, hi = 1.0 - eps * K, 1.0 + eps * K

    def r1_of_t(theta):
        return r1_matrix(ev, theta, xi_abs, eps)

    window = (lo, hi, eps / 10.0) if s < hi and t > lo else None
    q, stats = _q_ode(r1_of_t, t, s, xi_abs, tol, window=window)
    stats.series_discrepancy = None
    if series_check:
        q_pb = _q_series(r1_of_t, t, s, xi_abs, tol,
                         jump_window=(lo, hi) if window else None)
        stats.series_discrepancy = float(np.max(np.abs(q - q_pb)))
    return q, stats


# ---------------------------------------------------------------------------
# assembled hyperbolic propagator


@dataclass(frozen=True)
class HypPropagator:
    matrix: np.ndarray
    t_from: float
    t_to: float
    xi_abs: float
    eps: float
    q_stats: IntegratorStats


def e_hyp(ev, t: float, s: float, xi_abs: float, eps: float, N=None,
          tol: float = 1e-9) -> HypPropagator:
    """Hyperbolic-zone propagator from s to t (path must stay in Z_hyp)."""
    if N is None:
        N = ev.zone_constant()
    if not path_in_hyp(ev.moll, s, t, xi_abs, eps, N):
        raise ZoneError(
            f"[{s}, {t}] x (|xi|={xi_abs}, eps={eps}) leaves the hyperbolic zone"
        )
    if t == s:
        return HypPropagator(I2.copy(), s, t, xi_abs, eps, IntegratorStats())
    q, stats = q_matrix(ev, t, s, xi_abs, eps, tol)
    n1_t, _ = n1_matrix(ev, t, xi_abs, eps)
    _, n1s_inv = n1_matrix(ev, s, xi_abs, eps)
    amp = math.sqrt(ev.mollified_coeff(s, eps, 0) / ev.mollified_coeff(t, eps, 0))
    mat = amp * (M @ n1_t @ e0(t, s, xi_abs) @ q @ n1s_inv @ M_INV)
    return HypPropagator(mat, s, t, xi_abs, eps, stats)


# ---------------------------------------------------------------------------
# the eps -> 0 limit on one side of the jump


def _branch_dissipation(branch):
    def d_pair(t):
        b = branch.eval(t)
        d = branch.eval(t, 1) / b
        return d, branch.eval(t, 2) / b - d * d

    return d_pair


def _infer_side(t: float, s: float) -> str:
    if max(t, s) <= 1.0:
        return "left"
    if min(t, s) >= 1.0:
        return "right"
    raise ZoneError("limit propagator needs s, t on the same side of the jump")


def n1_matrix_limit(coeff, t: float, xi_abs: float, side: str = "right"):
    branch = coeff.left if side == "left" else coeff.right
    d = branch.eval(t, 1) / branch.eval(t)
    return _n1_from_d(float(d), xi_abs)


def e_hyp_limit(coeff, t: float, s: float, xi_abs: float, side: str | None = None,
                tol: float = 1e-11):
    """The eps = 0 hyperbolic propagator built from the smooth branch directly."""
    if side is None:
        side = _infer_side(t, s)
    branch = coeff.left if side == "left" else coeff.right
    if branch.is_constant or t == s:
        return M @ e0(t, s, xi_abs) @ M_INV
    d_pair = _branch_dissipation(branch)

    def r1_of_t(theta):
        d, dp = d_pair(theta)
        return _r1_from_d(float(d), float(dp), xi_abs)

    q, _ = _q_ode(r1_of_t, t, s, xi_abs, tol)
    n1_t, _ = _n1_from_d(float(d_pair(t)[0]), xi_abs)
    _, n1s_inv = _n1_from_d(float(d_pair(s)[0]), xi_abs)
    amp = math.sqrt(branch.eval(s) / branch.eval(t))
    return amp * (M @ n1_t @ e0(t, s, xi_abs) @ q @ n1s_inv @ M_INV)
