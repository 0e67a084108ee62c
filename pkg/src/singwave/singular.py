"""Singular-zone construction: diagonal transfer F, power series G, and E_sing.

In singular variables the system reads d/dtau U = [diag(0, -beta_eps) +
Lambda J] U.  Its fundamental solution factors as E_sing = F G with

    F(tau, theta) = diag(1, exp(-int_theta^tau beta_eps)),
    G = I + sum_k Lambda^k G_k,   G_k(tau) = int_theta^tau Ftilde(r) G_{k-1}(r) dr,

where Ftilde = F^-1 J F is antidiagonal with unit determinant.  As eps and
Lambda tend to zero across the full zone, E_sing approaches diag(1, H).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResolutionError
from .mat2 import I2, diag2, inv2
from .quadrature import PanelGrid, split_panels


def _beta_breakpoints(moll, a: float, b: float):
    K = moll.K
    inner = [x for x in (-K, 0.0, K) if a < x < b]
    return split_panels([a] + inner + [b], min(K / 4.0, max(K / 8.0, (b - a) / 32.0)))


def beta_integral(ev, a: float, b: float, eps: float) -> float:
    """Integral of beta_eps over [a, b] (signed; a > b allowed)."""
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    grid = PanelGrid(_beta_breakpoints(ev.moll, a, b), 20)
    vals = np.array([ev.beta_eps(tau, eps) for tau in grid.nodes])
    return sign * float(grid.integrate(vals))


def f_diag(ev, tau: float, theta: float, eps: float):
    """Diagonal transfer diag(1, exp(-int_theta^tau beta_eps))."""
    return diag2(1.0, math.exp(-beta_integral(ev, theta, tau, eps)))


def f_diag_limit(coeff, moll, tau: float, theta: float):
    """eps -> 0 closed form: the exponential collapses to a quotient of h Theta + b(1-0)."""
    den = lambda x: coeff.h * moll.theta(x) + coeff.b_left
    return diag2(1.0, den(theta) / den(tau))


def f_tilde(ev, tau: float, theta: float, eps: float):
    """Antidiagonal coefficient F^-1 J F = [[0, e^-I], [-e^I, 0]], I = int_theta^tau beta_eps."""
    I = beta_integral(ev, theta, tau, eps)
    return np.array([[0.0, math.exp(-I)], [-math.exp(I), 0.0]], dtype=complex)


@dataclass(frozen=True)
class SingPropagator:
    matrix: np.ndarray
    tau_from: float
    tau_to: float
    lam: float
    eps: float
    truncation_order: int
    tail_bound: float


class _GSeriesGrid:
    """Shared node grid over [theta, tau]: beta cumulative and Ftilde at all nodes."""

    def __init__(self, ev, tau: float, theta: float, eps: float, n_nodes: int):
        p = 8
        n_panels = max(8, int(np.ceil(n_nodes / p)))
        bp = _beta_breakpoints(ev.moll, theta, tau)
        bp = split_panels(bp, (tau - theta) / n_panels)
        self.grid = PanelGrid(bp, p)
        beta_vals = np.array([ev.beta_eps(r, eps) for r in self.grid.nodes])
        cum = self.grid.cumulative(beta_vals)          # int_theta^r beta
        self.total_beta = float(self.grid.integrate(beta_vals))
        n = len(self.grid.nodes)
        self.ftilde = np.zeros((n, 2, 2), dtype=complex)
        self.ftilde[:, 0, 1] = np.exp(-cum)
        self.ftilde[:, 1, 0] = -np.exp(cum)
        self.c_bound = 1.1 * float(np.max(np.maximum(np.exp(cum), np.exp(-cum))))


def g_series(ev, tau: float, theta: float, lam: float, eps: float,
             tol: float = 1e-10, n_nodes: int = 512, k_cap: int = 60):
    """Power-series factor G = I + sum Lambda^k G_k, truncated by the factorial tail.

    Returns (G, order, tail_bound).  The tail bound uses the certified sup of
    ||Ftilde|| on the evaluation grid (plus 10% margin), so the truncation
    order is driven by data, not by a hand-picked constant; the tail itself is
    majorized term by term (geometric beyond the current order), which stays
    accurate where exp(x) minus a partial sum would cancel catastrophically.
    """
    if tau == theta or lam == 0.0:
        return I2.copy(), 0, 0.0
    if tau < theta:
        raise ValueError("g_series needs theta <= tau")
    gs = _GSeriesGrid(ev, tau, theta, eps, n_nodes)
    x = gs.c_bound * lam * (tau - theta)
    total = I2.copy()
    gk_nodes = np.broadcast_to(I2, gs.ftilde.shape).copy()
    term = 1.0  # x^k / k!
    for k in range(1, k_cap + 1):
        integrand = gs.ftilde @ gk_nodes
        gk_end = gs.grid.integrate(integrand)
        total = total + (lam**k) * gk_end
        term *= x / k
        ratio = x / (k + 1)
        if ratio < 1.0:
            tail = term * ratio / (1.0 - ratio)
            if tail < tol:
                return total, k, float(tail)
        gk_nodes = gs.grid.cumulative(integrand)
    raise ResolutionError(
        f"series not below tol={tol} within {k_cap} orders (x={x:.3g})"
    )


def g_series_coefficients(ev, tau: float, theta: float, eps: float, k_max: int,
                          n_nodes: int = 512):
    """The raw coefficients G_1..G_k_max at tau (for bound and limit studies)."""
    gs = _GSeriesGrid(ev, tau, theta, eps, n_nodes)
    out = []
    gk_nodes = np.broadcast_to(I2, gs.ftilde.shape).copy()
    for _ in range(k_max):
        integrand = gs.ftilde @ gk_nodes
        out.append(gs.grid.integrate(integrand))
        gk_nodes = gs.grid.cumulative(integrand)
    return out, gs.c_bound


def e_sing(ev, tau: float, theta: float, lam: float, eps: float,
           tol: float = 1e-10) -> SingPropagator:
    """Singular-zone propagator F(tau, theta) G(tau, theta, Lambda).

    Defined for both argument orders; for tau < theta it is the flow inverse
    of the forward propagator.
    """
    if tau == theta:
        return SingPropagator(I2.copy(), theta, tau, lam, eps, 0, 0.0)
    if tau < theta:
        fwd = e_sing(ev, theta, tau, lam, eps, tol)
        return SingPropagator(inv2(fwd.matrix), theta, tau, lam, eps,
                              fwd.truncation_order, fwd.tail_bound)
    g, order, tail = g_series(ev, tau, theta, lam, eps, tol)
    mat = f_diag(ev, tau, theta, eps) @ g
    return SingPropagator(mat, theta, tau, lam, eps, order, tail)


def transfer_limit(coeff):
    """The limiting transfer matrix across the whole singular zone: diag(1, H)."""
    return diag2(1.0, coeff.H)
