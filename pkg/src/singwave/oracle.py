"""Independent reference integrators and rate fitting.

The direct propagators integrate the untransformed first-order systems in both
coordinate charts with an embedded Dormand-Prince 4(5) pair and PI step
control, implemented here so the reference path shares no code with the
zone-wise construction it is used to check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IntegrationError
from .mat2 import I2

# Dormand-Prince 5(4) tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_B4 = np.array(
    [5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40]
)
_E = _B5 - _B4


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 2_000_000
    min_step: float = 1e-14

    def __post_init__(self):
        for tol in (self.rel_tol, self.abs_tol):
            if not 1e-13 <= tol <= 1e-3:
                raise ValueError("tolerances must lie in [1e-13, 1e-3]")


@dataclass
class IntegratorStats:
    steps: int = 0
    rejected: int = 0
    est_error: float = 0.0


def integrate_matrix_ode(gen, t0: float, t1: float, cfg: IntegratorConfig | None = None,
                         slow_windows=(), y0=None, h0: float | None = None):
    """Solve Y' = gen(t) Y from t0 to t1 (either direction), Y(t0) = y0.

    gen(t) returns the 2x2 complex generator.  slow_windows is a sequence of
    (lo, hi, h_max) triples forcing small steps across known fast features.
    Returns (Y(t1), IntegratorStats).
    """
    cfg = cfg or IntegratorConfig()
    y = I2.copy() if y0 is None else np.array(y0, dtype=complex)
    if t1 == t0:
        return y, IntegratorStats()
    sgn = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)
    h = min(span, h0 if h0 is not None else max(1e-6, 1e-2 * span))
    t = t0
    stats = IntegratorStats()
    err_old = 1.0
    k = [None] * 7
    while sgn * (t1 - t) > 0:
        rem = abs(t1 - t)
        if rem <= 1e-13 * max(1.0, abs(t1)):
            break  # endpoint reached up to rounding
        h = min(h, rem)
        for lo, hi, hmax in slow_windows:
            a, b = (t, t + sgn * h) if sgn > 0 else (t - h, t)
            if b > lo and a < hi:
                h = min(h, hmax)
        if h < cfg.min_step:
            raise IntegrationError(f"step underflow at t={t}")
        hs = sgn * h
        k[0] = gen(t) @ y
        for i in range(1, 7):
            acc = _A[i][0] * k[0]
            for j in range(1, i):
                acc = acc + _A[i][j] * k[j]
            k[i] = gen(t + _C[i] * hs) @ (y + hs * acc)
        y5 = y + hs * sum(_B5[i] * k[i] for i in range(7) if _B5[i] != 0.0)
        err_mat = hs * sum(_E[i] * k[i] for i in range(7) if _E[i] != 0.0)
        scale = cfg.abs_tol + cfg.rel_tol * max(np.max(np.abs(y)), np.max(np.abs(y5)))
        err = np.max(np.abs(err_mat)) / scale
        if err <= 1.0:
            t = t + hs
            y = y5
            stats.steps += 1
            stats.est_error = max(stats.est_error, float(err * scale))
            err_old = max(err, 1e-10)
        else:
            stats.rejected += 1
        # PI step-size controller
        fac = 0.9 * (max(err, 1e-10)) ** (-0.17) * err_old**0.04
        h = h * min(5.0, max(0.2, fac))
        if stats.steps + stats.rejected > cfg.max_steps:
            raise IntegrationError(f"max_steps exceeded; reached t={t} of {t1}")
    return y, stats


# ---------------------------------------------------------------------------
# direct propagators


def direct_propagator(ev, t1: float, t2: float, xi_abs: float, eps: float,
                      cfg: IntegratorConfig | None = None):
    """Fundamental solution of the raw frequency-space system from t1 to t2.

    Integrates D_t U = [A(xi) + B(t, eps)] U for the micro-energy
    U = (|xi| u_hat, D_t u_hat), forcing steps <= eps/10 across the mollifier
    window around t = 1.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    xi = float(xi_abs)
    buf = np.array([[0.0, 1j * xi], [1j * xi, 0.0]], dtype=complex)

    def gen(t):
        buf[1, 1] = -ev.dissipation_value(t, eps)  # consumed before the next call
        return buf

    K = ev.moll.K
    windows = [(1.0 - eps * K, 1.0 + eps * K, eps / 10.0)]
    y, _ = integrate_matrix_ode(gen, t1, t2, cfg, slow_windows=windows)
    return y


def direct_singular_propagator(ev, tau1: float, tau2: float, lam: float, eps: float,
                               cfg: IntegratorConfig | None = None):
    """Same contract in singular variables: d/dtau U = [diag(0, -beta) + Lambda J] U."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")

    def gen(tau):
        return np.array(
            [[0.0, lam], [-lam, -ev.beta_eps(tau, eps)]], dtype=complex
        )

    y, _ = integrate_matrix_ode(gen, tau1, tau2, cfg)
    return y


# ---------------------------------------------------------------------------
# rate fitting


@dataclass(frozen=True)
class RateFit:
    pairs: tuple          # (eps, error), sorted by eps descending
    slope: float
    intercept: float
    r_squared: float


def fit_rate(pairs) -> RateFit:
    """Least-squares slope of log(error) against log(eps)."""
    pts = sorted(((float(e), float(d)) for e, d in pairs), key=lambda p: -p[0])
    if len(pts) < 4:
        raise ValueError("need at least 4 (eps, error) pairs")
    if any(d <= 0.0 for _, d in pts):
        raise ValueError("all errors must be positive for a log-log fit")
    le = np.log([p[0] for p in pts])
    ld = np.log([p[1] for p in pts])
    slope, intercept = np.polyfit(le, ld, 1)
    resid = ld - (slope * le + intercept)
    ss_tot = float(np.sum((ld - ld.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return RateFit(pairs=tuple(pts), slope=float(slope), intercept=float(intercept),
                   r_squared=r2)
