"""Gluing the zone propagators into the full fundamental solution.

Crossing the singular zone means switching micro-energies.  The exact
conversion U_sing = eps diag(1, i) U_hyp carries a factor i on the second
component (d/dtau = i eps D_t); the scalar eps cancels in the sandwich and
diag(1, i) commutes with the limiting transfer diag(1, H), so every limit
statement survives the conversion unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ZoneError
from .mat2 import I2, M, M_INV, diag2
from .oracle import IntegratorConfig, direct_propagator, integrate_matrix_ode
from .hyperbolic import e_hyp, e_hyp_limit
from .singular import e_sing, transfer_limit
from .zones import ZoneLabel, hyp_boundary_times

_CONV = diag2(1.0, 1.0j)          # chart conversion modulo the scalar eps
_CONV_INV = diag2(1.0, -1.0j)


def micro_energy_convert(direction: str, eps: float):
    """Matrix mapping (|xi| u, D_t u) to (Lambda u, d/dtau u) or back."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    if direction == "hyp_to_sing":
        return eps * _CONV
    if direction == "sing_to_hyp":
        return (1.0 / eps) * _CONV_INV
    raise ValueError(f"unknown direction {direction!r}")


@dataclass(frozen=True)
class FullPropagator:
    matrix: np.ndarray
    t1: float
    t2: float
    xi_abs: float
    eps: float
    path: tuple  # ordered (ZoneLabel, (a, b)) segments tiling [t1, t2]


def full_propagator(ev, t1: float, t2: float, xi_abs: float, eps: float,
                    N=None, tol: float = 1e-9,
                    cfg: IntegratorConfig | None = None) -> FullPropagator:
    """Propagator of the original system over [t1, t2], composed zone by zone.

    Bounded frequencies (|xi| <= N) integrate directly; large frequencies whose
    trajectory never meets the singular zone use a single hyperbolic factor;
    otherwise the hyperbolic pieces sandwich the singular transfer, with the
    hyperbolic segments clamped away when the query interval starts or ends
    inside the singular zone.
    """
    if not 0.0 <= t1 < t2 <= 2.0:
        raise ValueError("need 0 <= t1 < t2 <= 2")
    if N is None:
        N = ev.zone_constant()
    n = float(N)

    if xi_abs <= n:
        mat = direct_propagator(ev, t1, t2, xi_abs, eps, cfg)
        return FullPropagator(mat, t1, t2, xi_abs, eps,
                              ((ZoneLabel.BD, (t1, t2)),))

    bounds = hyp_boundary_times(ev.moll, xi_abs, eps, N)
    if bounds is not None:
        t_a, t_b = bounds
        t_a, t_b = max(t_a, t1), min(t_b, t2)
    if bounds is None or t_a >= t_b:
        hp = e_hyp(ev, t2, t1, xi_abs, eps, N, tol)
        return FullPropagator(hp.matrix, t1, t2, xi_abs, eps,
                              ((ZoneLabel.HYP, (t1, t2)),))

    path = []
    mat = I2.copy()
    if t_a > t1:
        mat = e_hyp(ev, t_a, t1, xi_abs, eps, N, tol).matrix
        path.append((ZoneLabel.HYP, (t1, t_a)))
    tau_a, tau_b = (t_a - 1.0) / eps, (t_b - 1.0) / eps
    sing = e_sing(ev, tau_b, tau_a, eps * xi_abs, eps, tol).matrix
    # the scalar eps in T(eps) cancels in T^-1 E_sing T; conjugate by diag(1, i)
    mat = (_CONV_INV @ sing @ _CONV) @ mat
    path.append((ZoneLabel.SING, (t_a, t_b)))
    if t2 > t_b:
        mat = e_hyp(ev, t2, t_b, xi_abs, eps, N, tol).matrix @ mat
        path.append((ZoneLabel.HYP, (t_b, t2)))
    return FullPropagator(mat, t1, t2, xi_abs, eps, tuple(path))


def limit_propagator(coeff, t1: float, t2: float, xi_abs: float,
                     tol: float = 1e-11):
    """The eps -> 0 sandwich E_hyp(t2, 1+0) diag(1, H) E_hyp(1-0, t1)."""
    if not t1 < 1.0 < t2:
        raise ZoneError("limit sandwich needs t1 < 1 < t2; use e_hyp_limit otherwise")
    left = e_hyp_limit(coeff, 1.0, t1, xi_abs, side="left", tol=tol)
    right = e_hyp_limit(coeff, t2, 1.0, xi_abs, side="right", tol=tol)
    return right @ transfer_limit(coeff) @ left


def reflection_matrix(H: float):
    """Partial-reflection matrix (1/2) [[H+1, H-1], [H-1, H+1]] in diagonal variables."""
    if H <= 0.0:
        raise ValueError("H must be positive")
    return 0.5 * np.array([[H + 1.0, H - 1.0], [H - 1.0, H + 1.0]], dtype=complex)


def delta_model_transfer(eps: float, xi_abs: float, moll=None,
                         cfg: IntegratorConfig | None = None):
    """Transfer matrix of the delta-dissipation model, in diagonalized variables.

    Integrates u_tt + |xi|^2 u + psi_eps(t-1) u_t = 0 across the mollifier
    window and conjugates with M; as eps, eps|xi| -> 0 this approaches
    (1/(2e)) [[1+e, 1-e], [1-e, 1+e]] = reflection_matrix(1/e).
    """
    if moll is None:
        from .coefficients import MollifierPair

        moll = MollifierPair()
    if eps * xi_abs > 0.1:
        raise ValueError("delta model regime needs eps*|xi| <= 0.1")
    xi = float(xi_abs)

    def gen(t):
        return np.array(
            [[0.0, 1j * xi], [1j * xi, -float(moll.psi_eps(t - 1.0, eps))]],
            dtype=complex,
        )

    lo, hi = 1.0 - eps * moll.K, 1.0 + eps * moll.K
    cfg = cfg or IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13)
    y, _ = integrate_matrix_ode(gen, lo, hi, cfg, h0=eps / 20.0)
    return M_INV @ y @ M
