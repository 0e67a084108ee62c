"""Extended-phase-space zones: classification, boundaries, and the zone constant.

The hyperbolic zone is |xi| >= N (Phi_eps(t-1) + 1); the same curve reads
Lambda = N (Phi(tau) + eps) in singular variables tau = (t-1)/eps,
Lambda = eps |xi|.  With the triangular shape function every boundary is in
closed form.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ZoneError


class ZoneLabel(enum.Enum):
    HYP = "hyp"
    SING = "sing"
    BD = "bd"


@dataclass(frozen=True)
class ZoneConstant:
    """Zone constant N with the certified bound constants it came from.

    c1, c2 satisfy |d_eps(t)| <= c1 Phi_eps(t-1) + c2, so N = max(1, 2c1, 2c2)
    keeps the diagonalizer correction below 1/8 throughout the hyperbolic zone.
    """

    N: float
    c1: float
    c2: float

    def __float__(self):
        return self.N


@dataclass(frozen=True)
class ZonePoint:
    t: float
    xi_abs: float
    eps: float


@dataclass(frozen=True)
class SingularPoint:
    tau: float
    lam: float
    eps: float


def to_singular(p: ZonePoint) -> SingularPoint:
    return SingularPoint(tau=(p.t - 1.0) / p.eps, lam=p.eps * p.xi_abs, eps=p.eps)


def to_zone(sp: SingularPoint) -> ZonePoint:
    return ZonePoint(t=1.0 + sp.eps * sp.tau, xi_abs=sp.lam / sp.eps, eps=sp.eps)


def _n_value(N) -> float:
    return float(N.N) if isinstance(N, ZoneConstant) else float(N)


def choose_zone_constant(ev) -> ZoneConstant:
    """Certify |d_eps| <= c1 Phi_eps + c2 and return N = max(1, 2c1, 2c2).

    c1 = |h| c_psiPhi / b0 bounds the jump contribution (b_eps' picks up
    h psi_eps), c2 = sup|b'| / b0 the smooth-branch contribution.
    """
    coeff, moll = ev.coeff, ev.moll
    c1 = abs(coeff.h) * moll.c_psi_phi / coeff.b0
    c2 = coeff.sup_abs_derivative(1) / coeff.b0
    return ZoneConstant(N=max(1.0, 2.0 * c1, 2.0 * c2), c1=c1, c2=c2)


def classify(moll, p: ZonePoint, N) -> ZoneLabel:
    """Zone of a point; ties on the hyp/sing boundary go to the closed hyperbolic zone."""
    n = _n_value(N)
    if p.xi_abs <= n:
        return ZoneLabel.BD
    if p.xi_abs >= n * (moll.phi_eps(p.t - 1.0, p.eps) + 1.0):
        return ZoneLabel.HYP
    return ZoneLabel.SING


def hyp_boundary_times(moll, xi_abs: float, eps: float, N):
    """Zone-crossing times t with |xi| = N (Phi_eps(t-1) + 1), or None.

    None means the trajectory never leaves the hyperbolic zone (|xi| above the
    apex N (Phi(0)/eps + 1)).  Raises ZoneError for |xi| <= N (bounded
    frequencies have no hyperbolic boundary).
    """
    n = _n_value(N)
    if xi_abs <= n:
        raise ZoneError(f"|xi|={xi_abs} <= N={n}: bounded-frequency regime")
    tau_abs = moll.K_prime - eps * (xi_abs / n - 1.0)
    if tau_abs < 0.0:
        return None
    return 1.0 - eps * tau_abs, 1.0 + eps * tau_abs


def sing_boundary_taus(moll, lam: float, eps: float, N):
    """Boundary taus with Lambda = N (Phi(tau) + eps), or None above the apex."""
    n = _n_value(N)
    if lam <= n * eps:
        raise ZoneError(f"Lambda={lam} <= N*eps={n * eps}: bounded-frequency regime")
    phi_val = lam / n - eps
    if phi_val > moll.K_prime:
        return None
    tau_abs = moll.K_prime - phi_val
    return -tau_abs, tau_abs


def path_in_hyp(moll, t_a: float, t_b: float, xi_abs: float, eps: float, N) -> bool:
    """Whether the whole segment [t_a, t_b] x {(xi, eps)} lies in the closed Z_hyp.

    A relative slack of 1e-10 keeps segments ending exactly on the computed
    zone boundary inside the closed zone despite rounding.
    """
    n = _n_value(N)
    if xi_abs < n * (1.0 - 1e-10):
        return False
    lo, hi = min(t_a, t_b), max(t_a, t_b)
    # Phi_eps(t-1) peaks at the time closest to 1 on the segment
    t_star = min(max(lo, 1.0), hi)
    return xi_abs >= n * (moll.phi_eps(t_star - 1.0, eps) + 1.0) * (1.0 - 1e-10)


def boundary_polyline(moll, eps: float, N, n_points: int = 257) -> np.ndarray:
    """The hyp/sing boundary sampled as columns (t, xi, tau, lambda).

    tau runs over [-K', K']; the four columns describe the same curve in the
    two coordinate charts.
    """
    n = _n_value(N)
    taus = np.linspace(-moll.K_prime, moll.K_prime, n_points)
    xi = n * (moll.phi(taus) / eps + 1.0)
    t = 1.0 + eps * taus
    lam = eps * xi
    return np.column_stack([t, xi, taus, lam])
