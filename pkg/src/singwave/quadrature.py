"""Composite Gauss-Legendre quadrature with spectral cumulative integrals.

Integrands in this package are smooth on known subintervals (they kink only at
the jump preimage or at mollifier support edges), so fixed-order Gauss rules
per panel recover spectral accuracy.  The cumulative machinery returns
antiderivative values at all panel nodes, which is what iterated-integral
recursions (Peano-Baker style) need.
"""

from functools import lru_cache

import numpy as np
from numpy.polynomial import polynomial as npoly


@lru_cache(maxsize=None)
def gl_rule(n: int):
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@lru_cache(maxsize=None)
def _cumulative_matrix(n: int) -> np.ndarray:
    """S[j, i] = integral of the i-th Lagrange basis over [-1, x_j].

    Built once per node count; numerically fine for the small n (<= 16) used
    here because Gauss nodes are well conditioned for Lagrange interpolation.
    """
    x, _ = gl_rule(n)
    S = np.empty((n, n))
    for i in range(n):
        li = npoly.polyfromroots(np.delete(x, i))
        li = li / npoly.polyval(x[i], li)
        Li = npoly.polyint(li)
        S[:, i] = npoly.polyval(x, Li) - npoly.polyval(-1.0, Li)
    return S


def split_panels(breakpoints, max_width):
    """Refine a sorted breakpoint list so no panel exceeds max_width."""
    pts = [float(breakpoints[0])]
    for b in breakpoints[1:]:
        a = pts[-1]
        b = float(b)
        if b <= a:
            continue
        m = max(1, int(np.ceil((b - a) / max_width)))
        pts.extend(np.linspace(a, b, m + 1)[1:].tolist())
    return np.asarray(pts)


class PanelGrid:
    """Gauss-Legendre nodes on consecutive panels spanning [a, b], a < b."""

    def __init__(self, breakpoints, nodes_per_panel: int = 8):
        edges = np.asarray(breakpoints, dtype=float)
        if edges.ndim != 1 or len(edges) < 2 or np.any(np.diff(edges) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        self.edges = edges
        self.p = int(nodes_per_panel)
        x, w = gl_rule(self.p)
        half = 0.5 * np.diff(edges)              # (P,)
        mid = 0.5 * (edges[:-1] + edges[1:])
        self.half_widths = half
        self.nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        self.weights = (half[:, None] * w[None, :]).ravel()

    @property
    def n_panels(self):
        return len(self.half_widths)

    def integrate(self, values):
        """Integral over the whole span; values sampled at self.nodes."""
        v = np.asarray(values)
        return np.tensordot(self.weights, v, axes=(0, 0))

    def cumulative(self, values):
        """Antiderivative (from the left edge) evaluated at every node.

        values has shape (N, ...) with N = len(self.nodes); the result has the
        same shape.  Within each panel the integrand is replaced by its
        interpolating polynomial on the Gauss nodes, so the partial integrals
        keep the full order of the rule.
        """
        v = np.asarray(values)
        P, p = self.n_panels, self.p
        vp = v.reshape((P, p) + v.shape[1:])
        S = _cumulative_matrix(p)
        x, w = gl_rule(p)
        # partial integrals inside each panel, at each node
        partial = np.einsum("ji,pi...->pj...", S, vp) * self.half_widths.reshape(
            (P,) + (1,) * (vp.ndim - 1)
        )
        totals = np.einsum("i,pi...->p...", w, vp) * self.half_widths.reshape(
            (P,) + (1,) * (vp.ndim - 2)
        )
        before = np.cumsum(totals, axis=0)
        before = np.concatenate([np.zeros_like(before[:1]), before[:-1]], axis=0)
        out = partial + before[:, None]
        return out.reshape(v.shape)
