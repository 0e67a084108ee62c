import numpy as np

from singwave.mat2 import det2, inv2, mat2, mnorm
from singwave.quadrature import PanelGrid, split_panels


def test_split_panels_respects_max_width():
    pts = split_panels([0.0, 0.3, 1.0], 0.2)
    assert pts[0] == 0.0 and pts[-1] == 1.0
    assert np.max(np.diff(pts)) <= 0.2 + 1e-15
    assert 0.3 in pts


def test_integrate_polynomial_exact():
    g = PanelGrid(split_panels([-1.0, 2.0], 0.5), 8)
    vals = g.nodes**7 - 3.0 * g.nodes**2
    exact = (2.0**8 - 1.0) / 8.0 - (2.0**3 + 1.0)
    assert abs(g.integrate(vals) - exact) < 1e-13


def test_cumulative_matches_antiderivative():
    g = PanelGrid(split_panels([0.0, 3.0], 0.25), 10)
    cum = g.cumulative(np.exp(-g.nodes))
    exact = 1.0 - np.exp(-g.nodes)
    assert np.max(np.abs(cum - exact)) < 1e-13


def test_cumulative_matrix_values():
    g = PanelGrid(split_panels([0.0, 2.0], 0.5), 6)
    vals = np.zeros((len(g.nodes), 2, 2), dtype=complex)
    vals[:, 0, 1] = g.nodes**2
    cum = g.cumulative(vals)
    assert np.max(np.abs(cum[:, 0, 1] - g.nodes**3 / 3.0)) < 1e-13
    assert np.max(np.abs(cum[:, 1, 0])) == 0.0


def test_mat2_helpers():
    a = mat2(1 + 2j, 0.5, -1j, 3.0)
    assert abs(det2(a) - ((1 + 2j) * 3.0 - 0.5 * (-1j))) < 1e-15
    assert mnorm(a @ inv2(a) - np.eye(2)) < 1e-15
