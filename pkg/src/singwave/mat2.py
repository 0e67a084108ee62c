"""Closed-form helpers for the 2x2 complex matrices carried around everywhere.

Matrices are plain (2, 2) complex ndarrays; these helpers avoid generic LAPACK
paths where a closed form is available and pin down the norm convention
(spectral norm) used by all estimates in the package.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)

# Rotation generator: the antidiagonal coupling of the singular-zone system.
J = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)

# Unitary diagonalizer of [[0, 1], [1, 0]] and its inverse.
M = np.array([[1.0, -1.0], [1.0, 1.0]], dtype=complex) / np.sqrt(2.0)
M_INV = np.array([[1.0, 1.0], [-1.0, 1.0]], dtype=complex) / np.sqrt(2.0)


def mat2(a11, a12, a21, a22):
    """Build a 2x2 complex matrix from its entries."""
    return np.array([[a11, a12], [a21, a22]], dtype=complex)


def diag2(a, d):
    return np.array([[a, 0.0], [0.0, d]], dtype=complex)


def det2(a):
    return a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]


def inv2(a):
    """Closed-form inverse; raises ValueError on a singular matrix."""
    d = det2(a)
    if d == 0:
        raise ValueError("singular 2x2 matrix")
    return np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=complex) / d


def mnorm(a):
    """Spectral (Euclidean operator) norm."""
    return float(np.linalg.norm(a, 2))
