"""Chebyshev collocation utilities.

Differentiation matrices on Chebyshev-Lobatto points, plus the folded
("half diameter") variant used by the polar Poisson solver, where the radial
coordinate runs over (0, 1] and parity in r couples the two halves of the
diameter.
"""

from __future__ import annotations

import numpy as np


def lobatto_points(n: int) -> np.ndarray:
    """Chebyshev-Lobatto points on [-1, 1], ordered from +1 down to -1."""
    if n < 2:
        raise ValueError("need at least 2 points")
    return np.cos(np.pi * np.arange(n) / (n - 1))


def diff_matrix(x: np.ndarray) -> np.ndarray:
    """Spectral differentiation matrix for the Lobatto grid ``x``.

    Standard barycentric construction with the negative-sum trick for the
    diagonal, which keeps the row sums exactly zero.
    """
    n = len(x)
    c = np.ones(n)
    c[0] = 2.0
    c[-1] = 2.0
    c *= (-1.0) ** np.arange(n)
    X = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (X + np.eye(n))
    D -= np.diag(D.sum(axis=1))
    return D


def unit_interval_grid(n: int):
    """Lobatto grid mapped to [0, 1] (descending, r[0]=1) with its
    first and second differentiation matrices."""
    x = lobatto_points(n)
    r = (x + 1.0) / 2.0
    D = 2.0 * diff_matrix(x)
    return r, D, D @ D


class HalfDiameterGrid:
    """Radial discretization of the disk avoiding the coordinate singularity.

    Lobatto points are placed on the full diameter [-1, 1] with an even
    number of nodes (so r = 0 is not a node) and only the positive half is
    kept.  Radial derivatives of a Fourier mode of parity (-1)^n are
    evaluated by folding the mirrored columns back onto the kept half.
    """

    def __init__(self, n_half: int):
        if n_half < 4:
            raise ValueError("need at least 4 radial nodes")
        n_total = 2 * n_half  # even -> no node at r = 0
        x = lobatto_points(n_total)
        D = diff_matrix(x)
        D2 = D @ D
        self.n_half = n_half
        self.r = x[:n_half]  # descending, r[0] = 1
        mirror = n_total - 1 - np.arange(n_half)
        self._D_pos = D[:n_half, :n_half]
        self._D_neg = D[:n_half, mirror]
        self._D2_pos = D2[:n_half, :n_half]
        self._D2_neg = D2[:n_half, mirror]

    def d1(self, parity: int) -> np.ndarray:
        """First-derivative matrix acting on samples at the positive nodes,
        for angular modes with u(-r) = parity-sign * u(r)."""
        sgn = 1.0 if parity % 2 == 0 else -1.0
        return self._D_pos + sgn * self._D_neg

    def d2(self, parity: int) -> np.ndarray:
        sgn = 1.0 if parity % 2 == 0 else -1.0
        return self._D2_pos + sgn * self._D2_neg

    def laplacian_mode(self, n: int) -> np.ndarray:
        """Radial part of the Laplacian for angular wavenumber n:
        d_rr + (1/r) d_r - n^2/r^2, folded for the parity of n."""
        L = self.d2(n) + np.diag(1.0 / self.r) @ self.d1(n)
        L -= np.diag(n * n / self.r**2)
        return L
