import numpy as np
import pytest

from tidaldisk.chebyshev import (HalfDiameterGrid, diff_matrix,
                                 lobatto_points, unit_interval_grid)


def test_lobatto_points_endpoints():
    x = lobatto_points(8)
    assert x[0] == 1.0 and x[-1] == -1.0
    assert np.all(np.diff(x) < 0)


def test_diff_matrix_exact_on_polynomials():
    x = lobatto_points(12)
    D = diff_matrix(x)
    for k in range(1, 10):
        assert np.max(np.abs(D @ x**k - k * x ** (k - 1))) < 1e-10
    # rows of a differentiation matrix annihilate constants
    assert np.max(np.abs(D @ np.ones_like(x))) < 1e-12


def test_unit_interval_grid():
    r, D, D2 = unit_interval_grid(16)
    assert r[0] == 1.0 and abs(r[-1]) < 1e-15
    f = r**3 - 2 * r
    assert np.max(np.abs(D @ f - (3 * r**2 - 2))) < 1e-10
    assert np.max(np.abs(D2 @ f - 6 * r)) < 1e-9


def test_half_diameter_laplacian_harmonics():
    # r^n cos(n phi) is harmonic: the mode-n radial operator annihilates r^n
    grid = HalfDiameterGrid(24)
    for n in (0, 1, 2, 5, 10):
        L = grid.laplacian_mode(n)
        res = L @ grid.r**n
        assert np.max(np.abs(res[1:])) < 1e-6 * max(1.0, np.max(np.abs(L)))


def test_half_diameter_poisson_mode0():
    # solve u'' + u'/r = -4 with u(1) = 0: u = 1 - r^2
    grid = HalfDiameterGrid(24)
    A = grid.laplacian_mode(0).copy()
    rhs = -4.0 * np.ones(len(grid.r))
    A[0, :] = 0.0
    A[0, 0] = 1.0
    rhs[0] = 0.0
    u = np.linalg.solve(A, rhs)
    assert np.max(np.abs(u - (1.0 - grid.r**2))) < 1e-10
    d1 = grid.d1(0)
    assert abs((d1 @ u)[0] + 2.0) < 1e-9
