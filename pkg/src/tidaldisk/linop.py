"""Linearized operator at the base point, resonance scan and inversion.

At the unperturbed state the linearization of the full system acts
diagonally on boundary Fourier modes through the multipliers omega_n,
with one scalar equation for the particle offset b and one for the
Bernoulli constant mu.  Inversion follows the explicit recipe:

    g0_hat = M / (2 pi),
    mu     = 2 omega_0 g0_hat - S_0,
    gn_hat = S_n / omega_n        (n >= 1),
    b      = (Z + W[g]) / particle_diag,

where 2 pi is the derivative of the area pi (1 + g0)^2 + ... in the g0
direction at the disk,

where W[g] is the shape derivative of the attraction force on the
particle, evaluated by smooth disk quadrature.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss

from .coeffs import ModeTable, build_mode_table
from .errors import ResonanceError
from .potential import BaseState, u0_d2
from .spectral import (BoundarySpectrum, ShapeCoeffs, analyze, boundary_grid,
                       eval_h_at)

_RESONANCE_TOL = 1e-8


@dataclass
class LinearizedOperator:
    """Frozen derivative of the full map at the base state."""

    base: BaseState
    table: ModeTable
    particle_diag: float  # omega0^2 - U0''(a0), the radial Hessian entry

    @property
    def N(self) -> int:
        return self.table.N


def make_operator(base: BaseState, table: Optional[ModeTable] = None,
                  N: int = 256, workers: int = 1) -> LinearizedOperator:
    if table is None:
        table = build_mode_table(base, N=N, workers=workers)
    # The b-equation divides by the second radial derivative of the
    # effective particle potential, omega0^2 - U0''(a0).  U0'' < 0 outside
    # the body, so this is positive.
    diag = base.omega0**2 - u0_d2(base.case, base.a0)
    if diag <= 0:
        raise ValueError("particle diagonal must be positive")
    return LinearizedOperator(base=base, table=table, particle_diag=diag)


# --------------------------------------------------------------------------
# resonance scan
# --------------------------------------------------------------------------

def nonresonance_scan(op: LinearizedOperator, margin_factor: float = 1.0,
                      tol: float = _RESONANCE_TOL) -> dict:
    """Report min_n |omega_n| for 1 <= n <= N and a tail certificate.

    The certificate records the first index n_T from which the leading term
    -(1/2) phi0'(1)^2 (n+1) dominates all the remaining contributions by
    the given factor; past that point omega_n cannot vanish, and the
    dominance only improves with n.
    """
    t = op.table
    om = t.omega[1:]
    n_arr = np.arange(1, t.N + 1)
    min_idx = int(np.argmin(np.abs(om)))
    resonances = [int(n) for n in n_arr[np.abs(om) < tol]]

    dp = op.base.dphi0_at_1
    lead = 0.5 * dp * dp * (n_arr + 1)
    rest = (0.5 * op.base.omega0**2
            + np.abs(dp * t.a_deriv) * (n_arr + 1)
            + np.abs(t.c[1:]))
    dominated = lead > margin_factor * rest
    tail_from = None
    for i in range(t.N):
        if np.all(dominated[i:]):
            tail_from = int(n_arr[i])
            break

    return {
        "schema_version": 1,
        "N": t.N,
        "min_abs_omega": float(np.min(np.abs(om))),
        "argmin_n": int(n_arr[min_idx]),
        "tail_certified_from": tail_from,
        "resonances": resonances,
    }


def scan_to_json(report: dict, **kw) -> str:
    return json.dumps(report, **kw)


# --------------------------------------------------------------------------
# shape derivative of the particle force
# --------------------------------------------------------------------------

_WQ_RADIAL = 64
_WQ_ANGULAR = 128


def w_shape_derivative(op: LinearizedOperator, g: ShapeCoeffs) -> float:
    """W[g]: derivative of d/dx1 of the attraction potential at the particle
    with respect to the shape, at the disk, by tensor quadrature.

    The particle sits at distance a0 >= 1.5 from the body, so the integrand
    is smooth and a plain Gauss-Legendre (radial) x uniform (angular) rule
    converges spectrally.
    """
    a0 = op.base.a0
    xg, wg = leggauss(_WQ_RADIAL)
    r = 0.5 * (xg + 1.0)
    wr = 0.5 * wg
    phi = boundary_grid(_WQ_ANGULAR)
    wphi = 2.0 * np.pi / _WQ_ANGULAR

    y = r[:, None] * np.exp(1j * phi[None, :])
    gv, dgv = eval_h_at(g, y)
    ay = a0 - y
    q = np.abs(ay) ** 2
    re_ay = ay.real

    # The second contribution comes from varying |a - f|^(-p): the squared
    # distance decreases by 2 Re[(a-y) conj(g)] eps, so the term enters with
    # a positive sign (checked against finite differences and the closed
    # dilation/translation responses).
    if op.base.case.is_log:
        f = (-gv.real + 2.0 * dgv.real * re_ay) / q \
            + 2.0 * ((ay * np.conj(gv)).real * re_ay) / q**2
    else:
        nu = op.base.case.nu
        f = nu * (-gv.real + 2.0 * dgv.real * re_ay) * q ** (-(nu + 2.0) / 2.0) \
            + nu * (nu + 2.0) * (ay * np.conj(gv)).real * re_ay \
            * q ** (-(nu + 4.0) / 2.0)

    return float(np.sum(f * r[:, None] * wr[:, None]) * wphi)


# --------------------------------------------------------------------------
# inversion and forward application
# --------------------------------------------------------------------------

def _check_resonances(op: LinearizedOperator, tol: float = _RESONANCE_TOL):
    om = op.table.omega[1:]
    bad = np.where(np.abs(om) < tol)[0]
    if len(bad):
        n = int(bad[0]) + 1
        raise ResonanceError(n, float(om[bad[0]]))


def solve_linearized(op: LinearizedOperator, S: BoundarySpectrum,
                     Z: float, M: float):
    """Invert the frozen linearization for right-hand side (S, Z, M).

    Returns (g, b, mu).  S beyond the table truncation is rejected.
    """
    if S.N > op.N:
        raise ValueError("spectrum truncation exceeds the operator table")
    _check_resonances(op)
    t = op.table

    g0 = M / (2.0 * np.pi)
    gn = np.zeros(op.N, dtype=complex)
    upto = S.N
    gn[:upto] = S.coeffs[1:upto + 1] / t.omega[1:upto + 1]
    g = ShapeCoeffs(g0, gn)
    mu = 2.0 * t.omega[0] * g0 - float(S.coeffs[0].real)
    b = (Z + w_shape_derivative(op, g)) / op.particle_diag
    return g, float(b), float(mu)


def apply_forward(op: LinearizedOperator, g: ShapeCoeffs, b: float, mu: float):
    """Forward action (g, b, mu) -> (S, Z, M) of the frozen linearization."""
    if g.N > op.N:
        raise ValueError("shape truncation exceeds the operator table")
    t = op.table
    coeffs = np.zeros(g.N + 1, dtype=complex)
    coeffs[0] = 2.0 * t.omega[0] * g.g0 - mu
    coeffs[1:] = t.omega[1:g.N + 1] * g.gn
    S = BoundarySpectrum(coeffs)
    Z = op.particle_diag * b - w_shape_derivative(op, g)
    M = 2.0 * np.pi * g.g0
    return S, float(Z), float(M)


# --------------------------------------------------------------------------
# first-order response in the mass parameter
# --------------------------------------------------------------------------

def particle_potential_on_boundary(op: LinearizedOperator, M_grid: int) -> np.ndarray:
    """Samples of the particle's potential on the unit circle."""
    a0 = op.base.a0
    z = np.exp(1j * boundary_grid(M_grid))
    d = np.abs(z - a0)
    if op.base.case.is_log:
        return np.log(d)
    return -d ** (-op.base.case.nu)


def particle_source_spectrum(op: LinearizedOperator) -> BoundarySpectrum:
    M_grid = max(4 * op.N + 4, 256)
    return analyze(particle_potential_on_boundary(op, M_grid), N=op.N)


def first_order_response(op: LinearizedOperator, m: float):
    """Leading-order (h, a-offset, lambda-offset) at small mass m.

    The mass enters the boundary equation through + m * (particle potential
    on the deformed boundary); the first-order correction solves the frozen
    linearization against minus that source.
    """
    S_m = particle_source_spectrum(op)
    g, b, mu = solve_linearized(op, S_m, 0.0, 0.0)
    h1 = g.scaled(-m)
    return h1, -m * b, -m * mu
