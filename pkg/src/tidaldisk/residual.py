"""Full nonlinear residual of the reduced free-boundary system and the
frozen-derivative quasi-Newton continuation in the mass parameter.

State is the triple (h, a, lambda): boundary shape coefficients, particle
distance, Bernoulli constant.  The residual has three components:

1. boundary (Bernoulli) equation on the unit circle,
   (1/2)|grad phi_h|^2 / |f'|^2 - (Omega0^2/2)|f|^2 + U_h o f + m U_X o f - lambda,
2. particle force balance, Omega0^2 a - d/dx1 U_h(a, 0),
3. volume constraint, |f(D)| - pi.

The stream function phi_h on the disk solves Delta phi_h = |f'|^2 G(phi_h)
with zero boundary values; it is computed by a damped Picard iteration with
per-Fourier-mode Chebyshev solves on a half-diameter grid (even number of
nodes on the full diameter, so the coordinate singularity at r = 0 is never
touched).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.linalg import lu_factor, lu_solve

from .chebyshev import HalfDiameterGrid
from .errors import DivergenceError, TidaldiskError
from .kernel import VorticityProfile
from .linop import LinearizedOperator, first_order_response, solve_linearized
from .potential import BaseState, graded_panels, panel_rule
from .spectral import (BoundarySpectrum, ShapeCoeffs, analyze, area,
                       boundary_grid, eval_boundary, eval_h_at,
                       injectivity_margin)

DEFAULT_RADIAL = 64    # half-diameter nodes; 2x this on the full diameter
DEFAULT_ANGULAR = 256


# --------------------------------------------------------------------------
# stream function on the disk
# --------------------------------------------------------------------------

@dataclass
class DiskField:
    """Real scalar field on the polar grid (radial half-nodes x angles)."""

    r: np.ndarray              # descending, r[0] = 1
    phi: np.ndarray            # uniform angular grid
    values: np.ndarray         # shape (len(r), len(phi))
    grid: HalfDiameterGrid = field(repr=False, default=None)

    def boundary_trace(self) -> np.ndarray:
        return self.values[0, :].copy()

    def boundary_normal_deriv(self) -> np.ndarray:
        """Radial derivative at r = 1, mode by mode with the correct parity
        fold of the half-diameter discretization."""
        vh = np.fft.fft(self.values, axis=1)
        M = self.values.shape[1]
        out = np.empty_like(vh)
        row_even = self.grid.d1(0)[0, :]
        row_odd = self.grid.d1(1)[0, :]
        for k in range(M):
            n = min(k, M - k)
            row = row_even if n % 2 == 0 else row_odd
            out[0, k] = row @ vh[:, k]
        return np.real(np.fft.ifft(out[0, :]))


def conformal_factor_grid(h: ShapeCoeffs, r: np.ndarray, phi: np.ndarray):
    """|f'|^2 on the polar grid."""
    z = r[:, None] * np.exp(1j * phi[None, :])
    _, dh = eval_h_at(h, z)
    return np.abs(1.0 + dh) ** 2


def solve_phi_h(h: ShapeCoeffs, profile: VorticityProfile,
                n_radial: int = DEFAULT_RADIAL,
                n_angular: int = DEFAULT_ANGULAR,
                tol: float = 1e-12, max_iter: int = 200) -> DiskField:
    """Damped Picard solution of Delta u = |f'|^2 G(u), u = 0 on the circle.

    Each step solves (Delta - L) u_next = |f'|^2 G(u) - L u with a constant
    damping L >= sup(|f'|^2 G'), which makes the iteration a contraction for
    non-decreasing G.
    """
    if injectivity_margin(h) <= 0:
        raise TidaldiskError("shape is not certified injective; refusing "
                             "to solve on a possibly folded domain")
    grid = HalfDiameterGrid(n_radial)
    r = grid.r
    phi = boundary_grid(n_angular)
    w = conformal_factor_grid(h, r, phi)

    u = np.zeros((n_radial, n_angular))
    lam = 0.0
    factors = None

    def build_factors(lam_val):
        fac = {}
        for n in range(n_angular // 2 + 1):
            A = grid.laplacian_mode(n) - lam_val * np.eye(n_radial)
            A[0, :] = 0.0
            A[0, 0] = 1.0  # Dirichlet at r = 1
            fac[n] = lu_factor(A)
        return fac

    for it in range(max_iter):
        g1max = float(np.max(profile.d1(u)))
        lam_needed = float(np.max(w)) * max(g1max, 0.0)
        if factors is None or lam_needed > lam:
            lam = 1.5 * lam_needed if lam_needed > 0 else 0.0
            factors = build_factors(lam)

        rhs = w * np.asarray(profile.eval(u), dtype=float) - lam * u
        rhs_hat = np.fft.fft(rhs, axis=1)
        rhs_hat[0, :] = 0.0  # boundary row
        u_hat = np.empty_like(rhs_hat)
        for k in range(n_angular):
            n = min(k, n_angular - k)
            u_hat[:, k] = lu_solve(factors[n], rhs_hat[:, k])
        u_new = np.real(np.fft.ifft(u_hat, axis=1))
        delta = float(np.max(np.abs(u_new - u)))
        u = u_new
        if delta < tol:
            break
    else:
        raise DivergenceError(
            f"stream-function iteration did not converge (last step {delta:.2e})")

    return DiskField(r=r, phi=phi, values=u, grid=grid)


def field_equation_residual(fieldv: DiskField, h: ShapeCoeffs,
                            profile: VorticityProfile) -> float:
    """Sup norm of Delta u - |f'|^2 G(u) at the interior collocation nodes."""
    grid = fieldv.grid
    w = conformal_factor_grid(h, fieldv.r, fieldv.phi)
    vh = np.fft.fft(fieldv.values, axis=1)
    M = len(fieldv.phi)
    lap = np.empty_like(vh)
    for k in range(M):
        n = min(k, M - k)
        lap[:, k] = grid.laplacian_mode(n) @ vh[:, k]
    lap_real = np.real(np.fft.ifft(lap, axis=1))
    res = lap_real - w * np.asarray(profile.eval(fieldv.values), dtype=float)
    return float(np.max(np.abs(res[1:, :])))


# --------------------------------------------------------------------------
# boundary value of the self-attraction
# --------------------------------------------------------------------------

def _kress_log_weights(M: int) -> np.ndarray:
    """Circulant quadrature weights for int F(t) ln(4 sin^2((t - t_i)/2)) dt
    on the uniform M-grid; exact for trigonometric polynomials of degree
    below M/2."""
    j = np.arange(M)
    t = 2.0 * np.pi * j / M
    m = np.arange(1, M // 2)
    w = np.cos(np.outer(t, m)) @ (1.0 / m) + np.cos(M * t / 2.0) / M
    return -(4.0 * np.pi / M) * w


def _angular_offsets(levels: int = 40, n_gauss: int = 10):
    """Symmetric graded offsets on (-pi, pi) refined toward 0, for the
    power-law boundary kernel."""
    half = graded_panels(0.0, np.pi, levels, toward_a=True)
    nodes, wts = panel_rule(half, n_gauss)
    offs = np.concatenate([-nodes[::-1], nodes])
    w = np.concatenate([wts[::-1], wts])
    return offs, w


_POWER_OFFSETS = _angular_offsets()


def boundary_potential(h: ShapeCoeffs, case, M: int = 0) -> np.ndarray:
    """Samples of (U_h o f)(e^{i phi_j}) on the uniform M-grid.

    The area integral is reduced to a boundary integral: with w chosen so
    that div[(y - x) w(|y - x|)] equals the interaction kernel,

        U_h(x) = int_bdry w(|y - x|) (y - x) . n dS(y),

    where w = (1/2) ln rho - 1/4 for the log kernel and
    w = -rho^(-nu) / (2 - nu) for the power kernel.  The dot product
    (y - x) . n dS becomes Re[(y(t) - x) i conj(y'(t))] dt on the curve
    y(t) = f(e^{it}), which vanishes quadratically at t -> angle of x, so
    the integrand is integrable with the singular point on the curve.
    """
    if M <= 0:
        M = max(256, 4 * h.N + 8)
    if M < 2 * h.N + 2:
        raise ValueError("boundary grid too coarse for the shape")
    if injectivity_margin(h) <= 0:
        raise TidaldiskError("shape is not certified injective")

    f, fp = eval_boundary(h, M)
    z = np.exp(1j * boundary_grid(M))
    yp = 1j * z * fp  # d/dt f(e^{it})

    if case.is_log:
        # smooth part: P(t) * [ (1/2) ln(rho / (2|sin((t-s)/2)|)) - 1/4 ]
        # by the trapezoid rule, log part by the circulant product rule.
        diff = f[None, :] - f[:, None]          # [target i, source j]
        P = (diff * (1j * np.conj(yp))[None, :]).real
        rho = np.abs(diff)
        idx = np.arange(M)
        dphi = boundary_grid(M)[None, :] - boundary_grid(M)[:, None]
        s2 = np.abs(2.0 * np.sin(dphi / 2.0))
        ratio = np.where(s2 > 0, rho / np.where(s2 > 0, s2, 1.0), 1.0)
        smooth = P * (0.5 * np.log(ratio) - 0.25)
        smooth[idx, idx] = 0.0  # P vanishes quadratically at the diagonal
        vals = smooth.sum(axis=1) * (2.0 * np.pi / M)
        wlog = _kress_log_weights(M)
        # 0.5 * ln(2|sin|) = 0.25 * ln(4 sin^2)
        logpart = np.empty(M)
        for i in range(M):
            logpart[i] = 0.25 * np.sum(np.roll(wlog, i) * P[i, :])
        return vals + logpart

    nu = case.nu
    offs, wq = _POWER_OFFSETS
    # evaluate the curve at phi_i + off for every i by coefficient twisting
    ch = np.zeros(h.N + 2, dtype=complex)
    ch[1] = 1.0 + h.g0
    ch[2:] = h.gn
    cdh = np.zeros(h.N + 1, dtype=complex)
    cdh[0] = 1.0 + h.g0
    cdh[1:] = (np.arange(1, h.N + 1) + 1) * h.gn
    k1 = np.arange(h.N + 2)
    k2 = np.arange(h.N + 1)
    out = np.zeros(M)
    pad = np.zeros(M, dtype=complex)
    for off, wgt in zip(offs, wq):
        tw1 = ch * np.exp(1j * k1 * off)
        tw2 = cdh * np.exp(1j * k2 * off)
        pad[:] = 0.0
        pad[: len(tw1)] = tw1
        y_off = M * np.fft.ifft(pad)
        pad[:] = 0.0
        pad[: len(tw2)] = tw2
        fp_off = M * np.fft.ifft(pad)
        # y'(t) at t = phi + off: i e^{it} f'(e^{it})
        yp_off = 1j * np.exp(1j * (boundary_grid(M) + off)) * fp_off
        diffv = y_off - f
        P = (diffv * 1j * np.conj(yp_off)).real
        rho = np.abs(diffv)
        out += wgt * P * (-(rho ** (-nu)) / (2.0 - nu))
    return out


# --------------------------------------------------------------------------
# particle-side quantities
# --------------------------------------------------------------------------

_PF_RADIAL = 64
_PF_ANGULAR = 128


def _disk_tensor_grid(n_r=_PF_RADIAL, n_phi=_PF_ANGULAR):
    xg, wg = leggauss(n_r)
    r = 0.5 * (xg + 1.0)
    wr = 0.5 * wg
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    y = r[:, None] * np.exp(1j * phi[None, :])
    wt = (r * wr)[:, None] * (2.0 * np.pi / n_phi)
    return y, wt


def particle_force(h: ShapeCoeffs, case, a: float,
                   component: int = 0) -> float:
    """Derivative of the body's attraction potential at the particle site
    (a, 0); component 0 is d/dx1, component 1 is d/dx2."""
    a = float(a)
    if a < 1.5:
        raise ValueError("particle distance must be at least 1.5")
    y, wt = _disk_tensor_grid()
    fv, dfv = eval_h_at(h, y)
    f = y + fv
    if float(np.max(np.abs(f))) > a - 0.3:
        raise TidaldiskError(
            "shape reaches too close to the particle for smooth quadrature")
    af = a - f  # the vector X - f(y) with X = (a, 0)
    w2 = np.abs(1.0 + dfv) ** 2
    num = af.real if component == 0 else af.imag
    if case.is_log:
        vals = num / np.abs(af) ** 2 * w2
    else:
        nu = case.nu
        vals = nu * num * np.abs(af) ** (-(nu + 2.0)) * w2
    return float(np.sum(vals * wt))


def center_of_mass(h: ShapeCoeffs, m: float, a: float):
    """(integral of x over the body + m X) / (pi + m), as a 2-vector."""
    y, wt = _disk_tensor_grid()
    fv, dfv = eval_h_at(h, y)
    f = y + fv
    w2 = np.abs(1.0 + dfv) ** 2
    mom = np.sum(f * w2 * wt)
    total = mom + m * a
    return np.array([total.real, total.imag]) / (np.pi + m)


def particle_potential_at(case, a: float, pts: np.ndarray) -> np.ndarray:
    """Potential of the unit point mass at (a, 0), evaluated at pts."""
    d = np.abs(pts - a)
    if case.is_log:
        return np.log(d)
    return -d ** (-case.nu)


# --------------------------------------------------------------------------
# full residual
# --------------------------------------------------------------------------

def residual_F(h: ShapeCoeffs, a: float, lam: float, m: float,
               base: BaseState,
               n_radial: int = DEFAULT_RADIAL,
               n_angular: int = DEFAULT_ANGULAR,
               return_field: bool = False):
    """The three components of the reduced system at state (h, a, lam).

    Returns (S_res, r2, r3) where S_res is the boundary spectrum of the
    Bernoulli mismatch, r2 the particle-balance residual and r3 the volume
    residual; with return_field=True the stream-function field is appended.
    """
    fieldv = solve_phi_h(h, base.profile, n_radial=n_radial,
                         n_angular=n_angular)
    dn = fieldv.boundary_normal_deriv()

    M = n_angular
    f, fp = eval_boundary(h, M)
    grad2 = dn ** 2 / np.abs(fp) ** 2  # tangential part vanishes (Dirichlet)

    u_self = boundary_potential(h, base.case, M)
    u_part = particle_potential_at(base.case, a, f)

    samples = (0.5 * grad2 - 0.5 * base.omega0**2 * np.abs(f) ** 2
               + u_self + m * u_part - lam)
    S_res = analyze(samples, N=min(h.N, M // 2 - 1))

    r2 = base.omega0**2 * a - particle_force(h, base.case, a)
    r3 = area(h) - np.pi
    if return_field:
        return S_res, float(r2), float(r3), fieldv
    return S_res, float(r2), float(r3)


def residual_norm(S: BoundarySpectrum, r2: float, r3: float) -> float:
    return float(np.sqrt(S.norm() ** 2 + r2 * r2 + r3 * r3))


# --------------------------------------------------------------------------
# quasi-Newton continuation
# --------------------------------------------------------------------------

@dataclass
class EquilibriumSolution:
    h: ShapeCoeffs
    a: float
    lam: float
    m: float
    residual_norm: float
    iterations: int
    history: list
    diagnostics: dict

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "m": self.m,
            "a": self.a,
            "lambda": self.lam,
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            "history": self.history,
            "shape": self.h.to_json_dict(),
            "diagnostics": self.diagnostics,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_dict(), **kw)

    def boundary_csv_rows(self, M: int = 512):
        f, _ = eval_boundary(self.h, M)
        return zip(boundary_grid(M), f.real, f.imag)


def _diagnostics(h: ShapeCoeffs, a: float, lam: float, m: float,
                 base: BaseState, S: BoundarySpectrum) -> dict:
    com = center_of_mass(h, m, a)
    # Pressure continuity on the free boundary: the interior pressure at the
    # boundary is -(1/2)|grad psi|^2 + (Omega0^2/2)|x|^2 + lambda (the
    # primitive F vanishes there since psi = 0 and F(0) = 0), and matching
    # against the exterior potentials makes the mismatch exactly the
    # Bernoulli residual; its sup is bounded by the spectrum l1 norm.
    jump_sup = float(np.abs(S.coeffs[0]) + 2.0 * np.sum(np.abs(S.coeffs[1:])))
    return {
        "area_error": abs(area(h) - np.pi),
        "center_of_mass": [float(com[0]), float(com[1])],
        "symmetry_defect": h.symmetry_defect(),
        "injectivity_margin": injectivity_margin(h),
        "pressure_jump_sup": jump_sup,
    }


def quasi_newton_solve(op: LinearizedOperator, m: float,
                       tol: float = 1e-10, max_iter: int = 50,
                       n_radial: int = DEFAULT_RADIAL,
                       n_angular: int = DEFAULT_ANGULAR,
                       m_cap: Optional[float] = None) -> EquilibriumSolution:
    """Frozen-derivative fixed point x_{k+1} = x_k - DF(base)^{-1} F(x_k).

    Starts from the first-order response; reports divergence after three
    consecutive residual increases.  The default mass cap is a heuristic
    tied to the distance to resonance.
    """
    base = op.base
    if m_cap is None:
        m_cap = 1e-3 * float(np.min(np.abs(op.table.omega[1:])))
    if abs(m) > m_cap:
        raise TidaldiskError(
            f"m={m:g} exceeds the contraction heuristic cap {m_cap:g}; "
            "pass m_cap explicitly to override")

    if m == 0.0:
        h = ShapeCoeffs.zero(op.N)
        S, r2, r3 = residual_F(h, base.a0, base.lambda0, 0.0, base,
                               n_radial, n_angular)
        rn = residual_norm(S, r2, r3)
        return EquilibriumSolution(h, base.a0, base.lambda0, 0.0, rn, 0,
                                   [rn], _diagnostics(h, base.a0,
                                                      base.lambda0, 0.0,
                                                      base, S))

    h1, a1, l1 = first_order_response(op, m)
    h = h1
    a = base.a0 + a1
    lam = base.lambda0 + l1

    history = []
    bad_streak = 0
    for it in range(1, max_iter + 1):
        S, r2, r3 = residual_F(h, a, lam, m, base, n_radial, n_angular)
        rn = residual_norm(S, r2, r3)
        history.append(rn)
        if rn < tol:
            return EquilibriumSolution(h, a, lam, m, rn, it, history,
                                       _diagnostics(h, a, lam, m, base, S))
        if len(history) > 1 and rn > history[-2]:
            bad_streak += 1
            if bad_streak >= 3:
                raise DivergenceError(
                    f"residual increased {bad_streak} consecutive steps",
                    history=history)
        else:
            bad_streak = 0
        g, b, mu = solve_linearized(op, S, r2, r3)
        if g.N != h.N:
            gg = np.zeros(max(g.N, h.N), dtype=complex)
            gg[:g.N] = g.gn
            hh = np.zeros_like(gg)
            hh[:h.N] = h.gn
            h = ShapeCoeffs(h.g0 - g.g0, hh - gg)
        else:
            h = ShapeCoeffs(h.g0 - g.g0, h.gn - g.gn)
        a -= b
        lam -= mu
        if injectivity_margin(h) <= 0:
            raise DivergenceError("iterate lost certified injectivity",
                                  history=history)

    raise DivergenceError(
        f"no convergence after {max_iter} iterations "
        f"(last residual {history[-1]:.2e})", history=history)


# --------------------------------------------------------------------------
# pressure reconstruction
# --------------------------------------------------------------------------

def vorticity_primitive(profile: VorticityProfile, omega0: float,
                        n_gauss: int = 64):
    """Primitive F with F' = G + 2 omega0, F(0) = 0, as a callable."""
    xg, wg = leggauss(n_gauss)

    def F(u):
        u = np.asarray(u, dtype=float)
        s = 0.5 * (xg[None, :] + 1.0) * u[..., None]
        vals = np.asarray(profile.eval(s), dtype=float) + 2.0 * omega0
        return 0.5 * u * np.sum(vals * wg[None, :], axis=-1)

    return F


def pressure_on_boundary(fieldv: DiskField, h: ShapeCoeffs, lam: float,
                         base: BaseState) -> np.ndarray:
    """Interior pressure evaluated on the free boundary via the Bernoulli
    reconstruction P = F(psi) - (1/2)|grad psi|^2 + (Omega0^2/2)|x|^2 + lam;
    on the boundary psi = 0 and F(0) = 0."""
    dn = fieldv.boundary_normal_deriv()
    M = len(fieldv.phi)
    f, fp = eval_boundary(h, M)
    grad2 = dn ** 2 / np.abs(fp) ** 2
    Fprim = vorticity_primitive(base.profile, base.omega0)
    return (Fprim(np.zeros(M)) - 0.5 * grad2
            + 0.5 * base.omega0**2 * np.abs(f) ** 2 + lam)
