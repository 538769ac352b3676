"""Linearization coefficients of the interaction potential.

The boundary perturbation of the self-attraction enters the linearized
free-boundary operator through one real coefficient c_n per Fourier mode.
In the logarithmic case these are closed-form; in the power-law case they
are disk integrals with an integrable singularity at the boundary point
y = 1, evaluated here by two independent routes:

* direct graded quadrature of the defining disk integral (moderate n),
* a moment decomposition c_n = nu * sum_{k<=n} m_k - 2(n+1) m_n, where the
  moments m_k = (1/2) int_D y^k |1-y|^(-nu) dy are computed from a binomial
  double-series reduction with an Euler-Maclaurin tail.  This route stays
  accurate for large n, where the direct integrand oscillates.

The module also evaluates the constant gamma0 governing the logarithmic
growth of c_n at nu = 1, and assembles the per-mode multiplier table.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import QuadratureError
from .potential import (InteractionCase, BaseState, graded_panels, panel_rule)
from .radial_ode import solve_An

DEFAULT_N_MODES = 256
_DIRECT_QUAD_MAX_N = 64


# --------------------------------------------------------------------------
# closed form, log kernel
# --------------------------------------------------------------------------

def c_n_closed_log(n: int) -> float:
    if n == 0:
        return np.pi / 2.0
    return np.pi / 2.0 * (1.0 - 1.0 / n)


# --------------------------------------------------------------------------
# direct disk quadrature
# --------------------------------------------------------------------------

def _disk_rule(n: int, radial_levels=36, angular_levels=36, n_gauss=12):
    """Polar product rule on the unit disk, graded toward the singular
    boundary point (r, phi) = (1, 0) and refined to resolve mode n."""
    r_edges = graded_panels(0.0, 1.0, radial_levels, toward_a=False)
    rn, rw = panel_rule(r_edges, n_gauss)

    half = graded_panels(0.0, np.pi, angular_levels, toward_a=True)
    # subdivide to track the oscillation of y^n
    max_len = np.pi / max(n, 4)
    edges = [0.0]
    for a, b in zip(half[:-1], half[1:]):
        pieces = max(1, int(np.ceil((b - a) / max_len)))
        edges.extend(np.linspace(a, b, pieces + 1)[1:])
    half = np.array(edges)
    full = np.concatenate([half, 2.0 * np.pi - half[::-1][1:]])
    pn, pw = panel_rule(full, n_gauss)
    return rn, rw, pn, pw


def c_n_disk_quadrature(case: InteractionCase, n: int,
                        imag_tol: float = 1e-9) -> float:
    """Graded quadrature of the defining disk integral for c_n.

    Returns the real part; a non-negligible imaginary residue indicates a
    quadrature failure and is reported as such.
    """
    rn, rw, pn, pw = _disk_rule(n)
    y = rn[:, None] * np.exp(1j * pn[None, :])
    one_my = 1.0 - y
    geo = (1.0 - y ** (n + 1)) / one_my          # sum_{k<=n} y^k
    if case.is_log:
        integrand = (n + 1) * y**n * np.log(np.abs(one_my)) + 0.5 * geo
    else:
        nu = case.nu
        integrand = 0.5 * (nu * geo - 2.0 * (n + 1) * y**n) \
            * np.abs(one_my) ** (-nu)
    w = (rn * rw)[:, None] * pw[None, :]
    val = np.sum(integrand * w)
    if abs(val.imag) > imag_tol:
        raise QuadratureError(
            f"c_n quadrature imaginary residue {val.imag:.2e} exceeds {imag_tol:g}",
            achieved=abs(val.imag),
        )
    return float(val.real)


# --------------------------------------------------------------------------
# moment decomposition (power-law case)
# --------------------------------------------------------------------------

def _binomial_coeffs(nu: float, pmax: int) -> np.ndarray:
    """Taylor coefficients of (1-y)^(-nu/2): a_p = Gamma(p+nu/2)/(Gamma(nu/2) p!)."""
    p = np.arange(pmax + 1, dtype=float)
    return np.exp(gammaln(p + nu / 2.0) - gammaln(nu / 2.0) - gammaln(p + 1.0))


def kernel_moments(nu: float, n_max: int, series_terms: int = 20000) -> np.ndarray:
    """Moments m_k = (1/2) int_D y^k |1-y|^(-nu) dy for k = 0..n_max.

    Expanding |1-y|^(-nu) as a product of binomial series in y and conj(y)
    and integrating term by term over the disk leaves a single sum,
    m_k = pi * sum_p a_p a_{p+k} / (2p + 2k + 2),
    whose smooth tail is summed by Euler-Maclaurin.
    """
    P = series_terms
    a = _binomial_coeffs(nu, P + n_max + 2)
    lg_nu = gammaln(nu / 2.0)

    p = np.arange(P, dtype=float)
    out = np.empty(n_max + 1)
    for k in range(n_max + 1):
        head = np.pi * np.sum(a[:P] * a[k:k + P] / (2.0 * p + 2.0 * k + 2.0))

        def t(x, k=k):
            la = gammaln(x + nu / 2.0) - lg_nu - gammaln(x + 1.0)
            lb = gammaln(x + k + nu / 2.0) - lg_nu - gammaln(x + k + 1.0)
            return np.pi * np.exp(la + lb) / (2.0 * x + 2.0 * k + 2.0)

        tail, _ = quad(t, P, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
        h = 1e-3 * P
        tprime = (t(P + h) - t(P - h)) / (2.0 * h)
        out[k] = head + tail + 0.5 * t(P) - tprime / 12.0
    return out


def c_n_from_moments(case: InteractionCase, n_max: int,
                     moments: Optional[np.ndarray] = None) -> np.ndarray:
    """All c_0..c_{n_max} of the power-law case from the moment route."""
    if case.is_log:
        return np.array([c_n_closed_log(n) for n in range(n_max + 1)])
    m = kernel_moments(case.nu, n_max) if moments is None else moments
    n = np.arange(n_max + 1, dtype=float)
    return case.nu * np.cumsum(m) - 2.0 * (n + 1.0) * m


def c_n(case: InteractionCase, n: int) -> float:
    """Single linearization coefficient.

    Log case: closed form.  Power-law case: direct graded quadrature up to
    n = 64, moment decomposition beyond (the direct integrand oscillates
    with n and loses accuracy there).
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if case.is_log:
        return c_n_closed_log(n)
    if n <= _DIRECT_QUAD_MAX_N:
        return c_n_disk_quadrature(case, n)
    return float(c_n_from_moments(case, n)[n])


# --------------------------------------------------------------------------
# asymptotic constant gamma0
# --------------------------------------------------------------------------

def gamma0(nu: float = 1.0, n_periods: int = 80, tol: float = 1e-10) -> float:
    """Improper double integral
    nu * int_0^inf int_0^inf exp(-r) zeta sin(zeta) (r^2+zeta^2)^(-(2+nu)/2)
    summed period-by-period in zeta with alternating-series acceleration.
    """
    if not (0.0 < nu <= 1.0):
        raise ValueError("nu must lie in (0, 1]")

    def radial(zeta):
        val, _ = quad(lambda r: np.exp(-r) * (r * r + zeta * zeta) ** (-(2.0 + nu) / 2.0),
                      0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
        return val

    def outer(zeta):
        return zeta * np.sin(zeta) * radial(zeta)

    pieces = []
    for j in range(n_periods):
        lo, hi = j * np.pi, (j + 1) * np.pi
        val, _ = quad(outer, lo, hi, epsabs=1e-12, epsrel=1e-11, limit=200)
        pieces.append(val)
    partial = np.cumsum(pieces)

    # iterated averaging of the alternating partial sums
    s = partial.astype(float)
    last_span = np.inf
    while len(s) > 2:
        s = 0.5 * (s[:-1] + s[1:])
        span = abs(s[-1] - s[-2])
        if span < tol:
            return float(nu * s[-1])
        if span > last_span * 4:
            break
        last_span = span
    if abs(s[-1] - s[-2]) > 1e-6:
        raise QuadratureError("gamma0 acceleration failed to settle",
                              achieved=abs(float(s[-1] - s[-2])))
    return float(nu * s[-1])


def gamma0_bracket(nu: float = 1.0, n_periods: int = 40):
    """Lower/upper bracket from the alternating partial sums (the pieces
    alternate in sign and shrink, so consecutive partial sums bracket)."""
    def radial(zeta):
        val, _ = quad(lambda r: np.exp(-r) * (r * r + zeta * zeta) ** (-(2.0 + nu) / 2.0),
                      0.0, np.inf, epsabs=1e-13, epsrel=1e-12, limit=200)
        return val

    partial = []
    acc = 0.0
    for j in range(n_periods):
        val, _ = quad(lambda z: z * np.sin(z) * radial(z),
                      j * np.pi, (j + 1) * np.pi, epsabs=1e-12, epsrel=1e-11,
                      limit=200)
        acc += val
        partial.append(acc)
    tail = nu * np.array(partial[-2:])
    return float(min(tail)), float(max(tail))


# --------------------------------------------------------------------------
# mode table
# --------------------------------------------------------------------------

@dataclass
class ModeTable:
    """Per-mode data of the linearized boundary operator up to truncation N.

    omega[n] depends on |n| only; negative modes are implied.
    """

    N: int
    a_deriv: np.ndarray          # A_n'(1), n = 1..N  (length N)
    c: np.ndarray                # c_n, n = 0..N      (length N+1)
    omega: np.ndarray            # omega_n, n = 0..N  (length N+1)
    a0_deriv: float = 0.0        # A_0'(1), kept for the n = 0 multiplier

    def omega_at(self, n: int) -> float:
        return float(self.omega[abs(n)])

    def to_csv_rows(self):
        for n in range(self.N + 1):
            ad = self.a0_deriv if n == 0 else self.a_deriv[n - 1]
            yield n, ad, self.c[n], self.omega[n]

    def to_json_dict(self):
        return {
            "schema_version": 1,
            "N": self.N,
            "a0_deriv": self.a0_deriv,
            "a_deriv": self.a_deriv.tolist(),
            "c": self.c.tolist(),
            "omega": self.omega.tolist(),
        }


def multiplier(base: BaseState, n: int, a_deriv_n: float, c_abs_n: float) -> float:
    """Fourier multiplier of mode n of the linearized boundary condition:
    -(1/2) phi0'(1)^2 (|n|+1) + phi0'(1) A_n'(1) (|n|+1) - (1/2) omega0^2 + c_n.
    """
    n = abs(n)
    dp = base.dphi0_at_1
    return (-0.5 * dp * dp * (n + 1) + dp * a_deriv_n * (n + 1)
            - 0.5 * base.omega0**2 + c_abs_n)


def build_mode_table(base: BaseState, N: int = DEFAULT_N_MODES,
                     n_nodes: int = 64, workers: int = 1) -> ModeTable:
    """Assemble A_n'(1), c_n and omega_n for n = 0..N.

    Power-law c_n come from the moment route, which is uniformly accurate in
    n (the direct quadrature is used for spot validation in the test-suite).
    """
    if N < 1:
        raise ValueError("N must be at least 1")

    def deriv(n):
        return solve_An(n, base, n_nodes=n_nodes)[1]

    ns = list(range(0, N + 1))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            derivs = list(pool.map(deriv, ns))
    else:
        derivs = [deriv(n) for n in ns]
    a0_deriv = derivs[0]
    a_deriv = np.array(derivs[1:])

    c = c_n_from_moments(base.case, N)
    omega = np.empty(N + 1)
    omega[0] = multiplier(base, 0, a0_deriv, c[0])
    for n in range(1, N + 1):
        omega[n] = multiplier(base, n, a_deriv[n - 1], c[n])
    return ModeTable(N=N, a_deriv=a_deriv, c=c, omega=omega, a0_deriv=a0_deriv)
