"""Verification suites: closed forms, identities and scaling checks.

Each criterion returns a dict with `name`, `passed` and `details`; the
command line `verify` subcommand and the acceptance test-suite both run
these, so there is a single source of truth for what "correct" means.
"""

from __future__ import annotations

import numpy as np

from .coeffs import (build_mode_table, c_n_closed_log, c_n_disk_quadrature,
                     c_n_from_moments, gamma0)
from .kernel import linear_preset, rigid_preset
from .linop import (apply_forward, first_order_response, make_operator,
                    solve_linearized)
from .potential import (case_a, case_b, make_base_state, u0, u0_d1, u0_d2,
                        u0_series, u0_series_calibration)
from .radial_ode import solve_An
from .residual import quasi_newton_solve, residual_F, residual_norm
from .spectral import (BoundarySpectrum, ShapeCoeffs, eval_h_boundary,
                       injectivity_margin, self_intersection_oracle)

_SQRT_PI = float(np.sqrt(np.pi))


def _matched_rigid_base(a0=2.0):
    """Constant-vorticity base whose internal rotation equals the orbital
    speed of the particle (fluid at rest in the rotating frame)."""
    case = case_b()
    omega0 = np.sqrt(np.pi) / a0
    return make_base_state(case, a0, rigid_preset(omega0))


def _fixture_base(a0=2.0):
    """Constant-vorticity base G = -2 at particle distance a0.

    The vorticity level is deliberately not tied to the orbital speed: for
    the log kernel the matched choice at a0 = 2 sits exactly on the n = 2
    resonance (omega_2 = -Omega0^2 + c_2 = 0), so the continuation criteria
    use this non-resonant variant.
    """
    return make_base_state(case_b(), a0, rigid_preset(1.0))


# --------------------------------------------------------------------------

def criterion_1_closed_forms():
    """Log-kernel coefficients: closed form and quadrature agree."""
    case = case_b()
    worst = 0.0
    exact_ok = (c_n_closed_log(0) == np.pi / 2.0
                and c_n_closed_log(1) == 0.0)
    for n in range(0, 65):
        target = np.pi / 2.0 if n == 0 else np.pi / 2.0 * (1.0 - 1.0 / n)
        exact_ok = exact_ok and (c_n_closed_log(n) == target)
        worst = max(worst, abs(c_n_disk_quadrature(case, n) - target))
    return {
        "name": "log-kernel coefficient closed forms vs quadrature",
        "passed": bool(exact_ok and worst < 1e-6),
        "details": {"max_quadrature_error": worst, "closed_form_exact": exact_ok},
    }


def criterion_2_rigid_mode_derivatives():
    base = _matched_rigid_base()
    om = base.omega0
    worst = 0.0
    for n in range(0, 65):
        d = solve_An(n, base)[1]
        target = -om / (n + 1)
        worst = max(worst, abs(d - target) / abs(target))
    return {
        "name": "rigid-rotation mode derivatives A_n'(1)",
        "passed": bool(worst < 1e-8),
        "details": {"max_rel_error": worst},
    }


def criterion_3_mode_derivative_asymptotics():
    base = make_base_state(case_b(), 2.0, linear_preset(1.0, -2.0))
    g_bdry = float(base.profile.eval(0.0))
    f = {}
    for n in (64, 128, 256):
        f[n] = 2 * n * solve_An(n, base)[1] / g_bdry
    rich = 2.0 * f[256] - f[128]
    return {
        "name": "large-n asymptotics of A_n'(1)",
        "passed": bool(abs(rich - 1.0) < 0.02),
        "details": {"raw": f, "richardson": rich},
    }


def criterion_4_coefficient_asymptotics():
    case = case_a(1.0)
    g0 = gamma0(1.0)
    c = c_n_from_moments(case, 512)
    ns = np.array([64, 128, 256, 512])
    ratios = c[ns] / np.log(ns)
    increasing = bool(np.all(np.diff(ratios) > 0))
    rel512 = abs(ratios[-1] - g0) / abs(g0)
    # linear extrapolation in 1/ln(n) through the last two points
    x = 1.0 / np.log(ns[-2:])
    slope = (ratios[-1] - ratios[-2]) / (x[-1] - x[-2])
    extrap = ratios[-1] - slope * x[-1]
    rel_extrap = abs(extrap - g0) / abs(g0)
    return {
        "name": "power-kernel coefficient asymptotics c_n / ln n",
        "passed": bool(increasing and rel512 < 0.15 and rel_extrap < 0.05),
        "details": {"gamma0": g0, "ratios": ratios.tolist(),
                    "rel_at_512": rel512, "rel_extrapolated": rel_extrap},
    }


def criterion_5_linear_round_trip(seed=0):
    op = make_operator(_fixture_base(), N=64)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        coeffs = rng.normal(size=17) + 1j * rng.normal(size=17)
        coeffs[0] = coeffs[0].real
        S = BoundarySpectrum(coeffs)
        Z = float(rng.normal())
        M = float(rng.normal())
        g, b, mu = solve_linearized(op, S, Z, M)
        S2, Z2, M2 = apply_forward(op, g, b, mu)
        err = max(float(np.max(np.abs(S2.coeffs[:17] - S.coeffs))),
                  float(np.max(np.abs(S2.coeffs[17:]))) if S2.N >= 17 else 0.0,
                  abs(Z2 - Z), abs(M2 - M))
        worst = max(worst, err)
    return {
        "name": "linearized operator forward/inverse round trip",
        "passed": bool(worst < 1e-10),
        "details": {"max_error": worst},
    }


def criterion_6_multiplier_consistency():
    base = _matched_rigid_base()
    table = build_mode_table(base, N=256)
    om = base.omega0
    n = np.arange(257)
    target = -(n / 2.0) * om * om + np.array(
        [c_n_closed_log(int(k)) for k in n])
    worst = float(np.max(np.abs(table.omega - target)))
    return {
        "name": "rigid-case multiplier identity",
        "passed": bool(worst < 1e-10),
        "details": {"max_error": worst},
    }


def criterion_7_first_order_scaling():
    base = _fixture_base()
    op = make_operator(base, N=64)

    def res(m):
        h1, a1, l1 = first_order_response(op, m)
        S, r2, r3 = residual_F(h1, base.a0 + a1, base.lambda0 + l1, m, base)
        return residual_norm(S, r2, r3)

    r_m = res(1e-4)
    r_half = res(5e-5)
    ratio = r_m / r_half
    return {
        "name": "first-order residual O(m^2) scaling",
        "passed": bool(3.2 <= ratio <= 4.8),
        "details": {"residual_m": r_m, "residual_m_half": r_half,
                    "ratio": ratio},
    }


def criterion_8_continuation_quality():
    op = make_operator(_fixture_base(), N=64)
    sol = quasi_newton_solve(op, 1e-4)
    d = sol.diagnostics
    com = float(np.hypot(*d["center_of_mass"]))
    ok = (sol.residual_norm < 1e-8 and d["area_error"] < 1e-8
          and d["symmetry_defect"] < 1e-10 and com < 1e-6)
    return {
        "name": "quasi-Newton solution quality at m = 1e-4",
        "passed": bool(ok),
        "details": {"residual": sol.residual_norm,
                    "area_error": d["area_error"],
                    "symmetry_defect": d["symmetry_defect"],
                    "center_of_mass": com,
                    "iterations": sol.iterations},
    }


def criterion_9_potential_properties():
    cases = [case_b(), case_a(0.5), case_a(1.0)]
    r_grid = np.linspace(1.05, 10.0, 20)
    mono_ok = True
    for case in cases:
        d1 = np.array([u0_d1(case, r) for r in r_grid])
        d2 = np.array([u0_d2(case, r) for r in r_grid])
        ratio = d1 / r_grid
        mono_ok = mono_ok and bool(np.all(d1 > 0) and np.all(d2 < 0)
                                   and np.all(np.diff(ratio) < 0))
    center = u0(case_a(1.0), 0.0)
    center_ok = abs(center + 2.0 * np.pi) < 1e-8
    factor = u0_series_calibration()
    series_worst = 0.0
    for r in np.linspace(1.5, 5.0, 8):
        series_worst = max(series_worst,
                           abs(u0_series(r, factor) - u0(case_a(1.0), r)))
    return {
        "name": "disk potential monotonicity, center value and series",
        "passed": bool(mono_ok and center_ok and series_worst < 1e-4),
        "details": {"monotone": mono_ok, "u0_at_0": center,
                    "series_max_dev": series_worst,
                    "series_factor": factor},
    }


def criterion_10_conformal_certification(seed=0):
    rng = np.random.default_rng(seed)

    def random_shape():
        N = 8
        gn = (rng.normal(size=N) + 1j * rng.normal(size=N)) / (np.arange(1, N + 1) + 1) ** 2
        return ShapeCoeffs(float(rng.normal()) * 0.1, 0.05 * gn)

    def rescale_to_sup(h, target):
        hv, dhv = eval_h_boundary(h, 512)
        sup = float(np.max(np.abs(hv) + np.abs(dhv)))
        return h.scaled(target / sup)

    certified_ok = True
    for _ in range(100):
        h = rescale_to_sup(random_shape(), 0.5 / np.sqrt(2.0))
        if injectivity_margin(h) <= 0 or not self_intersection_oracle(h, 256):
            certified_ok = False
            break

    violating_ok = True
    for _ in range(20):
        h = rescale_to_sup(random_shape(), 1.5 / np.sqrt(2.0))
        if injectivity_margin(h) >= 0:
            violating_ok = False
            break

    return {
        "name": "injectivity margin certification",
        "passed": bool(certified_ok and violating_ok),
        "details": {"certified_clean": certified_ok,
                    "violations_flagged": violating_ok},
    }


ALL_CRITERIA = [
    criterion_1_closed_forms,
    criterion_2_rigid_mode_derivatives,
    criterion_3_mode_derivative_asymptotics,
    criterion_4_coefficient_asymptotics,
    criterion_5_linear_round_trip,
    criterion_6_multiplier_consistency,
    criterion_7_first_order_scaling,
    criterion_8_continuation_quality,
    criterion_9_potential_properties,
    criterion_10_conformal_certification,
]


def run_all(seed: int = 0) -> dict:
    results = []
    for i, fn in enumerate(ALL_CRITERIA, start=1):
        if fn in (criterion_5_linear_round_trip,
                  criterion_10_conformal_certification):
            res = fn(seed=seed)
        else:
            res = fn()
        res["criterion"] = i
        results.append(res)
    return {
        "schema_version": 1,
        "seed": seed,
        "passed": all(r["passed"] for r in results),
        "criteria": results,
    }
