import numpy as np
import pytest

from tidaldisk.errors import DegenerateBaseError
from tidaldisk.kernel import rigid_preset, zero_preset
from tidaldisk.potential import (InteractionCase, a0_from_omega, case_a,
                                 case_b, make_base_state, omega_from_a0, u0,
                                 u0_d1, u0_d2, u0_series,
                                 u0_series_calibration, u0_series_raw)

SQRT_PI = np.sqrt(np.pi)


def test_case_validation():
    with pytest.raises(ValueError):
        InteractionCase("C")
    with pytest.raises(ValueError):
        case_a(0.0)
    with pytest.raises(ValueError):
        case_a(1.5)
    assert case_b().is_log
    assert not case_a(0.7).is_log


def test_log_case_closed_forms():
    case = case_b()
    assert u0(case, 0.0) == -np.pi / 2
    assert u0(case, 1.0) == 0.0
    assert abs(u0(case, 2.0) - np.pi * np.log(2.0)) < 1e-15
    assert abs(u0_d1(case, 2.0) - np.pi / 2) < 1e-15
    assert abs(u0_d2(case, 2.0) + np.pi / 4) < 1e-15


def test_interior_derivatives_rejected():
    with pytest.raises(ValueError):
        u0_d1(case_b(), 0.5)
    with pytest.raises(ValueError):
        u0_d2(case_a(1.0), 1.0)


def test_power_case_center_value():
    # at nu = 1 the disk integral of 1/|y| is 2 pi
    assert abs(u0(case_a(1.0), 0.0) + 2.0 * np.pi) < 1e-10


def test_power_case_monte_carlo_oracle():
    rng = np.random.default_rng(42)
    n = 400_000
    pts = rng.uniform(-1, 1, size=(2 * n, 2))
    pts = pts[np.hypot(pts[:, 0], pts[:, 1]) <= 1.0][:n]
    pts = pts[:, 0] + 1j * pts[:, 1]

    # interior point, mild singularity (nu = 0.5)
    x = 0.3
    est = -np.pi * np.mean(np.abs(x - pts) ** -0.5)
    assert abs(est - u0(case_a(0.5), 0.3)) < 0.02

    # exterior point, smooth integrand (nu = 1)
    x = 2.0
    est = -np.pi * np.mean(np.abs(x - pts) ** -1.0)
    assert abs(est - u0(case_a(1.0), 2.0)) < 0.005


def test_power_case_derivative_consistency():
    case = case_a(1.0)
    for r in (1.7, 3.0):
        h = 1e-4
        fd1 = (u0(case, r + h) - u0(case, r - h)) / (2 * h)
        assert abs(fd1 - u0_d1(case, r)) < 1e-6
        fd2 = (u0_d1(case, r + h) - u0_d1(case, r - h)) / (2 * h)
        assert abs(fd2 - u0_d2(case, r)) < 1e-6


def test_series_calibration_and_match():
    factor = u0_series_calibration()
    # the raw series is off by exactly this constant; fixed numerically
    assert abs(factor - 2.0 * np.pi) < 1e-8
    case = case_a(1.0)
    for r in (1.5, 2.5, 4.0):
        assert abs(u0_series(r, factor) - u0(case, r)) < 1e-6
    # interior branch of the series as well
    assert abs(u0_series(0.0, factor) - u0(case, 0.0)) < 1e-4


def test_series_raw_continuity_at_1():
    assert abs(u0_series_raw(1.0 - 1e-9) - u0_series_raw(1.0)) < 1e-4


def test_omega_a0_relation_and_inverse():
    case = case_b()
    assert abs(omega_from_a0(case, 2.0) - SQRT_PI / 2.0) < 1e-14
    a0 = a0_from_omega(case, SQRT_PI / 2.0)
    assert abs(a0 - 2.0) < 1e-10
    # power case round trip
    caseA = case_a(1.0)
    om = omega_from_a0(caseA, 3.0)
    assert abs(a0_from_omega(caseA, om) - 3.0) < 1e-8


def test_omega_out_of_range_reports_interval():
    with pytest.raises(ValueError, match="admissible interval"):
        a0_from_omega(case_b(), 2.0)


def test_base_state_log_rigid():
    base = make_base_state(case_b(), 2.0, rigid_preset(1.0))
    assert abs(base.omega0 - SQRT_PI / 2.0) < 1e-14
    assert abs(base.dphi0_at_1 + 1.0) < 1e-12
    lam_expect = 0.5 * 1.0 - 0.5 * base.omega0**2 + 0.0
    assert abs(base.lambda0 - lam_expect) < 1e-12
    d = base.to_json_dict()
    assert d["case"] == "B" and d["schema_version"] == 1


def test_base_state_rejects_close_particle():
    with pytest.raises(ValueError):
        make_base_state(case_b(), 1.2, rigid_preset(1.0))


def test_base_state_degenerate_profile():
    with pytest.raises(DegenerateBaseError):
        make_base_state(case_b(), 2.0, zero_preset())
