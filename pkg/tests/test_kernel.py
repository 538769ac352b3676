import numpy as np
import pytest

from tidaldisk.kernel import (linear_preset, profile_from_csv,
                              profile_from_table, rigid_preset,
                              smooth_profile, zero_preset)


def test_rigid_preset_constant_value():
    p = rigid_preset(1.0)
    assert p.eval(0.37) == -2.0
    assert p.d1(5.0) == 0.0
    assert rigid_preset(0.5).eval(-1.0) == -1.0


def test_rigid_preset_rejects_nonpositive():
    with pytest.raises(ValueError):
        rigid_preset(0.0)
    with pytest.raises(ValueError):
        rigid_preset(-1.0)


def test_rigid_preset_certified():
    assert rigid_preset(2.0).monotone_certified


def test_zero_preset():
    p = zero_preset()
    assert np.all(p.eval(np.linspace(-3, 3, 7)) == 0.0)


def test_linear_preset_rejects_negative_slope():
    with pytest.raises(ValueError):
        linear_preset(-0.5)


def _fd_check(p, deriv, fn, u, h):
    approx = (fn(u + h) - fn(u - h)) / (2 * h)
    return abs(approx - deriv(u))


def test_derivative_consistency_second_order():
    p = smooth_profile(
        fn=lambda u: np.tanh(u) + u,
        d1=lambda u: 1.0 / np.cosh(u) ** 2 + 1.0,
        d2=lambda u: -2.0 * np.tanh(u) / np.cosh(u) ** 2,
        d3=lambda u: (4.0 * np.sinh(u) ** 2 - 2.0) / np.cosh(u) ** 4,
        certify_range=(-3.0, 3.0),
    )
    rng = np.random.default_rng(3)
    us = rng.uniform(-2, 2, size=12)
    for pair in [(p.eval, p.d1), (p.d1, p.d2), (p.d2, p.d3)]:
        for u in us:
            e1 = _fd_check(p, pair[1], pair[0], u, 1e-3)
            e2 = _fd_check(p, pair[1], pair[0], u, 5e-4)
            # second-order quotient: error drops by about 4 when h halves
            assert e1 < 1e-5
            assert e2 < e1


def test_table_profile_monotone_and_extrapolates():
    u = np.linspace(-2, 2, 21)
    g = np.tanh(u)
    p = profile_from_table(u, g)
    assert p.monotone_certified
    x = np.linspace(-1.8, 1.8, 50)
    assert np.max(np.abs(p.eval(x) - np.tanh(x))) < 1e-3
    # linear extrapolation keeps it non-decreasing
    assert p.eval(5.0) >= p.eval(2.0)
    assert p.d1(5.0) >= 0.0


def test_table_profile_rejects_decreasing():
    u = np.linspace(0, 1, 5)
    with pytest.raises(ValueError):
        profile_from_table(u, np.array([0.0, 0.5, 0.4, 0.8, 1.0]))


def test_profile_from_csv(tmp_path):
    path = tmp_path / "g.csv"
    u = np.linspace(-1, 1, 9)
    rows = "\n".join(f"{ui},{np.tanh(ui)}" for ui in u)
    path.write_text("# u, G\n" + rows + "\n")
    p = profile_from_csv(str(path))
    assert abs(p.eval(0.3) - np.tanh(0.3)) < 1e-3


def test_profile_from_csv_bad_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("0,0\n1,not_a_number\n")
    with pytest.raises(ValueError):
        profile_from_csv(str(path))
