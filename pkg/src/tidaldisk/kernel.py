"""Vorticity function G of the stream-function formulation.

The velocity field inside the fluid body is generated by a stream function
whose Laplacian is a user-supplied non-decreasing function G of the stream
function itself.  This module represents G together with its first three
derivatives, either as built-in presets or as a monotone interpolant of a
tabulated profile.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import PchipInterpolator


@dataclass(frozen=True)
class VorticityProfile:
    """Non-decreasing vorticity function G with derivatives up to third order.

    Instances are immutable; the evaluators are plain vectorized callables
    and safe to share across workers.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    d1: Callable[[np.ndarray], np.ndarray]
    d2: Callable[[np.ndarray], np.ndarray]
    d3: Callable[[np.ndarray], np.ndarray]
    monotone_certified: bool = False
    name: str = "custom"
    sup_bound: float = field(default=np.inf)  # bound for |G| used by shooting

    def __call__(self, u):
        return self.eval(u)

    def check_monotone(self, lo: float, hi: float, n: int = 1000) -> bool:
        """Spot-check monotonicity of G and non-negativity of G' on a grid."""
        u = np.linspace(lo, hi, n)
        g = np.asarray(self.eval(u), dtype=float)
        return bool(np.all(np.diff(g) >= -1e-12) and np.all(self.d1(u) >= -1e-12))


def _constant_profile(value: float, name: str) -> VorticityProfile:
    def ev(u):
        return np.full_like(np.asarray(u, dtype=float), value)

    def zero(u):
        return np.zeros_like(np.asarray(u, dtype=float))

    return VorticityProfile(
        eval=ev, d1=zero, d2=zero, d3=zero,
        monotone_certified=True, name=name, sup_bound=abs(value),
    )


def rigid_preset(omega0: float) -> VorticityProfile:
    """Profile of a rigidly rotating body: G identically equal to -2*omega0.

    In the co-rotating frame the fluid is then at rest, the full vorticity
    being supplied by the frame rotation.
    """
    if not omega0 > 0:
        raise ValueError(f"omega0 must be positive, got {omega0}")
    return _constant_profile(-2.0 * float(omega0), name=f"rigid(omega0={omega0:g})")


def zero_preset() -> VorticityProfile:
    """G identically zero.  Gives the degenerate motionless profile; useful
    for exercising error paths."""
    return _constant_profile(0.0, name="zero")


def linear_preset(slope: float = 1.0, offset: float = 0.0) -> VorticityProfile:
    """G(u) = slope*u + offset with slope >= 0."""
    if slope < 0:
        raise ValueError("slope must be non-negative for a non-decreasing G")

    def ev(u):
        return slope * np.asarray(u, dtype=float) + offset

    def d1(u):
        return np.full_like(np.asarray(u, dtype=float), slope)

    def zero(u):
        return np.zeros_like(np.asarray(u, dtype=float))

    return VorticityProfile(
        eval=ev, d1=d1, d2=zero, d3=zero,
        monotone_certified=True,
        name=f"linear({slope:g},{offset:g})",
        # |G| on the relevant range is not known a priori; the shooting
        # bracket uses this as a scale only.
        sup_bound=abs(slope) * 10.0 + abs(offset),
    )


def profile_from_table(u: np.ndarray, g: np.ndarray) -> VorticityProfile:
    """Monotone cubic interpolant through tabulated (u, G(u)) samples.

    The PCHIP construction preserves monotonicity of the data, so a
    non-decreasing table yields a certified non-decreasing profile.
    Evaluation outside the table range extrapolates linearly with the
    boundary slope (G stays non-decreasing).
    """
    u = np.asarray(u, dtype=float)
    g = np.asarray(g, dtype=float)
    if u.ndim != 1 or u.shape != g.shape or len(u) < 4:
        raise ValueError("need matching 1-d arrays with at least 4 samples")
    order = np.argsort(u)
    u, g = u[order], g[order]
    if np.any(np.diff(u) <= 0):
        raise ValueError("duplicate abscissae in profile table")
    if np.any(np.diff(g) < -1e-12 * max(1.0, np.max(np.abs(g)))):
        raise ValueError("profile table is not non-decreasing")

    base = PchipInterpolator(u, g, extrapolate=False)
    db = base.derivative(1)
    lo, hi = u[0], u[-1]
    slope_lo = float(db(lo))
    slope_hi = float(db(hi))

    def ev(x):
        x = np.asarray(x, dtype=float)
        out = base(np.clip(x, lo, hi))
        out = np.where(x < lo, g[0] + slope_lo * (x - lo), out)
        out = np.where(x > hi, g[-1] + slope_hi * (x - hi), out)
        return out

    def make_deriv(k):
        dk = base.derivative(k)

        def deriv(x):
            x = np.asarray(x, dtype=float)
            out = np.asarray(dk(np.clip(x, lo, hi)), dtype=float)
            if k == 1:
                out = np.where(x < lo, slope_lo, out)
                out = np.where(x > hi, slope_hi, out)
            else:
                out = np.where((x < lo) | (x > hi), 0.0, out)
            return out

        return deriv

    prof = VorticityProfile(
        eval=ev, d1=make_deriv(1), d2=make_deriv(2), d3=make_deriv(3),
        monotone_certified=True, name="table",
        sup_bound=float(np.max(np.abs(g))) + abs(slope_lo) + abs(slope_hi),
    )
    if not prof.check_monotone(lo, hi):
        raise ValueError("interpolated profile failed the monotonicity check")
    return prof


def profile_from_csv(path: str) -> VorticityProfile:
    """Read a two-column CSV of (u, G(u)) pairs and build a profile."""
    us, gs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            try:
                us.append(float(row[0]))
                gs.append(float(row[1]))
            except (ValueError, IndexError) as exc:
                raise ValueError(f"bad row in profile CSV {path!r}: {row}") from exc
    return profile_from_table(np.array(us), np.array(gs))


def smooth_profile(fn, d1, d2, d3, name="callable", sup_bound=np.inf,
                   certify_range=None) -> VorticityProfile:
    """Wrap explicit callables as a profile, optionally spot-checking
    monotonicity on ``certify_range = (lo, hi)``."""
    prof = VorticityProfile(eval=fn, d1=d1, d2=d2, d3=d3,
                            monotone_certified=False, name=name,
                            sup_bound=sup_bound)
    if certify_range is not None:
        if not prof.check_monotone(*certify_range):
            raise ValueError("profile failed the monotonicity check")
        object.__setattr__(prof, "monotone_certified", True)
    return prof
