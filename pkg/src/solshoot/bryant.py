"""Bryant steady soliton reference curves and their bound checks.

The steady rotationally symmetric soliton appears here in two guises: the
planar (x, y) system whose unstable-manifold curve y = f(x) connects
(1, 1/2) to the origin, and the three-field steady shot used as the
reference trajectory for large-parameter comparisons.  Both carry the
closed-form envelope bounds this module measures margins against.

The planar flow is stiff along its tail: the manifold attracts at unit
rate while the drift along it decays like x^3, so an explicit stepper
stalls at its stability boundary long before x reaches 1e-6.  The curve
is therefore integrated in x as the independent variable, and in the gap
variable u = y - x, whose equation has no cancellation where y hugs x.
"""

import math
from typing import NamedTuple, Optional

import numpy as np
from scipy.integrate import solve_ivp

from . import ode
from .errors import LaunchTooFar
from .shooting import ShootConfig, shoot_curve_point

__all__ = [
    "BryantCurve",
    "FBoundsReport",
    "SmalltimeReport",
    "bryant_unstable_curve",
    "verify_f_bounds",
    "steady_reference",
    "bryant_smalltime",
]

# unstable eigendirection of the planar system at (1, 1/2) and the
# quadratic coefficient of the local manifold expansion
_EIG_DIRECTION = (2.0, 1.0)
_QUAD_COEF = 2.0 / 5.0
_X_CUTOFF = 1e-6
_N_NODES = 40_001


class BryantCurve(NamedTuple):
    """Unstable-manifold curve samples, x descending from 1-h to 1e-6."""

    x: np.ndarray
    y: np.ndarray
    h: float
    direction: tuple

    def interp(self, xq):
        """y = f(x) by linear interpolation (x is stored descending)."""
        return np.interp(xq, self.x[::-1], self.y[::-1])


class FBoundsReport(NamedTuple):
    """Minimum signed margins of the four envelope bounds on y = f(x), plus
    the curve value at x = 0.3.  Positive margin = bound satisfied."""

    margin_ge_half_x: float
    margin_le_half_x_plus_sq: float
    margin_ge_x_minus_x2: float
    margin_le_x: float
    y_at_x03: float


class SmalltimeReport(NamedTuple):
    """Margins of the small-time envelope bounds for the steady shot on
    [t_eps, 1/9], and the endpoint values of z = 1/R and x = L2/R."""

    z_lower_margin: float
    z_upper_margin: float
    x_lower_margin: float
    x_upper_margin: float
    z_end: float
    x_end: float


def _gap_slope(x, u):
    """du/dx for u = y - x along the planar flow, in cancellation-free
    polynomial form: numerator y'-x' and denominator x' grouped in (x, u)."""
    num = (
        -2.0 * x**3
        + 2.0 * x**5
        + u * (-1.0 - 3.0 * x * x + 6.0 * x**4)
        + u * u * (6.0 * x**3 - x)
        + 2.0 * x * x * u**3
    )
    den = x**3 + u * (1.0 + x * x)
    return num / den


def bryant_unstable_curve(
    h: float = 1e-4,
    cfg: Optional[ode.IntegratorConfig] = None,
    verify_launch: bool = False,
) -> BryantCurve:
    """Trace the planar unstable-manifold curve from (1, 1/2) down to
    x = 1e-6.

    The launch point sits a distance h along the local expansion
    y = 1/2 - (1-x)/2 + (2/5)(1-x)^2 of the manifold.  Offsets beyond
    1e-3 leave the expansion's trust region and raise LaunchTooFar, as
    does leaving the monotone-descent region (x' < 0, y' < 0) en route.
    With ``verify_launch`` the trace is repeated at h/2 and the two
    curves must agree to 1e-6 after interpolation to a common x-grid.
    Only the tolerances of ``cfg`` are honored here; the stepping is
    delegated to a stiff solver because of the slow-manifold tail.
    """
    if not 0.0 < h <= 1e-3:
        raise LaunchTooFar(f"launch offset h={h:g} outside (0, 1e-3]")
    cfg = cfg or ode.IntegratorConfig(rtol=1e-10, atol=1e-12)
    x0 = 1.0 - h
    u0 = (0.5 - h / 2.0 + _QUAD_COEF * h * h) - x0
    grid = np.geomspace(x0, _X_CUTOFF, _N_NODES)
    sol = solve_ivp(
        _gap_slope,
        (x0, _X_CUTOFF),
        [u0],
        method="LSODA",
        t_eval=grid,
        rtol=cfg.rtol,
        atol=1e-24,
    )
    if sol.status != 0:
        raise LaunchTooFar(f"trace from h={h:g} failed: {sol.message}")
    u = sol.y[0]
    y = grid + u
    den = grid**3 + u * (1.0 + grid * grid)
    if np.any(den >= 0.0) or np.any(u >= 0.0) or np.any(np.diff(y) >= 0.0):
        raise LaunchTooFar(f"trace from h={h:g} left the monotone-descent region")
    curve = BryantCurve(grid, y, h, _EIG_DIRECTION)
    if verify_launch:
        half = bryant_unstable_curve(h / 2.0, cfg, verify_launch=False)
        probe = np.geomspace(1.0 - 2.0 * h, 1e-5, 400)
        gap = float(np.max(np.abs(curve.interp(probe) - half.interp(probe))))
        if gap > 1e-6:
            raise LaunchTooFar(f"h-halving disagreement {gap:.3g} > 1e-6 at h={h:g}")
    return curve


def verify_f_bounds(curve: BryantCurve) -> FBoundsReport:
    """Measure the four envelope bounds on the manifold curve.

    Lower bounds: f >= x/2 on [0, 1] and f >= x - x^2 on [0, 1/4].
    Upper bounds: f <= x/2 + (1-x)^2 on [3/4, 1] and f <= x on [0, 1].
    Margins are minima of the signed slack over the stated ranges; the
    report never asserts.
    """
    x, y = curve.x, curve.y
    in_cap = x <= 0.25
    in_shoulder = x >= 0.75
    return FBoundsReport(
        margin_ge_half_x=float(np.min(y - x / 2.0)),
        margin_le_half_x_plus_sq=float(
            np.min((x / 2.0 + (1.0 - x) ** 2 - y)[in_shoulder])
        ),
        margin_ge_x_minus_x2=float(np.min((y - (x - x * x))[in_cap])),
        margin_le_x=float(np.min(x - y)),
        y_at_x03=float(curve.interp(0.3)),
    )


def steady_reference(
    t_end: float = 1.0 / 9.0, cfg: Optional[ShootConfig] = None
) -> ode.Trajectory:
    """Reference steady shot: the four-field system at lam = 0 launched
    from the circle orbit with unit series parameter, integrated to t_end."""
    _, traj = shoot_curve_point(1.0, cfg, until=("time", t_end), lam=0.0)
    return traj


def bryant_smalltime(
    cfg: Optional[ShootConfig] = None, n: int = 500
) -> SmalltimeReport:
    """Check the small-time envelopes of the steady shot on [t_eps, 1/9].

    In z = 1/R and x = L2/R the bounds read
    sin(sqrt(6) t)/sqrt(6) <= z <= t and
    1 - 2 tan^2(sqrt(3/2) t) <= x <= 1 - 3 t^2 exp(-9 t^2).
    All four are tangent to the trajectory at t = 0, so the margins vanish
    toward the left endpoint; the report carries their grid minima.
    """
    traj = steady_reference(cfg=cfg)
    t = np.linspace(traj.t0, traj.t_end, n)
    states = np.array([traj.eval(tt) for tt in t])
    l2, r = states[:, 2], states[:, 3]
    z = 1.0 / r
    x = l2 / r
    sq6, sq15 = math.sqrt(6.0), math.sqrt(1.5)
    z_lo = np.sin(sq6 * t) / sq6
    x_lo = 1.0 - 2.0 * np.tan(sq15 * t) ** 2
    x_hi = 1.0 - 3.0 * t * t * np.exp(-9.0 * t * t)
    return SmalltimeReport(
        z_lower_margin=float(np.min(z - z_lo)),
        z_upper_margin=float(np.min(t - z)),
        x_lower_margin=float(np.min(x - x_lo)),
        x_upper_margin=float(np.min(x_hi - x)),
        z_end=float(z[-1]),
        x_end=float(x[-1]),
    )
