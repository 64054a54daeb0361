"""Two-sided shooting for the reduced soliton system.

A candidate soliton is assembled from two initial value problems, one started
just off each singular orbit by a short odd-parity series:

* the circle-orbit side is a one-parameter family (``delta1``), integrated
  forward in arc length t;
* the sphere-orbit side is a two-parameter family (``delta2``, ``delta3``),
  integrated in the distance s from the orbit, which runs backwards in t, so
  the field is negated.

Both trajectories are stopped at the unique xi = 0 crossing and compared
there.  The componentwise difference of the two crossing states (L1, L2, R)
is the mismatch map; its zeroes are the solitons.  The module also provides
the damped-Newton root finder and the coarse domain scan used to look for
zeroes away from the known round solution.

Failed shots inside sweeps are recorded, not raised: the large-delta1 regime
legitimately stresses the integrator and the failure boundary is data.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    EpsilonTooLarge,
    EventNotReached,
    InadmissibleParameters,
    MaxIterations,
    ShootFailure,
    SingularJacobian,
)
from .fields import (
    SolitonState,
    as_field,
    curvature_eigs_grid,
    family_rhs,
)
from .ode import Event, IntegratorConfig, Trajectory, integrate

__all__ = [
    "ROUND_DELTAS",
    "ShootConfig",
    "MeetPoint",
    "MismatchVector",
    "RootResult",
    "CurveSample",
    "SurfaceSample",
    "ScanMinimum",
    "ScanResult",
    "s1_series_state",
    "s2_series_state",
    "check_admissible",
    "shoot_curve_point",
    "shoot_surface_point",
    "mismatch",
    "find_root",
    "sample_curve",
    "sample_surface",
    "scan_domain",
]

ROUND_DELTAS = (1 / 18, -7 / 9, 1 / math.sqrt(3))


@dataclass(frozen=True)
class ShootConfig:
    """Knobs shared by every shooting operation.

    ``t_eps`` is the series handoff distance on both sides (auto-shrunk for
    large parameters, never enlarged).  ``horizon`` caps the independent
    variable when waiting for an event.  ``exploratory`` lifts the
    admissibility preconditions delta1 >= 0, delta2 >= -1, delta3 >= 0.
    """

    t_eps: float = 1e-4
    rtol: float = 1e-10
    atol: float = 1e-12
    max_steps: int = 500_000
    horizon: float = 1e6
    collapse_l1: float = -1e6
    collapse_r: float = 1e6
    exploratory: bool = False

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(rtol=self.rtol, atol=self.atol, max_steps=self.max_steps)


class MeetPoint(NamedTuple):
    """(L1, L2, R) at the xi = 0 crossing; r > 0 on principal orbits."""

    l1: float
    l2: float
    r: float


class MismatchVector(NamedTuple):
    """Componentwise circle-side minus sphere-side MeetPoint difference."""

    dl1: float
    dl2: float
    dr: float

    @property
    def inf_norm(self) -> float:
        return max(abs(self.dl1), abs(self.dl2), abs(self.dr))


class RootResult(NamedTuple):
    root: tuple
    residual: float
    iterations: int


class CurveSample(NamedTuple):
    delta1: float
    meet: Optional[MeetPoint]
    eig_min: Optional[tuple]
    status: str


class SurfaceSample(NamedTuple):
    delta2: float
    delta3: float
    meet: Optional[MeetPoint]
    status: str


class ScanMinimum(NamedTuple):
    """One grid-local minimum of |F|_inf, possibly a plateau of tied nodes.

    ``indices``/``delta*`` give the representative node (lowest index tuple);
    ``n_nodes`` counts the equal-value connected component it stands for and
    ``index_span`` is that component's inclusive index bounding box.
    """

    indices: tuple
    delta1: float
    delta2: float
    delta3: float
    value: float
    n_nodes: int
    index_span: tuple


@dataclass
class ScanResult:
    axes: tuple
    values: np.ndarray
    minima: list
    grid_bound: float
    n_failed: int

    def region_contains(self, m: ScanMinimum, d1: float, d2: float, d3: float) -> bool:
        """Whether a parameter point lies in the half-cell neighborhood of a
        reported minimum's plateau (the region the minimum speaks for)."""
        point = (d1, d2, d3)
        for ax, (lo, hi) in enumerate(m.index_span):
            nodes = self.axes[ax]
            half = 0.5 * (nodes[1] - nodes[0]) if len(nodes) > 1 else math.inf
            if not (nodes[lo] - half <= point[ax] <= nodes[hi] + half):
                return False
        return True


def _check_eps(eps: float) -> None:
    if not (0.0 < eps <= 1e-3):
        raise EpsilonTooLarge(
            f"series handoff {eps!r} outside (0, 1e-3]; truncation is O(eps^3) "
            "only on that range"
        )


def s1_series_state(delta1: float, t_eps: float, lam: float = 1.0) -> SolitonState:
    """Order-1 series state at distance t_eps from the circle orbit.

    xi = 2/t + (8 d1 - lam) t,  L1 = -(lam/3) t,
    L2 = 1/t - 2 d1 t,          R = 1/t + d1 t.

    All four reduced functions are odd in t, so the truncation error is
    O(t_eps^3).  ``lam`` selects the family member (1 = shrinking, 0 =
    steady, p^2 = rescaled).
    """
    _check_eps(t_eps)
    t = t_eps
    return SolitonState(
        xi=2.0 / t + (8.0 * delta1 - lam) * t,
        l1=-(lam / 3.0) * t,
        l2=1.0 / t - 2.0 * delta1 * t,
        r=1.0 / t + delta1 * t,
    )


def s2_series_state(delta2: float, delta3: float, s_eps: float) -> SolitonState:
    """Order-2 series state at distance s_eps from the sphere orbit.

    -xi = 1/s + d2 s,            -L1 = 1/s - ((d2+1)/2) s,
    -L2 = ((d3^2-1)/2) s,         R  = d3 - (d3 (d3^2-1)/4) s^2,

    with truncation O(s_eps^3).  The formulas stay regular at d3 = 1 (the
    slope of L2 simply vanishes there) and reproduce the exact Gaussian at
    (d2, d3) = (-1, 1).
    """
    _check_eps(s_eps)
    s = s_eps
    return SolitonState(
        xi=-(1.0 / s + delta2 * s),
        l1=-(1.0 / s - 0.5 * (delta2 + 1.0) * s),
        l2=-0.5 * (delta3 * delta3 - 1.0) * s,
        r=delta3 - 0.25 * delta3 * (delta3 * delta3 - 1.0) * s * s,
    )


def _s1_start(delta1: float, t: float, lam: float) -> np.ndarray:
    """Internal order-3 refinement of ``s1_series_state``.

    The extra odd terms cost nothing and matter: the order-1 handoff error,
    projected on the delta1 direction (which vanishes like t at the orbit),
    shifts the meet by ~1e-8 at t = 1e-3.  Coefficients were obtained by
    matching powers of t in the family field and cross-checked against the
    closed-form round trajectory (they reduce to the cot/tan/csc Taylor
    coefficients at delta1 = 1/18, lam = 1).
    """
    c3 = (124 / 25) * delta1**2 - (12 / 25) * lam * delta1 + (2 / 225) * lam**2
    d3 = 0.5 * delta1**2 - 0.25 * c3
    a3 = -(lam**2) / 27 - (8 / 3) * delta1**2 - (4 / 3) * c3
    b3 = lam * (8 * delta1 - lam) / 15
    t3 = t**3
    base = s1_series_state(delta1, t, lam=lam)
    return np.array(base) + np.array([a3, b3, c3, d3]) * t3


def _s2_start(delta2: float, delta3: float, s: float) -> np.ndarray:
    """Internal next-order refinement of ``s2_series_state`` (same reason)."""
    mu = 0.5 * (delta2 + 1.0)
    nu = 0.5 * (1.0 - delta3 * delta3)
    a3 = (2 * mu * mu + 4 * nu * nu + delta2 * mu) / 5.0
    b3 = (-delta2 * mu - a3) / 4.0
    c3 = -nu * (delta2 + delta3 * delta3) / 4.0
    r4 = delta3 * (c3 + 0.5 * nu * nu) / 4.0
    base = s2_series_state(delta2, delta3, s)
    return np.array(base) + np.array([a3, b3, c3, r4 * s]) * s**3


def check_admissible(
    delta1: Optional[float] = None,
    delta2: Optional[float] = None,
    delta3: Optional[float] = None,
    exploratory: bool = False,
) -> None:
    """Enforce delta1 >= 0, delta2 >= -1, delta3 >= 0 unless exploratory."""
    if exploratory:
        return
    bad = []
    if delta1 is not None and delta1 < 0.0:
        bad.append(f"delta1 = {delta1!r} < 0")
    if delta2 is not None and delta2 < -1.0:
        bad.append(f"delta2 = {delta2!r} < -1")
    if delta3 is not None and delta3 < 0.0:
        bad.append(f"delta3 = {delta3!r} < 0")
    if bad:
        raise InadmissibleParameters(
            "; ".join(bad) + " (pass exploratory to integrate anyway)"
        )


def _effective_eps(eps: float, *coeffs: float) -> float:
    """Shrink the handoff so the series correction stays ~1e-4 relative.

    The order-1 terms carry coefficients growing with the parameters, so the
    expansion is trustworthy only while max|coeff| * eps^2 is small.
    """
    big = max(1.0, *(abs(c) for c in coeffs))
    return min(eps, 1e-2 / math.sqrt(big))


def _stop_events(until, side: str, cfg: ShootConfig):
    if until == "meet":
        direction = -1 if side == "s1" else +1
        return [Event(fn=lambda t, y: y[0], direction=direction, terminal=True, name="xi=0")]
    if until == "collapse":
        if side == "s1":
            return [
                Event(
                    fn=lambda t, y: y[1] - cfg.collapse_l1,
                    direction=-1,
                    terminal=True,
                    name="l1_collapse",
                )
            ]
        return [
            Event(
                fn=lambda t, y: y[3] - cfg.collapse_r,
                direction=+1,
                terminal=True,
                name="r_collapse",
            )
        ]
    if isinstance(until, tuple) and len(until) == 2 and until[0] == "xi":
        level = float(until[1])
        return [
            Event(fn=lambda t, y: y[0] - level, direction=0, terminal=True, name=f"xi={level:g}")
        ]
    if isinstance(until, tuple) and len(until) == 2 and until[0] == "time":
        return []
    raise ValueError(f"unknown stop rule {until!r}")


def _shoot(y0: SolitonState, t0: float, side: str, until, cfg: ShootConfig, lam: float):
    if side == "s1":
        field = as_field(lambda v: family_rhs(v, lam))
    else:
        # the sphere side runs in s = (orbit time) - t, so the field reverses
        field = as_field(lambda v: -family_rhs(v, lam))
    events = _stop_events(until, side, cfg)
    t_end = float(until[1]) if isinstance(until, tuple) and until[0] == "time" else cfg.horizon
    traj = integrate(field, t0, np.array(y0), t_end, cfg.integrator(), events=events)
    if events and traj.termination != "event":
        raise EventNotReached(
            f"{side} shot never reached {events[0].name}: stopped by "
            f"{traj.termination} at t={traj.t_end:.6g}, state={traj.y[-1]!r}"
        )
    if not events and traj.termination != "reached_end":
        raise EventNotReached(
            f"{side} shot stopped by {traj.termination} at t={traj.t_end:.6g} "
            f"before the requested time {t_end:g}"
        )
    return traj


def _meet_from(traj: Trajectory) -> MeetPoint:
    y = traj.y[-1]
    return MeetPoint(l1=float(y[1]), l2=float(y[2]), r=float(y[3]))


def shoot_curve_point(
    delta1: float,
    cfg: Optional[ShootConfig] = None,
    until="meet",
    lam: float = 1.0,
):
    """Integrate the circle-side IVP; returns (MeetPoint, Trajectory).

    By default stops at the xi = 0 crossing (which exists for every shrinking
    shot since xi' <= -1).  Other stop rules: "collapse" (L1 reaches the
    configured floor, i.e. the far orbit), ("xi", v), ("time", T).  The
    MeetPoint is simply the final state's (L1, L2, R) under any rule.
    """
    cfg = cfg or ShootConfig()
    check_admissible(delta1=delta1, exploratory=cfg.exploratory)
    t0 = _effective_eps(cfg.t_eps, delta1)
    y0 = _s1_start(delta1, t0, lam)
    traj = _shoot(y0, t0, "s1", until, cfg, lam)
    return _meet_from(traj), traj


def shoot_surface_point(
    delta2: float,
    delta3: float,
    cfg: Optional[ShootConfig] = None,
    until="meet",
):
    """Integrate the sphere-side IVP in the orbit distance s.

    The trajectory's independent variable increases away from the sphere
    orbit (backwards in the original time), so xi rises from -1/s_eps toward
    the meet.  Stop rules as in ``shoot_curve_point``; ("xi", v) with v > 0
    continues past the xi = 0 orbit into the region the Gaussian-closeness
    diagnostics examine.
    """
    cfg = cfg or ShootConfig()
    check_admissible(delta2=delta2, delta3=delta3, exploratory=cfg.exploratory)
    s0 = _effective_eps(cfg.t_eps, delta2, delta3)
    y0 = _s2_start(delta2, delta3, s0)
    traj = _shoot(y0, s0, "s2", until, cfg, lam=1.0)
    return _meet_from(traj), traj


def mismatch(
    delta1: float, delta2: float, delta3: float, cfg: Optional[ShootConfig] = None
) -> MismatchVector:
    """Circle-side minus sphere-side MeetPoint; zero exactly on solitons."""
    m1, _ = shoot_curve_point(delta1, cfg)
    m2, _ = shoot_surface_point(delta2, delta3, cfg)
    return MismatchVector(m1.l1 - m2.l1, m1.l2 - m2.l2, m1.r - m2.r)


def _mismatch_vec(params: np.ndarray, cfg: ShootConfig) -> np.ndarray:
    try:
        return np.array(mismatch(params[0], params[1], params[2], cfg))
    except (EventNotReached, InadmissibleParameters) as exc:
        raise ShootFailure(
            f"shot failed at (d1, d2, d3) = {tuple(params)!r}: {exc}", params=tuple(params)
        ) from exc


def _clip_admissible(p: np.ndarray) -> np.ndarray:
    return np.maximum(p, [0.0, -1.0, 0.0])


def find_root(
    guess: Sequence[float],
    cfg: Optional[ShootConfig] = None,
    tol: float = 1e-7,
    max_iter: int = 25,
    fd_step: float = 1e-6,
) -> RootResult:
    """Damped Newton iteration on the mismatch map.

    The Jacobian comes from forward differences with relative step
    ``fd_step``; each Newton step is halved (up to 20 times) until the
    residual sup-norm decreases.  Iterates are kept inside the admissible
    region unless the config is exploratory.  Convergence means
    |F|_inf < tol; the default tol sits above the ~1e-8 floor that the
    two integrations impose on the mismatch at default tolerances (Newton
    typically lands near 1e-8 anyway on its final step).
    """
    cfg = cfg or ShootConfig()
    p = np.array(guess, dtype=float)
    if p.shape != (3,):
        raise ValueError("guess must be (delta1, delta2, delta3)")
    check_admissible(*p, exploratory=cfg.exploratory)

    F = _mismatch_vec(p, cfg)
    res = float(np.max(np.abs(F)))
    best = (p.copy(), res)
    for it in range(max_iter):
        if res < tol:
            return RootResult(root=tuple(p), residual=res, iterations=it)
        J = np.empty((3, 3))
        for j in range(3):
            h = fd_step * max(1.0, abs(p[j]))
            pj = p.copy()
            pj[j] += h
            if not cfg.exploratory:
                pj = _clip_admissible(pj)
            J[:, j] = (_mismatch_vec(pj, cfg) - F) / (pj[j] - p[j])
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError as exc:
            raise SingularJacobian(
                f"Jacobian singular at {tuple(p)!r} (iteration {it})",
                result=RootResult(tuple(best[0]), best[1], it),
            ) from exc

        damp = 1.0
        for _ in range(21):
            trial = p + damp * step
            if not cfg.exploratory:
                trial = _clip_admissible(trial)
            F_new = _mismatch_vec(trial, cfg)
            res_new = float(np.max(np.abs(F_new)))
            if res_new < res:
                break
            damp *= 0.5
        else:
            raise MaxIterations(
                f"no decrease after 20 halvings at {tuple(p)!r}, residual {res:.3e}",
                result=RootResult(tuple(best[0]), best[1], it + 1),
            )
        p, F, res = trial, F_new, res_new
        if res < best[1]:
            best = (p.copy(), res)

    if res < tol:
        return RootResult(root=tuple(p), residual=res, iterations=max_iter)
    raise MaxIterations(
        f"residual {res:.3e} still above tol {tol:g} after {max_iter} iterations",
        result=RootResult(tuple(best[0]), best[1], max_iter),
    )


def _eig_minima(traj: Trajectory) -> tuple:
    """Minimum of each curvature eigenvalue over nodes and segment midpoints."""
    mids = 0.5 * (traj.t[:-1] + traj.t[1:])
    states = np.vstack([traj.y, traj.eval(mids)])
    return tuple(float(v) for v in curvature_eigs_grid(states).min(axis=0))


def _map_jobs(fn, jobs: list, workers: int) -> list:
    """Evaluate independent node jobs, optionally across processes.

    Results come back in job order either way, so the assembled output is
    identical for any worker count.
    """
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


def _curve_node(job) -> CurveSample:
    d1, cfg = job
    try:
        meet, traj = shoot_curve_point(d1, cfg)
        return CurveSample(d1, meet, _eig_minima(traj), "ok")
    except (EventNotReached, InadmissibleParameters) as exc:
        return CurveSample(d1, None, None, f"failed: {exc}")


def sample_curve(
    d1_range: Sequence[float],
    n: int,
    cfg: Optional[ShootConfig] = None,
    workers: int = 1,
) -> list:
    """Log-uniform sweep of the circle-side meet map over ``d1_range``.

    Each record carries the MeetPoint and the per-eigenvalue trajectory
    minima; failed shots keep their slot with the failure reason in
    ``status``.
    """
    cfg = cfg or ShootConfig()
    lo, hi = float(d1_range[0]), float(d1_range[1])
    if n < 2:
        raise ValueError("need n >= 2 samples")
    if not (0.0 < lo < hi):
        raise ValueError("log-uniform sweep needs 0 < lo < hi")
    jobs = [(float(d1), cfg) for d1 in np.geomspace(lo, hi, n)]
    return _map_jobs(_curve_node, jobs, workers)


def _surface_node(job) -> SurfaceSample:
    d2, d3, cfg = job
    try:
        meet, _ = shoot_surface_point(d2, d3, cfg)
        return SurfaceSample(d2, d3, meet, "ok")
    except (EventNotReached, InadmissibleParameters) as exc:
        return SurfaceSample(d2, d3, None, f"failed: {exc}")


def sample_surface(
    d2_range: Sequence[float],
    d3_range: Sequence[float],
    n2: int,
    n3: int,
    cfg: Optional[ShootConfig] = None,
    workers: int = 1,
) -> list:
    """Uniform n2 x n3 sweep of the sphere-side meet map."""
    cfg = cfg or ShootConfig()
    if n2 < 2 or n3 < 2:
        raise ValueError("need at least a 2 x 2 grid")
    jobs = [
        (float(d2), float(d3), cfg)
        for d2 in np.linspace(float(d2_range[0]), float(d2_range[1]), n2)
        for d3 in np.linspace(float(d3_range[0]), float(d3_range[1]), n3)
    ]
    return _map_jobs(_surface_node, jobs, workers)


DEFAULT_SCAN_BOX = ((0.0, 10.0), (-1.0, 0.0), (0.0, 40.0))


def _scan_curve_node(job):
    d1, cfg = job
    try:
        meet, _ = shoot_curve_point(d1, cfg)
        return tuple(meet)
    except (EventNotReached, InadmissibleParameters):
        return None


def _scan_surface_node(job):
    d2, d3, cfg = job
    try:
        meet, _ = shoot_surface_point(d2, d3, cfg)
        return tuple(meet)
    except (EventNotReached, InadmissibleParameters):
        return None


def scan_domain(
    box=DEFAULT_SCAN_BOX,
    resolution=20,
    cfg: Optional[ShootConfig] = None,
    workers: int = 1,
) -> ScanResult:
    """Grid scan of |F|_inf over a parameter box, reporting grid-local minima.

    The mismatch separates into a curve part (delta1 only) and a surface part
    (delta2, delta3), so an n^3 grid needs only n + n^2 shots.  A node is a
    reported minimum when its value does not exceed any of its 26 neighbors
    in a grid extended by one ghost node beyond each face: a computable
    ghost vetoes a face node that merely continues a descent out of the box,
    while a ghost that is inadmissible or fails stands as a +inf wall, so
    genuine boundary minima survive.  ``grid_bound`` is the largest
    single-cell variation of |F|_inf along any axis inside the box: a
    minimum below it is indistinguishable from a zero at this resolution,
    one above it is a certified non-zero at the visited nodes.  Failed
    shots enter as +inf and are excluded from minima and from the bound;
    ``n_failed`` counts them over the requested box only.
    """
    cfg = cfg or ShootConfig()
    if np.isscalar(resolution):
        resolution = (int(resolution),) * 3
    n1, n2, n3 = (int(r) for r in resolution)
    if min(n1, n2, n3) < 2:
        raise ValueError("resolution must be >= 2 per axis")
    (a1, b1), (a2, b2), (a3, b3) = box
    d1s = np.linspace(a1, b1, n1)
    d2s = np.linspace(a2, b2, n2)
    d3s = np.linspace(a3, b3, n3)

    def extend(nodes, lo, hi, n):
        h = (hi - lo) / (n - 1)
        return np.concatenate(([lo - h], nodes, [hi + h]))

    d1x = extend(d1s, a1, b1, n1)
    d2x = extend(d2s, a2, b2, n2)
    d3x = extend(d3s, a3, b3, n3)
    m2, m3 = n2 + 2, n3 + 2

    curve_results = _map_jobs(
        _scan_curve_node, [(float(d1), cfg) for d1 in d1x], workers
    )
    surf_results = _map_jobs(
        _scan_surface_node,
        [(float(d2), float(d3), cfg) for d2 in d2x for d3 in d3x],
        workers,
    )
    inner = curve_results[1:-1] + [
        surf_results[j * m3 + k] for j in range(1, m2 - 1) for k in range(1, m3 - 1)
    ]
    n_failed = sum(1 for m in inner if m is None)
    curve_meets = np.full((n1 + 2, 3), np.nan)
    for i, m in enumerate(curve_results):
        if m is not None:
            curve_meets[i] = m
    surf_meets = np.full((m2, m3, 3), np.nan)
    for idx, m in enumerate(surf_results):
        if m is not None:
            surf_meets[idx // m3, idx % m3] = m

    diff = curve_meets[:, None, None, :] - surf_meets[None, :, :, :]
    values_ext = np.max(np.abs(diff), axis=-1)
    values_ext = np.where(np.isnan(values_ext), np.inf, values_ext)
    values = values_ext[1:-1, 1:-1, 1:-1]

    min_nodes = set()
    for i in range(n1):
        for j in range(n2):
            for k in range(n3):
                v = values[i, j, k]
                if not np.isfinite(v):
                    continue
                neigh = values_ext[i : i + 3, j : j + 3, k : k + 3]
                if v <= neigh.min():
                    min_nodes.add((i, j, k))

    # merge 26-connected equal-value minima: a flat plateau (e.g. where one
    # mismatch component dominates identically along a degenerate axis) is a
    # single minimum, not one per node
    minima = []
    remaining = set(min_nodes)
    while remaining:
        seed = min(remaining)
        comp = {seed}
        frontier = [seed]
        vseed = values[seed]
        while frontier:
            i, j, k = frontier.pop()
            for di in (-1, 0, 1):
                for dj in (-1, 0, 1):
                    for dk in (-1, 0, 1):
                        nb = (i + di, j + dj, k + dk)
                        if nb in remaining and nb not in comp and values[nb] == vseed:
                            comp.add(nb)
                            frontier.append(nb)
        remaining -= comp
        rep = min(comp)
        arr = np.array(sorted(comp))
        span = tuple((int(arr[:, ax].min()), int(arr[:, ax].max())) for ax in range(3))
        minima.append(
            ScanMinimum(
                indices=rep,
                delta1=float(d1s[rep[0]]),
                delta2=float(d2s[rep[1]]),
                delta3=float(d3s[rep[2]]),
                value=float(vseed),
                n_nodes=len(comp),
                index_span=span,
            )
        )
    minima.sort(key=lambda m: m.value)

    finite = np.where(np.isfinite(values), values, np.nan)
    grid_bound = 0.0
    for axis in range(3):
        step = np.abs(np.diff(finite, axis=axis))
        if np.any(np.isfinite(step)):
            grid_bound = max(grid_bound, float(np.nanmax(step)))

    return ScanResult(
        axes=(d1s, d2s, d3s),
        values=values,
        minima=minima,
        grid_bound=grid_bound,
        n_failed=n_failed,
    )
