"""Adaptive Dormand-Prince 5(4) integration with dense output and event location.

The integrator is deliberately self-contained: the stepping loop, the blow-up
guard, the termination bookkeeping and the dense interpolant all live here so
that a trajectory is a plain, reproducible value object.  Running the same
integration twice produces bit-identical arrays.

Conventions
-----------
* integration runs forward only (t_end > t0); the singular-orbit problems in
  this package are all posed in a variable that increases away from the orbit.
* the right-hand side has signature ``rhs(t, y) -> ndarray`` and is assumed
  smooth on the trajectory's domain.
* dense evaluation at a stored node returns the stored sample exactly.

Termination reasons: ``"reached_end"``, ``"event"``, ``"blowup"``,
``"step_underflow"`` and (as a safety valve) ``"max_steps"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "IntegratorConfig",
    "Event",
    "EventHit",
    "Trajectory",
    "integrate",
    "locate_event",
]

# Dormand & Prince (1980) 5(4) pair.  C/A/B are the classical tableau; E is
# the difference between the 5th- and 4th-order weights; P gives the quartic
# dense-output interpolant (Shampine's coefficients, the ode45/solve_ivp one).
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
_A = (
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
)
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

# Gauss-Legendre 3-point rule on [0, 1]; exact for polynomials of degree <= 5,
# hence exact on the quartic dense interpolant.
_GL3_NODES = np.array([0.5 - math.sqrt(15) / 10, 0.5, 0.5 + math.sqrt(15) / 10])
_GL3_WEIGHTS = np.array([5 / 18, 8 / 18, 5 / 18])

ORDER = 5  # propagating order of the pair


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and guards for :func:`integrate`.

    ``fixed_step`` disables adaptivity entirely (every step is accepted with
    the given size); it exists for convergence-order measurements and should
    not be used in production runs.
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    max_step: float = math.inf
    first_step: Optional[float] = None
    max_steps: int = 500_000
    blowup_norm: float = 1e12
    fixed_step: Optional[float] = None


@dataclass(frozen=True)
class Event:
    """Scalar event function g(t, y); a root of g along the trajectory.

    direction: +1 only rising crossings, -1 only falling, 0 both.
    terminal: stop the integration at the first matching crossing.
    """

    fn: Callable[[float, np.ndarray], float]
    direction: int = 0
    terminal: bool = True
    name: str = ""


@dataclass(frozen=True)
class EventHit:
    t: float
    y: np.ndarray
    event_index: int
    name: str = ""


@dataclass
class Trajectory:
    """Accepted samples plus the per-step dense interpolant.

    ``t``/``y`` are the accepted nodes (shape (n,), (n, d)).  Segment i covers
    [t[i], t[i+1]] and carries coefficients ``dense_q[i]`` (d, 4) built over
    the original step ``dense_h[i]``; the two differ only on a final segment
    truncated by a terminal event.
    """

    t: np.ndarray
    y: np.ndarray
    dense_q: np.ndarray
    dense_h: np.ndarray
    termination: str
    event_hits: list[EventHit] = field(default_factory=list)
    n_rhs_evals: int = 0
    n_rejected: int = 0

    @property
    def t0(self) -> float:
        return float(self.t[0])

    @property
    def t_end(self) -> float:
        return float(self.t[-1])

    def _segment_index(self, t: float) -> int:
        if not (self.t[0] <= t <= self.t[-1]):
            raise ValueError(
                f"t={t!r} outside trajectory domain [{self.t[0]!r}, {self.t[-1]!r}]"
            )
        i = int(np.searchsorted(self.t, t, side="right") - 1)
        return min(max(i, 0), len(self.t) - 2)

    def _eval_segment(self, i: int, t: float) -> np.ndarray:
        theta = (t - self.t[i]) / self.dense_h[i]
        q = self.dense_q[i]
        # Horner form of y_i + h * (q0 th + q1 th^2 + q2 th^3 + q3 th^4)
        acc = q[:, 3]
        for j in (2, 1, 0):
            acc = acc * theta + q[:, j]
        return self.y[i] + self.dense_h[i] * theta * acc

    def eval(self, t):
        """Dense evaluation at scalar or array t inside the domain.

        Exact node times return the stored samples bitwise.
        """
        if np.ndim(t) == 0:
            tf = float(t)
            i = self._segment_index(tf)
            if tf == self.t[i]:
                return self.y[i].copy()
            if tf == self.t[i + 1]:
                return self.y[i + 1].copy()
            return self._eval_segment(i, tf)
        return np.array([self.eval(float(ti)) for ti in np.asarray(t).ravel()])

    def antiderivative(self, g: Callable[[float, np.ndarray], float]):
        """Cumulative integral of g(t, y(t)) along the trajectory.

        Gauss-Legendre 3 per segment, which integrates the dense interpolant
        exactly; returns (node_values, eval_fn) where node_values[i] is the
        integral from t[0] to t[i] and eval_fn works at arbitrary t.
        """

        def piece(i: int, a: float, b: float) -> float:
            if b <= a:
                return 0.0
            ts = a + (b - a) * _GL3_NODES
            vals = [g(float(tt), self._eval_segment(i, float(tt))) for tt in ts]
            return (b - a) * float(np.dot(_GL3_WEIGHTS, vals))

        n = len(self.t)
        node_vals = np.zeros(n)
        for i in range(n - 1):
            node_vals[i + 1] = node_vals[i] + piece(i, float(self.t[i]), float(self.t[i + 1]))

        def eval_fn(t: float) -> float:
            i = self._segment_index(float(t))
            return node_vals[i] + piece(i, float(self.t[i]), float(t))

        return node_vals, eval_fn


def _hairer_initial_step(rhs, t0, y0, f0, rtol, atol, max_step, span):
    """Standard starting-step heuristic (Hairer, Norsett & Wanner II.4)."""
    scale = atol + rtol * np.abs(y0)
    d0 = _rms(y0 / scale)
    d1 = _rms(f0 / scale)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, span)
    y1 = y0 + h0 * f0
    f1 = rhs(t0 + h0, y1)
    d2 = _rms((f1 - f0) / scale) / h0
    dmax = max(d1, d2)
    h1 = (0.01 / dmax) ** (1 / ORDER) if dmax > 1e-15 else max(1e-6, h0 * 1e-3)
    return min(100 * h0, h1, max_step, span)


def _rms(v: np.ndarray) -> float:
    return float(np.sqrt(np.mean(np.square(v))))


def _refine_crossing(traj_eval, gfn, ta, tb, ga, gb):
    """Root of g over [ta, tb] given a sign change; safeguarded hybrid."""
    if ga == 0.0:
        return ta
    if gb == 0.0:
        return tb

    def f(t):
        return gfn(t, traj_eval(t))

    return float(brentq(f, ta, tb, xtol=1e-15, rtol=8.9e-16, maxiter=200))


def _crossing_matches(ga, gb, direction) -> bool:
    if ga == gb:
        return False
    if ga * gb > 0 and gb != 0.0:
        return False
    if ga == 0.0:  # left endpoint already a root: not a new crossing
        return False
    if direction > 0:
        return ga < gb
    if direction < 0:
        return ga > gb
    return True


def integrate(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    t0: float,
    y0,
    t_end: float,
    config: Optional[IntegratorConfig] = None,
    events: Sequence[Event] = (),
) -> Trajectory:
    """Integrate y' = rhs(t, y) from t0 to t_end (forward only).

    Stops early on a terminal event, on the blow-up guard
    (max|y| >= blowup_norm), or on step-size underflow; the partial
    trajectory with its termination reason is returned in every case.
    """
    cfg = config or IntegratorConfig()
    y = np.array(y0, dtype=float)
    if y.ndim != 1:
        raise ValueError("y0 must be a 1-d state vector")
    t0 = float(t0)
    t_end = float(t_end)
    if not t_end > t0:
        raise ValueError("integration is forward only: t_end must exceed t0")

    f = np.asarray(rhs(t0, y), dtype=float)
    n_evals = 1
    if cfg.fixed_step is not None:
        h = min(cfg.fixed_step, t_end - t0)
    elif cfg.first_step is not None:
        h = min(cfg.first_step, t_end - t0, cfg.max_step)
    else:
        h = _hairer_initial_step(rhs, t0, y, f, cfg.rtol, cfg.atol, cfg.max_step, t_end - t0)
        n_evals += 1

    ts = [t0]
    ys = [y.copy()]
    qs: list[np.ndarray] = []
    hs: list[float] = []
    hits: list[EventHit] = []
    g_prev = [e.fn(t0, y) for e in events]

    t = t0
    termination = "reached_end"
    n_rejected = 0
    n_steps = 0
    K = np.empty((7, y.size))

    while t < t_end:
        n_steps += 1
        if n_steps > cfg.max_steps:
            termination = "max_steps"
            break
        h = min(h, cfg.max_step, t_end - t)
        if h < 10 * np.finfo(float).eps * max(abs(t), 1.0):
            termination = "step_underflow"
            break

        K[0] = f
        for s in range(1, 6):
            K[s] = rhs(t + _C[s] * h, y + h * (_A[s] @ K[:s]))
        y_new = y + h * (_B @ K[:6])
        t_new = t + h
        K[6] = rhs(t_new, y_new)
        n_evals += 6

        if cfg.fixed_step is None:
            err = h * (_E @ K)
            scale = cfg.atol + cfg.rtol * np.maximum(np.abs(y), np.abs(y_new))
            with np.errstate(invalid="ignore", divide="ignore"):
                err_norm = _rms(err / scale)
            if not np.isfinite(err_norm):
                err_norm = math.inf
            if err_norm > 1.0:
                n_rejected += 1
                factor = max(0.2, 0.9 * err_norm ** (-1 / ORDER)) if np.isfinite(err_norm) else 0.2
                h *= min(factor, 1.0)
                continue
            factor = min(10.0, 0.9 * max(err_norm, 1e-10) ** (-1 / ORDER))
        else:
            factor = 1.0

        q = K.T @ _P  # (d, 4) dense coefficients over this step
        seg_t0, seg_h = t, h

        def seg_eval(tt: float) -> np.ndarray:
            theta = (tt - seg_t0) / seg_h
            acc = q[:, 3]
            for j in (2, 1, 0):
                acc = acc * theta + q[:, j]
            return ys[-1] + seg_h * theta * acc

        terminal_hit = None
        if events:
            # check a few interior dense points so tight double crossings
            # inside one step are still seen
            probe_ts = [seg_t0 + frac * seg_h for frac in (0.25, 0.5, 0.75)] + [t_new]
            for ei, e in enumerate(events):
                ga, ta = g_prev[ei], seg_t0
                for tb in probe_ts:
                    gb = e.fn(tb, y_new if tb == t_new else seg_eval(tb))
                    if _crossing_matches(ga, gb, e.direction):
                        t_star = _refine_crossing(seg_eval, e.fn, ta, tb, ga, gb)
                        y_star = seg_eval(t_star) if t_star != t_new else y_new.copy()
                        hit = EventHit(t=t_star, y=y_star, event_index=ei, name=e.name)
                        if e.terminal and (terminal_hit is None or t_star < terminal_hit.t):
                            terminal_hit = hit
                        elif not e.terminal:
                            hits.append(hit)
                        break
                    ga, ta = gb, tb
                g_prev[ei] = e.fn(t_new, y_new)

        if terminal_hit is not None:
            ts.append(terminal_hit.t)
            ys.append(terminal_hit.y)
            qs.append(q)
            hs.append(seg_h)
            hits.append(terminal_hit)
            termination = "event"
            break

        ts.append(t_new)
        ys.append(y_new.copy())
        qs.append(q)
        hs.append(seg_h)
        t, y, f = t_new, y_new, K[6].copy()  # FSAL
        h *= factor

        if np.max(np.abs(y)) >= cfg.blowup_norm or not np.all(np.isfinite(y)):
            termination = "blowup"
            break

    traj = Trajectory(
        t=np.array(ts),
        y=np.array(ys),
        dense_q=np.array(qs) if qs else np.zeros((0, y.size, 4)),
        dense_h=np.array(hs),
        termination=termination,
        event_hits=hits,
        n_rhs_evals=n_evals,
        n_rejected=n_rejected,
    )
    return traj


def locate_event(
    traj: Trajectory,
    fn: Callable[[float, np.ndarray], float],
    direction: int = 0,
    which: str = "first",
    subdiv: int = 8,
    name: str = "",
) -> Optional[EventHit]:
    """Locate a crossing of g(t, y(t)) = 0 on a stored trajectory.

    Each segment is probed at ``subdiv`` dense points before refinement, so
    crossings that reverse within one step are still caught.  Returns the
    first or last matching hit, or None when there is no crossing.
    """
    if which not in ("first", "last"):
        raise ValueError("which must be 'first' or 'last'")
    found: list[EventHit] = []
    fracs = np.linspace(0.0, 1.0, subdiv + 1)[1:]
    for i in range(len(traj.t) - 1):
        t_left = float(traj.t[i])
        t_right = float(traj.t[i + 1])
        ta, ga = t_left, fn(t_left, traj.y[i])
        for frac in fracs:
            tb = min(t_left + frac * (t_right - t_left), t_right)
            yb = traj.y[i + 1] if tb == t_right else traj._eval_segment(i, tb)
            gb = fn(tb, yb)
            if _crossing_matches(ga, gb, direction):
                t_star = _refine_crossing(lambda tt: traj._eval_segment(i, tt), fn, ta, tb, ga, gb)
                y_star = traj.eval(t_star)
                found.append(EventHit(t=t_star, y=y_star, event_index=-1, name=name))
                if which == "first":
                    return found[0]
                break
            ga, ta = gb, tb
    if not found:
        return None
    return found[-1]
