"""Floating-point trajectories, Lyapunov monitors and the level sets of W.

Everything here is double precision.  The integrator is the Dormand-Prince
5(4) pair with the usual PI-free step-size controller.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

from .algebra import Poly
from .systems import DecomposedField, float_field

FloatField = Callable[[float, float], Tuple[float, float]]
FloatScalar = Callable[[float, float], float]

CONVERGED, T_MAX, STEP_LIMIT, BLOW_UP = "converged", "t_max_reached", "step_limit", "blow_up"

CONVERGE_RADIUS = 1e-8
BLOW_UP_RADIUS = 1e8

# Dormand-Prince tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))


@dataclass
class IntegratorConfig:
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    h_init: float = 1e-3
    h_max: float = 0.5
    t_max: float = 50.0
    max_steps: int = 1_000_000

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "h_init", "h_max", "t_max", "max_steps"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class TrajectoryRecord:
    samples: List[Tuple[float, float, float, float]] = field(default_factory=list)
    status: str = T_MAX

    @property
    def final(self) -> Tuple[float, float]:
        return self.samples[-1][1], self.samples[-1][2]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "x", "y", "W"])
            for row in self.samples:
                w.writerow([f"{v:.17g}" for v in row])


def as_float_field(f) -> FloatField:
    if isinstance(f, DecomposedField):
        return float_field(f.full)
    if isinstance(f, tuple) and len(f) == 2 and isinstance(f[0], Poly):
        return float_field(f)
    if callable(f):
        return f
    raise TypeError("field must be a DecomposedField, a pair of Poly or a callable")


def _dp_step(f: FloatField, x: float, y: float, h: float, k1):
    ks = [k1]
    for s in range(1, 7):
        a = _A[s]
        xs = x + h * sum(a[j] * ks[j][0] for j in range(s))
        ys = y + h * sum(a[j] * ks[j][1] for j in range(s))
        ks.append(f(xs, ys))
    xn = x + h * sum(b * k[0] for b, k in zip(_B5, ks))
    yn = y + h * sum(b * k[1] for b, k in zip(_B5, ks))
    ex = h * sum(e * k[0] for e, k in zip(_E, ks))
    ey = h * sum(e * k[1] for e, k in zip(_E, ks))
    return xn, yn, ex, ey, ks[6]


def _error_norm(x, y, xn, yn, ex, ey, cfg: IntegratorConfig) -> float:
    sx = cfg.abs_tol + cfg.rel_tol * max(abs(x), abs(xn))
    sy = cfg.abs_tol + cfg.rel_tol * max(abs(y), abs(yn))
    return math.sqrt(((ex / sx) ** 2 + (ey / sy) ** 2) / 2)


def _finite(*vals) -> bool:
    return all(math.isfinite(v) for v in vals)


def _stepper(f: FloatField, x0: Tuple[float, float], cfg: IntegratorConfig,
             t_end: Optional[float] = None):
    """Yield accepted steps ``(t, x, y, h, x_prev, y_prev, k1_prev)``; raise on trouble."""
    t, (x, y) = 0.0, x0
    k1 = f(x, y)
    speed = math.hypot(*k1)
    h = cfg.h_init
    if speed > 0:
        h = min(h, 0.01 * max(math.hypot(x, y), cfg.abs_tol) / speed)
    h = min(h, cfg.h_max)
    while True:
        h = min(h, cfg.h_max)
        if t_end is not None:
            h = min(h, t_end - t)
        xn, yn, ex, ey, k7 = _dp_step(f, x, y, h, k1)
        if not _finite(xn, yn, ex, ey):
            if h < 1e-300:
                raise OverflowError("non-finite state")
            h *= 0.1
            continue
        err = _error_norm(x, y, xn, yn, ex, ey, cfg)
        if err <= 1.0:
            xp, yp, k1p = x, y, k1
            t, x, y, k1 = t + h, xn, yn, k7
            yield t, x, y, h, xp, yp, k1p
            fac = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
        h *= fac
        if h < 1e-15 * max(1.0, abs(t)):
            raise FloatingPointError("step size underflow")


def integrate(f, x0: Sequence[float], config: Optional[IntegratorConfig] = None,
              lyap: Optional[FloatScalar] = None) -> TrajectoryRecord:
    """Integrate ``f`` from ``x0``, recording every accepted step.

    ``lyap`` gives the W column; without it the squared norm is recorded.
    """
    cfg = config or IntegratorConfig()
    fn = as_float_field(f)
    W = lyap or (lambda x, y: x * x + y * y)
    x, y = float(x0[0]), float(x0[1])
    if not _finite(x, y):
        raise ValueError("initial state must be finite")
    rec = TrajectoryRecord([(0.0, x, y, W(x, y))])
    if math.hypot(x, y) < CONVERGE_RADIUS:
        rec.status = CONVERGED
        return rec
    steps = 0
    try:
        for t, x, y, *_ in _stepper(fn, (x, y), cfg, cfg.t_max):
            steps += 1
            if not _finite(x, y) or math.hypot(x, y) > BLOW_UP_RADIUS:
                rec.status = BLOW_UP
                return rec
            rec.samples.append((t, x, y, W(x, y)))
            if math.hypot(x, y) < CONVERGE_RADIUS:
                rec.status = CONVERGED
                return rec
            if t >= cfg.t_max:
                rec.status = T_MAX
                return rec
            if steps >= cfg.max_steps:
                rec.status = STEP_LIMIT
                return rec
    except OverflowError:
        rec.status = BLOW_UP
    except FloatingPointError:
        rec.status = STEP_LIMIT
    return rec


@dataclass
class DecreaseMonitor:
    monotone: bool
    worst_violation: float


DECREASE_TOL = 1e-9


def monitor_decrease(traj: TrajectoryRecord) -> DecreaseMonitor:
    """Relative worst increase of W between consecutive samples."""
    worst = 0.0
    ws = [s[3] for s in traj.samples]
    for w0, w1 in zip(ws, ws[1:]):
        worst = max(worst, (w1 - w0) / max(1.0, w0))
    return DecreaseMonitor(worst <= DECREASE_TOL, worst)


# ---------------------------------------------------------------------------

@dataclass
class PeriodicOrbit:
    period: float
    closure_error: float
    W_drift: float
    samples: List[Tuple[float, float, float, float]] = field(default_factory=list)


def paper_w(x: float, y: float) -> float:
    r2 = x * x + y * y
    return 0.0 if r2 == 0.0 else (x**4 + y**4) / r2


ORBIT_CONFIG = IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13, h_max=0.05)


def periodic_orbit_check(f0, start: Sequence[float] = (1.0, 0.0),
                         config: Optional[IntegratorConfig] = None,
                         W: FloatScalar = paper_w, level: float = 1.0) -> PeriodicOrbit:
    """Follow ``f0`` from a point of ``{W = level}`` until it comes back around.

    The return is the first time the unwrapped polar angle has advanced by a
    full turn, located by bisecting on the length of the final step.
    """
    cfg = config or ORBIT_CONFIG
    fn = as_float_field(f0)
    x0, y0 = float(start[0]), float(start[1])
    if abs(W(x0, y0) - level) > 1e-12:
        raise ValueError(f"start {start} is not on the level set W = {level}")
    u, v = fn(x0, y0)
    turn = x0 * v - y0 * u
    if turn == 0:
        raise ValueError("no angular motion at the start point")
    orient = 1.0 if turn > 0 else -1.0
    theta0 = math.atan2(y0, x0)
    target = theta0 + orient * 2 * math.pi
    theta = theta0
    drift = 0.0
    samples = [(0.0, x0, y0, W(x0, y0))]
    steps = 0
    for t, x, y, h, xp, yp, k1p in _stepper(fn, (x0, y0), cfg):
        steps += 1
        step_theta = _unwrap(theta, math.atan2(y, x))
        if orient * (step_theta - target) >= 0:
            lo, hi = 0.0, h
            t_prev = t - h
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                xm, ym, *_ = _dp_step(fn, xp, yp, mid, k1p)
                if orient * (_unwrap(theta, math.atan2(ym, xm)) - target) >= 0:
                    hi = mid
                else:
                    lo = mid
                if hi - lo < 1e-15 * max(1.0, t):
                    break
            xr, yr, *_ = _dp_step(fn, xp, yp, hi, k1p)
            drift = max(drift, abs(W(xr, yr) - level))
            samples.append((t_prev + hi, xr, yr, W(xr, yr)))
            return PeriodicOrbit(t_prev + hi, math.hypot(xr - x0, yr - y0), drift, samples)
        theta = step_theta
        drift = max(drift, abs(W(x, y) - level))
        samples.append((t, x, y, W(x, y)))
        if t >= cfg.t_max or steps >= cfg.max_steps:
            break
    raise RuntimeError("trajectory did not return to its starting angle within t_max")


def _unwrap(prev: float, angle: float) -> float:
    k = round((prev - angle) / (2 * math.pi))
    return angle + 2 * math.pi * k


# ---------------------------------------------------------------------------

@dataclass
class LevelSetCurve:
    level: float
    points: List[Tuple[float, float, float, float]]

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["theta", "r", "x", "y"])
            for row in self.points:
                w.writerow([f"{v:.17g}" for v in row])


def level_set(c: float, n_theta: int = 360) -> LevelSetCurve:
    """Closed curve ``{(x^4+y^4)/(x^2+y^2) = c}`` in polar form."""
    if not c > 0:
        raise ValueError("level must be positive")
    if n_theta < 8:
        raise ValueError("n_theta must be at least 8")
    pts = []
    for k in range(n_theta):
        th = 2 * math.pi * k / n_theta
        co, si = math.cos(th), math.sin(th)
        r = math.sqrt(c / (co**4 + si**4))
        pts.append((th, r, r * co, r * si))
    return LevelSetCurve(float(c), pts)
