"""Time stepping for the output/distancing system."""
from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .model import InvalidInputError, ParameterSet, State, rhs_array

DEFAULT_DT = 1e-3
ENV_DEFAULT_DT = "GRAVDIST_DEFAULT_DT"

# recurrence ball (max-norm) and the exit radius that arms it
RECURRENCE_RADIUS = 1e-3
RECURRENCE_EXIT_FACTOR = 10.0

# |rhs| below this is emitted as the zero vector
ZERO_FIELD = 1e-12


class DivergenceError(RuntimeError):
    """Integration left the finite range; ``last_time`` is the last valid time."""

    def __init__(self, message, last_time, phase=None):
        super().__init__(message)
        self.last_time = last_time
        self.phase = phase


class Method(str, enum.Enum):
    RK4_LOG = "RK4LogSpace"
    RK4_DIRECT = "RK4Direct"
    EULER_DIRECT = "EulerDirect"


def default_dt():
    raw = os.environ.get(ENV_DEFAULT_DT)
    if raw is None or not raw.strip():
        return DEFAULT_DT
    try:
        value = float(raw)
    except ValueError:
        raise InvalidInputError(f"{ENV_DEFAULT_DT} is not a decimal number: {raw!r}") from None
    if not (math.isfinite(value) and value > 0):
        raise InvalidInputError(f"{ENV_DEFAULT_DT} must be a positive number, got {raw!r}")
    return value


@dataclass(frozen=True)
class IntegratorSpec:
    method: Method = Method.RK4_LOG
    dt: float = field(default_factory=default_dt)
    sample_every: int = 1

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise InvalidInputError(f"dt must be > 0, got {self.dt!r}")
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise InvalidInputError(f"sample_every must be an integer >= 1, got {self.sample_every!r}")
        object.__setattr__(self, "sample_every", int(self.sample_every))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Samples ``(t, Y, d)`` stored as read-only arrays."""

    t: np.ndarray
    Y: np.ndarray
    d: np.ndarray
    params: ParameterSet
    method: Method
    dt: float
    # (method actually stepped, a, b): exact working coordinates at the end,
    # so a continued run does not round-trip through exp/log
    carry: tuple | None = None

    def __post_init__(self):
        for name in ("t", "Y", "d"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.t.shape == self.Y.shape == self.d.shape) or self.t.ndim != 1:
            raise InvalidInputError("t, Y, d must be 1-d arrays of equal length")
        if len(self.t) > 1 and np.any(np.diff(self.t) <= 0):
            raise InvalidInputError("sample times must be strictly increasing")

    def __len__(self):
        return len(self.t)

    @property
    def initial(self):
        return State(self.Y[0], self.d[0])

    @property
    def final(self):
        return State(self.Y[-1], self.d[-1])

    def states(self):
        return np.column_stack([self.Y, self.d])

    def slice(self, start=None, stop=None):
        s = slice(start, stop)
        return Trajectory(self.t[s], self.Y[s], self.d[s], self.params, self.method, self.dt)

    def shifted(self, offset):
        return Trajectory(self.t + offset, self.Y, self.d, self.params, self.method, self.dt,
                          self.carry)


def _step_plan(t_end, dt):
    n = int(round(t_end / dt))
    if n >= 1 and abs(n * dt - t_end) <= 1e-9 * max(t_end, dt):
        return n, dt
    n = math.ceil(t_end / dt)
    return n, t_end - (n - 1) * dt


def _sample_steps(n_steps, sample_every):
    steps = np.arange(0, n_steps + 1, sample_every)
    if steps[-1] != n_steps:
        steps = np.append(steps, n_steps)
    return steps


def integrate_ode(initial, params: ParameterSet, t_end, spec: IntegratorSpec | None = None,
                  *, step_offset=0, resume=None) -> Trajectory:
    """Integrate from ``t = 0`` to ``t_end``.

    RK4LogSpace works in ``(ln Y, ln d)``; a zero component falls back to
    RK4Direct, which keeps the invariant axis exactly. ``step_offset`` shifts the
    time grid by whole steps and ``resume`` takes the ``carry`` of a previous
    trajectory ending at ``initial``; both serve schedule splicing.
    """
    spec = spec or IntegratorSpec()
    if not isinstance(initial, State):
        initial = State(*initial)
    if not (math.isfinite(t_end) and t_end > 0):
        raise InvalidInputError(f"t_end must be > 0, got {t_end!r}")

    method = spec.method
    run_method = method
    if method is Method.RK4_LOG and (initial.Y == 0 or initial.d == 0):
        run_method = Method.RK4_DIRECT

    n_steps, last_h = _step_plan(t_end, spec.dt)
    out_y, out_d = kernels.alloc(n_steps, spec.sample_every, 2)
    carry = np.zeros(3)
    if resume is not None and resume[0] is run_method:
        carry[:] = (resume[1], resume[2], 1.0)
    filled, status = kernels.lv_integrate(
        kernels.METHOD_CODES[run_method.value], initial.Y, initial.d, *params.as_tuple(),
        spec.dt, n_steps, last_h, spec.sample_every, out_y, out_d, carry)

    steps = _sample_steps(n_steps, spec.sample_every)
    t = (steps + step_offset) * spec.dt
    if last_h != spec.dt:
        t[-1] = (n_steps - 1 + step_offset) * spec.dt + last_h
    if status != 0:
        bad_step = -status
        last_time = (bad_step - 1 + step_offset) * spec.dt
        raise DivergenceError(
            f"integration diverged after t={last_time:g} ({method.value})", last_time)
    return Trajectory(t[:filled], out_y[:filled], out_d[:filled], params, method, spec.dt,
                      (run_method, float(carry[0]), float(carry[1])))


def step_discrete(initial_Y, d, params: ParameterSet, n_steps, h=1.0) -> np.ndarray:
    """Iterate ``Y <- Y + h (g Y - mu d Y)`` with ``d`` held fixed.

    Returns the ``n_steps + 1`` values including the starting one. ``h = 1`` is
    the period-by-period budget map.
    """
    if n_steps < 1:
        raise InvalidInputError("n_steps must be >= 1")
    if not h > 0:
        raise InvalidInputError("h must be > 0")
    out = np.empty(n_steps + 1)
    y = float(initial_Y)
    out[0] = y
    for i in range(n_steps):
        y = y + h * (params.g * y - params.mu * d * y)
        out[i + 1] = y
    return out


def _ball_entry(a, b, center, radius):
    """Smallest s in [0, 1] with max|a + s(b - a) - center| <= radius, or None."""
    lo, hi = 0.0, 1.0
    for ai, bi, ci in zip(a, b, center):
        delta = bi - ai
        off = ai - ci
        if delta == 0:
            if abs(off) > radius:
                return None
            continue
        s1 = (-radius - off) / delta
        s2 = (radius - off) / delta
        if s1 > s2:
            s1, s2 = s2, s1
        lo = max(lo, s1)
        hi = min(hi, s2)
        if lo > hi:
            return None
    return lo


def detect_period(traj, radius=RECURRENCE_RADIUS):
    """First return time to the initial state, or ``None``.

    The trajectory must first leave the ball of ``10 * radius`` around its
    starting point; the return time is where the piecewise-linear path through
    the samples re-enters the ``radius`` ball (max-norm).
    """
    t = np.asarray(traj.t)
    pts = np.column_stack([traj.Y, traj.d])
    if len(t) < 3:
        raise InvalidInputError("detect_period needs at least 3 samples")
    x0 = pts[0]
    dist = np.max(np.abs(pts - x0), axis=1)
    away = np.flatnonzero(dist > RECURRENCE_EXIT_FACTOR * radius)
    if away.size == 0:
        return None
    for i in range(away[0], len(t) - 1):
        s = _ball_entry(pts[i], pts[i + 1], x0, radius)
        if s is not None:
            return float(t[i] + s * (t[i + 1] - t[i]) - t[0])
    return None


@dataclass(frozen=True, eq=False)
class VectorField:
    """Grid of points with unit (or zero) directions; arrays shaped ``(n, n)``."""

    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def rows(self):
        return zip(self.x.ravel(), self.y.ravel(), self.u.ravel(), self.v.ravel())


def sample_vector_field(params: ParameterSet, x_range, y_range, n) -> VectorField:
    """Normalised field on an ``n x n`` grid; x is output, y is distancing."""
    if n < 2:
        raise InvalidInputError("grid count must be >= 2")
    for lo, hi in (x_range, y_range):
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise InvalidInputError("grid ranges must be finite")
    xs = np.linspace(x_range[0], x_range[1], n)
    ys = np.linspace(y_range[0], y_range[1], n)
    X, D = np.meshgrid(xs, ys, indexing="xy")
    U, V = rhs_array(X, D, params)
    norm = np.hypot(U, V)
    small = norm < ZERO_FIELD
    safe = np.where(small, 1.0, norm)
    U = np.where(small, 0.0, U / safe)
    V = np.where(small, 0.0, V / safe)
    return VectorField(X, D, U, V)
