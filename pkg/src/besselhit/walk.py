"""Iterative two-clock sampler for Bessel hitting times.

Each step restarts a Bessel process of dimension ``delta`` at radius
``M(n-1)`` and writes its square as the sum of two independent squared
Bessel processes: a ``floor(delta)``-dimensional Brownian motion started at
``(M(n-1), 0, ..., 0)`` and a ``delta'``-dimensional Bessel process started at
0, with ``delta' = delta - floor(delta)``.  Each component is stopped on an
image-method boundary; both boundaries share the horizon ``s`` chosen so that
their peaks keep the squared radius below ``M^2 + gamma (L^2 - M^2)``.  The
earlier of the two clocks ends the step, and the position at that time is
assembled from the exact exit law of one component and the conditioned
survival law of the other.

The walk stops once ``L^2 - M^2 <= epsilon``.  Time accumulated up to that
point never exceeds the true hitting time of ``L``.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._accel import jit
from .boundary import (
    DEFAULT_REJECTION_CAP,
    position_method_code,
    psi_kernel,
    sample_position_kernel,
    sample_tau_kernel,
)
from .errors import ConfigError, DomainError, RejectionCapError, TruncationError
from .rng import child_key, next_sphere_first_coordinate
from .special import log_gamma

__all__ = [
    "BesselDim",
    "WalkConfig",
    "WalkState",
    "PassageSample",
    "PassageBatch",
    "PathRecord",
    "StepParams",
    "step_params",
    "initial_state",
    "advance",
    "run",
    "integer_dimension_run",
    "run_many",
    "sample_path",
]

STATUS_OK = 0
STATUS_TRUNCATED = 1
STATUS_REJECTION_CAP = 2

DEFAULT_MAX_STEPS = 10_000_000
DEFAULT_GAMMA = 0.95


@dataclass(frozen=True)
class BesselDim:
    delta: float
    floor_part: int
    frac_part: float

    @classmethod
    def of(cls, delta):
        delta = float(delta)
        if not (delta >= 1.0 and math.isfinite(delta)):
            raise ConfigError(f"dimension must be a finite real >= 1, got {delta}")
        floor_part = int(math.floor(delta))
        return cls(delta, floor_part, delta - floor_part)

    @property
    def is_integer(self):
        return self.frac_part == 0.0


@dataclass(frozen=True)
class WalkConfig:
    """Parameters of one hitting-time simulation.

    ``epsilon`` only needs to be positive: with ``epsilon >= L^2 - start^2``
    the walk stops before its first step.
    """

    dim: BesselDim
    level: float
    gamma: float = DEFAULT_GAMMA
    epsilon: float = 1e-3
    start: float = 0.0
    use_fast_first_step: bool = False
    max_steps: int = DEFAULT_MAX_STEPS
    rejection_cap: int = DEFAULT_REJECTION_CAP
    position_sampler: str = "auto"

    def __post_init__(self):
        if isinstance(self.dim, (int, float)):
            object.__setattr__(self, "dim", BesselDim.of(self.dim))
        if not (self.level > 0.0 and math.isfinite(self.level)):
            raise ConfigError(f"level L must be > 0, got {self.level}")
        if not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not self.epsilon > 0.0:
            raise ConfigError(f"epsilon must be > 0, got {self.epsilon}")
        if not 0.0 <= self.start < self.level:
            raise ConfigError(f"start must lie in [0, L), got {self.start}")
        if self.max_steps < 1:
            raise ConfigError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.rejection_cap < 1:
            raise ConfigError(f"rejection_cap must be >= 1, got {self.rejection_cap}")
        try:
            position_method_code(self.position_sampler)
        except DomainError as exc:
            raise ConfigError(str(exc)) from None

    @property
    def delta(self):
        return self.dim.delta

    @property
    def position_gap_bound(self):
        """Upper bound ``epsilon / (2L)`` on ``L - M`` at termination."""
        return self.epsilon / (2.0 * self.level)


@dataclass(frozen=True)
class WalkState:
    n: int
    theta_total: float
    m: float
    r: float
    n_integer: int
    rng_draws_at_start: int


@dataclass(frozen=True)
class PassageSample:
    theta: float
    m_final: float
    steps: int
    steps_integer: int
    draws: int


@dataclass(frozen=True)
class StepParams:
    s: float
    alpha: float
    beta: float


@dataclass
class PassageBatch:
    """Column arrays for a block of independent replications."""

    theta: np.ndarray
    m_final: np.ndarray
    steps: np.ndarray
    steps_integer: np.ndarray
    draws: np.ndarray
    status: np.ndarray

    def __len__(self):
        return len(self.theta)

    @property
    def ok(self):
        return self.status == STATUS_OK


@dataclass
class PathRecord:
    """Per-step trace of a single run; ``r[0]`` is the starting square."""

    r: np.ndarray
    theta: np.ndarray
    integer: np.ndarray
    sample: PassageSample = field(repr=False)


# --------------------------------------------------------------------------
# kernels


@jit
def step_horizon(floor_d, delta, gamma, level2, x):
    """Common horizon of both step boundaries from squared radius ``x``."""
    num = gamma * (level2 - x)
    den = math.sqrt((floor_d - delta * gamma) * x + delta * gamma * level2) + math.sqrt(floor_d * x)
    return math.e * (num / den) ** 2


@jit
def _radius_squared(m, p, rho):
    # ||(m,0,...) + rho * u||^2 with first coordinate p of u; this grouping
    # equals m^2 + 2 m p rho + rho^2 but never goes negative by rounding
    a = m + p * rho
    return a * a + rho * rho * (1.0 - p * p)


@jit
def advance_kernel(state, x, delta, floor_d, frac, gamma, level2, cap, method):
    """One two-clock step from squared radius ``x``.

    Returns ``(theta, new_x, is_integer_step, status)``.
    """
    s = step_horizon(floor_d, delta, gamma, level2, x)
    fd = float(floor_d)
    theta1 = sample_tau_kernel(state, fd, s)
    if frac > 0.0:
        theta2 = sample_tau_kernel(state, frac, s)
    else:
        theta2 = math.inf
    m = math.sqrt(x)
    if theta1 <= theta2:
        rho = psi_kernel(theta1, fd, s)
        xi = 0.0
        if frac > 0.0:
            xi, attempts = sample_position_kernel(state, theta1, frac, s, cap, method)
            if attempts < 0:
                return theta1, x, 1, STATUS_REJECTION_CAP
        p = next_sphere_first_coordinate(state, floor_d)
        return theta1, xi * xi + _radius_squared(m, p, rho), 1, STATUS_OK
    rho_frac = psi_kernel(theta2, frac, s)
    xi, attempts = sample_position_kernel(state, theta2, fd, s, cap, method)
    if attempts < 0:
        return theta2, x, 0, STATUS_REJECTION_CAP
    p = next_sphere_first_coordinate(state, floor_d)
    return theta2, rho_frac * rho_frac + _radius_squared(m, p, xi), 0, STATUS_OK


@jit
def fast_first_step_kernel(state, delta, gamma, level2):
    # single full-dimension boundary from 0, horizon e gamma L^2 / delta
    s = math.e * gamma * level2 / delta
    theta = sample_tau_kernel(state, delta, s)
    rho = psi_kernel(theta, delta, s)
    return theta, rho * rho


@jit
def run_kernel(state, delta, floor_d, frac, gamma, level2, eps, x0, fast, max_steps, cap, method):
    x = x0
    total = 0.0
    n = 0
    n_int = 0
    if fast and x == 0.0 and level2 - x > eps:
        theta, x = fast_first_step_kernel(state, delta, gamma, level2)
        total += theta
        n += 1
    while level2 - x > eps:
        if n >= max_steps:
            return total, x, n, n_int, STATUS_TRUNCATED
        theta, x_new, integer, status = advance_kernel(state, x, delta, floor_d, frac, gamma, level2, cap, method)
        if status != STATUS_OK:
            return total, x, n, n_int, status
        total += theta
        x = x_new
        n += 1
        n_int += integer
    return total, x, n, n_int, STATUS_OK


@jit
def run_batch_kernel(root_key, first, delta, floor_d, frac, gamma, level2, eps, x0, fast,
                     max_steps, cap, method, theta, xs, steps, steps_int, draws, status):
    state = np.zeros(2, dtype=np.uint64)
    for i in range(theta.shape[0]):
        state[0] = child_key(root_key, np.uint64(first + i))
        state[1] = np.uint64(0)
        t, x, n, n_int, st = run_kernel(state, delta, floor_d, frac, gamma, level2, eps, x0, fast, max_steps, cap, method)
        theta[i] = t
        xs[i] = x
        steps[i] = n
        steps_int[i] = n_int
        draws[i] = state[1]
        status[i] = st


@jit
def path_kernel(state, delta, floor_d, frac, gamma, level2, eps, x0, fast, max_steps, cap, method,
                r_out, theta_out, int_out):
    """Like ``run_kernel`` but records every step; returns ``(n, status)``.

    Stops with ``n == len(r_out) - 1`` and status ``-1`` if the buffers fill.
    """
    x = x0
    n = 0
    r_out[0] = x
    buf = r_out.shape[0] - 1
    if fast and x == 0.0 and level2 - x > eps:
        theta, x = fast_first_step_kernel(state, delta, gamma, level2)
        n = 1
        r_out[1] = x
        theta_out[0] = theta
        int_out[0] = 0
    while level2 - x > eps:
        if n >= max_steps:
            return n, STATUS_TRUNCATED
        if n >= buf:
            return n, -1
        theta, x, integer, status = advance_kernel(state, x, delta, floor_d, frac, gamma, level2, cap, method)
        if status != STATUS_OK:
            return n, status
        theta_out[n] = theta
        int_out[n] = integer
        n += 1
        r_out[n] = x
    return n, STATUS_OK


# --------------------------------------------------------------------------
# Python API


def _kernel_args(cfg):
    d = cfg.dim
    return (
        d.delta,
        d.floor_part,
        d.frac_part,
        float(cfg.gamma),
        float(cfg.level) ** 2,
        float(cfg.epsilon),
        float(cfg.start) ** 2,
        bool(cfg.use_fast_first_step),
        int(cfg.max_steps),
        int(cfg.rejection_cap),
        position_method_code(cfg.position_sampler),
    )


def step_params(dim, gamma, level, m):
    """Horizon ``s`` and the boundary parameters ``alpha = I``, ``beta = N``.

    Both are fixed by the shared horizon ``s`` (the ``floor(delta)`` form of
    the denominator is used for both).  ``beta`` is ``nan`` for integer
    dimensions, where only one clock runs.
    """
    if not isinstance(dim, BesselDim):
        dim = BesselDim.of(dim)
    if not 0.0 < gamma < 1.0:
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
    if not 0.0 <= m < level:
        raise DomainError(f"position must lie in [0, L), got {m}")
    d, fd, fr = dim.delta, dim.floor_part, dim.frac_part
    x = m * m
    level2 = level * level
    radicand = (fd - d * gamma) * x + d * gamma * level2
    if radicand < 0.0:
        raise DomainError("negative radicand in the step horizon")

    s = float(step_horizon(fd, d, gamma, level2, x))

    def image_parameter(k):
        # the a with T_{a,k} = s: 2^(k/2-1) Gamma(k/2) s^(k/2)
        return math.exp((0.5 * k - 1.0) * math.log(2.0) + log_gamma(0.5 * k) + 0.5 * k * math.log(s))

    alpha = image_parameter(float(fd))
    beta = image_parameter(fr) if fr > 0.0 else math.nan
    return StepParams(s, alpha, beta)


def initial_state(cfg, stream):
    x0 = float(cfg.start)
    return WalkState(0, 0.0, x0, x0 * x0, 0, stream.draw_count)


def advance(state, cfg, stream):
    """Perform one two-clock step from ``state``."""
    level2 = float(cfg.level) ** 2
    if not level2 - state.r > cfg.epsilon:
        raise DomainError("state is already inside the epsilon-shell")
    delta, fd, fr, gamma, level2, _, _, _, _, cap, method = _kernel_args(cfg)
    theta, x, integer, status = advance_kernel(stream.state, state.r, delta, fd, fr, gamma, level2, cap, method)
    if status == STATUS_REJECTION_CAP:
        raise RejectionCapError(f"position sampler exceeded {cap} attempts")
    x = float(x)
    return WalkState(
        state.n + 1,
        state.theta_total + float(theta),
        math.sqrt(x),
        x,
        state.n_integer + int(integer),
        state.rng_draws_at_start,
    )


def _raise_for_status(status, sample, cfg):
    if status == STATUS_TRUNCATED:
        raise TruncationError(
            f"walk exceeded max_steps={cfg.max_steps} (delta={cfg.delta}, epsilon={cfg.epsilon})",
            sample=sample,
        )
    if status == STATUS_REJECTION_CAP:
        raise RejectionCapError(f"position sampler exceeded {cfg.rejection_cap} attempts")


def run(cfg, stream):
    """Run the walk to the epsilon-shell and return a :class:`PassageSample`."""
    start = stream.draw_count
    total, x, n, n_int, status = run_kernel(stream.state, *_kernel_args(cfg))
    x = float(x)
    sample = PassageSample(float(total), math.sqrt(x), int(n), int(n_int), stream.draw_count - start)
    _raise_for_status(status, sample, cfg)
    return sample


def integer_dimension_run(cfg, stream):
    """Single-clock walk for integer dimensions."""
    if not cfg.dim.is_integer:
        raise ConfigError(f"integer_dimension_run needs an integer dimension, got {cfg.delta}")
    return run(cfg, stream)


def run_many(cfg, stream, reps, first=0):
    """Run ``reps`` replications; replication ``i`` uses ``stream.split(first + i)``.

    Failures are reported per replication in ``status`` rather than raised.
    """
    reps = int(reps)
    if reps < 0:
        raise DomainError(f"reps must be >= 0, got {reps}")
    theta = np.empty(reps)
    xs = np.empty(reps)
    steps = np.empty(reps, dtype=np.int64)
    steps_int = np.empty(reps, dtype=np.int64)
    draws = np.empty(reps, dtype=np.uint64)
    status = np.empty(reps, dtype=np.int64)
    run_batch_kernel(stream.state[0], int(first), *_kernel_args(cfg), theta, xs, steps, steps_int, draws, status)
    return PassageBatch(theta, np.sqrt(xs), steps, steps_int, draws.astype(np.int64), status)


def sample_path(cfg, stream, buffer=4096):
    """Run one walk and keep its full trace of squared radii and step times."""
    snapshot = stream.state.copy()
    args = _kernel_args(cfg)
    while True:
        r = np.empty(buffer + 1)
        th = np.empty(buffer)
        it = np.empty(buffer, dtype=np.int64)
        stream.state[:] = snapshot
        n, status = path_kernel(stream.state, *args, r, th, it)
        if status != -1:
            break
        # same stream state replays the same path into a larger buffer
        buffer *= 4
    n = int(n)
    r, th, it = r[: n + 1], th[:n], it[:n]
    sample = PassageSample(
        float(np.cumsum(th)[-1]) if n else 0.0, math.sqrt(r[n]), n, int(it.sum()), int(stream.state[1] - snapshot[1])
    )
    _raise_for_status(status, sample, cfg)
    return PathRecord(r, th, it.astype(bool), sample)
