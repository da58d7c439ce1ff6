"""Image-method curved boundaries and their exact hitting laws.

For ``a > 0`` and a dimension ``delta > 0`` the boundary

    psi(t) = sqrt(delta * t * log(T / t)),   0 <= t <= T,

with horizon ``T = (a / (Gamma(delta/2) 2^(delta/2 - 1)))^(2/delta)`` has an
explicit first-passage density for the Bessel process started at 0, and an
explicit sub-density ``u(t, x)`` of the position on survival.  The kernels
below depend on ``(delta, T)`` only; ``a`` enters through ``T``.
"""

import math
from dataclasses import dataclass

from ._accel import jit
from .errors import DomainError, RejectionCapError
from .rng import next_gamma, next_uniform
from .special import log_gamma

__all__ = [
    "Boundary",
    "make_boundary",
    "boundary_from_horizon",
    "phi",
    "psi",
    "tau_psi_density",
    "sample_tau_psi",
    "survival_density_u",
    "rejection_constant",
    "sample_position_given_survival",
    "DEFAULT_REJECTION_CAP",
    "position_method_code",
]

DEFAULT_REJECTION_CAP = 1_000_000

_LOG2 = math.log(2.0)


@jit
def psi_kernel(t, delta, horizon):
    if t <= 0.0 or t >= horizon:
        return 0.0
    return math.sqrt(delta * t * math.log(horizon / t))


@jit
def sample_tau_kernel(state, delta, horizon):
    # G ~ Gamma(delta/2 + 1)  =>  T exp(-2G/delta) has the first-passage law
    g = next_gamma(state, 0.5 * delta + 1.0)
    return horizon * math.exp(-2.0 * g / delta)


POSITION_AUTO = 0
POSITION_ENVELOPE = 1
POSITION_CHI = 2
_POSITION_METHODS = {"auto": POSITION_AUTO, "envelope": POSITION_ENVELOPE, "chi": POSITION_CHI}


@jit
def chi_proposal_is_better(delta, q):
    # Envelope acceptance is P(survive)/C, chi acceptance is P(survive), and
    # C = q^(delta/2) (1 - e^-q) / Gamma(delta/2 + 1).
    if q <= 0.0:
        return False
    return 0.5 * delta * math.log(q) + math.log(-math.expm1(-q)) > math.lgamma(0.5 * delta + 1.0)


@jit
def sample_position_kernel(state, t, delta, horizon, cap, method):
    """Radius at time ``t`` given survival; returns ``(x, attempts)``.

    ``attempts`` is negative when the cap was exhausted.
    """
    if t <= 0.0 or t >= horizon:
        return 0.0, 0
    log_ratio = math.log(horizon / t)
    bound = math.sqrt(delta * t * log_ratio)
    if bound == 0.0:
        return 0.0, 0
    q = 0.5 * delta * log_ratio
    if method == POSITION_CHI or (method == POSITION_AUTO and chi_proposal_is_better(delta, q)):
        # X^2 / 2t = G ~ Gamma(delta/2); keep with probability 1 - e^(G - q)
        half = 0.5 * delta
        for attempt in range(1, cap + 1):
            g = next_gamma(state, half)
            if g < q:
                if next_uniform(state) <= -math.expm1(g - q):
                    return math.sqrt(2.0 * t * g), attempt
        return 0.0, -cap
    # envelope r(x) = delta x^(delta-1) / psi^delta, sampled as psi V^(1/delta);
    # u / (C r) = (e^(q - S^2/2t) - 1) / (e^q - 1)
    denom = math.expm1(q)
    inv_delta = 1.0 / delta
    inv_2t = 0.5 / t
    for attempt in range(1, cap + 1):
        s = bound * next_uniform(state) ** inv_delta
        u_star = next_uniform(state)
        if u_star * denom <= math.expm1(q - s * s * inv_2t):
            return s, attempt
    return 0.0, -cap


def position_method_code(method):
    try:
        return _POSITION_METHODS[method]
    except KeyError:
        raise DomainError(f"unknown position sampler {method!r}; expected one of {sorted(_POSITION_METHODS)}") from None


@dataclass(frozen=True)
class Boundary:
    """The boundary ``psi_{a,delta}`` with cached horizon and peak."""

    a: float
    delta: float
    horizon: float
    peak: float

    @property
    def t_peak(self):
        return self.horizon / math.e


def _log_scale(delta):
    # log(Gamma(delta/2) 2^(delta/2 - 1))
    return log_gamma(0.5 * delta) + (0.5 * delta - 1.0) * _LOG2


def make_boundary(a, delta):
    a = float(a)
    delta = float(delta)
    if not (a > 0.0 and math.isfinite(a)):
        raise DomainError(f"boundary parameter a must be > 0, got {a}")
    if not (delta > 0.0 and math.isfinite(delta)):
        raise DomainError(f"dimension must be > 0, got {delta}")
    horizon = math.exp((2.0 / delta) * (math.log(a) - _log_scale(delta)))
    return Boundary(a, delta, horizon, math.sqrt(delta * horizon / math.e))


def boundary_from_horizon(horizon, delta):
    """Inverse of :func:`make_boundary`: the boundary with a given horizon."""
    horizon = float(horizon)
    delta = float(delta)
    if not (horizon > 0.0 and delta > 0.0):
        raise DomainError(f"need horizon > 0 and delta > 0, got ({horizon}, {delta})")
    a = math.exp(_log_scale(delta) + 0.5 * delta * math.log(horizon))
    return Boundary(a, delta, horizon, math.sqrt(delta * horizon / math.e))


def phi(t):
    """Shape function ``sqrt(t log(1/t))`` on [0, 1], zero elsewhere."""
    if t <= 0.0 or t >= 1.0:
        return 0.0
    return math.sqrt(-t * math.log(t))


def psi(b, t):
    if not 0.0 <= t <= b.horizon:
        raise DomainError(f"t={t} outside the boundary support [0, {b.horizon}]")
    return psi_kernel(float(t), b.delta, b.horizon)


def tau_psi_density(b, t):
    """Density of the first passage through ``psi`` (zero past the horizon)."""
    if not t > 0.0:
        raise DomainError(f"density requires t > 0, got {t}")
    if t >= b.horizon:
        return 0.0
    # psi^delta / (2 a t), assembled in logs
    log_psi2 = math.log(b.delta * t * math.log(b.horizon / t))
    return math.exp(0.5 * b.delta * log_psi2 - math.log(2.0 * b.a * t))


def sample_tau_psi(b, stream):
    return float(sample_tau_kernel(stream.state, b.delta, b.horizon))


def survival_density_u(b, t, x, clamp=True):
    """Sub-density of the radius at ``t`` on survival past ``t``.

    With ``clamp=False`` the raw image-method expression is returned, which is
    non-positive beyond ``psi(t)``.
    """
    if not 0.0 < t < b.horizon:
        raise DomainError(f"t={t} outside the open support (0, {b.horizon})")
    if x < 0.0:
        raise DomainError(f"radius must be >= 0, got {x}")
    if clamp and x >= psi_kernel(t, b.delta, b.horizon):
        return 0.0
    lead = math.exp(-_log_scale(b.delta) - 0.5 * b.delta * math.log(t))
    bracket = lead * math.exp(-x * x / (2.0 * t)) - 1.0 / b.a
    if x == 0.0:
        power = 1.0 if b.delta == 1.0 else (0.0 if b.delta > 1.0 else math.inf)
    else:
        power = x ** (b.delta - 1.0)
    return bracket * power


def rejection_constant(b, t):
    """Envelope constant ``C`` with ``u(t, x) <= C r(x)`` on [0, psi(t)]."""
    if not 0.0 < t < b.horizon:
        raise DomainError(f"t={t} outside the open support (0, {b.horizon})")
    bound = psi_kernel(t, b.delta, b.horizon)
    lead = math.exp(-_log_scale(b.delta) - 0.5 * b.delta * math.log(t))
    return bound**b.delta / b.delta * (lead - 1.0 / b.a)


def sample_position_given_survival(b, t, stream, cap=DEFAULT_REJECTION_CAP, method="envelope"):
    """Draw the radius at ``t`` conditioned on no crossing before ``t``.

    ``method="envelope"`` proposes from ``r(x)`` proportional to
    ``x^(delta-1)`` on [0, psi(t)].  ``"chi"`` proposes ``sqrt(2 t G)`` with
    ``G ~ Gamma(delta/2)`` and is far cheaper when ``t`` is small against the
    horizon; ``"auto"`` picks whichever has the higher acceptance rate.  All
    three produce the same law.
    """
    if not 0.0 < t < b.horizon:
        raise DomainError(f"t={t} outside the open support (0, {b.horizon})")
    code = position_method_code(method)
    x, attempts = sample_position_kernel(stream.state, float(t), b.delta, b.horizon, int(cap), code)
    if attempts < 0:
        raise RejectionCapError(f"rejection sampler exceeded {cap} attempts at t={t}")
    return float(x)

