"""Independent ground truth for validating the hitting-time sampler.

Nothing here calls the walk.  The analytic formulas use :mod:`special`; the
Euler scheme discretizes the squared Bessel SDE
``dY = delta dt + 2 sqrt(Y) dB`` with its own Gaussian draws; the quadrature
CDFs integrate the boundary densities numerically rather than going through
the Gamma representation used by the samplers.
"""

import functools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._accel import jit
from .boundary import psi, survival_density_u, tau_psi_density
from .errors import ConvergenceError, DomainError
from .rng import child_key, next_gaussian
from .special import bessel_i, bessel_j, bessel_j_zeros, log_gamma

__all__ = [
    "EulerConfig",
    "TailValue",
    "laplace_hitting_exact",
    "ciesielski_taylor_tail",
    "besq_marginal_from_zero",
    "euler_hitting_time",
    "euler_hitting_times",
    "empirical_laplace",
    "adaptive_simpson",
    "tau_psi_cdf",
    "tau_psi_survival",
    "position_cdf",
    "survival_mass",
]

# I_nu(z) is summed from its power series; keep arguments where that is safe
MAX_SERIES_ARGUMENT = 40.0


def laplace_hitting_exact(lam, x0, level, delta):
    """``E[exp(-lam tau_L)]`` for the Bessel process of dimension ``delta`` from ``x0``."""
    if not lam > 0.0:
        raise DomainError(f"lambda must be > 0, got {lam}")
    if not 0.0 <= x0 <= level:
        raise DomainError(f"x0 must lie in [0, L], got {x0}")
    if delta < 1.0:
        raise DomainError(f"delta must be >= 1, got {delta}")
    nu = 0.5 * delta - 1.0
    k = level * math.sqrt(2.0 * lam)
    if k > MAX_SERIES_ARGUMENT:
        raise DomainError(f"L sqrt(2 lambda) = {k:.3g} exceeds the series-safe bound {MAX_SERIES_ARGUMENT}")
    if x0 == 0.0:
        # limit x0 -> 0 of x0^-nu I_nu(x0 sqrt(2 lam))
        return math.exp(nu * math.log(0.5 * k) - log_gamma(nu + 1.0)) / bessel_i(nu, k)
    if x0 == level:
        return 1.0
    return (x0 / level) ** (-nu) * bessel_i(nu, x0 * math.sqrt(2.0 * lam)) / bessel_i(nu, k)


class TailValue(NamedTuple):
    value: float
    bound: float


@functools.lru_cache(maxsize=32)
def _zeros(nu, count):
    return tuple(bessel_j_zeros(nu, count))


@functools.lru_cache(maxsize=32)
def _ct_terms(nu, count):
    # zeros j_k and coefficients j_k^(nu-1) / J_{nu+1}(j_k)
    zeros = _zeros(nu, count)
    return zeros, tuple(j ** (nu - 1.0) / bessel_j(nu + 1.0, j) for j in zeros)


def ciesielski_taylor_tail(t, level, delta, K=20, tol=1e-8):
    """``P(tau_L > t)`` from 0 for integer ``delta`` in 1..6, truncated at ``K`` terms.

    The series alternates; once the term magnitudes decrease, the first
    omitted term bounds the truncation error and is returned as ``bound``.
    """
    if int(delta) != delta or not 1 <= delta <= 6:
        raise DomainError(f"delta must be an integer in 1..6, got {delta}")
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    if not (t > 0.0 and level > 0.0):
        raise DomainError(f"need t > 0 and L > 0, got t={t}, L={level}")
    nu = 0.5 * delta - 1.0
    extra = 4
    zeros, coefs = _ct_terms(nu, K + 1 + extra)
    scale = 1.0 / (2.0 * level * level)
    terms = [c * math.exp(-j * j * scale * t) for j, c in zip(zeros, coefs)]
    prefactor = math.exp(-((nu - 1.0) * math.log(2.0) + log_gamma(nu + 1.0)))
    tail = [abs(x) for x in terms[K:]]
    if any(b > a for a, b in zip(tail, tail[1:])):
        raise ConvergenceError(
            f"series terms not yet decreasing at k={K + 1} for t={t}; increase K or t",
            partial_sum=prefactor * math.fsum(terms[:K]),
            terms=K,
        )
    value = prefactor * math.fsum(terms[:K])
    bound = prefactor * tail[0]
    if tol is not None and bound > tol:
        raise ConvergenceError(
            f"truncation bound {bound:.3g} exceeds tol={tol:g} at t={t}",
            partial_sum=value,
            terms=K,
        )
    return TailValue(value, bound)


def besq_marginal_from_zero(t, delta, stream, size=None):
    """Squared Bessel process of dimension ``delta`` at time ``t`` from 0.

    The law is Gamma(delta/2) with scale ``2t``.
    """
    if not (t > 0.0 and delta > 0.0):
        raise DomainError(f"need t > 0 and delta > 0, got t={t}, delta={delta}")
    return 2.0 * t * stream.gamma(0.5 * delta, size)


@dataclass(frozen=True)
class EulerConfig:
    dt: float = 1e-4
    t_max: float = 100.0
    scheme: str = "absorb"

    def __post_init__(self):
        if not self.dt > 0.0:
            raise DomainError(f"dt must be > 0, got {self.dt}")
        if not self.t_max > 0.0:
            raise DomainError(f"t_max must be > 0, got {self.t_max}")
        if self.scheme not in ("absorb", "reflect"):
            raise DomainError(f"scheme must be 'absorb' or 'reflect', got {self.scheme!r}")


@jit
def euler_kernel(state, y0, level2, delta, dt, t_max, reflect):
    """Return ``(time, censored)`` for one discretized squared-Bessel path."""
    if y0 >= level2:
        return 0.0, False
    y = y0
    t = 0.0
    sq = math.sqrt(dt)
    drift = delta * dt
    n_steps = int(math.ceil(t_max / dt))
    for _ in range(n_steps):
        y_new = y + drift + 2.0 * math.sqrt(max(y, 0.0)) * sq * next_gaussian(state)
        if reflect:
            y_new = abs(y_new)
        elif y_new < 0.0:
            y_new = 0.0
        if y_new >= level2:
            return t + dt * (level2 - y) / (y_new - y), False
        y = y_new
        t += dt
    return t_max, True


@jit
def euler_batch_kernel(root_key, y0, level2, delta, dt, t_max, reflect, times, censored):
    state = np.zeros(2, dtype=np.uint64)
    for i in range(times.shape[0]):
        state[0] = child_key(root_key, np.uint64(i))
        state[1] = np.uint64(0)
        t, c = euler_kernel(state, y0, level2, delta, dt, t_max, reflect)
        times[i] = t
        censored[i] = c


def _euler_args(x0, level, delta, ec):
    if not 0.0 <= x0 < level:
        raise DomainError(f"x0 must lie in [0, L), got {x0}")
    if not delta > 0.0:
        raise DomainError(f"delta must be > 0, got {delta}")
    return float(x0) ** 2, float(level) ** 2, float(delta), ec.dt, ec.t_max, ec.scheme == "reflect"


def euler_hitting_time(x0, level, delta, ec, stream):
    """Euler hitting time of ``L^2`` by the squared process; ``(time, censored)``."""
    t, censored = euler_kernel(stream.state, *_euler_args(x0, level, delta, ec))
    return float(t), bool(censored)


def euler_hitting_times(x0, level, delta, ec, stream, n):
    """``n`` independent Euler hitting times on child streams ``0..n-1``."""
    times = np.empty(int(n))
    censored = np.empty(int(n), dtype=np.bool_)
    euler_batch_kernel(stream.state[0], *_euler_args(x0, level, delta, ec), times, censored)
    return times, censored


def empirical_laplace(samples, lam):
    """Mean and standard error of ``exp(-lam T)`` over ``samples``."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise DomainError("empirical_laplace needs at least one sample")
    if not lam > 0.0:
        raise DomainError(f"lambda must be > 0, got {lam}")
    v = np.exp(-lam * x)
    if x.size == 1:
        return float(v[0]), 0.0
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(x.size))


# --------------------------------------------------------------------------
# quadrature


def adaptive_simpson(f, a, b, tol=1e-9, max_depth=48, min_depth=0):
    """Integrate ``f`` over ``[a, b]`` by adaptive Simpson with Richardson correction.

    Panels are always split down to ``min_depth`` so that a narrow peak in a
    long interval is not missed by the first coarse estimate.
    """
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a_, b_, fa_, fm_, fb_, whole_, tol_, depth = stack.pop()
        m = 0.5 * (a_ + b_)
        lm, rm = 0.5 * (a_ + m), 0.5 * (m + b_)
        flm, frm = f(lm), f(rm)
        left = (m - a_) * (fa_ + 4.0 * flm + fm_) / 6.0
        right = (b_ - m) * (fm_ + 4.0 * frm + fb_) / 6.0
        delta = left + right - whole_
        if depth >= max_depth or (depth >= min_depth and abs(delta) <= 15.0 * tol_):
            total += left + right + delta / 15.0
        else:
            stack.append((a_, m, fa_, flm, fm_, left, 0.5 * tol_, depth + 1))
            stack.append((m, b_, fm_, frm, fb_, right, 0.5 * tol_, depth + 1))
    return total


def _tail_cutoff(g, start, floor=1e-16):
    # first point past ``start`` (doubling) where the decaying integrand is negligible
    hi = max(start, 1.0)
    while g(hi) > floor:
        hi *= 2.0
    return hi


def _passage_integrand(b):
    # density in the log-time variable s = log(T/t): f(T e^-s) T e^-s
    def g(s):
        if s <= 0.0:
            return 0.0
        t = b.horizon * math.exp(-s)
        if t <= 0.0:
            return 0.0
        return tau_psi_density(b, t) * t

    return g


def tau_psi_cdf(b, times, tol=1e-9):
    """Quadrature CDF of the first passage through ``psi`` at each of ``times``."""
    times = np.asarray(times, dtype=float)
    g = _passage_integrand(b)
    out = np.empty_like(times)
    inside = (times > 0.0) & (times < b.horizon)
    out[times <= 0.0] = 0.0
    out[times >= b.horizon] = 1.0
    if not inside.any():
        return out
    s = np.log(b.horizon / times[inside])
    order = np.argsort(s)
    s_sorted = s[order]
    cutoff = _tail_cutoff(g, s_sorted[-1])
    knots = np.append(s_sorted, cutoff)
    pieces = np.array([adaptive_simpson(g, knots[i], knots[i + 1], tol) for i in range(len(s_sorted) - 1)]
                      + [adaptive_simpson(g, knots[-2], knots[-1], tol, min_depth=6)])
    cdf_sorted = np.cumsum(pieces[::-1])[::-1]
    vals = np.empty_like(s)
    vals[order] = cdf_sorted
    out[inside] = vals
    return out


def tau_psi_survival(b, t, tol=1e-10):
    """``P(tau_psi > t)`` by integrating the passage density over ``[t, T]``."""
    if t >= b.horizon:
        return 0.0
    if t <= 0.0:
        return 1.0
    g = _passage_integrand(b)
    upper = min(math.log(b.horizon / t), _tail_cutoff(g, 1.0))
    return adaptive_simpson(g, 0.0, upper, tol, min_depth=6)


def _position_integrand(b, t):
    bound = psi(b, t)

    # x = psi e^-v
    def g(v):
        x = bound * math.exp(-v)
        if x <= 0.0 or x >= bound:
            return 0.0
        return survival_density_u(b, t, x) * x

    return g, bound


def survival_mass(b, t, tol=1e-10):
    """``int_0^psi(t) u(t, x) dx`` by quadrature."""
    g, bound = _position_integrand(b, t)
    if bound == 0.0:
        return 0.0
    return adaptive_simpson(g, 0.0, _tail_cutoff(g, 1.0), tol, min_depth=6)


def position_cdf(b, t, xs, tol=1e-9):
    """Quadrature CDF of the radius at ``t`` conditioned on survival."""
    xs = np.asarray(xs, dtype=float)
    g, bound = _position_integrand(b, t)
    out = np.empty_like(xs)
    out[xs <= 0.0] = 0.0
    out[xs >= bound] = 1.0
    inside = (xs > 0.0) & (xs < bound)
    if not inside.any():
        return out
    v = np.log(bound / xs[inside])
    order = np.argsort(v)
    v_sorted = v[order]
    cutoff = _tail_cutoff(g, v_sorted[-1])
    knots = np.append(v_sorted, cutoff)
    pieces = np.array([adaptive_simpson(g, knots[i], knots[i + 1], tol) for i in range(len(v_sorted) - 1)]
                      + [adaptive_simpson(g, knots[-2], knots[-1], tol, min_depth=6)])
    head = adaptive_simpson(g, 0.0, v_sorted[0], tol, min_depth=6)
    total = head + pieces.sum()
    cdf_sorted = np.cumsum(pieces[::-1])[::-1] / total
    vals = np.empty_like(v)
    vals[order] = cdf_sorted
    out[inside] = vals
    return out
