"""Seedable, counted random variates.

The base generator is counter based: the ``n``-th uniform of a stream with
key ``k`` is ``mix64(k + n * GOLDEN)`` (the SplitMix64 output function), so a
stream is fully described by ``(key, counter)`` and the counter doubles as the
number of uniforms consumed.  Child streams get keys ``mix64(key ^ mix64(i))``;
this is the split rule used for one-stream-per-replication parallelism.

Kernels operate on a 2-element ``uint64`` state array ``[key, counter]`` so
they can be shared by the numba and plain-Python paths.
"""

import math

import numpy as np

from ._accel import jit
from .errors import DomainError

__all__ = [
    "RngStream",
    "uniform",
    "gaussian",
    "gamma",
    "beta",
    "sphere_first_coordinate",
]

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_SPLIT = np.uint64(0xD1B54A32D192ED03)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_TWO_M53 = 1.0 / 9007199254740992.0
_TWO_PI = 2.0 * math.pi


@jit
def mix64(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@jit
def child_key(key, index):
    return mix64(key ^ mix64(np.uint64(index) * _SPLIT + GOLDEN))


@jit
def next_uniform(state):
    # redraw on 0 so that the value lies strictly inside (0, 1)
    while True:
        state[1] += _ONE
        bits = mix64(state[0] + state[1] * GOLDEN)
        u = np.float64(bits >> _S11) * _TWO_M53
        if u > 0.0:
            return u


@jit
def next_gaussian(state):
    # Box-Muller, cosine branch only: two uniforms per variate
    u1 = next_uniform(state)
    u2 = next_uniform(state)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(_TWO_PI * u2)


@jit
def _gamma_johnk(state, shape):
    # Johnk: X/(X+Y) ~ Beta(a, 1-a) on acceptance, times an Exp(1).
    # Worked in logs so that U^(1/a) cannot underflow for small shapes.
    inv_a = 1.0 / shape
    inv_b = 1.0 / (1.0 - shape)
    while True:
        lx = math.log(next_uniform(state)) * inv_a
        ly = math.log(next_uniform(state)) * inv_b
        hi = max(lx, ly)
        lsum = hi + math.log(math.exp(lx - hi) + math.exp(ly - hi))
        if lsum <= 0.0:
            e = -math.log(next_uniform(state))
            return e * math.exp(lx - lsum)


@jit
def _gamma_marsaglia_tsang(state, shape):
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        x = next_gaussian(state)
        v = 1.0 + c * x
        if v <= 0.0:
            continue
        v = v * v * v
        u = next_uniform(state)
        x2 = x * x
        if u < 1.0 - 0.0331 * x2 * x2:
            return d * v
        if math.log(u) < 0.5 * x2 + d * (1.0 - v + math.log(v)):
            return d * v


@jit
def next_gamma(state, shape):
    """Gamma(shape, 1): Johnk below shape 1, Marsaglia-Tsang from 1 on."""
    if shape < 1.0:
        while True:
            g = _gamma_johnk(state, shape)
            if g > 0.0:
                return g
    return _gamma_marsaglia_tsang(state, shape)


@jit
def next_beta(state, a, b):
    x = next_gamma(state, a)
    y = next_gamma(state, b)
    return x / (x + y)


@jit
def next_sphere_first_coordinate(state, d):
    if d == 1:
        return 1.0 if next_uniform(state) < 0.5 else -1.0
    h = 0.5 * (d - 1)
    return 2.0 * next_beta(state, h, h) - 1.0


# Array fill loops: keep per-variate call overhead out of Python.

@jit
def _fill_uniform(state, out):
    for i in range(out.shape[0]):
        out[i] = next_uniform(state)


@jit
def _fill_gaussian(state, out):
    for i in range(out.shape[0]):
        out[i] = next_gaussian(state)


@jit
def _fill_gamma(state, shape, out):
    for i in range(out.shape[0]):
        out[i] = next_gamma(state, shape)


@jit
def _fill_beta(state, a, b, out):
    for i in range(out.shape[0]):
        out[i] = next_beta(state, a, b)


@jit
def _fill_sphere(state, d, out):
    for i in range(out.shape[0]):
        out[i] = next_sphere_first_coordinate(state, d)


def seed_key(seed):
    """Map a user seed (any non-negative int) to a 64-bit stream key."""
    seed = int(seed)
    if seed < 0:
        raise DomainError(f"seed must be non-negative, got {seed}")
    return mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) ^ _SPLIT)


class RngStream:
    """A single-owner uniform source with a monotone draw counter.

    >>> s = RngStream(7)
    >>> 0.0 < s.uniform() < 1.0
    True
    >>> s.draw_count
    1
    """

    __slots__ = ("seed", "state")

    def __init__(self, seed=0, *, key=None):
        self.seed = int(seed)
        k = seed_key(seed) if key is None else np.uint64(key)
        self.state = np.array([k, 0], dtype=np.uint64)

    @property
    def key(self):
        return int(self.state[0])

    @property
    def draw_count(self):
        return int(self.state[1])

    def split(self, index):
        """Child stream number ``index``; does not consume parent draws."""
        if index < 0:
            raise DomainError(f"child index must be non-negative, got {index}")
        return RngStream(self.seed, key=child_key(self.state[0], np.uint64(index)))

    def spawn(self, n):
        return [self.split(i) for i in range(n)]

    def uniform(self, size=None):
        if size is None:
            return float(next_uniform(self.state))
        out = np.empty(int(size))
        _fill_uniform(self.state, out)
        return out

    def gaussian(self, size=None):
        if size is None:
            return float(next_gaussian(self.state))
        out = np.empty(int(size))
        _fill_gaussian(self.state, out)
        return out

    def gamma(self, shape, size=None):
        shape = float(shape)
        if not shape > 0.0:
            raise DomainError(f"gamma shape must be > 0, got {shape}")
        if size is None:
            return float(next_gamma(self.state, shape))
        out = np.empty(int(size))
        _fill_gamma(self.state, shape, out)
        return out

    def beta(self, a, b, size=None):
        a, b = float(a), float(b)
        if not (a > 0.0 and b > 0.0):
            raise DomainError(f"beta parameters must be > 0, got ({a}, {b})")
        if size is None:
            return float(next_beta(self.state, a, b))
        out = np.empty(int(size))
        _fill_beta(self.state, a, b, out)
        return out

    def sphere_first_coordinate(self, d, size=None):
        if int(d) != d or d < 1:
            raise DomainError(f"sphere dimension must be an integer >= 1, got {d}")
        d = int(d)
        if size is None:
            return float(next_sphere_first_coordinate(self.state, d))
        out = np.empty(int(size))
        _fill_sphere(self.state, d, out)
        return out

    def __repr__(self):
        return f"RngStream(seed={self.seed}, key={self.key:#x}, draws={self.draw_count})"


def uniform(stream):
    return stream.uniform()


def gaussian(stream):
    return stream.gaussian()


def gamma(stream, shape):
    return stream.gamma(shape)


def beta(stream, a, b):
    return stream.beta(a, b)


def sphere_first_coordinate(stream, d):
    return stream.sphere_first_coordinate(d)
