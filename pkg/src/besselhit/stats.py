"""Kolmogorov-Smirnov tests, confidence intervals and histograms."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = ["KS_C01", "KsResult", "ks_one_sample", "ks_two_sample", "mean_ci", "histogram"]

# asymptotic 1% critical coefficient of the Kolmogorov distribution
KS_C01 = 1.6276


@dataclass(frozen=True)
class KsResult:
    statistic: float
    n: tuple
    critical_1pct: float

    @property
    def passed(self):
        return self.statistic < self.critical_1pct


def _sorted_sample(samples, name="samples"):
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    if x.size == 0:
        raise DomainError(f"{name} must be non-empty")
    if np.isnan(x).any():
        raise DomainError(f"{name} contain NaN")
    return x


def ks_one_sample(samples, cdf):
    """Sup-distance between the empirical CDF of ``samples`` and ``cdf``.

    ``cdf`` may be vectorized; it is called once on the sorted sample if it
    accepts an array, otherwise point by point.
    """
    x = _sorted_sample(samples)
    n = x.size
    try:
        f = np.asarray(cdf(x), dtype=float)
        if f.shape != x.shape:
            raise TypeError
    except (TypeError, ValueError, DomainError):
        f = np.array([float(cdf(v)) for v in x])
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    stat = float(min(1.0, max(d_plus, d_minus, 0.0)))
    return KsResult(stat, (n,), KS_C01 / math.sqrt(n))


def ks_two_sample(a, b):
    """Two-sample KS statistic, evaluated at every jump of either sample."""
    x = _sorted_sample(a, "first sample")
    y = _sorted_sample(b, "second sample")
    n, m = x.size, y.size
    grid = np.concatenate([x, y])
    fx = np.searchsorted(x, grid, side="right") / n
    fy = np.searchsorted(y, grid, side="right") / m
    stat = float(np.max(np.abs(fx - fy)))
    return KsResult(stat, (n, m), KS_C01 * math.sqrt((n + m) / (n * m)))


def mean_ci(samples, z=1.96):
    """Sample mean and the half-width ``z s / sqrt(n)``."""
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < 2:
        raise DomainError(f"mean_ci needs at least 2 samples, got {x.size}")
    return float(x.mean()), float(z * x.std(ddof=1) / math.sqrt(x.size))


def histogram(samples, bins, range):
    """Counts over ``bins`` equal-width bins on ``range``; out-of-range samples are dropped.

    A degenerate range ``(c, c)`` puts every sample equal to ``c`` in the first bin.
    """
    if int(bins) != bins or bins < 1:
        raise DomainError(f"bins must be an integer >= 1, got {bins}")
    bins = int(bins)
    lo, hi = float(range[0]), float(range[1])
    if hi < lo:
        raise DomainError(f"range must satisfy lo <= hi, got ({lo}, {hi})")
    x = np.asarray(samples, dtype=float).ravel()
    counts = np.zeros(bins, dtype=np.int64)
    if hi == lo:
        counts[0] = int(np.count_nonzero(x == lo))
        return counts
    inside = x[(x >= lo) & (x <= hi)]
    idx = np.floor((inside - lo) / (hi - lo) * bins).astype(np.int64)
    np.clip(idx, 0, bins - 1, out=idx)
    counts += np.bincount(idx, minlength=bins)
    return counts
