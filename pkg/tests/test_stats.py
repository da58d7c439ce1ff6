import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from besselhit.errors import DomainError
from besselhit.rng import RngStream
from besselhit.stats import KS_C01, ks_one_sample, ks_two_sample, histogram, mean_ci


def uniform_cdf(x):
    return np.clip(x, 0.0, 1.0)


def test_ks_null_case():
    res = ks_one_sample(RngStream(1).uniform(10_000), uniform_cdf)
    assert res.passed
    assert res.critical_1pct == pytest.approx(KS_C01 / 100.0)
    assert res.n == (10_000,)


def test_ks_shifted_sample():
    n = 2000
    x = RngStream(2).uniform(n) * 0.8 + 0.2
    res = ks_one_sample(x, uniform_cdf)
    assert res.statistic >= 0.2 - 1.0 / n
    assert not res.passed


def test_ks_single_point():
    assert ks_one_sample([0.5], uniform_cdf).statistic == pytest.approx(0.5)


def test_ks_scalar_cdf_fallback():
    res = ks_one_sample([0.1, 0.4, 0.9], lambda v: min(max(float(v), 0.0), 1.0))
    assert res.statistic == pytest.approx(ks_one_sample([0.1, 0.4, 0.9], uniform_cdf).statistic)


def test_ks_errors():
    with pytest.raises(DomainError):
        ks_one_sample([], uniform_cdf)
    with pytest.raises(DomainError):
        ks_two_sample([1.0], [])


@given(st.lists(st.floats(0.001, 0.999), min_size=1, max_size=60))
def test_ks_invariant_under_monotone_transform(xs):
    x = np.array(xs)
    base = ks_one_sample(x, uniform_cdf).statistic
    # y = exp(3x) with the CDF composed with the inverse map
    moved = ks_one_sample(np.exp(3.0 * x), lambda y: uniform_cdf(np.log(y) / 3.0)).statistic
    assert moved == pytest.approx(base, abs=1e-12)
    assert 0.0 <= base <= 1.0


def test_ks_two_sample():
    s = RngStream(3)
    a, b = s.gaussian(5000), s.gaussian(4000)
    res = ks_two_sample(a, b)
    assert res.passed
    assert res.critical_1pct == pytest.approx(KS_C01 * math.sqrt(9000 / (5000 * 4000)))
    assert not ks_two_sample(a, b + 0.3).passed
    assert ks_two_sample([1.0, 2.0], [3.0, 4.0]).statistic == 1.0
    assert ks_two_sample([1.0, 2.0], [1.0, 2.0]).statistic == 0.0


def test_mean_ci():
    m, h = mean_ci([2.0] * 10, 1.96)
    assert (m, h) == (2.0, 0.0)
    x = np.array([0.0, 1.0] * 5000)
    m, h = mean_ci(x, 1.96)
    assert m == 0.5
    assert h == pytest.approx(1.96 * 0.5 / 100.0, rel=1e-3)
    with pytest.raises(DomainError):
        mean_ci([1.0], 1.96)


def test_mean_ci_shrinks_on_nested_prefixes():
    x = RngStream(4).gaussian(40_000)
    widths = [mean_ci(x[:n], 1.0)[1] for n in (2500, 10_000, 40_000)]
    assert widths[0] > widths[1] > widths[2]
    assert widths[0] / widths[2] == pytest.approx(4.0, rel=0.1)


def test_histogram():
    x = RngStream(5).uniform(1000) * 3.0
    c = histogram(x, 7, (0.5, 2.5))
    assert len(c) == 7
    assert c.sum() == np.count_nonzero((x >= 0.5) & (x <= 2.5))
    assert histogram([1.0, 1.0, 2.0], 5, (1.0, 1.0)).tolist() == [2, 0, 0, 0, 0]
    assert histogram([], 4, (0.0, 1.0)).tolist() == [0, 0, 0, 0]
    assert histogram([1.0], 2, (0.0, 1.0)).tolist() == [0, 1]
    with pytest.raises(DomainError):
        histogram([1.0], 0, (0.0, 1.0))
