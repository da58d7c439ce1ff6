import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from besselhit.boundary import (
    POSITION_ENVELOPE,
    boundary_from_horizon,
    make_boundary,
    phi,
    psi,
    rejection_constant,
    sample_position_given_survival,
    sample_position_kernel,
    sample_tau_psi,
    survival_density_u,
    tau_psi_density,
)
from besselhit.errors import DomainError, RejectionCapError
from besselhit.oracles import adaptive_simpson, position_cdf, survival_mass, tau_psi_cdf, tau_psi_survival
from besselhit.rng import RngStream
from besselhit.stats import ks_one_sample, ks_two_sample


def unit_a(delta):
    return math.gamma(delta / 2) * 2 ** (delta / 2 - 1)


@pytest.mark.parametrize("delta", [0.3, 0.7, 1.0, 2.7, 9.5])
def test_unit_horizon(delta):
    assert make_boundary(unit_a(delta), delta).horizon == pytest.approx(1.0, rel=1e-12)


def test_make_boundary_examples():
    b = make_boundary(2.0, 2.0)
    assert b.horizon == pytest.approx(2.0, rel=1e-14)
    assert b.peak == pytest.approx(math.sqrt(4.0 / math.e), rel=1e-14)
    assert b.peak == pytest.approx(1.2130613, abs=1e-7)
    assert b.peak**2 == pytest.approx(b.delta * b.horizon / math.e, rel=1e-14)


@pytest.mark.parametrize("a, delta", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0), (math.inf, 1.0)])
def test_make_boundary_domain(a, delta):
    with pytest.raises(DomainError):
        make_boundary(a, delta)


def test_boundary_from_horizon_round_trip():
    b = make_boundary(3.3, 2.7)
    c = boundary_from_horizon(b.horizon, 2.7)
    assert c.a == pytest.approx(3.3, rel=1e-12)
    with pytest.raises(DomainError):
        boundary_from_horizon(0.0, 1.0)


def test_psi_examples():
    b = make_boundary(2.0, 2.0)
    assert psi(b, b.horizon) == 0.0
    assert psi(b, 0.0) == 0.0
    assert psi(b, b.t_peak) == pytest.approx(b.peak, rel=1e-14)
    assert psi(b, 1.0) == pytest.approx(math.sqrt(2.0 * math.log(2.0)), rel=1e-14)
    assert psi(b, 1.0) == pytest.approx(1.1774100, abs=1e-7)
    with pytest.raises(DomainError):
        psi(b, -0.1)
    with pytest.raises(DomainError):
        psi(b, 2.5)


def test_phi_profile():
    assert phi(0.0) == phi(1.0) == 0.0
    assert phi(1.0 / math.e) == pytest.approx(math.exp(-0.5), rel=1e-14)
    assert phi(1.5) == 0.0


@given(st.floats(0.05, 20.0), st.floats(0.2, 8.0), st.floats(1e-6, 1.0 - 1e-6))
@settings(max_examples=100)
def test_scaling_identity(a, delta, u):
    b = make_boundary(a, delta)
    t = u * b.horizon
    assert psi(b, t) ** 2 == pytest.approx(delta * b.horizon * phi(u) ** 2, rel=1e-12)


def test_peak_is_max_on_grid():
    b = make_boundary(1.7, 3.1)
    grid = np.linspace(0.0, b.horizon, 200_001)
    vals = np.array([psi(b, t) for t in grid])
    assert vals.max() == pytest.approx(b.peak, rel=1e-10)


def test_density_examples():
    b = make_boundary(2.0, 2.0)
    assert tau_psi_density(b, 1.0) == pytest.approx(0.25 * 2.0 * math.log(2.0), rel=1e-14)
    assert tau_psi_density(b, 3.0) == 0.0
    with pytest.raises(DomainError):
        tau_psi_density(b, 0.0)


@pytest.mark.parametrize("delta", [0.5, 1.0, 2.7])
def test_density_normalized(delta):
    b = make_boundary(1.3, delta)
    total = adaptive_simpson(lambda s: tau_psi_density(b, b.horizon * math.exp(-s)) * b.horizon * math.exp(-s) if s > 0 else 0.0,
                             0.0, 80.0 / delta, 1e-11)
    assert total == pytest.approx(1.0, abs=1e-8)
    assert tau_psi_survival(b, 1e-300 * b.horizon) == pytest.approx(1.0, abs=1e-8)


def test_sample_tau_support_and_mean():
    b = make_boundary(2.0, 2.0)
    s = RngStream(17)
    x = np.array([sample_tau_psi(b, s) for _ in range(100_000)])
    assert ((x > 0.0) & (x <= b.horizon)).all()
    se = x.std(ddof=1) / math.sqrt(x.size)
    assert abs(x.mean() - 0.5) <= 3.0 * se


@pytest.mark.parametrize("delta", [0.7, 2.7])
def test_sample_tau_moments(delta):
    b = make_boundary(1.0, delta)
    s = RngStream(29)
    x = np.array([sample_tau_psi(b, s) for _ in range(100_000)])
    for m in (1, 2):
        expected = b.horizon**m * (delta / (delta + 2 * m)) ** (delta / 2 + 1)
        v = x**m
        assert abs(v.mean() - expected) <= 3.0 * v.std(ddof=1) / math.sqrt(v.size)


def test_sample_tau_ks_against_quadrature():
    b = make_boundary(0.8, 1.6)
    s = RngStream(30)
    x = np.array([sample_tau_psi(b, s) for _ in range(10_000)])
    assert ks_one_sample(x, lambda t: tau_psi_cdf(b, t)).passed


def test_survival_density_sign_structure():
    b = make_boundary(2.0, 2.0)
    t = 0.7
    edge = psi(b, t)
    assert abs(survival_density_u(b, t, edge, clamp=False)) < 1e-12
    assert survival_density_u(b, t, edge) == 0.0
    for x in np.linspace(1e-3, edge * 0.999, 50):
        assert survival_density_u(b, t, x) > 0.0
    for x in (edge * 1.001, edge * 2):
        assert survival_density_u(b, t, x, clamp=False) <= 0.0
        assert survival_density_u(b, t, x) == 0.0
    assert survival_density_u(b, t, 0.0) == 0.0
    with pytest.raises(DomainError):
        survival_density_u(b, 0.0, 0.1)
    with pytest.raises(DomainError):
        survival_density_u(b, t, -0.1)


def test_survival_mass_matches_tail_of_passage_density():
    b = make_boundary(2.0, 2.0)
    assert survival_mass(b, 0.7) == pytest.approx(tau_psi_survival(b, 0.7), abs=1e-6)


def test_rejection_constant_dominates():
    b = make_boundary(1.4, 2.7)
    t = b.t_peak
    c = rejection_constant(b, t)
    edge = psi(b, t)
    for x in np.linspace(1e-6, edge, 400):
        r = b.delta * x ** (b.delta - 1) / edge**b.delta
        assert survival_density_u(b, t, x) <= c * r * (1 + 1e-12)


@pytest.mark.parametrize("method", ["envelope", "chi", "auto"])
def test_position_support(method):
    b = make_boundary(2.0, 0.7)
    t = 0.9 * b.t_peak
    s = RngStream(3)
    edge = psi(b, t)
    for _ in range(2000):
        x = sample_position_given_survival(b, t, s, method=method)
        assert 0.0 <= x <= edge


def test_position_ks_against_quadrature():
    b = make_boundary(2.0, 0.7)
    t = 0.9 * b.horizon / math.e
    s = RngStream(31)
    x = np.array([sample_position_given_survival(b, t, s) for _ in range(10_000)])
    assert ks_one_sample(x, lambda v: position_cdf(b, t, v)).passed


@pytest.mark.parametrize("delta, frac", [(1.0, 0.05), (4.2, 0.01), (0.6, 0.5)])
def test_position_methods_agree(delta, frac):
    b = make_boundary(1.0, delta)
    t = frac * b.horizon
    s1, s2 = RngStream(41), RngStream(42)
    a = np.array([sample_position_given_survival(b, t, s1, method="envelope") for _ in range(5000)])
    c = np.array([sample_position_given_survival(b, t, s2, method="chi") for _ in range(5000)])
    assert ks_two_sample(a, c).passed


def test_acceptance_rate_matches_mass_over_constant():
    b = make_boundary(1.0, 2.7)
    t = b.t_peak
    s = RngStream(77)
    n = 20_000
    attempts = np.array([sample_position_kernel(s.state, t, b.delta, b.horizon, 10**6, POSITION_ENVELOPE)[1] for _ in range(n)])
    trials = attempts.sum()
    p = survival_mass(b, t) / rejection_constant(b, t)
    rate = n / trials
    # attempts per accepted draw are geometric with mean 1/p
    se = math.sqrt((1 - p) / p**2 / n)
    assert abs(attempts.mean() - 1.0 / p) <= 3.0 * se
    assert 0.0 < rate <= 1.0


def test_position_rejection_cap():
    b = make_boundary(1.0, 2.7)
    with pytest.raises(RejectionCapError):
        sample_position_given_survival(b, 1e-30 * b.horizon, RngStream(0), cap=1, method="envelope")
    with pytest.raises(DomainError):
        sample_position_given_survival(b, b.horizon, RngStream(0))
    with pytest.raises(DomainError):
        sample_position_given_survival(b, 0.5, RngStream(0), method="bogus")
