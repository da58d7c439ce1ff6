import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from besselhit.errors import ConvergenceError, DomainError
from besselhit.special import SeriesControl, bessel_i, bessel_j, bessel_j_zeros, log_gamma


def test_log_gamma_examples():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert log_gamma(2.0) == pytest.approx(0.0, abs=1e-15)
    assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-13)
    assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-13)


@given(st.floats(0.05, 50.0))
def test_log_gamma_relative_error(x):
    ref = float(mpmath.loggamma(x))
    assert log_gamma(x) == pytest.approx(ref, rel=1e-12, abs=1e-15)


@given(st.floats(0.1, 20.0))
def test_log_gamma_recurrence(x):
    assert math.exp(log_gamma(x + 1.0) - log_gamma(x)) == pytest.approx(x, rel=1e-10)


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        log_gamma(x)


def test_bessel_i_examples():
    assert bessel_i(0.0, 0.0) == 1.0
    assert bessel_i(0.5, 1.0) == pytest.approx(math.sqrt(2.0 / math.pi) * math.sinh(1.0), rel=1e-14)
    assert bessel_i(0.5, 1.0) == pytest.approx(0.9376748, abs=1e-7)
    # closed form sqrt(2/(pi z)) cosh z at z = 2
    assert bessel_i(-0.5, 2.0) == pytest.approx(math.sqrt(1.0 / math.pi) * math.cosh(2.0), rel=1e-14)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.3])
@pytest.mark.parametrize("z", [0.1, 1.0, 3.7, 10.0])
def test_bessel_i_recurrence(nu, z):
    # I_{nu-1} - I_{nu+1} = (2 nu / z) I_nu, with I_{-1} = I_1
    lower = bessel_i(abs(nu - 1.0) if nu == 0.0 else nu - 1.0, z)
    lhs = lower - bessel_i(nu + 1.0, z)
    rhs = 2.0 * nu / z * bessel_i(nu, z)
    assert abs(lhs - rhs) <= 1e-8 * max(abs(rhs), bessel_i(nu + 1.0, z))


@given(st.floats(-0.5, 6.0), st.floats(0.01, 40.0))
@settings(max_examples=60)
def test_bessel_i_against_mpmath(nu, z):
    assert bessel_i(nu, z) == pytest.approx(float(mpmath.besseli(nu, z)), rel=1e-12)


def test_bessel_i_errors():
    with pytest.raises(DomainError):
        bessel_i(-0.5, 0.0)
    with pytest.raises(DomainError):
        bessel_i(-1.0, 1.0)
    with pytest.raises(DomainError):
        bessel_i(0.0, -1.0)
    with pytest.raises(ConvergenceError) as exc:
        bessel_i(0.0, 30.0, SeriesControl(max_terms=3))
    assert exc.value.partial_sum > 0.0
    assert exc.value.terms == 3


def test_series_control_validation():
    with pytest.raises(DomainError):
        SeriesControl(max_terms=0)
    with pytest.raises(DomainError):
        SeriesControl(rel_tol=0.0)
    with pytest.raises(DomainError):
        SeriesControl(rel_tol=1.0)


def test_bessel_j_examples():
    assert bessel_j(0.0, 0.0) == 1.0
    assert bessel_j(1.0, 0.0) == 0.0
    assert abs(bessel_j(0.5, math.pi)) < 1e-10


@given(st.floats(-0.5, 4.0), st.floats(1e-3, 40.0))
@settings(max_examples=80)
def test_bessel_j_against_mpmath(nu, z):
    ref = float(mpmath.besselj(nu, z))
    assert abs(bessel_j(nu, z) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_bessel_j_errors():
    with pytest.raises(DomainError):
        bessel_j(-0.7, 1.0)
    with pytest.raises(ConvergenceError):
        bessel_j(0.0, 20.0, SeriesControl(max_terms=5))


def test_bessel_j_zeros_examples():
    assert bessel_j_zeros(0.0, 1)[0] == pytest.approx(2.4048256, abs=1e-7)
    assert bessel_j_zeros(0.0, 2)[1] == pytest.approx(5.5200781, abs=1e-7)
    z = bessel_j_zeros(0.5, 3)
    for k, v in enumerate(z, start=1):
        assert v == pytest.approx(k * math.pi, abs=1e-9)


@pytest.mark.parametrize("nu", [-0.5, 0.0, 0.5, 1.0, 2.0])
def test_bessel_j_zeros_match_mpmath_and_interlace(nu):
    zs = bessel_j_zeros(nu, 12)
    assert all(b > a for a, b in zip(zs, zs[1:]))
    for k, v in enumerate(zs, start=1):
        if nu >= 0.0:
            assert v == pytest.approx(float(mpmath.besseljzero(nu, k)), abs=1e-9)
        else:
            assert v == pytest.approx((k - 0.5) * math.pi, abs=1e-9)
    upper = bessel_j_zeros(nu + 1.0, 11)
    for k in range(11):
        assert zs[k] < upper[k] < zs[k + 1]


def test_bessel_j_zeros_errors():
    with pytest.raises(DomainError):
        bessel_j_zeros(0.0, 0)
    with pytest.raises(DomainError):
        bessel_j_zeros(-1.0, 3)
