"""Special functions against mpmath oracles, plus recurrence identities."""
import math

import mpmath as mp
import pytest
from hypothesis import given, settings, strategies as st

from xx0.special import (
    PoleError,
    airy,
    bessel_i,
    bessel_j,
    bessel_j_orders,
    gamma_sign,
    log_gamma,
    pochhammer_partition,
)

mp.mp.dps = 30


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.5, 7.3, 30.0, 170.5, -0.5, -2.3, -7.9])
def test_log_gamma_oracle(x):
    lg, s = log_gamma(x)
    ref = mp.loggamma(x)
    assert lg == pytest.approx(float(mp.re(ref) if x > 0 else mp.log(abs(mp.gamma(x)))), rel=1e-13, abs=1e-13)
    assert s == (1 if mp.gamma(x) > 0 else -1)


@pytest.mark.parametrize("x", [0, -1, -5])
def test_log_gamma_poles(x):
    with pytest.raises(PoleError):
        log_gamma(x)


@given(st.floats(0.05, 50))
def test_gamma_recurrence(x):
    # Gamma(x+1) = x Gamma(x)
    assert log_gamma(x + 1)[0] == pytest.approx(log_gamma(x)[0] + math.log(x), abs=1e-12)


@given(st.floats(-8, 8).filter(lambda x: abs(x - round(x)) > 1e-3))
def test_gamma_sign_matches_math(x):
    assert gamma_sign(x) == (1 if math.gamma(x) > 0 else -1)


@pytest.mark.parametrize("n", [0, 1, 2, 5, 12])
@pytest.mark.parametrize("x", [0.3, 2.0, 9.5, 15.0, 40.0])
def test_bessel_oracles(n, x):
    assert bessel_j(n, x) == pytest.approx(float(mp.besselj(n, x)), rel=1e-11, abs=1e-14)
    assert bessel_i(n, x) == pytest.approx(float(mp.besseli(n, x)), rel=1e-11)


def test_bessel_orders_table():
    tab = bessel_j_orders(30, 14.0)
    for n, v in enumerate(tab):
        assert v == pytest.approx(float(mp.besselj(n, 14.0)), rel=1e-10, abs=1e-15)


@given(st.integers(1, 20), st.floats(0.1, 25))
@settings(max_examples=60)
def test_bessel_recurrence(n, x):
    # J_{n-1} + J_{n+1} = (2n/x) J_n
    lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x)
    assert lhs == pytest.approx(2 * n / x * bessel_j(n, x), abs=1e-12)


def test_bessel_trivial():
    assert bessel_j(0, 0.0) == 1.0 and bessel_j(3, 0.0) == 0.0
    assert bessel_i(0, 0.0) == 1.0
    assert bessel_j(3, -2.0) == pytest.approx(-bessel_j(3, 2.0))


@pytest.mark.parametrize("x", [-29.0, -12.0, -5.5, -1.0, 0.0, 0.7, 3.0, 6.5, 12.0, 25.0])
def test_airy_oracle(x):
    ai, aip = airy(x)
    assert ai == pytest.approx(float(mp.airyai(x)), rel=1e-9, abs=1e-15)
    assert aip == pytest.approx(float(mp.airyai(x, derivative=1)), rel=1e-9, abs=1e-15)


def test_airy_range():
    with pytest.raises(ValueError):
        airy(31.0)


@given(st.floats(-20, 10))
@settings(max_examples=40)
def test_airy_wronskian_free_ode(x):
    # Ai'' = x Ai, checked with a central difference of Ai'
    h = 1e-5
    d2 = (airy(x + h)[1] - airy(x - h)[1]) / (2 * h)
    assert d2 == pytest.approx(x * airy(x)[0], abs=1e-6)


def test_pochhammer_partition():
    assert pochhammer_partition(3.0, ()) == 1.0
    # (b)_2 (b-1)_1 at b = 4: 4*5 * 3
    assert pochhammer_partition(4.0, (2, 1)) == 60.0
