"""Toeplitz determinants: continuous, discrete, Schur insertions and the multi-sum oracle."""
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xx0.potential import gw_couplings, power_weight, selberg_weight, weight_on_circle
from xx0.selberg import z_selberg
from xx0.toeplitz import (
    DetResult,
    DiscreteDomain,
    discrete_moment_table,
    heine_szego_oracle,
    moment_table,
    poly_eval,
    szego_polynomials,
    toeplitz_det_continuous,
    toeplitz_det_discrete,
)


def _gw(t):
    return weight_on_circle(gw_couplings(), t)


def test_domain_validation():
    with pytest.raises(ValueError):
        DiscreteDomain(0)
    with pytest.raises(ValueError):
        DiscreteDomain(4, 1.1)
    z = DiscreteDomain(5, np.exp(0.3j)).nodes()
    assert np.allclose(z ** 5, np.exp(0.3j))


def test_empty_det():
    assert toeplitz_det_continuous(_gw(1.0), 0).value == 1.0
    assert DetResult.from_matrix(np.zeros((0, 0))).value == 1.0


@pytest.mark.parametrize("N_f", [1, 2, 3, 4])
def test_gw_det_against_mpmath(N_f):
    # independent oracle: mpmath Bessel I moments and determinant
    mp.mp.dps = 30
    m = mp.matrix(N_f, N_f)
    for i in range(N_f):
        for j in range(N_f):
            m[i, j] = mp.besseli(abs(i - j), 2)
    assert toeplitz_det_continuous(_gw(1.0), N_f).real == pytest.approx(float(mp.det(m)), rel=1e-12)


def test_frozen_gw_values():
    # from the mpmath oracle above, frozen
    assert toeplitz_det_continuous(_gw(1.0), 1).real == pytest.approx(2.2795853023360673, rel=1e-13)
    assert toeplitz_det_continuous(_gw(1.0), 2).real == pytest.approx(2.6663835472960837, rel=1e-13)
    assert toeplitz_det_continuous(_gw(1.0), 4).real == pytest.approx(2.718139004839427, rel=1e-13)


def test_gw_large_N_f_tends_to_szego_limit():
    # strong Szego: D -> exp(t^2) for V = z + 1/z
    assert toeplitz_det_continuous(_gw(1.0), 10).real == pytest.approx(math.e, rel=1e-12)


@pytest.mark.parametrize("t", [1, 2, 3])
@pytest.mark.parametrize("N_f", [1, 2, 3, 5])
def test_selberg_integer_t(t, N_f):
    assert toeplitz_det_continuous(selberg_weight(t), N_f).real == pytest.approx(z_selberg(t, N_f), rel=1e-12)


def test_selberg_t2_nf3():
    # integer determinant
    assert toeplitz_det_continuous(selberg_weight(2), 3).real == pytest.approx(50.0, rel=1e-13)


@pytest.mark.parametrize("N_f", [1, 2, 3])
@pytest.mark.parametrize("lam,mu", [((), ()), ((1,), ()), ((2,), (1, 1)), ((2, 1), (1,))])
def test_discrete_vs_multisum_oracle(N_f, lam, mu):
    f = _gw(0.7)
    d = DiscreteDomain(9, np.exp(0.37j))
    if len(lam) > N_f or len(mu) > N_f:
        return
    a = toeplitz_det_discrete(f, N_f, d, lam, mu).value
    b = heine_szego_oracle(f, N_f, d, lam, mu)
    assert abs(a - b) <= 1e-11 * max(1.0, abs(b))


@pytest.mark.parametrize("N_f", [1, 2])
def test_continuous_vs_tensor_oracle(N_f):
    f = _gw(0.5)
    a = toeplitz_det_continuous(f, N_f, (1,), ()).value
    b = heine_szego_oracle(f, N_f, None, (1,), (), nodes=64)
    assert abs(a - b) < 1e-12


def test_discrete_converges_to_continuous():
    # the discrete determinant at N = 24 agrees with the frozen continuous value closely
    f = _gw(1.0)
    cont = toeplitz_det_continuous(f, 3).real
    disc = toeplitz_det_discrete(f, 3, DiscreteDomain(24)).real
    assert disc == pytest.approx(2.7148587394390709, rel=1e-12)
    assert abs(disc - cont) < 1e-12


def test_discrete_moments_alias():
    # moments on z^N = 1 fold: f_k + f_{k +- N} + ...
    f = power_weight({0: 1.0, 3: 2.0, -3: 2.0})
    tab = discrete_moment_table(f, 3, DiscreteDomain(3))
    assert np.allclose(tab, [5, 0, 0, 5, 0, 0, 5])


def test_moment_table_exact_laurent():
    tab = moment_table(selberg_weight(2), 3)
    assert np.allclose(tab, [0, 1, 4, 6, 4, 1, 0])


@given(st.floats(0.05, 2.0), st.integers(1, 5))
@settings(max_examples=30, deadline=None)
def test_szego_orthogonality(t, n):
    f = _gw(t)
    p, pstar = szego_polynomials(f, n)
    th = 2 * np.pi * np.arange(256) / 256
    z = np.exp(1j * th)
    for k in range(n):
        val = np.mean(poly_eval(p, z) * z ** (-k) * f(z))
        assert abs(val) < 1e-10 * max(1.0, f(np.array([1.0]))[0].real)


@given(st.floats(0.0, 1.5), st.floats(0, 2 * np.pi))
@settings(max_examples=30, deadline=None)
def test_rotation_invariance_continuous(t, phi):
    f = _gw(t)
    s = np.exp(1j * phi)
    a = toeplitz_det_continuous(f, 3).real
    b = toeplitz_det_continuous(f.rotate(s), 3).value
    assert abs(a - b) <= 1e-10 * max(1.0, a)


def test_vanishing_insertion():
    # a partition longer than N_f gives zero
    assert toeplitz_det_continuous(_gw(1.0), 1, (1, 1)).value == 0.0
