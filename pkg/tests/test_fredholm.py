"""Fredholm determinants: indexed kernels, Bessel/double-contour kernels, ratio kernel, Tracy-Widom."""
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xx0.fredholm import (
    ConvergenceError,
    DiscreteKernel,
    KernelGrid,
    airy_kernel,
    bessel_fd,
    bessel_kernel,
    bessel_kernel_ratio,
    fit_left_tail_constant,
    fredholm_det_indexed,
    general_fd,
    general_kernel_G,
    ratio_fd,
    ratio_fd_nystrom,
    szego_constant,
    tracy_widom_cdf,
    tracy_widom_logcdf,
    tw_tail_log,
    z_discrete_via_fd,
)
from xx0.potential import CouplingVector, gw_couplings, weight_on_circle, zero_couplings
from xx0.toeplitz import DiscreteDomain, toeplitz_det_continuous, toeplitz_det_discrete


# ---------------------------------------------------------------- indexed kernels

def test_zero_kernel():
    assert fredholm_det_indexed(DiscreteKernel(lambda k, l: 0.0, 3)) == 1.0


def test_rank_one_kernel():
    # det(I - a a^T) = 1 - |a|^2
    a = lambda k: 0.5 ** (k + 1)
    K = DiscreteKernel(lambda k, l: a(k) * a(l), 0)
    assert fredholm_det_indexed(K) == pytest.approx(1 - (1 / 3), abs=1e-12)


def test_indexed_nonconvergence():
    K = DiscreteKernel(lambda k, l: 0.1 if k == l else 0.0, 0)
    with pytest.raises(ConvergenceError):
        fredholm_det_indexed(K, Mmax=64)


def test_kernel_grid_validation():
    with pytest.raises(ValueError):
        KernelGrid(0.0, 4)
    x, w = KernelGrid(1.0, 40).nodes_weights()
    # integral of e^{-(x-1)} over [1, inf) is 1
    assert np.sum(w * np.exp(-(x - 1.0))) == pytest.approx(1.0, abs=1e-6)


# ---------------------------------------------------------------- Bessel kernel

def test_bessel_kernel_t0():
    assert bessel_kernel(2, 3, 0.0) == 0.0
    assert bessel_fd(0.0, 3) == 1.0


def test_bessel_kernel_series_oracle():
    mp.mp.dps = 30
    ref = mp.nsum(lambda n: mp.besselj(2 + n, 2) * mp.besselj(4 + n, 2), [1, mp.inf])
    assert bessel_kernel(2, 4, 1.0) == pytest.approx(float(ref), abs=1e-15)


@given(st.integers(0, 10), st.integers(0, 10), st.floats(0.1, 3.0))
@settings(max_examples=60)
def test_bessel_two_forms(k, l, t):
    if k == l:
        with pytest.raises(ValueError):
            bessel_kernel_ratio(k, l, t)
        return
    assert bessel_kernel_ratio(k, l, t) == pytest.approx(bessel_kernel(k, l, t), abs=1e-12)


@given(st.integers(0, 8), st.integers(0, 8), st.floats(0.1, 2.0))
@settings(max_examples=30)
def test_bessel_kernel_symmetric(k, l, t):
    assert bessel_kernel(k, l, t) == pytest.approx(bessel_kernel(l, k, t), abs=1e-15)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("N_f", [1, 3, 6])
def test_bessel_partition_identity(t, N_f):
    f = weight_on_circle(gw_couplings(), t)
    lhs = math.exp(t * t) * bessel_fd(t, N_f)
    assert lhs == pytest.approx(toeplitz_det_continuous(f, N_f).real, rel=1e-9)


# ---------------------------------------------------------------- double-contour kernel

@pytest.mark.parametrize("k,l", [(0, 0), (1, 3), (4, 2), (5, 5)])
def test_general_kernel_similar_to_bessel(k, l):
    # the contour potential gives G = (-1)^{k+l} G_Be: same determinant
    t = 0.8
    assert general_kernel_G(k, l, gw_couplings(), t) == pytest.approx((-1) ** (k + l) * bessel_kernel(k, l, t), abs=1e-9)


def test_general_kernel_rho_independent():
    cv = CouplingVector((0.4, 0.2))
    a = general_kernel_G(2, 3, cv, 1.0, rho=0.5)
    b = general_kernel_G(2, 3, cv, 1.0, rho=0.7)
    assert a == pytest.approx(b, abs=1e-9)
    with pytest.raises(ValueError):
        general_kernel_G(0, 0, cv, 1.0, rho=0.95)


def test_szego_constant_gw():
    assert szego_constant(gw_couplings(), 1.3) == pytest.approx(math.exp(1.3 ** 2))


@pytest.mark.parametrize("deltas", [(1.0,), (0.4, 0.2), (0.3, -0.2, 0.1)])
@pytest.mark.parametrize("N_f", [1, 3])
def test_general_fd_identity(deltas, N_f):
    cv = CouplingVector(deltas)
    t = 1.0
    f = weight_on_circle(cv, t)
    lhs = szego_constant(cv, t) * general_fd(cv, t, N_f)
    assert lhs == pytest.approx(toeplitz_det_continuous(f, N_f).real, rel=1e-8)


# ---------------------------------------------------------------- ratio kernel

@pytest.mark.parametrize("N_f,N,s", [(2, 8, 1.0), (3, 12, np.exp(0.37j)), (1, 5, 1.0)])
def test_ratio_fd_identity(N_f, N, s):
    f = weight_on_circle(gw_couplings(), 0.9)
    d = DiscreteDomain(N, s)
    ref = toeplitz_det_discrete(f, N_f, d).value / toeplitz_det_continuous(f, N_f).real
    assert abs(ratio_fd(f, N_f, d) - ref) < 1e-9


def test_ratio_fd_independent_of_eps():
    f = weight_on_circle(gw_couplings(), 1.0)
    d = DiscreteDomain(10)
    assert ratio_fd(f, 3, d, eps=1e-3) == pytest.approx(ratio_fd(f, 3, d, eps=0.2), abs=1e-10)


def test_ratio_fd_nystrom_dual_route():
    f = weight_on_circle(gw_couplings(), 0.8)
    d = DiscreteDomain(10)
    ref = toeplitz_det_discrete(f, 2, d).real / toeplitz_det_continuous(f, 2).real
    a = ratio_fd_nystrom(f, 2, d, eps=0.3, M=256)
    assert abs(a - ref) < 1e-8
    assert abs(a - ratio_fd(f, 2, d)) < 1e-8


def test_z_discrete_via_fd():
    f = weight_on_circle(gw_couplings(), 1.0)
    d = DiscreteDomain(9)
    ref = toeplitz_det_discrete(f, 3, d).real
    assert z_discrete_via_fd(f, 3, d) == pytest.approx(ref, rel=1e-8)
    f0 = weight_on_circle(zero_couplings(), 0.0)
    assert z_discrete_via_fd(f0, 2, DiscreteDomain(6)) == pytest.approx(toeplitz_det_discrete(f0, 2, DiscreteDomain(6)).real)


# ---------------------------------------------------------------- Tracy-Widom

# independent mpmath oracle: Gauss-Legendre on [x, x+16] with 120 nodes,
# mpmath airyai at 30 digits; self-consistency about 1e-14
TW_ORACLE = {
    -3.0: 0.08031955293933452,
    -2.0: 0.413224142505121,
    -1.0: 0.807214241999284,
    0.0: 0.9693728283552621,
    1.0: 0.9975054381493893,
    2.0: 0.99988755369831,
}


@pytest.mark.parametrize("x", sorted(TW_ORACLE))
def test_tw_against_oracle(x):
    assert tracy_widom_cdf(x) == pytest.approx(TW_ORACLE[x], abs=1e-12)


def test_tw_monotone_and_bounds():
    xs = np.arange(-10.0, 6.0 + 1e-9, 0.1)
    F = np.array([tracy_widom_cdf(x) for x in xs])
    assert np.all(np.diff(F) >= -1e-14)
    assert tracy_widom_cdf(-12.0) < 1e-6
    assert 1 - tracy_widom_cdf(7.0) < 1e-8
    assert tracy_widom_cdf(6.0) > 1 - 1e-5


def test_tw_domain():
    with pytest.raises(ValueError):
        tracy_widom_cdf(-13.0)
    with pytest.raises(ValueError):
        tracy_widom_cdf(9.0)


def test_tw_node_doubling_stable():
    a = tracy_widom_logcdf(-4.0, n0=64)
    b = tracy_widom_logcdf(-4.0, n0=128)
    assert a == pytest.approx(b, abs=1e-10)


def test_airy_kernel_diagonal_continuous():
    assert airy_kernel(0.3, 0.3 + 1e-5) == pytest.approx(airy_kernel(0.3, 0.3), rel=1e-4)


def test_left_tail_constant_oracle():
    # closed form 2^{1/24} exp(zeta'(-1))
    ref = float(mp.mpf(2) ** (mp.mpf(1) / 24) * mp.exp(mp.zeta(-1, derivative=1)))
    assert fit_left_tail_constant() == pytest.approx(ref, rel=2e-3)


def test_left_tail_asymptotic():
    for x in (-8.0, -9.0):
        assert tw_tail_log(x, "left") == pytest.approx(tracy_widom_logcdf(x), abs=5e-3)


def test_right_tail_leading_behaviour():
    # log(1-F) + (4/3) x^{3/2} + log(16 pi x^{3/2}) -> 0 like x^{-3/2}
    def resid(x):
        return math.log(-tracy_widom_logcdf(x)) + (4 / 3) * x ** 1.5 + math.log(16 * math.pi * x ** 1.5)

    r3, r5 = resid(3.0), resid(5.0)
    assert abs(r5) < abs(r3) < 0.3
    assert abs(r5) < 0.15
    # the literal 32 pi constant is off by log 2
    assert tw_tail_log(5.0, "right") == pytest.approx(math.log(-tracy_widom_logcdf(5.0)) - math.log(2) - r5, abs=1e-9)


def test_tail_domains():
    with pytest.raises(ValueError):
        tw_tail_log(1.0, "right")
    with pytest.raises(ValueError):
        tw_tail_log(-2.0, "left")
    with pytest.raises(ValueError):
        tw_tail_log(4.0, "up")


@pytest.mark.parametrize("x,side", [(4.0, "right"), (-4.0, "left")])
def test_tail_crossover(x, side):
    # on a log scale both tail formulas meet the determinant at |x| = 4
    exact = math.log(-tracy_widom_logcdf(x)) if side == "right" else tracy_widom_logcdf(x)
    assert tw_tail_log(x, side) == pytest.approx(exact, rel=0.15)


def test_left_tail_exponent():
    lf = tracy_widom_logcdf(-10.0)
    assert math.exp(lf) < 1e-3
    assert lf == pytest.approx(-1000 / 12, rel=0.15)
