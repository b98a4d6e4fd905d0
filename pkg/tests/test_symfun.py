"""Partitions, Schur polynomials and hypergeometric series of partitions."""
import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from xx0.symfun import (
    as_partition,
    c_lambda,
    hyper_pq_truncated,
    partitions,
    schur_eval,
    schur_eval_batch,
    schur_principal,
)
from xx0.symfun import _bialternant, _jacobi_trudi


def _p(n):
    # partition numbers by Euler's pentagonal recurrence
    p = [1] + [0] * n
    for m in range(1, n + 1):
        k, s = 1, 0
        while True:
            g1, g2 = k * (3 * k - 1) // 2, k * (3 * k + 1) // 2
            if g1 > m:
                break
            sign = 1 if k % 2 else -1
            s += sign * p[m - g1]
            if g2 <= m:
                s += sign * p[m - g2]
            k += 1
        p[m] = s
    return p


def test_partition_counts():
    ref = _p(15)
    for k in range(16):
        assert len(list(partitions(k))) == ref[k]


def test_partitions_max_len():
    assert sorted(partitions(4, 2)) == sorted([(4,), (3, 1), (2, 2)])


@pytest.mark.parametrize("n", range(1, 9))
def test_sum_of_squared_dimensions(n):
    # f^lam = n! / hooks, and sum (f^lam)^2 = n!
    tot = sum((math.factorial(n) // c_lambda(lam)) ** 2 for lam in partitions(n))
    assert tot == math.factorial(n)


def test_as_partition_rejects():
    with pytest.raises(ValueError):
        as_partition((1, 2))
    with pytest.raises(ValueError):
        as_partition((2, -1))


def _brute_schur(lam, xs):
    # semistandard tableaux enumeration for tiny shapes
    n = len(xs)
    cells = [(i, j) for i, r in enumerate(lam) for j in range(r)]
    tot = 0
    for fill in product(range(n), repeat=len(cells)):
        T = dict(zip(cells, fill))
        if any(j > 0 and T[(i, j - 1)] > T[(i, j)] for (i, j) in cells):
            continue
        if any(i > 0 and T[(i - 1, j)] >= T[(i, j)] for (i, j) in cells):
            continue
        tot += np.prod([xs[v] for v in fill])
    return tot


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (2, 1), (3, 1), (2, 2), (2, 1, 1)])
def test_schur_tableaux_oracle(lam):
    xs = [0.3, -1.2, 0.7]
    assert schur_eval(lam, xs) == pytest.approx(_brute_schur(lam, xs), abs=1e-12)


@given(st.lists(st.integers(0, 4), min_size=1, max_size=3),
       st.lists(st.complex_numbers(max_magnitude=2.0), min_size=3, max_size=3))
@settings(max_examples=60)
def test_bialternant_vs_jacobi_trudi(parts, xs):
    lam = tuple(sorted((p for p in parts if p), reverse=True))
    if min(abs(a - b) for i, a in enumerate(xs) for b in xs[i + 1:]) < 0.2:
        return
    jt = _jacobi_trudi(lam, xs)
    ba = _bialternant(lam, xs) if lam else 1.0
    assert abs(jt - ba) <= 1e-8 * max(1.0, abs(jt))


@pytest.mark.parametrize("lam", [(1,), (3,), (2, 1), (3, 2, 1), (4, 4)])
@pytest.mark.parametrize("n", [1, 2, 4])
def test_schur_principal_matches_eval(lam, n):
    if len(lam) > n:
        assert schur_principal(lam, n) == 0
        return
    assert schur_eval(lam, [1.0] * n).real == pytest.approx(schur_principal(lam, n))


def test_schur_principal_known():
    assert schur_principal((2, 1), 3) == 8
    assert schur_principal((1, 1, 1, 1), 3) == 0


def test_schur_batch():
    X = np.array([[0.1, 0.2], [1.0, -1.0]])
    out = schur_eval_batch((2, 1), X)
    for b in range(2):
        assert out[b] == pytest.approx(schur_eval((2, 1), X[b]))


@pytest.mark.parametrize("x", [0.3, -0.8, 1.5])
def test_0f0_one_variable_is_exp(x):
    v, tail = hyper_pq_truncated([], [], [x], 30)
    assert v.real == pytest.approx(math.exp(x), rel=1e-13)
    assert tail < 1e-15


def test_1f0_binomial():
    # 1F0(a;;x) = (1-x)^-a in one variable
    v, _ = hyper_pq_truncated([1.5], [], [0.2], 60)
    assert v.real == pytest.approx(0.8 ** -1.5, rel=1e-12)


def test_0f0_two_variables():
    # 0F0 on Schur with 1/hooks = exp(sum x)
    v, _ = hyper_pq_truncated([], [], [0.3, -0.4], 30)
    assert v.real == pytest.approx(math.exp(-0.1), rel=1e-12)
