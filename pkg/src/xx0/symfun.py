"""Partitions, Schur polynomials and the hypergeometric series of partitions."""
import math
import warnings
from fractions import Fraction

import numpy as np

from .special import pochhammer_partition

__all__ = [
    "as_partition",
    "partitions",
    "partitions_upto",
    "cells",
    "schur_eval",
    "schur_eval_batch",
    "schur_principal",
    "c_lambda",
    "hyper_pq_truncated",
    "DegenerateError",
    "PoleError",
]

COINCIDENCE_TOL = 1e-9


class DegenerateError(ArithmeticError):
    """Both Schur evaluation paths failed."""


class PoleError(ZeroDivisionError):
    """A denominator Pochhammer symbol vanished."""


def as_partition(lam):
    """Validate and return ``lam`` as a tuple of positive weakly decreasing ints."""
    parts = tuple(int(p) for p in lam if int(p) != 0)
    if any(p < 0 for p in parts):
        raise ValueError(f"negative part in {lam}")
    if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
        raise ValueError(f"{lam} is not weakly decreasing")
    return parts


def partitions(k, max_len=None):
    """Partitions of ``k`` in reverse-lexicographic order."""
    if k == 0:
        yield ()
        return
    if max_len is not None and max_len <= 0:
        return

    def rec(remaining, largest, depth):
        if remaining == 0:
            yield ()
            return
        if max_len is not None and depth >= max_len:
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - first, first, depth + 1):
                yield (first,) + rest

    yield from rec(k, k, 0)


def partitions_upto(max_weight, max_len=None):
    """All partitions of weight <= ``max_weight``, shell by shell."""
    for k in range(max_weight + 1):
        yield from partitions(k, max_len)


def cells(lam):
    """Yield ``(i, j, arm, leg, content)`` for every cell of ``lam`` (0-based i, j)."""
    lam = as_partition(lam)
    conj = [sum(1 for p in lam if p > j) for j in range(lam[0])] if lam else []
    for i, li in enumerate(lam):
        for j in range(li):
            yield i, j, li - j - 1, conj[j] - i - 1, j - i


def c_lambda(lam):
    """Product of hook lengths."""
    out = 1
    for _, _, a, l, _ in cells(lam):
        out *= a + l + 1
    return out


def schur_principal(lam, n):
    """Schur polynomial at ``n`` ones via the hook-content formula (exact integer)."""
    lam = as_partition(lam)
    if len(lam) > n:
        return 0
    out = Fraction(1)
    for _, _, a, l, c in cells(lam):
        out *= Fraction(n + c, a + l + 1)
    assert out.denominator == 1
    return int(out)


def _complete_homogeneous(xs, kmax):
    h = np.zeros(kmax + 1, dtype=complex)
    h[0] = 1.0
    for x in xs:
        for k in range(1, kmax + 1):
            h[k] = h[k] + x * h[k - 1]
    return h


def _jacobi_trudi(lam, xs):
    ell = len(lam)
    if ell == 0:
        return 1.0 + 0j
    kmax = lam[0] + ell
    h = _complete_homogeneous(xs, kmax)
    m = np.zeros((ell, ell), dtype=complex)
    for i in range(ell):
        for j in range(ell):
            k = lam[i] - i + j
            m[i, j] = h[k] if 0 <= k <= kmax else 0.0
    return np.linalg.det(m)


def _bialternant(lam, xs):
    n = len(xs)
    lam = list(lam) + [0] * (n - len(lam))
    x = np.asarray(xs, dtype=complex)
    num = np.array([[xi ** (lam[j] + n - 1 - j) for j in range(n)] for xi in x])
    den = np.array([[xi ** (n - 1 - j) for j in range(n)] for xi in x])
    d = np.linalg.det(den)
    if d == 0:
        raise ZeroDivisionError
    return np.linalg.det(num) / d


def _min_gap(xs):
    x = np.asarray(xs, dtype=complex)
    if len(x) < 2:
        return math.inf
    diff = np.abs(x[:, None] - x[None, :])
    diff[np.diag_indices(len(x))] = math.inf
    return float(diff.min())


def schur_eval(lam, xs):
    """Schur polynomial ``S_lam(xs)``.

    Uses the bialternant formula for well separated nodes and the Jacobi-Trudi
    determinant in complete homogeneous polynomials when two nodes coincide to
    within 1e-9.
    """
    lam = as_partition(lam)
    xs = list(xs)
    if len(lam) > len(xs):
        raise ValueError("partition longer than the number of variables")
    if not lam:
        return 1.0 + 0j
    if _min_gap(xs) >= COINCIDENCE_TOL:
        try:
            v = _bialternant(lam, xs)
            if np.isfinite(v):
                return complex(v)
        except (ZeroDivisionError, np.linalg.LinAlgError):
            pass
    try:
        v = _jacobi_trudi(lam, xs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateError(str(exc)) from exc
    if not np.isfinite(v):
        raise DegenerateError(f"Schur evaluation failed for {lam}")
    return complex(v)


def schur_eval_batch(lam, X):
    """Schur polynomial on each row of ``X`` (shape ``(B, n)``)."""
    lam = as_partition(lam)
    X = np.asarray(X, dtype=complex)
    B, n = X.shape
    if not lam:
        return np.ones(B, dtype=complex)
    if len(lam) > n:
        raise ValueError("partition longer than the number of variables")
    ext = list(lam) + [0] * (n - len(lam))
    num_pows = np.array([ext[j] + n - 1 - j for j in range(n)])
    den_pows = np.arange(n - 1, -1, -1)
    num = X[:, :, None] ** num_pows[None, None, :]
    den = X[:, :, None] ** den_pows[None, None, :]
    dd = np.linalg.det(den)
    diff = np.abs(X[:, :, None] - X[:, None, :])
    diff[:, np.arange(n), np.arange(n)] = np.inf
    ok = diff.reshape(B, -1).min(axis=1) >= COINCIDENCE_TOL if n > 1 else np.ones(B, bool)
    out = np.empty(B, dtype=complex)
    out[ok] = np.linalg.det(num[ok]) / dd[ok]
    for b in np.nonzero(~ok)[0]:
        out[b] = schur_eval(lam, X[b])
    return out


def hyper_pq_truncated(a_params, b_params, xs, max_weight):
    """Truncated hypergeometric series of partitions.

    Sums ``prod[a]_lam / prod[b]_lam * S_lam(xs) / c_lam`` over all partitions
    with ``|lam| <= max_weight``.

    Returns
    -------
    value : complex
    tail : float
        Magnitude of the last weight shell, used as a truncation estimate.
    """
    xs = list(xs)
    total = 0j
    shells = []
    for k in range(max_weight + 1):
        shell = 0j
        for lam in partitions(k, len(xs)):
            den = 1.0
            for b in b_params:
                den *= pochhammer_partition(b, lam)
            if den == 0:
                raise PoleError(f"denominator vanishes at partition {lam}")
            num = 1.0
            for a in a_params:
                num *= pochhammer_partition(a, lam)
            if num == 0:
                continue
            shell += num / den * schur_eval(lam, xs) / c_lambda(lam)
        shells.append(abs(shell))
        total += shell
    tail = shells[-1]
    if len(shells) >= 3 and shells[-1] > shells[-2] > 0:
        warnings.warn("hypergeometric shells are not decreasing", RuntimeWarning, stacklevel=2)
    return complex(total), float(tail)
