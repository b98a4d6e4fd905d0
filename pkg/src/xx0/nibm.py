"""Non-intersecting random-walk bridges and their width statistic.

``N_f`` walkers start and end at ``0, 2, ..., 2N_f - 2`` after ``2t`` steps
of +-1 and never touch.  The width is ``W = max_t' (X_{N_f-1} - X_0)``.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .fredholm import tracy_widom_cdf
from .potential import selberg_weight
from .toeplitz import DiscreteDomain, toeplitz_det_continuous, toeplitz_det_discrete

__all__ = [
    "WalkerEnsemble",
    "WidthSample",
    "RejectionBudgetError",
    "WidthCDF",
    "sample_bridge",
    "sample_bridges",
    "width_of",
    "reflect",
    "width_cdf_mc",
    "width_cdf_exact",
    "width_counts_exact",
    "lgv_total",
    "wilson_interval",
    "scaled_threshold",
    "tw_limit_check",
    "REJECTION_BUDGET",
]

REJECTION_BUDGET = 10 ** 7
_CHUNK = 1 << 14


class RejectionBudgetError(RuntimeError):
    """Too many rejected proposals; reduce N_f * t."""


@dataclass(frozen=True)
class WalkerEnsemble:
    """Positions array of shape ``(N_f, 2t + 1)``."""

    positions: np.ndarray

    def __post_init__(self):
        X = np.asarray(self.positions)
        if X.ndim != 2:
            raise ValueError("positions must be 2-d")
        if X.shape[0] > 1 and not np.all(np.diff(X, axis=0) > 0):
            raise ValueError("walkers must be strictly ordered at every step")
        if X.shape[1] > 1 and not np.all(np.abs(np.diff(X, axis=1)) == 1):
            raise ValueError("steps must be +-1")

    @property
    def N_f(self):
        return self.positions.shape[0]

    @property
    def t(self):
        return (self.positions.shape[1] - 1) // 2


@dataclass(frozen=True)
class WidthSample:
    W: int


@dataclass(frozen=True)
class WidthCDF:
    """``P(W < 2N)`` per threshold ``N`` with Wilson intervals (empirical)."""

    N: np.ndarray
    p: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    sigma: np.ndarray
    samples: int
    seed: int


def _start(N_f):
    return 2 * np.arange(N_f)


def _propose(rng, B, N_f, t):
    # each walker: uniform arrangement of t up- and t down-steps
    steps = np.empty((B, N_f, 2 * t), dtype=np.int8)
    steps[..., :t] = 1
    steps[..., t:] = -1
    steps = rng.permuted(steps, axis=2)
    X = np.concatenate([np.zeros((B, N_f, 1), dtype=np.int64), np.cumsum(steps, axis=2, dtype=np.int64)], axis=2)
    return X + _start(N_f)[None, :, None]


def _accept(X):
    if X.shape[1] < 2:
        return np.ones(X.shape[0], dtype=bool)
    return np.all(np.diff(X, axis=1) > 0, axis=(1, 2))


def sample_bridges(N_f, t, count, rng, budget=None):
    """``count`` exact samples as an array ``(count, N_f, 2t+1)``."""
    N_f, t = int(N_f), int(t)
    if budget is None:
        budget = REJECTION_BUDGET
    if N_f < 1 or t < 0:
        raise ValueError("need N_f >= 1 and t >= 0")
    if t == 0:
        return np.broadcast_to(_start(N_f)[None, :, None], (count, N_f, 1)).copy()
    out = []
    have = 0
    proposed = 0
    while have < count:
        B = min(_CHUNK, max(64, 2 * (count - have)))
        X = _propose(rng, B, N_f, t)
        proposed += B
        X = X[_accept(X)]
        out.append(X)
        have += len(X)
        if proposed > budget and have < count:
            raise RejectionBudgetError(
                f"rejection budget {budget} exceeded for N_f={N_f}, t={t}; use smaller N_f*t")
    return np.concatenate(out)[:count]


def sample_bridge(N_f, t, seed):
    """One exact sample of the non-intersecting bridge ensemble."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return WalkerEnsemble(sample_bridges(N_f, t, 1, rng)[0])


def width_of(e):
    X = np.asarray(e.positions if isinstance(e, WalkerEnsemble) else e)
    return WidthSample(int(np.max(X[-1] - X[0])))


def reflect(e):
    """Mirror image ``-X`` with walkers relabelled to keep the ordering."""
    return WalkerEnsemble(-np.asarray(e.positions)[::-1])


def _widths(X):
    return np.max(X[:, -1, :] - X[:, 0, :], axis=1)


def wilson_interval(k, n, z=1.0):
    """Wilson score interval for ``k`` successes out of ``n`` at ``z`` sigmas."""
    k = np.asarray(k, dtype=float)
    p = k / n
    den = 1.0 + z * z / n
    centre = (p + z * z / (2 * n)) / den
    half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return centre - half, centre + half


def width_cdf_mc(N_f, t, samples, seed, thresholds=None, threads=1):
    """Empirical ``P(W < 2N)`` with one-sigma Wilson intervals.

    Samples are drawn in independent chunks whose generators are spawned from
    ``seed``, so the result does not depend on ``threads``.
    """
    N_f, t, samples = int(N_f), int(t), int(samples)
    if thresholds is None:
        thresholds = np.arange(0, N_f + t + 2)
    thresholds = np.asarray(thresholds, dtype=int)
    nchunks = max(1, math.ceil(samples / _CHUNK))
    seqs = np.random.SeedSequence(seed).spawn(nchunks)
    sizes = [min(_CHUNK, samples - i * _CHUNK) for i in range(nchunks)]

    def job(i):
        rng = np.random.Generator(np.random.PCG64(seqs[i]))
        return _widths(sample_bridges(N_f, t, sizes[i], rng))

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(threads) as ex:
            parts = list(ex.map(job, range(nchunks)))
    else:
        parts = [job(i) for i in range(nchunks)]
    W = np.concatenate(parts)
    k = np.array([(W < 2 * N).sum() for N in thresholds])
    p = k / samples
    lo, hi = wilson_interval(k, samples)
    sigma = np.sqrt(np.maximum(p * (1 - p), 1.0 / samples) / samples)
    return WidthCDF(thresholds, p, lo, hi, sigma, samples, seed)


def width_cdf_exact(N_f, t, N, nodes=None):
    """``P(W < 2N)`` as the contour average over ``|s| = 1`` of discrete/continuous Toeplitz ratios.

    The weight ``z^-t (1+z)^{2t}`` is a Laurent polynomial for integer ``t``,
    so every determinant is a finite sum.  The ratio is a Laurent polynomial
    in ``s`` of degree at most ``N_f (t + N_f) / N``; the node count is ``4N``
    raised to exceed that degree when necessary.
    """
    N_f, N = int(N_f), int(N)
    if t != int(t) or t < 0:
        raise ValueError("t must be a non-negative integer")
    t = int(t)
    if N < 1:
        return 0.0
    if N_f == 1:
        return 1.0
    if 2 * N <= 2 * N_f - 2:
        return 0.0
    if 2 * N > 2 * N_f - 2 + 2 * t:
        return 1.0
    f = selberg_weight(t)
    D = toeplitz_det_continuous(f, N_f).real
    deg = N_f * (t + N_f) // N + 1
    M = nodes or max(4 * N, 2 * deg + 2)
    acc = 0j
    mag = 0.0
    for j in range(M):
        s = np.exp(2j * np.pi * (j + 0.5) / M)
        v = toeplitz_det_discrete(f, N_f, DiscreteDomain(N, s)).value
        acc += v
        mag += abs(v)
    val = acc / M / D
    # the residual is judged against the size of the summands, not of their mean
    if abs(val.imag) > 1e-10 * max(1.0, mag / M / D):
        raise ArithmeticError(f"imaginary residual {val.imag:.3e} in width CDF")
    return float(val.real)


def lgv_total(N_f, t):
    """Number of non-intersecting bridge tuples: ``det[C(2t, t + j - i)]`` (exact)."""
    m = [[Fraction(math.comb(2 * t, t + j - i)) if 0 <= t + j - i <= 2 * t else Fraction(0)
          for j in range(N_f)] for i in range(N_f)]
    # fraction-exact Gaussian elimination
    det = Fraction(1)
    n = N_f
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            fac = m[r][c] / m[c][c]
            for k in range(c, n):
                m[r][k] -= fac * m[c][k]
    assert det.denominator == 1
    return int(det)


def width_counts_exact(N_f, t):
    """Exact counts ``{W: number of non-intersecting bridge tuples}`` by transfer over time."""
    N_f, t = int(N_f), int(t)
    start = tuple(range(0, 2 * N_f, 2))
    states = {(start, start[-1] - start[0]): 1}
    moves = list(product((-1, 1), repeat=N_f))
    for step in range(2 * t):
        remaining = 2 * t - step - 1
        new = {}
        for (x, w), c in states.items():
            for mv in moves:
                y = tuple(a + b for a, b in zip(x, mv))
                if any(y[i] >= y[i + 1] for i in range(N_f - 1)):
                    continue
                if any(abs(yi - si) > remaining for yi, si in zip(y, start)):
                    continue
                key = (y, max(w, y[-1] - y[0]))
                new[key] = new.get(key, 0) + c
        states = new
    out = {}
    for (x, w), c in states.items():
        out[w] = out.get(w, 0) + c
    return out


def scaled_threshold(N_f, t, x):
    """Width value ``2 sqrt(m) + x m^{-1/6} t^{2/3}`` with ``m = N_f^2 + 2 N_f t``."""
    m = N_f * N_f + 2.0 * N_f * t
    return 2.0 * math.sqrt(m) + x * m ** (-1.0 / 6.0) * t ** (2.0 / 3.0)


def tw_limit_check(schedule, x):
    """Compare ``P(W <= scaled threshold)`` with ``F(x)`` along a schedule of ``(N_f, t)``.

    Returns a list of dicts ``{N_f, t, N, exact, tw, gap}``; ``W`` is even, so
    ``P(W <= w) = P(W < 2N)`` with ``N = floor(w/2) + 1``.
    """
    F = tracy_widom_cdf(x)
    rows = []
    for N_f, t in schedule:
        if N_f * (N_f + t) > 4000:
            raise ValueError("schedule entry too large for the exact Toeplitz route")
        w = scaled_threshold(N_f, t, x)
        N = int(math.floor(w / 2.0)) + 1
        ex = width_cdf_exact(N_f, t, N)
        rows.append(dict(N_f=N_f, t=t, N=N, exact=ex, tw=F, gap=abs(ex - F)))
    return rows
