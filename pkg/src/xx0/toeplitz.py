"""Toeplitz determinants on the circle and on rotated roots of unity.

Moments use the convention ``f_k = (1/2pi) int z^-k f(z) dtheta``.  The
determinant with Schur insertions ``S_mu(z^-1) S_lam(z)`` is the minor

    det[ f_{beta_k - alpha_j} ],  alpha_j = lam_j + N_f - 1 - j,  beta_k = mu_k + N_f - 1 - k,

which reduces to ``det[f_{j-k}]`` for empty partitions.
"""
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .symfun import as_partition, schur_eval_batch

__all__ = [
    "DiscreteDomain",
    "DetResult",
    "ConvergenceError",
    "SingularWeightError",
    "fourier_moment",
    "moment_table",
    "discrete_moment_table",
    "toeplitz_matrix",
    "toeplitz_det_continuous",
    "toeplitz_det_discrete",
    "heine_szego_oracle",
    "szego_polynomials",
    "poly_eval",
]

MAX_NODES = 2 ** 16


class ConvergenceError(RuntimeError):
    """Quadrature did not converge within the node cap."""


class SingularWeightError(ValueError):
    """The weight is singular at a node of a discrete domain."""


@dataclass(frozen=True)
class DiscreteDomain:
    """Rotated roots of unity ``{z : z^N = s}``."""

    N: int
    s: complex = 1.0

    def __post_init__(self):
        if int(self.N) < 1:
            raise ValueError("domain size must be >= 1")
        if abs(abs(complex(self.s)) - 1.0) > 1e-12:
            raise ValueError("rotation must have unit modulus")

    def nodes(self):
        phase = np.angle(complex(self.s)) / self.N
        return np.exp(1j * (phase + 2.0 * np.pi * np.arange(self.N) / self.N))


@dataclass(frozen=True)
class DetResult:
    """Determinant as value plus (unit-modulus sign, log-magnitude)."""

    value: complex
    sign: complex
    logabs: float

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m)
        if m.size == 0:
            return cls(1.0, 1.0, 0.0)
        sign, logabs = np.linalg.slogdet(m)
        if np.iscomplexobj(m) and abs(np.imag(sign)) < 1e-13 * max(abs(sign), 1e-300):
            sign = float(np.real(sign))
        if np.iscomplexobj(sign) or isinstance(sign, complex):
            sign = complex(sign)
        else:
            sign = float(sign)
        value = sign * math.exp(logabs) if logabs < 709 else sign * math.inf
        return cls(value, sign, float(logabs))

    @property
    def real(self):
        return float(np.real(self.value))

    @property
    def singular(self):
        return self.sign == 0 or self.logabs < math.log(1e-300)


def _nodes(M):
    return np.exp(2j * np.pi * np.arange(M) / M)


def _fft_moments(vals, K):
    # f_k = mean(f(z_j) z_j^-k) for k in [-K, K]
    M = len(vals)
    c = np.fft.fft(vals) / M
    return np.array([c[k % M] for k in range(-K, K + 1)])


def moment_table(f, K, nodes=None, tol=1e-12):
    """Fourier moments ``f_{-K..K}`` as an array indexed by ``k + K``.

    Laurent-polynomial weights are handled exactly.  Otherwise the trapezoid
    rule is applied with node doubling until two successive tables agree.
    """
    K = int(K)
    lau = getattr(f, "laurent", None)
    if lau is not None:
        return np.array([complex(lau.get(k, 0.0)) for k in range(-K, K + 1)])
    bw = f.bandwidth() if hasattr(f, "bandwidth") else None
    M = nodes or max(64, 4 * (K + (bw or 16)))
    M = 1 << int(math.ceil(math.log2(M)))
    prev = _fft_moments(f(_nodes(M)), K)
    while True:
        M *= 2
        if M > MAX_NODES:
            raise ConvergenceError("moment quadrature did not converge")
        cur = _fft_moments(f(_nodes(M)), K)
        scale = max(1.0, float(np.max(np.abs(cur))))
        if np.max(np.abs(cur - prev)) <= tol * scale:
            return cur
        prev = cur


def fourier_moment(f, k, nodes=None):
    """Single Fourier moment ``f_k``."""
    k = int(k)
    return moment_table(f, abs(k), nodes)[k + abs(k)]


def discrete_moment_table(f, K, d):
    """Moments ``(1/N) sum_{z^N = s} z^-k f(z)`` for k in [-K, K]."""
    z = d.nodes()
    vals = f(z)
    if not np.all(np.isfinite(vals)):
        bad = z[~np.isfinite(vals)][0]
        raise SingularWeightError(f"weight is singular at root {bad}")
    ks = np.arange(-K, K + 1)
    return (z[None, :] ** (-ks[:, None]) * vals[None, :]).mean(axis=1)


def _index_sets(N_f, lam, mu):
    lam = as_partition(lam)
    mu = as_partition(mu)
    if len(lam) > N_f or len(mu) > N_f:
        return None, None
    lam = list(lam) + [0] * (N_f - len(lam))
    mu = list(mu) + [0] * (N_f - len(mu))
    alpha = [lam[j] + N_f - 1 - j for j in range(N_f)]
    beta = [mu[k] + N_f - 1 - k for k in range(N_f)]
    return alpha, beta


def toeplitz_matrix(table, K, N_f, lam=(), mu=()):
    """Assemble ``[f_{beta_k - alpha_j}]`` from a moment table centred at K."""
    alpha, beta = _index_sets(N_f, lam, mu)
    if alpha is None:
        return None
    m = np.empty((N_f, N_f), dtype=complex)
    for j in range(N_f):
        for k in range(N_f):
            m[j, k] = table[beta[k] - alpha[j] + K]
    return m


def _needed_K(N_f, lam, mu):
    lam = as_partition(lam)
    mu = as_partition(mu)
    return N_f + (lam[0] if lam else 0) + (mu[0] if mu else 0)


def toeplitz_det_continuous(f, N_f, lam=(), mu=(), table=None):
    """Toeplitz determinant ``D_{N_f}(f)`` with optional Schur insertions."""
    N_f = int(N_f)
    if N_f < 0:
        raise ValueError("N_f must be >= 0")
    if N_f == 0:
        return DetResult(1.0, 1.0, 0.0)
    K = _needed_K(N_f, lam, mu)
    if table is None:
        table = moment_table(f, K)
    else:
        K = (len(table) - 1) // 2
    m = toeplitz_matrix(table, K, N_f, lam, mu)
    if m is None:
        return DetResult(0.0, 0.0, -math.inf)
    if f is None or getattr(f, "real_on_circle", False):
        m = _realify(m)
    return DetResult.from_matrix(m)


def _realify(m):
    if np.max(np.abs(np.imag(m))) <= 1e-14 * max(1.0, np.max(np.abs(m))):
        return np.real(m)
    return m


def toeplitz_det_discrete(f, N_f, d, lam=(), mu=()):
    """Discrete Toeplitz determinant over the rotated roots of unity ``d``."""
    N_f = int(N_f)
    if N_f == 0:
        return DetResult(1.0, 1.0, 0.0)
    K = _needed_K(N_f, lam, mu)
    table = discrete_moment_table(f, K, d)
    m = toeplitz_matrix(table, K, N_f, lam, mu)
    if m is None:
        return DetResult(0.0, 0.0, -math.inf)
    return DetResult.from_matrix(_realify(m))


def heine_szego_oracle(f, N_f, d=None, lam=(), mu=(), nodes=128):
    """Direct multi-sum form of a (discrete or continuous) Toeplitz determinant.

    Sums ``prod f(z_i) conj(S_mu(z)) S_lam(z) prod_{i<j} |z_i - z_j|^2`` over
    strictly ordered N_f-subsets of the domain nodes with prefactor
    ``1/|d|^N_f``.  With ``d=None`` the continuous integral is approximated by
    an equispaced tensor trapezoid with ``nodes`` points per dimension.
    """
    N_f = int(N_f)
    if N_f > 3:
        raise ValueError("heine_szego_oracle is limited to N_f <= 3")
    if d is None:
        if nodes > 256 or (N_f == 3 and nodes > 96):
            raise ValueError("too many nodes for the tensor oracle")
        z = _nodes(nodes)
    else:
        z = d.nodes()
    M = len(z)
    w = f(z)
    if not np.all(np.isfinite(w)):
        raise SingularWeightError("weight is singular on the domain")
    idx = np.array(list(itertools.combinations(range(M), N_f)), dtype=int)
    if len(idx) == 0:
        return 0.0
    Z = z[idx]
    term = np.prod(w[idx], axis=1)
    for i in range(N_f):
        for j in range(i + 1, N_f):
            term = term * np.abs(Z[:, i] - Z[:, j]) ** 2
    lam = as_partition(lam)
    mu = as_partition(mu)
    if lam:
        term = term * schur_eval_batch(lam, Z)
    if mu:
        term = term * np.conj(schur_eval_batch(mu, Z))
    total = math.fsum(np.real(term)) + 1j * math.fsum(np.imag(term))
    total /= float(M) ** N_f
    if abs(total.imag) <= 1e-13 * max(1.0, abs(total.real)):
        return total.real
    return total


def szego_polynomials(f, n, table=None):
    """Monic orthogonal polynomial ``p_n`` for weight ``f`` and its reversal ``p*_n``.

    Returns coefficient arrays in increasing powers of z.  Orthogonality
    ``int p_n(z) z^-k f dtheta/2pi = 0`` for ``k < n`` is solved from the
    moment matrix, which is the Cramer-rule form of the determinant formula.
    """
    n = int(n)
    if n == 0:
        return np.array([1.0 + 0j]), np.array([1.0 + 0j])
    if table is None:
        table = moment_table(f, n)
    K = (len(table) - 1) // 2
    # sum_m c_m f_{k-m} = 0, k = 0..n-1, c_n = 1
    A = np.array([[table[k - m + K] for m in range(n)] for k in range(n)])
    rhs = -np.array([table[k - n + K] for k in range(n)])
    if abs(np.linalg.det(A)) < 1e-300:
        raise np.linalg.LinAlgError("singular moment matrix")
    c = np.linalg.solve(A, rhs)
    p = np.concatenate([c, [1.0]])
    pstar = np.conj(p[::-1])
    return p, pstar


def poly_eval(coeffs, z):
    """Evaluate ``sum_m c_m z^m``."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for c in coeffs[::-1]:
        out = out * z + c
    return out
