"""Coupling vectors, circle weights and the coefficient expansions of named potentials.

A coupling vector ``(Delta_1, ..., Delta_M)`` defines the symmetric potential

    V(z) = c + sum_m Delta_m (z^m + z^-m)

on the unit circle, and the weight ``f = exp(t V)``.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "CouplingVector",
    "WeightFunction",
    "zero_couplings",
    "gw_couplings",
    "quadratic_couplings",
    "single_couplings",
    "selberg_couplings",
    "selberg_couplings_exact",
    "selberg_constant_term",
    "selberg_b",
    "gw_weight_coefficients",
    "single_term_coefficients",
    "potential_eval",
    "weight_on_circle",
    "selberg_weight",
    "power_weight",
    "fourier_coefficients_of_V",
    "DEFAULT_SELBERG_N",
]

DEFAULT_SELBERG_N = 161
KINDS = ("zero", "gw", "quadratic", "single", "selberg", "custom")


@dataclass(frozen=True)
class CouplingVector:
    """Immutable coupling vector.

    ``deltas[m-1]`` is Delta_m.  ``neg_deltas`` optionally overrides the
    coefficients of ``z^-m`` for one-sided models (the quadratic model only
    carries positive powers); ``None`` means symmetric.
    """

    deltas: tuple
    kind: str = "custom"
    constant_offset: float = 0.0
    param: object = None
    neg_deltas: tuple = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown coupling kind {self.kind!r}")
        d = tuple(float(x) for x in self.deltas)
        if not all(math.isfinite(x) for x in d):
            raise ValueError("couplings must be finite")
        object.__setattr__(self, "deltas", d)
        if self.neg_deltas is not None:
            object.__setattr__(self, "neg_deltas", tuple(float(x) for x in self.neg_deltas))

    @property
    def M(self):
        return len(self.deltas)

    @property
    def symmetric(self):
        return self.neg_deltas is None

    def coefficient(self, k):
        """Fourier coefficient V_k of the potential (k may be negative)."""
        if k == 0:
            return self.constant_offset
        if k > 0:
            return self.deltas[k - 1] if k <= self.M else 0.0
        neg = self.deltas if self.neg_deltas is None else self.neg_deltas
        return neg[-k - 1] if -k <= len(neg) else 0.0

    def bandwidth(self):
        neg = self.deltas if self.neg_deltas is None else self.neg_deltas
        return max(self.M, len(neg))


def zero_couplings():
    return CouplingVector((), "zero")


def gw_couplings():
    """Nearest-neighbour model, V = z + 1/z."""
    return CouplingVector((1.0,), "gw")


def quadratic_couplings():
    """Weak-coupling model with one-sided weight exp(t z^2 / 2)."""
    return CouplingVector((0.0, 0.5), "quadratic", neg_deltas=())


def single_couplings(n, delta):
    """Single interaction of range ``n``: V = delta (z^n + z^-n)."""
    n = int(n)
    if n < 1:
        raise ValueError("interaction range must be >= 1")
    d = [0.0] * n
    d[-1] = float(delta)
    return CouplingVector(tuple(d), "single", param=n)


def selberg_b(j):
    """Taylor coefficient of log(1 + x/2) style expansion: (-1)^(j-1) / (j 2^j)."""
    return (-1) ** (j - 1) / (j * 2.0 ** j)


def _log_binom(n, k):
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def selberg_couplings_exact(N=DEFAULT_SELBERG_N):
    """Exact rational couplings Delta_1..Delta_N of the truncated log(2 + z + 1/z) expansion."""
    N = int(N)
    if N < 1 or N % 2 == 0:
        raise ValueError("selberg_couplings requires odd N >= 1")
    out = []
    for m in range(1, N + 1):
        acc = Fraction(0)
        for i in range((N - m) // 2 + 1):
            j = 2 * i + m
            acc += Fraction((-1) ** (j - 1) * math.comb(j, i), j * 2 ** j)
        out.append(acc)
    return out


def selberg_couplings(N=DEFAULT_SELBERG_N):
    """Truncated coupling expansion of V(z) = log(2 + z + 1/z).

    Delta_m = sum_{i=0}^{floor((N-m)/2)} B_{2i+m} C(2i+m, i) with
    B_j = (-1)^(j-1) / (j 2^j); the constant offset is log 2.  The sums are
    accumulated in exact rational arithmetic and rounded once.
    """
    deltas = tuple(float(d) for d in selberg_couplings_exact(N))
    return CouplingVector(deltas, "selberg", math.log(2.0) + float(selberg_constant_term(N)),
                          param=int(N))


def selberg_constant_term(N=DEFAULT_SELBERG_N):
    """z^0 part of the truncated expansion: sum_{i=1}^{floor(N/2)} B_{2i} C(2i, i).

    It tends to -log 2, so the full constant term log 2 + Delta_0 vanishes in the limit.
    """
    return sum((Fraction(-math.comb(2 * i, i), 2 * i * 4 ** i) for i in range(1, int(N) // 2 + 1)),
               Fraction(0))


def _bessel_like_coefficients(x, N):
    # L_j = sum_{i=0}^{floor((N-j)/2)} x^{2i+j} C(2i+j, i) / (2i+j)!  for j = 0..N
    out = []
    for j in range(N + 1):
        terms = []
        for i in range((N - j) // 2 + 1):
            k = 2 * i + j
            if x == 0.0:
                terms.append(1.0 if k == 0 else 0.0)
                continue
            lg = k * math.log(abs(x)) + _log_binom(k, i) - math.lgamma(k + 1)
            terms.append((1 if x > 0 or k % 2 == 0 else -1) * math.exp(lg))
        out.append(math.fsum(terms))
    return out


def gw_weight_coefficients(t, N=60):
    """Coefficients L_0..L_N of exp(t (z + 1/z)) = L_0 + sum_{j>=1} L_j (z^j + z^-j).

    The constant term is counted once; L_j tends to I_j(2t) as N grows.
    """
    return _bessel_like_coefficients(float(t), int(N))


def single_term_coefficients(n, delta, t, N=60):
    """Coefficients L_{n,a}, a = 0..N, of exp(t delta (z^n + z^-n)) in powers z^{na}."""
    if int(n) < 1:
        raise ValueError("n must be >= 1")
    return _bessel_like_coefficients(float(t) * float(delta), int(N))


def potential_eval(cv, z):
    """V(z) as a Laurent polynomial; real part for symmetric couplings on the unit circle."""
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, cv.constant_offset, dtype=complex)
    zi = 1.0 / z
    zp = np.ones_like(z)
    zm = np.ones_like(z)
    neg = cv.deltas if cv.neg_deltas is None else cv.neg_deltas
    for m in range(1, cv.bandwidth() + 1):
        zp = zp * z
        zm = zm * zi
        out = out + cv.coefficient(m) * zp + (neg[m - 1] if m <= len(neg) else 0.0) * zm
    if cv.symmetric and np.all(np.abs(np.abs(z) - 1.0) < 1e-12):
        out = out.real
    return out if out.ndim else out[()]


@dataclass(frozen=True)
class WeightFunction:
    """A weight ``f`` on the unit circle.

    ``func`` maps a complex array to complex values.  ``closed_form`` is an
    exact alternative evaluator where one exists (Selberg weight).
    """

    func: object
    t: float = 0.0
    couplings: CouplingVector = None
    real_on_circle: bool = True
    laurent: dict = None
    closed_form: object = None
    singular_points: tuple = field(default_factory=tuple)
    label: str = "custom"

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return np.asarray(self.func(z), dtype=complex)

    def bandwidth(self):
        """Largest |k| with a nonzero Fourier coefficient, or None if unbounded."""
        if self.laurent is not None:
            return max((abs(k) for k in self.laurent), default=0)
        if self.couplings is not None and self.couplings.kind == "zero":
            return 0
        return None

    def rotate(self, s):
        """Weight z -> f(s z) for unit-modulus ``s``."""
        f = self.func
        lau = None
        if self.laurent is not None:
            lau = {k: c * s ** k for k, c in self.laurent.items()}
        return WeightFunction(lambda z: f(s * np.asarray(z)), self.t, None, False, lau,
                              None, (), self.label + "-rotated")


def weight_on_circle(cv, t):
    """Weight f = exp(t V) for a coupling vector."""
    t = float(t)
    if cv.kind == "zero" or t == 0.0:
        off = math.exp(t * cv.constant_offset)
        return WeightFunction(lambda z: np.full(np.shape(z), off, dtype=complex), t, cv,
                              True, {0: off}, None, (), cv.kind)
    closed = None
    sing = ()
    if cv.kind == "selberg":
        closed = _selberg_closed(t)
        if t < 0:
            sing = (-1.0 + 0j,)

    def func(z):
        return np.exp(t * potential_eval(cv, z))

    return WeightFunction(func, t, cv, cv.symmetric, None, closed, sing, cv.kind)


def _selberg_closed(t):
    def f(z):
        z = np.asarray(z, dtype=complex)
        return np.abs(1.0 + z) ** (2.0 * t) + 0j

    return f


def selberg_weight(t):
    """Exact Selberg weight z^-t (1+z)^{2t} = |1+z|^{2t} on the circle.

    For integer ``t`` the Laurent coefficients C(2t, t+k) are attached so that
    moments are exact finite sums.
    """
    t = float(t)
    lau = None
    if t == int(t) and t >= 0:
        n = int(t)
        lau = {k: float(math.comb(2 * n, n + k)) for k in range(-n, n + 1)}
    sing = (-1.0 + 0j,) if t < 0 else ()
    cv = selberg_couplings(DEFAULT_SELBERG_N)
    return WeightFunction(_selberg_closed(t), t, cv, True, lau, _selberg_closed(t), sing,
                          "selberg")


def power_weight(coeffs):
    """Laurent polynomial weight from a ``{k: c_k}`` dict."""
    lau = {int(k): complex(v) for k, v in coeffs.items()}

    def func(z):
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        for k, c in lau.items():
            out = out + c * z ** k
        return out

    real = all(abs(lau.get(-k, 0) - np.conj(c)) < 1e-15 for k, c in lau.items())
    return WeightFunction(func, 0.0, None, real, lau, None, (), "laurent")


def fourier_coefficients_of_V(cv, kmax, nodes=4096):
    """Trapezoid Fourier coefficients V_k, k = 0..kmax, of the potential."""
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    z = np.exp(1j * theta)
    v = np.asarray(potential_eval(cv, z), dtype=complex)
    return np.array([np.mean(v * z ** (-k)) for k in range(kmax + 1)])
