"""Closed-form Morris/Selberg evaluations and series for partition and correlation functions.

Normalisation: ``morris`` is the circle integral with measure
``prod dtheta_i / 2pi`` and no symmetry factor, so ``morris(0, 0, 1, n) = n!``.
Partition functions and correlators are Toeplitz determinants, which carry
the extra ``1/N_f!``; ``z_selberg``, ``c_star_selberg``, ``z_series`` and
``c_series`` are all in that normalisation.

Two series routes are provided:

* ``route="cauchy"`` (default) expands each one-variable weight factor as
  ``prod_i H+(z_i) H-(1/z_i) = sum s_nu(rho+) s_nu(z) sum s_kappa(rho-) s_kappa(1/z)``
  and integrates with Schur orthogonality.  It is exact for every ``N_f``.
* ``route="morris"`` sums Morris integrals term by term with a single
  exponent shared by all variables.  Pole/zero cancellations at integer
  parameters are resolved by a one-sided limit.  It agrees with the
  Toeplitz determinant for ``N_f = 1`` and for one-sided weights.
"""
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .potential import (
    CouplingVector,
    gw_couplings,
    quadratic_couplings,
    single_couplings,
    single_term_coefficients,
    gw_weight_coefficients,
)
from .special import log_gamma, pochhammer_partition
from .symfun import as_partition, partitions, schur_principal

__all__ = [
    "morris",
    "morris_log",
    "z_selberg",
    "one_schur_expectation",
    "c_star_selberg",
    "k_factor",
    "SeriesResult",
    "z_series",
    "c_series",
    "specialization_h",
    "qpoch_product",
    "symmetric_power_product",
    "model_couplings",
    "DEFAULT_CUTOFF",
]

DEFAULT_CUTOFF = 60


class PoleError(ValueError):
    """A Gamma argument hit a pole in a numerator, or a Pochhammer denominator vanished."""


def _is_pole(x):
    return x <= 0 and abs(x - round(x)) < 1e-12


def morris_log(a, b, gamma, N_f):
    """``(sign, log|M|)`` of the Morris integral; sign 0 encodes an exact zero."""
    N_f = int(N_f)
    a, b, gamma = float(a), float(b), float(gamma)
    sign = 1
    logabs = 0.0
    zero = False
    for j in range(N_f):
        for x in (1 + a + b + j * gamma, 1 + (j + 1) * gamma):
            if _is_pole(x):
                raise PoleError(f"numerator Gamma pole at {x}")
            lg, s = log_gamma(x)
            logabs += lg
            sign *= s
        for x in (1 + a + j * gamma, 1 + b + j * gamma, 1 + gamma):
            if _is_pole(x):
                zero = True
                continue
            lg, s = log_gamma(x)
            logabs -= lg
            sign *= s
    if zero:
        return 0, -math.inf
    return sign, logabs


def morris(a, b, gamma=1.0, N_f=1):
    """Morris integral M_{N_f}(a, b, gamma) as a Gamma product."""
    sign, logabs = morris_log(a, b, gamma, N_f)
    if sign == 0:
        return 0.0
    return sign * math.exp(logabs)


def z_selberg(t, N_f):
    """Selberg partition function: Toeplitz determinant of |1+z|^{2t}."""
    sign, logabs = morris_log(t, t, 1.0, N_f)
    return sign * math.exp(logabs - math.lgamma(int(N_f) + 1))


def one_schur_expectation(lam, a, b, N_f):
    """``<S_lam(-z)>`` against ``z^{(a-b)/2} |1+z|^{a+b} |Delta|^2`` (Morris normalisation)."""
    lam = as_partition(lam)
    den = pochhammer_partition(a + N_f, lam)
    if den == 0:
        raise PoleError(f"denominator Pochhammer vanishes for {lam}")
    num = pochhammer_partition(-b, lam)
    return num / den * schur_principal(lam, N_f) * morris(a, b, 1.0, N_f)


def c_star_selberg(lam, t, N_f):
    """Selberg correlator with one Schur insertion, Toeplitz normalisation."""
    lam = as_partition(lam)
    den = pochhammer_partition(t + N_f, lam)
    if den == 0:
        raise PoleError(f"denominator Pochhammer vanishes for {lam}")
    k = sum(lam)
    return ((-1) ** k * pochhammer_partition(-t, lam) / den
            * schur_principal(lam, N_f) * z_selberg(t, N_f))


def k_factor(a, mu, lam, N_f):
    """Two-Schur factor K_{N_f}(a; mu, lam).

    ``prod_i 1/(a+lam_i-mu_i)!^2 prod_{i,j} 1/((j-i)^2 - (a+lam_i-mu_j)^2)``.
    A negative factorial argument gives an exact zero; a vanishing factor in the
    second product gives a signed infinity.
    """
    N_f = int(N_f)
    lam = list(as_partition(lam)) + [0] * N_f
    mu = list(as_partition(mu)) + [0] * N_f
    lam, mu = lam[:N_f], mu[:N_f]
    out = 1.0
    zero = False
    pole = False
    for i in range(N_f):
        n = a + lam[i] - mu[i]
        if n < 0:
            zero = True
        else:
            out /= math.factorial(int(n)) ** 2
    for i in range(N_f):
        for j in range(N_f):
            d = (j - i) ** 2 - (a + lam[i] - mu[j]) ** 2
            if d == 0:
                pole = True
            else:
                out /= d
    if zero:
        return 0.0
    if pole:
        return math.copysign(math.inf, out)
    return out


# ---------------------------------------------------------------------------
# series


@dataclass
class SeriesResult:
    value: float
    terms_used: int
    tail_estimate: float
    route: str = "cauchy"
    flags: dict = field(default_factory=dict)

    def __float__(self):
        return float(np.real(self.value))


def model_couplings(model, n=1, delta=1.0):
    """Coupling vector of a named model."""
    if isinstance(model, CouplingVector):
        return model
    if model == "gw":
        return gw_couplings()
    if model == "quadratic":
        return quadratic_couplings()
    if model in ("single", "n"):
        return single_couplings(n, delta)
    raise ValueError(f"unknown model {model!r}")


def specialization_h(coeffs, t, kmax):
    """Power-series coefficients ``h_k`` of ``exp(t sum_{m>=1} coeffs[m-1] x^m)``, k = 0..kmax."""
    v = np.zeros(kmax + 1)
    for m, c in enumerate(coeffs, start=1):
        if m <= kmax:
            v[m] = t * c
    # exp of a power series: k h_k = sum_{m=1}^k m v_m h_{k-m}
    h = np.zeros(kmax + 1)
    h[0] = 1.0
    for k in range(1, kmax + 1):
        h[k] = sum(m * v[m] * h[k - m] for m in range(1, k + 1)) / k
    return h


def _skew_schur(h, outer, inner):
    """Skew Schur ``s_{outer/inner}`` from complete homogeneous values by Jacobi-Trudi."""
    ell = len(outer)
    if ell == 0:
        return 1.0
    inner = list(inner) + [0] * (ell - len(inner))
    if len(inner) > ell:
        return 0.0
    if any(inner[i] > outer[i] for i in range(ell)):
        return 0.0
    kmax = len(h) - 1
    m = np.empty((ell, ell))
    for i in range(ell):
        for j in range(ell):
            k = outer[i] - inner[j] - i + j
            m[i, j] = h[k] if 0 <= k <= kmax else 0.0
    return float(np.linalg.det(m))


def _cauchy_series(cv, t, N_f, lam, mu, cutoff, tol):
    lam = as_partition(lam)
    mu = as_partition(mu)
    if len(lam) > N_f or len(mu) > N_f:
        return SeriesResult(0.0, 0, 0.0, "cauchy")
    pos = cv.deltas
    neg = cv.deltas if cv.neg_deltas is None else cv.neg_deltas
    base = max(sum(lam), sum(mu))
    kmax = cutoff + base + 1
    hp = specialization_h(pos, t, kmax)
    hm = specialization_h(neg, t, kmax)
    pref = math.exp(t * cv.constant_offset * N_f)
    total = 0.0
    shell = 0.0
    used = 0
    quiet = 0
    # range-m couplings leave runs of empty shells, so the stopping rule scales with m
    width = max(len(pos), len(neg), 1)
    amp = abs(t) * max((abs(x) for x in pos + neg), default=0.0)
    for k in range(base, base + cutoff + 1):
        shell = 0.0
        for eta in partitions(k, N_f):
            a = _skew_schur(hp, eta, lam)
            if a == 0.0:
                continue
            b = _skew_schur(hm, eta, mu)
            shell += a * b
            used += 1
        total += shell
        if abs(shell) <= tol * max(abs(total), 1e-300) and k > base + width * (amp * amp + 4):
            quiet += 1
            if quiet >= 2 * width:
                break
        else:
            quiet = 0
    return SeriesResult(pref * total, used, abs(pref * shell), "cauchy")


class _Lead:
    """Leading term ``coef * eps**order`` of a function of a small parameter."""

    __slots__ = ("coef", "order")

    def __init__(self, coef=1.0, order=0):
        self.coef = coef
        self.order = order

    def mul(self, other):
        return _Lead(self.coef * other.coef, self.order + other.order)

    def div(self, other):
        return _Lead(self.coef / other.coef, self.order - other.order)

    @staticmethod
    def linear(x0, slope):
        if abs(x0) < 1e-12 and slope != 0:
            return _Lead(float(slope), 1)
        return _Lead(float(x0), 0)

    @staticmethod
    def gamma(x0, slope):
        if _is_pole(x0) and slope != 0:
            n = int(round(-x0))
            return _Lead((-1) ** n / (math.factorial(n) * slope), -1)
        lg, s = log_gamma(x0)
        return _Lead(s * math.exp(lg), 0)

    def limit(self):
        if self.order > 0:
            return 0.0
        if self.order < 0:
            raise PoleError("term diverges in the integer limit")
        return self.coef


def _morris_lead(A, N_f, slope=1.0):
    # M_{N_f}(A + s eps, -A - s eps, 1)
    out = _Lead()
    for j in range(N_f):
        out = out.mul(_Lead.gamma(1 + j, 0)).mul(_Lead.gamma(2 + j, 0))
        out = out.div(_Lead.gamma(1 + A + j, slope)).div(_Lead.gamma(1 - A + j, -slope))
        out = out.div(_Lead.gamma(2.0, 0))
    return out


def _poch_lead(b, lam, slope=1.0):
    out = _Lead()
    for i, li in enumerate(lam, start=1):
        for k in range(li):
            out = out.mul(_Lead.linear(b + 1 - i + k, slope))
    return out


def _starred_term(A, lam, N_f):
    """``lim [A]_lam / [A+N_f]_lam * M_{N_f}(A, -A, 1)`` approached from generic A."""
    lead = _poch_lead(A, lam).div(_poch_lead(A + N_f, lam)).mul(_morris_lead(A, N_f))
    return lead.limit()


def _morris_exponents(model, t, cutoff, n, delta):
    """Pairs (weight coefficient, exponent) of the one-variable expansion."""
    if model == "quadratic":
        return [(t ** a / (2.0 ** a * math.factorial(a)), 2 * a) for a in range(cutoff + 1)]
    if model == "gw":
        L = gw_weight_coefficients(t, cutoff)
        out = [(L[0], 0)]
        for a in range(1, cutoff + 1):
            if abs(L[a]) < 1e-20 * abs(L[0]):
                break
            out += [(L[a], a), (L[a], -a)]
        return out
    if model in ("single", "n"):
        L = single_term_coefficients(n, delta, t, cutoff)
        out = [(L[0], 0)]
        for a in range(1, cutoff + 1):
            # negligible coefficients also keep the Gamma factors in range
            if abs(L[a]) < 1e-20 * abs(L[0]):
                break
            out += [(L[a], n * a), (L[a], -n * a)]
        return out
    raise ValueError(f"morris route not available for model {model!r}")


def _morris_series(model, t, N_f, lam, mu, cutoff, n, delta):
    lam = as_partition(lam)
    mu = as_partition(mu)
    pairs = _morris_exponents(model, t, cutoff, n, delta)
    nf_fact = math.factorial(N_f)
    terms = []
    flags = {}
    if mu:
        # two-Schur insertion, known only up to an overall numerical factor
        flags["up_to_factor"] = True
        pref = (-1) ** (sum(mu) - sum(lam)) * schur_principal(mu, N_f) * schur_principal(lam, N_f)
        for c, A in pairs:
            kf = k_factor(A, mu, lam, N_f)
            if math.isinf(kf):
                flags.setdefault("k_factor_poles", []).append(A)
                continue
            terms.append(c * kf)
        value = pref * math.fsum(terms)
    else:
        pref = (-1) ** sum(lam) * schur_principal(lam, N_f) / nf_fact
        for c, A in pairs:
            # weight z^A pairs with Morris parameters (a, b) = (A, -A)
            terms.append(c * _starred_term(float(A), lam, N_f))
        value = pref * math.fsum(terms)
    tail = abs(terms[-1]) if terms else 0.0
    if len(terms) > 4 and abs(terms[-1]) > abs(terms[-3]) > 0:
        warnings.warn("series terms are not decreasing", RuntimeWarning, stacklevel=3)
    return SeriesResult(value, len(terms), abs(pref) * tail, "morris", flags)


def z_series(model, t, N_f, cutoff=DEFAULT_CUTOFF, route="cauchy", n=1, delta=1.0, tol=1e-17):
    """Partition function of a named model (or coupling vector) as a series.

    Parameters
    ----------
    model : {"gw", "quadratic", "single", "general"} or CouplingVector
        ``"single"`` uses range ``n`` and coupling ``delta``; ``"general"``
        requires a CouplingVector passed as ``delta``.
    cutoff : int
        Largest exponent (morris route) or weight shell (cauchy route).
    """
    return c_series(model, (), (), t, N_f, cutoff, route, n, delta, tol)


def c_series(model, lam, mu, t, N_f, cutoff=DEFAULT_CUTOFF, route="cauchy", n=1, delta=1.0,
             tol=1e-17):
    """Correlator ``(1/N_f!) int S_mu(1/z) S_lam(z) prod f(z_i) |Delta|^2`` as a series.

    With ``mu = ()`` this is the one-Schur (starred) correlator.  On the morris
    route a nonempty ``mu`` uses the two-Schur K factor, which is only known up
    to a numerical factor; the result carries ``flags["up_to_factor"]``.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    N_f = int(N_f)
    if route == "cauchy":
        if model == "general":
            if not isinstance(delta, CouplingVector):
                raise ValueError("model 'general' needs a CouplingVector")
            cv = delta
        else:
            cv = model_couplings(model, n, delta)
        return _cauchy_series(cv, float(t), N_f, lam, mu, cutoff, tol)
    if route == "morris":
        return _morris_series(model, float(t), N_f, lam, mu, cutoff, n, delta)
    raise ValueError(f"unknown route {route!r}")


def qpoch_product(z, a, N):
    """``z^{a(1-N^2)/8} prod_{j=0}^{(N-1)/2} (1 + z^{2aj})``."""
    z = np.asarray(z, dtype=complex)
    out = z ** (a * (1 - N * N) / 8.0)
    for j in range((N - 1) // 2 + 1):
        out = out * (1 + z ** (2 * a * j))
    return out


def symmetric_power_product(z, a, N):
    """``prod_{n=0}^{(N-1)/2} (z^{an} + z^{-an})``."""
    z = np.asarray(z, dtype=complex)
    out = np.ones_like(z)
    for m in range((N - 1) // 2 + 1):
        out = out * (z ** (a * m) + z ** (-a * m))
    return out
