"""Free energies, domain walls and numerical transition-order detection.

Coordinates: ``tau = t / N_f`` and ``n_inv = N / N_f``.  The quadratic model
uses ``lam = N / sqrt(N_f)`` instead of ``n_inv``.
"""
import functools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .fredholm import tracy_widom_logcdf
from .special import log_gamma

__all__ = [
    "PhasePoint",
    "FreeEnergyResult",
    "TransitionResult",
    "C1",
    "C2",
    "C_SELB",
    "fe_gw_tw",
    "fe_gw_exact",
    "fe_gw_finite",
    "fe_quadratic_finite",
    "fe_selberg_finite",
    "fe_zero",
    "zero_gap",
    "f_quadratic",
    "f_selberg",
    "selberg_wall",
    "selberg_scale",
    "selberg_correction",
    "tw_argument",
    "fe_from_tw",
    "wall_curves",
    "transition_order",
    "one_sided_derivatives",
]

C1 = 4.0 / 3.0
C2 = 1.0 / 12.0
C_SELB = 1.0 / (2.0 * math.pi)


@dataclass(frozen=True)
class PhasePoint:
    """Point ``(tau, n_inv)`` of the phase plane."""

    tau: float
    n_inv: float = math.inf

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.n_inv > 0:
            raise ValueError("n_inv must be positive")
        if self.n_inv < 1:
            warnings.warn("n_inv < 1 means fewer sites than magnons", RuntimeWarning, stacklevel=2)


@dataclass(frozen=True)
class FreeEnergyResult:
    """Free-energy value, the branch it came from and the signed distance to the wall."""

    value: float
    branch: str
    wall_distance: float = math.nan

    def __float__(self):
        return float(self.value)


@dataclass(frozen=True)
class TransitionResult:
    order: int
    jump: float
    inconclusive: bool
    jumps: tuple = field(default_factory=tuple)


def _pt(p):
    return p if isinstance(p, PhasePoint) else PhasePoint(*p)


# ---------------------------------------------------------------------------
# infinite GW chain


def fe_gw_tw(tau):
    """Leading-order free energy reconstructed from the Tracy-Widom tails.

    ``tau^2/4`` below the wall; above it the left-tail exponent
    ``-|j|^3/12`` with ``j = (1 - tau)/(tau/2)^{1/3}`` adds ``-(tau - 1)^3/(6 tau)``.
    """
    tau = float(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    if tau == 1.0:
        return FreeEnergyResult(0.25, "wall", 0.0)
    if tau < 1:
        return FreeEnergyResult(tau * tau / 4.0, "weak", tau - 1.0)
    return FreeEnergyResult(tau * tau / 4.0 - (tau - 1.0) ** 3 / (6.0 * tau), "strong", tau - 1.0)


def fe_gw_exact(tau):
    """Exact infinite-chain free energy: ``tau^2/4`` or ``tau - 3/4 - log(tau)/2``."""
    tau = float(tau)
    if tau <= 0:
        raise ValueError("tau must be positive")
    if tau == 1.0:
        return FreeEnergyResult(0.25, "wall", 0.0)
    if tau < 1:
        return FreeEnergyResult(tau * tau / 4.0, "weak", tau - 1.0)
    return FreeEnergyResult(tau - 0.75 - 0.5 * math.log(tau), "strong", tau - 1.0)


def fe_gw_finite(p):
    """Finite-chain GW free energy with walls ``n_inv = tau + 1`` and ``n_inv = 2 sqrt(tau)``."""
    p = _pt(p)
    tau, n = p.tau, p.n_inv
    if tau <= 1:
        wall = tau + 1.0
        base = tau * tau / 4.0
        corr = 2.0 * C2 / tau * abs(n - wall) ** 3
    else:
        wall = 2.0 * math.sqrt(tau)
        base = tau - 0.75 - 0.5 * math.log(tau)
        corr = 4.0 * C2 / (tau * (math.sqrt(tau) + 1.0 / math.sqrt(tau))) * abs(n - wall) ** 3
    d = n - wall
    side = "weak" if tau <= 1 else "strong"
    if d == 0:
        return FreeEnergyResult(base, "wall", 0.0)
    if d > 0:
        return FreeEnergyResult(base, side + "-continuous", d)
    return FreeEnergyResult(base - corr, side + "-discrete", d)


# ---------------------------------------------------------------------------
# quadratic model


def f_quadratic(N_f):
    """``(1/N_f^2) sum_{j=1}^{N_f} (log Gamma(1+j) - log Gamma(2))`` at finite ``N_f``.

    The sum grows like ``(1/2) log N_f``, so no finite limit exists; callers
    fix ``N_f`` explicitly.
    """
    N_f = int(N_f)
    if N_f < 1:
        raise ValueError("N_f must be >= 1")
    return math.fsum(math.lgamma(1 + j) for j in range(1, N_f + 1)) / N_f ** 2


def fe_quadratic_finite(lam, N_f_cap=200):
    """Finite quadratic free energy: wall at ``lam = 2``, cubic drop ``|lam - 2|^3 / 3`` below it."""
    lam = float(lam)
    if lam <= 0:
        raise ValueError("lam must be positive")
    base = f_quadratic(N_f_cap)
    d = lam - 2.0
    if d == 0:
        return FreeEnergyResult(base, "wall", 0.0)
    if d > 0:
        return FreeEnergyResult(base, "continuous", d)
    return FreeEnergyResult(base - abs(d) ** 3 / 3.0, "discrete", d)


# ---------------------------------------------------------------------------
# Selberg model


def _f_selberg_at(tau, N_f):
    t = tau * N_f
    s = []
    for j in range(1, N_f + 1):
        s.append(log_gamma(1 + 2 * t + j)[0] + log_gamma(2 + j)[0] - 2.0 * log_gamma(1 + t + j)[0])
    return math.fsum(s) / N_f ** 2


@functools.lru_cache(maxsize=4096)
def f_selberg(tau, N_f=200, richardson=True):
    """Infinite Selberg-chain free energy from the Gamma sum at ``t = tau N_f``.

    With ``richardson`` the values at ``N_f`` and ``2 N_f`` are combined to
    cancel the ``1/N_f`` correction.
    """
    tau = float(tau)
    N_f = int(N_f)
    if tau <= 0 or N_f < 1:
        raise ValueError("need tau > 0 and N_f >= 1")
    a = _f_selberg_at(tau, N_f)
    if not richardson:
        return a
    b = _f_selberg_at(tau, 2 * N_f)
    return 2.0 * b - a


def selberg_wall(tau):
    return 2.0 * math.sqrt(1.0 + 2.0 * tau)


def selberg_scale(tau):
    """Denominator ``(1 + 2 tau)^{-1/6} tau^{2/3}`` of the scaled wall distance."""
    return (1.0 + 2.0 * tau) ** (-1.0 / 6.0) * tau ** (2.0 / 3.0)


def selberg_correction(tau, n_inv, deriv=0):
    """Cubic correction ``-(1/12)|j|^3`` below the wall and its ``n_inv`` derivatives."""
    D = selberg_scale(tau)
    j = (n_inv - selberg_wall(tau)) / D
    if j >= 0:
        return 0.0
    a = abs(j)
    # d/dn_inv = (1/D) d/dj and d|j|/dj = -1 for j < 0
    if deriv == 0:
        return -C2 * a ** 3
    if deriv == 1:
        return 3.0 * C2 * a * a / D
    if deriv == 2:
        return -6.0 * C2 * a / D ** 2
    if deriv == 3:
        return 6.0 * C2 / D ** 3
    raise ValueError("deriv must be 0..3")


def fe_selberg_finite(p, N_f=200):
    """Finite Selberg free energy with wall ``n_inv = 2 sqrt(1 + 2 tau)``."""
    p = _pt(p)
    base = f_selberg(p.tau, N_f)
    d = p.n_inv - selberg_wall(p.tau)
    if d == 0:
        return FreeEnergyResult(base, "wall", 0.0)
    if d > 0:
        return FreeEnergyResult(base, "continuous", d)
    return FreeEnergyResult(base + selberg_correction(p.tau, p.n_inv), "discrete", d)


# ---------------------------------------------------------------------------
# zero potential


def fe_zero(p):
    """Discrete-minus-continuous gap for the zero potential: identically 0 (O(1/N_f) tag)."""
    _pt(p)
    return FreeEnergyResult(0.0, "no-wall O(1/N_f)", math.inf)


def zero_gap(N_f, N):
    """``|log(D^d / D)| / N_f^2`` for ``f = 1`` computed through the Toeplitz route."""
    from .potential import weight_on_circle, zero_couplings
    from .toeplitz import DiscreteDomain, toeplitz_det_continuous, toeplitz_det_discrete

    f = weight_on_circle(zero_couplings(), 0.0)
    dd = toeplitz_det_discrete(f, N_f, DiscreteDomain(N))
    dc = toeplitz_det_continuous(f, N_f)
    if dd.sign == 0:
        return math.inf
    return abs(dd.logabs - dc.logabs) / N_f ** 2


# ---------------------------------------------------------------------------
# Tracy-Widom reconstruction


def tw_argument(model, N, N_f, t):
    """Scaling argument ``x`` and its scale-free form ``j = x / N_f^{2/3}``."""
    N_f = float(N_f)
    t = float(t)
    if model == "gw":
        x = (N_f - t) / (t / 2.0) ** (1.0 / 3.0)
    elif model == "selberg":
        m = N_f * N_f + 2.0 * N_f * t
        x = (float(N) - 2.0 * math.sqrt(m)) / (m ** (-1.0 / 6.0) * t ** (2.0 / 3.0))
    else:
        raise ValueError("model must be 'gw' or 'selberg'")
    return x, x / N_f ** (2.0 / 3.0)


def _log_tw(x):
    if x > 8.0:
        return 0.0
    return tracy_widom_logcdf(x)


def fe_from_tw(model, p, N_f):
    """Finite-``N_f`` free energy from the Tracy-Widom CDF at the model's scaling argument."""
    p = _pt(p)
    N_f = int(N_f)
    t = p.tau * N_f
    if model == "gw":
        x, _ = tw_argument("gw", None, N_f, t)
        val = p.tau ** 2 / 4.0 + _log_tw(x) / N_f ** 2
        return FreeEnergyResult(val, "tw", p.tau - 1.0)
    if model == "selberg":
        x, _ = tw_argument("selberg", p.n_inv * N_f, N_f, t)
        val = f_selberg(p.tau, N_f) + (_log_tw(x) - math.log(C_SELB)) / N_f ** 2
        return FreeEnergyResult(val, "tw", p.n_inv - selberg_wall(p.tau))
    raise ValueError("model must be 'gw' or 'selberg'")


# ---------------------------------------------------------------------------
# walls


def wall_curves(model, tau_max=3.0, n_inv_max=6.0, samples=101):
    """Sampled wall polylines as dicts ``{tau, n_inv, order, style, label}``."""
    s = np.linspace(0.0, 1.0, samples)
    if model in ("gw", "gw-infinite", "gw-tw"):
        return [dict(tau=np.ones(samples), n_inv=1.0 + (n_inv_max - 1.0) * s, order=3,
                     style="dashed", label="tau=1")]
    if model == "gw-finite":
        tau_a = s
        tau_b = 1.0 + (tau_max - 1.0) * s
        return [
            dict(tau=tau_a, n_inv=tau_a + 1.0, order=3, style="dashdot", label="n_inv=tau+1"),
            dict(tau=tau_b, n_inv=2.0 * np.sqrt(tau_b), order=3, style="dotted", label="n_inv=2sqrt(tau)"),
            dict(tau=np.ones(samples), n_inv=1.0 + s, order=2, style="solid", label="tau=1 lower"),
            dict(tau=np.ones(samples), n_inv=2.0 + (n_inv_max - 2.0) * s, order=3, style="dashed",
                 label="tau=1 upper"),
        ]
    if model == "selberg":
        tau = tau_max * s
        return [dict(tau=tau, n_inv=2.0 * np.sqrt(1.0 + 2.0 * tau), order=3, style="solid",
                     label="n_inv=2sqrt(1+2tau)")]
    if model == "quadratic":
        return [dict(tau=None, n_inv=None, lam=2.0, order=3, style="solid", label="lam=2")]
    if model == "zero":
        return []
    raise ValueError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# transition order

_STENCIL = 8


def one_sided_derivatives(fe, x0, h, side, kmax=4):
    """Derivatives 0..kmax at ``x0`` from a degree-``_STENCIL-1`` fit on one side of it."""
    sgn = 1.0 if side > 0 else -1.0
    # nodes strictly inside the side, so a branch label at the wall is never used
    u = np.arange(1, _STENCIL + 1, dtype=float)
    ys = np.array([float(fe(x0 + sgn * h * k)) for k in u])
    coef = np.polynomial.polynomial.polyfit(sgn * u, ys, _STENCIL - 1)
    out = []
    for k in range(kmax + 1):
        out.append(coef[k] * math.factorial(k) / h ** k)
    return np.array(out)


def transition_order(fe, x0, h=1e-2, floor=1e-7, kmax=4):
    """Lowest derivative order whose one-sided jump at ``x0`` stands out.

    Order ``k`` is reported when ``|D_k^+ - D_k^-|`` exceeds ten times the
    jump at ``k - 1`` and the relative floor, and the jump survives halving
    ``h`` (fit truncation error shrinks like ``h^{8-k}``, a genuine jump does
    not).  ``inconclusive`` is set when no order up to ``kmax`` qualifies.
    """
    if not 1e-3 <= h <= 1e-1:
        raise ValueError("h must lie in [1e-3, 1e-1]")
    dp = one_sided_derivatives(fe, x0, h, +1, kmax)
    dm = one_sided_derivatives(fe, x0, h, -1, kmax)
    jumps = np.abs(dp - dm)
    half = None
    prev = 0.0
    for k in range(kmax + 1):
        scale = max(1.0, abs(dp[k]), abs(dm[k]))
        thr = max(10.0 * prev, floor * scale)
        if jumps[k] > thr and jumps[k] > 10.0 * floor * scale:
            if half is None:
                half = np.abs(one_sided_derivatives(fe, x0, h / 2, +1, kmax)
                              - one_sided_derivatives(fe, x0, h / 2, -1, kmax))
            if 0.5 <= half[k] / jumps[k] <= 2.0:
                return TransitionResult(k, float(jumps[k]), False, tuple(jumps))
        prev = jumps[k]
    return TransitionResult(-1, 0.0, True, tuple(jumps))
