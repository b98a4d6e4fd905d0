"""Fredholm determinants: indexed kernels, Nystrom on half lines, and contour kernels.

Contents: the discrete Bessel kernel and its Borodin-Okounkov identity, the
general double-contour kernel built from a coupling vector, the
discrete-to-continuous ratio kernel on two circles, and the Tracy-Widom
distribution as the Airy-kernel determinant on ``[x, inf)``.
"""
import math
from dataclasses import dataclass

import numpy as np

from .potential import CouplingVector, WeightFunction
from .special import airy, bessel_j, bessel_j_orders
from .toeplitz import (
    DiscreteDomain,
    moment_table,
    poly_eval,
    szego_polynomials,
    toeplitz_det_continuous,
)

__all__ = [
    "DiscreteKernel",
    "KernelGrid",
    "ConvergenceError",
    "fredholm_det_indexed",
    "bessel_kernel",
    "bessel_kernel_ratio",
    "bessel_kernel_matrix",
    "bessel_fd",
    "airy_kernel",
    "airy_values",
    "general_kernel_G",
    "general_kernel_matrix",
    "general_fd",
    "szego_constant",
    "ratio_kernel_K",
    "ratio_fd",
    "ratio_fd_nystrom",
    "tracy_widom_cdf",
    "tracy_widom_logcdf",
    "tw_tail_log",
    "fit_left_tail_constant",
    "z_discrete_via_fd",
    "continuum_fd",
]


class ConvergenceError(RuntimeError):
    """A Fredholm determinant did not converge within its truncation cap."""


@dataclass(frozen=True)
class DiscreteKernel:
    """Kernel on integer indices ``start, start+1, ...``.

    ``matrix(start, M)`` returns the block on ``[start, M)``; if absent, the
    scalar ``evaluator(k, l)`` is used.
    """

    evaluator: object
    start: int = 0
    matrix: object = None

    def block(self, M):
        if self.matrix is not None:
            return np.asarray(self.matrix(self.start, M))
        idx = range(self.start, M)
        return np.array([[self.evaluator(k, l) for l in idx] for k in idx])


@dataclass(frozen=True)
class KernelGrid:
    """Gauss-Legendre nodes mapped to ``[s, inf)`` by ``x = s + L u / (1 - u)``."""

    s: float
    n: int
    L: float = 10.0

    def __post_init__(self):
        if self.n < 8 or self.L <= 0:
            raise ValueError("KernelGrid needs n >= 8 and L > 0")

    def nodes_weights(self):
        u, w = np.polynomial.legendre.leggauss(self.n)
        u = 0.5 * (u + 1.0)
        w = 0.5 * w
        x = self.s + self.L * u / (1.0 - u)
        dx = self.L / (1.0 - u) ** 2
        return x, w * dx


def fredholm_det_indexed(K, M0=32, tol=1e-10, Mmax=4096):
    """``det(I - K)`` on ``[start, inf)`` by doubling the truncation index."""
    M = K.start + M0
    prev = None
    while M <= K.start + Mmax:
        B = K.block(M)
        val = float(np.linalg.det(np.eye(len(B)) - B)) if len(B) else 1.0
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val
        prev = val
        M = K.start + 2 * (M - K.start)
    raise ConvergenceError("indexed Fredholm determinant did not converge")


# ---------------------------------------------------------------------------
# Bessel


def bessel_kernel(k, l, t):
    """Discrete Bessel kernel ``sum_{n>=1} J_{k+n}(2t) J_{l+n}(2t)`` (series form)."""
    if t == 0:
        return 0.0
    x = 2.0 * t
    nmax = int(max(k, l) + x + 40 + 4 * math.sqrt(x + 1))
    J = bessel_j_orders(nmax + 1, x)
    terms = []
    n = 1
    while k + n <= nmax and l + n <= nmax:
        term = J[k + n] * J[l + n]
        terms.append(term)
        if abs(term) < 1e-18 and k + n > x:
            break
        n += 1
    return math.fsum(terms)


def bessel_kernel_ratio(k, l, t):
    """Closed form ``t (J_k J_{l+1} - J_{k+1} J_l) / (k - l)`` at argument 2t, k != l."""
    if k == l:
        raise ValueError("ratio form needs k != l")
    x = 2.0 * t
    return t * (bessel_j(k, x) * bessel_j(l + 1, x) - bessel_j(k + 1, x) * bessel_j(l, x)) / (k - l)


def bessel_kernel_matrix(start, M, t):
    """Block of the Bessel kernel on ``[start, M)`` from one table of J values."""
    if t == 0:
        return np.zeros((M - start, M - start))
    x = 2.0 * t
    nmax = int(M + x + 60)
    J = np.array(bessel_j_orders(nmax, x))
    idx = np.arange(start, M)
    # rows: J_{k+n}, n = 1..nmax-M
    n = np.arange(1, nmax - M + 1)
    A = J[idx[:, None] + n[None, :]]
    return A @ A.T


def bessel_fd(t, N_f, tol=1e-12):
    """``det(I - G_Be)`` on ``{N_f, N_f+1, ...}``."""
    K = DiscreteKernel(lambda k, l: bessel_kernel(k, l, t), int(N_f),
                       lambda s, M: bessel_kernel_matrix(s, M, t))
    return fredholm_det_indexed(K, tol=tol)


# ---------------------------------------------------------------------------
# general double-contour kernel


def _contour_potential(cv, t, z):
    # t sum_m Delta_m (z^-m - z^m)
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape, dtype=complex)
    for m in range(1, cv.M + 1):
        d = cv.deltas[m - 1]
        if d:
            out = out + d * (z ** (-m) - z ** m)
    return t * out


def _general_kernel_block(cv, t, rho, ks, ls, M):
    th = 2.0 * np.pi * np.arange(M) / M
    z = np.exp(1j * th) / rho
    w = rho * np.exp(1j * th)
    ez = np.exp(_contour_potential(cv, t, z))
    ew = np.exp(-_contour_potential(cv, t, w))
    C = 1.0 / (z[:, None] - w[None, :])
    # G(k,l) = mean_{theta,phi} z^-k w^(l+1) e^{V(z)-V(w)} / (z - w)
    Zk = z[None, :] ** (-np.asarray(ks)[:, None]) * ez[None, :]
    Wl = w[:, None] ** (np.asarray(ls)[None, :] + 1) * ew[:, None]
    return Zk @ C @ Wl / (M * M)


def general_kernel_matrix(cv, t, start, stop, rho=0.5, tol=1e-9, M0=64, Mmax=4096):
    """Block of the double-contour kernel on ``[start, stop)``, nodes doubled to ``tol``."""
    idx = np.arange(start, stop)
    M = M0
    prev = _general_kernel_block(cv, t, rho, idx, idx, M)
    while True:
        M *= 2
        if M > Mmax:
            raise ConvergenceError("double-contour quadrature did not converge")
        cur = _general_kernel_block(cv, t, rho, idx, idx, M)
        if np.max(np.abs(cur - prev)) <= tol:
            return cur
        prev = cur


def general_kernel_G(k, l, cv, t, rho=0.5):
    """Double-contour kernel over ``|w| = rho`` and ``|z| = 1/rho``.

    Returns the real part; the imaginary residual is bounded by the quadrature
    tolerance for real symmetric couplings.
    """
    if not 0.3 <= rho <= 0.9:
        raise ValueError("rho must lie in [0.3, 0.9]")
    G = general_kernel_matrix(cv, t, 0, max(k, l) + 1, rho)
    val = G[k, l]
    if abs(val.imag) > 1e-8:
        raise ConvergenceError(f"imaginary residual {val.imag:.3e}")
    return float(val.real)


def szego_constant(cv, t):
    """``exp(sum_{k>=1} k V_k V_-k)`` for ``V = t * potential``."""
    s = 0.0
    for k in range(1, cv.bandwidth() + 1):
        s += k * (t * cv.coefficient(k)) * (t * cv.coefficient(-k))
    return math.exp(s)


def general_fd(cv, t, N_f, rho=0.5, tol=1e-10):
    """``det(I - G)`` on ``{N_f, ...}`` for the double-contour kernel."""
    K = DiscreteKernel(None, int(N_f),
                       lambda s, M: np.real(general_kernel_matrix(cv, t, s, M, rho)))
    return fredholm_det_indexed(K, M0=16, tol=tol, Mmax=512)


# ---------------------------------------------------------------------------
# ratio kernel on two circles


def _v_N(z, d):
    # -z^N/(1-z^N) inside the unit circle, z^-N/(1-z^-N) outside; z^N = s on the nodes
    z = np.asarray(z, dtype=complex)
    zN = z ** d.N / complex(d.s)
    return np.where(np.abs(z) < 1.0, -zN / (1.0 - zN), 1.0 / (zN - 1.0))


def _orthonormal(f, N_f, table=None):
    p, ps = szego_polynomials(f, N_f, table)
    if table is None:
        table = moment_table(f, N_f)
    hn = (toeplitz_det_continuous(f, N_f + 1, table=table).value
          / toeplitz_det_continuous(f, N_f, table=table).value)
    hn = float(np.real(hn))
    return p / math.sqrt(hn), ps / math.sqrt(hn)


def ratio_kernel_K(z, w, f, N_f, d, polys=None):
    """Ratio kernel ``z^-n (p(z) p*(w) - p*(z) p(w)) / (1 - w/z) * sqrt(v v f f)``.

    ``p`` is the orthonormal polynomial of degree ``n = N_f`` for ``f``; the
    circle of each argument (inner if ``|.| < 1``) selects the branch of v_N.
    On the diagonal the difference quotient is replaced by its limit.
    """
    if polys is None:
        polys = _orthonormal(f, N_f)
    p, ps = polys
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    n = N_f
    num = poly_eval(p, z) * poly_eval(ps, w) - poly_eval(ps, z) * poly_eval(p, w)
    den = 1.0 - w / z
    with np.errstate(divide="ignore", invalid="ignore"):
        core = z ** (-n) * num / den
    diag = np.abs(den) < 1e-12
    if np.any(diag):
        dp = np.polynomial.polynomial.polyder(p)
        dps = np.polynomial.polynomial.polyder(ps)
        zz = np.broadcast_to(z, core.shape)[diag]
        # w -> z limit of the difference quotient
        lim = zz ** (1 - n) * (poly_eval(ps, zz) * poly_eval(dp, zz) - poly_eval(p, zz) * poly_eval(dps, zz))
        core = np.array(core)
        core[diag] = lim
    return core * np.sqrt(_v_N(z, d) * f(z)) * np.sqrt(_v_N(w, d) * f(w))


def ratio_fd(f, N_f, d, eps=1e-3, tol=1e-11, M0=None, Mmax=2 ** 20):
    """``det(I - K)`` for the discrete-to-continuous ratio kernel.

    The Nystrom matrix on the two circles has rank ``N_f``; its determinant is
    evaluated as ``det(I_n + B)`` with ``B_jk = sum_a phi~_j(z_a) phi_k(z_a) f v sigma w_a``
    over the quadrature nodes, where ``phi_k`` are orthonormal polynomials and
    ``sigma`` is the orientation sign of each circle.
    """
    n = int(N_f)
    if n == 0:
        return 1.0
    table = moment_table(f, n + 1)
    phis = []
    for k in range(n):
        pk, _ = _orthonormal(f, k, table) if k > 0 else (np.array([1.0 / math.sqrt(float(np.real(table[n + 1])))]), None)
        phis.append(pk)
    M = M0 or int(2 ** math.ceil(math.log2(max(256, 40.0 / eps, 16 * d.N))))
    s_rot = np.exp(1j * np.angle(complex(d.s)) / d.N)
    prev = None
    while M <= Mmax:
        th = 2.0 * np.pi * np.arange(M) / M
        B = np.zeros((n, n), dtype=complex)
        for r, inner, orient in ((1.0 - eps, True, -1.0), (1.0 + eps, False, 1.0)):
            z = r * s_rot * np.exp(1j * th)
            zN = (z / s_rot) ** d.N
            v = -zN / (1.0 - zN) if inner else 1.0 / (zN - 1.0)
            wq = orient * v * f(z) / M
            P = np.array([poly_eval(c, z) for c in phis])
            Pt = np.array([poly_eval(np.conj(c), 1.0 / z) for c in phis])
            B += (Pt * wq[None, :]) @ P.T
        val = np.linalg.det(np.eye(n) + B)
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return complex(val) if abs(val.imag) > 1e-12 * max(1.0, abs(val)) else float(val.real)
        prev = val
        M *= 2
    raise ConvergenceError("ratio kernel quadrature did not converge")


def ratio_fd_nystrom(f, N_f, d, eps=0.3, M=256):
    """Full Nystrom ``det(I - K)`` from the pointwise ratio kernel.

    The inner circle ``|z| = 1 - eps`` is traversed counterclockwise and the
    outer circle ``|z| = 1 + eps`` clockwise, with M trapezoid nodes each.
    Practical only for moderate ``eps``; ``ratio_fd`` is the production route.
    """
    n = int(N_f)
    if n == 0:
        return 1.0
    th = 2.0 * np.pi * np.arange(M) / M
    rot = np.exp(1j * np.angle(complex(d.s)) / d.N)
    z = np.concatenate([(1.0 - eps) * rot * np.exp(1j * th), (1.0 + eps) * rot * np.exp(1j * th)])
    orient = np.concatenate([np.ones(M), -np.ones(M)])
    K = ratio_kernel_K(z[:, None], z[None, :], f, n, d, _orthonormal(f, n))
    val = np.linalg.det(np.eye(2 * M) - K * (orient / M)[None, :])
    return float(val.real) if abs(val.imag) < 1e-10 * max(1.0, abs(val)) else complex(val)


def z_discrete_via_fd(f, N_f, d, eps=1e-3):
    """Discrete partition function as Szego constant * det(I - G) * det(I - K)."""
    cv = f.couplings
    if cv is None:
        raise ValueError("weight needs a coupling vector")
    if cv.kind == "zero" or f.t == 0:
        g = math.exp(f.t * cv.constant_offset * N_f)
    else:
        g = (szego_constant(cv, f.t) * math.exp(f.t * cv.constant_offset * N_f)
             * general_fd(cv, f.t, N_f))
    return g * ratio_fd(f, N_f, d, eps)


# ---------------------------------------------------------------------------
# Airy and Tracy-Widom

_AIRY_CUT = 30.0


def airy_values(xs):
    """Arrays ``(Ai(x), Ai'(x))``; values beyond x = 30 are below 1e-48 and set to zero."""
    xs = np.asarray(xs, dtype=float)
    ai = np.zeros(xs.shape)
    aip = np.zeros(xs.shape)
    for i, x in np.ndenumerate(xs):
        if x <= _AIRY_CUT:
            ai[i], aip[i] = airy(x)
    return ai, aip


def _airy_kernel_from_values(x, ai, aip):
    X = x[:, None] - x[None, :]
    num = ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        K = num / X
    close = np.abs(X) <= 1e-6
    diag = aip ** 2 - x * ai ** 2
    if np.any(close):
        ii, jj = np.nonzero(close)
        K[ii, jj] = 0.5 * (diag[ii] + diag[jj])
    return K


def airy_kernel(x, y):
    """Airy kernel; ratio form away from the diagonal, ``Ai'^2 - x Ai^2`` on it."""
    if abs(x - y) > 1e-6:
        ax, apx = airy(x)
        ay, apy = airy(y)
        return (ax * apy - apx * ay) / (x - y)
    a, ap = airy(0.5 * (x + y))
    return ap * ap - 0.5 * (x + y) * a * a


def continuum_fd(kernel_from_nodes, s, n, L=10.0):
    """Nystrom ``det(I - K)`` on ``[s, inf)`` with the symmetrised matrix."""
    grid = KernelGrid(s, n, L)
    x, w = grid.nodes_weights()
    K = kernel_from_nodes(x)
    sw = np.sqrt(w)
    A = np.eye(n) - sw[:, None] * K * sw[None, :]
    sign, logabs = np.linalg.slogdet(A)
    return sign, logabs


def _tw_logdet(s, n, L):
    def kern(x):
        ai, aip = airy_values(x)
        return _airy_kernel_from_values(x, ai, aip)

    return continuum_fd(kern, s, n, L)


def tracy_widom_logcdf(x, L=10.0, tol=1e-9, n0=32, nmax=256):
    """``log F(x)`` with node doubling 32 -> 64 -> 128 until successive CDFs agree."""
    x = float(x)
    if not -12.0 <= x <= 8.0:
        raise ValueError("tracy_widom_cdf is defined here on [-12, 8]")
    n = n0
    prev = None
    while n <= nmax:
        sign, logabs = _tw_logdet(x, n, L)
        cur = logabs if sign > 0 else -math.inf
        if prev is not None:
            if abs(math.exp(cur) - math.exp(prev)) < tol and abs(cur - prev) < 1e-6 * max(1.0, abs(cur)):
                return cur
        prev = cur
        n *= 2
    return prev


def tracy_widom_cdf(x, **kw):
    """Tracy-Widom (GUE) distribution function as an Airy Fredholm determinant."""
    return min(1.0, max(0.0, math.exp(tracy_widom_logcdf(x, **kw))))


def tw_tail_log(x, side, c3=None):
    """Tail asymptotics.

    right: ``log(1 - F) ~ -(4/3) x^{3/2} - log(32 pi x^{3/2})``;
    left: ``log F ~ -|x|^3/12 - (1/8) log|x| + log c3`` (``c3`` fitted if not given).
    """
    x = float(x)
    if side == "right":
        if x < 2:
            raise ValueError("right tail needs x >= 2")
        return -(4.0 / 3.0) * x ** 1.5 - math.log(32.0 * math.pi * x ** 1.5)
    if side == "left":
        if x > -3:
            raise ValueError("left tail needs x <= -3")
        if c3 is None:
            c3 = fit_left_tail_constant()
        return -abs(x) ** 3 / 12.0 - 0.125 * math.log(abs(x)) + math.log(c3)
    raise ValueError("side must be 'left' or 'right'")


_C3_CACHE = {}


def fit_left_tail_constant(xs=None):
    """Least-squares ``c3`` from ``log F + |x|^3/12 + (1/8) log|x|`` over [-10, -6]."""
    key = None if xs is None else tuple(xs)
    if key in _C3_CACHE:
        return _C3_CACHE[key]
    pts = np.linspace(-10.0, -6.0, 9) if xs is None else np.asarray(xs, dtype=float)
    r = [tracy_widom_logcdf(x) + abs(x) ** 3 / 12.0 + 0.125 * math.log(abs(x)) for x in pts]
    c3 = math.exp(float(np.mean(r)))
    _C3_CACHE[key] = c3
    return c3
