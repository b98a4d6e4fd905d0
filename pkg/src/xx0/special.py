"""Scalar special functions.

log-Gamma (Lanczos), integer-order Bessel J and modified Bessel I, the Airy
pair (Ai, Ai') and partition-indexed Pochhammer symbols.  Everything here is
self-contained; no external special-function library is used.
"""
import math
from decimal import Decimal, localcontext

__all__ = [
    "log_gamma",
    "gamma_sign",
    "bessel_i",
    "bessel_j",
    "bessel_j_orders",
    "airy",
    "pochhammer_partition",
]

# Lanczos coefficients for g = 607/128, 14 terms.
_LANCZOS_G = 5.24218750000000000
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = 2.5066282746310005


class PoleError(ValueError):
    """Raised when Gamma is evaluated at a nonpositive integer."""


def _is_nonpos_int(x):
    return x <= 0 and x == math.floor(x)


def _lanczos_lgamma(x):
    # valid for x > 0
    y = x
    tmp = x + _LANCZOS_G
    tmp = (x + 0.5) * math.log(tmp) - tmp
    ser = _LANCZOS_C0
    for c in _LANCZOS_COF:
        y += 1.0
        ser += c / y
    return tmp + math.log(_SQRT_2PI * ser / x)


def log_gamma(x):
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``.

    Raises
    ------
    PoleError
        If ``x`` is a nonpositive integer.
    """
    x = float(x)
    if _is_nonpos_int(x):
        raise PoleError(f"Gamma has a pole at x={x}")
    if x == 1.0 or x == 2.0:
        return 0.0, 1
    if x >= 0.5:
        return _lanczos_lgamma(x), 1
    # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
    s = math.sin(math.pi * x)
    lg = math.log(math.pi / abs(s)) - _lanczos_lgamma(1.0 - x)
    return lg, (1 if s > 0 else -1)


def gamma_sign(x):
    """Sign of Gamma(x) away from poles."""
    return log_gamma(x)[1]


def _bessel_series(n, x, sign):
    # sum_k sign^k (x/2)^(n+2k) / (k! (n+k)!)
    h = 0.5 * x
    term = math.exp(n * math.log(h) - math.lgamma(n + 1)) if h > 0 else 0.0
    if h == 0:
        return 1.0 if n == 0 else 0.0
    terms = [term]
    h2 = h * h
    k = 0
    while True:
        k += 1
        term *= sign * h2 / (k * (n + k))
        terms.append(term)
        if abs(term) < 1e-18 * abs(terms[0]) and k > h:
            break
    return math.fsum(terms)


def _miller_orders(nmax, x, modified):
    """Normalised backward recurrence for orders 0..nmax at x > 0."""
    start = 2 * ((max(nmax, int(x)) + 15 + int(math.sqrt(40.0 * max(nmax, x, 1.0)))) // 2)
    vals = [0.0] * (start + 2)
    vals[start + 1] = 0.0
    vals[start] = 1e-30
    for k in range(start, 0, -1):
        if modified:
            vals[k - 1] = 2.0 * k / x * vals[k] + vals[k + 1]
        else:
            vals[k - 1] = 2.0 * k / x * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            vals = [v * 1e-250 for v in vals]
    if modified:
        # I0 + 2 sum I_k = e^x
        norm = vals[0] + 2.0 * math.fsum(vals[1:])
        scale = math.exp(x) / norm
    else:
        # J0 + 2 sum J_2k = 1
        norm = vals[0] + 2.0 * math.fsum(vals[2::2])
        scale = 1.0 / norm
    return [v * scale for v in vals[: nmax + 1]]


def bessel_i(n, x):
    """Modified Bessel function I_n(x) for integer n >= 0 and x >= 0."""
    n = int(n)
    x = float(x)
    if n < 0 or x < 0:
        raise ValueError("bessel_i requires n >= 0 and x >= 0")
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x <= 20.0:
        return _bessel_series(n, x, 1.0)
    return _miller_orders(n, x, True)[n]


def bessel_j_orders(nmax, x):
    """Return ``[J_0(x), ..., J_nmax(x)]``."""
    nmax = int(nmax)
    x = float(x)
    if x == 0.0:
        return [1.0] + [0.0] * nmax
    ax = abs(x)
    if ax < 12.0:
        out = [_bessel_series(n, ax, -1.0) for n in range(nmax + 1)]
    else:
        out = _miller_orders(nmax, ax, False)
    if x < 0:
        out = [v if n % 2 == 0 else -v for n, v in enumerate(out)]
    return out


def bessel_j(n, x):
    """Bessel function of the first kind J_n(x) for integer n >= 0."""
    n = int(n)
    if n < 0:
        raise ValueError("bessel_j requires n >= 0")
    x = float(x)
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    ax = abs(x)
    if ax < 12.0:
        v = _bessel_series(n, ax, -1.0)
    else:
        v = _miller_orders(n, ax, False)[n]
    return -v if (x < 0 and n % 2) else v


# Ai(0) and -Ai'(0) to 45 digits
_AI0 = Decimal("0.355028053887817239260063186004183176397979174")
_AIP0 = Decimal("0.258819403792806798405183560189203963479091138")
_AIRY_SWITCH = 7.0
_AIRY_MAX = 30.0


def _airy_maclaurin(x):
    # Ai = c1 f - c2 g with f, g the two power series solutions of y'' = x y;
    # summed in 40-digit decimal arithmetic to defeat the cancellation near |x| = 7.
    with localcontext() as ctx:
        ctx.prec = 40
        X = Decimal(x)
        x3 = X * X * X
        f = Decimal(1)
        g = X
        fp = Decimal(0)
        gp = Decimal(1)
        tf = Decimal(1)  # x^{3k} coefficient term of f
        tg = X  # x^{3k+1} coefficient term of g
        eps = Decimal("1e-36")
        k = 0
        while True:
            k += 1
            tf = tf * x3 / ((3 * k - 1) * (3 * k))
            tg = tg * x3 / ((3 * k) * (3 * k + 1))
            f += tf
            g += tg
            # derivatives: d/dx x^{3k} = 3k x^{3k-1}
            fp += tf * 3 * k / X if X != 0 else 0
            gp += tg * (3 * k + 1) / X if X != 0 else 0
            if abs(tf) + abs(tg) < eps and k > 3:
                break
        ai = _AI0 * f - _AIP0 * g
        aip = _AI0 * fp - _AIP0 * gp
    return float(ai), float(aip)


def _airy_u_coeffs(n):
    # u_k = (6k-5)(6k-3)(6k-1) / ((2k-1) 216 k) u_{k-1}; v_k = -(6k+1)/(6k-1) u_k
    u = [1.0]
    v = [1.0]
    for k in range(1, n + 1):
        uk = u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        u.append(uk)
        v.append(-(6 * k + 1) / (6 * k - 1) * uk)
    return u, v


_AIRY_U, _AIRY_V = _airy_u_coeffs(40)


def _airy_asymptotic(x):
    if x > 0:
        z = (2.0 / 3.0) * x ** 1.5
        s_u, s_v = [1.0], [1.0]
        last = 1.0
        for k in range(1, len(_AIRY_U)):
            tu = _AIRY_U[k] * (-1) ** k / z ** k
            if abs(tu) > last:
                break
            last = abs(tu)
            s_u.append(tu)
            s_v.append(_AIRY_V[k] * (-1) ** k / z ** k)
            if last < 1e-17:
                break
        e = math.exp(-z)
        ai = e / (2.0 * math.sqrt(math.pi) * x ** 0.25) * math.fsum(s_u)
        aip = -x ** 0.25 * e / (2.0 * math.sqrt(math.pi)) * math.fsum(s_v)
        return ai, aip
    ax = -x
    z = (2.0 / 3.0) * ax ** 1.5
    # even/odd parts of the oscillatory expansion
    pu, qu, pv, qv = [], [], [], []
    last = math.inf
    for k in range(len(_AIRY_U)):
        tu = _AIRY_U[k] / z ** k
        if abs(tu) > last and k > 1:
            break
        last = abs(tu)
        tv = _AIRY_V[k] / z ** k
        sgn = (-1) ** (k // 2)
        if k % 2 == 0:
            pu.append(sgn * tu)
            pv.append(sgn * tv)
        else:
            qu.append(sgn * tu)
            qv.append(sgn * tv)
        if last < 1e-17:
            break
        if k + 1 >= len(_AIRY_U):
            break
    P, Q = math.fsum(pu), math.fsum(qu)
    Pv, Qv = math.fsum(pv), math.fsum(qv)
    phase = z + math.pi / 4.0
    c, s = math.cos(phase), math.sin(phase)
    ai = (P * s - Q * c) / (math.sqrt(math.pi) * ax ** 0.25)
    aip = -ax ** 0.25 * (Pv * c + Qv * s) / math.sqrt(math.pi)
    return ai, aip


def airy(x):
    """Return ``(Ai(x), Ai'(x))`` for real ``x`` in [-30, 30]."""
    x = float(x)
    if not -_AIRY_MAX <= x <= _AIRY_MAX:
        raise ValueError(f"airy: x={x} outside [-30, 30]")
    if abs(x) <= _AIRY_SWITCH:
        return _airy_maclaurin(x)
    return _airy_asymptotic(x)


def pochhammer_partition(b, lam):
    """Generalised Pochhammer symbol ``prod_i (b + 1 - i)_{lam_i}``."""
    out = 1.0
    for i, li in enumerate(lam, start=1):
        base = b + 1 - i
        for k in range(int(li)):
            out *= base + k
    return out
