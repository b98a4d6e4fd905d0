"""Acceptance checks shared by the test suite and ``xx0 validate``.

Each check returns a :class:`Check` with a pass flag, the worst observed
discrepancy and the wall-clock time.  Tolerances are fixed here and are not
parameters.
"""
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import fredholm, nibm, phase, selberg
from .potential import (
    DEFAULT_SELBERG_N,
    gw_couplings,
    potential_eval,
    quadratic_couplings,
    selberg_couplings,
    selberg_couplings_exact,
    selberg_weight,
    weight_on_circle,
    zero_couplings,
)
from .toeplitz import (
    DiscreteDomain,
    heine_szego_oracle,
    toeplitz_det_continuous,
    toeplitz_det_discrete,
)

__all__ = ["Check", "CHECKS", "SLOW", "run_all", "format_line"]


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _timed(number, name, limit=None):
    def deco(fn):
        def wrapper():
            t0 = time.perf_counter()
            ok, detail = fn()
            dt = time.perf_counter() - t0
            if limit is not None and dt >= limit:
                ok = False
                detail += f"; runtime {dt:.1f}s exceeds {limit}s"
            return Check(number, name, bool(ok), detail, dt)

        wrapper.number = number
        wrapper.check_name = name
        return wrapper

    return deco


def _rel(a, b):
    return abs(a / b - 1.0)


@_timed(1, "Selberg closed form vs Toeplitz", limit=5.0)
def check_selberg_closed_form():
    worst = 0.0
    for t in (1, 2):
        f = selberg_weight(t)
        for N_f in range(1, 7):
            worst = max(worst, _rel(selberg.z_selberg(t, N_f), toeplitz_det_continuous(f, N_f).real))
    return worst <= 1e-8, f"max rel err {worst:.2e} (tol 1e-8)"


@_timed(2, "Heine-Szego oracle equality", limit=30.0)
def check_heine_szego():
    weights = [weight_on_circle(gw_couplings(), 0.7), selberg_weight(1)]
    inserts = [((), ()), ((1,), ()), ((), (2,)), ((2, 1), (1,))]
    worst = 0.0
    for f in weights:
        for N_f in (1, 2, 3):
            for N in (N_f, 7, 12):
                for s in (1.0, np.exp(0.37j)):
                    d = DiscreteDomain(N, s)
                    for lam, mu in inserts:
                        if len(lam) > N_f or len(mu) > N_f:
                            continue
                        a = toeplitz_det_discrete(f, N_f, d, lam, mu).value
                        b = heine_szego_oracle(f, N_f, d, lam, mu)
                        worst = max(worst, abs(a - b) / max(1.0, abs(b)))
    return worst <= 1e-8, f"max err {worst:.2e} (tol 1e-8)"


@_timed(3, "Borodin-Okounkov identity for the Bessel kernel", limit=20.0)
def check_bessel_partition():
    worst = 0.0
    for t in (0.25, 0.5, 1.0, 1.5, 2.0):
        f = weight_on_circle(gw_couplings(), t)
        for N_f in range(1, 9):
            lhs = math.exp(t * t) * fredholm.bessel_fd(t, N_f)
            worst = max(worst, _rel(lhs, toeplitz_det_continuous(f, N_f).real))
    return worst <= 1e-6, f"max rel err {worst:.2e} (tol 1e-6)"


@_timed(4, "Bessel kernel ratio vs series form")
def check_bessel_two_forms():
    worst = 0.0
    for t in (0.5, 1.0, 2.0):
        for k in range(11):
            for l in range(11):
                if k != l:
                    worst = max(worst, abs(fredholm.bessel_kernel_ratio(k, l, t) - fredholm.bessel_kernel(k, l, t)))
    return worst <= 1e-10, f"max abs err {worst:.2e} (tol 1e-10)"


@_timed(5, "Ratio Fredholm identity")
def check_ratio_fd():
    cases = [(weight_on_circle(gw_couplings(), 1.0), 3, 24), (weight_on_circle(zero_couplings(), 0.0), 4, 16)]
    worst = 0.0
    for f, N_f, N in cases:
        d = DiscreteDomain(N)
        ref = toeplitz_det_discrete(f, N_f, d).real / toeplitz_det_continuous(f, N_f).real
        worst = max(worst, abs(fredholm.ratio_fd(f, N_f, d) - ref))
    return worst <= 1e-5, f"max abs err {worst:.2e} (tol 1e-5)"


@_timed(6, "Tracy-Widom tails", limit=60.0)
def check_tw_tails():
    x = 5.0
    log_sf = math.log(-math.expm1(fredholm.tracy_widom_logcdf(x)))
    right = abs(log_sf + (4.0 / 3.0) * x ** 1.5 + math.log(32 * math.pi * x ** 1.5))
    x = -8.0
    lead = abs(x) ** 3 / 12.0
    left = abs(fredholm.tracy_widom_logcdf(x) + lead) / lead
    ok = right <= 0.2 and left <= 0.1
    return ok, f"right {right:.3f} (tol 0.2), left rel {left:.4f} (tol 0.1)"


def _fe(fn):
    return lambda x: fn(x).value


@_timed(7, "GW third-order transition")
def check_gw_transition():
    tw = phase.transition_order(_fe(phase.fe_gw_tw), 1.0)
    ex = phase.transition_order(_fe(phase.fe_gw_exact), 1.0)
    h = 1e-3
    a = phase.one_sided_derivatives(_fe(phase.fe_gw_tw), 1.0, h, +1, 2)
    b = phase.one_sided_derivatives(_fe(phase.fe_gw_exact), 1.0, h, +1, 2)
    match = float(np.max(np.abs(a - b)))
    ok = tw.order == 3 and ex.order == 3 and abs(tw.jump - 1.0) <= 0.05 and match <= 1e-6
    return ok, (f"orders {tw.order}/{ex.order}, tw jump {tw.jump:.4f} (1 +- 5%), "
                f"second-order match {match:.1e} (tol 1e-6)")


@_timed(8, "Selberg finite-model wall")
def check_selberg_wall():
    orders = []
    worst = 0.0
    for tau in (0.5, 1.0, 2.0):
        w = phase.selberg_wall(tau)
        r = phase.transition_order(lambda n: phase.fe_selberg_finite(phase.PhasePoint(tau, n)).value, w)
        orders.append(r.order)
        for k in range(3):
            worst = max(worst, abs(phase.selberg_correction(tau, w, k)))
        base = phase.f_selberg(tau)
        num = phase.one_sided_derivatives(lambda n: phase.fe_selberg_finite(phase.PhasePoint(tau, n)).value - base,
                                          w, 1e-2, -1, 2)
        worst = max(worst, float(np.max(np.abs(num))))
    ok = all(o == 3 for o in orders) and worst <= 1e-8
    return ok, f"orders {orders}, on-wall correction/derivatives {worst:.1e} (tol 1e-8)"


@_timed(9, "Quadratic wall")
def check_quadratic_wall():
    r = phase.transition_order(lambda lam: phase.fe_quadratic_finite(lam).value, 2.0)
    ok = r.order == 3 and abs(r.jump - 2.0) <= 0.1
    return ok, f"order {r.order}, jump {r.jump:.4f} (2 +- 5%)"


@_timed(10, "NIBM exact width formula", limit=180.0)
def check_nibm():
    counts = nibm.width_counts_exact(2, 4)
    total = nibm.lgv_total(2, 4)
    worst_exact = 0.0
    for N in range(1, 9):
        oracle = Fraction(sum(c for w, c in counts.items() if w < 2 * N), total)
        worst_exact = max(worst_exact, abs(float(oracle) - nibm.width_cdf_exact(2, 4, N)))
    worst_sigma = 0.0
    for N_f, t in ((2, 6), (2, 10), (3, 6)):
        r = nibm.width_cdf_mc(N_f, t, 10 ** 5, seed=20240607 + N_f * 100 + t)
        ex = np.array([nibm.width_cdf_exact(N_f, t, N) for N in r.N])
        worst_sigma = max(worst_sigma, float(np.max(np.abs(r.p - ex) / r.sigma)))
    ok = worst_exact <= 1e-12 and worst_sigma <= 3.0
    return ok, f"exact vs enumeration {worst_exact:.1e} (tol 1e-12), MC {worst_sigma:.2f} sigma (tol 3)"


@_timed(11, "Width CDF approaches Tracy-Widom")
def check_tw_trend():
    sched = [(4, 8), (6, 12), (8, 16)]
    ok = True
    parts = []
    for x in (-1.0, 0.0, 1.0):
        gaps = [r["gap"] for r in nibm.tw_limit_check(sched, x)]
        dec = all(gaps[i + 1] < gaps[i] for i in range(len(gaps) - 1))
        ok &= dec
        parts.append(f"x={x:+.0f}: " + ", ".join(f"{g:.4f}" for g in gaps))
    return ok, "gaps " + "; ".join(parts) + " (must strictly decrease)"


@_timed(12, "Zero-potential null result")
def check_zero_potential():
    gap = phase.zero_gap(6, 24)
    lines = []
    for tau in (0.5, 1.0, 2.0):
        lines.append(phase.transition_order(lambda n: phase.fe_zero(phase.PhasePoint(tau, n)).value, tau + 1.0))
    for n in (1.5, 2.0, 3.0):
        lines.append(phase.transition_order(lambda tau: phase.fe_zero(phase.PhasePoint(tau, n)).value, 1.0))
    ok = gap < 1e-10 and all(r.inconclusive for r in lines)
    return ok, f"gap {gap:.1e} (tol 1e-10), walls detected on {sum(not r.inconclusive for r in lines)} of {len(lines)} lines"


@_timed(13, "Selberg coupling expansion")
def check_selberg_expansion():
    cv = selberg_couplings(DEFAULT_SELBERG_N)
    theta = np.linspace(-2.8, 2.8, 1121)
    V = potential_eval(cv, np.exp(1j * theta))
    err = float(np.max(np.abs(V - np.log(2.0 + 2.0 * np.cos(theta)))))
    exact = selberg_couplings_exact(1)[0] == Fraction(1, 2) and selberg_couplings_exact(3)[0] == Fraction(5, 8)
    return err <= 1e-5 and exact, f"max reconstruction err {err:.2e} (tol 1e-5), partial sums exact: {exact}"


@_timed(14, "Series routes vs oracles")
def check_series_routes():
    worst = 0.0
    for model, cv in (("gw", gw_couplings()), ("quadratic", quadratic_couplings())):
        for t in (0.5, 1.0, 1.5):
            f = weight_on_circle(cv, t)
            for N_f in range(1, 5):
                ref = toeplitz_det_continuous(f, N_f).real
                worst = max(worst, _rel(float(selberg.z_series(model, t, N_f)), ref))
    M = 512
    z = np.exp(2j * np.pi * np.arange(M) / M)
    for model, cv in (("gw", gw_couplings()), ("quadratic", quadratic_couplings())):
        for t in (0.5, 1.5):
            f = weight_on_circle(cv, t)(z)
            for k in (1, 2, 3):
                q_lam = float(np.mean(z ** k * f).real)
                q_mu = float(np.mean(z ** (-k) * f).real)
                for route in ("cauchy", "morris"):
                    v = float(selberg.c_series(model, (k,), (), t, 1, route=route))
                    worst = max(worst, abs(v - q_lam) / max(1.0, abs(q_lam)))
                v = float(selberg.c_series(model, (), (k,), t, 1))
                worst = max(worst, abs(v - q_mu) / max(1.0, abs(q_mu)))
    return worst <= 1e-7, f"max err {worst:.2e} (tol 1e-7)"


CHECKS = [
    check_selberg_closed_form,
    check_heine_szego,
    check_bessel_partition,
    check_bessel_two_forms,
    check_ratio_fd,
    check_tw_tails,
    check_gw_transition,
    check_selberg_wall,
    check_quadratic_wall,
    check_nibm,
    check_tw_trend,
    check_zero_potential,
    check_selberg_expansion,
    check_series_routes,
]
SLOW = {10}


def format_line(c):
    return f"[{'PASS' if c.passed else 'FAIL'}] {c.number:2d} {c.name}: {c.detail} ({c.seconds:.2f}s)"


def run_all(include_slow=True):
    out = []
    for fn in CHECKS:
        if not include_slow and fn.number in SLOW:
            continue
        out.append(fn())
    return out
