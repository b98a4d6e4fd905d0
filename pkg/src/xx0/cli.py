"""Command-line front end.

Every run writes a metadata header (tool version, resolved configuration,
seed) followed by records, as CSV or JSON.  Exit codes: 0 success, 2 invalid
input, 1 numerical failure.
"""
import argparse
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__

__all__ = ["main", "build_parser", "emit", "format_float"]

DEFAULT_SEED = 12345


class NumericalFailure(RuntimeError):
    pass


def format_float(x):
    """17 significant digits, '.' decimal, ``nan``/``inf`` spelled out."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _cell(v):
    if isinstance(v, str):
        if any(c in v for c in ',"\n'):
            return '"' + v.replace('"', '""') + '"'
        return v
    return format_float(v)


def emit(meta, columns, rows, fmt="csv"):
    """Serialise records to bytes.

    CSV: ``# key=value`` metadata lines, a header row, then one row per record
    with LF line endings.  JSON: a single object ``{meta, columns, rows}``.
    """
    if fmt == "csv":
        buf = io.StringIO(newline="")
        for k in sorted(meta):
            buf.write(f"# {k}={json.dumps(meta[k], sort_keys=True)}\n")
        buf.write(",".join(columns) + "\n")
        for r in rows:
            buf.write(",".join(_cell(v) for v in r) + "\n")
        return buf.getvalue().encode("utf-8")
    if fmt == "json":
        def conv(v):
            if isinstance(v, str):
                return v
            if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
                return int(v)
            x = float(v)
            return x if math.isfinite(x) else format_float(x)

        obj = {"meta": meta, "columns": list(columns), "rows": [[conv(v) for v in r] for r in rows]}
        return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# subcommands


def _weight(model, t, n=1, delta=1.0):
    from .potential import gw_couplings, quadratic_couplings, selberg_weight, single_couplings
    from .potential import weight_on_circle, zero_couplings

    if model == "gw":
        return weight_on_circle(gw_couplings(), t)
    if model == "quadratic":
        return weight_on_circle(quadratic_couplings(), t)
    if model == "single":
        return weight_on_circle(single_couplings(n, delta), t)
    if model == "zero":
        return weight_on_circle(zero_couplings(), t)
    if model == "selberg":
        return selberg_weight(t)
    raise ValueError(f"unknown model {model!r}")


def _methods(s, allowed):
    ms = [m.strip() for m in s.split(",") if m.strip()]
    bad = [m for m in ms if m not in allowed]
    if bad or not ms:
        raise ValueError(f"methods must be among {sorted(allowed)}")
    return ms


def _partition(s):
    if s is None or s.strip() in ("", "()"):
        return ()
    return tuple(int(p) for p in s.split(","))


def _zfun_value(method, a):
    from . import fredholm, selberg
    from .toeplitz import DiscreteDomain, toeplitz_det_continuous, toeplitz_det_discrete

    f = _weight(a.model, a.t, a.n, a.delta)
    if method == "toeplitz":
        if a.N:
            return toeplitz_det_discrete(f, a.nf, DiscreteDomain(a.N)).real
        return toeplitz_det_continuous(f, a.nf).real
    if method == "selberg":
        if a.model != "selberg":
            raise ValueError("method 'selberg' needs --model selberg")
        return selberg.z_selberg(a.t, a.nf)
    if method == "series":
        return float(selberg.z_series(a.model, a.t, a.nf, cutoff=a.cutoff, n=a.n, delta=a.delta))
    if method == "fredholm":
        if a.N:
            return float(np.real(fredholm.z_discrete_via_fd(f, a.nf, DiscreteDomain(a.N))))
        if a.model == "gw":
            return math.exp(a.t * a.t) * fredholm.bessel_fd(a.t, a.nf)
        cv = f.couplings
        return (fredholm.szego_constant(cv, a.t) * math.exp(a.t * cv.constant_offset * a.nf)
                * fredholm.general_fd(cv, a.t, a.nf))
    raise ValueError(method)


def cmd_zfun(a):
    ms = _methods(a.method, {"toeplitz", "selberg", "series", "fredholm"})
    vals = [_zfun_value(m, a) for m in ms]
    ref = vals[0]
    rows = [[a.model, a.t, a.nf, a.N or 0, m, v, abs(v / ref - 1.0) if ref else math.nan]
            for m, v in zip(ms, vals)]
    return ["model", "t", "nf", "N", "method", "value", "rel_gap"], rows


def cmd_corr(a):
    from . import selberg
    from .toeplitz import toeplitz_det_continuous

    lam, mu = _partition(a.lam), _partition(a.mu)
    ms = _methods(a.method, {"toeplitz", "series", "selberg"})
    rows = []
    vals = []
    for m in ms:
        if m == "toeplitz":
            v = toeplitz_det_continuous(_weight(a.model, a.t, a.n, a.delta), a.nf, lam, mu).real
        elif m == "series":
            v = float(selberg.c_series(a.model, lam, mu, a.t, a.nf, cutoff=a.cutoff, n=a.n, delta=a.delta))
        else:
            if a.model != "selberg" or mu:
                raise ValueError("method 'selberg' needs --model selberg and no --mu")
            v = selberg.c_star_selberg(lam, a.t, a.nf)
        vals.append(v)
    ref = vals[0]
    for m, v in zip(ms, vals):
        rows.append([a.model, a.t, a.nf, a.lam or "", a.mu or "", m, v,
                     abs(v / ref - 1.0) if ref else math.nan])
    return ["model", "t", "nf", "lam", "mu", "method", "value", "rel_gap"], rows


def cmd_tw(a):
    from .fredholm import tracy_widom_cdf, tw_tail_log

    n = int(round((a.xmax - a.xmin) / a.step)) + 1
    if n < 1:
        raise ValueError("xmax must be >= xmin")
    rows = []
    for i in range(n):
        x = a.xmin + i * a.step
        F = tracy_widom_cdf(x)
        right = 1.0 - math.exp(tw_tail_log(x, "right")) if x >= 2 else math.nan
        left = math.exp(tw_tail_log(x, "left")) if x <= -3 else math.nan
        rows.append([x, F, right, left])
    return ["x", "F", "right_tail", "left_tail"], rows


def _fe_at(model, tau, n):
    from . import phase

    p = phase.PhasePoint(tau, n)
    if model in ("gw", "gw-infinite"):
        return phase.fe_gw_exact(tau)
    if model == "gw-tw":
        return phase.fe_gw_tw(tau)
    if model == "gw-finite":
        return phase.fe_gw_finite(p)
    if model == "selberg":
        return phase.fe_selberg_finite(p)
    if model == "zero":
        return phase.fe_zero(p)
    raise ValueError(f"unknown phase model {model!r}")


def cmd_phase(a):
    from . import phase

    if a.walls:
        rows = []
        for c in phase.wall_curves(a.model, tau_max=a.tau_max, n_inv_max=a.n_max):
            if c.get("tau") is None:
                rows.append([c["label"], c["order"], c["style"], math.nan, math.nan])
                continue
            for tau, n in zip(c["tau"], c["n_inv"]):
                rows.append([c["label"], c["order"], c["style"], tau, n])
        return ["curve", "order", "style", "tau", "n_inv"], rows
    if a.model == "quadratic":
        rows = []
        for i in range(a.grid):
            lam = a.n_min + (a.n_max - a.n_min) * i / max(1, a.grid - 1)
            r = phase.fe_quadratic_finite(lam)
            rows.append([lam, r.value, r.branch])
        return ["lam", "F", "branch"], rows
    rows = []
    for i in range(a.grid):
        tau = a.tau_min + (a.tau_max - a.tau_min) * i / max(1, a.grid - 1)
        for k in range(a.grid):
            n = a.n_min + (a.n_max - a.n_min) * k / max(1, a.grid - 1)
            r = _fe_at(a.model, tau, n)
            rows.append([tau, n, r.value, r.branch])
    return ["tau", "n_inv", "F", "branch"], rows


def cmd_nibm(a):
    from . import nibm

    r = nibm.width_cdf_mc(a.nf, a.t, a.samples, a.seed, threads=a.threads)
    rows = []
    for N, p, lo, hi in zip(r.N, r.p, r.lo, r.hi):
        ex = nibm.width_cdf_exact(a.nf, a.t, int(N)) if a.exact else math.nan
        rows.append([2 * int(N), p, ex, lo, hi])
    return ["threshold", "empirical", "exact", "wilson_lo", "wilson_hi"], rows


def cmd_expand(a):
    from .potential import selberg_couplings

    cv = selberg_couplings(a.N)
    rows = [[0, cv.constant_offset]] + [[m, d] for m, d in enumerate(cv.deltas, start=1)]
    return ["m", "delta"], rows


def cmd_validate(a):
    from .acceptance import format_line, run_all

    results = run_all(include_slow=a.full)
    for c in results:
        print(format_line(c), file=sys.stderr)
    rows = [[c.number, c.name, c.passed, c.detail] for c in results]
    return ["criterion", "name", "passed", "detail"], rows, all(c.passed for c in results)


# ---------------------------------------------------------------------------
# parser


def _threads_default():
    env = os.environ.get("XX0_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def build_parser():
    p = argparse.ArgumentParser(prog="xx0", description="Generalized XX0 spin-chain toolkit",
                                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    p.add_argument("--version", action="version", version=f"xx0 {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", "-o", default="-", help="output path ('-' for stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed (echoed in metadata)")
        sp.add_argument("--threads", type=int, default=_threads_default(),
                        help="worker cap (falls back to XX0_THREADS)")

    fmt = argparse.ArgumentDefaultsHelpFormatter
    s = sub.add_parser("zfun", help="partition function by several methods", formatter_class=fmt)
    s.add_argument("--model", choices=("gw", "quadratic", "single", "selberg", "zero"), default="gw")
    s.add_argument("--t", type=float, default=1.0, help="time parameter")
    s.add_argument("--nf", type=int, default=4, help="number of magnons")
    s.add_argument("--N", type=int, default=0, help="discrete domain size (0 = continuous)")
    s.add_argument("--n", type=int, default=1, help="range of the single-term model")
    s.add_argument("--delta", type=float, default=1.0, help="coupling of the single-term model")
    s.add_argument("--cutoff", type=int, default=60, help="series cutoff")
    s.add_argument("--method", default="toeplitz", help="comma list of toeplitz,selberg,series,fredholm")
    common(s)

    s = sub.add_parser("corr", help="Schur-inserted correlators", formatter_class=fmt)
    s.add_argument("--model", choices=("gw", "quadratic", "single", "selberg"), default="gw")
    s.add_argument("--t", type=float, default=1.0, help="time parameter")
    s.add_argument("--nf", type=int, default=2, help="number of magnons")
    s.add_argument("--lam", default="1", help="partition inserted as S(z), comma separated")
    s.add_argument("--mu", default="", help="partition inserted as S(1/z), comma separated")
    s.add_argument("--n", type=int, default=1, help="range of the single-term model")
    s.add_argument("--delta", type=float, default=1.0, help="coupling of the single-term model")
    s.add_argument("--cutoff", type=int, default=60, help="series cutoff")
    s.add_argument("--method", default="toeplitz", help="comma list of toeplitz,series,selberg")
    common(s)

    s = sub.add_parser("tw", help="Tracy-Widom CDF and tail approximations", formatter_class=fmt)
    s.add_argument("--xmin", type=float, default=-8.0)
    s.add_argument("--xmax", type=float, default=4.0)
    s.add_argument("--step", type=float, default=0.25)
    common(s)

    s = sub.add_parser("phase", help="free-energy grids and wall polylines", formatter_class=fmt)
    s.add_argument("--model", choices=("gw", "gw-infinite", "gw-tw", "gw-finite", "selberg", "quadratic", "zero"),
                   default="gw-finite")
    s.add_argument("--tau-min", type=float, default=0.1)
    s.add_argument("--tau-max", type=float, default=3.0)
    s.add_argument("--n-min", type=float, default=1.0, help="smallest n_inv (lam for quadratic)")
    s.add_argument("--n-max", type=float, default=6.0, help="largest n_inv (lam for quadratic)")
    s.add_argument("--grid", type=int, default=21, help="points per axis")
    s.add_argument("--walls", action="store_true", help="emit wall polylines instead of a grid")
    common(s)

    s = sub.add_parser("nibm", help="width CDF of non-intersecting bridges", formatter_class=fmt)
    s.add_argument("--nf", type=int, default=2, help="number of walkers")
    s.add_argument("--t", type=int, default=6, help="half the number of steps")
    s.add_argument("--samples", type=int, default=100000)
    s.add_argument("--no-exact", dest="exact", action="store_false", help="skip the exact column")
    common(s)

    s = sub.add_parser("expand", help="Selberg coupling expansion", formatter_class=fmt)
    s.add_argument("--N", type=int, default=161, help="odd truncation order")
    common(s)

    s = sub.add_parser("validate", help="run acceptance checks", formatter_class=fmt)
    s.add_argument("--full", action="store_true", help="include the Monte Carlo check")
    common(s)
    return p


_COMMANDS = {"zfun": cmd_zfun, "corr": cmd_corr, "tw": cmd_tw, "phase": cmd_phase,
             "nibm": cmd_nibm, "expand": cmd_expand, "validate": cmd_validate}


def _resolved(a):
    cfg = {k: v for k, v in vars(a).items() if k not in ("out", "format")}
    return cfg


def main(argv=None):
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if a.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    ok = True
    try:
        out = _COMMANDS[a.command](a)
        if len(out) == 3:
            cols, rows, ok = out
        else:
            cols, rows = out
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1
    meta = {"tool": "xx0", "version": __version__, "config": _resolved(a), "seed": a.seed}
    data = emit(meta, cols, rows, a.format)
    if a.out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        with open(a.out, "wb") as fh:
            fh.write(data)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
