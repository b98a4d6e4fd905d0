"""Free-energy walls and numerically detected transition orders."""
import math

from xx0 import phase

lines = [
    ("GW infinite chain, tau = 1", lambda x: phase.fe_gw_exact(x).value, 1.0),
    ("GW TW reconstruction, tau = 1", lambda x: phase.fe_gw_tw(x).value, 1.0),
    ("GW finite, tau = 0.5, n_inv = 1.5", lambda n: phase.fe_gw_finite((0.5, n)).value, 1.5),
    ("GW finite, n_inv = 1.5, tau = 1", lambda tau: phase.fe_gw_finite((tau, 1.5)).value, 1.0),
    ("quadratic, lam = 2", lambda lam: phase.fe_quadratic_finite(lam).value, 2.0),
    ("Selberg, tau = 1", lambda n: phase.fe_selberg_finite((1.0, n)).value, phase.selberg_wall(1.0)),
]
for name, fe, x0 in lines:
    r = phase.transition_order(fe, x0)
    print(f"{name:38s} order {r.order}  jump {r.jump:.4f}")

# wall polylines, ready for any plotting tool
for c in phase.wall_curves("gw-finite", samples=5):
    pts = ", ".join(f"({a:.2f}, {b:.2f})" for a, b in zip(c["tau"], c["n_inv"]))
    print(c["label"], "order", c["order"], ":", pts)

# finite-N_f reconstruction from the Tracy-Widom CDF approaches tau^2/4 in the weak phase
for N_f in (10, 20, 50):
    print(N_f, phase.fe_from_tw("gw", phase.PhasePoint(0.8), N_f).value, 0.8 ** 2 / 4)
