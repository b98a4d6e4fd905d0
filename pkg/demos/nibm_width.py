"""Width of non-intersecting bridges: Monte Carlo, exact Toeplitz formula, TW scaling."""
import numpy as np

from xx0 import nibm

N_f, t = 2, 6
r = nibm.width_cdf_mc(N_f, t, 100000, seed=20240607)
print(" 2N   empirical     exact        wilson")
for N, p, lo, hi in zip(r.N, r.p, r.lo, r.hi):
    ex = nibm.width_cdf_exact(N_f, t, int(N))
    print(f"{2 * N:3d}  {p:.5f}  {ex:.8f}  [{lo:.5f}, {hi:.5f}]")

# exact distribution by transfer over time, normalised by the LGV count
counts = nibm.width_counts_exact(N_f, t)
total = nibm.lgv_total(N_f, t)
print("P(W = w):", {w: c / total for w, c in sorted(counts.items())})

# approach to the Tracy-Widom law at fixed tau = 2
for x in (-1.0, 0.0, 1.0):
    rows = nibm.tw_limit_check([(4, 8), (6, 12), (8, 16)], x)
    print(f"x={x:+.0f}", ["%.4f" % row["gap"] for row in rows])
