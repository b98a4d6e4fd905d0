"""Toeplitz determinant of the nearest-neighbour weight three ways.

D_{N_f}(e^{t(z+1/z)}) from the moment matrix, from the Schur-function series,
and as e^{t^2} det(I - Bessel kernel) on {N_f, N_f+1, ...}.
"""
import math

from xx0.fredholm import bessel_fd
from xx0.potential import gw_couplings, weight_on_circle
from xx0.selberg import z_series
from xx0.toeplitz import toeplitz_det_continuous

t = 1.0
f = weight_on_circle(gw_couplings(), t)
print(f"{'N_f':>3} {'toeplitz':>20} {'series':>20} {'fredholm':>20}")
for N_f in range(1, 9):
    a = toeplitz_det_continuous(f, N_f).real
    b = float(z_series("gw", t, N_f))
    c = math.exp(t * t) * bessel_fd(t, N_f)
    print(f"{N_f:3d} {a:20.15f} {b:20.15f} {c:20.15f}")
# the determinants approach the strong Szego limit e^{t^2}
print("e^{t^2} =", math.exp(t * t))
