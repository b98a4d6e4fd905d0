"""Tracy-Widom CDF from the Airy-kernel Fredholm determinant, with both tails."""
import math

import numpy as np

from xx0.fredholm import fit_left_tail_constant, tracy_widom_cdf, tracy_widom_logcdf, tw_tail_log

xs = np.arange(-6.0, 4.01, 0.5)
for x in xs:
    print(f"x={x:+5.1f}  F={tracy_widom_cdf(x):.15f}")

c3 = fit_left_tail_constant()
print("fitted left-tail constant c3 =", c3)

# right tail: log(1-F) against the leading asymptotics
for x in (3.0, 4.0, 5.0, 6.0):
    lsf = math.log(-math.expm1(tracy_widom_logcdf(x)))
    print(f"x={x}: log(1-F)={lsf:.4f}  asymptotic={tw_tail_log(x, 'right'):.4f}")
