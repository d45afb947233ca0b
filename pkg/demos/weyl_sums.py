"""
Dense is not the same as uniformly distributed
==============================================

The Kronecker line (t, sqrt(2) t) and the curve (t, ln(1 + t)) are both
dense on the 2-torus.  Their Weyl averages behave very differently.
"""

import math

import numpy as np

from nilclose.equi import NumericCurve, cud_numeric, small_frequencies, weyl_sum
from nilclose.verify import SamplePlan, sample_torus_curve

kronecker = NumericCurve.from_expressions(["t", "theta*t"], theta=math.sqrt(2))
log_curve = NumericCurve.from_expressions(["t", "ln1p(t)"])

###############################################################################
# |W(m, T)| for growing T.  The Kronecker average decays like 1/T.
for T in (1e2, 1e3, 1e4):
    print("kronecker  T=%-8g |W((1,1))| = %.3e" % (T, abs(weyl_sum(kronecker, (1, 1), T))))

###############################################################################
# For (t, ln(1+t)) and m = (0, 1) the average settles near 1/sqrt(1 + 4 pi^2).
for T in (1e2, 1e4, 1e6):
    print("ln curve   T=%-8g |W((0,1))| = %.5f" % (T, abs(weyl_sum(log_curve, (0, 1), T))))
print("limit                        %.5f" % (1 / math.sqrt(1 + 4 * math.pi ** 2)))

###############################################################################
# Yet the ln curve visits every cell of a 10 x 10 grid.
orbit = sample_torus_curve(log_curve, SamplePlan(((0.0, 1e6),), count=100000))
cells = np.floor(orbit.coords * 10).astype(int)
print("cells visited: %d of 100" % len({tuple(c) for c in cells}))

###############################################################################
# The full report over small frequencies.
report = cud_numeric(kronecker, small_frequencies(2, 8), [1e2, 1e3, 1e4])
print("kronecker verdict:", report.verdict)
report = cud_numeric(log_curve, [(0, 1), (1, 0)], [1e2, 1e4, 1e6])
print("ln curve verdict: ", report.verdict)
