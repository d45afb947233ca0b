"""
The frontier of a product of hyperbolas
=======================================

C = {(t, 1/t) : t > 1} is closed in the 2-torus up to its asymptote
H = R x {0}.  In the 4-torus the closure of C x C picks up
(C x H), (H x C) and (H x H).  Here we sample those pieces and measure how
far they sit from samples of C x C.
"""

import numpy as np

from nilclose.closure import MonomialCurve, abelian_nearest_coset, torus_product_frontier
from nilclose.verify import SamplePlan, SampleSet, hausdorff_check, sample_torus_product

C = MonomialCurve.make([(1, [1, 0]), (-1, [0, 1])])
A = abelian_nearest_coset(C)
print("nearest coset: point %s, direction %s" % ([str(x) for x in A.point], A.direction.to_json()))

###############################################################################
# Orbit samples of C x C, log-spaced in both parameters.
plan = SamplePlan(((1.0, 200.0), (1.0, 200.0)), count=40000, scale="log")
x = plan.params()
v = np.hstack([C.evaluate(x[:, 0]), C.evaluate(x[:, 1])])
orbit = SampleSet("torus", v - np.floor(v), 4, raw=v)

###############################################################################
# Frontier samples, one block per piece.
pieces = torus_product_frontier([C, C])
for piece in pieces:
    print(" x ".join(kind for kind, _ in piece))
frontier = sample_torus_product(pieces, SamplePlan(((1.0, 200.0),), count=4000, seed=1, scale="log"))

report = hausdorff_check(orbit, frontier, delta=0.1, tol_density=0.1, enforce=("density",))
print("max distance from frontier to C x C samples: %.4f" % report.max_predicted_to_orbit)
