"""
Orbit closures of lines in the Heisenberg nilmanifold
=====================================================

Two one-parameter subgroups of UT(3, R), one dense in UT(3, R)/UT(3, Z)
and one trapped in a 2-torus, followed by a sampling check of the first.
"""

import numpy as np

from nilclose import GroupSpec, NumberField, Subalgebra, rational_closure
from nilclose.closure import polymap_closure
from nilclose.nilcore import NilMatrix, PolyMatrix, elementary
from nilclose.poly import Poly
from nilclose.verify import SamplePlan, hausdorff_check, sample_orbit, sample_predicted

# theta = sqrt(2), the root of x^2 - 2 in [1, 2]
K = NumberField([-2, 0, 1], ["1", "2"])
G = GroupSpec.full(3, K)
theta = K.theta

###############################################################################
# Subalgebras are given by coordinate vectors in the order (12), (13), (23).
dense = Subalgebra.from_vectors(G, [(K.one, K.zero, theta)])
flat = Subalgebra.from_vectors(G, [(K.one, theta, K.zero)])

for name, h in [("E12 + theta E23", dense), ("E12 + theta E13", flat)]:
    r = rational_closure(h)
    print("%-16s closure dim %d, basis %s" % (name, r.dim, r.space.to_json()))

###############################################################################
# The same line as a polynomial map t -> exp(tN).
t = Poly.variable(K, 1, 0)
zero = Poly.constant(K, 1, 0)
N = elementary(3, 1, 2, K) + elementary(3, 2, 3, K, theta)
F = PolyMatrix.exp_of(PolyMatrix(NilMatrix(3, [t * x for x in N.entries], zero), "nilpotent", K, 1))
result = polymap_closure(F, G)
print("dense in the group:", result.dense_in_group)

###############################################################################
# Sample the orbit for t in [0, 10^4] and compare with uniform samples of the
# predicted closure.
orbit = sample_orbit(F, SamplePlan(((0.0, 1e4),), count=100000))
predicted = sample_predicted(result, SamplePlan((), count=20000, seed=1))
report = hausdorff_check(orbit, predicted, delta=0.125)
print("containment %.1e  density %.3f  coverage %.3f"
      % (report.max_orbit_to_predicted, report.max_predicted_to_orbit, report.coverage))

# a histogram of the central coordinate should be roughly flat
hist, _ = np.histogram(orbit.coords[:, 1], bins=8, range=(0, 1))
print("e13 histogram:", hist.tolist())
