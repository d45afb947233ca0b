"""
Malcev coordinates and the fundamental domain
=============================================

A weak Malcev basis through a subalgebra, coordinates of the second kind,
and reduction of group elements modulo UT(n, Z).
"""

import numpy as np

from nilclose import GroupSpec, NumberField, Subalgebra
from nilclose.malcev import (
    psi,
    quotient_distance,
    reduce_mod_lattice,
    second_kind_coords,
    weak_malcev_through,
)
from nilclose.nilcore import UnipotentElement, elementary

K = NumberField([-2, 0, 1], ["1", "2"])
G = GroupSpec.full(3, K)

###############################################################################
# A basis whose first vector spans the line E12 + theta E13.
h = Subalgebra.from_vectors(G, [(K.one, K.theta, K.zero)])
B = weak_malcev_through(h)
for x in B.xs:
    print([str(v) for v in x.entries])
print("every prefix a subalgebra:", B.prefixes_closed())

###############################################################################
# Coordinates of the second kind are exact.
g = UnipotentElement(elementary(3, 1, 2, K, K(3) / 2) + elementary(3, 2, 3, K, K.theta))
s = second_kind_coords(g, B)
print("coordinates:", [str(v) for v in s])
print("psi(s) == g:", psi(s, B) == g)

###############################################################################
# Reduction writes g = rep * gamma with gamma integral and rep in [0, 1).
p = reduce_mod_lattice(g)
print("rep entries:", [str(v) for v in p.rep.nil.entries])
print("gamma entries:", [str(v) for v in p.gamma.nil.entries])

###############################################################################
# Floating point distance on the quotient; points differing by a lattice
# element are at distance zero.
a = p.rep.to_float()
print("d(g, rep) =", quotient_distance(g.to_float(), a))
b = np.eye(3)
b[0, 1] = 0.99
print("d(rep, nearby) = %.3f" % quotient_distance(a, b))
