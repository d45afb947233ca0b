import random
from fractions import Fraction

import pytest

from nilclose.exactfield import QQ, NumberField
from nilclose.nilcore import GroupSpec, NilMatrix, PolyMatrix, elementary, ut_dim
from nilclose.poly import Poly

SQRT2 = NumberField([-2, 0, 1], ["1", "2"])


@pytest.fixture
def K():
    return SQRT2


@pytest.fixture
def heis():
    return GroupSpec.full(3, SQRT2)


def rand_fraction(rng: random.Random, num=9, den=5) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def rand_scalar(rng, field=SQRT2, num=9, den=5):
    return field([rand_fraction(rng, num, den) for _ in range(field.degree)])


def rand_nil(rng, n, field=QQ, density=0.7, num=9, den=5):
    vals = [rand_scalar(rng, field, num, den) if rng.random() < density else field.zero
            for _ in range(ut_dim(n))]
    return NilMatrix(n, vals, field.zero)


def E(n, i, j, field=SQRT2, c=1):
    return elementary(n, i, j, field, c)


def poly_t(field=SQRT2, d=1, k=0):
    return Poly.variable(field, d, k)


def exp_line(N: NilMatrix, field=SQRT2) -> PolyMatrix:
    """t -> exp(tN) as a one-variable PolyMatrix."""
    t = poly_t(field)
    zero = Poly.constant(field, 1, 0)
    P = PolyMatrix(NilMatrix(N.n, [t * x for x in N.entries], zero), "nilpotent", field, 1)
    return PolyMatrix.exp_of(P)


def rand_poly(rng, d, degree, field=QQ, terms=2, zero_const=False):
    p = Poly.constant(field, d, 0)
    for _ in range(rng.randint(1, terms)):
        e = [0] * d
        for _ in range(rng.randint(1 if zero_const else 0, degree)):
            e[rng.randrange(d)] += 1
        p = p + Poly(field, d, {tuple(e): rand_fraction(rng, 4, 3)})
    return p


def rand_polymap(rng, n, d, degree, field=QQ, density=0.5):
    """Unipotent map whose above-diagonal entries are sparse random polynomials of degree <= degree."""
    zero = Poly.constant(field, d, 0)
    entries = [rand_poly(rng, d, degree, field) if rng.random() < density else zero
               for _ in range(ut_dim(n))]
    return PolyMatrix(NilMatrix(n, entries, zero), "unipotent", field, d)
