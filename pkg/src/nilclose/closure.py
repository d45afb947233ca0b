"""Closures of subgroup orbits, polynomial images and torus curves.

For a polynomial map F with image X, the closure of pi(X) in G/Gamma is
pi(c H^Gamma) where cH is the smallest coset of an algebraic subgroup
containing X.  Algebraically: c = F(x0), and the Lie algebra of H is the
bracket closure of the coefficient span of log(c^-1 F).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exactfield import (
    NumberField,
    QQ,
    Subspace,
    integer_basis,
    integer_kernel,
    kernel,
    parse_rational,
)
from .malcev import split_coset
from .nilcore import (
    GroupSpec,
    NilMatrix,
    NotInGroupError,
    PolyMatrix,
    UnipotentElement,
    coefficient_span,
    log_unip,
    polymap_eval,
    symbolic_log_translate,
)
from .subalg import Subalgebra, bracket_closure, rational_closure

__all__ = [
    "Coset",
    "ClosureResult",
    "MonomialCurve",
    "AffineCoset",
    "TorusClosure",
    "smallest_coset_polymap",
    "orbit_closure",
    "polymap_closure",
    "abelian_nearest_coset",
    "torus_monomial_closure",
    "torus_curve_closure",
    "torus_product_frontier",
]


class Coset:
    """The coset ``c · exp(h)`` with ``c`` the Malcev-section representative."""

    __slots__ = ("base", "algebra")

    def __init__(self, base: UnipotentElement, algebra: Subalgebra, canonical: bool = False):
        if not canonical:
            base, _ = split_coset(base, algebra)
        self.base = base
        self.algebra = algebra

    @property
    def group(self) -> GroupSpec:
        return self.algebra.group

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def contains(self, g: UnipotentElement) -> bool:
        return self.algebra.contains(log_unip(self.base.inverse() * g))

    def __eq__(self, other):
        if not isinstance(other, Coset):
            return NotImplemented
        return self.base == other.base and self.algebra == other.algebra

    def __hash__(self):
        return hash((self.base, self.algebra))

    def __repr__(self):
        return "Coset(base=%r, dim=%d)" % (self.base, self.dim)


@dataclass
class ClosureResult:
    """``coset`` = c·exp(h^Gamma) (the closure); ``raw_coset`` = c·exp(h)."""

    coset: Coset
    raw_coset: Coset

    @property
    def dims(self) -> dict:
        return {"raw": self.raw_coset.dim, "closed": self.coset.dim}

    @property
    def dense_in_group(self) -> bool:
        return self.coset.dim == self.coset.group.dim

    def rational_certificate(self) -> list:
        """The closed algebra's echelon basis, every entry rational."""
        space = self.coset.algebra.space
        assert space.is_rational()
        return [[x.to_fraction() for x in row] for row in space.basis]

    def to_json(self) -> dict:
        n = self.coset.group.n
        base = self.coset.base
        return {
            "format": 1,
            "n": n,
            "base": [[str(base[i, j]) for j in range(n)] for i in range(n)],
            "algebra_basis": self.raw_coset.algebra.space.to_json(),
            "algebra_rational_basis": self.coset.algebra.space.to_json(),
            "dims": self.dims,
            "dense_in_group": self.dense_in_group,
        }


def _check_image_in_group(F: PolyMatrix, group: GroupSpec):
    if F.n != group.n:
        raise NotInGroupError("map has size %d but group has n=%d" % (F.n, group.n))
    if F.kind != "unipotent":
        raise NotInGroupError("map must be unipotent-shaped")
    identity = UnipotentElement.identity(F.n, F.field)
    logF = symbolic_log_translate(F, identity)
    for e in logF.monomials():
        vec = [p.terms.get(e, F.field.zero) for p in logF.nil.entries]
        if not group.lie_algebra.contains(vec):
            raise NotInGroupError("log F has a coefficient outside the group's algebra")


def smallest_coset_polymap(F: PolyMatrix, group: GroupSpec, base_point: Sequence | None = None) -> Coset:
    """Smallest coset c·exp(h) of an algebraic subgroup containing F(R^d)."""
    _check_image_in_group(F, group)
    if base_point is not None:
        # reparametrize so the base point sits at the origin; the image is unchanged
        x0 = [F.field(v) for v in base_point]
        if len(x0) != F.d:
            raise ValueError("base point has %d coordinates, map has %d" % (len(x0), F.d))
        zero = F.nil.zero
        F = PolyMatrix(NilMatrix(F.n, [p.substitute_shift(x0) for p in F.nil.entries], zero),
                       F.kind, F.field, F.d)
    c = polymap_eval(F, [F.field.zero] * F.d)
    P = symbolic_log_translate(F, c)
    h = bracket_closure(group, coefficient_span(P))
    return Coset(c, h)


def containment_certificate(F: PolyMatrix, coset: Coset) -> bool:
    """True iff log(c^-1 F(x)) lies in the coset's algebra as a polynomial identity."""
    P = symbolic_log_translate(F, coset.base)
    zero = F.field.zero
    return all(coset.algebra.contains([p.terms.get(e, zero) for p in P.nil.entries])
               for e in P.monomials())


def orbit_closure(h: Subalgebra) -> ClosureResult:
    """Closure of pi(exp h): the orbit of exp(rational_closure(h)) through the origin."""
    e = UnipotentElement.identity(h.group.n, h.group.field)
    return ClosureResult(coset=Coset(e, rational_closure(h), canonical=True),
                         raw_coset=Coset(e, h, canonical=True))


def polymap_closure(F: PolyMatrix, group: GroupSpec, base_point: Sequence | None = None) -> ClosureResult:
    raw = smallest_coset_polymap(F, group, base_point)
    closed = Coset(raw.base, rational_closure(raw.algebra))
    return ClosureResult(coset=closed, raw_coset=raw)


# -- abelian curves -------------------------------------------------------------

@dataclass(frozen=True)
class MonomialCurve:
    """sigma(t) = sum_alpha c_alpha t^alpha for t > 0, exponents distinct, sorted descending."""

    n: int
    terms: tuple  # ((alpha: Fraction, coeff: tuple of Scalar), ...)
    field: NumberField = QQ

    @classmethod
    def make(cls, terms, n: int | None = None, field: NumberField = QQ) -> "MonomialCurve":
        merged: dict = {}
        for alpha, coeff in terms:
            a = parse_rational(alpha)
            vec = tuple(field(x) for x in coeff)
            if n is None:
                n = len(vec)
            if len(vec) != n:
                raise ValueError("coefficient vector of length %d, expected %d" % (len(vec), n))
            if a in merged:
                merged[a] = tuple(x + y for x, y in zip(merged[a], vec))
            else:
                merged[a] = vec
        if n is None:
            raise ValueError("n is required for an empty curve")
        items = tuple(sorted(((a, v) for a, v in merged.items() if any(v)),
                             key=lambda item: -item[0]))
        return cls(n, items, field)

    def coefficient(self, alpha) -> tuple:
        a = parse_rational(alpha)
        for b, v in self.terms:
            if b == a:
                return v
        return tuple(self.field.zero for _ in range(self.n))

    def is_polynomial(self) -> bool:
        return all(a >= 0 and a.denominator == 1 for a, _ in self.terms)

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.n,))
        for a, v in self.terms:
            out += np.power.outer(t, float(a)) [..., None] * np.array([float(x) for x in v])
        return out

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape + (self.n,))
        for a, v in self.terms:
            if a:
                out += (float(a) * np.power.outer(t, float(a) - 1))[..., None] * \
                    np.array([float(x) for x in v])
        return out


@dataclass(frozen=True)
class AffineCoset:
    """``point + direction`` in R^n with ``point`` reduced against the direction's echelon basis."""

    point: tuple
    direction: Subspace

    @classmethod
    def make(cls, point, direction: Subspace) -> "AffineCoset":
        return cls(tuple(direction.reduce(point)), direction)

    def distance(self, x) -> float:
        """Euclidean distance from a float point to the affine subspace."""
        B = np.array([[float(v) for v in row] for row in self.direction.basis]).reshape(-1, len(self.point))
        d = np.asarray(x, dtype=float) - np.array([float(v) for v in self.point])
        if B.shape[0]:
            Q, _ = np.linalg.qr(B.T)
            d = d - Q @ (Q.T @ d)
        return float(np.linalg.norm(d))


def abelian_nearest_coset(sigma: MonomialCurve) -> AffineCoset:
    """Nearest affine subspace a + H to sigma(t) as t -> infinity.

    a is the t^0 coefficient, H the span of the coefficients of positive
    powers; negative powers decay.  Distinct real powers of t are linearly
    independent, which makes this coset the smallest one.
    """
    a = sigma.coefficient(0)
    H = Subspace(sigma.field, sigma.n, [v for alpha, v in sigma.terms if alpha > 0])
    return AffineCoset.make(a, H)


@dataclass(frozen=True)
class TorusClosure:
    """cl(pi(sigma)) = pi(sigma) ∪ pi(point + L); dense iff L is everything."""

    point: tuple
    L: Subspace
    witnesses: tuple  # integer vectors m with <m, sigma(t)> bounded
    dense: bool

    def residual(self, x):
        """Per-sample distance of torus points x (N, n) to pi(point + L)."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        if not self.witnesses:
            return np.zeros(x.shape[0])
        M = np.array(self.witnesses, dtype=float)
        a = np.array([float(v) for v in self.point])
        vals = (x - a) @ M.T
        frac = np.abs(vals - np.round(vals)) / np.linalg.norm(M, axis=1)
        return frac.max(axis=1)

    def to_json(self) -> dict:
        return {
            "format": 1,
            "point": [str(v) for v in self.point],
            "L_basis": self.L.to_json(),
            "witnesses": [list(w) for w in self.witnesses],
            "dense": self.dense,
        }


def torus_monomial_closure(sigma: MonomialCurve) -> TorusClosure:
    """Closure data in T^n = R^n/Z^n for any monomial curve."""
    nearest = abelian_nearest_coset(sigma)
    M = integer_kernel(nearest.direction.basis, sigma.n, sigma.field)
    witnesses = tuple(integer_basis(M))
    L = kernel([list(w) for w in witnesses], sigma.n, sigma.field) if witnesses \
        else Subspace.full(sigma.field, sigma.n)
    return TorusClosure(point=sigma.coefficient(0), L=L, witnesses=witnesses,
                        dense=M.rank == 0)


def torus_curve_closure(sigma: MonomialCurve) -> TorusClosure:
    """Closure of a polynomial curve on T^n; dense exactly when no integer m kills it."""
    if not sigma.is_polynomial():
        raise ValueError("torus_curve_closure needs nonnegative integer exponents; "
                         "use abelian_nearest_coset for general monomial curves")
    return torus_monomial_closure(sigma)


def torus_product_frontier(curves: Sequence[MonomialCurve]) -> list:
    """Frontier pieces of pi(sigma_1 x ... x sigma_k) in the product torus.

    Each piece is a tuple with one entry per factor: ``("curve", sigma_i)`` or
    ``("coset", TorusClosure_i)``; the all-curve product itself is excluded.
    Factors whose curve is already closed contribute only the curve.
    """
    closures = [torus_monomial_closure(c) for c in curves]
    options = []
    for c, cl in zip(curves, closures):
        opts = [("curve", c)]
        if cl.L.rank or any(a > 0 for a, _ in c.terms):
            opts.append(("coset", cl))
        options.append(opts)
    pieces = [p for p in itertools.product(*options) if any(kind == "coset" for kind, _ in p)]
    return pieces
