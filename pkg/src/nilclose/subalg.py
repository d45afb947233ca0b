"""Subalgebras of a nilpotent matrix Lie algebra and closure operators on them.

``rational_closure`` is the algebra-level form of H -> H^Gamma for the
lattice Gamma = G ∩ UT(n, Z): the smallest subalgebra with a rational basis
that contains the input.
"""

from __future__ import annotations

from .exactfield import Subspace, kernel, rational_components, subspace_intersect
from .nilcore import GroupSpec, NilMatrix, bracket

__all__ = [
    "Subalgebra",
    "SubalgebraError",
    "bracket_closure",
    "rational_closure",
    "normalizer",
    "normal_closure",
    "central_series",
    "subalgebra_intersect",
    "is_bracket_closed",
]


class SubalgebraError(ValueError):
    pass


def _mat(group: GroupSpec, v) -> NilMatrix:
    return NilMatrix(group.n, v, group.field.zero)


def is_bracket_closed(group: GroupSpec, space: Subspace) -> bool:
    mats = [_mat(group, v) for v in space.basis]
    return all(space.contains(bracket(a, b).entries)
               for i, a in enumerate(mats) for b in mats[i + 1:])


class Subalgebra:
    """A bracket-closed subspace of the Lie algebra of ``group``."""

    __slots__ = ("group", "space")

    def __init__(self, group: GroupSpec, space: Subspace, check: bool = True):
        if check:
            if space.dim != group.lie_algebra.dim:
                raise SubalgebraError("ambient dimension mismatch")
            if not space.issubspace(group.lie_algebra):
                raise SubalgebraError("subspace is not contained in the group's algebra")
            if not is_bracket_closed(group, space):
                raise SubalgebraError("subspace is not closed under brackets")
        self.group = group
        self.space = space

    @classmethod
    def from_vectors(cls, group: GroupSpec, vectors) -> "Subalgebra":
        return cls(group, group.subspace(vectors))

    @classmethod
    def zero(cls, group: GroupSpec) -> "Subalgebra":
        return cls(group, Subspace.zero(group.field, group.lie_algebra.dim), check=False)

    @classmethod
    def whole(cls, group: GroupSpec) -> "Subalgebra":
        return cls(group, group.lie_algebra, check=False)

    @property
    def dim(self) -> int:
        return self.space.rank

    @property
    def basis(self) -> list:
        return [_mat(self.group, v) for v in self.space.basis]

    def contains(self, N) -> bool:
        v = N.entries if isinstance(N, NilMatrix) else N
        return self.space.contains(v)

    def issubalgebra(self, other: "Subalgebra") -> bool:
        return self.space.issubspace(other.space)

    __le__ = issubalgebra

    def is_rational(self) -> bool:
        return self.space.is_rational()

    def is_ideal(self) -> bool:
        return all(self.space.contains(bracket(x, h).entries)
                   for x in self.group.basis for h in self.basis)

    def __eq__(self, other):
        if not isinstance(other, Subalgebra):
            return NotImplemented
        return self.space == other.space

    def __hash__(self):
        return hash(self.space)

    def __repr__(self):
        return "Subalgebra(dim=%d, %r)" % (self.dim, self.space)


def _as_space(group: GroupSpec, V) -> Subspace:
    if isinstance(V, Subalgebra):
        return V.space
    if isinstance(V, Subspace):
        return V
    return group.subspace(V)


def bracket_closure(group: GroupSpec, V) -> Subalgebra:
    """Smallest subalgebra containing ``V``."""
    space = _as_space(group, V)
    if not space.issubspace(group.lie_algebra):
        raise SubalgebraError("input is not contained in the group's algebra")
    while True:
        mats = [_mat(group, v) for v in space.basis]
        new = [bracket(a, b).entries for i, a in enumerate(mats) for b in mats[i + 1:]]
        grown = Subspace(space.field, space.dim, space.basis + tuple(new))
        if grown.rank == space.rank:
            return Subalgebra(group, grown, check=False)
        space = grown


def _rationalize(space: Subspace) -> Subspace:
    comps = [c for v in space.basis for c in rational_components(v)]
    return Subspace(space.field, space.dim, comps)


def rational_closure(h) -> Subalgebra:
    """Smallest subalgebra with a rational basis containing ``h``.

    Alternates rational-component splitting and bracket closure until both
    are fixed.
    """
    group = h.group
    space = h.space
    while True:
        rat = _rationalize(space)
        closed = bracket_closure(group, rat).space if rat.issubspace(group.lie_algebra) else None
        if closed is None:
            raise SubalgebraError(
                "rational closure leaves the group's algebra; GroupSpec is not rational")
        if closed == space:
            return Subalgebra(group, closed, check=False)
        space = closed


def _complement_functionals(space: Subspace):
    """Non-pivot coordinates: a vector lies in ``space`` iff these vanish after reduction."""
    piv = set(space.pivots)
    return [c for c in range(space.dim) if c not in piv]


def _stabilizer(group: GroupSpec, targets, space: Subspace) -> Subspace:
    """{x in g : [x, t] in space for every t in targets}."""
    gbasis = group.basis
    free = _complement_functionals(space)
    rows = []
    for t in targets:
        cols = [space.reduce(bracket(g, t).entries) for g in gbasis]
        for c in free:
            rows.append([col[c] for col in cols])
    K = kernel(rows, len(gbasis), group.field) if rows else Subspace.full(group.field, len(gbasis))
    zero = group.field.zero
    vecs = []
    for coeffs in K.basis:
        v = [zero] * space.dim
        for a, g in zip(coeffs, group.lie_algebra.basis):
            if a:
                v = [x + a * y for x, y in zip(v, g)]
        vecs.append(v)
    return Subspace(group.field, space.dim, vecs)


def normalizer(h: Subalgebra) -> Subalgebra:
    """{x in g : [x, h] ⊆ h}."""
    space = _stabilizer(h.group, h.basis, h.space)
    if h.dim < h.group.dim and space.rank <= h.dim:
        raise AssertionError("normalizer failed to grow; algebra is not nilpotent")
    return Subalgebra(h.group, space, check=False)


def normal_closure(group: GroupSpec, V) -> Subalgebra:
    """Smallest ideal of g containing ``V``."""
    space = _as_space(group, V)
    if not space.issubspace(group.lie_algebra):
        raise SubalgebraError("input is not contained in the group's algebra")
    while True:
        new = [bracket(g, _mat(group, v)).entries for g in group.basis for v in space.basis]
        grown = Subspace(space.field, space.dim, space.basis + tuple(new))
        if grown.rank == space.rank:
            return Subalgebra(group, grown, check=False)
        space = grown


def central_series(group: GroupSpec):
    """``(ascending, descending)`` central series as lists of Subalgebras.

    ascending: 0 ⊆ Z(g) ⊆ Z_2(g) ⊆ ... ⊆ g
    descending: g ⊇ [g,g] ⊇ [g,[g,g]] ⊇ ... ⊇ 0
    """
    dim = group.lie_algebra.dim
    field = group.field
    desc = [Subalgebra.whole(group)]
    while desc[-1].dim:
        cur = desc[-1]
        new = [bracket(g, h).entries for g in group.basis for h in cur.basis]
        desc.append(Subalgebra(group, Subspace(field, dim, new), check=False))
    asc = [Subalgebra.zero(group)]
    while asc[-1].dim < group.dim:
        nxt = _stabilizer(group, group.basis, asc[-1].space)
        if nxt.rank <= asc[-1].dim:
            raise AssertionError("upper central series stalled; algebra is not nilpotent")
        asc.append(Subalgebra(group, nxt, check=False))
    return asc, desc


def subalgebra_intersect(h1: Subalgebra, h2: Subalgebra) -> Subalgebra:
    if h1.group != h2.group:
        raise SubalgebraError("subalgebras of different groups")
    return Subalgebra(h1.group, subspace_intersect(h1.space, h2.space), check=False)
