"""Weak Malcev bases, coordinates of the second kind, and the quotient by UT(n, Z).

The lattice is always ``UT(n, Z)`` acting by right multiplication; for a
rational subgroup G the nilmanifold G/(G ∩ UT(n,Z)) sits closed inside
UT(n)/UT(n,Z), so points are reduced there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .exactfield import Subspace, subspace_intersect
from .nilcore import (
    GroupSpec,
    NilMatrix,
    NotInGroupError,
    UnipotentElement,
    exp_nil,
    log_unip,
    positions,
    ut_dim,
    _index,
)
from .subalg import Subalgebra, is_bracket_closed, normalizer

__all__ = [
    "MalcevBasis",
    "ReducedPoint",
    "ReducedSamples",
    "weak_malcev_through",
    "psi",
    "second_kind_coords",
    "reduce_mod_lattice",
    "reduce_batch",
    "split_coset",
    "lattice_ball",
    "quotient_distance",
    "SNAP_TOL",
]

SNAP_TOL = 1e-9


@dataclass(frozen=True)
class MalcevBasis:
    """Ordered basis ξ_1..ξ_m of g whose prefixes span subalgebras.

    The first ``through_rank`` vectors span the designated subalgebra.
    """

    group: GroupSpec
    xs: tuple
    through_rank: int

    def __len__(self):
        return len(self.xs)

    def prefix(self, k: int) -> Subspace:
        return Subspace(self.group.field, ut_dim(self.group.n), [x.entries for x in self.xs[:k]])

    def prefixes_closed(self) -> bool:
        return all(is_bracket_closed(self.group, self.prefix(k)) for k in range(1, len(self) + 1))

    def to_json(self) -> dict:
        return {"n": self.group.n,
                "through_rank": self.through_rank,
                "basis": [[str(x) for x in xi.entries] for xi in self.xs]}


def _extend(group: GroupSpec, xs: list, current: Subalgebra, target: Subspace):
    """Grow ``current`` inside ``target`` one normalizer vector at a time."""
    while current.dim < target.rank:
        norm = subspace_intersect(normalizer(current).space, target)
        for cand in norm.basis:
            res = current.space.reduce(cand)
            if any(res):
                lead = next(x for x in res if x)
                res = tuple(x / lead for x in res)
                break
        else:  # pragma: no cover - nilpotency makes the normalizer grow
            raise AssertionError("no normalizer vector outside the current span")
        xs.append(NilMatrix(group.n, res, group.field.zero))
        space = Subspace(group.field, current.space.dim, current.space.basis + (res,))
        current = Subalgebra(group, space, check=False)
    return current


def weak_malcev_through(h: Subalgebra) -> MalcevBasis:
    """Ordered basis of g through h, each prefix a subalgebra.

    Both stages pick, at each step, the first echelon vector of the
    normalizer of the current span (inside h, then inside g) that is not
    already spanned.  For abelian h this is h's own echelon basis.
    """
    group = h.group
    xs: list = []
    current = _extend(group, xs, Subalgebra.zero(group), h.space)
    _extend(group, xs, current, group.lie_algebra)
    return MalcevBasis(group, tuple(xs), h.dim)


def psi(s: Sequence, basis) -> UnipotentElement:
    """``exp(s_1 ξ_1) ... exp(s_m ξ_m)``."""
    xs = basis.xs if isinstance(basis, MalcevBasis) else tuple(basis)
    if len(s) != len(xs):
        raise ValueError("need %d coordinates" % len(xs))
    field = xs[0].zero.field
    g = UnipotentElement.identity(xs[0].n, field)
    for si, xi in zip(s, xs):
        if si:
            g = g * exp_nil(xi.scale(field(si)))
    return g


def _invert(rows, field):
    m = len(rows)
    one, zero = field.one, field.zero
    aug = [list(r) + [one if i == j else zero for j in range(m)] for i, r in enumerate(rows)]
    for c in range(m):
        p = next(i for i in range(c, m) if aug[i][c])
        aug[c], aug[p] = aug[p], aug[c]
        inv = aug[c][c].inverse()
        aug[c] = [x * inv for x in aug[c]]
        for i in range(m):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [r[m:] for r in aug]


class _Coordinates:
    """Solves ``v = sum c_i ξ_i`` for v in the span of the ξ_i."""

    def __init__(self, xs, field):
        self.field = field
        vecs = [x.entries for x in xs]
        self.span = Subspace(field, len(vecs[0]) if vecs else 0, vecs)
        if self.span.rank != len(vecs):
            raise ValueError("basis vectors are linearly dependent")
        cols = self.span.pivots
        sub = [[v[c] for c in cols] for v in vecs]
        # c = v[cols] @ inv(sub)
        self.cols = cols
        self.inv = _invert(sub, field) if vecs else []

    def __call__(self, v):
        if not self.span.contains(v):
            raise NotInGroupError("vector is not in the span of the basis")
        w = [v[c] for c in self.cols]
        m = len(self.cols)
        zero = self.field.zero
        out = []
        for j in range(m):
            acc = zero
            for i in range(m):
                if w[i]:
                    acc = acc + w[i] * self.inv[i][j]
            out.append(acc)
        return out


def _prefix_closed(group, xs) -> bool:
    field = group.field
    return all(is_bracket_closed(group, Subspace(field, ut_dim(group.n),
                                                 [x.entries for x in xs[:k]]))
               for k in range(1, len(xs)))


def _suffix_closed(group, xs) -> bool:
    field = group.field
    return all(is_bracket_closed(group, Subspace(field, ut_dim(group.n),
                                                 [x.entries for x in xs[k:]]))
               for k in range(1, len(xs)))


def second_kind_coords(g: UnipotentElement, basis, group: GroupSpec | None = None) -> list:
    """The unique s with ``g = exp(s_1 ξ_1) ... exp(s_m ξ_m)``.

    ``basis`` is a MalcevBasis (every prefix a subalgebra) or a plain ordered
    basis whose prefixes or whose suffixes are subalgebras.  A codimension-one
    subalgebra of a nilpotent algebra is an ideal, so the outermost
    coordinate is read off ``log g`` with the dual functional and peeled.
    """
    if isinstance(basis, MalcevBasis):
        xs, group, from_right = basis.xs, basis.group, True
    else:
        xs = tuple(basis)
        if group is None:
            raise ValueError("group is required for a plain basis")
        if _prefix_closed(group, xs):
            from_right = True
        elif _suffix_closed(group, xs):
            from_right = False
        else:
            raise ValueError("neither prefixes nor suffixes of the basis are subalgebras")
    if not group.contains(g):
        raise NotInGroupError("element is not in G")
    coords = _coordinates_for(group, xs)
    field = group.field
    m = len(xs)
    s = [field.zero] * m
    cur = g
    order = range(m - 1, -1, -1) if from_right else range(m)
    for i in order:
        si = coords(log_unip(cur).entries)[i]
        s[i] = si
        if si:
            step = exp_nil(xs[i].scale(-si))
            cur = cur * step if from_right else step * cur
    if not cur.is_identity():  # pragma: no cover - guaranteed by the peeling argument
        raise ArithmeticError("second-kind peeling left a residue")
    return s


@lru_cache(maxsize=256)
def _coordinates_cached(group, xs):
    return _Coordinates(xs, group.field)


def _coordinates_for(group, xs):
    return _coordinates_cached(group, tuple(xs))


# -- reduction modulo UT(n, Z) ----------------------------------------------

@dataclass(frozen=True)
class ReducedPoint:
    """``g = rep · gamma`` with ``rep`` in the fundamental domain and ``gamma`` integral."""

    rep: object
    gamma: object

    def row(self) -> list:
        """Above-diagonal entries of ``rep`` in position order."""
        if isinstance(self.rep, UnipotentElement):
            return [float(x) for x in self.rep.nil.entries]
        n = self.rep.shape[-1]
        return [float(self.rep[i, j]) for i, j in positions(n)]


class ReducedSamples:
    """A batch of reduced points stored as arrays ``reps`` and ``gammas`` (N, n, n)."""

    def __init__(self, reps: np.ndarray, gammas: np.ndarray):
        self.reps = reps
        self.gammas = gammas

    @property
    def n(self) -> int:
        return self.reps.shape[-1]

    def __len__(self):
        return self.reps.shape[0]

    def __iter__(self):
        for r, g in zip(self.reps, self.gammas):
            yield ReducedPoint(r, g)

    def __getitem__(self, k):
        return ReducedPoint(self.reps[k], self.gammas[k])

    def coords(self) -> np.ndarray:
        """(N, n(n-1)/2) above-diagonal coordinates in position order."""
        rows, cols = zip(*positions(self.n)) if self.n > 1 else ((), ())
        return self.reps[:, list(rows), list(cols)]

    def unreduced(self) -> np.ndarray:
        return self.reps @ self.gammas


def reduce_batch(g: np.ndarray, snap: float = SNAP_TOL):
    """Vectorised float reduction of an array of unipotent matrices (..., n, n).

    Returns ``(reps, gammas)`` with ``g = reps @ gammas``.
    """
    A = np.array(g, dtype=float, copy=True)
    n = A.shape[-1]
    inv = np.broadcast_to(np.eye(n), A.shape).copy()
    for d in range(1, n):
        for i in range(n - d):
            j = i + d
            x = A[..., i, j]
            r = np.round(x)
            near = np.abs(x - r) < snap
            k = np.where(near, r, np.floor(x))
            # right-multiply by (I - k E_ij): column j -= k * column i
            A[..., :, j] -= k[..., None] * A[..., :, i]
            A[..., i, j] = np.where(near, 0.0, A[..., i, j])
            # gamma = product of (I + k E_ij) in reverse: row i += k * row j
            inv[..., i, :] += k[..., None] * inv[..., j, :]
    return A, inv


def reduce_mod_lattice(g, n: int | None = None) -> ReducedPoint:
    """Reduce g into the fundamental domain of UT(n, Z).

    Positions are processed by increasing j - i; at (i, j) g is multiplied on
    the right by ``I - floor(g_ij) E_ij``, which only changes entries on
    longer superdiagonals.  Exact for UnipotentElements, float for arrays.
    """
    if isinstance(g, UnipotentElement):
        return _reduce_exact(g)
    arr = np.asarray(g, dtype=float)
    if n is not None and arr.shape[-1] != n:
        raise ValueError("matrix size does not match n")
    reps, gammas = reduce_batch(arr)
    return ReducedPoint(reps, gammas)


def _reduce_exact(g: UnipotentElement) -> ReducedPoint:
    n = g.n
    field = g.nil.zero.field
    idx = _index(n)
    a = list(g.nil.entries)
    gam = [field.zero] * ut_dim(n)  # nil part of gamma, built by left-multiplication
    for d in range(1, n):
        for i in range(n - d):
            j = i + d
            k = a[idx[i, j]].floor()
            if not k:
                continue
            a[idx[i, j]] = a[idx[i, j]] - k
            for r in range(i):
                x = a[idx[r, i]]
                if x:
                    a[idx[r, j]] = a[idx[r, j]] - x * k
            # gamma <- (I + k E_ij) gamma : row i += k * row j (with unit diagonal)
            gam[idx[i, j]] = gam[idx[i, j]] + k
            for c in range(j + 1, n):
                y = gam[idx[j, c]]
                if y:
                    gam[idx[i, c]] = gam[idx[i, c]] + k * y
    rep = UnipotentElement(NilMatrix(n, a, field.zero))
    gamma = UnipotentElement(NilMatrix(n, gam, field.zero))
    return ReducedPoint(rep, gamma)


# -- coset sections ----------------------------------------------------------

@lru_cache(maxsize=256)
def _malcev_cached(h: Subalgebra, group: GroupSpec) -> MalcevBasis:
    return weak_malcev_through(h)


def split_coset(g: UnipotentElement, h: Subalgebra):
    """Factor ``g = a · h_part`` with ``h_part ∈ exp(h)`` and ``a`` in the Malcev section.

    ``a`` depends only on the coset ``g·exp(h)``.
    """
    group = h.group
    if not group.contains(g):
        raise NotInGroupError("element is not in G")
    B = _malcev_cached(h, group)
    k = B.through_rank
    s = second_kind_coords(g.inverse(), B)
    h_prime = psi(s[:k], B.xs[:k]) if k else UnipotentElement.identity(g.n, group.field)
    a_prime = psi(s[k:], B.xs[k:]) if k < len(B) else UnipotentElement.identity(g.n, group.field)
    return a_prime.inverse(), h_prime.inverse()


# -- quotient metric ----------------------------------------------------------

@lru_cache(maxsize=None)
def lattice_ball(n: int, radius: float = 1.0) -> np.ndarray:
    """Integer unipotent γ for which some x, y in the fundamental domain have
    every entry of ``x - y·γ`` below ``radius`` in absolute value.

    Any γ realising a quotient distance below ``radius`` is in this set.
    Returned as an array (K, n, n).
    """
    pos = sorted(positions(n), key=lambda p: (p[1] - p[0], p[0]))
    out = []

    def rec(k, gam):
        if k == len(pos):
            out.append(gam.copy())
            return
        i, j = pos[k]
        # (y γ)_ij = γ_ij + y_ij + sum_{i<l<j} y_il γ_lj, with y entries in [0, 1)
        lo = sum(min(0.0, gam[l, j]) for l in range(i + 1, j))
        hi = sum(max(0.0, gam[l, j]) for l in range(i + 1, j)) + 1.0
        # need |x_ij - γ_ij - c| < radius for some x_ij in [0,1), c in [lo, hi)
        gmin = math.floor(-radius - hi) + 1
        gmax = math.ceil(1 + radius - lo) - 1
        for v in range(gmin, gmax + 1):
            gam[i, j] = v
            rec(k + 1, gam)
        gam[i, j] = 0

    rec(0, np.eye(n))
    return np.array(out)


def quotient_distance(g1, g2, n: int | None = None, radius: float = 1.0) -> float:
    """Distance between the images of g1 and g2 in UT(n)/UT(n,Z).

    Both points are reduced into the fundamental domain, then the Frobenius
    distance ``|x - y·γ|`` is minimised over the lattice ball, in both
    argument orders so the result is symmetric.  Values at or above
    ``radius`` are not exact.  This is symmetric and Γ-invariant, but for
    nonabelian n >= 3 it can violate the triangle inequality.
    """
    a = g1.to_float() if isinstance(g1, UnipotentElement) else np.asarray(g1, dtype=float)
    b = g2.to_float() if isinstance(g2, UnipotentElement) else np.asarray(g2, dtype=float)
    if n is None:
        n = a.shape[-1]
    if n == 1:
        return 0.0
    a = reduce_batch(a)[0]
    b = reduce_batch(b)[0]
    ball = lattice_ball(n, radius)
    d1 = np.sqrt(((a - b @ ball) ** 2).sum(axis=(-2, -1))).min()
    d2 = np.sqrt(((b - a @ ball) ** 2).sum(axis=(-2, -1))).min()
    return float(min(d1, d2))
