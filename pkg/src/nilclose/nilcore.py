"""Nilpotent and unipotent upper triangular matrices, exactly.

Matrices are stored by their strictly-upper entries in row-major position
order ``(0,1), (0,2), ..., (n-2,n-1)``; this order is also the coordinate
order of ut(n) used by every Subspace in the package.  Entries may be
Scalars (exact points) or Polys (polynomial maps); the algebra below only
needs ring operations and division by integers.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import math

import numpy as np

from .exactfield import NumberField, QQ, Scalar, Subspace, rational_components
from .poly import DEFAULT_DEGREE_CAP, Poly

__all__ = [
    "positions",
    "ut_dim",
    "NilMatrix",
    "UnipotentElement",
    "PolyMatrix",
    "GroupSpec",
    "GroupSpecError",
    "NotInGroupError",
    "elementary",
    "exp_nil",
    "log_unip",
    "bracket",
    "group_mul",
    "group_inv",
    "conjugate",
    "polymap_eval",
    "symbolic_log_translate",
    "coefficient_span",
]


class GroupSpecError(ValueError):
    pass


class NotInGroupError(ValueError):
    """An element or polynomial image does not lie in the ambient group."""


@lru_cache(maxsize=None)
def positions(n: int) -> tuple:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


@lru_cache(maxsize=None)
def _index(n: int) -> dict:
    return {p: k for k, p in enumerate(positions(n))}


@lru_cache(maxsize=None)
def _product_plan(n: int) -> tuple:
    """For each position (i,j): the pairs (ik, kj) contributing to (AB)_ij."""
    idx = _index(n)
    return tuple(tuple((idx[i, k], idx[k, j]) for k in range(i + 1, j))
                 for (i, j) in positions(n))


def ut_dim(n: int) -> int:
    return n * (n - 1) // 2


class NilMatrix:
    """Strictly upper triangular n x n matrix."""

    __slots__ = ("n", "entries", "zero")

    def __init__(self, n: int, entries, zero=None):
        entries = tuple(entries)
        if len(entries) != ut_dim(n):
            raise ValueError("expected %d entries for n=%d, got %d"
                             % (ut_dim(n), n, len(entries)))
        if zero is None:
            zero = entries[0] * 0 if entries else QQ.zero
        self.n = n
        self.entries = entries
        self.zero = zero

    @classmethod
    def zeros(cls, n: int, field: NumberField = QQ):
        return cls(n, (field.zero,) * ut_dim(n), field.zero)

    @classmethod
    def from_dense(cls, rows, field: NumberField = QQ):
        """From a full n x n nested list; entries on/below the diagonal must vanish."""
        n = len(rows)
        for i in range(n):
            for j in range(i + 1):
                if field(rows[i][j]):
                    raise ValueError("entry (%d,%d) must be zero" % (i, j))
        return cls(n, [field(rows[i][j]) for i, j in positions(n)], field.zero)

    @classmethod
    def from_vector(cls, n: int, vector, field: NumberField = QQ):
        return cls(n, [field(x) for x in vector], field.zero)

    def vector(self) -> tuple:
        return self.entries

    def __getitem__(self, ij):
        i, j = ij
        if j <= i:
            return self.zero
        return self.entries[_index(self.n)[i, j]]

    def to_dense(self) -> list:
        n = self.n
        return [[self[i, j] for j in range(n)] for i in range(n)]

    def __add__(self, other):
        return NilMatrix(self.n, [a + b for a, b in zip(self.entries, other.entries)], self.zero)

    def __sub__(self, other):
        return NilMatrix(self.n, [a - b for a, b in zip(self.entries, other.entries)], self.zero)

    def __neg__(self):
        return NilMatrix(self.n, [-a for a in self.entries], self.zero)

    def scale(self, c):
        return NilMatrix(self.n, [a * c for a in self.entries], self.zero)

    def __mul__(self, c):
        if isinstance(c, NilMatrix):
            return self @ c
        return self.scale(c)

    __rmul__ = scale

    def __matmul__(self, other):
        if self.n != other.n:
            raise ValueError("size mismatch")
        a, b = self.entries, other.entries
        zero = self.zero
        out = []
        for pairs in _product_plan(self.n):
            acc = zero
            for p, q in pairs:
                x = a[p]
                if x:
                    y = b[q]
                    if y:
                        acc = acc + x * y
            out.append(acc)
        return NilMatrix(self.n, out, zero)

    def __bool__(self):
        return any(bool(x) for x in self.entries)

    def __eq__(self, other):
        if not isinstance(other, NilMatrix):
            return NotImplemented
        return self.n == other.n and self.entries == other.entries

    def __hash__(self):
        return hash((self.n, self.entries))

    def to_float(self) -> np.ndarray:
        out = np.zeros((self.n, self.n))
        for (i, j), x in zip(positions(self.n), self.entries):
            out[i, j] = float(x)
        return out

    def __repr__(self):
        nz = ["%s*E%d%d" % (x, i + 1, j + 1)
              for (i, j), x in zip(positions(self.n), self.entries) if x]
        return "NilMatrix(n=%d, %s)" % (self.n, " + ".join(nz) or "0")


class UnipotentElement:
    """The matrix ``I + N`` for a NilMatrix ``N``."""

    __slots__ = ("nil",)

    def __init__(self, nil: NilMatrix):
        self.nil = nil

    @classmethod
    def identity(cls, n: int, field: NumberField = QQ):
        return cls(NilMatrix.zeros(n, field))

    @classmethod
    def from_dense(cls, rows, field: NumberField = QQ):
        n = len(rows)
        for i in range(n):
            if field(rows[i][i]) != 1:
                raise ValueError("diagonal entry (%d,%d) must be 1" % (i, i))
            for j in range(i):
                if field(rows[i][j]):
                    raise ValueError("entry (%d,%d) must be zero" % (i, j))
        return cls(NilMatrix(n, [field(rows[i][j]) for i, j in positions(n)], field.zero))

    @property
    def n(self) -> int:
        return self.nil.n

    def __getitem__(self, ij):
        i, j = ij
        if i == j:
            return self.nil.zero + 1
        return self.nil[i, j]

    def to_dense(self) -> list:
        n = self.n
        return [[self[i, j] for j in range(n)] for i in range(n)]

    def __mul__(self, other):
        if not isinstance(other, UnipotentElement):
            return NotImplemented
        a, b = self.nil, other.nil
        return UnipotentElement(a + b + a @ b)

    def inverse(self) -> "UnipotentElement":
        # (I + N)^-1 = sum_k (-N)^k
        neg = -self.nil
        term = neg
        acc = neg
        for _ in range(self.n - 2):
            term = term @ neg
            if not term:
                break
            acc = acc + term
        return UnipotentElement(acc)

    def __eq__(self, other):
        if not isinstance(other, UnipotentElement):
            return NotImplemented
        return self.nil == other.nil

    def __hash__(self):
        return hash(self.nil)

    def is_identity(self) -> bool:
        return not self.nil

    def is_integral(self) -> bool:
        return all(x.is_rational() and x.to_fraction().denominator == 1
                   for x in self.nil.entries)

    def to_float(self) -> np.ndarray:
        return np.eye(self.n) + self.nil.to_float()

    def __repr__(self):
        return "UnipotentElement(I + %r)" % (self.nil,)


def elementary(n: int, i: int, j: int, field: NumberField = QQ, c=1) -> NilMatrix:
    """``c * E_ij`` with 1-based indices, as in the usual E_12, E_23 notation."""
    if not 1 <= i < j <= n:
        raise ValueError("need 1 <= i < j <= n")
    entries = [field.zero] * ut_dim(n)
    entries[_index(n)[i - 1, j - 1]] = field(c)
    return NilMatrix(n, entries, field.zero)


_FACT_INV = [Fraction(1, math.factorial(k)) for k in range(64)]


def exp_nil(N: NilMatrix) -> UnipotentElement:
    """Finite exponential series ``sum_{k<n} N^k / k!``."""
    acc = N
    power = N
    for k in range(2, N.n):
        power = power @ N
        if not power:
            break
        acc = acc + power.scale(_FACT_INV[k])
    return UnipotentElement(acc)


def log_unip(U: UnipotentElement) -> NilMatrix:
    """Finite logarithm series ``sum_{k<n} (-1)^(k+1) (U - I)^k / k``."""
    N = U.nil
    acc = N
    power = N
    for k in range(2, N.n):
        power = power @ N
        if not power:
            break
        acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
    return acc


def bracket(A: NilMatrix, B: NilMatrix) -> NilMatrix:
    return A @ B - B @ A


def group_mul(g: UnipotentElement, h: UnipotentElement) -> UnipotentElement:
    return g * h


def group_inv(g: UnipotentElement) -> UnipotentElement:
    return g.inverse()


def conjugate(g: UnipotentElement, h: UnipotentElement) -> UnipotentElement:
    """``h^-1 g h``."""
    return h.inverse() * g * h


# -- polynomial-valued matrices ---------------------------------------------

class PolyMatrix:
    """An n x n matrix of polynomials in ``d`` variables.

    ``kind`` is ``"unipotent"`` (unit diagonal) or ``"nilpotent"`` (zero
    diagonal); only the strictly-upper entries are stored.
    """

    __slots__ = ("nil", "kind", "field", "d")

    def __init__(self, nil: NilMatrix, kind: str, field: NumberField, d: int,
                 degree_cap: int = DEFAULT_DEGREE_CAP):
        if kind not in ("unipotent", "nilpotent"):
            raise ValueError("kind must be 'unipotent' or 'nilpotent'")
        for p in nil.entries:
            if not isinstance(p, Poly) or p.nvars != d:
                raise ValueError("entries must be Polys in %d variables" % d)
            p.check_degree(degree_cap)
        self.nil = nil
        self.kind = kind
        self.field = field
        self.d = d

    @property
    def n(self) -> int:
        return self.nil.n

    @classmethod
    def from_dense(cls, rows, field: NumberField, d: int, kind: str | None = None,
                   degree_cap: int = DEFAULT_DEGREE_CAP):
        """Build from a nested list of Polys (or constants); kind inferred from the diagonal."""
        n = len(rows)
        def as_poly(x):
            return x if isinstance(x, Poly) else Poly.constant(field, d, x)
        diag = [as_poly(rows[i][i]) for i in range(n)]
        if kind is None:
            kind = "unipotent" if n and diag[0] == 1 else "nilpotent"
        want = 1 if kind == "unipotent" else 0
        for i in range(n):
            if diag[i] != want:
                raise ValueError("diagonal entry %d is not the constant %d" % (i, want))
            for j in range(i):
                if as_poly(rows[i][j]):
                    raise ValueError("entry (%d,%d) below the diagonal is nonzero" % (i, j))
        zero = Poly.constant(field, d, 0)
        nil = NilMatrix(n, [as_poly(rows[i][j]) for i, j in positions(n)], zero)
        return cls(nil, kind, field, d, degree_cap)

    @classmethod
    def constant(cls, g, d: int):
        """Constant map onto a UnipotentElement (or NilMatrix)."""
        if isinstance(g, UnipotentElement):
            nil, kind = g.nil, "unipotent"
        else:
            nil, kind = g, "nilpotent"
        field = _field_of(nil)
        zero = Poly.constant(field, d, 0)
        return cls(NilMatrix(nil.n, [Poly.constant(field, d, x) for x in nil.entries], zero),
                   kind, field, d)

    @classmethod
    def exp_of(cls, P: "PolyMatrix") -> "PolyMatrix":
        if P.kind != "nilpotent":
            raise ValueError("exp_of expects a nilpotent PolyMatrix")
        return cls(exp_nil(P.nil).nil, "unipotent", P.field, P.d)

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.kind != "unipotent" or other.kind != "unipotent":
            raise ValueError("group product needs unipotent factors")
        a, b = self.nil, other.nil
        return PolyMatrix(a + b + a @ b, "unipotent", self.field, self.d)

    def degree(self) -> int:
        return max((p.degree() for p in self.nil.entries), default=0)

    def evaluate(self, x):
        return polymap_eval(self, x)

    def monomials(self) -> list:
        seen = set()
        for p in self.nil.entries:
            seen.update(p.terms)
        return sorted(seen, key=lambda e: (sum(e), e))

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.kind == other.kind and self.nil == other.nil

    def __repr__(self):
        return "PolyMatrix(kind=%s, n=%d, d=%d)" % (self.kind, self.n, self.d)


def _field_of(nil: NilMatrix) -> NumberField:
    z = nil.zero
    return z.field


def polymap_eval(F: PolyMatrix, x):
    """Evaluate F at a point.

    Exact (Scalar / rational coordinates) returns a UnipotentElement or
    NilMatrix.  Float coordinates return an ``(n, n)`` ndarray; array
    coordinates of common shape ``S`` return an array of shape ``S + (n, n)``.
    """
    x = list(x)
    if len(x) != F.d:
        raise ValueError("expected %d coordinates, got %d" % (F.d, len(x)))
    exact = all(isinstance(v, (int, Fraction, Scalar)) and not isinstance(v, bool) for v in x)
    n = F.n
    if exact:
        vals = [p.evaluate(x) for p in F.nil.entries]
        nil = NilMatrix(n, vals, F.field.zero)
        return UnipotentElement(nil) if F.kind == "unipotent" else nil
    arrs = [np.asarray(v, dtype=float) for v in x]
    shape = np.broadcast(*arrs).shape if arrs else ()
    out = np.zeros(shape + (n, n))
    if F.kind == "unipotent":
        out[..., range(n), range(n)] = 1.0
    for (i, j), p in zip(positions(n), F.nil.entries):
        if p:
            out[..., i, j] = p.evaluate(arrs)
    return out


def symbolic_log_translate(F: PolyMatrix, c: UnipotentElement) -> PolyMatrix:
    """``P(x) = log(c^-1 F(x))`` as a nilpotent PolyMatrix."""
    if F.kind != "unipotent":
        raise ValueError("F must be unipotent-shaped")
    if c.n != F.n:
        raise ValueError("size mismatch")
    cinv = PolyMatrix.constant(c.inverse(), F.d)
    shifted = cinv * F
    P = log_unip(UnipotentElement(shifted.nil))
    return PolyMatrix(P, "nilpotent", F.field, F.d)


def coefficient_span(P: PolyMatrix) -> Subspace:
    """Span of the coefficient matrices of the non-constant monomials of P."""
    if P.kind != "nilpotent":
        raise ValueError("P must be nilpotent-shaped")
    const = (0,) * P.d
    if any(p.terms.get(const) for p in P.nil.entries):
        raise ValueError("P has a nonzero constant term; base point is not on the image")
    zero = P.field.zero
    vecs = [[p.terms.get(e, zero) for p in P.nil.entries] for e in P.monomials() if e != const]
    return Subspace(P.field, ut_dim(P.n), vecs)


# -- ambient groups -----------------------------------------------------------

class GroupSpec:
    """A real unipotent group G given by its Lie algebra inside ut(n).

    The algebra must be bracket-closed and rational (spanned by rational
    vectors), so that ``G ∩ UT(n, Z)`` is a lattice in G.
    """

    def __init__(self, n: int, lie_algebra: Subspace):
        if lie_algebra.dim != ut_dim(n):
            raise GroupSpecError("lie_algebra must live in ut(%d) (dimension %d)"
                                 % (n, ut_dim(n)))
        self.n = n
        self.field = lie_algebra.field
        self.lie_algebra = lie_algebra
        self.basis = [NilMatrix(n, v, self.field.zero) for v in lie_algebra.basis]
        for a in self.basis:
            for b in self.basis:
                if not lie_algebra.contains(bracket(a, b).entries):
                    raise GroupSpecError("lie_algebra is not closed under brackets")
        for v in lie_algebra.basis:
            for comp in rational_components(v):
                if not lie_algebra.contains(comp):
                    raise GroupSpecError(
                        "lie_algebra is not rational; G ∩ UT(n,Z) would not be a lattice")

    @classmethod
    def full(cls, n: int, field: NumberField = QQ) -> "GroupSpec":
        return cls(n, Subspace.full(field, ut_dim(n)))

    @property
    def dim(self) -> int:
        return self.lie_algebra.rank

    def subspace(self, vectors) -> Subspace:
        return Subspace(self.field, ut_dim(self.n), vectors)

    def contains_algebra_element(self, N: NilMatrix) -> bool:
        return self.lie_algebra.contains(N.entries)

    def contains(self, g: UnipotentElement) -> bool:
        return self.lie_algebra.contains(log_unip(g).entries)

    def is_full(self) -> bool:
        return self.lie_algebra.rank == ut_dim(self.n)

    def __eq__(self, other):
        return (isinstance(other, GroupSpec) and self.n == other.n
                and self.lie_algebra == other.lie_algebra)

    def __hash__(self):
        return hash((self.n, self.lie_algebra))

    def __repr__(self):
        return "GroupSpec(n=%d, dim=%d)" % (self.n, self.dim)
