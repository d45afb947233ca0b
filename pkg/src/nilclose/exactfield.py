"""Exact arithmetic in a real number field Q(theta) and linear algebra over it.

A field is given by a monic, squarefree integer polynomial together with a
rational interval isolating one real root.  Elements are stored as coordinate
tuples of :class:`fractions.Fraction` with respect to ``1, theta, ...,
theta**(D-1)``; the isolating interval is only consulted for ordering and for
the float embedding.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "FieldError",
    "ZeroDivisorError",
    "NumberField",
    "Scalar",
    "QQ",
    "Subspace",
    "rref",
    "kernel",
    "span_contains",
    "subspace_sum",
    "subspace_intersect",
    "rational_components",
    "integer_kernel",
    "integer_basis",
    "parse_rational",
]


class FieldError(ValueError):
    """Invalid field specification."""


class ZeroDivisorError(ZeroDivisionError):
    """Division by a zero divisor; only possible for a reducible min_poly.

    ``factor`` holds the nontrivial monic common factor that was found.
    """

    def __init__(self, factor):
        self.factor = tuple(factor)
        super().__init__(
            "min_poly is reducible: found factor with coefficients %s"
            % [str(c) for c in self.factor]
        )


def parse_rational(value) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            q = int(q)
            if q == 0:
                raise ZeroDivisionError("zero denominator in %r" % value)
            return Fraction(int(p), q)
        return Fraction(int(text))
    raise TypeError("cannot read %r as a rational" % (value,))


# -- univariate polynomials over Q, coefficient lists low -> high -----------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _sub(p, q):
    n = max(len(p), len(q))
    return _trim([(p[i] if i < len(p) else 0) - (q[i] if i < len(q) else 0)
                  for i in range(n)])


def _mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def _divmod(p, q):
    p = _trim(p)
    q = _trim(q)
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    quot = [Fraction(0)] * max(len(p) - len(q) + 1, 0)
    lead = q[-1]
    while len(p) >= len(q):
        c = p[-1] / lead
        k = len(p) - len(q)
        quot[k] = c
        for i, b in enumerate(q):
            p[k + i] -= c * b
        p = _trim(p[:-1]) if p[-1] == 0 else _trim(p)
    return _trim(quot), p


def _monic(p):
    return [c / p[-1] for c in p]


def _gcd(p, q):
    p, q = _trim(p), _trim(q)
    while q:
        p, q = q, _divmod(p, q)[1]
    return _monic(p) if p else p


def _deriv(p):
    return _trim([i * c for i, c in enumerate(p)][1:])


def _eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _sign(x):
    return (x > 0) - (x < 0)


def _sturm_chain(p):
    chain = [_trim(p), _deriv(p)]
    while chain[-1]:
        r = _divmod(chain[-2], chain[-1])[1]
        chain.append([-c for c in r])
    return chain[:-1]


def _sign_changes(chain, x):
    signs = [s for s in (_sign(_eval(p, x)) for p in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots(p, lo, hi):
    """Number of distinct real roots of squarefree p in (lo, hi]."""
    chain = _sturm_chain(p)
    return _sign_changes(chain, lo) - _sign_changes(chain, hi)


def _interval_eval(p, lo, hi):
    """Enclosure of {p(x) : lo <= x <= hi} by interval Horner."""
    a = b = Fraction(0)
    for c in reversed(p):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(cands) + c, max(cands) + c
    return a, b


# -- number fields ----------------------------------------------------------

class NumberField:
    """The real field Q(theta) for a root theta of ``min_poly``.

    Parameters
    ----------
    min_poly : sequence
        Coefficients ``[c0, c1, ..., 1]`` (low to high), monic, integer.
    root_interval : pair, optional
        Rationals ``(lo, hi)`` with exactly one root of ``min_poly`` in
        ``[lo, hi]``.  May be omitted when the degree is 1.
    """

    def __init__(self, min_poly: Sequence, root_interval: Sequence | None = None):
        poly = [parse_rational(c) for c in min_poly]
        poly = _trim(poly)
        if len(poly) < 2:
            raise FieldError("min_poly must have degree >= 1")
        if poly[-1] != 1:
            raise FieldError("min_poly must be monic")
        if any(c.denominator != 1 for c in poly):
            raise FieldError("min_poly must have integer coefficients")
        if len(_gcd(poly, _deriv(poly))) > 1:
            raise FieldError("min_poly is not squarefree")
        self.min_poly = tuple(poly)
        self.degree = len(poly) - 1
        self._lock = threading.Lock()

        if root_interval is None:
            if self.degree != 1:
                raise FieldError("root_interval is required when degree > 1")
            r = -poly[0]
            lo = hi = r
        else:
            lo, hi = (parse_rational(v) for v in root_interval)
            if lo > hi:
                raise FieldError("root_interval has lo > hi")
            nroots = _count_roots(poly, lo, hi) + (1 if _eval(poly, lo) == 0 else 0)
            if nroots == 0:
                raise FieldError("root_interval contains no root of min_poly")
            if nroots > 1:
                raise FieldError("root_interval contains %d roots of min_poly" % nroots)
        self._orig_interval = (lo, hi)
        self._lo, self._hi = lo, hi
        self._shrink_to_exact_root()
        self._lo_sign = _sign(_eval(poly, self._lo))
        self._theta_float = None

    def _shrink_to_exact_root(self):
        for x in (self._lo, self._hi):
            if _eval(self.min_poly, x) == 0:
                self._lo = self._hi = x

    # -- interval refinement ------------------------------------------------
    def interval(self) -> tuple[Fraction, Fraction]:
        return self._lo, self._hi

    def refine(self, width: Fraction) -> tuple[Fraction, Fraction]:
        """Bisect the isolating interval until it is narrower than ``width``."""
        with self._lock:
            lo, hi = self._lo, self._hi
            while hi - lo > width:
                mid = (lo + hi) / 2
                s = _sign(_eval(self.min_poly, mid))
                if s == 0:
                    lo = hi = mid
                elif s == self._lo_sign:
                    lo = mid
                else:
                    hi = mid
            self._lo, self._hi = lo, hi
            return lo, hi

    @property
    def theta_float(self) -> float:
        if self._theta_float is None:
            lo, hi = self.refine(Fraction(1, 2 ** 70))
            self._theta_float = float((lo + hi) / 2)
        return self._theta_float

    # -- construction helpers ------------------------------------------------
    def __call__(self, value) -> "Scalar":
        if isinstance(value, Scalar):
            if value.field is not self and value.field != self:
                raise ValueError("scalar belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            return Scalar(self, value)
        return Scalar(self, (parse_rational(value),))

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, ())

    @property
    def one(self) -> "Scalar":
        return Scalar(self, (Fraction(1),))

    @property
    def theta(self) -> "Scalar":
        if self.degree == 1:
            return Scalar(self, (-self.min_poly[0],))
        return Scalar(self, (Fraction(0), Fraction(1)))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NumberField) or self.min_poly != other.min_poly:
            return False
        a_lo, a_hi = self.interval()
        b_lo, b_hi = other.interval()
        if max(a_lo, b_lo) > min(a_hi, b_hi):
            return False
        # overlapping isolating intervals of the same squarefree polynomial
        lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
        return _count_roots(self.min_poly, lo, hi) + (
            1 if _eval(self.min_poly, lo) == 0 else 0) == 1

    def __hash__(self):
        return hash(self.min_poly)

    def __repr__(self):
        lo, hi = self._orig_interval
        return "NumberField(min_poly=%s, root_interval=(%s, %s))" % (
            [str(c) for c in self.min_poly], lo, hi)

    def to_json(self) -> dict:
        lo, hi = self._orig_interval
        return {"min_poly": [str(c) for c in self.min_poly],
                "root_interval": [str(lo), str(hi)]}

    @classmethod
    def from_json(cls, data: dict) -> "NumberField":
        return cls(data["min_poly"], data.get("root_interval"))


QQ = NumberField([0, 1])


# -- field elements ---------------------------------------------------------

class Scalar:
    """An element of a :class:`NumberField`; immutable, exact."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Iterable):
        cs = [c if isinstance(c, Fraction) else parse_rational(c) for c in coords]
        D = field.degree
        if len(cs) > D:
            cs = _reduce(cs, field.min_poly)
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coords = tuple(cs)

    @classmethod
    def _raw(cls, field, coords):
        s = object.__new__(cls)
        s.field = field
        s.coords = coords
        return s

    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mixing scalars from different fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Scalar._raw(self.field, (Fraction(other),) if other else ())
        return NotImplemented

    # -- coordinates -------------------------------------------------------
    def coord(self, j: int) -> Fraction:
        return self.coords[j] if j < len(self.coords) else Fraction(0)

    def full_coords(self) -> tuple:
        D = self.field.degree
        return self.coords + (Fraction(0),) * (D - len(self.coords))

    def is_rational(self) -> bool:
        return len(self.coords) <= 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("%s is not rational" % self)
        return self.coords[0] if self.coords else Fraction(0)

    # -- arithmetic ----------------------------------------------------------
    def __bool__(self):
        return bool(self.coords)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coords, other.coords
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        while out and out[-1] == 0:
            out.pop()
        return Scalar._raw(self.field, tuple(out))

    __radd__ = __add__

    def __neg__(self):
        return Scalar._raw(self.field, tuple(-c for c in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                return Scalar._raw(self.field, ())
            return Scalar._raw(self.field, tuple(c * other for c in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coords, other.coords
        if not a or not b:
            return Scalar._raw(self.field, ())
        if len(a) == 1 and len(b) == 1:
            return Scalar._raw(self.field, (a[0] * b[0],))
        prod = _mul(a, b)
        if len(prod) > self.field.degree:
            prod = _reduce(prod, self.field.min_poly)
        while prod and prod[-1] == 0:
            prod.pop()
        return Scalar._raw(self.field, tuple(prod))

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self.coords:
            raise ZeroDivisionError("division by zero in %r" % (self.field,))
        if len(self.coords) == 1:
            return Scalar._raw(self.field, (1 / self.coords[0],))
        # extended Euclid: u*a + v*m = g
        m = list(self.field.min_poly)
        r0, r1 = m, list(self.coords)
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, r = _divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _sub(s0, _mul(q, s1))
        if len(r0) > 1:
            raise ZeroDivisorError(_monic(r0))
        inv = [c / r0[0] for c in s0]
        return Scalar(self.field, _reduce(inv, self.field.min_poly)
                      if len(inv) > self.field.degree else inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if not other:
                raise ZeroDivisionError("division by zero")
            return Scalar._raw(self.field, tuple(c / other for c in self.coords))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            if isinstance(k, int):
                return self.inverse() ** (-k)
            raise TypeError("integer exponents only")
        result = Scalar._raw(self.field, (Fraction(1),))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- equality and order --------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other) if not isinstance(other, Scalar) else other
        if other is NotImplemented:
            return NotImplemented
        return self.coords == other.coords and (
            self.field is other.field or self.field == other.field)

    def __hash__(self):
        if len(self.coords) <= 1:
            return hash(self.coords[0] if self.coords else 0)
        return hash(self.coords)

    def sign(self) -> int:
        """Exact sign, refining the isolating interval as needed."""
        cs = self.coords
        if not cs:
            return 0
        if len(cs) == 1:
            return _sign(cs[0])
        field = self.field
        lo, hi = field.interval()
        width = (hi - lo) if hi > lo else Fraction(1)
        for _ in range(4000):
            a, b = _interval_eval(cs, lo, hi)
            if a > 0:
                return 1
            if b < 0:
                return -1
            if lo == hi:
                break
            width = (hi - lo) / 4
            lo, hi = field.refine(width)
        g = _gcd(list(cs), list(field.min_poly))
        if len(g) > 1:
            raise ZeroDivisorError(g)
        raise ArithmeticError("sign refinement did not terminate")  # pragma: no cover

    def compare(self, other) -> int:
        return (self - other).sign()

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def floor(self) -> int:
        if len(self.coords) <= 1:
            return math.floor(self.coords[0]) if self.coords else 0
        k = math.floor(float(self))
        # float guess, corrected exactly
        while self.compare(k) < 0:
            k -= 1
        while self.compare(k + 1) >= 0:
            k += 1
        return k

    def __floor__(self):
        return self.floor()

    def __float__(self):
        cs = self.coords
        if not cs:
            return 0.0
        if len(cs) == 1:
            return float(cs[0])
        field = self.field
        field.theta_float  # ensures a fine interval
        lo, hi = field.interval()
        return float(_eval(cs, (lo + hi) / 2))

    def __repr__(self):
        return "Scalar(%s)" % self

    def __str__(self):
        return format_scalar(self)


def _reduce(cs, min_poly):
    cs = list(cs)
    D = len(min_poly) - 1
    for k in range(len(cs) - 1, D - 1, -1):
        c = cs[k]
        if c:
            for i in range(D):
                cs[k - D + i] -= c * min_poly[i]
        cs[k] = Fraction(0)
    return cs[:D]


def format_scalar(s: Scalar, symbol: str = "theta") -> str:
    """Grammar-compatible text for a scalar, e.g. ``1/2 + 3*theta^2``."""
    if not s.coords:
        return "0"
    if s.field.degree == 1:
        return str(s.coords[0])
    parts = []
    for j, c in enumerate(s.coords):
        if not c:
            continue
        mag = abs(c)
        if j == 0:
            term = str(mag)
        else:
            mono = symbol if j == 1 else "%s^%d" % (symbol, j)
            term = mono if mag == 1 else "%s*%s" % (mag, mono)
        parts.append(("-" if c < 0 else "+", term))
    sign0, term0 = parts[0]
    out = ("-" if sign0 == "-" else "") + term0
    for sg, term in parts[1:]:
        out += " %s %s" % (sg, term)
    return out


# -- linear algebra ---------------------------------------------------------

def _as_vector(field, v):
    return tuple(field(x) for x in v)


def _rref_rows(rows, ncols, field):
    """In-place Gauss-Jordan on a list of lists; returns (rows, pivots)."""
    rows = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        p = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [x * inv for x in rows[r]]
        piv = rows[r]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f:
                    rows[i] = [x - f * y for x, y in zip(rows[i], piv)]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


class Subspace:
    """A linear subspace of ``field**dim`` held in reduced row-echelon form.

    Two subspaces are equal iff their echelon bases are identical.
    """

    __slots__ = ("field", "dim", "basis", "pivots")

    def __init__(self, field: NumberField, dim: int, basis=(), _canonical=False):
        if dim < 0:
            raise ValueError("ambient dimension must be >= 0")
        self.field = field
        self.dim = dim
        if _canonical:
            rows, piv = [list(b) for b in basis], None
        else:
            vecs = []
            for v in basis:
                if len(v) != dim:
                    raise ValueError("vector of length %d in ambient dimension %d"
                                     % (len(v), dim))
                vecs.append(_as_vector(field, v))
            rows, piv = _rref_rows(vecs, dim, field)
        self.basis = tuple(tuple(r) for r in rows)
        if piv is None:
            piv = [next(i for i, x in enumerate(r) if x) for r in self.basis]
        self.pivots = tuple(piv)

    @classmethod
    def zero(cls, field, dim):
        return cls(field, dim, ())

    @classmethod
    def full(cls, field, dim):
        one, zero = field.one, field.zero
        return cls(field, dim, [tuple(one if i == j else zero for j in range(dim))
                                for i in range(dim)], _canonical=True)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __len__(self):
        return len(self.basis)

    def reduce(self, v) -> tuple:
        """Residual of ``v`` after eliminating the pivot columns."""
        v = list(_as_vector(self.field, v))
        for row, c in zip(self.basis, self.pivots):
            f = v[c]
            if f:
                v = [x - f * y for x, y in zip(v, row)]
        return tuple(v)

    def coordinates(self, v) -> tuple:
        """Coefficients of ``v`` in the echelon basis (v must lie in the span)."""
        v = _as_vector(self.field, v)
        coeffs = tuple(v[c] for c in self.pivots)
        if any(self.reduce(v)):
            raise ValueError("vector is not in the subspace")
        return coeffs

    def contains(self, v) -> bool:
        if len(v) != self.dim:
            raise ValueError("dimension mismatch")
        return not any(self.reduce(v))

    __contains__ = contains

    def issubspace(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    __le__ = issubspace

    def __lt__(self, other):
        return self.rank < other.rank and self.issubspace(other)

    def is_rational(self) -> bool:
        return all(x.is_rational() for row in self.basis for x in row)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.dim, self.basis))

    def __repr__(self):
        rows = ["(" + ", ".join(str(x) for x in r) + ")" for r in self.basis]
        return "Subspace(dim=%d, rank=%d, basis=[%s])" % (self.dim, self.rank, ", ".join(rows))

    def to_json(self):
        return [[str(x) for x in r] for r in self.basis]


def rref(vectors, dim: int | None = None, field: NumberField | None = None) -> Subspace:
    """Canonical echelon basis of the span of ``vectors``."""
    vectors = list(vectors)
    if dim is None:
        if not vectors:
            raise ValueError("dim is required for an empty family")
        dim = len(vectors[0])
    if field is None:
        field = _infer_field(vectors)
    return Subspace(field, dim, vectors)


def _infer_field(vectors):
    for v in vectors:
        for x in v:
            if isinstance(x, Scalar):
                return x.field
    return QQ


def kernel(matrix, ncols: int | None = None, field: NumberField | None = None) -> Subspace:
    """Solution space of ``matrix @ v == 0``."""
    matrix = [list(r) for r in matrix]
    if ncols is None:
        if not matrix:
            raise ValueError("ncols is required for an empty matrix")
        ncols = len(matrix[0])
    if any(len(r) != ncols for r in matrix):
        raise ValueError("ragged matrix")
    if field is None:
        field = _infer_field(matrix)
    rows, pivots = _rref_rows([_as_vector(field, r) for r in matrix], ncols, field)
    free = [c for c in range(ncols) if c not in set(pivots)]
    zero, one = field.zero, field.one
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for row, p in zip(rows, pivots):
            v[p] = -row[f]
        basis.append(v)
    return Subspace(field, ncols, basis)


def span_contains(V: Subspace, v) -> bool:
    return V.contains(v)


def subspace_sum(V: Subspace, W: Subspace) -> Subspace:
    if V.dim != W.dim:
        raise ValueError("dimension mismatch")
    return Subspace(V.field, V.dim, V.basis + W.basis)


def subspace_intersect(V: Subspace, W: Subspace) -> Subspace:
    if V.dim != W.dim:
        raise ValueError("dimension mismatch")
    if not V.basis or not W.basis:
        return Subspace.zero(V.field, V.dim)
    # columns: coefficients (a, b) with sum a_i v_i - sum b_j w_j = 0
    k = V.rank
    cols = list(V.basis) + [tuple(-x for x in w) for w in W.basis]
    M = [[c[i] for c in cols] for i in range(V.dim)]
    K = kernel(M, len(cols), V.field)
    zero = V.field.zero
    vecs = []
    for sol in K.basis:
        vec = [zero] * V.dim
        for a, v in zip(sol[:k], V.basis):
            if a:
                vec = [x + a * y for x, y in zip(vec, v)]
        vecs.append(vec)
    return Subspace(V.field, V.dim, vecs)


def rational_components(v) -> list:
    """Split ``v = sum_j theta**j * v_j`` with rational ``v_j``.

    Returns the nonzero ``v_j`` as tuples of Fractions, ordered by ``j``.
    """
    v = list(v)
    if not v:
        return []
    D = max((x.field.degree for x in v if isinstance(x, Scalar)), default=1)
    comps = []
    for j in range(D):
        comp = tuple(x.coord(j) if isinstance(x, Scalar) else
                     (parse_rational(x) if j == 0 else Fraction(0)) for x in v)
        if any(comp):
            comps.append(comp)
    return comps


def integer_kernel(vectors, dim: int, field: NumberField = QQ) -> Subspace:
    """Rational vectors m with <m, v_j> = 0 for every rational component v_j."""
    rows = []
    for v in vectors:
        if len(v) != dim:
            raise ValueError("dimension mismatch")
        rows.extend(rational_components(v))
    if not rows:
        return Subspace.full(field, dim)
    return kernel(rows, dim, field)


def integer_basis(V: Subspace) -> list[tuple[int, ...]]:
    """Primitive integer vectors spanning a rational subspace."""
    out = []
    for row in V.basis:
        fr = [x.to_fraction() for x in row]
        den = math.lcm(*[f.denominator for f in fr])
        ints = [int(f * den) for f in fr]
        g = math.gcd(*ints)
        out.append(tuple(i // g for i in ints))
    return out
