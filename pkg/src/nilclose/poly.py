"""Sparse multivariate polynomials with coefficients in a NumberField."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exactfield import NumberField, Scalar, format_scalar

__all__ = ["Poly", "DegreeCapError", "DEFAULT_DEGREE_CAP"]

DEFAULT_DEGREE_CAP = 16


class DegreeCapError(ValueError):
    pass


class Poly:
    """Polynomial in ``nvars`` variables as ``{exponent tuple: Scalar}``.

    Zero coefficients are never stored, so ``bool(p)`` is the zero test.
    """

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: NumberField, nvars: int, terms=None):
        self.field = field
        self.nvars = nvars
        clean = {}
        for exps, c in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValueError("exponent tuple %r does not match nvars=%d" % (exps, nvars))
            c = field(c)
            if c:
                clean[exps] = clean.get(exps, field.zero) + c
                if not clean[exps]:
                    del clean[exps]
        self.terms = clean

    @classmethod
    def _raw(cls, field, nvars, terms):
        p = object.__new__(cls)
        p.field = field
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def constant(cls, field, nvars, c):
        c = field(c)
        return cls._raw(field, nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, field, nvars, index):
        exps = [0] * nvars
        exps[index] = 1
        return cls._raw(field, nvars, {tuple(exps): field.one})

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("mixing polynomials in %d and %d variables"
                                 % (self.nvars, other.nvars))
            return other
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            return Poly.constant(self.field, self.nvars, other)
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out[e] + c if e in out else c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.field, self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            if not other:
                return Poly._raw(self.field, self.nvars, {})
            return Poly._raw(self.field, self.nvars,
                             {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out[e] + c1 * c2 if e in out else c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return Poly._raw(self.field, self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Scalar)) and not isinstance(other, bool):
            inv = 1 / (other if isinstance(other, Scalar) else Fraction(other))
            return self * inv
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("nonnegative integer exponents only")
        result = Poly.constant(self.field, self.nvars, 1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # -- inspection ----------------------------------------------------------
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def constant_term(self) -> Scalar:
        return self.terms.get((0,) * self.nvars, self.field.zero)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def check_degree(self, cap: int = DEFAULT_DEGREE_CAP):
        if self.degree() > cap:
            raise DegreeCapError("polynomial degree %d exceeds cap %d" % (self.degree(), cap))

    # -- evaluation ----------------------------------------------------------
    def __call__(self, *xs):
        return self.evaluate(xs)

    def evaluate(self, xs):
        """Exact value at Scalar/rational points; float (or ndarray) otherwise."""
        if len(xs) != self.nvars:
            raise ValueError("expected %d coordinates, got %d" % (self.nvars, len(xs)))
        exact = all(isinstance(x, (int, Fraction, Scalar)) and not isinstance(x, bool)
                    for x in xs)
        if exact:
            xs = [self.field(x) for x in xs]
            acc = self.field.zero
            for e, c in self.terms.items():
                m = c
                for x, k in zip(xs, e):
                    if k:
                        m = m * x ** k
                acc = acc + m
            return acc
        xs = [np.asarray(x, dtype=float) for x in xs]
        acc = np.zeros(np.broadcast(*xs).shape) if xs else np.zeros(())
        for e, c in self.terms.items():
            m = float(c)
            for x, k in zip(xs, e):
                if k:
                    m = m * x ** k
            acc = acc + m
        return acc

    def substitute_shift(self, shift):
        """``p(x + shift)`` for a vector of Scalars."""
        result = Poly._raw(self.field, self.nvars, {})
        lin = [Poly.variable(self.field, self.nvars, i) + shift[i] for i in range(self.nvars)]
        for e, c in self.terms.items():
            m = Poly.constant(self.field, self.nvars, c)
            for v, k in zip(lin, e):
                if k:
                    m = m * v ** k
            result = result + m
        return result

    def to_str(self, names) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e))):
            c = self.terms[e]
            mono = "*".join(n if k == 1 else "%s^%d" % (n, k)
                            for n, k in zip(names, e) if k)
            cs = format_scalar(c)
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            elif c.is_rational():
                parts.append("%s*%s" % (cs, mono))
            else:
                parts.append("(%s)*%s" % (cs, mono))
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        names = ["x%d" % (i + 1) for i in range(self.nvars)]
        return "Poly(%s)" % self.to_str(names)
