"""Polynomial expression grammar: parsing, emission, exact and numeric evaluation.

    expr   := term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | atom ('^' nonneg-int)?
    atom   := rational | 'theta' | var | '(' expr ')' | 'ln1p(' var ')'
    var    := 'x' digit+ | 't' | 's'

``ln1p`` is accepted only when ``allow_ln=True`` (numeric curves).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactfield import NumberField, QQ
from .poly import Poly

__all__ = [
    "ParseError",
    "Num",
    "Theta",
    "Var",
    "Add",
    "Sub",
    "Mul",
    "Pow",
    "Neg",
    "Ln1p",
    "parse",
    "emit",
    "to_poly",
    "to_numeric",
    "derivative",
    "variables",
    "simplify",
]


class ParseError(ValueError):
    """Raised with the 0-based character offset of the problem."""

    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.column = line, col
        super().__init__("%s at line %d, column %d" % (message, line, col))


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Theta:
    pass


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    left: object
    right: object


@dataclass(frozen=True)
class Mul:
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Ln1p:
    var: str


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<ln>ln1p\s*\()
  | (?P<num>\d+(?:/\d+)?)
  | (?P<var>x\d+|theta|t|s)
  | (?P<op>[-+*^()])
""", re.VERBOSE)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character %r" % text[pos], pos, text)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group().replace(" ", ""), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, allow_ln: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_ln = allow_ln

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            self.fail("expected %r" % value, tok)

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] == "*":
            self.take()
            node = Mul(node, self.factor())
        return node

    def factor(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        node = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1]:
                self.fail("exponent must be a nonnegative integer", tok)
            node = Pow(node, int(tok[1]))
        return node

    def atom(self):
        tok = self.take()
        kind, val, pos = tok
        if kind == "num":
            if "/" in val:
                p, q = val.split("/")
                if int(q) == 0:
                    raise ParseError("zero denominator in %r" % val, pos, self.text)
                return Num(Fraction(int(p), int(q)))
            return Num(Fraction(int(val)))
        if kind == "var":
            return Theta() if val == "theta" else Var(val)
        if kind == "ln":
            if not self.allow_ln:
                raise ParseError("ln1p is only allowed in numeric curves", pos, self.text)
            v = self.take()
            if v[0] != "var" or v[1] == "theta":
                self.fail("ln1p takes a variable", v)
            self.expect(")")
            return Ln1p(v[1])
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        self.fail("unexpected %s" % (repr(val) if val else "end of input"), tok)


def parse(text: str, allow_ln: bool = False):
    """Parse ``text`` into an AST; raises ParseError with a position."""
    p = _Parser(text, allow_ln)
    node = p.expr()
    if p.peek()[0] != "end":
        p.fail("trailing input")
    return node


# -- emission -------------------------------------------------------------------

_PREC = {Add: 1, Sub: 1, Mul: 2, Neg: 3, Pow: 4}


def _prec(node) -> int:
    if isinstance(node, Num) and node.value.denominator != 1:
        return 2  # "p/q" reads as a quotient
    return _PREC.get(type(node), 5)


def emit(node) -> str:
    """Text that parses back to the same AST."""
    if isinstance(node, Num):
        v = node.value
        if v < 0:
            return emit(Neg(Num(-v)))
        return str(v.numerator) if v.denominator == 1 else "%d/%d" % (v.numerator, v.denominator)
    if isinstance(node, Theta):
        return "theta"
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Ln1p):
        return "ln1p(%s)" % node.var
    if isinstance(node, Neg):
        inner = emit(node.arg)
        return "-" + (inner if _prec(node.arg) >= 4 else "(%s)" % inner)
    if isinstance(node, Pow):
        inner = emit(node.base)
        return "%s^%d" % (inner if _prec(node.base) >= 5 else "(%s)" % inner, node.exp)
    if isinstance(node, (Add, Sub, Mul)):
        p = _prec(node)
        op = {Add: " + ", Sub: " - ", Mul: "*"}[type(node)]
        left = emit(node.left)
        if _prec(node.left) < p:
            left = "(%s)" % left
        right = emit(node.right)
        # left-associative: equal precedence on the right needs parentheses
        if _prec(node.right) <= p:
            right = "(%s)" % right
        return left + op + right
    raise TypeError("not an expression node: %r" % (node,))


# -- interpretation -------------------------------------------------------------

def variables(node) -> set:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Ln1p):
        return {node.var}
    if isinstance(node, (Add, Sub, Mul)):
        return variables(node.left) | variables(node.right)
    if isinstance(node, (Pow,)):
        return variables(node.base)
    if isinstance(node, Neg):
        return variables(node.arg)
    return set()


def to_poly(node, field: NumberField = QQ, names=("t",)) -> Poly:
    """Exact polynomial in the variables ``names`` (in that order)."""
    names = list(names)
    nv = len(names)
    if isinstance(node, Num):
        return Poly.constant(field, nv, node.value)
    if isinstance(node, Theta):
        if field.degree < 2:
            raise ValueError("theta used but the field is Q")
        return Poly.constant(field, nv, field.theta)
    if isinstance(node, Var):
        if node.name not in names:
            raise ValueError("unknown variable %r (expected one of %s)" % (node.name, names))
        return Poly.variable(field, nv, names.index(node.name))
    if isinstance(node, Ln1p):
        raise ValueError("ln1p is not a polynomial")
    if isinstance(node, Neg):
        return -to_poly(node.arg, field, names)
    if isinstance(node, Pow):
        return to_poly(node.base, field, names) ** node.exp
    a, b = to_poly(node.left, field, names), to_poly(node.right, field, names)
    if isinstance(node, Add):
        return a + b
    if isinstance(node, Sub):
        return a - b
    return a * b


def to_numeric(node, theta: float = 0.0, names=("t",)):
    """Vectorized float evaluator ``f(*arrays)``."""
    names = list(names)

    def ev(nd, xs):
        if isinstance(nd, Num):
            return float(nd.value)
        if isinstance(nd, Theta):
            return theta
        if isinstance(nd, Var):
            return xs[names.index(nd.name)]
        if isinstance(nd, Ln1p):
            return np.log1p(xs[names.index(nd.var)])
        if isinstance(nd, Neg):
            return -ev(nd.arg, xs)
        if isinstance(nd, Pow):
            return ev(nd.base, xs) ** nd.exp
        a, b = ev(nd.left, xs), ev(nd.right, xs)
        if isinstance(nd, Add):
            return a + b
        if isinstance(nd, Sub):
            return a - b
        return a * b

    missing = variables(node) - set(names)
    if missing:
        raise ValueError("unknown variables %s" % sorted(missing))

    def f(*xs):
        xs = [np.asarray(x, dtype=float) for x in xs]
        shape = np.broadcast(*xs).shape if xs else ()
        return np.broadcast_to(ev(node, xs), shape).astype(float)

    return f


def simplify(node):
    """Constant folding and removal of trivial 0/1 operands."""
    if isinstance(node, (Add, Sub, Mul)):
        a, b = simplify(node.left), simplify(node.right)
        if isinstance(a, Num) and isinstance(b, Num):
            op = {Add: lambda x, y: x + y, Sub: lambda x, y: x - y,
                  Mul: lambda x, y: x * y}[type(node)]
            return Num(op(a.value, b.value))
        if isinstance(node, Mul):
            if a == Num(Fraction(0)) or b == Num(Fraction(0)):
                return Num(Fraction(0))
            if a == Num(Fraction(1)):
                return b
            if b == Num(Fraction(1)):
                return a
        if isinstance(node, Add):
            if a == Num(Fraction(0)):
                return b
            if b == Num(Fraction(0)):
                return a
        if isinstance(node, Sub) and b == Num(Fraction(0)):
            return a
        return type(node)(a, b)
    if isinstance(node, Neg):
        a = simplify(node.arg)
        return Num(-a.value) if isinstance(a, Num) else Neg(a)
    if isinstance(node, Pow):
        a = simplify(node.base)
        if node.exp == 0:
            return Num(Fraction(1))
        if node.exp == 1:
            return a
        return Num(a.value ** node.exp) if isinstance(a, Num) else Pow(a, node.exp)
    return node


def derivative(node, var: str):
    """Symbolic d/d(var), simplified."""
    def d(nd):
        if isinstance(nd, (Num, Theta)):
            return Num(Fraction(0))
        if isinstance(nd, Var):
            return Num(Fraction(1 if nd.name == var else 0))
        if isinstance(nd, Ln1p):
            if nd.var != var:
                return Num(Fraction(0))
            raise _Recip(nd.var)
        if isinstance(nd, Neg):
            return Neg(d(nd.arg))
        if isinstance(nd, Add):
            return Add(d(nd.left), d(nd.right))
        if isinstance(nd, Sub):
            return Sub(d(nd.left), d(nd.right))
        if isinstance(nd, Mul):
            return Add(Mul(d(nd.left), nd.right), Mul(nd.left, d(nd.right)))
        if isinstance(nd, Pow):
            if nd.exp == 0:
                return Num(Fraction(0))
            return Mul(Mul(Num(Fraction(nd.exp)), Pow(nd.base, nd.exp - 1)), d(nd.base))
        raise TypeError(nd)

    return simplify(d(node))


class _Recip(Exception):
    """d/dv ln1p(v) = 1/(1+v) leaves the grammar; numeric callers handle it."""

    def __init__(self, var):
        self.var = var


def numeric_derivative(node, var: str, theta: float = 0.0, names=("t",)):
    """Vectorized evaluator of d(node)/d(var), covering ln1p via 1/(1+v)."""
    names = list(names)

    def dev(nd, xs):
        """Return (value, derivative) pair."""
        if isinstance(nd, Num):
            return float(nd.value), 0.0
        if isinstance(nd, Theta):
            return theta, 0.0
        if isinstance(nd, Var):
            return xs[names.index(nd.name)], 1.0 if nd.name == var else 0.0
        if isinstance(nd, Ln1p):
            x = xs[names.index(nd.var)]
            return np.log1p(x), (1.0 / (1.0 + x) if nd.var == var else 0.0)
        if isinstance(nd, Neg):
            v, dv = dev(nd.arg, xs)
            return -v, -dv
        if isinstance(nd, Pow):
            v, dv = dev(nd.base, xs)
            if nd.exp == 0:
                return 1.0, 0.0
            return v ** nd.exp, nd.exp * v ** (nd.exp - 1) * dv
        (a, da), (b, db) = dev(nd.left, xs), dev(nd.right, xs)
        if isinstance(nd, Add):
            return a + b, da + db
        if isinstance(nd, Sub):
            return a - b, da - db
        return a * b, da * b + a * db

    def f(*xs):
        xs = [np.asarray(x, dtype=float) for x in xs]
        shape = np.broadcast(*xs).shape if xs else ()
        return np.broadcast_to(dev(node, xs)[1], shape).astype(float)

    return f
