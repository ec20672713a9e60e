"""Exact sparse polynomials over Q, truncated series and a small Q-linear kernel.

Polynomials are immutable maps from exponent tuples to exact rational
coefficients (``gmpy2.mpq``).  They do not carry variable names; a chart (or an explicit
list of names) is needed to parse or print them.
"""

from __future__ import annotations

import math
import operator
import re
from fractions import Fraction

from gmpy2 import mpq as Rational
from typing import Iterable, Mapping, Sequence

INF = math.inf

Exponent = tuple


class InconsistentSystem(ValueError):
    """A linear system over Q has no solution."""


class ParseError(ValueError):
    pass


_MPQ = type(Rational(0))


def _frac(c) -> Rational:
    if isinstance(c, _MPQ):
        return c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    return Rational(c)


def _add_exp(a, b):
    return tuple(map(operator.add, a, b))


class Polynomial:
    """Sparse multivariate polynomial with rational coefficients."""

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, terms: Mapping | None = None, nvars: int | None = None):
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(x) for x in e)
                c = _frac(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
            if nvars is None:
                nvars = len(next(iter(terms)))
        if nvars is None:
            raise ValueError("nvars is required for the zero polynomial")
        for e in clean:
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent {e} for {nvars} variables")
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, nvars: int) -> "Polynomial":
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    # constructors
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw({}, nvars)

    @classmethod
    def constant(cls, c, nvars: int) -> "Polynomial":
        c = _frac(c)
        return cls._raw({(0,) * nvars: c} if c else {}, nvars)

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls.constant(1, nvars)

    @classmethod
    def variable(cls, i: int, nvars: int) -> "Polynomial":
        e = [0] * nvars
        e[i] = 1
        return cls._raw({tuple(e): Rational(1)}, nvars)

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Polynomial":
        exps = tuple(int(x) for x in exps)
        coeff = _frac(coeff)
        return cls._raw({exps: coeff} if coeff else {}, len(exps))

    # inspection
    @property
    def terms(self) -> dict:
        return self._terms

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exps) -> Rational:
        return self._terms.get(tuple(exps), Rational(0))

    def constant_term(self) -> Rational:
        return self._terms.get((0,) * self.nvars, Rational(0))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def order(self):
        return min((sum(e) for e in self._terms), default=INF)

    def variables_used(self) -> set:
        return {i for e in self._terms for i, x in enumerate(e) if x}

    def min_exponents(self, indices: Iterable[int] | None = None) -> tuple:
        """Componentwise minimum exponent (the gcd monomial); zeros off ``indices``."""
        if not self._terms:
            raise ValueError("zero polynomial has no gcd monomial")
        idx = range(self.nvars) if indices is None else set(indices)
        out = [0] * self.nvars
        for i in idx:
            out[i] = min(e[i] for e in self._terms)
        return tuple(out)

    def sorted_terms(self) -> list:
        """Terms in descending graded-lex order."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("arity mismatch")
            return other
        if isinstance(other, TruncatedSeries):
            return NotImplemented
        return Polynomial.constant(other, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Polynomial._raw(out, self.nvars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self._terms.items()}, self.nvars)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Polynomial":
        c = _frac(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw({e: v * c for e, v in self._terms.items()}, self.nvars)

    def mul(self, other: "Polynomial", degree: int | None = None) -> "Polynomial":
        """Product, dropping terms of total degree above ``degree``."""
        if not isinstance(other, Polynomial):
            return self.scale(other).truncate(degree)
        if other.nvars != self.nvars:
            raise ValueError("arity mismatch")
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        out: dict = {}
        if degree is None:
            for ea, ca in a.items():
                for eb, cb in b.items():
                    e = _add_exp(ea, eb)
                    v = out.get(e, 0) + ca * cb
                    if v:
                        out[e] = v
                    else:
                        del out[e]
        else:
            bl = sorted(((sum(e), e, c) for e, c in b.items()), key=lambda t: t[0])
            for ea, ca in a.items():
                da = sum(ea)
                for db, eb, cb in bl:
                    if da + db > degree:
                        break
                    e = _add_exp(ea, eb)
                    v = out.get(e, 0) + ca * cb
                    if v:
                        out[e] = v
                    else:
                        del out[e]
        return Polynomial._raw(out, self.nvars)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return NotImplemented
        if isinstance(other, Polynomial):
            return self.mul(other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return self.pow(k)

    def pow(self, k: int, degree: int | None = None) -> "Polynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result.mul(base, degree)
            k >>= 1
            if k:
                base = base.mul(base, degree)
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction, _MPQ)):
            return self._terms == Polynomial.constant(other, self.nvars)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def __repr__(self):
        names = [f"x{i}" for i in range(self.nvars)]
        return f"Polynomial({format_polynomial(self, names)!r})"

    # structural operations
    def truncate(self, degree: int | None) -> "Polynomial":
        if degree is None:
            return self
        return Polynomial._raw({e: c for e, c in self._terms.items() if sum(e) <= degree}, self.nvars)

    def homogeneous_part(self, k: int) -> "Polynomial":
        return Polynomial._raw({e: c for e, c in self._terms.items() if sum(e) == k}, self.nvars)

    def diff(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return Polynomial._raw(out, self.nvars)

    def log_diff(self, i: int) -> "Polynomial":
        """x_i * d/dx_i."""
        return Polynomial._raw({e: c * e[i] for e, c in self._terms.items() if e[i]}, self.nvars)

    def divide_monomial(self, m: Sequence[int]) -> tuple["Polynomial", "Polynomial"]:
        """Split into (quotient, remainder) with self = x^m * quotient + remainder."""
        m = tuple(m)
        q, r = {}, {}
        for e, c in self._terms.items():
            if all(x >= y for x, y in zip(e, m)):
                q[tuple(x - y for x, y in zip(e, m))] = c
            else:
                r[e] = c
        return Polynomial._raw(q, self.nvars), Polynomial._raw(r, self.nvars)

    def exact_divide_monomial(self, m: Sequence[int]) -> "Polynomial":
        q, r = self.divide_monomial(m)
        if r:
            raise ValueError("polynomial is not divisible by the monomial")
        return q

    def shift_monomial(self, m: Sequence[int]) -> "Polynomial":
        """Multiply by x^m."""
        return Polynomial._raw({_add_exp(e, m): c for e, c in self._terms.items()}, self.nvars)

    def set_zero(self, indices: Iterable[int]) -> "Polynomial":
        """Restrict to the coordinate subspace where the given variables vanish."""
        idx = list(indices)
        return Polynomial._raw({e: c for e, c in self._terms.items() if not any(e[i] for i in idx)},
                               self.nvars)

    def evaluate(self, point: Sequence) -> Rational:
        point = [_frac(x) for x in point]
        total = Rational(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def translate(self, point: Sequence) -> "Polynomial":
        """p(x + point)."""
        n = self.nvars
        images = [Polynomial.variable(i, n) + _frac(point[i]) for i in range(n)]
        return substitute(self, images)

    def embed(self, positions: Sequence[int], nvars: int) -> "Polynomial":
        """Re-index variables: variable i goes to position positions[i] of an nvars-ring."""
        out = {}
        for e, c in self._terms.items():
            f = [0] * nvars
            for i, k in enumerate(e):
                f[positions[i]] += k
            out[tuple(f)] = c
        return Polynomial._raw(out, nvars)


def order_at_origin(p) -> int | float:
    if isinstance(p, TruncatedSeries):
        p = p.poly
    return p.order()


def is_unit_at_origin(p) -> bool:
    if isinstance(p, TruncatedSeries):
        p = p.poly
    return p.constant_term() != 0


def monomial_divide(p: Polynomial, m: Sequence[int]) -> tuple[Polynomial, Polynomial]:
    return p.divide_monomial(m)


class TruncatedSeries:
    """A power series known up to (and including) total degree ``degree``."""

    __slots__ = ("poly", "degree")

    def __init__(self, poly: Polynomial, degree: int):
        self.poly = poly.truncate(degree)
        self.degree = degree

    @property
    def nvars(self):
        return self.poly.nvars

    def _other(self, other):
        if isinstance(other, TruncatedSeries):
            return other.poly, min(self.degree, other.degree)
        if isinstance(other, Polynomial):
            return other, self.degree
        return Polynomial.constant(other, self.nvars), self.degree

    def __add__(self, other):
        p, d = self._other(other)
        return TruncatedSeries(self.poly + p, d)

    __radd__ = __add__

    def __sub__(self, other):
        p, d = self._other(other)
        return TruncatedSeries(self.poly - p, d)

    def __rsub__(self, other):
        p, d = self._other(other)
        return TruncatedSeries(p - self.poly, d)

    def __neg__(self):
        return TruncatedSeries(-self.poly, self.degree)

    def __mul__(self, other):
        p, d = self._other(other)
        return TruncatedSeries(self.poly.mul(p, d), d)

    __rmul__ = __mul__

    def __pow__(self, q):
        return unit_fractional_power(self, q) if not (isinstance(q, int) and q >= 0) \
            else TruncatedSeries(self.poly.pow(q, self.degree), self.degree)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            d = min(self.degree, other.degree)
            return self.poly.truncate(d) == other.poly.truncate(d)
        if isinstance(other, Polynomial):
            return self.poly == other.truncate(self.degree)
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"TruncatedSeries({self.poly!r}, degree={self.degree})"


def substitute(p, images: Sequence[Polynomial], degree: int | None = None) -> Polynomial:
    """Compose p with the map x_i -> images[i].

    Exact when ``degree`` is None; otherwise terms above ``degree`` are dropped
    at every stage (the images must then have no constant term for the result
    to be meaningful as a series, except through exact polynomial parts).
    """
    if isinstance(p, TruncatedSeries):
        degree = p.degree if degree is None else min(degree, p.degree)
        p = p.poly
    if len(images) != p.nvars:
        raise ValueError("map must be defined on every variable")
    if not p:
        n = images[0].nvars if images else 0
        return Polynomial.zero(n)
    n = images[0].nvars
    # fast path: monomial images
    if all(len(im) == 1 for im in images):
        mons = [next(iter(im.items())) for im in images]
        out: dict = {}
        for e, c in p.items():
            f = [0] * n
            v = c
            for (me, mc), k in zip(mons, e):
                if k:
                    for j, x in enumerate(me):
                        f[j] += x * k
                    v *= mc ** k
            f = tuple(f)
            if degree is not None and sum(f) > degree:
                continue
            s = out.get(f, 0) + v
            if s:
                out[f] = s
            else:
                out.pop(f, None)
        return Polynomial._raw(out, n)
    powers: list[dict] = [dict() for _ in images]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            if k == 0:
                cache[0] = Polynomial.one(n)
            elif k == 1:
                cache[1] = images[i].truncate(degree)
            else:
                cache[k] = power(i, k - 1).mul(images[i], degree)
        return cache[k]

    def accumulate(out, poly, c=1):
        for f, v in poly.items():
            s = out.get(f, 0) + v * c
            if s:
                out[f] = s
            else:
                out.pop(f, None)

    last = len(images) - 1

    def nested(terms, i):
        # Horner-style: group by the exponent of x_i so each power multiplies once per prefix
        out: dict = {}
        if i == last:
            for e, c in terms:
                accumulate(out, power(i, e[i]), c)
            return Polynomial._raw(out, n)
        groups: dict = {}
        for e, c in terms:
            groups.setdefault(e[i], []).append((e, c))
        for k, group in groups.items():
            inner = nested(group, i + 1)
            if k and inner:
                inner = inner.mul(power(i, k), degree)
            accumulate(out, inner)
        return Polynomial._raw(out, n)

    return nested(list(p.items()), 0)


def _int_root(n: int, b: int):
    """Exact integer b-th root of n >= 0, or None."""
    if n < 2:
        return n
    lo, hi = 0, 1 << (n.bit_length() // b + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** b < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** b == n else None


def rational_power(c: Rational, q: Rational) -> Rational:
    """c**q when it is rational; raises ValueError otherwise."""
    c, q = _frac(c), _frac(q)
    if c == 0:
        raise ValueError("zero base")
    a, b = q.numerator, q.denominator
    sign = 1
    if c < 0:
        if b % 2 == 0:
            raise ValueError(f"{c}^{q} is not real")
        sign = -1 if a % 2 else 1
        c = -c
    num, den = _int_root(c.numerator, b), _int_root(c.denominator, b)
    if num is None or den is None:
        raise ValueError(f"{c}^{q} is not rational")
    return sign * Rational(num, den) ** a


def _binomial(q: Rational, k: int) -> Rational:
    out = Rational(1)
    for i in range(k):
        out = out * (q - i) / (i + 1)
    return out


def unit_fractional_power(s, q, degree: int | None = None) -> TruncatedSeries:
    """s**q for a unit series s, by the binomial expansion around s(0)."""
    if isinstance(s, TruncatedSeries):
        degree = s.degree if degree is None else min(degree, s.degree)
        s = s.poly
    if degree is None:
        raise ValueError("a truncation degree is required")
    q = _frac(q)
    c = s.constant_term()
    if not c:
        raise ValueError("unit_fractional_power needs a unit (nonzero constant term)")
    n = s.nvars
    lead = rational_power(c, q)
    x = (s.scale(1 / c) - 1).truncate(degree)
    if not x:
        return TruncatedSeries(Polynomial.constant(lead, n), degree)
    if q.denominator == 1 and q >= 0:
        return TruncatedSeries(s.pow(int(q), degree).truncate(degree), degree)
    total = Polynomial.one(n)
    xk = Polynomial.one(n)
    order = x.order()
    for k in range(1, degree // order + 1):
        xk = xk.mul(x, degree)
        if not xk:
            break
        total = total + xk.scale(_binomial(q, k))
    return TruncatedSeries(total.scale(lead), degree)


def unit_inverse(s, degree: int | None = None) -> TruncatedSeries:
    return unit_fractional_power(s, -1, degree)


# --- Q-linear algebra --------------------------------------------------------

def _row_reduce(rows: list[list[Rational]]):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    m = [list(map(_frac, r)) for r in rows]
    pivots = []
    r = 0
    ncols = len(m[0]) if m else 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return m, pivots


def qlinear_rank(vectors: Sequence[Sequence]) -> int:
    vectors = [v for v in vectors]
    if not vectors or not len(vectors[0]):
        return 0
    return len(_row_reduce(vectors)[1])


def in_rational_span(vec: Sequence, basis: Sequence[Sequence]) -> bool:
    if not any(vec):
        return True
    if not basis:
        return False
    return qlinear_rank(list(basis) + [vec]) == qlinear_rank(basis)


def solve_linear(rows: Sequence[Sequence], rhs: Sequence) -> list[Rational]:
    """Some solution of rows * x = rhs (free variables set to zero)."""
    if not rows:
        raise ValueError("empty system")
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, piv = _row_reduce(aug)
    if ncols in piv:
        raise InconsistentSystem("inconsistent linear system")
    x = [Rational(0)] * ncols
    for i, c in enumerate(piv):
        x[c] = red[i][-1]
    return x


def least_norm_solution(rows: Sequence[Sequence], rhs: Sequence) -> tuple[Rational, ...]:
    """The minimum Euclidean norm solution of <row_i, x> = rhs_i."""
    rows = [list(map(_frac, r)) for r in rows]
    rhs = [_frac(b) for b in rhs]
    if not rows:
        raise ValueError("empty system")
    # x = A^T y with (A A^T) y = b; A A^T may be singular, any y works
    gram = [[sum(a * b for a, b in zip(r1, r2)) for r2 in rows] for r1 in rows]
    y = solve_linear(gram, rhs)
    x = [sum(y[i] * rows[i][j] for i in range(len(rows))) for j in range(len(rows[0]))]
    for r, b in zip(rows, rhs):
        if sum(a * v for a, v in zip(r, x)) != b:
            raise InconsistentSystem("inconsistent linear system")
    return tuple(x)


# --- text form -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^|\*|\+|-|/|\(|\)))")


def _tokenize(text: str):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        if m.group(1):
            out.append(("num", int(m.group(1))))
        elif m.group(2):
            out.append(("id", m.group(2)))
        else:
            out.append(("op", m.group(3)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, names):
        self.toks = _tokenize(text)
        self.i = 0
        self.index = {nm: k for k, nm in enumerate(names)}
        self.n = len(names)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, op=None):
        t = self.peek()
        if op is not None and t != ("op", op):
            raise ParseError(f"expected {op!r}, got {t[1]!r}")
        self.i += 1
        return t

    def expr(self):
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or not q:
                    raise ParseError("division only by nonzero constants")
                p = p.scale(1 / q.constant_term())
        return p

    def unary(self):
        t = self.peek()
        if t == ("op", "-"):
            self.take()
            return -self.unary()
        if t == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        p = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, k = self.take()
            if kind != "num":
                raise ParseError("exponent must be a nonnegative integer")
            p = p ** k
        return p

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Polynomial.constant(val, self.n)
        if kind == "id":
            if val not in self.index:
                raise ParseError(f"unknown variable {val!r}")
            return Polynomial.variable(self.index[val], self.n)
        if val == "(":
            p = self.expr()
            self.take(")")
            return p
        raise ParseError(f"unexpected token {val!r}")


def parse_polynomial(text: str, names: Sequence[str]) -> Polynomial:
    parser = _Parser(text, list(names))
    if not parser.toks:
        raise ParseError("empty expression")
    p = parser.expr()
    if parser.i != len(parser.toks):
        raise ParseError(f"trailing input at token {parser.i}")
    return p


def format_monomial(exps: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for nm, k in zip(names, exps):
        if k == 1:
            parts.append(nm)
        elif k:
            parts.append(f"{nm}^{k}")
    return "*".join(parts) if parts else "1"


def format_rational(c: Rational) -> str:
    c = _frac(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p, names: Sequence[str]) -> str:
    if isinstance(p, TruncatedSeries):
        p = p.poly
    if not p:
        return "0"
    out = []
    for k, (e, c) in enumerate(p.sorted_terms()):
        neg = c < 0
        a = -c if neg else c
        mono = format_monomial(e, names)
        if mono == "1":
            body = format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_rational(a)}*{mono}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


# --- maps between coordinate systems ---------------------------------------------

def compose(polys: Sequence[Polynomial], images: Sequence[Polynomial],
            degree: int | None = None) -> list:
    return [substitute(p, images, degree).truncate(degree) for p in polys]


def _unit(i: int, n: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(n))


def invert_map(forward: Sequence[Polynomial], degree: int) -> list:
    """Series inverse of a coordinate change new = forward(old).

    ``forward`` must fix the origin and have a unipotent linear part (identity
    plus a nilpotent part).  Returns old coordinates as series in the new ones,
    correct up to ``degree``.  The linear part is inverted exactly; the rest is
    identity plus terms of order >= 2, which one fixed-point round per degree lifts.
    """
    n = len(forward)
    ident = [Polynomial.variable(i, n) for i in range(n)]
    for f in forward:
        if f.constant_term():
            raise ValueError("coordinate change must fix the origin")
    A = [[f.coefficient(_unit(j, n)) for j in range(n)] for f in forward]
    nil = [[A[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    # (I + N)^-1 = sum_k (-N)^k, finite because N is nilpotent
    inv = [[Rational(1 if i == j else 0) for j in range(n)] for i in range(n)]
    term = inv
    for _ in range(n):
        term = [[-sum(term[i][k] * nil[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)]
        inv = [[inv[i][j] + term[i][j] for j in range(n)] for i in range(n)]
    if any(any(x for x in row) for row in term):
        raise ArithmeticError("series inversion needs a unipotent linear part")
    lin_inv = [Polynomial({_unit(j, n): inv[i][j] for j in range(n) if inv[i][j]}, n)
               for i in range(n)]
    high = [(substitute(f, lin_inv, degree) - ident[i]).truncate(degree)
            for i, f in enumerate(forward)]
    moving = [i for i in range(n) if high[i]]
    old = list(ident)
    for d in range(2, degree + 1):
        nxt = list(old)
        for i in moving:
            nxt[i] = (ident[i] - substitute(high[i], old, d)).truncate(d)
        old = nxt
    return [substitute(p, old, degree).truncate(degree) for p in lin_inv]
