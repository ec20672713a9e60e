"""Monomial ideals: principality, residual factoring, weak transforms and
principalization by coordinate blowups."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import INF, Polynomial, format_monomial, parse_polynomial


class Undecidable(Exception):
    """Raised when a question cannot be settled with monomial methods."""


def _leq(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimalize(exps: Iterable[Sequence[int]]) -> tuple:
    """Minimal antichain of exponent vectors, sorted lexicographically."""
    out: list = []
    for e in sorted(set(tuple(e) for e in exps), key=lambda e: (sum(e), e)):
        if not any(_leq(g, e) for g in out):
            out.append(e)
    return tuple(sorted(out))


@dataclass(frozen=True)
class MonomialIdeal:
    generators: tuple
    nvars: int
    divisor: tuple = ()    # indices of coordinates treated as divisor components

    def __post_init__(self):
        object.__setattr__(self, "generators", minimalize(self.generators))
        object.__setattr__(self, "divisor", tuple(sorted(set(self.divisor))))
        for g in self.generators:
            if len(g) != self.nvars:
                raise ValueError("generator arity mismatch")

    @classmethod
    def from_strings(cls, texts, names, divisor=()):
        gens = []
        for t in texts:
            p = parse_polynomial(t, names)
            if not p.is_monomial():
                raise ValueError(f"{t!r} is not a monomial")
            gens.append(next(iter(p.terms)))
        div = [names.index(d) if isinstance(d, str) else d for d in divisor]
        return cls(tuple(gens), len(names), tuple(div))

    def is_zero(self) -> bool:
        return not self.generators

    def is_principal(self) -> bool:
        return len(self.generators) == 1

    def is_unit(self) -> bool:
        return (0,) * self.nvars in self.generators

    def contains(self, exps: Sequence[int]) -> bool:
        return any(_leq(g, exps) for g in self.generators)

    def contains_ideal(self, other: "MonomialIdeal") -> bool:
        return all(self.contains(g) for g in other.generators)

    def times(self, mono: Sequence[int]) -> "MonomialIdeal":
        return MonomialIdeal(tuple(tuple(a + b for a, b in zip(g, mono)) for g in self.generators),
                             self.nvars, self.divisor)

    def gcd(self) -> tuple:
        if not self.generators:
            raise ValueError("zero ideal")
        return tuple(min(g[i] for g in self.generators) for i in range(self.nvars))

    def blowup_exponents(self, center: Sequence[int], w: int) -> "MonomialIdeal":
        """Total transform in the w-chart of the blowup with the given center."""
        gens = []
        for g in self.generators:
            f = list(g)
            f[w] = sum(g[i] for i in center)
            gens.append(tuple(f))
        div = set(self.divisor) | {w}
        return MonomialIdeal(tuple(gens), self.nvars, tuple(div))

    def polynomials(self) -> list:
        return [Polynomial.monomial(g) for g in self.generators]

    def format(self, names) -> list:
        return [format_monomial(g, names) for g in self.generators]


def _monomial_unit(p: Polynomial):
    """(gcd exponent, cofactor) if p = monomial * unit, else None."""
    e = p.min_exponents()
    q = p.exact_divide_monomial(e)
    if q.constant_term() == 0:
        return None
    return e, q


def monomialize(generators: Sequence[Polynomial], divisor: Sequence[int] = (),
                nvars: int | None = None):
    """Express the ideal generated by ``generators`` as a monomial ideal at the origin.

    Generators that are monomial times unit give the staircase; every other
    generator must lie term-wise in that staircase.  Returns the ideal and a
    table of (generator index, monomial, unit cofactor).  Raises Undecidable
    otherwise.  An empty list is the zero ideal when ``nvars`` is given.
    """
    if not generators:
        if nvars is None:
            raise ValueError("no generators")
        return MonomialIdeal((), nvars, tuple(divisor)), []
    nvars = generators[0].nvars
    if not any(generators):
        return MonomialIdeal((), nvars, tuple(divisor)), []
    mons, units, rest = [], [], []
    for k, g in enumerate(generators):
        if not g:
            continue
        mu = _monomial_unit(g)
        if mu is None:
            rest.append((k, g))
        else:
            mons.append(mu[0])
            units.append((k, mu[0], mu[1]))
    ideal = MonomialIdeal(tuple(mons), nvars, tuple(divisor))
    for k, g in rest:
        if not all(ideal.contains(e) for e in g.terms):
            raise Undecidable(f"generator {k} is not monomial times unit and is not in "
                              f"the monomial part")
    return ideal, units


def e_gcd(generators: Sequence[Polynomial], exceptional: Sequence[int]) -> tuple | None:
    """Largest monomial in the given coordinates dividing every generator."""
    nz = [g for g in generators if g]
    if not nz:
        return None
    nvars = nz[0].nvars
    out = [0] * nvars
    for i in exceptional:
        out[i] = min(min(e[i] for e in g.terms) for g in nz)
    return tuple(out)


def residual_factor(generators, exceptional: Sequence[int]):
    """Factor the largest common monomial in the exceptional coordinates.

    Accepts a MonomialIdeal or a list of polynomials.  Returns (exponent,
    residual generators); the exponent is None for the zero ideal.
    """
    if isinstance(generators, MonomialIdeal):
        if generators.is_zero():
            return None, generators
        mu = [0] * generators.nvars
        for i in exceptional:
            mu[i] = min(g[i] for g in generators.generators)
        res = tuple(tuple(a - b for a, b in zip(g, mu)) for g in generators.generators)
        return tuple(mu), MonomialIdeal(res, generators.nvars, generators.divisor)
    mu = e_gcd(generators, exceptional)
    if mu is None:
        return None, [g for g in generators if g]
    return mu, [g.exact_divide_monomial(mu) for g in generators if g]


def principal_exponent(generators: Sequence[Polynomial], exceptional: Sequence[int]):
    """Exponent of the generator when the ideal is a principal monomial ideal
    in the exceptional coordinates, else None.

    Exact at the origin: (u^g) is the ideal iff u^g divides every generator and
    some quotient is a unit.
    """
    mu, res = residual_factor(list(generators), exceptional)
    if mu is None:
        return None
    if any(r.constant_term() != 0 for r in res):
        return mu
    return None


def residual_order(generators: Sequence[Polynomial], exceptional: Sequence[int]):
    """Order at the origin of the residual ideal restricted to the stratum."""
    mu, res = residual_factor(list(generators), exceptional)
    if mu is None:
        return INF
    return min((r.set_zero(exceptional).order() for r in res), default=INF)


def weak_transform(ideal: MonomialIdeal, center: Sequence[int], w: int) -> MonomialIdeal:
    """Pull back to the w-chart and divide by the largest power of the new exceptional coordinate."""
    total = ideal.blowup_exponents(center, w)
    if total.is_zero():
        return total
    m = min(g[w] for g in total.generators)
    gens = []
    for g in total.generators:
        f = list(g)
        f[w] -= m
        gens.append(tuple(f))
    return MonomialIdeal(tuple(gens), ideal.nvars, total.divisor)


@dataclass
class PrincipalizationNode:
    ideal: MonomialIdeal
    path: tuple = ()                    # chart variables chosen from the root
    center: tuple | None = None
    children: list = field(default_factory=list)
    tracked: tuple = ()                 # original generators, in input order, pulled back

    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> list:
        if self.is_leaf():
            return [self]
        out = []
        for ch in self.children:
            out.extend(ch.leaves())
        return out

    def depth(self) -> int:
        return 0 if self.is_leaf() else 1 + max(ch.depth() for ch in self.children)

    def blowups(self) -> int:
        return 0 if self.is_leaf() else 1 + sum(ch.blowups() for ch in self.children)

    def to_json(self, names) -> dict:
        out = {"chart": "/".join(names[i] for i in self.path) or ".",
               "ideal": self.ideal.format(names)}
        if self.center is not None:
            out["center"] = [names[i] for i in self.center]
            out["children"] = [ch.to_json(names) for ch in self.children]
        return out


class StepCapExceeded(RuntimeError):
    pass


def _pair_center(g: Sequence[int], h: Sequence[int]) -> tuple | None:
    """Center for the pair x^g, x^h, or None when one divides the other.

    Write the pair as x^m (x^a, x^b) with disjoint supports and |a| <= |b|.  The
    center is supp(a) plus a minimal set Q of coordinates of b with sum_Q b >= |a|.
    In every chart (min, max) of the two degrees drops lexicographically.
    """
    a = [max(x - y, 0) for x, y in zip(g, h)]
    b = [max(y - x, 0) for x, y in zip(g, h)]
    if not any(a) or not any(b):
        return None
    if sum(a) > sum(b):
        a, b = b, a
    need, acc, chosen = sum(a), 0, []
    for i in sorted((i for i, x in enumerate(b) if x), key=lambda i: (-b[i], i)):
        chosen.append(i)
        acc += b[i]
        if acc >= need:
            break
    return tuple(sorted([i for i, x in enumerate(a) if x] + chosen))


def choose_center(gens) -> tuple | None:
    """Center for the first incomparable pair of generators, in the given order.

    A comparable pair stays comparable after any coordinate blowup, so working
    through the pairs in a fixed order terminates.
    """
    if isinstance(gens, MonomialIdeal):
        gens = gens.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            c = _pair_center(gens[i], gens[j])
            if c is not None:
                return c
    return None


def _pull(gens: tuple, center: Sequence[int], w: int) -> tuple:
    out = []
    for g in gens:
        f = list(g)
        f[w] = sum(g[i] for i in center)
        out.append(tuple(f))
    return tuple(out)


def newton_principalize(ideal: MonomialIdeal, divisor: Sequence[int] | None = None,
                        step_cap: int = 64, transform: str = "total") -> PrincipalizationNode:
    """Blow up coordinate centers until the ideal is principal in every chart.

    ``transform`` is "total" (pull back) or "weak" (also divide by the new
    exceptional coordinate).  Both give the same tree.
    """
    divisor = tuple(range(ideal.nvars)) if divisor is None else tuple(divisor)
    for g in ideal.generators:
        for i, x in enumerate(g):
            if x and i not in divisor:
                raise ValueError("ideal involves a coordinate outside the divisor")
    root = PrincipalizationNode(MonomialIdeal(ideal.generators, ideal.nvars, divisor),
                                tracked=tuple(ideal.generators))
    stack = [root]
    while stack:
        node = stack.pop()
        if len(node.path) > step_cap:
            raise StepCapExceeded(f"principalization exceeded {step_cap} steps along {node.path}")
        if node.ideal.is_zero() or node.ideal.is_principal():
            continue
        center = choose_center(node.tracked)
        node.center = center
        for w in center:
            if transform == "weak":
                child = weak_transform(node.ideal, center, w)
            else:
                child = node.ideal.blowup_exponents(center, w)
            node.children.append(PrincipalizationNode(child, node.path + (w,),
                                                      tracked=_pull(node.tracked, center, w)))
        stack.extend(reversed(node.children))
    return root
