"""Seeded generators of synthetic morphisms used by the property and acceptance tests."""

from __future__ import annotations

import random
from itertools import combinations

from logres.algebra import Polynomial, Rational, qlinear_rank, substitute
from logres.charts import Chart, MorphismChart

EXC_NAMES = ("u1", "u2", "u3")
FREE_NAMES = ("v", "w", "y")


def make_chart(s: int, n: int, truncation_degree: int = 16) -> Chart:
    names = (("u",) if s == 1 else EXC_NAMES[:s]) + FREE_NAMES[: n - s]
    return Chart(names, tuple(i < s for i in range(n)), truncation_degree)


def small_rational(rng: random.Random, zero: bool = False) -> Rational:
    while True:
        c = Rational(rng.randint(-3, 3), rng.randint(1, 2))
        if c or zero:
            return c


def random_poly(rng: random.Random, n: int, terms: int, max_deg: int, min_deg: int = 1,
                allowed=None) -> Polynomial:
    """A sum of ``terms`` random terms with total degree in [min_deg, max_deg]."""
    allowed = list(range(n)) if allowed is None else list(allowed)
    out = {}
    for _ in range(terms):
        deg = rng.randint(min_deg, max_deg)
        e = [0] * n
        for _ in range(deg):
            if allowed:
                e[rng.choice(allowed)] += 1
        if sum(e) < min_deg:
            continue
        out[tuple(e)] = small_rational(rng)
    return Polynomial(out, n)


# --- HP morphisms ---------------------------------------------------------------------------

def _chain(rng, s, n, max_step=2):
    """Componentwise increasing exponent vectors with exactly s independent alphas."""
    while True:
        slots = sorted(rng.sample(range(n), s))
        vecs, cur = [], [0] * s
        for i in range(n):
            step = [rng.randint(0, max_step) for _ in range(s)]
            if i == 0 and i in slots and not any(step):
                step[rng.randrange(s)] = 1
            cur = [a + b for a, b in zip(cur, step)]
            vecs.append(tuple(cur))
        alphas = [vecs[i] for i in slots]
        if all(any(a) for a in alphas) and qlinear_rank(alphas) == s:
            return vecs, slots


def hp_morphism(rng: random.Random, disguise: bool = True, max_step: int = 2):
    """A morphism in HP form, optionally composed with a random source coordinate change.

    Returns (morphism, merged exponent chain).  The change fixes the divisor and has
    invertible linear part, so the Fitting ideals keep their monomial generators.
    """
    n = rng.randint(1, 3)
    s = rng.randint(1, min(2, n))
    chart = make_chart(s, n)
    vecs, slots = _chain(rng, s, n, max_step)
    comps = []
    free = iter(range(s, n))
    for i, e in enumerate(vecs):
        full = tuple(e) + (0,) * (n - s)
        mono = Polynomial.monomial(full)
        if i not in slots:
            mono = mono * Polynomial.variable(next(free), n)
        comps.append(mono)
    if disguise:
        images = []
        for i in range(n):
            x = Polynomial.variable(i, n)
            if i < s:
                images.append(x * (1 + random_poly(rng, n, 2, 1)))
            else:
                images.append(x + random_poly(rng, n, 2, 2, min_deg=2))
        comps = [substitute(c, images) for c in comps]
        # a triangular target change keeps every Fitting ideal
        for i in range(1, len(comps)):
            if rng.random() < 0.3:
                j = rng.randrange(i)
                comps[i] = comps[i] + comps[j].scale(small_rational(rng))
    return MorphismChart(chart, tuple(comps)), vecs


def gamma_chain(vecs) -> list:
    out, acc = [], None
    for v in vecs:
        acc = tuple(v) if acc is None else tuple(a + b for a, b in zip(acc, v))
        out.append(acc)
    return out


# --- monomial-like morphisms and blowups --------------------------------------------------------

def monomial_like(rng: random.Random, n: int | None = None, s: int | None = None,
                  extra: float = 0.5) -> MorphismChart:
    """Components u^a * (unit or free monomial) plus occasional higher terms."""
    n = n or rng.randint(2, 3)
    s = s or rng.randint(1, n)
    chart = make_chart(s, n)
    comps = []
    for _ in range(n):
        e = [rng.randint(0, 3) if i < s else 0 for i in range(n)]
        if not any(e[:s]):
            e[rng.randrange(s)] = 1
        if s < n and rng.random() < 0.5:
            e[rng.randrange(s, n)] += 1
        c = Polynomial.monomial(tuple(e))
        if rng.random() < extra:
            c = c * (1 + random_poly(rng, n, 2, 2))
        comps.append(c)
    return MorphismChart(chart, tuple(comps))


def random_center(rng: random.Random, chart: Chart, combinatorial: bool = False):
    pool = list(chart.exceptional_indices) if combinatorial else list(range(chart.n))
    if len(pool) < 2:
        return None
    k = rng.randint(2, len(pool))
    return [chart.names[i] for i in sorted(rng.sample(pool, k))]


# --- Weierstrass fixtures ---------------------------------------------------------------------

def weierstrass_fixture(rng: random.Random, kind: str | None = None):
    """sigma = (u^alpha, u^delta T_2, ...) at a 1-point or a 2-point with delta >= alpha.

    The pure-free part of the T_i starts in a random degree 1..4; in the "infinite"
    mode the T_i vanish on the stratum and in the "unit" mode they are units.
    """
    kind = kind or rng.choice(["1-point", "1-point", "2-point"])
    n, s = (rng.choice([2, 3]), 1) if kind == "1-point" else (3, 2)
    chart = make_chart(s, n)
    alpha = [rng.randint(1, 3) for _ in range(s)]
    delta = [a + rng.randint(0, 2) for a in alpha]
    mode = rng.choice(["finite", "finite", "finite", "infinite", "unit"])
    target = rng.randint(1, 4)
    comps = [Polynomial.monomial(tuple(alpha) + (0,) * (n - s))]
    free = list(range(s, n))
    exc = list(range(s))
    for i in range(n - 1):
        if mode == "infinite":
            t = Polynomial.zero(n)
            for h in exc:
                t = t + Polynomial.variable(h, n) * random_poly(rng, n, 2, 2, min_deg=0)
        else:
            t = random_poly(rng, n, 2, 4, min_deg=target, allowed=free)
            if i == 0:
                t = t + Polynomial.monomial(tuple(target if j == free[0] else 0
                                                  for j in range(n)), small_rational(rng))
            mixed = random_poly(rng, n, 3, 3)
            t = t + Polynomial({e: c for e, c in mixed.items() if any(e[h] for h in exc)}, n)
            if mode == "unit":
                t = t + 1
        comps.append(Polynomial.monomial(tuple(delta) + (0,) * (n - s)) * t)
    return MorphismChart(chart, tuple(comps)), kind


def prepared_fixture(rng: random.Random, kind: str):
    """A morphism already in prepared normal form at the origin.

    kind is "2-point", "1-point-generic" or "1-point-non-generic".  The first T is
    v^d + sum_j c_j u^{r_j} v^j + c_0 u^beta [w], with no v^{d-1} term; at 1-points a
    second T = u^k w^s v decides genericity.
    """
    d = rng.randint(2, 4)
    if kind == "2-point":
        chart = make_chart(2, 3)
        u, v, w = (0, 1), 2, None
        while True:
            alpha = (rng.randint(1, 3), rng.randint(0, 3))
            delta = tuple(a + rng.randint(0, 2) for a in alpha)
            beta = (rng.randint(0, 2), rng.randint(0, 2))
            db = tuple(x + y for x, y in zip(delta, beta))
            if any(beta) and qlinear_rank([alpha, db]) == 2:
                break
    else:
        chart = make_chart(1, 3)
        u, v, w = (0,), 1, 2
        alpha = (rng.randint(1, 3),)
        delta = (alpha[0] + rng.randint(0, 2),)
        beta = (rng.randint(1, 3),)
    n = 3

    def mono(e_exc, vj=0, ws=0, c=1):
        e = [0] * n
        for i, x in zip(u, e_exc):
            e[i] = x
        e[v] += vj
        if w is not None:
            e[w] += ws
        return Polynomial.monomial(tuple(e), c)

    t = mono((0,) * len(u), d)
    for j in range(1, d - 1):
        if rng.random() < 0.6:
            r = tuple(rng.randint(0, 2) for _ in u)
            if not any(r):
                r = tuple(1 for _ in u)
            t = t + mono(r, j, 0, small_rational(rng))
    t = t + mono(beta, 0, 0 if w is None else 1, small_rational(rng))
    comps = [mono(alpha), mono(delta) * t]
    if kind != "2-point":
        # u^delta u^k w^s v: s = 0 keeps the point generic
        s = rng.randint(1, 2) if kind == "1-point-non-generic" else 0
        comps.append(mono(delta) * mono((rng.randint(1, 2),), 1, s))
    return MorphismChart(chart, tuple(comps))


def all_subsets(seq, min_size=2):
    for k in range(min_size, len(seq) + 1):
        yield from combinations(seq, k)
