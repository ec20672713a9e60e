"""The invariants rho and d, Weierstrass and prepared normal forms, and the
auxiliary ideals H, G, J and the declared ideal I."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import count

from .algebra import (INF, Polynomial, Rational, format_polynomial, format_rational, invert_map,
                      compose, least_norm_solution, qlinear_rank, substitute,
                      unit_fractional_power, unit_inverse)
from .charts import Chart, MorphismChart
from .hp import _monomials_up_to
from .logfit import fitting_ideal, log_rank_at_origin
from .monomial import (MonomialIdeal, Undecidable, monomialize, newton_principalize,
                       principal_exponent, residual_order, _monomial_unit)


def rho(m: MorphismChart, k: int | None = None):
    """Order, along the stratum through the origin, of the residual ideal of F_k.

    k defaults to n-2.  Infinity when the residual vanishes on the stratum.
    """
    n = m.n
    if k is None:
        k = n - 2
    if k < 0:
        return 0
    gens = fitting_ideal(m, k).generators
    return residual_order(list(gens), m.chart.exceptional_indices)


def point_kind(chart: Chart) -> str:
    s = chart.s
    if s == 0:
        return "off-divisor"
    return f"{s}-point"


# --- Weierstrass form ------------------------------------------------------------------

@dataclass
class WeierstrassData:
    morphism: MorphismChart     # normalized components, in the final coordinates
    alpha_index: int            # component equal to u^alpha
    alpha: tuple                # on exceptional coordinates
    delta: tuple | None
    g: dict                     # component index -> Polynomial
    T: dict                     # component index -> Polynomial
    d: int | float
    v: int | None = None        # distinguished free coordinate
    main: int | None = None     # component whose T has the unit T~
    a: dict = field(default_factory=dict)          # (i, j) -> coefficient of v^j, j < d
    T_tilde: dict = field(default_factory=dict)
    images: tuple | None = None  # original coordinates in terms of the final ones
    changes: list = field(default_factory=list)
    linear_change: list | None = None
    target_scale: Rational = Rational(1)

    @property
    def chart(self) -> Chart:
        return self.morphism.chart

    @property
    def order_T(self):
        """Order at the origin of the ideal generated by the T_i."""
        return min((t.order() for t in self.T.values()), default=INF)

    def other_free(self) -> list:
        return [i for i in self.chart.free_indices if i != self.v]

    def check(self) -> list:
        """Structural invariants that fail; empty when the data is consistent."""
        chart = self.chart
        N = self.morphism.known_degree
        comps = self.morphism.components
        bad = []
        full_alpha = chart.e_monomial(self.alpha)
        if comps[self.alpha_index] != Polynomial.monomial(full_alpha):
            bad.append("first component is not u^alpha")
        for i, c in enumerate(comps):
            if i == self.alpha_index:
                continue
            if any(not all(x >= y for x, y in zip(e, full_alpha)) for e in c.terms):
                bad.append(f"u^alpha does not divide component {i + 1}")
            if self.delta is None:
                continue
            rebuilt = self.g[i] + self.T[i].shift_monomial(chart.e_monomial(self.delta))
            if rebuilt.truncate(N) != c.truncate(N):
                bad.append(f"component {i + 1} does not reassemble")
            if self.v is not None and self.a:
                tj = self.T_tilde[i].shift_monomial(_unit_vec(self.v, chart.n, self.d))
                for j in range(int(self.d)):
                    tj = tj + self.a[(i, j)].shift_monomial(_unit_vec(self.v, chart.n, j))
                if tj != self.T[i]:
                    bad.append(f"T_{i + 1} does not match its v-expansion")
        if self.T and self.delta is not None:
            for h in chart.exceptional_indices:
                if all(all(e[h] > 0 for e in t.terms) for t in self.T.values() if t):
                    bad.append(f"every T_i is divisible by {chart.names[h]}")
        if self.main is not None and self.a:
            if self.a.get((self.main, int(self.d) - 1)):
                bad.append("a_{2,d-1} is nonzero")
            if not self.T_tilde[self.main].constant_term():
                bad.append("T~ is not a unit")
        return bad

    def to_json(self) -> dict:
        chart = self.chart
        names = chart.names
        ex = [names[i] for i in chart.exceptional_indices]
        out = {
            "alpha_component": self.alpha_index + 1,
            "alpha": list(self.alpha),
            "delta": list(self.delta) if self.delta is not None else None,
            "d": _inf_json(self.d),
            "g": {str(i + 1): chart.format(p) for i, p in sorted(self.g.items())},
            "T": {str(i + 1): chart.format(p) for i, p in sorted(self.T.items())},
            "exceptional": ex,
        }
        if self.v is not None:
            out["v"] = names[self.v]
            out["main_component"] = self.main + 1
            out["a"] = {f"{i + 1},{j}": chart.format(p) for (i, j), p in sorted(self.a.items()) if p}
        if self.changes:
            out["coordinate_changes"] = list(self.changes)
        if self.linear_change is not None:
            out["linear_change"] = self.linear_change
        if self.target_scale != 1:
            out["target_scale"] = format_rational(self.target_scale)
        return out


def _inf_json(x):
    return "inf" if x == INF else int(x)


def _unit_vec(i: int, n: int, k: int = 1) -> tuple:
    e = [0] * n
    e[i] = k
    return tuple(e)


def _split_g(p: Polynomial, chart: Chart, alpha_full: tuple):
    """Move pure-u terms whose exponent is q*alpha with q >= 1 into g."""
    free = chart.free_indices
    exc = chart.exceptional_indices
    g, rest = {}, {}
    for e, c in p.items():
        target = rest
        if not any(e[j] for j in free):
            q = None
            ok = True
            for i in exc:
                if alpha_full[i] == 0:
                    if e[i]:
                        ok = False
                        break
                    continue
                r = Rational(e[i], alpha_full[i])
                if q is None:
                    q = r
                elif r != q:
                    ok = False
                    break
            if ok and q is not None and q >= 1:
                target = g
        target[e] = c
    return Polynomial(g, p.nvars), Polynomial(rest, p.nvars)


def _pure_free_degree(t: Polynomial, chart: Chart):
    exc = chart.exceptional_indices
    return min((sum(e) for e in t.terms if not any(e[i] for i in exc)), default=INF)


def _decompose(comps, chart: Chart, idx: int, alpha_full: tuple):
    g, rest = {}, {}
    for i, c in enumerate(comps):
        if i == idx:
            continue
        g[i], rest[i] = _split_g(c, chart, alpha_full)
    nz = [r for r in rest.values() if r]
    if not nz:
        return g, None, {i: Polynomial.zero(chart.n) for i in rest}, INF
    exc = chart.exceptional_indices
    delta_full = [0] * chart.n
    for h in exc:
        delta_full[h] = min(min(e[h] for e in r.terms) for r in nz)
    T = {i: r.exact_divide_monomial(delta_full) for i, r in rest.items()}
    d = min((_pure_free_degree(t, chart) for t in T.values()), default=INF)
    return g, chart.e_exponent(delta_full), T, d


def _v_expansion(t: Polynomial, v: int, d: int):
    """Coefficients of v^j for j < d, and the quotient T~ with T = T~ v^d + sum a_j v^j."""
    n = t.nvars
    parts = [dict() for _ in range(d)]
    tail = {}
    for e, c in t.items():
        j = e[v]
        if j < d:
            parts[j][e[:v] + (0,) + e[v + 1:]] = c
        else:
            tail[e[:v] + (j - d,) + e[v + 1:]] = c
    return [Polynomial(p, n) for p in parts], Polynomial(tail, n)


def _shears():
    yield 0
    for b in count(1):
        yield b
        yield -b


def to_weierstrass(m: MorphismChart) -> WeierstrassData:
    """Normalize sigma_1 = u^alpha, split sigma_i = g_i + u^delta T_i and, when
    2 <= d < inf, bring the T_i into Weierstrass form in a distinguished free
    coordinate v with a_{2,d-1} = 0."""
    chart = m.chart
    n = chart.n
    N = m.known_degree or chart.truncation_degree
    N = min(N, chart.truncation_degree)
    exc = chart.exceptional_indices
    if not exc:
        raise ValueError("the origin does not lie on the divisor")
    if log_rank_at_origin(m) != 0:
        raise ValueError("log rank at the origin is not 0")
    alpha_full = principal_exponent(fitting_ideal(m, n - 1).generators, exc)
    if alpha_full is None:
        raise ValueError(f"F_{n - 1} is not a principal monomial ideal")
    comps = [c - c.constant_term() for c in m.components]
    idx = None
    for i, c in enumerate(comps):
        mu = _monomial_unit(c) if c else None
        if mu is not None and mu[0] == alpha_full:
            idx = i
            unit = mu[1]
            break
    if idx is None:
        raise ValueError("no component is u^alpha times a unit")
    changes: list = []
    names = chart.names
    images = [Polynomial.variable(i, n) for i in range(n)]
    c0 = unit.constant_term()
    S = unit.scale(1 / c0)
    known = m.known_degree
    if S != 1:
        alpha = chart.e_exponent(alpha_full)
        eps = least_norm_solution([alpha], [1])
        forward = [Polynomial.variable(i, n) for i in range(n)]
        for h, eh in zip(exc, eps):
            if eh:
                forward[h] = unit_fractional_power(S, eh, N).poly.mul(forward[h], N)
                changes.append(f"{names[h]}' = ({format_polynomial(S, names)})^"
                               f"({format_rational(eh)})*{names[h]}")
        inverse = invert_map(forward, N)
        comps = compose(comps, inverse, N)
        images = compose(images, inverse, N)
        known = N
    comps[idx] = Polynomial.monomial(alpha_full)
    g, delta, T, d = _decompose(comps, chart, idx, alpha_full)
    data = WeierstrassData(MorphismChart(chart, tuple(comps), known), idx,
                           chart.e_exponent(alpha_full), delta, g, T, d,
                           images=tuple(images), changes=changes, target_scale=c0)
    if not (2 <= d < INF):
        return data

    # distinguished coordinate and generic linear change
    free = list(chart.free_indices)
    main = next(i for i in sorted(T) if _pure_free_degree(T[i], chart) == d)
    lead = Polynomial({e: c for e, c in T[main].items()
                       if sum(e) == d and not any(e[h] for h in exc)}, n)
    v = next((f for f in free if lead.coefficient(_unit_vec(f, n, d))), None)
    linear = None
    if v is None:
        v = free[0]
        for b in _shears():
            if b == 0:
                continue
            sub = [Polynomial.variable(i, n) for i in range(n)]
            for f in free[1:]:
                sub[f] = sub[f] + Polynomial.variable(v, n).scale(b)
            if substitute(lead, sub).coefficient(_unit_vec(v, n, d)):
                break
        comps = [substitute(c, sub, N) for c in comps]
        images = [substitute(p, sub, N) for p in images]
        linear = {names[f]: f"{names[f]} + {format_rational(b)}*{names[v]}" if f != v
                  else names[f] for f in free}
        changes.append("linear: " + ", ".join(f"{k} -> {val}" for k, val in linear.items()))
        known = N if known is None else min(known, N)
        g, delta, T, d2 = _decompose(comps, chart, idx, alpha_full)
        if d2 != d:
            raise ArithmeticError("linear change altered d")

    # Tschirnhaus: complete the d-th power in v
    delta_deg = sum(delta)
    prec = N - delta_deg - (d - 1)
    rounds = 0
    for _ in range(N + 2):
        coeffs, tt = _v_expansion(T[main], v, d)
        a = coeffs[d - 1].truncate(prec) if prec >= 0 else Polynomial.zero(n)
        if not a:
            break
        shift = a.mul(unit_inverse(tt.scale(d), N).poly, N)
        sub = [Polynomial.variable(i, n) for i in range(n)]
        sub[v] = sub[v] - shift
        comps = [substitute(c, sub, N).truncate(N) for c in comps]
        images = [substitute(p, sub, N).truncate(N) for p in images]
        known = N
        rounds += 1
        g, delta, T, d2 = _decompose(comps, chart, idx, alpha_full)
        if d2 != d:
            raise ArithmeticError("Tschirnhaus substitution altered d")
    else:
        raise ArithmeticError("could not remove a_{2,d-1}")
    if rounds:
        changes.append(f"{names[v]}' = {names[v]} + a/(d*T~) (completing the {d}th power, "
                       f"{rounds} rounds)")
    a_map, tilde = {}, {}
    for i, t in T.items():
        parts, tt = _v_expansion(t, v, d)
        tilde[i] = tt
        for j in range(d):
            a_map[(i, j)] = parts[j]
    if prec >= 0:
        a_map[(main, d - 1)] = a_map[(main, d - 1)].truncate(prec)
    return WeierstrassData(MorphismChart(chart, tuple(comps), known), idx,
                           chart.e_exponent(alpha_full), delta, g, T, d, v, main,
                           a_map, tilde, tuple(images), changes, linear, c0)


def d_invariant(w: WeierstrassData):
    return w.d


# --- prepared normal form ----------------------------------------------------------------

@dataclass
class PreparedData:
    weierstrass: WeierstrassData
    kind: str                   # 2-point | 1-point-generic | 1-point-non-generic
    r: dict                     # (i, j) -> exponent on exceptional coordinates
    s: dict                     # (i, j) -> exponent of w (1-points)
    beta: tuple
    i0: int
    w: int | None = None

    ok = True

    def __bool__(self):
        return True

    @property
    def J(self) -> list:
        return sorted(self.r)

    def to_json(self) -> dict:
        names = self.weierstrass.chart.names
        out = {"prepared": True, "kind": self.kind, "beta": list(self.beta), "i0": self.i0 + 1,
               "r": {f"{i + 1},{j}": list(e) for (i, j), e in sorted(self.r.items())}}
        if self.w is not None:
            out["w"] = names[self.w]
            out["s"] = {f"{i + 1},{j}": e for (i, j), e in sorted(self.s.items())}
        return out


@dataclass
class NotPrepared:
    reason: str

    ok = False

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        return {"prepared": False, "reason": self.reason}


def check_prepared(w: WeierstrassData):
    """Prepared normal form test on Weierstrass data (unit multiples accepted)."""
    if not (2 <= w.d < INF) or w.v is None:
        return NotPrepared("needs 0 < rho < inf")
    chart = w.chart
    n = chart.n
    exc = chart.exceptional_indices
    others = w.other_free()
    if len(exc) == 2 and not others:
        kind, wv = "2-point", None
    elif len(exc) == 1 and len(others) <= 1:
        kind, wv = "1-point", (others[0] if others else None)
    else:
        return NotPrepared(f"unsupported point type ({len(exc)} exceptional, {len(others)} extra free)")
    allowed = set(exc) | ({wv} if wv is not None else set())
    r, s = {}, {}
    for (i, j), a in sorted(w.a.items()):
        if j == 0 or not a:
            continue
        mu = _monomial_unit(a)
        if mu is None:
            return NotPrepared(f"a_{i + 1},{j} is not a monomial times a unit")
        e = mu[0]
        if any(e[x] for x in range(n) if x not in allowed):
            return NotPrepared(f"a_{i + 1},{j} involves a non-adapted coordinate")
        r[(i, j)] = chart.e_exponent(e)
        if wv is not None:
            s[(i, j)] = e[wv]
    a0 = {i: w.a[(i, 0)] for i in w.T}
    beta, i0 = None, None
    for i in sorted(a0):
        a = a0[i]
        mu = _monomial_unit(a) if a else None
        if mu is None:
            continue
        e = mu[0]
        if kind == "2-point":
            if any(e[x] for x in range(n) if x not in exc):
                continue
        else:
            if wv is None or e[wv] != 1 or any(e[x] for x in range(n) if x not in allowed):
                continue
        cand = chart.e_exponent(e)
        full = chart.e_monomial(cand)
        if all(all(all(t[h] >= full[h] for h in exc) for t in b.terms) for b in a0.values()):
            beta, i0 = cand, i
            break
    if beta is None:
        return NotPrepared("no a_i0 of the form u^beta" + (" w" if kind != "2-point" else "")
                           + " dividing all a_i0")
    if kind == "2-point":
        db = tuple(x + y for x, y in zip(w.delta, beta))
        if qlinear_rank([w.alpha, db]) < 2:
            return NotPrepared("delta + beta is linearly dependent on alpha")
    else:
        kind = "1-point-non-generic" if any(s.values()) else "1-point-generic"
    return PreparedData(w, kind, r, s, beta, i0, wv)


# --- auxiliary ideals H, G, J -----------------------------------------------------------

def H_G_ideals(w: WeierstrassData):
    """(H_i, G generators) from d(u^alpha) ^ d(u^delta a_i0) in the log basis of (v=0)."""
    chart = w.chart
    n = chart.n
    N = w.morphism.known_degree or chart.truncation_degree
    exc = chart.exceptional_indices
    if w.v is None or w.delta is None:
        raise ValueError("Weierstrass data with a distinguished coordinate is required")
    shift = tuple(x + y for x, y in zip(chart.e_monomial(w.alpha), chart.e_monomial(w.delta)))
    H = {}
    others = w.other_free()
    for i in sorted(w.T):
        a = w.a[(i, 0)]
        if len(exc) == 1:
            if not others:
                h = Polynomial.zero(n)
            else:
                h = a.diff(others[0]).scale(w.alpha[0])
        elif len(exc) == 2:
            u1, u2 = exc
            a1, a2 = w.alpha
            d1, d2 = w.delta
            h = (a.scale(d2) + a.log_diff(u2)).scale(a1) - (a.scale(d1) + a.log_diff(u1)).scale(a2)
        else:
            raise ValueError("H is defined at 1- and 2-points")
        H[i] = h.shift_monomial(shift).truncate(N)
    prod = Polynomial.one(n)
    for (i, j), a in sorted(w.a.items()):
        if j >= 1 and a:
            prod = prod.mul(a, N)
    G = [prod.mul(h, N) for h in H.values() if h]
    return H, G


def iota(G, divisor=None):
    """Rounds of point blowups principalizing the monomial ideal G, or None if undecidable."""
    gens = [g for g in G if g]
    if not gens:
        return None
    try:
        ideal, _ = monomialize(gens)
    except Undecidable:
        return None
    if divisor is None:
        divisor = sorted({i for e in ideal.generators for i, x in enumerate(e) if x})
    return newton_principalize(ideal, divisor).depth()


def J_ideal(w: WeierstrassData) -> MonomialIdeal:
    """m^d + sum u^{alpha_ik} m^{k - alpha_ik} at a 1-point with ord(T) < d."""
    chart = w.chart
    n = chart.n
    exc = chart.exceptional_indices
    if len(exc) != 1:
        raise ValueError("J is defined at 1-points")
    if not (w.d < INF):
        raise ValueError("d is infinite")
    d = int(w.d)
    mu = w.order_T
    if mu >= d:
        raise ValueError("J needs ord(T) < d")
    u = exc[0]
    gens = [e for e in _monomials_up_to(n, d) if sum(e) == d]
    for i in sorted(w.T):
        t = w.T[i]
        for k in range(int(mu), d):
            part = t.homogeneous_part(k)
            if not part:
                continue
            a = min(e[u] for e in part.terms)
            for e in _monomials_up_to(n, k - a):
                if sum(e) == k - a:
                    f = list(e)
                    f[u] += a
                    gens.append(tuple(f))
    return MonomialIdeal(tuple(gens), n, tuple(range(n)))


@dataclass
class DeclaredData:
    divisor: tuple              # coordinate indices of D
    ideal: MonomialIdeal
    kind: str

    def to_json(self, names) -> dict:
        return {"kind": self.kind, "divisor": [names[i] for i in self.divisor],
                "ideal": self.ideal.format(names)}


def declared_ideal(p: PreparedData) -> DeclaredData:
    w = p.weierstrass
    chart = w.chart
    n = chart.n
    exc = chart.exceptional_indices
    v = w.v
    d = int(w.d)
    nongeneric = p.kind == "1-point-non-generic"
    gens = [_unit_vec(v, n, d)]
    for (i, j), e in sorted(p.r.items()):
        f = list(chart.e_monomial(e))
        f[v] += j
        if nongeneric:
            f[p.w] += p.s[(i, j)]
        gens.append(tuple(f))
    b = list(chart.e_monomial(p.beta))
    if nongeneric:
        b[p.w] += 1
    gens.append(tuple(b))
    div = set(exc) | {v}
    if nongeneric:
        div.add(p.w)
    div = tuple(sorted(div))
    return DeclaredData(div, MonomialIdeal(tuple(gens), n, div), p.kind)
