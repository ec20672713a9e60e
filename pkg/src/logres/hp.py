"""Hsiang-Pati coordinates: certificates, Fitting exponents and module membership.

A certificate lists exponents alpha_i (components u^alpha_i) and beta_j with
free coordinates v_j (components u^beta_j * v_j) whose differentials generate
the module spanned by the differentials of the morphism's components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (Polynomial, Rational, _row_reduce, compose, format_monomial, format_polynomial,
                      format_rational, invert_map, least_norm_solution, qlinear_rank,
                      solve_linear, unit_fractional_power)
from .charts import Chart, MorphismChart
from .logfit import fitting_ideal
from .monomial import principal_exponent


# --- logarithmic 1-forms ---------------------------------------------------------

@dataclass(frozen=True)
class LogForm:
    """Coefficients against du_i/u_i (exceptional) and dv_j (free), one per chart variable."""
    coefficients: tuple

    @property
    def nvars(self):
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def __add__(self, other):
        return LogForm(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def scale(self, p: Polynomial, degree=None) -> "LogForm":
        return LogForm(tuple(p.mul(c, degree) for c in self.coefficients))

    def format(self, chart: Chart) -> list:
        return [chart.format(c) for c in self.coefficients]


def log_differential(p: Polynomial, chart: Chart) -> LogForm:
    return LogForm(tuple(p.log_diff(j) if chart.exceptional[j] else p.diff(j)
                         for j in range(chart.n)))


@dataclass
class Membership:
    status: str                    # member | non-member | inconclusive
    coefficients: list | None = None
    obstruction_degree: int | None = None
    degree: int | None = None

    def __bool__(self):
        return self.status == "member"


def _monomials_up_to(nvars: int, degree: int):
    if degree < 0:
        return []
    out = []

    def rec(prefix, left, i):
        if i == nvars - 1:
            for k in range(left + 1):
                out.append(tuple(prefix + [k]))
            return
        for k in range(left + 1):
            rec(prefix + [k], left - k, i + 1)

    if nvars == 0:
        return [()]
    rec([], degree, 0)
    return out


def membership_in_module(form: LogForm, generators: Sequence[LogForm],
                         degree: int | None = None) -> Membership:
    """Decide whether form = sum c_i * generators[i] with polynomial c_i.

    The coefficient equations are solved in increasing total degree up to
    ``degree`` (default: the largest degree occurring in ``form``).  An
    inconsistency at degree t is a definite obstruction, since higher terms of
    the c_i cannot reach degree t.  A consistent system whose solution does not
    reproduce ``form`` exactly is reported as inconclusive.
    """
    n = form.nvars
    gens = [g for g in generators]
    if form.is_zero():
        return Membership("member", [Polynomial.zero(n) for _ in gens], degree=degree)
    if degree is None:
        degree = max(c.degree() for c in form.coefficients)
    unknowns = []
    for i, g in enumerate(gens):
        o = min((c.order() for c in g.coefficients), default=float("inf"))
        if o == float("inf") or o > degree:
            continue
        for mono in _monomials_up_to(n, degree - int(o)):
            unknowns.append((i, mono))
    col = {u: k for k, u in enumerate(unknowns)}
    equations: dict = {}
    for (i, mono) in unknowns:
        k = col[(i, mono)]
        for j, c in enumerate(gens[i].coefficients):
            for t, a in c.items():
                mu = tuple(x + y for x, y in zip(mono, t))
                if sum(mu) > degree:
                    continue
                row = equations.setdefault((j, mu), {})
                row[k] = row.get(k, 0) + a
    for j, c in enumerate(form.coefficients):
        for mu in c.terms:
            if sum(mu) <= degree:
                equations.setdefault((j, mu), {})
    order = sorted(equations, key=lambda key: (sum(key[1]), key[0], key[1]))
    pivots: dict = {}    # pivot column -> (row dict, rhs)
    for key in order:
        j, mu = key
        row = {k: v for k, v in equations[key].items() if v}
        rhs = Rational(form.coefficients[j].coefficient(mu))
        while True:
            hit = next((k for k in row if k in pivots), None)
            if hit is None:
                break
            prow, prhs = pivots[hit]
            f = row[hit]
            for k2, v2 in prow.items():
                nv = row.get(k2, 0) - f * v2
                if nv:
                    row[k2] = nv
                else:
                    row.pop(k2, None)
            rhs -= f * prhs
        if not row:
            if rhs:
                return Membership("non-member", obstruction_degree=sum(mu), degree=degree)
            continue
        p = min(row)
        inv = 1 / row[p]
        row = {k: v * inv for k, v in row.items()}
        rhs *= inv
        # keep pivot rows reduced against the new pivot
        for q, (qrow, qrhs) in list(pivots.items()):
            if p in qrow:
                f = qrow[p]
                nrow = dict(qrow)
                for k2, v2 in row.items():
                    nv = nrow.get(k2, 0) - f * v2
                    if nv:
                        nrow[k2] = nv
                    else:
                        nrow.pop(k2, None)
                pivots[q] = (nrow, qrhs - f * rhs)
        pivots[p] = (row, rhs)
    sol = [Rational(0)] * len(unknowns)
    for p, (row, rhs) in pivots.items():
        sol[p] = rhs    # free columns are zero, rows are fully reduced
    coeffs = [Polynomial.zero(n) for _ in gens]
    for k, (i, mono) in enumerate(unknowns):
        if sol[k]:
            coeffs[i] = coeffs[i] + Polynomial.monomial(mono, sol[k])
    total = [Polynomial.zero(n) for _ in range(n)]
    for c, g in zip(coeffs, gens):
        for j in range(n):
            total[j] = total[j] + c * g.coefficients[j]
    exact = all(t == f for t, f in zip(total, form.coefficients))
    return Membership("member" if exact else "inconclusive", coeffs, degree=degree)


# --- certificates ------------------------------------------------------------------

@dataclass
class HPCertificate:
    names: tuple                 # final coordinate names
    exceptional: tuple           # exceptional coordinate names
    alphas: list                 # exponent vectors on exceptional coordinates
    betas: list                  # (exponent vector, free coordinate name)
    order: list                  # merged order: ("alpha", i) or ("beta", j)
    gammas: list                 # Fitting exponents gamma_1..gamma_n
    components: list             # component index used for each element of ``order``
    coordinate_changes: list
    truncation_degree: int
    betas_dependent: bool        # each beta in the span of the preceding alphas

    ok = True

    def __bool__(self):
        return True

    def merged(self) -> list:
        return [self.alphas[i] if kind == "alpha" else self.betas[i][0] for kind, i in self.order]

    def to_json(self) -> dict:
        ex = self.exceptional

        def mono(v):
            return format_monomial(v, ex)

        items = []
        for (kind, i), comp in zip(self.order, self.components):
            if kind == "alpha":
                items.append({"kind": "alpha", "exponent": list(self.alphas[i]),
                              "form": f"d({mono(self.alphas[i])})", "component": comp})
            else:
                b, v = self.betas[i]
                m = mono(b)
                form = f"d({v})" if m == "1" else f"d({m}*{v})"
                items.append({"kind": "beta", "exponent": list(b), "variable": v,
                              "form": form, "component": comp})
        return {
            "status": "certified",
            "generators": items,
            "gammas": [list(g) for g in self.gammas],
            "coordinate_changes": list(self.coordinate_changes),
            "verified_to_degree": self.truncation_degree,
            "betas_dependent_on_preceding_alphas": self.betas_dependent,
        }


@dataclass
class HPFailure:
    condition: str
    detail: str = ""

    ok = False

    def __bool__(self):
        return False

    def to_json(self) -> dict:
        return {"status": "failed", "condition": self.condition, "detail": self.detail}


class HPExtractionError(ValueError):
    pass


def fitting_gammas(m: MorphismChart):
    """gamma_m with F_{n-m} = (u^gamma_m), or the first k at which principality fails."""
    chart = m.chart
    exc = chart.exceptional_indices
    out = []
    for mm in range(1, m.n + 1):
        k = m.n - mm
        p = principal_exponent(fitting_ideal(m, k).generators, exc)
        if p is None:
            return out, k
        out.append(chart.e_exponent(p))
    return out, None


def hp_fitting_exponents(cert: HPCertificate) -> list:
    """gamma_m = sum of the first m exponents in the merged order."""
    acc = None
    out = []
    for v in cert.merged():
        acc = tuple(v) if acc is None else tuple(a + b for a, b in zip(acc, v))
        out.append(acc)
    return out


def _ordered(vectors) -> bool:
    return all(all(a <= b for a, b in zip(x, y)) for x, y in zip(vectors, vectors[1:]))


@dataclass
class HPState:
    names: list
    flags: tuple
    components: list            # Polynomials in the current coordinates
    degree: int
    gammas: list
    alphas: list = field(default_factory=list)
    betas: list = field(default_factory=list)       # (exponent, variable index)
    order: list = field(default_factory=list)
    used: list = field(default_factory=list)
    changes: list = field(default_factory=list)

    @property
    def k(self) -> int:
        return len(self.order)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def exc(self) -> tuple:
        return tuple(i for i, f in enumerate(self.flags) if f)

    def full(self, e_vec) -> tuple:
        out = [0] * self.n
        for i, a in zip(self.exc, e_vec):
            out[i] = a
        return tuple(out)

    def e_part(self, exps) -> tuple:
        return tuple(exps[i] for i in self.exc)


def _dependency_test(state: HPState):
    """Predicate: a term exponent lies in the span of the current generators and
    dominates all of their exceptional exponents."""
    rows = [state.full(a) for a in state.alphas]
    for b, q in state.betas:
        r = list(state.full(b))
        r[q] += 1
        rows.append(tuple(r))
    tops = list(state.alphas) + [b for b, _ in state.betas]
    if not rows:
        return lambda e: not any(e)
    red, piv = _row_reduce(rows)
    red = red[:len(piv)]

    def polynomial_in_generators(e) -> bool:
        # e is a sum of generator exponents: the term is a monomial in earlier components
        if not any(e):
            return True
        return any(all(x >= y for x, y in zip(e, r))
                   and polynomial_in_generators(tuple(x - y for x, y in zip(e, r)))
                   for r in rows if any(r))

    def dependent(e) -> bool:
        ee = state.e_part(e)
        if not all(all(x >= y for x, y in zip(ee, t)) for t in tops):
            return any(e) and polynomial_in_generators(tuple(e))
        v = [Rational(x) for x in e]
        for row, c in zip(red, piv):
            if v[c]:
                f = v[c]
                v = [a - f * b for a, b in zip(v, row)]
        return not any(v)

    return dependent


def _split_dependent(p: Polynomial, dependent) -> tuple[Polynomial, Polynomial]:
    g, rest = {}, {}
    for e, c in p.items():
        (g if dependent(e) else rest)[e] = c
    return Polynomial(g, p.nvars), Polynomial(rest, p.nvars)


def _prime(name: str) -> str:
    return name + "'"


def hp_extract_step(state: HPState) -> HPState:
    """Add the next generator: a new alpha (unit quotient) or a new beta (new free coordinate)."""
    k = state.k
    if k >= len(state.gammas):
        raise HPExtractionError("all generators already extracted")
    prev = state.gammas[k - 1] if k else tuple(0 for _ in state.exc)
    e = tuple(a - b for a, b in zip(state.gammas[k], prev))
    if any(x < 0 for x in e):
        raise HPExtractionError("Fitting exponents are not increasing")
    dependent = _dependency_test(state)
    full_e = state.full(e)
    n, N = state.n, state.degree
    if sum(full_e) >= N:
        raise HPExtractionError(f"truncation degree {N} does not exceed the degree of "
                                f"step {k + 1} ({sum(full_e)})")
    used_vars = {q for _, q in state.betas}
    free = [i for i in range(n) if not state.flags[i] and i not in used_vars]
    for idx, comp in enumerate(state.components):
        if idx in state.used:
            continue
        _, rest = _split_dependent(comp, dependent)
        if not rest:
            continue
        S, rem = rest.divide_monomial(full_e)
        if rem:
            continue
        c0 = S.constant_term()
        if c0 and qlinear_rank(state.alphas + [e]) > qlinear_rank(state.alphas):
            return _apply_alpha(state, idx, e, S)
        if not c0:
            for q in free:
                lin = S.coefficient(tuple(1 if i == q else 0 for i in range(n)))
                if lin:
                    return _apply_beta(state, idx, e, S, q, lin)
    raise HPExtractionError(f"no component realizes the Fitting exponent step {k + 1}")


def _rebuild(state: HPState, **changes) -> HPState:
    data = dict(names=list(state.names), flags=state.flags, components=list(state.components),
                degree=state.degree, gammas=state.gammas, alphas=list(state.alphas),
                betas=list(state.betas), order=list(state.order), used=list(state.used),
                changes=list(state.changes))
    data.update(changes)
    return HPState(**data)


def _apply_alpha(state: HPState, idx: int, e: tuple, S: Polynomial) -> HPState:
    n, N = state.n, state.degree
    c0 = S.constant_term()
    S1 = S.scale(1 / c0)
    alphas = state.alphas + [e]
    names = list(state.names)
    changes = list(state.changes)
    comps = list(state.components)
    if S1 != 1:
        eps = least_norm_solution(alphas, [0] * (len(alphas) - 1) + [1])
        forward = [Polynomial.variable(i, n) for i in range(n)]
        powers = {}

        def power(q):
            if q not in powers:
                powers[q] = unit_fractional_power(S1, q, N).poly
            return powers[q]

        old_names = list(names)
        for h, eh in zip(state.exc, eps):
            if eh:
                forward[h] = power(eh).mul(forward[h], N)
                names[h] = _prime(names[h])
                changes.append(f"{names[h]} = ({format_polynomial(S1, old_names)})^"
                               f"({format_rational(eh)})*{old_names[h]}")
        for b, q in state.betas:
            t = -sum(Rational(x) * y for x, y in zip(b, eps))
            if t:
                forward[q] = power(t).mul(forward[q], N)
                names[q] = _prime(names[q])
                changes.append(f"{names[q]} = ({format_polynomial(S1, old_names)})^"
                               f"({format_rational(t)})*{old_names[q]}")
        inverse = invert_map(forward, N)
        comps = compose(comps, inverse, N)
    return _rebuild(state, names=names, components=comps, alphas=alphas,
                    order=state.order + [("alpha", len(state.alphas))],
                    used=state.used + [idx], changes=changes)


def _apply_beta(state: HPState, idx: int, e: tuple, S: Polynomial, q: int, lin) -> HPState:
    n, N = state.n, state.degree
    target = S.scale(1 / lin)
    names = list(state.names)
    changes = list(state.changes)
    comps = list(state.components)
    if target != Polynomial.variable(q, n):
        forward = [Polynomial.variable(i, n) for i in range(n)]
        forward[q] = target.truncate(N)
        old = list(names)
        names[q] = _prime(names[q])
        changes.append(f"{names[q]} = {format_polynomial(target, old)}")
        comps = compose(comps, invert_map(forward, N), N)
    return _rebuild(state, names=names, components=comps,
                    betas=state.betas + [(e, q)],
                    order=state.order + [("beta", len(state.betas))],
                    used=state.used + [idx], changes=changes)


def _hp_member(state: HPState, p: Polynomial) -> tuple[bool, str]:
    """Structural membership of dp in the module of the extracted generators."""
    n, N = state.n, state.degree
    flags = state.flags
    limit = N - 1
    form = [(p.log_diff(j) if flags[j] else p.diff(j)).truncate(limit) for j in range(n)]
    beta_of = {q: b for b, q in state.betas}
    exc = state.exc
    # dv_q coefficients must come from the beta generators
    correction = [Polynomial.zero(n) for _ in exc]
    for j in range(n):
        if flags[j]:
            continue
        if j not in beta_of:
            if form[j]:
                return False, f"d{state.names[j]} coefficient is nonzero"
            continue
        b = state.full(beta_of[j])
        c, rem = form[j].divide_monomial(b)
        if rem:
            return False, f"d{state.names[j]} coefficient not divisible by u^beta"
        base = c.mul(Polynomial.monomial(b), limit).mul(Polynomial.variable(j, n), limit)
        for t, h in enumerate(exc):
            bh = beta_of[j][t]
            if bh:
                correction[t] = correction[t] + base.scale(bh)
    rest = [form[h] - correction[t] for t, h in enumerate(exc)]
    alphas = state.alphas
    monos = set()
    for r in rest:
        monos.update(r.terms)
    for mu in monos:
        if sum(mu) > limit:
            continue
        vec = [r.coefficient(mu) for r in rest]
        if not any(vec):
            continue
        if not alphas:
            return False, "logarithmic part without alpha generators"
        try:
            lam = solve_linear([[a[t] for a in alphas] for t in range(len(exc))], vec)
        except ValueError:
            return False, f"term {format_monomial(mu, state.names)} outside the alpha span"
        for a, l in zip(alphas, lam):
            if l and not all(x >= y for x, y in zip(state.e_part(mu), a)):
                return False, f"term {format_monomial(mu, state.names)} not divisible by u^alpha"
    return True, ""


def hp_verify(m: MorphismChart, degree: int | None = None):
    """Find Hsiang-Pati coordinates at the origin, or report the first failed condition."""
    chart = m.chart
    N = degree or chart.truncation_degree
    if m.known_degree is not None:
        N = min(N, m.known_degree)
    gammas, bad = fitting_gammas(m)
    if bad is not None:
        return HPFailure(f"F_{bad} is not a principal monomial ideal",
                         "the residual of the Fitting ideal vanishes at the origin")
    zero = tuple(0 for _ in chart.exceptional_indices)
    incs = []
    prev = zero
    for g in gammas:
        incs.append(tuple(a - b for a, b in zip(g, prev)))
        prev = g
    if any(x < 0 for v in incs for x in v):
        return HPFailure("Fitting exponents decrease", str(gammas))
    if not _ordered(incs):
        return HPFailure("exponents are not totally ordered", str(incs))
    comps = [(c - c.constant_term()).truncate(N) for c in m.components]
    state = HPState(list(chart.names), chart.exceptional, comps, N, gammas)
    try:
        while state.k < m.n:
            state = hp_extract_step(state)
    except HPExtractionError as exc:
        return HPFailure("generator extraction failed", str(exc))
    if qlinear_rank(state.alphas) != len(state.alphas):
        return HPFailure("alpha exponents are linearly dependent")
    for idx, comp in enumerate(state.components):
        ok, why = _hp_member(state, comp)
        if not ok:
            return HPFailure(f"d(sigma_{idx + 1}) is not in the generated module", why)
    exc_names = tuple(state.names[i] for i in state.exc)
    dep = True
    seen_alphas = []
    for kind, i in state.order:
        if kind == "alpha":
            seen_alphas.append(state.alphas[i])
        elif qlinear_rank(seen_alphas + [state.betas[i][0]]) > qlinear_rank(seen_alphas):
            dep = False
    return HPCertificate(
        names=tuple(state.names), exceptional=exc_names,
        alphas=[tuple(a) for a in state.alphas],
        betas=[(tuple(b), state.names[q]) for b, q in state.betas],
        order=list(state.order), gammas=[tuple(g) for g in gammas],
        components=[i + 1 for i in state.used],
        coordinate_changes=state.changes, truncation_degree=N, betas_dependent=dep)
