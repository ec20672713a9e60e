"""Logarithmic Jacobians, their minors and log Fitting ideals."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .algebra import Polynomial, format_monomial, qlinear_rank
from .charts import BlowupStep, MorphismChart, pullback_morphism
from .monomial import Undecidable, monomialize, principal_exponent, residual_factor


@dataclass(frozen=True)
class LogJacobian:
    entries: tuple     # N rows of n Polynomials

    @property
    def shape(self):
        return len(self.entries), (len(self.entries[0]) if self.entries else 0)

    def at_origin(self) -> list:
        return [[e.constant_term() for e in row] for row in self.entries]


def log_jacobian(m: MorphismChart) -> LogJacobian:
    flags = m.chart.exceptional
    rows = []
    for s in m.components:
        rows.append(tuple(s.log_diff(j) if flags[j] else s.diff(j) for j in range(m.n)))
    return LogJacobian(tuple(rows))


def minors(matrix, size: int) -> list:
    """All nonzero size x size minors as (rows, cols, value), rows/cols in lex order."""
    rows_n = len(matrix)
    cols_n = len(matrix[0]) if rows_n else 0
    if size == 0:
        return [((), (), Polynomial.one(matrix[0][0].nvars))] if rows_n else []
    if size > rows_n or size > cols_n:
        return []
    memo: dict = {}

    def det(rows: tuple, cols: tuple) -> Polynomial:
        key = (rows, cols)
        if key in memo:
            return memo[key]
        if len(rows) == 1:
            val = matrix[rows[0]][cols[0]]
        else:
            r0, rest = rows[0], rows[1:]
            val = None
            for t, c in enumerate(cols):
                a = matrix[r0][c]
                if not a:
                    continue
                sub = det(rest, cols[:t] + cols[t + 1:])
                if not sub:
                    continue
                term = a * sub
                if t % 2:
                    term = -term
                val = term if val is None else val + term
            if val is None:
                val = Polynomial.zero(matrix[0][0].nvars)
        memo[key] = val
        return val

    out = []
    for rows in combinations(range(rows_n), size):
        for cols in combinations(range(cols_n), size):
            v = det(rows, cols)
            if v:
                out.append((rows, cols, v))
    return out


@dataclass(frozen=True)
class FittingIdeal:
    k: int
    generators: tuple
    labels: tuple = ()    # (rows, cols) of each generator

    def is_zero(self) -> bool:
        return not self.generators


def fitting_ideal(m: MorphismChart, k: int) -> FittingIdeal:
    n = m.n
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must lie in [0, {n - 1}]")
    jac = log_jacobian(m).entries
    found = minors(jac, n - k) if jac else []
    return FittingIdeal(k, tuple(v for _, _, v in found), tuple((r, c) for r, c, _ in found))


def log_rank_at_origin(m: MorphismChart) -> int:
    mat = log_jacobian(m).at_origin()
    return qlinear_rank(mat) if mat else 0


def fitting_summary(m: MorphismChart, k: int) -> dict:
    """Generators plus principality data, as used by the command line."""
    f = fitting_ideal(m, k)
    chart = m.chart
    exc = chart.exceptional_indices
    p = principal_exponent(f.generators, exc)
    mu, residual = residual_factor(list(f.generators), exc)
    out = {
        "k": k,
        "generators": [chart.format(g) for g in f.generators],
        "principal_monomial": p is not None,
        "monomial": format_monomial(mu, chart.names) if mu is not None else "0",
        "residual": [chart.format(r) for r in residual],
        # 0 iff principal; a positive value witnesses that every residual vanishes at 0
        "residual_order": min((r.order() for r in residual), default=None),
    }
    try:
        ideal, _ = monomialize(list(f.generators), exc, m.n)
        out["staircase"] = ideal.format(chart.names)
    except Undecidable:
        out["staircase"] = None
    return out


@dataclass
class TransformCheck:
    child: str
    k: int
    law: str          # "F0" or "combinatorial"
    verdict: str      # pass | fail | undecidable
    lhs: list | None = None
    rhs: list | None = None


def verify_fitting_transform(m: MorphismChart, step: BlowupStep) -> list:
    """Check the Fitting-ideal transform laws of a blowup on every child chart.

    F0 of the pullback equals exc^l times the pulled-back F0, and for a
    combinatorial blowup every F_k pulls back exactly.  Both sides are compared
    as monomial ideals; anything that does not monomialize is undecidable.
    """
    parent = m.chart
    exc = parent.exceptional_indices
    before = {}
    for k in range(m.n):
        try:
            before[k] = monomialize(list(fitting_ideal(m, k).generators), exc, m.n)[0]
        except Undecidable:
            before[k] = None
    checks = []
    for idx, ch in enumerate(step.children):
        pm = pullback_morphism(m, step, idx)
        w = ch.chart_variable
        name = parent.names[w]
        ks = range(m.n) if step.combinatorial else [0]
        for k in ks:
            law = "combinatorial" if k else "F0"
            src = before[k]
            try:
                after = monomialize(list(fitting_ideal(pm, k).generators),
                                    ch.chart.exceptional_indices, m.n)[0]
            except Undecidable:
                after = None
            if src is None or after is None:
                checks.append(TransformCheck(name, k, law, "undecidable"))
                continue
            expect = src.blowup_exponents(step.center, w)
            if k == 0:
                shift = [0] * m.n
                shift[w] = step.l
                expect = expect.times(shift)
            ok = expect.generators == after.generators
            checks.append(TransformCheck(name, k, law, "pass" if ok else "fail",
                                         after.format(ch.chart.names),
                                         expect.format(ch.chart.names)))
    return checks
