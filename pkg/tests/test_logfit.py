import random
import time

import sympy
from hypothesis import given, settings, strategies as st

from generators import monomial_like, random_center
from logres.charts import MorphismChart, blowup
from logres.logfit import (fitting_ideal, fitting_summary, log_jacobian, log_rank_at_origin,
                           minors, verify_fitting_transform)
from logres.monomial import monomialize
from logres.pipeline import load_scenario

from conftest import SCENARIOS

EX1 = MorphismChart.from_strings(["u", "v", "w"], [True, False, False],
                                 ["u^2", "u^3*(v^2+u*w)", "u^4*v"])


def _sympy_minor_ideal(m, size):
    """Oracle: the same minors through sympy determinants."""
    syms = sympy.symbols(m.chart.names)
    exprs = [sympy.sympify(m.chart.format(c).replace("^", "**"),
                           locals=dict(zip(m.chart.names, syms))) for c in m.components]
    rows = []
    for e in exprs:
        rows.append([sympy.expand(s * sympy.diff(e, s)) if f else sympy.diff(e, s)
                     for s, f in zip(syms, m.chart.exceptional)])
    mat = sympy.Matrix(rows)
    from itertools import combinations
    out = set()
    for r in combinations(range(mat.rows), size):
        for c in combinations(range(mat.cols), size):
            d = sympy.expand(mat.extract(list(r), list(c)).det())
            if d != 0:
                out.add(d)
    return out


def _as_sympy(m, polys):
    syms = sympy.symbols(m.chart.names)
    loc = dict(zip(m.chart.names, syms))
    return {sympy.expand(sympy.sympify(m.chart.format(p).replace("^", "**"), locals=loc))
            for p in polys}


def test_log_jacobian_of_the_basic_example():
    jac = log_jacobian(EX1)
    assert jac.shape == (3, 3)
    assert [EX1.chart.format(e) for e in jac.entries[0]] == ["2*u^2", "0", "0"]
    assert [EX1.chart.format(e) for e in jac.entries[2]] == ["4*u^4*v", "u^4", "0"]
    assert log_rank_at_origin(EX1) == 0


def test_fitting_ideals_of_the_basic_example():
    start = time.perf_counter()
    f0 = fitting_summary(EX1, 0)
    f1 = fitting_summary(EX1, 1)
    f2 = fitting_summary(EX1, 2)
    assert time.perf_counter() - start < 1.0
    assert f0["staircase"] == ["u^10"] and f0["principal_monomial"]
    assert f1["staircase"] == ["u^5*v", "u^6"] and not f1["principal_monomial"]
    assert f1["monomial"] == "u^5" and f1["residual_order"] == 1
    assert f2["staircase"] == ["u^2"] and f2["principal_monomial"]


def test_minors_match_the_sympy_oracle():
    rng = random.Random(11)
    for _ in range(15):
        m = monomial_like(rng, extra=0.8)
        jac = log_jacobian(m).entries
        for size in range(1, m.n + 1):
            ours = {v for _, _, v in minors(jac, size)}
            assert _as_sympy(m, ours) == _sympy_minor_ideal(m, size)


def test_second_example_fitting_ideals():
    m, _ = load_scenario(SCENARIOS / "example2.json")
    start = time.perf_counter()
    f0, f3, f4 = (fitting_summary(m, k) for k in (0, 3, 4))
    assert time.perf_counter() - start < 10.0
    assert f0["principal_monomial"] and f0["staircase"] == [f0["monomial"]]
    assert f4["principal_monomial"] and f4["staircase"] == ["u^2"]
    assert not f3["principal_monomial"]
    # witness: every residual generator vanishes at the origin
    assert f3["residual_order"] > 0


def test_zero_fitting_ideal():
    m = MorphismChart.from_strings(["u", "v"], [True, False], ["u", "u^2"])
    assert fitting_ideal(m, 0).is_zero()
    assert monomialize([], (0,), 2)[0].is_zero()


@settings(max_examples=40)
@given(st.integers(0, 10_000))
def test_transform_laws_on_random_blowups(seed):
    rng = random.Random(seed)
    m = monomial_like(rng)
    center = random_center(rng, m.chart)
    if center is None:
        return
    for c in verify_fitting_transform(m, blowup(m.chart, center)):
        assert c.verdict in ("pass", "undecidable"), (m.formatted(), center, c)
