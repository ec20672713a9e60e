import random

from hypothesis import given, settings, strategies as st

from generators import gamma_chain, hp_morphism, make_chart
from logres.algebra import parse_polynomial
from logres.charts import ChartTree, MorphismChart
from logres.hp import (fitting_gammas, hp_fitting_exponents, hp_verify, log_differential,
                       membership_in_module)

EX1 = MorphismChart.from_strings(["u", "v", "w"], [True, False, False],
                                 ["u^2", "u^3*(v^2+u*w)", "u^4*v"])


def test_module_membership():
    chart = make_chart(1, 3)
    d = [log_differential(parse_polynomial(t, chart.names), chart) for t in ("u^2", "w", "u^2*w", "v")]
    member = membership_in_module(d[2], [d[0], d[1]])
    assert member and member.status == "member"
    assert not membership_in_module(d[3], [d[0], d[1]])


def test_origin_of_the_basic_example_is_not_hp():
    fail = hp_verify(EX1)
    assert not fail
    assert fail.condition == "F_1 is not a principal monomial ideal"


def test_u_chart_certificate_uses_the_corrected_change():
    tree = ChartTree(EX1)
    tree.blow_up(tree.root, ["u", "v"])
    u_chart = tree.find("root/u")
    cert = hp_verify(u_chart.morphism)
    assert cert
    data = cert.to_json()
    assert data["coordinate_changes"] == ["w' = u*v^2 + w"]
    assert [g["form"] for g in data["generators"]] == ["d(u^2)", "d(u^4*w')", "d(u^5*v)"]
    assert data["gammas"] == [[2], [6], [11]]


def test_unit_factor_is_absorbed_into_the_exceptional_coordinate():
    cert = hp_verify(MorphismChart.from_strings(["u", "v"], [True, False], ["u^2*(1+v)", "u^3*v"]))
    assert cert
    assert cert.gammas == [(2,), (5,)]


@settings(max_examples=25)
@given(st.integers(0, 100_000))
def test_generated_hp_morphisms_are_certified(seed):
    m, vecs = hp_morphism(random.Random(seed), max_step=1)
    cert = hp_verify(m, 10)
    assert cert, cert.to_json()
    assert hp_fitting_exponents(cert) == fitting_gammas(m)[0] == gamma_chain(vecs)


def test_non_hp_morphism_fails_with_a_reason():
    m = MorphismChart.from_strings(["u", "v"], [True, False], ["u^2", "u^2*v^2"])
    fail = hp_verify(m)
    assert not fail and fail.condition
