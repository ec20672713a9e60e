import json
import time

import pytest

from logres.algebra import parse_polynomial, substitute
from logres.pipeline import (PipelineConfig, ScopeError, dump_report, exit_code, load_scenario,
                             probe_points, run_scenario, validate)
from logres.charts import ChartTree

from conftest import GOLDEN, SCENARIOS


@pytest.mark.parametrize("name", ["example1", "example2"])
def test_golden_reports_are_bit_exact(name):
    report = run_scenario(SCENARIOS / f"{name}.json")
    assert dump_report(report) == (GOLDEN / f"{name}_report.json").read_text()


def test_example1_resolution():
    start = time.perf_counter()
    report = run_scenario(SCENARIOS / "example1.json")
    assert time.perf_counter() - start < 5.0
    assert report["status"] == "pass" and exit_code(report) == 0
    assert report["centers"] == [{"chart": "root", "center": ["u", "v"]},
                                 {"chart": "root/v", "center": ["u", "v"]}]
    assert all(v for v in report["checks"].values())
    examined = report["leaves"] + report["probes"]
    assert len(report["probes"]) == 20
    assert all(e["rho"] == 0 and e["hp"]["status"] == "certified" for e in examined)
    locus = report["trace"][0]["center_locus"]
    assert locus["in_max_locus"] is True and len(locus["samples"]) == 3


def test_example2_is_out_of_scope():
    report = run_scenario(SCENARIOS / "example2.json")
    assert report["status"] == "error" and exit_code(report) == 1
    assert "at most 3 variables" in report["message"]


def test_probes_are_seeded_and_on_the_divisor():
    m, _ = load_scenario(SCENARIOS / "example1.json")
    tree = ChartTree(m)
    tree.blow_up(tree.root, ["u", "v"])
    a = [(lf.path, p) for lf, p in probe_points(tree, 12, 3)]
    b = [(lf.path, p) for lf, p in probe_points(tree, 12, 3)]
    assert a == b
    for (path, point) in a:
        chart = tree.find(path).chart
        assert any(point[i] == 0 for i in chart.exceptional_indices)


def test_validate_rejects_non_principal_F0():
    m, _ = load_scenario({"variables": [{"name": "u", "exceptional": True}, {"name": "v"}],
                          "components": ["u", "v^2"]})
    with pytest.raises(ScopeError):
        validate(m)


def test_scenario_errors():
    with pytest.raises(ValueError):
        load_scenario({"variables": [{"name": "u"}]})


def test_tree_to_root_maps_back():
    report = run_scenario(SCENARIOS / "example1.json", PipelineConfig(probes=0, certify=False))
    node = report["tree"]
    assert node["path"] == "root"
    names = [v["name"] for v in report["scenario"]["variables"]]
    comps = report["scenario"]["components"]

    def walk(nd):
        yield nd
        for ch in nd.get("children", []):
            yield from walk(ch)
    seen = 0
    for nd in walk(node):
        if "to_root" not in nd:
            continue
        seen += 1
        vars_ = nd["variables"]
        images = [parse_polynomial(t, vars_) for t in nd["to_root"]]
        pulled = [substitute(parse_polynomial(c, names), images) for c in comps]
        here = [parse_polynomial(c, vars_) for c in nd["components"]]
        N = nd.get("known_degree")
        if N is not None:
            pulled = [p.truncate(N) for p in pulled]
            here = [p.truncate(N) for p in here]
        assert pulled == here, nd["path"]
    assert seen == 4


def test_report_is_json_roundtrippable(tmp_path):
    report = run_scenario(SCENARIOS / "example1.json", PipelineConfig(probes=2, certify=False))
    out = tmp_path / "r.json"
    dump_report(report, out)
    assert json.loads(out.read_text()) == report
