"""Three-step driver lowering rho to 0 in dimension <= 3, with post-checks,
probe points and a JSON report."""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import INF, Polynomial, Rational, format_rational, substitute
from .charts import ChartNode, ChartTree, MorphismChart, blowup, recenter
from .hp import hp_verify
from .invariants import (H_G_ideals, J_ideal, check_prepared, declared_ideal, iota, rho,
                         to_weierstrass)
from .logfit import fitting_summary, log_rank_at_origin, verify_fitting_transform
from .monomial import StepCapExceeded, newton_principalize

log = logging.getLogger(__name__)

REPORT_VERSION = 1


class PipelineError(RuntimeError):
    """A post-check failed or the input left the supported range."""


class ScopeError(PipelineError):
    """The input is outside what the driver accepts."""


@dataclass
class PipelineConfig:
    probes: int = 20
    seed: int = 0
    step_cap: int = 64
    max_rounds: int = 32
    certify: bool = True


def _json_value(x):
    if x == INF:
        return "inf"
    return int(x)


def _fmt_point(point) -> list:
    return [format_rational(Rational(p)) for p in point]


# --- scenarios ------------------------------------------------------------------------

def load_scenario(source) -> tuple[MorphismChart, dict]:
    """Scenario from a path or a dict; returns the root morphism and the raw data."""
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            data = json.load(fh)
    else:
        data = dict(source)
    try:
        variables = data["variables"]
        components = data["components"]
    except KeyError as exc:
        raise ValueError(f"scenario is missing {exc.args[0]!r}") from None
    names = [v["name"] if isinstance(v, dict) else str(v) for v in variables]
    flags = [bool(v.get("exceptional", False)) if isinstance(v, dict) else False
             for v in variables]
    trunc = int(data.get("truncation_degree", 16))
    m = MorphismChart.from_strings(names, flags, components, trunc)
    return m, data


def config_from(data: dict, **overrides) -> PipelineConfig:
    cfg = PipelineConfig()
    probes = data.get("probes")
    if isinstance(probes, int):
        cfg.probes = probes
    if "seed" in data:
        cfg.seed = int(data["seed"])
    for k, v in overrides.items():
        if v is not None:
            setattr(cfg, k, v)
    return cfg


def origin_summary(m: MorphismChart) -> dict:
    """Log rank, Fitting ideals and rho at the origin of a chart."""
    out = {"log_rank": log_rank_at_origin(m), "fitting": []}
    for k in range(m.n):
        f = fitting_summary(m, k)
        out["fitting"].append({"k": k, "principal_monomial": f["principal_monomial"],
                               "monomial": f["monomial"], "staircase": f["staircase"],
                               "residual_order": f["residual_order"],
                               "generators": len(f["generators"])})
    out["rho"] = _json_value(rho(m))
    return out


def validate(m: MorphismChart) -> None:
    """Reject inputs the driver does not handle."""
    if m.n > 3:
        raise ScopeError(f"resolve handles at most 3 variables (got {m.n}); "
                         f"use the invariants commands instead")
    summary = origin_summary(m)
    fit = {f["k"]: f for f in summary["fitting"]}
    for k in (0, m.n - 1):
        if not fit[k]["principal_monomial"]:
            raise ScopeError(f"F_{k} is not a principal monomial ideal at the origin; "
                             f"the input must be preprocessed")


# --- the driver -------------------------------------------------------------------------

@dataclass
class PipelineState:
    tree: ChartTree
    config: PipelineConfig
    trace: list = field(default_factory=list)
    cache: dict = field(default_factory=dict)
    history: list = field(default_factory=list)    # max rho before each round

    def rho_at(self, node: ChartNode):
        key = node.path
        if key not in self.cache:
            self.cache[key] = rho(node.morphism)
        return self.cache[key]

    def leaves(self) -> list:
        return sorted(self.tree.leaves(), key=lambda nd: nd.path)

    def max_rho(self):
        return max((self.rho_at(nd) for nd in self.leaves()), default=0)

    def center_locus(self, node: ChartNode, top, samples: int = 3) -> dict:
        """rho at seeded rational points of the center, compared with the value being reduced.

        Only chart-local: points of the center outside this chart are not examined.
        """
        chart = node.chart
        center = {chart.names.index(c) for c in node.center}
        rest = [i for i in range(chart.n) if i not in center]
        if not rest:
            return {"samples": [], "in_max_locus": True}
        if node.morphism.known_degree is not None:
            return {"samples": [], "in_max_locus": "origin only"}
        rng = random.Random(f"{self.config.seed}:{node.path}")
        out = []
        for _ in range(samples):
            point = [Rational(0)] * chart.n
            for i in rest:
                point[i] = rng.choice(_POOL)
            out.append({"point": _fmt_point(point),
                        "rho": _json_value(rho(recenter(node.morphism, point)))})
        target = _json_value(top)
        return {"samples": out, "in_max_locus": all(e["rho"] == target for e in out)}

    def log_step(self, step: str, node: ChartNode, tag: str, before, **extra):
        entry = {"step": step, "chart": node.path, "tag": tag, "rho_before": _json_value(before)}
        if node.center is not None:
            entry["center"] = list(node.center)
            entry["center_locus"] = self.center_locus(node, before)
        entry.update(extra)
        self.trace.append(entry)
        return entry


def _descendant_leaves(node: ChartNode) -> list:
    if node.is_leaf():
        return [node]
    out = []
    for ch in node.children:
        out.extend(_descendant_leaves(ch))
    return out


def _mirror(state: PipelineState, node: ChartNode, pnode, tag: str) -> None:
    """Replay a principalization tree on the chart tree."""
    if pnode.center is None:
        return
    names = node.chart.names
    if len(node.path.split("/")) > state.config.step_cap:
        raise StepCapExceeded(f"step cap exceeded at {node.path}")
    children = state.tree.blow_up(node, [names[i] for i in pnode.center], tag)
    for pch in pnode.children:
        w = names[pch.path[-1]]
        child = next(c for c in children if c.chart_variable == w)
        _mirror(state, child, pch, tag)


def _weierstrass_node(state: PipelineState, node: ChartNode, w) -> ChartNode:
    """Attach a coordinate-change node when the Weierstrass coordinates differ."""
    n = node.chart.n
    ident = tuple(Polynomial.variable(i, n) for i in range(n))
    if w.images is None or tuple(w.images) == ident:
        return node
    N = w.morphism.known_degree or node.chart.truncation_degree
    comps = tuple(substitute(c, w.images, N).truncate(N) for c in node.morphism.components)
    m = MorphismChart(node.chart, comps, N)
    child = state.tree.change_coordinates(node, m, tuple(w.images), tag="Weierstrass coordinates")
    state.cache[child.path] = state.rho_at(node)
    return child


def step1_finite_rho(state: PipelineState) -> bool:
    """Blow up 2-curves at leaves whose origin has rho = inf."""
    acted = False
    for node in state.leaves():
        r = state.rho_at(node)
        if r != INF:
            continue
        chart = node.chart
        exc = chart.exceptional_indices
        if len(exc) < 2:
            raise PipelineError(f"rho is infinite at a {len(exc)}-point ({node.path}); "
                                f"outside the supported range")
        center = [chart.names[i] for i in exc[:2]]
        state.tree.blow_up(node, center, "2-curve blowup where rho is infinite")
        after = {ch.path: _json_value(state.rho_at(ch)) for ch in node.children}
        state.log_step("finite-rho", node, "2-curve blowup where rho is infinite", r, rho_after=after)
        acted = True
    return acted


def _iota_of(w):
    try:
        _, G = H_G_ideals(w)
    except ValueError:
        return None
    return iota(G)


def step2_prepare(state: PipelineState, node: ChartNode, w, r) -> None:
    """Blowups towards prepared normal form at a max-rho origin."""
    chart = node.chart
    exc = chart.exceptional_indices
    io = _iota_of(w)
    node = _weierstrass_node(state, node, w)
    names = chart.names
    if len(exc) == 2:
        tag = "2-curve blowup towards prepared form"
        state.tree.blow_up(node, [names[i] for i in exc], tag)
    elif len(exc) == 1 and w.order_T >= w.d:
        tag = "point blowup towards prepared form (ord T = d)"
        state.tree.blow_up(node, list(names), tag)
    elif len(exc) == 1:
        tag = "point blowup and J principalization towards prepared form"
        J = J_ideal(w)
        children = state.tree.blow_up(node, list(names), tag)
        step = blowup(chart, list(names))
        for ch in children:
            wv = names.index(ch.chart_variable)
            pulled = J.blowup_exponents(step.center, wv)
            tree = newton_principalize(pulled, tuple(range(chart.n)), state.config.step_cap)
            _mirror(state, ch, tree, "J principalization")
    else:
        raise PipelineError(f"cannot prepare a {len(exc)}-point at {node.path}")
    leaves = _descendant_leaves(node)
    after = {}
    for lf in leaves:
        ra = state.rho_at(lf)
        after[lf.path] = _json_value(ra)
        if ra > r:
            raise PipelineError(f"rho increased from {r} to {ra} at {lf.path}")
    iota_after = {}
    for lf in leaves:
        if state.rho_at(lf) == r and 0 < r < INF:
            try:
                iota_after[lf.path] = _iota_of(to_weierstrass(lf.morphism))
            except (ValueError, ArithmeticError):
                iota_after[lf.path] = None
    descent = all(io is not None and v is not None and v < io for v in iota_after.values())
    if iota_after and not descent:
        log.info("iota proxy did not descend at %s", node.path)
    state.log_step("prepare", node, tag, r, rho_after=after, iota_before=io,
                   iota_after=iota_after, iota_descent=descent)


def step3_decrease(state: PipelineState, node: ChartNode, p, r) -> None:
    """Principalize the declared ideal combinatorially with respect to D."""
    w = p.weierstrass
    D = declared_ideal(p)
    chart = node.chart
    names = chart.names
    if D.ideal.is_principal():
        raise PipelineError(f"declared ideal is principal while rho = {r} at {node.path}")
    node = _weierstrass_node(state, node, w)
    tag = "declared-ideal principalization"
    if p.kind in ("2-point", "1-point-non-generic"):
        center = [names[i] for i in D.divisor]
        children = state.tree.blow_up(node, center, "point blowup at a non-generic point")
        step = blowup(chart, center)
        for ch in children:
            wv = names.index(ch.chart_variable)
            pulled = D.ideal.blowup_exponents(step.center, wv)
            tree = newton_principalize(pulled, D.divisor, state.config.step_cap)
            _mirror(state, ch, tree, tag)
    else:
        tree = newton_principalize(D.ideal, D.divisor, state.config.step_cap)
        _mirror(state, node, tree, tag)
    after = {}
    for lf in _descendant_leaves(node):
        ra = state.rho_at(lf)
        after[lf.path] = _json_value(ra)
        if not ra < r:
            raise PipelineError(f"rho did not drop below {r} at {lf.path} after "
                                f"principalizing the declared ideal")
    state.log_step("decrease", node, tag, r, kind=p.kind, declared=D.to_json(names),
                   rho_after=after)


def resolve3d(state: PipelineState) -> PipelineState:
    history = state.history
    for _ in range(state.config.max_rounds):
        top = state.max_rho()
        history.append(top)
        if len(history) > 1 and history[-1] > history[-2]:
            raise PipelineError("maximum rho increased")
        if top == 0:
            return state
        if step1_finite_rho(state):
            continue
        for node in state.leaves():
            r = state.rho_at(node)
            if r != top:
                continue
            try:
                w = to_weierstrass(node.morphism)
            except (ValueError, ArithmeticError) as exc:
                raise PipelineError(f"no Weierstrass form at {node.path}: {exc}") from exc
            p = check_prepared(w)
            if p:
                step3_decrease(state, node, p, r)
            else:
                step2_prepare(state, node, w, r)
    raise PipelineError(f"rho still positive after {state.config.max_rounds} rounds")


# --- probes and certificates --------------------------------------------------------------

_POOL = [Rational(p, q) for q in (1, 2, 3) for p in range(-3, 4) if p]


def probe_points(tree: ChartTree, count: int, seed: int) -> list:
    """Seeded rational points on the divisor of the leaf charts known exactly."""
    rng = random.Random(seed)
    leaves = sorted((nd for nd in tree.leaves() if nd.morphism.known_degree is None),
                    key=lambda nd: nd.path)
    if not leaves:
        return []
    out = []
    for i in range(count):
        leaf = leaves[i % len(leaves)]
        chart = leaf.chart
        exc = list(chart.exceptional_indices)
        zeros = set()
        if exc:
            k = rng.randint(1, len(exc))
            zeros = set(rng.sample(exc, k))
        point = []
        for j in range(chart.n):
            if j in zeros:
                point.append(Rational(0))
            elif chart.exceptional[j]:
                point.append(rng.choice(_POOL))
            else:
                point.append(rng.choice(_POOL + [Rational(0)]))
        out.append((leaf, point))
    return out


def _certify(m: MorphismChart) -> dict:
    cert = hp_verify(m)
    return cert.to_json()


def examine_points(state: PipelineState) -> tuple[list, list]:
    cfg = state.config
    leaves = []
    for nd in state.leaves():
        entry = {"chart": nd.path, "exceptional": [nd.chart.names[i]
                                                  for i in nd.chart.exceptional_indices],
                 "rho": _json_value(state.rho_at(nd))}
        if cfg.certify:
            entry["hp"] = _certify(nd.morphism)
        leaves.append(entry)
    probes = []
    for leaf, point in probe_points(state.tree, cfg.probes, cfg.seed):
        m = recenter(leaf.morphism, point)
        entry = {"chart": leaf.path, "point": _fmt_point(point),
                 "exceptional": [m.chart.names[i] for i in m.chart.exceptional_indices],
                 "rho": _json_value(rho(m))}
        if cfg.certify:
            entry["hp"] = _certify(m)
        probes.append(entry)
    return leaves, probes


def transform_checks(tree: ChartTree) -> list:
    out = []
    for nd in tree.nodes():
        if nd.center is None:
            continue
        step = blowup(nd.chart, list(nd.center))
        for c in verify_fitting_transform(nd.morphism, step):
            out.append({"chart": nd.path, "child": c.child, "k": c.k, "law": c.law,
                        "verdict": c.verdict})
    return out


def annotate(state: PipelineState) -> None:
    """Record rho and d on every node of the tree."""
    for nd in state.tree.nodes():
        note = {"rho": _json_value(state.rho_at(nd)),
                "point": f"{nd.chart.s}-point" if nd.chart.s else "off-divisor"}
        try:
            w = to_weierstrass(nd.morphism)
            note["d"] = _json_value(w.d)
        except (ValueError, ArithmeticError):
            note["d"] = None
        nd.note = note


def run_scenario(source, config: PipelineConfig | None = None, **overrides) -> dict:
    """Resolve a scenario and return the report (status pass, undecidable or error)."""
    m, data = load_scenario(source)
    cfg = config or config_from(data, **overrides)
    report = {
        "report_version": REPORT_VERSION,
        "scenario": {"variables": [{"name": nm, "exceptional": f}
                                   for nm, f in zip(m.chart.names, m.chart.exceptional)],
                     "components": m.formatted(),
                     "truncation_degree": m.chart.truncation_degree},
        "config": {"probes": cfg.probes, "seed": cfg.seed, "step_cap": cfg.step_cap},
        "origin": origin_summary(m),
    }
    try:
        validate(m)
    except ScopeError as exc:
        report.update(status="error", message=str(exc))
        return report
    state = PipelineState(ChartTree(m), cfg)
    try:
        resolve3d(state)
    except (PipelineError, StepCapExceeded) as exc:
        annotate(state)
        report.update(status="error", message=str(exc), trace=state.trace,
                      tree=state.tree.to_json())
        return report
    annotate(state)
    leaves, probes = examine_points(state)
    laws = transform_checks(state.tree)
    centers = [{"chart": nd.path, "center": list(nd.center)}
               for nd in state.tree.nodes() if nd.center is not None]
    examined = leaves + probes
    rho_zero = all(e["rho"] == 0 for e in examined)
    certified = all(e.get("hp", {}).get("status") == "certified" for e in examined) \
        if cfg.certify else None
    laws_failed = any(c["verdict"] == "fail" for c in laws)
    laws_undecided = any(c["verdict"] == "undecidable" for c in laws)
    checks = {"rho_zero_at_examined_points": rho_zero, "hp_certified": certified,
              "transform_laws": "undecidable" if laws_undecided and not laws_failed
              else not laws_failed,
              "max_rho_trace_monotone": all(a >= b for a, b in zip(state.history,
                                                                   state.history[1:]))}
    if not rho_zero or certified is False or laws_failed:
        status = "error"
    elif laws_undecided:
        status = "undecidable"
    else:
        status = "pass"
    report.update(status=status, blowups=state.tree.blowup_count, centers=centers,
                  trace=state.trace, leaves=leaves, probes=probes, transform_laws=laws,
                  checks=checks, tree=state.tree.to_json())
    return report


def exit_code(report: dict) -> int:
    return {"pass": 0, "undecidable": 2}.get(report.get("status"), 1)


def dump_report(report: dict, path=None) -> str:
    text = json.dumps(report, indent=2, sort_keys=False) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
