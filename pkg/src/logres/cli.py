"""Command line interface: ``logres <command> ...``.

Exit codes: 0 when every check passes, 2 when something was undecidable,
1 on errors and failed checks.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys

from .algebra import INF, Rational
from .charts import ChartTree, blowup, recenter
from .hp import hp_verify
from .invariants import (H_G_ideals, J_ideal, check_prepared, declared_ideal, iota, rho,
                         to_weierstrass)
from .logfit import fitting_summary, log_rank_at_origin, verify_fitting_transform
from .monomial import MonomialIdeal, newton_principalize
from .pipeline import dump_report, exit_code, load_scenario, run_scenario

EXIT_PASS, EXIT_ERROR, EXIT_UNDECIDABLE = 0, 1, 2


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2) + "\n")


def _point(text: str, n: int) -> list:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise ValueError(f"--at needs {n} coordinates")
    return [Rational(p) for p in parts]


def _morphism(args):
    m, _ = load_scenario(args.scenario)
    if getattr(args, "at", None):
        m = recenter(m, _point(args.at, m.n))
    return m


def _inf(x):
    return "inf" if x == INF else int(x)


def cmd_resolve(args) -> int:
    report = run_scenario(args.scenario, probes=args.probes, seed=args.seed,
                          certify=False if args.no_certify else None)
    text = dump_report(report, args.out)
    if args.out is None:
        sys.stdout.write(text)
    else:
        status = report["status"]
        extra = f": {report['message']}" if report.get("message") else ""
        print(f"{status} ({report.get('blowups', 0)} blowups){extra}", file=sys.stderr)
    return exit_code(report)


def cmd_fitting(args) -> int:
    m = _morphism(args)
    summary = fitting_summary(m, args.k)
    if args.json:
        _emit(summary)
    else:
        for g in summary["generators"]:
            print(g)
    return EXIT_PASS if summary["staircase"] is not None else EXIT_UNDECIDABLE


def cmd_invariants(args) -> int:
    m = _morphism(args)
    names = m.chart.names
    out = {"log_rank": log_rank_at_origin(m),
           "rho": {str(k): _inf(rho(m, k)) for k in range(m.n - 1)},
           "point": f"{m.chart.s}-point" if m.chart.s else "off-divisor"}
    code = EXIT_PASS
    try:
        w = to_weierstrass(m)
    except (ValueError, ArithmeticError) as exc:
        out.update(d=None, weierstrass=None, prepared=False, reason=str(exc))
        _emit(out)
        return EXIT_UNDECIDABLE
    out["d"] = _inf(w.d)
    out["weierstrass"] = w.to_json()
    p = check_prepared(w)
    out["prepared"] = bool(p)
    out["prepared_data"] = p.to_json()
    if w.v is not None:
        H, G = H_G_ideals(w)
        out["H"] = {str(i + 1): w.chart.format(h) for i, h in H.items()}
        out["G"] = [w.chart.format(g) for g in G]
        io = iota(G)
        out["iota"] = io if io is not None else "undecidable"
        if io is None:
            code = EXIT_UNDECIDABLE
        if len(m.chart.exceptional_indices) == 1 and w.order_T < w.d:
            out["J"] = J_ideal(w).format(names)
    if p:
        out["declared"] = declared_ideal(p).to_json(names)
    _emit(out)
    return code


def cmd_blowup(args) -> int:
    m, _ = load_scenario(args.scenario)
    if args.request:
        with open(args.request) as fh:
            center = json.load(fh)["center"]
    else:
        center = [c.strip() for c in args.center.split(",")]
    tree = ChartTree(m)
    tree.blow_up(tree.root, center)
    step = blowup(m.chart, center)
    checks = verify_fitting_transform(m, step)
    out = {"combinatorial": step.combinatorial, "l": step.l, "tree": tree.to_json(),
           "transform_laws": [{"child": c.child, "k": c.k, "law": c.law, "verdict": c.verdict,
                               "lhs": c.lhs, "rhs": c.rhs} for c in checks]}
    _emit(out)
    if any(c.verdict == "fail" for c in checks):
        return EXIT_ERROR
    if any(c.verdict == "undecidable" for c in checks):
        return EXIT_UNDECIDABLE
    return EXIT_PASS


def cmd_verify_hp(args) -> int:
    m = _morphism(args)
    cert = hp_verify(m)
    data = cert.to_json()
    if args.json:
        _emit(data)
    elif cert:
        for g in data["generators"]:
            print(g["form"])
        print("gammas:", " ".join(str(tuple(x)) for x in data["gammas"]))
        for c in data["coordinate_changes"]:
            print("change:", c)
        print(f"verified to degree {data['verified_to_degree']}")
    else:
        print(f"failed: {data['condition']}" + (f" ({data['detail']})" if data["detail"] else ""))
    return EXIT_PASS if cert else EXIT_ERROR


def _names_from(ideal_texts, divisor):
    names = list(divisor)
    for t in ideal_texts:
        for tok in re.findall(r"[A-Za-z_][A-Za-z_0-9]*", t):
            if tok not in names:
                names.append(tok)
    return names


def cmd_principalize(args) -> int:
    texts = [t.strip() for t in args.ideal.split(",") if t.strip()]
    divisor = [d.strip() for d in args.divisor.split(",")] if args.divisor else []
    names = [v.strip() for v in args.vars.split(",")] if args.vars else _names_from(texts, divisor)
    if not divisor:
        divisor = list(names)
    ideal = MonomialIdeal.from_strings(texts, names, divisor)
    tree = newton_principalize(ideal, ideal.divisor, args.step_cap, args.transform)
    leaves = []
    for lf in tree.leaves():
        fmt = lf.ideal.format(names)
        leaves.append({"chart": "/".join(names[i] for i in lf.path) or ".",
                       "monomial": fmt[0] if fmt else "0"})
    _emit({"variables": names, "divisor": divisor, "ideal": ideal.format(names),
           "blowups": tree.blowups(), "depth": tree.depth(), "tree": tree.to_json(names),
           "leaves": leaves})
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="logres", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", help="run the three-step driver on a scenario")
    p.add_argument("scenario")
    p.add_argument("--out")
    p.add_argument("--probes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--no-certify", action="store_true", help="skip HP certificates")
    p.set_defaults(func=cmd_resolve)

    p = sub.add_parser("fitting", help="log Fitting ideal F_k at the origin")
    p.add_argument("scenario")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--at", help="recenter at a rational point first, e.g. 0,1/2,3")
    p.set_defaults(func=cmd_fitting)

    p = sub.add_parser("invariants", help="rho, d, Weierstrass and prepared data")
    p.add_argument("scenario")
    p.add_argument("--at")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("blowup", help="blow up a coordinate center of the root chart")
    p.add_argument("scenario")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--center", help="comma separated variables")
    g.add_argument("--request", help='JSON file {"center": [...]}')
    p.set_defaults(func=cmd_blowup)

    p = sub.add_parser("verify-hp", help="search for Hsiang-Pati coordinates at the origin")
    p.add_argument("scenario")
    p.add_argument("--json", action="store_true")
    p.add_argument("--at")
    p.set_defaults(func=cmd_verify_hp)

    p = sub.add_parser("principalize", help="principalize a monomial ideal by coordinate blowups")
    p.add_argument("--ideal", required=True)
    p.add_argument("--divisor", default="")
    p.add_argument("--vars")
    p.add_argument("--transform", choices=["total", "weak"], default="total")
    p.add_argument("--step-cap", type=int, default=64)
    p.set_defaults(func=cmd_principalize)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"logres: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
