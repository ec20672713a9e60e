"""Resolve the three-variable sample and walk through the chart tree.

    python demos/resolve_basic_example.py
"""

from pathlib import Path

from logres.pipeline import run_scenario

SCENARIO = Path(__file__).resolve().parent.parent / "scenarios" / "example1.json"

report = run_scenario(SCENARIO)
print("status:", report["status"], "| blowups:", report["blowups"])
print("origin rho:", report["origin"]["rho"])

print("\nwhat the driver did:")
for step in report["trace"]:
    print(f"  {step['step']} at {step['chart']} ({step['tag']}), declared ideal "
          f"{step['declared']['ideal']} w.r.t. {step['declared']['divisor']}")
    for chart, r in step["rho_after"].items():
        print(f"    rho at {chart} origin -> {r}")


def walk(node, indent=0):
    pad = "  " * indent
    note = node.get("note", {})
    print(f"{pad}{node['path']}: ({', '.join(node['components'])})  "
          f"rho={note.get('rho')} d={note.get('d')} [{note.get('point')}]")
    if "center" in node:
        print(f"{pad}  blow up {node['center']}")
    for ch in node["children"]:
        walk(ch, indent + 1)


print("\nchart tree:")
walk(report["tree"])

print("\nHP certificates at the leaf origins:")
for leaf in report["leaves"]:
    hp = leaf["hp"]
    forms = ", ".join(g["form"] for g in hp["generators"])
    print(f"  {leaf['chart']}: {forms}; changes {hp['coordinate_changes'] or 'none'}")

bad = [p for p in report["probes"] if p["rho"] != 0 or p["hp"]["status"] != "certified"]
print(f"\n{len(report['probes'])} probe points, {len(bad)} without rho = 0 and a certificate")
