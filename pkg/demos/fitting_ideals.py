"""Log Fitting ideals of the two sample morphisms at the origin.

    python demos/fitting_ideals.py
"""

from pathlib import Path

from logres.logfit import fitting_summary, log_jacobian
from logres.pipeline import load_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def show(name):
    m, _ = load_scenario(SCENARIOS / f"{name}.json")
    print(f"== {name}: sigma = ({', '.join(m.formatted())})")
    print("log Jacobian rows:")
    for row in log_jacobian(m).entries:
        print("   ", [m.chart.format(e) for e in row])
    for k in range(m.n):
        f = fitting_summary(m, k)
        if f["principal_monomial"]:
            what = f"principal, ({f['monomial']})"
        elif f["staircase"]:
            what = f"monomial but not principal, staircase {f['staircase']}"
        else:
            what = (f"{f['monomial']} times a residual of order {f['residual_order']} "
                    f"on the divisor")
        print(f"  F_{k}: {what}")
    print()


show("example1")   # F_1 = u^5 (u, v) is the obstruction at the origin
show("example2")   # F_3 fails while F_0 and F_4 are principal
