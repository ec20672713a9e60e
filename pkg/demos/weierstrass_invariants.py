"""d, rho and the auxiliary ideals on small plane and space examples.

    python demos/weierstrass_invariants.py
"""

from logres.charts import MorphismChart
from logres.invariants import (H_G_ideals, J_ideal, check_prepared, declared_ideal, iota, rho,
                               to_weierstrass)

UV = (["u", "v"], [True, False])

print("plane examples sigma = (u^2, u^3 T):")
for T in ["v", "v^2+v^3", "v^3+u*v", "v^4+u*v^2", "u"]:
    m = MorphismChart.from_strings(*UV, ["u^2", f"u^3*({T})"])
    w = to_weierstrass(m)
    line = f"  T = {T:10} d = {w.d!s:4} rho = {rho(m)!s:4}"
    if 2 <= w.d < float("inf") and w.order_T < w.d:
        line += f" J = {J_ideal(w).format(UV[0])}"
    print(line)

print("\nthe basic example at its origin:")
m = MorphismChart.from_strings(["u", "v", "w"], [True, False, False],
                               ["u^2", "u^3*(v^2+u*w)", "u^4*v"])
w = to_weierstrass(m)
p = check_prepared(w)
H, G = H_G_ideals(w)
print(f"  d = {w.d}, rho = {rho(m)}, kind = {p.kind}, beta = {p.beta}")
print(f"  H = {[w.chart.format(h) for h in H.values()]}, G = {[w.chart.format(g) for g in G]}, "
      f"iota = {iota(G)}")
decl = declared_ideal(p)
print(f"  declared ideal {decl.ideal.format(m.chart.names)} "
      f"w.r.t. {[m.chart.names[i] for i in decl.divisor]}")
