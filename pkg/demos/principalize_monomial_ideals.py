"""Principalize monomial ideals by coordinate blowups and print the trees.

    python demos/principalize_monomial_ideals.py
"""

from logres.monomial import MonomialIdeal, newton_principalize


def show(texts, names):
    ideal = MonomialIdeal.from_strings(texts, names, names)
    tree = newton_principalize(ideal)
    print(f"({', '.join(texts)}): {tree.blowups()} blowups, depth {tree.depth()}")

    def walk(node, indent=1):
        label = "/".join(names[i] for i in node.path) or "."
        line = f"{'  ' * indent}{label}: {node.ideal.format(names)}"
        if node.center is not None:
            line += f"  -> blow up {[names[i] for i in node.center]}"
        print(line)
        for ch in node.children:
            walk(ch, indent + 1)
    walk(tree)
    print()


show(["v^2", "u*v", "u"], ["u", "v"])
show(["u^2*v", "u*v^3"], ["u", "v"])
show(["v^2", "u1*u2^2"], ["u1", "u2", "v"])
show(["x^3", "y^2", "x*y*z"], ["x", "y", "z"])
