"""Charts with divisor flags, coordinate blowups and chart trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Polynomial, Rational, format_polynomial, parse_polynomial, substitute


@dataclass(frozen=True)
class Chart:
    names: tuple
    exceptional: tuple
    truncation_degree: int = 16

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "exceptional", tuple(bool(f) for f in self.exceptional))
        if not self.names:
            raise ValueError("a chart needs at least one variable")
        if len(self.names) != len(self.exceptional):
            raise ValueError("one exceptional flag per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def exceptional_indices(self) -> tuple:
        return tuple(i for i, f in enumerate(self.exceptional) if f)

    @property
    def free_indices(self) -> tuple:
        return tuple(i for i, f in enumerate(self.exceptional) if not f)

    @property
    def s(self) -> int:
        return sum(self.exceptional)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown variable {name!r}") from None

    def parse(self, text: str) -> Polynomial:
        return parse_polynomial(text, self.names)

    def format(self, p) -> str:
        return format_polynomial(p, self.names)

    def var(self, name_or_index) -> Polynomial:
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return Polynomial.variable(i, self.n)

    def with_flags(self, flags) -> "Chart":
        return Chart(self.names, tuple(flags), self.truncation_degree)

    def e_exponent(self, exps: Sequence[int]) -> tuple:
        """Restrict a full exponent vector to the exceptional coordinates."""
        return tuple(exps[i] for i in self.exceptional_indices)

    def e_monomial(self, alpha: Sequence[int]) -> tuple:
        """Full exponent vector of u^alpha (alpha indexed by exceptional coordinates)."""
        out = [0] * self.n
        for i, a in zip(self.exceptional_indices, alpha):
            out[i] = a
        return tuple(out)


@dataclass(frozen=True)
class MorphismChart:
    chart: Chart
    components: tuple
    known_degree: int | None = None  # None: components are exact polynomials

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        for c in comps:
            if c.nvars != self.chart.n:
                raise ValueError("component arity differs from the chart")

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def N(self) -> int:
        return len(self.components)

    @classmethod
    def from_strings(cls, names, exceptional, components, truncation_degree=16):
        chart = Chart(tuple(names), tuple(exceptional), truncation_degree)
        return cls(chart, tuple(chart.parse(c) for c in components))

    def formatted(self) -> list:
        return [self.chart.format(c) for c in self.components]


def center_indices(chart: Chart, center: Sequence) -> tuple:
    if not center:
        raise ValueError("empty blowup center")
    idx = []
    for c in center:
        i = c if isinstance(c, int) else chart.index(c)
        if i in idx:
            raise ValueError("repeated center coordinate")
        idx.append(i)
    return tuple(sorted(idx))


@dataclass(frozen=True)
class ChildChart:
    chart: Chart
    images: tuple            # parent variable i -> Polynomial in child variables
    chart_variable: int      # index of the center variable whose chart this is

    def substitution_strings(self, parent: Chart) -> dict:
        return {parent.names[i]: self.chart.format(p) for i, p in enumerate(self.images)}


@dataclass(frozen=True)
class BlowupStep:
    parent: Chart
    center: tuple            # indices into parent variables
    children: tuple

    @property
    def combinatorial(self) -> bool:
        return all(self.parent.exceptional[i] for i in self.center)

    @property
    def l(self) -> int:
        """Number of non-exceptional center coordinates."""
        return sum(1 for i in self.center if not self.parent.exceptional[i])

    def child_for(self, var) -> int:
        i = var if isinstance(var, int) else self.parent.index(var)
        for k, ch in enumerate(self.children):
            if ch.chart_variable == i:
                return k
        raise KeyError(var)


def blowup(chart: Chart, center: Sequence) -> BlowupStep:
    """Blow up the coordinate subspace where the center variables vanish.

    In the w-chart, w stays, each other center variable z becomes w*z, and
    w is flagged exceptional.  Other flags are unchanged.
    """
    idx = center_indices(chart, center)
    n = chart.n
    children = []
    for w in idx:
        images = []
        for i in range(n):
            x = Polynomial.variable(i, n)
            if i in idx and i != w:
                x = x * Polynomial.variable(w, n)
            images.append(x)
        flags = list(chart.exceptional)
        flags[w] = True
        children.append(ChildChart(chart.with_flags(flags), tuple(images), w))
    return BlowupStep(chart, idx, tuple(children))


def is_combinatorial(chart: Chart, center: Sequence) -> bool:
    return all(chart.exceptional[i] for i in center_indices(chart, center))


def pullback_morphism(m: MorphismChart, step: BlowupStep, child: int) -> MorphismChart:
    if step.parent.names != m.chart.names:
        raise ValueError("blowup step does not belong to this chart")
    ch = step.children[child]
    comps = tuple(substitute(c, ch.images) for c in m.components)
    return MorphismChart(ch.chart, comps, m.known_degree)


def recenter(m: MorphismChart, point: Sequence) -> MorphismChart:
    """Move the origin to ``point``; flags survive only where the coordinate vanishes."""
    point = [Rational(p) for p in point]
    if len(point) != m.n:
        raise ValueError("point has the wrong dimension")
    if m.known_degree is not None and any(point):
        raise ValueError("a truncated series cannot be moved away from its origin")
    comps = tuple(c.translate(point) for c in m.components)
    flags = [f and p == 0 for f, p in zip(m.chart.exceptional, point)]
    return MorphismChart(m.chart.with_flags(flags), comps, m.known_degree)


def transition_point(step: BlowupStep, src: int, dst: int, point: Sequence):
    """Coordinates in chart ``dst`` of a point given in chart ``src`` (None off the overlap)."""
    a, b = step.children[src], step.children[dst]
    point = [Rational(p) for p in point]
    orig = [im.evaluate(point) for im in a.images]
    w = b.chart_variable
    if orig[w] == 0:
        return None
    out = list(orig)
    for i in step.center:
        if i != w:
            out[i] = orig[i] / orig[w]
    return out


# --- chart trees -----------------------------------------------------------------

@dataclass
class ChartNode:
    path: str
    morphism: MorphismChart
    parent: "ChartNode | None" = None
    images: tuple | None = None        # parent variables in terms of this chart
    to_root: tuple | None = None       # root variables in terms of this chart
    kind: str = "root"                 # root | blowup-child | coordinates
    center: tuple | None = None        # names, set on the node that was blown up
    chart_variable: str | None = None
    tag: str | None = None
    children: list = field(default_factory=list)
    note: dict = field(default_factory=dict)

    @property
    def chart(self) -> Chart:
        return self.morphism.chart

    def is_leaf(self) -> bool:
        return not self.children

    def depth(self) -> int:
        return 0 if self.parent is None else 1 + self.parent.depth()


class ChartTree:
    """History of blowups starting from one root chart."""

    def __init__(self, morphism: MorphismChart):
        n = morphism.n
        ident = tuple(Polynomial.variable(i, n) for i in range(n))
        self.root = ChartNode("root", morphism, to_root=ident)
        self.blowup_count = 0

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list:
        return [nd for nd in self.nodes() if nd.is_leaf()]

    def find(self, path: str) -> ChartNode:
        for nd in self.nodes():
            if nd.path == path:
                return nd
        raise KeyError(path)

    def blow_up(self, node: ChartNode, center: Sequence, tag: str | None = None) -> list:
        if node.children:
            raise ValueError(f"{node.path} was already transformed")
        step = blowup(node.chart, center)
        node.center = tuple(node.chart.names[i] for i in step.center)
        node.tag = tag
        for k, ch in enumerate(step.children):
            m = pullback_morphism(node.morphism, step, k)
            to_root = tuple(substitute(p, ch.images) for p in node.to_root)
            name = node.chart.names[ch.chart_variable]
            child = ChartNode(f"{node.path}/{name}", m, node, ch.images, to_root,
                              kind="blowup-child", chart_variable=name)
            node.children.append(child)
        self.blowup_count += 1
        return node.children

    def change_coordinates(self, node: ChartNode, morphism: MorphismChart, images: tuple,
                           tag: str | None = None) -> ChartNode:
        """Attach a single child expressing a coordinate change (images: old vars in new)."""
        if node.children:
            raise ValueError(f"{node.path} was already transformed")
        node.tag = tag
        to_root = tuple(substitute(p, images) for p in node.to_root)
        child = ChartNode(f"{node.path}/~", morphism, node, tuple(images), to_root,
                          kind="coordinates")
        node.children.append(child)
        return child

    def to_json(self, node: ChartNode | None = None) -> dict:
        node = node or self.root
        chart = node.chart
        out = {
            "path": node.path,
            "kind": node.kind,
            "variables": list(chart.names),
            "exceptional": [chart.names[i] for i in chart.exceptional_indices],
            "components": node.morphism.formatted(),
        }
        if node.morphism.known_degree is not None:
            out["known_degree"] = node.morphism.known_degree
        if node.parent is not None:
            out["substitution"] = {node.parent.chart.names[i]: chart.format(p)
                                   for i, p in enumerate(node.images)}
            out["to_root"] = [chart.format(p) for p in node.to_root]
        if node.chart_variable is not None:
            out["chart_variable"] = node.chart_variable
        if node.center is not None:
            out["center"] = list(node.center)
        if node.tag is not None:
            out["tag"] = node.tag
        if node.note:
            out["note"] = node.note
        out["children"] = [self.to_json(ch) for ch in node.children]
        return out
