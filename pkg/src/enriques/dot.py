"""Deterministic DOT rendering of cluster diagrams.

The drawing encodes exactly the combinatorial content: the rooted tree with
an edge style per proximity class (solid for free points, bold for
satellite points, which traditionally sit on straight half-lines), node
fills for cluster membership and an optional annotation per node.  One
overlay subgraph per cluster lists its members, so graphical tools can
select them; points in no cluster stay hollow.
"""

from __future__ import annotations

from typing import Sequence

from .arena import ArenaTree, PointId
from .cluster import WeightedCluster, WeightKind
from .morphism import compute

_FILLS = ["lightgray", "black", "dimgray", "lightblue", "tan"]


def _quote(s: str) -> str:
    return '"%s"' % s.replace('"', '\\"')


def render_dot(
    tree: ArenaTree,
    clusters: Sequence[tuple[str, WeightedCluster]] = (),
    annotate: str = "none",
) -> str:
    """Render the arena with overlay clusters as DOT text.

    ``annotate`` is ``"none"``, ``"weights"`` (weights of every overlay
    containing the node) or ``"mn"`` (height quotients of the first
    virtual overlay, written m/n).
    """
    inv = None
    if annotate == "mn":
        for _, cluster in clusters:
            if cluster.kind is WeightKind.VIRTUAL:
                inv = compute(cluster)
                break
        if inv is None:
            raise ValueError("mn annotation needs a virtual cluster overlay")

    def node_name(p: PointId) -> str:
        return tree.label(p) or f"n{p}"

    lines = ["digraph cluster_diagram {", "  rankdir=TB;",
             "  node [shape=circle, fontsize=10];"]
    for p in tree.points():
        attrs = []
        label = node_name(p)
        if annotate == "weights":
            marks = [str(c.weight[p]) for _, c in clusters if p in c]
            if marks:
                label += "\\n" + "/".join(marks)
        elif annotate == "mn":
            n, m = inv.extend_to(p)
            label += f"\\n{m}/{n}"
        attrs.append(f"label={_quote(label)}")
        membership = [i for i, (_, c) in enumerate(clusters) if p in c]
        if membership:
            attrs.append("style=filled")
            attrs.append(f"fillcolor={_FILLS[membership[0] % len(_FILLS)]}")
        lines.append(f"  {_quote(node_name(p))} [{', '.join(attrs)}];")
    for p in tree.points():
        parent = tree.parent(p)
        if parent is None:
            continue
        style = "bold" if tree.is_satellite(p) else "solid"
        lines.append(
            f"  {_quote(node_name(parent))} -> {_quote(node_name(p))}"
            f" [style={style}];")
    for i, (name, cluster) in enumerate(clusters):
        lines.append(f"  subgraph overlay_{i} {{")
        lines.append(f"    label={_quote(name)};")
        for p in sorted(cluster.points):
            lines.append(f"    {_quote(node_name(p))};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
