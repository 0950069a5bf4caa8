"""Graphviz DOT rendering of accessibility graphs."""

from __future__ import annotations

from .structure import AccessibilityGraph, ClassDecomposition


def _quote(s: str) -> str:
    return '"{}"'.format(s.replace("\\", "\\\\").replace('"', r"\""))


def graph_to_dot(graph: AccessibilityGraph, dec: ClassDecomposition,
                 name: str = "accessibility") -> str:
    """Deterministic DOT text: nodes in state order, edges in row-major order.

    Maximal classes become clusters; the top class, if any, is labelled and
    its nodes drawn with a double border.
    """
    labels = graph.space.labels
    top = set(dec.top or ())
    in_cluster = {i for c in dec.maximal for i in c}
    lines = [f"digraph {_quote(name)} {{"]

    def node(i, indent):
        shape = "doublecircle" if i in top else "circle"
        return f"{indent}{_quote(labels[i])} [shape={shape}];"

    for c_idx, members in enumerate(dec.maximal):
        is_top = set(members) == top
        lines.append(f"  subgraph cluster_{c_idx} {{")
        lines.append(f"    label={_quote('top class' if is_top else 'maximal class')};")
        lines.extend(node(i, "    ") for i in members)
        lines.append("  }")
    lines.extend(node(i, "  ") for i in range(graph.n) if i not in in_cluster)
    for i, j in graph.edges():
        lines.append(f"  {_quote(labels[i])} -> {_quote(labels[j])};")
    lines.append("}")
    return "\n".join(lines) + "\n"
