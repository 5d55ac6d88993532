"""Deterministic diagram layout and SVG/DOT emission.

Visual vocabulary: propositions are rectangles (merged identity classes are
labeled "p1/p2"), support nodes are solid circles, attack nodes hollow
circles, joint and match nodes circles with a "+". Joint member links are
unarrowed; all other links are arrowed source to target.

Drawing simplifications applied at this layer only (the logical graph is
untouched): a support or attack fed by a match emanates from the matched
general-judgment rectangle rather than from the "+" node, and an attack on a
support points at the support's circle itself.

Layout is layered: expression leaves at the bottom, each relation node one
layer above its deepest feeding node, ultimate targets topmost. Within a
layer, nodes are ordered by the minimum proposition id they contain. The
grid is 120x80 layout units; output is byte-deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .graph import ArgumentGraph, RelationKind, components, merge_identities, prop_node
from .model import prop_ids_of

CELL_W = 120
CELL_H = 80
RECT_W = 96
RECT_H = 44
CIRCLE_D = 28  # diameter


class ShapeKind(Enum):
    RECT = "rect"
    SOLID_CIRCLE = "solid_circle"
    HOLLOW_CIRCLE = "hollow_circle"
    PLUS_CIRCLE = "plus_circle"


@dataclass(frozen=True)
class Shape:
    node: str
    kind: ShapeKind
    label: str
    x: int
    y: int
    w: int
    h: int


@dataclass(frozen=True)
class Link:
    src: str
    dst: str
    arrowed: bool


@dataclass(frozen=True)
class DiagramModel:
    title: str
    shapes: tuple[Shape, ...]
    links: tuple[Link, ...]
    width: int
    height: int
    isolated_panel: bool = False


_KIND_FOR_RELATION = {
    RelationKind.SUPPORT: ShapeKind.SOLID_CIRCLE,
    RelationKind.ATTACK: ShapeKind.HOLLOW_CIRCLE,
    RelationKind.JOINT: ShapeKind.PLUS_CIRCLE,
    RelationKind.MATCH: ShapeKind.PLUS_CIRCLE,
}


def _diagram_links(graph: ArgumentGraph) -> list[Link]:
    """Graph edges with the support-from-general simplification applied."""
    kind_of = {node.name: node.kind for node in graph.relation_nodes}
    # a match's general edge is emitted before any linkage from the match to
    # an enclosing relation, so the first outbound directed edge is the one
    general_target: dict[str, str] = {}
    for edge in graph.edges:
        if edge.directed and kind_of.get(edge.src) is RelationKind.MATCH:
            general_target.setdefault(edge.src, edge.dst)
    links: list[Link] = []
    for edge in graph.edges:
        src = edge.src
        if (
            edge.directed
            and kind_of.get(edge.dst) in (RelationKind.SUPPORT, RelationKind.ATTACK)
            and kind_of.get(src) is RelationKind.MATCH
        ):
            src = general_target.get(src, src)
        links.append(Link(src, edge.dst, arrowed=edge.directed))
    return links


def _layers(node_names: list[str], links: list[Link]) -> dict[str, int]:
    """Longest-path layering; self-referential cycles contribute nothing."""
    preds: dict[str, list[str]] = {name: [] for name in node_names}
    for link in links:
        if link.dst in preds and link.src in preds:
            preds[link.dst].append(link.src)
    for name in preds:
        preds[name] = sorted(set(preds[name]))

    layer: dict[str, int] = {}
    in_progress: set[str] = set()

    def resolve(name: str) -> int:
        if name in layer:
            return layer[name]
        if name in in_progress:
            return -1  # back-edge in a cyclic chain; ignore its contribution
        in_progress.add(name)
        depths = [resolve(p) for p in preds[name]]
        in_progress.discard(name)
        layer[name] = max((d for d in depths), default=-1) + 1
        return layer[name]

    for name in sorted(node_names):
        resolve(name)
    return layer


def _min_prop_id(graph: ArgumentGraph, name: str) -> int:
    if name.startswith("rel_"):
        node = graph.relation_node(int(name[4:]))
        ids = [graph.representative(pid) for pid in prop_ids_of(node.expr)]
        return min(ids) if ids else 0
    return int(name[1:])


def layout(graph: ArgumentGraph) -> list[DiagramModel]:
    """One model per argument component, plus a trailing panel collecting any
    isolated propositions. Identities are merged first."""
    graph = merge_identities(graph)
    all_links = _diagram_links(graph)
    models: list[DiagramModel] = []
    isolated_ids: list[int] = []
    argument_number = 0

    for comp in components(graph):
        if comp.isolated:
            isolated_ids.extend(comp.prop_ids)
            continue
        argument_number += 1
        names = list(comp.nodes())
        name_set = set(names)
        links = [l for l in all_links if l.src in name_set and l.dst in name_set]
        layer = _layers(names, links)
        max_layer = max(layer.values(), default=0)

        by_layer: dict[int, list[str]] = {}
        for name in names:
            by_layer.setdefault(layer[name], []).append(name)
        shapes: list[Shape] = []
        max_cols = 0
        for level, level_names in by_layer.items():
            level_names.sort(key=lambda n: (_min_prop_id(graph, n), n))
            max_cols = max(max_cols, len(level_names))
            y_cell = (max_layer - level) * CELL_H
            for col, name in enumerate(level_names):
                x_cell = col * CELL_W
                shapes.append(_make_shape(graph, name, x_cell, y_cell))
        shapes.sort(key=lambda s: (s.y, s.x))
        links_sorted = tuple(sorted(links, key=lambda l: (l.src, l.dst)))
        models.append(
            DiagramModel(
                title=f"argument {argument_number}",
                shapes=tuple(shapes),
                links=links_sorted,
                width=max_cols * CELL_W,
                height=(max_layer + 1) * CELL_H,
            )
        )

    if isolated_ids:
        shapes = []
        for col, pid in enumerate(sorted(isolated_ids)):
            shapes.append(_make_shape(graph, prop_node(pid), col * CELL_W, 0))
        models.append(
            DiagramModel(
                title="isolated propositions",
                shapes=tuple(shapes),
                links=(),
                width=len(shapes) * CELL_W,
                height=CELL_H,
                isolated_panel=True,
            )
        )
    return models


def _make_shape(graph: ArgumentGraph, name: str, x_cell: int, y_cell: int) -> Shape:
    if name.startswith("rel_"):
        node = graph.relation_node(int(name[4:]))
        kind = _KIND_FOR_RELATION[node.kind]
        label = "+" if kind is ShapeKind.PLUS_CIRCLE else ""
        return Shape(
            name,
            kind,
            label,
            x_cell + (CELL_W - CIRCLE_D) // 2,
            y_cell + (CELL_H - CIRCLE_D) // 2,
            CIRCLE_D,
            CIRCLE_D,
        )
    pid = int(name[1:])
    return Shape(
        name,
        ShapeKind.RECT,
        graph.prop_label(pid),
        x_cell + (CELL_W - RECT_W) // 2,
        y_cell + (CELL_H - RECT_H) // 2,
        RECT_W,
        RECT_H,
    )


# --- SVG --------------------------------------------------------------------

_SVG_MARGIN = 24
_PANEL_GAP = 36
_CAPTION_H = 20


def _center(shape: Shape) -> tuple[float, float]:
    return shape.x + shape.w / 2, shape.y + shape.h / 2


def _boundary_distance(shape: Shape, ux: float, uy: float) -> float:
    """Distance from center to the shape boundary along unit direction (ux, uy)."""
    if shape.kind is ShapeKind.RECT:
        tx = (shape.w / 2) / abs(ux) if ux else float("inf")
        ty = (shape.h / 2) / abs(uy) if uy else float("inf")
        return min(tx, ty)
    return shape.w / 2


def _fmt(value: float) -> str:
    return f"{value:.1f}"


def emit_svg(models: list[DiagramModel]) -> str:
    """Standalone SVG text, byte-deterministic for equal input."""
    if not models:
        return (
            '<svg xmlns="http://www.w3.org/2000/svg" width="40" height="40" '
            'viewBox="0 0 40 40"></svg>\n'
        )
    total_w = max(m.width for m in models) + 2 * _SVG_MARGIN
    total_h = _SVG_MARGIN
    panel_tops: list[int] = []
    for model in models:
        panel_tops.append(total_h)
        total_h += _CAPTION_H + model.height + _PANEL_GAP
    total_h += _SVG_MARGIN - _PANEL_GAP

    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}" '
        f'viewBox="0 0 {total_w} {total_h}" font-family="monospace" font-size="13">'
    )
    out.append(
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="7" '
        'markerHeight="7" orient="auto-start-reverse">'
        '<path d="M 0 0 L 10 5 L 0 10 z"/></marker></defs>'
    )
    for model, top in zip(models, panel_tops):
        out.append(f'<g transform="translate({_SVG_MARGIN},{top})">')
        if model.isolated_panel:
            out.append(
                f'<line x1="0" y1="0" x2="{model.width}" y2="0" stroke="gray" '
                'stroke-dasharray="6,4"/>'
            )
        out.append(f'<text x="0" y="14" fill="gray">{model.title}</text>')
        out.append(f'<g transform="translate(0,{_CAPTION_H})">')
        shapes_by_node = {s.node: s for s in model.shapes}
        for link in model.links:
            out.append(_svg_link(link, shapes_by_node))
        for shape in model.shapes:
            out.append(_svg_shape(shape))
        out.append("</g>")
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _svg_link(link: Link, shapes: dict[str, Shape]) -> str:
    src, dst = shapes[link.src], shapes[link.dst]
    x1, y1 = _center(src)
    x2, y2 = _center(dst)
    dx, dy = x2 - x1, y2 - y1
    length = (dx * dx + dy * dy) ** 0.5
    if length > 0:
        ux, uy = dx / length, dy / length
        t1 = _boundary_distance(src, ux, uy)
        t2 = _boundary_distance(dst, ux, uy)
        if t1 + t2 < length:
            x1, y1 = x1 + ux * t1, y1 + uy * t1
            x2, y2 = x2 - ux * t2, y2 - uy * t2
    marker = ' marker-end="url(#arrow)"' if link.arrowed else ""
    return (
        f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
        f'stroke="black"{marker}/>'
    )


def _svg_shape(shape: Shape) -> str:
    cx, cy = _center(shape)
    if shape.kind is ShapeKind.RECT:
        return (
            f'<rect class="prop" x="{shape.x}" y="{shape.y}" width="{shape.w}" '
            f'height="{shape.h}" fill="white" stroke="black"/>'
            f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" text-anchor="middle" '
            f'dominant-baseline="central">{shape.label}</text>'
        )
    r = shape.w // 2
    if shape.kind is ShapeKind.SOLID_CIRCLE:
        return f'<circle class="support" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{r}" fill="black"/>'
    if shape.kind is ShapeKind.HOLLOW_CIRCLE:
        return (
            f'<circle class="attack" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{r}" '
            'fill="white" stroke="black"/>'
        )
    return (
        f'<circle class="joint-match" cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="{r}" '
        'fill="white" stroke="black"/>'
        f'<text x="{_fmt(cx)}" y="{_fmt(cy)}" text-anchor="middle" '
        f'dominant-baseline="central">{shape.label}</text>'
    )


# --- DOT --------------------------------------------------------------------

_DOT_NODE_ATTRS = {
    ShapeKind.RECT: 'shape=box',
    ShapeKind.SOLID_CIRCLE: 'shape=circle, style=filled, fillcolor=black, fixedsize=true, width=0.3',
    ShapeKind.HOLLOW_CIRCLE: 'shape=circle, fixedsize=true, width=0.3',
    ShapeKind.PLUS_CIRCLE: 'shape=circle, fixedsize=true, width=0.3',
}


def emit_dot(models: list[DiagramModel]) -> str:
    """DOT text mirroring the same visual conventions; one cluster per panel."""
    lines = ["digraph argument_diagram {", "  rankdir=BT;"]
    for number, model in enumerate(models):
        cluster = "cluster_isolated" if model.isolated_panel else f"cluster_{number}"
        lines.append(f"  subgraph {cluster} {{")
        lines.append(f'    label="{model.title}";')
        for shape in model.shapes:
            attrs = _DOT_NODE_ATTRS[shape.kind]
            label = shape.label if shape.kind in (ShapeKind.RECT, ShapeKind.PLUS_CIRCLE) else ""
            lines.append(f'    {shape.node} [{attrs}, label="{label}"];')
        for link in model.links:
            suffix = "" if link.arrowed else " [dir=none]"
            lines.append(f"    {link.src} -> {link.dst}{suffix};")
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
