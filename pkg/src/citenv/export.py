"""Serialization: ASCII matrices, Pajek ``.net`` documents, SVG scenes.

Every emitter here is deterministic byte for byte: fixed decimal widths,
fixed element order, LF line endings.  The Pajek writer is paired with a
reader so a written document can be parsed back and re-emitted unchanged,
which is what the round-trip tests lean on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .errors import ParseError, ValidationError

# --------------------------------------------------------------------------
# ASCII matrices
# --------------------------------------------------------------------------


def format_ascii_matrix(labels: Sequence[str], matrix: np.ndarray) -> str:
    """Tab-separated matrix: a header row of labels, then label + values.

    Integer matrices print bare integers; anything floating prints with 4
    fractional digits (the precision used for cosines throughout).
    """
    matrix = np.asarray(matrix)
    n = len(labels)
    if matrix.shape != (n, n):
        raise ValidationError(
            f"matrix shape {matrix.shape} does not match {n} labels"
        )
    is_int = np.issubdtype(matrix.dtype, np.integer)

    def cell(value) -> str:
        return str(int(value)) if is_int else f"{float(value):.4f}"

    lines = ["\t".join(["", *labels])]
    for label, row in zip(labels, matrix):
        lines.append("\t".join([label, *(cell(v) for v in row)]))
    return "\n".join(lines) + "\n"


def parse_ascii_matrix(text: str) -> tuple[tuple[str, ...], np.ndarray]:
    """Inverse of :func:`format_ascii_matrix`."""
    lines = [line for line in text.split("\n") if line != ""]
    if not lines:
        raise ParseError("empty matrix document", 1)
    header = lines[0].split("\t")
    if header[0] != "":
        raise ParseError("matrix header must start with an empty cell", 1)
    labels = tuple(header[1:])
    n = len(labels)
    if len(lines) - 1 != n:
        raise ParseError(f"expected {n} rows, found {len(lines) - 1}", len(lines))
    floaty = any("." in line.split("\t", 1)[1] for line in lines[1:] if "\t" in line)
    values = np.zeros((n, n), dtype=float if floaty else np.int64)
    for r, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != n + 1:
            raise ParseError(f"expected {n + 1} cells, found {len(fields)}", r)
        if fields[0] != labels[r - 2]:
            raise ParseError(
                f"row label {fields[0]!r} does not match header {labels[r - 2]!r}", r
            )
        for c, field in enumerate(fields[1:]):
            try:
                values[r - 2, c] = float(field) if floaty else int(field)
            except ValueError:
                raise ParseError(f"bad cell {field!r}", r) from None
    return labels, values


# --------------------------------------------------------------------------
# Pajek .net
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class PajekVertex:
    index: int
    label: str
    x: float
    y: float
    z: float
    shape: str
    x_fact: float
    y_fact: float


@dataclass(frozen=True)
class PajekEdge:
    a: int
    b: int
    weight: float


@dataclass(frozen=True)
class PajekDocument:
    vertices: tuple[PajekVertex, ...]
    edges: tuple[PajekEdge, ...]


def _normalized_positions(positions: np.ndarray) -> np.ndarray:
    """Map coordinates into [0, 1] per axis; degenerate extents center at 0.5."""
    p = np.asarray(positions, dtype=float)
    out = np.full_like(p, 0.5)
    if p.shape[0] == 0:
        return out
    low, high = p.min(axis=0), p.max(axis=0)
    for axis in range(2):
        span = high[axis] - low[axis]
        if span > 0:
            out[:, axis] = (p[:, axis] - low[axis]) / span
    return out


def build_pajek_document(
    labels: Sequence[str],
    positions: np.ndarray,
    geometries,
    edges,
) -> PajekDocument:
    """Assemble the document for one environment map.

    ``geometries`` supplies (h_radius, v_radius) per node in label order;
    ``edges`` are similarity edges whose endpoints are labels.  Vertices
    get the ellipse shape with x_fact = horizontal and y_fact = vertical
    radius; edge weights carry the raw cosine so downstream tools can
    restyle the map.
    """
    index = {label: i + 1 for i, label in enumerate(labels)}
    coords = _normalized_positions(positions)
    vertices = []
    for i, label in enumerate(labels):
        if '"' in label:
            raise ValidationError(f"label {label!r} cannot contain a double quote")
        geo = geometries[i]
        vertices.append(
            PajekVertex(
                index=i + 1,
                label=label,
                x=float(coords[i, 0]),
                y=float(coords[i, 1]),
                z=0.5,
                shape="ellipse",
                x_fact=float(geo.h_radius),
                y_fact=float(geo.v_radius),
            )
        )
    doc_edges = []
    for edge in edges:
        ia, ib = index[edge.a], index[edge.b]
        lo, hi = min(ia, ib), max(ia, ib)
        doc_edges.append(PajekEdge(a=lo, b=hi, weight=float(edge.cosine)))
    doc_edges.sort(key=lambda e: (e.a, e.b))
    return PajekDocument(vertices=tuple(vertices), edges=tuple(doc_edges))


def format_pajek(doc: PajekDocument) -> str:
    """Render a document in the vertex-attribute form Pajek reads directly."""
    lines = [f"*Vertices {len(doc.vertices)}"]
    for v in doc.vertices:
        lines.append(
            f'{v.index} "{v.label}" {v.x:.4f} {v.y:.4f} {v.z:.4f} '
            f"{v.shape} x_fact {v.x_fact:.4f} y_fact {v.y_fact:.4f}"
        )
    lines.append("*Edges")
    for e in doc.edges:
        lines.append(f"{e.a} {e.b} {e.weight:.4f}")
    return "\n".join(lines) + "\n"


def write_pajek(labels, positions, geometries, edges) -> str:
    """Build and render a Pajek document in one step."""
    return format_pajek(build_pajek_document(labels, positions, geometries, edges))


_VERTEX_RE = re.compile(
    r'^\s*(\d+)\s+"([^"]*)"\s+(\S+)\s+(\S+)\s+(\S+)\s+(\S+)'
    r"\s+x_fact\s+(\S+)\s+y_fact\s+(\S+)\s*$"
)
_EDGE_RE = re.compile(r"^\s*(\d+)\s+(\d+)\s+(\S+)\s*$")


def read_pajek(text: str) -> PajekDocument:
    """Parse a document written by :func:`format_pajek` (or a conforming file)."""
    lines = text.split("\n")
    pos = 0

    def current() -> str | None:
        return lines[pos] if pos < len(lines) else None

    while current() is not None and current().strip() == "":
        pos += 1
    line = current()
    if line is None:
        raise ParseError("empty Pajek document", 1)
    match = re.match(r"^\s*\*Vertices\s+(\d+)\s*$", line, flags=re.IGNORECASE)
    if not match:
        raise ParseError("expected *Vertices header", pos + 1)
    count = int(match.group(1))
    pos += 1
    vertices = []
    for _ in range(count):
        line = current()
        if line is None or line.strip().startswith("*"):
            raise ParseError(
                f"vertex count {count} disagrees with vertex lines", pos + 1
            )
        vm = _VERTEX_RE.match(line)
        if not vm:
            raise ParseError(f"bad vertex line: {line!r}", pos + 1)
        try:
            vertices.append(
                PajekVertex(
                    index=int(vm.group(1)),
                    label=vm.group(2),
                    x=float(vm.group(3)),
                    y=float(vm.group(4)),
                    z=float(vm.group(5)),
                    shape=vm.group(6),
                    x_fact=float(vm.group(7)),
                    y_fact=float(vm.group(8)),
                )
            )
        except ValueError:
            raise ParseError(f"bad vertex numbers: {line!r}", pos + 1) from None
        pos += 1
    while current() is not None and current().strip() == "":
        pos += 1
    line = current()
    if line is None or not re.match(r"^\s*\*Edges\s*$", line, flags=re.IGNORECASE):
        raise ParseError("expected *Edges header", pos + 1)
    pos += 1
    edges = []
    while current() is not None:
        line = current()
        if line.strip() == "":
            pos += 1
            continue
        em = _EDGE_RE.match(line)
        if not em:
            raise ParseError(f"bad edge line: {line!r}", pos + 1)
        try:
            edges.append(
                PajekEdge(
                    a=int(em.group(1)), b=int(em.group(2)), weight=float(em.group(3))
                )
            )
        except ValueError:
            raise ParseError(f"bad edge numbers: {line!r}", pos + 1) from None
        pos += 1
    expected = tuple(range(1, count + 1))
    if tuple(v.index for v in vertices) != expected:
        raise ParseError("vertex indices must run densely from 1", 1)
    return PajekDocument(vertices=tuple(vertices), edges=tuple(edges))


# --------------------------------------------------------------------------
# SVG
# --------------------------------------------------------------------------

DEFAULT_STROKE_MIN = 0.5
DEFAULT_STROKE_MAX = 6.0


def edge_stroke_width(
    cosine: float,
    min_cosine: float,
    w_min: float = DEFAULT_STROKE_MIN,
    w_max: float = DEFAULT_STROKE_MAX,
) -> float:
    """Linear width ramp: the retained cosine range maps onto [w_min, w_max]."""
    if min_cosine >= 1.0:
        return w_max
    t = (cosine - min_cosine) / (1.0 - min_cosine)
    return w_min + (w_max - w_min) * t


@dataclass(frozen=True)
class SvgNode:
    label: str
    title: str
    cx: float
    cy: float
    rx: float
    ry: float


@dataclass(frozen=True)
class SvgEdge:
    x1: float
    y1: float
    x2: float
    y2: float
    width: float
    cosine: float


@dataclass(frozen=True)
class SvgScene:
    width: float
    height: float
    nodes: tuple[SvgNode, ...]
    edges: tuple[SvgEdge, ...]


def build_svg_scene(
    labels: Sequence[str],
    titles: Sequence[str],
    positions: np.ndarray,
    geometries,
    edges,
    min_cosine: float,
    canvas: float = 1000.0,
    w_min: float = DEFAULT_STROKE_MIN,
    w_max: float = DEFAULT_STROKE_MAX,
) -> SvgScene:
    """Scene for one map: nodes in member order, edges in given order.

    Layout coordinates are fitted into the canvas with a uniform scale so
    the aspect ratio of the drawing is preserved.
    """
    p = np.asarray(positions, dtype=float)
    margin = 0.08 * canvas
    if p.shape[0]:
        low, high = p.min(axis=0), p.max(axis=0)
        span = np.maximum(high - low, 1e-12)
        scale = float(min((canvas - 2 * margin) / span[0], (canvas - 2 * margin) / span[1]))
        center = (low + high) / 2.0
        fitted = (p - center) * scale + canvas / 2.0
    else:
        fitted = p
    spot = {label: fitted[i] for i, label in enumerate(labels)}
    nodes = tuple(
        SvgNode(
            label=label,
            title=titles[i],
            cx=float(fitted[i, 0]),
            cy=float(fitted[i, 1]),
            rx=float(geometries[i].h_radius),
            ry=float(geometries[i].v_radius),
        )
        for i, label in enumerate(labels)
    )
    scene_edges = tuple(
        SvgEdge(
            x1=float(spot[e.a][0]),
            y1=float(spot[e.a][1]),
            x2=float(spot[e.b][0]),
            y2=float(spot[e.b][1]),
            width=edge_stroke_width(e.cosine, min_cosine, w_min, w_max),
            cosine=e.cosine,
        )
        for e in edges
    )
    return SvgScene(width=canvas, height=canvas, nodes=nodes, edges=scene_edges)


def render_svg(scene: SvgScene) -> str:
    """Well-formed SVG 1.1 text: edges first, then nodes with tooltips."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{scene.width:.0f}" height="{scene.height:.0f}" '
        f'viewBox="0 0 {scene.width:.0f} {scene.height:.0f}">',
        f'<rect width="{scene.width:.0f}" height="{scene.height:.0f}" fill="white"/>',
        '<g stroke="#6a7a8a" stroke-linecap="round">',
    ]
    for e in scene.edges:
        lines.append(
            f'<line x1="{e.x1:.2f}" y1="{e.y1:.2f}" x2="{e.x2:.2f}" '
            f'y2="{e.y2:.2f}" stroke-width="{e.width:.3f}"/>'
        )
    lines.append("</g>")
    lines.append('<g fill="#f4c95d" stroke="#333333" stroke-width="1">')
    for node in scene.nodes:
        lines.append("<g>")
        if node.title:
            lines.append(f"<title>{escape(node.title)}</title>")
        lines.append(
            f'<ellipse cx="{node.cx:.2f}" cy="{node.cy:.2f}" '
            f'rx="{node.rx:.2f}" ry="{node.ry:.2f}"/>'
        )
        lines.append(
            f'<text x="{node.cx:.2f}" y="{node.cy + node.ry + 14.0:.2f}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="12" '
            f'fill="#222222" stroke="none">{escape(node.label)}</text>'
        )
        lines.append("</g>")
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


__all__ = [
    "format_ascii_matrix",
    "parse_ascii_matrix",
    "PajekVertex",
    "PajekEdge",
    "PajekDocument",
    "build_pajek_document",
    "format_pajek",
    "write_pajek",
    "read_pajek",
    "edge_stroke_width",
    "SvgNode",
    "SvgEdge",
    "SvgScene",
    "build_svg_scene",
    "render_svg",
]
