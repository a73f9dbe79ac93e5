"""SVG figures regenerated from the exact model.

Coordinates stay exact until the final formatting step, where they are
rounded to ``PRECISION`` decimal digits, so output is byte-stable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

from .model import C_ROOT, GasketUnion, LatticeTriangle, build_C, build_E, cells, vertices_B
from .similitude import T, Similitude
from .surd import Point, TriPoint

MAX_DEPTH = 12
PRECISION = 9
WIDTH = 800

STYLE = """\
.gasket { fill: #b5651d; stroke: none; }
.hull { fill: #d9d9d9; stroke: none; }
.image { fill: #2e6fbd; fill-opacity: 0.7; stroke: none; }
.cell { fill: #4d4d4d; stroke: #ffffff; stroke-width: 0.2%; }
.outline { fill: none; stroke: #c0392b; stroke-width: 0.4%; }
.marker { fill: #000000; }
.label { font-family: sans-serif; font-size: 3%; }
"""


@dataclass
class Layer:
    kind: str  # "gasket", "solid", "outline" or "points"
    css: str
    union: GasketUnion | None = None
    depth: int | None = None  # None: use the render depth
    triangles: Sequence[LatticeTriangle] = ()
    points: Sequence[Point] = ()
    labels: Sequence[str] = ()
    offset: Point = Point.of(0, 0)

    def __post_init__(self) -> None:
        if self.kind not in ("gasket", "solid", "outline", "points"):
            raise ValueError(f"unknown layer kind {self.kind!r}")
        if self.depth is not None and not 0 <= self.depth <= MAX_DEPTH:
            raise ValueError(f"layer depth must be in 0..{MAX_DEPTH}")


@dataclass
class Scene:
    layers: list[Layer] = field(default_factory=list)
    title: str = ""

    def add(self, layer: Layer) -> "Scene":
        self.layers.append(layer)
        return self


def _approximant(tri: LatticeTriangle, depth: int) -> list[LatticeTriangle]:
    level = [tri]
    for _ in range(depth):
        level = [c for t in level for c in t.children()]
    return level


def layer_polygons(layer: Layer, depth: int) -> list[tuple[Point, ...]]:
    if layer.kind == "gasket":
        d = depth if layer.depth is None else layer.depth
        assert layer.union is not None
        tris = [c for p in layer.union.pieces for c in _approximant(p.tri, d)]
    elif layer.kind in ("solid", "outline"):
        tris = list(layer.triangles)
    else:
        return []
    return [tuple(v + layer.offset for v in t.vertices()) for t in tris]


def _fmt(x) -> str:
    s = f"{float(x):.{PRECISION}f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(scene: Scene, depth: int = 6) -> str:
    """Deterministic SVG text; gasket layers are drawn as their depth-``depth``
    approximant triangles."""
    if not 0 <= depth <= MAX_DEPTH:
        raise ValueError(f"render depth must be in 0..{MAX_DEPTH}, got {depth}")
    polys = [(layer, layer_polygons(layer, depth)) for layer in scene.layers]
    xs, ys = [], []
    for layer, ps in polys:
        for poly in ps:
            xs.extend(float(v.x) for v in poly)
            ys.extend(float(v.y) for v in poly)
        for p in layer.points:
            xs.append(float(p.x + layer.offset.x))
            ys.append(float(p.y + layer.offset.y))
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    w, h = max(xs) - min(xs), max(ys) - min(ys)
    pad = 0.05 * max(w, h, 1e-9)
    x0, y0 = min(xs) - pad, -(max(ys) + pad)  # svg y axis points down
    vw, vh = w + 2 * pad, h + 2 * pad
    r = vw / 300
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{_fmt(WIDTH * vh / vw)}" viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(vw)} {_fmt(vh)}">',
        f"<style>\n{STYLE}</style>",
    ]
    if scene.title:
        out.append(f"<title>{scene.title}</title>")
    for layer, ps in polys:
        out.append(f'<g class="{layer.css}">')
        for poly in ps:
            pts = " ".join(f"{_fmt(v.x)},{_fmt(-v.y)}" for v in poly)
            out.append(f'<polygon points="{pts}"/>')
        for i, p in enumerate(layer.points):
            q = p + layer.offset
            out.append(f'<circle cx="{_fmt(q.x)}" cy="{_fmt(-q.y)}" r="{_fmt(r)}"/>')
            if i < len(layer.labels):
                out.append(
                    f'<text class="label" x="{_fmt(float(q.x) + r)}" y="{_fmt(-float(q.y) - r)}" '
                    f'font-size="{_fmt(4 * r)}">{layer.labels[i]}</text>'
                )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def count_polygons(svg: str) -> int:
    return svg.count("<polygon ")


# -- figures ---------------------------------------------------------------

def _row_scene(n: int) -> Scene:
    return Scene([Layer("gasket", "gasket", union=build_E(n))], f"{n} gaskets in a row")


def _marked_scene() -> Scene:
    from .verifier import derive_geometry

    g = derive_geometry()
    names = sorted(g.points, key=lambda k: int(k[1:]))
    return Scene([
        Layer("gasket", "gasket", union=build_E(5)),
        Layer("outline", "outline", triangles=[t for t in (g.tri_123, g.tri_145, g.tri_678) if t]),
        Layer("points", "marker", points=[g.points[k] for k in names], labels=names),
    ], "five gaskets in a row with marked points")


def _e_in_c_scene() -> Scene:
    return Scene([
        Layer("gasket", "hull", union=build_C()),
        Layer("gasket", "gasket", union=build_E(5)),
    ], "E inside C")


def approximant_scene(n: int) -> Scene:
    if not -3 <= n <= MAX_DEPTH - 3:
        raise ValueError(f"A_n needs -3 <= n <= {MAX_DEPTH - 3}")
    return Scene([Layer("solid", "cell", triangles=cells(n))], f"A_{n}")


def vertex_scene(n: int) -> Scene:
    if not -3 <= n <= MAX_DEPTH - 3:
        raise ValueError(f"B_n needs -3 <= n <= {MAX_DEPTH - 3}")
    pts = sorted((p.to_point() for p in vertices_B(n)), key=lambda q: (float(q.y), float(q.x)))
    return Scene([
        Layer("outline", "outline", triangles=[C_ROOT]),
        Layer("points", "marker", points=pts),
    ], f"B_{n}")


def _panels(scenes: list[Scene], title: str) -> Scene:
    out = Scene(title=title)
    shift = Point.of(0, 0)
    for s in scenes:
        for layer in s.layers:
            out.add(Layer(layer.kind, layer.css, layer.union, layer.depth, layer.triangles,
                          layer.points, layer.labels, layer.offset + shift))
        shift = shift + Point.of(10, 0)
    return out


def _candidate_scene() -> Scene:
    from .algebra import image_of_union, image_triangle
    from .verifier import derive_geometry

    tri = derive_geometry().tri_678
    f = Similitude(0, False, 1, TriPoint.from_oblique(1, 0, 1))  # x/2 + (1/2, 0)
    E = build_E(5)
    return Scene([
        Layer("gasket", "gasket", union=E),
        Layer("gasket", "image", union=image_of_union(f, E)),
        Layer("outline", "outline", triangles=[tri, image_triangle(T, tri)]),
    ], "an admissible image f(E) and T(tri P6P7P8)")


def figure_scene(figure: str) -> Scene:
    """Scene for figure ``1``..``8``, ``A<n>`` or ``B<n>``."""
    fig = figure.strip()
    m = re.fullmatch(r"([AB])(-?\d+)", fig)
    if m:
        n = int(m.group(2))
        return approximant_scene(n) if m.group(1) == "A" else vertex_scene(n)
    builders = {
        "1": lambda: _row_scene(1),
        "2": lambda: _row_scene(2),
        "3": lambda: _row_scene(3),
        "4": _marked_scene,
        "5": _e_in_c_scene,
        "6": lambda: _panels([approximant_scene(n) for n in range(-3, 1)], "A_-3 .. A_0"),
        "7": lambda: _panels([vertex_scene(n) for n in range(-3, 1)], "B_-3 .. B_0"),
        "8": _candidate_scene,
    }
    if fig not in builders:
        raise ValueError(f"unknown figure {figure!r}; expected 1..8, A<n> or B<n>")
    return builders[fig]()
