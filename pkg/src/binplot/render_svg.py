"""Deterministic SVG 1.1 serialization of a Scene.

Identical scenes produce byte-identical documents: coordinates are
formatted with fixed 3-decimal locale-independent precision, element
order follows the display list, and ids are stable
(``p<panel>-bin-<bin>`` plus ``-outline``/``-glyph`` suffixes and
``class-<id>`` classes) so the explorer UI can address elements.
"""

from __future__ import annotations

import json
import math
from xml.sax.saxutils import escape

from .encoding import Color, FragmentGrid, SolidColor, StrokeSet, SubBlockGrid
from .glyphs import BarVariant, Bars, PieSlices, PointCluster
from .layout import (
    AxisTick,
    BinFillItem,
    GlyphItem,
    LatticeInfo,
    LegendEntry,
    Panel,
    Scene,
)
from .tessellation import Domain, ShapeKind

AXIS_COLOR = "#333333"
BOUNDARY_COLOR = "#555555"
FONT = "font-family=\"Helvetica, Arial, sans-serif\""


def fmt(x: float) -> str:
    """Fixed 3-decimal, locale-independent, no negative zero."""
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def css_color(color: Color) -> str:
    return "#%02x%02x%02x" % tuple(color)


def _points_attr(poly, dx: float, dy: float) -> str:
    return " ".join(f"{fmt(x + dx)},{fmt(y + dy)}" for x, y in poly)


def _polar(cx: float, cy: float, r: float, deg: float) -> tuple[float, float]:
    # degrees clockwise from 12 o'clock, screen coordinates
    rad = math.radians(deg)
    return (cx + r * math.sin(rad), cy - r * math.cos(rad))


def render(scene: Scene) -> str:
    """Serialize a Scene to a standalone SVG document."""
    w, h = fmt(scene.width), fmt(scene.height)
    out: list[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>',
    ]
    clips: list[str] = []
    bodies: list[str] = []
    for panel in scene.panels:
        body = _render_panel(panel, clips)
        bodies.append(body)
    if clips:
        out.append("<defs>")
        out.extend(clips)
        out.append("</defs>")
    out.extend(bodies)
    out.append(_render_legend(scene))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _render_panel(panel: Panel, clips: list[str]) -> str:
    pid = f"p{panel.index}"
    vx, vy, vw, vh = panel.viewport
    out = [f'<g id="panel-{panel.index}">']

    needs_clip = {
        item.bin
        for item in panel.fills
        if isinstance(item.fill, (FragmentGrid, SubBlockGrid, StrokeSet))
    }
    for b in sorted(needs_clip):
        poly = panel.bin_polygons[b]
        clips.append(
            f'<clipPath id="{pid}-bin-{b}-clip">'
            f'<polygon points="{_points_attr(poly, vx, vy)}"/></clipPath>'
        )

    out.append(f'<g id="{pid}-fills">')
    for item in panel.fills:
        out.append(_render_fill(pid, panel, item, vx, vy))
    out.append("</g>")

    if panel.boundaries:
        out.append(f'<g id="{pid}-boundaries" fill="none" stroke="{BOUNDARY_COLOR}" stroke-width="0.6">')
        for b, poly in enumerate(panel.bin_polygons):
            out.append(f'<polygon id="{pid}-bin-{b}-outline" points="{_points_attr(poly, vx, vy)}"/>')
        out.append("</g>")

    if panel.glyphs:
        out.append(f'<g id="{pid}-glyphs">')
        for item in panel.glyphs:
            out.append(_render_glyph(pid, item, vx, vy))
        out.append("</g>")

    out.append(_render_axes(pid, panel))
    if panel.title:
        out.append(
            f'<text x="{fmt(vx + vw / 2)}" y="{fmt(vy - 8)}" text-anchor="middle" '
            f'{FONT} font-size="12" fill="{AXIS_COLOR}">{escape(panel.title)}</text>'
        )
    out.append("</g>")
    return "\n".join(out)


def _render_fill(pid: str, panel: Panel, item: BinFillItem, vx: float, vy: float) -> str:
    b = item.bin
    fill = item.fill
    poly = panel.bin_polygons[b]
    eid = f"{pid}-bin-{b}"
    if isinstance(fill, SolidColor):
        return f'<polygon id="{eid}" points="{_points_attr(poly, vx, vy)}" fill="{css_color(fill.color)}"/>'
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    x0, x1 = min(xs) + vx, max(xs) + vx
    y0, y1 = min(ys) + vy, max(ys) + vy
    if isinstance(fill, FragmentGrid):
        side = fill.side
        cw, ch = (x1 - x0) / side, (y1 - y0) / side
        cells = []
        for i, color in enumerate(fill.colors):
            if color == (255, 255, 255):
                continue  # white fragments are the canvas showing through
            r, c = divmod(i, side)
            cells.append(
                f'<rect x="{fmt(x0 + c * cw)}" y="{fmt(y0 + r * ch)}" width="{fmt(cw)}" '
                f'height="{fmt(ch)}" fill="{css_color(color)}"/>'
            )
        return (
            f'<g id="{eid}" clip-path="url(#{eid}-clip)">' + "".join(cells) + "</g>"
        )
    if isinstance(fill, SubBlockGrid):
        cw, ch = (x1 - x0) / fill.cols, (y1 - y0) / fill.rows
        cells = []
        for i, color in enumerate(fill.colors):
            if color == (255, 255, 255):
                continue
            r, c = divmod(i, fill.cols)
            cells.append(
                f'<rect x="{fmt(x0 + c * cw)}" y="{fmt(y0 + r * ch)}" width="{fmt(cw)}" '
                f'height="{fmt(ch)}" class="class-{i}" fill="{css_color(color)}"/>'
            )
        return (
            f'<g id="{eid}" clip-path="url(#{eid}-clip)">' + "".join(cells) + "</g>"
        )
    # StrokeSet: parallel lines per class layer, clipped to the bin
    cx, cy = (x0 + x1) / 2.0, (y0 + y1) / 2.0
    diag = math.hypot(x1 - x0, y1 - y0)
    groups = []
    for layer in fill.layers:
        rad = math.radians(layer.angle_deg)
        dx, dy = math.cos(rad), -math.sin(rad)
        nx, ny = math.sin(rad), math.cos(rad)
        half = diag / 2.0 + layer.spacing
        k_max = int(math.ceil(diag / (2.0 * layer.spacing))) + 1
        lines = []
        for k in range(-k_max, k_max + 1):
            px, py = cx + k * layer.spacing * nx, cy + k * layer.spacing * ny
            lines.append(
                f'<line x1="{fmt(px - half * dx)}" y1="{fmt(py - half * dy)}" '
                f'x2="{fmt(px + half * dx)}" y2="{fmt(py + half * dy)}"/>'
            )
        groups.append(
            f'<g class="class-{layer.class_id}" stroke="{css_color(layer.color)}" stroke-width="1">'
            + "".join(lines)
            + "</g>"
        )
    return f'<g id="{eid}" clip-path="url(#{eid}-clip)">' + "".join(groups) + "</g>"


def _render_glyph(pid: str, item: GlyphItem, vx: float, vy: float) -> str:
    b = item.bin
    geo = item.geometry
    eid = f"{pid}-bin-{b}-glyph"
    if isinstance(geo, PieSlices):
        cx, cy = geo.center[0] + vx, geo.center[1] + vy
        ro, ri = geo.outer_radius, geo.inner_radius
        parts = []
        for s in geo.slices:
            parts.append(
                f'<path class="class-{s.class_id}" d="{_slice_path(cx, cy, ro, ri, s.start_deg, s.end_deg)}" '
                f'fill="{css_color(s.color)}"/>'
            )
        return f'<g id="{eid}">' + "".join(parts) + "</g>"
    if isinstance(geo, Bars):
        parts = [
            f'<rect class="class-{bar.class_id}" x="{fmt(bar.x + vx)}" y="{fmt(bar.y + vy)}" '
            f'width="{fmt(bar.width)}" height="{fmt(bar.height)}" fill="{css_color(bar.color)}"/>'
            for bar in geo.bars
            if bar.height > 0
        ]
        return f'<g id="{eid}">' + "".join(parts) + "</g>"
    parts = [
        f'<circle class="class-{d.class_id}" cx="{fmt(d.x + vx)}" cy="{fmt(d.y + vy)}" '
        f'r="{fmt(d.radius)}" fill="{css_color(d.color)}"/>'
        for d in geo.discs
    ]
    return f'<g id="{eid}">' + "".join(parts) + "</g>"


def _slice_path(cx: float, cy: float, ro: float, ri: float, a0: float, a1: float) -> str:
    span = a1 - a0
    if span >= 360.0 - 1e-9:
        # full disc or annulus via two half arcs
        top, bottom = (cx, cy - ro), (cx, cy + ro)
        d = (
            f"M {fmt(top[0])} {fmt(top[1])} "
            f"A {fmt(ro)} {fmt(ro)} 0 1 1 {fmt(bottom[0])} {fmt(bottom[1])} "
            f"A {fmt(ro)} {fmt(ro)} 0 1 1 {fmt(top[0])} {fmt(top[1])} Z"
        )
        if ri > 0:
            itop, ibottom = (cx, cy - ri), (cx, cy + ri)
            d += (
                f" M {fmt(itop[0])} {fmt(itop[1])} "
                f"A {fmt(ri)} {fmt(ri)} 0 1 0 {fmt(ibottom[0])} {fmt(ibottom[1])} "
                f"A {fmt(ri)} {fmt(ri)} 0 1 0 {fmt(itop[0])} {fmt(itop[1])} Z"
            )
        return d
    large = 1 if span > 180.0 else 0
    ox0, oy0 = _polar(cx, cy, ro, a0)
    ox1, oy1 = _polar(cx, cy, ro, a1)
    if ri <= 0:
        return (
            f"M {fmt(cx)} {fmt(cy)} L {fmt(ox0)} {fmt(oy0)} "
            f"A {fmt(ro)} {fmt(ro)} 0 {large} 1 {fmt(ox1)} {fmt(oy1)} Z"
        )
    ix0, iy0 = _polar(cx, cy, ri, a0)
    ix1, iy1 = _polar(cx, cy, ri, a1)
    return (
        f"M {fmt(ix0)} {fmt(iy0)} L {fmt(ox0)} {fmt(oy0)} "
        f"A {fmt(ro)} {fmt(ro)} 0 {large} 1 {fmt(ox1)} {fmt(oy1)} "
        f"L {fmt(ix1)} {fmt(iy1)} "
        f"A {fmt(ri)} {fmt(ri)} 0 {large} 0 {fmt(ix0)} {fmt(iy0)} Z"
    )


def _render_axes(pid: str, panel: Panel) -> str:
    vx, vy, vw, vh = panel.viewport
    y_axis_x = vx
    x_axis_y = vy + vh
    out = [f'<g id="{pid}-axes" {FONT} font-size="10" fill="{AXIS_COLOR}">']
    out.append(
        f'<line x1="{fmt(vx)}" y1="{fmt(x_axis_y)}" x2="{fmt(vx + vw)}" y2="{fmt(x_axis_y)}" '
        f'stroke="{AXIS_COLOR}" stroke-width="1"/>'
    )
    out.append(
        f'<line x1="{fmt(y_axis_x)}" y1="{fmt(vy)}" x2="{fmt(y_axis_x)}" y2="{fmt(x_axis_y)}" '
        f'stroke="{AXIS_COLOR}" stroke-width="1"/>'
    )
    for tick in panel.x_ticks:
        x = vx + tick.px
        out.append(
            f'<line x1="{fmt(x)}" y1="{fmt(x_axis_y)}" x2="{fmt(x)}" y2="{fmt(x_axis_y + 4)}" '
            f'stroke="{AXIS_COLOR}" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{fmt(x)}" y="{fmt(x_axis_y + 15)}" text-anchor="middle">{escape(tick.label)}</text>'
        )
    for tick in panel.y_ticks:
        y = vy + tick.px
        out.append(
            f'<line x1="{fmt(y_axis_x - 4)}" y1="{fmt(y)}" x2="{fmt(y_axis_x)}" y2="{fmt(y)}" '
            f'stroke="{AXIS_COLOR}" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{fmt(y_axis_x - 6)}" y="{fmt(y + 3)}" text-anchor="end">{escape(tick.label)}</text>'
        )
    out.append("</g>")
    return "\n".join(out)


def _render_legend(scene: Scene) -> str:
    x = scene.width - 124.0
    out = [f'<g id="legend" {FONT} font-size="11">']
    y = 24.0
    for entry in scene.legend:
        out.append(
            f'<g id="legend-class-{entry.class_id}" class="class-{entry.class_id}">'
            f'<rect x="{fmt(x)}" y="{fmt(y - 9)}" width="12" height="12" '
            f'fill="{css_color(entry.color)}"/>'
            f'<text x="{fmt(x + 17)}" y="{fmt(y + 1)}" fill="{AXIS_COLOR}">{escape(entry.label)}</text></g>'
        )
        y += 18.0
    out.append("</g>")
    return "\n".join(out)


# -- JSON scene serialization ---------------------------------------------------


def scene_to_json(scene: Scene) -> str:
    """Lossless, key-sorted JSON encoding of a Scene."""
    return json.dumps(scene_to_dict(scene), sort_keys=True, separators=(",", ":"))


def scene_from_json(text: str) -> Scene:
    return scene_from_dict(json.loads(text))


def scene_to_dict(scene: Scene) -> dict:
    return {
        "width": scene.width,
        "height": scene.height,
        "meta": scene.meta,
        "legend": [
            {"class_id": e.class_id, "label": e.label, "color": list(e.color)}
            for e in scene.legend
        ],
        "panels": [_panel_to_dict(p) for p in scene.panels],
    }


def _panel_to_dict(panel: Panel) -> dict:
    return {
        "index": panel.index,
        "class_id": panel.class_id,
        "title": panel.title,
        "viewport": list(panel.viewport),
        "domain": {
            "x_min": panel.domain.x_min,
            "x_max": panel.domain.x_max,
            "y_min": panel.domain.y_min,
            "y_max": panel.domain.y_max,
        },
        "px_per_unit": panel.px_per_unit,
        "lattice": {
            "shape": panel.lattice.shape.value,
            "bins_x": panel.lattice.bins_x,
            "grid_rows": panel.lattice.grid_rows,
            "grid_cols": panel.lattice.grid_cols,
            "bin_count": panel.lattice.bin_count,
        },
        "bin_polygons": [[list(pt) for pt in poly] for poly in panel.bin_polygons],
        "fills": [{"bin": f.bin, "fill": _fill_to_dict(f.fill)} for f in panel.fills],
        "boundaries": panel.boundaries,
        "glyphs": [{"bin": g.bin, "geometry": _glyph_to_dict(g.geometry)} for g in panel.glyphs],
        "x_ticks": [{"value": t.value, "px": t.px, "label": t.label} for t in panel.x_ticks],
        "y_ticks": [{"value": t.value, "px": t.px, "label": t.label} for t in panel.y_ticks],
    }


def _fill_to_dict(fill) -> dict:
    if isinstance(fill, SolidColor):
        return {"kind": "solid", "color": list(fill.color)}
    if isinstance(fill, FragmentGrid):
        return {"kind": "fragments", "side": fill.side, "colors": [list(c) for c in fill.colors]}
    if isinstance(fill, SubBlockGrid):
        return {
            "kind": "blocks",
            "rows": fill.rows,
            "cols": fill.cols,
            "colors": [list(c) for c in fill.colors],
        }
    return {
        "kind": "strokes",
        "layers": [
            {
                "class_id": layer.class_id,
                "angle_deg": layer.angle_deg,
                "spacing": layer.spacing,
                "color": list(layer.color),
            }
            for layer in fill.layers
        ],
    }


def _glyph_to_dict(geo) -> dict:
    if isinstance(geo, PieSlices):
        return {
            "kind": "pie",
            "center": list(geo.center),
            "outer_radius": geo.outer_radius,
            "inner_radius": geo.inner_radius,
            "slices": [
                {
                    "class_id": s.class_id,
                    "start_deg": s.start_deg,
                    "end_deg": s.end_deg,
                    "color": list(s.color),
                }
                for s in geo.slices
            ],
        }
    if isinstance(geo, Bars):
        return {
            "kind": "bars",
            "variant": geo.variant.value,
            "baseline_y": geo.baseline_y,
            "bars": [
                {
                    "class_id": bar.class_id,
                    "x": bar.x,
                    "y": bar.y,
                    "width": bar.width,
                    "height": bar.height,
                    "color": list(bar.color),
                }
                for bar in geo.bars
            ],
        }
    return {
        "kind": "points",
        "discs": [
            {
                "class_id": d.class_id,
                "x": d.x,
                "y": d.y,
                "radius": d.radius,
                "color": list(d.color),
            }
            for d in geo.discs
        ],
    }


def scene_from_dict(data: dict) -> Scene:
    return Scene(
        width=data["width"],
        height=data["height"],
        meta=data["meta"],
        legend=tuple(
            LegendEntry(class_id=e["class_id"], label=e["label"], color=tuple(e["color"]))
            for e in data["legend"]
        ),
        panels=tuple(_panel_from_dict(p) for p in data["panels"]),
    )


def _panel_from_dict(data: dict) -> Panel:
    from .glyphs import BarRect, PieSlice, PointDisc

    def fill_from(d):
        if d["kind"] == "solid":
            return SolidColor(tuple(d["color"]))
        if d["kind"] == "fragments":
            return FragmentGrid(side=d["side"], colors=tuple(tuple(c) for c in d["colors"]))
        if d["kind"] == "blocks":
            return SubBlockGrid(
                rows=d["rows"], cols=d["cols"], colors=tuple(tuple(c) for c in d["colors"])
            )
        from .encoding import HatchLayer

        return StrokeSet(
            layers=tuple(
                HatchLayer(
                    class_id=layer["class_id"],
                    angle_deg=layer["angle_deg"],
                    spacing=layer["spacing"],
                    color=tuple(layer["color"]),
                )
                for layer in d["layers"]
            )
        )

    def glyph_from(d):
        if d["kind"] == "pie":
            return PieSlices(
                center=tuple(d["center"]),
                outer_radius=d["outer_radius"],
                inner_radius=d["inner_radius"],
                slices=tuple(
                    PieSlice(
                        class_id=s["class_id"],
                        start_deg=s["start_deg"],
                        end_deg=s["end_deg"],
                        color=tuple(s["color"]),
                    )
                    for s in d["slices"]
                ),
            )
        if d["kind"] == "bars":
            return Bars(
                variant=BarVariant(d["variant"]),
                baseline_y=d["baseline_y"],
                bars=tuple(
                    BarRect(
                        class_id=bar["class_id"],
                        x=bar["x"],
                        y=bar["y"],
                        width=bar["width"],
                        height=bar["height"],
                        color=tuple(bar["color"]),
                    )
                    for bar in d["bars"]
                ),
            )
        return PointCluster(
            discs=tuple(
                PointDisc(
                    class_id=disc["class_id"],
                    x=disc["x"],
                    y=disc["y"],
                    radius=disc["radius"],
                    color=tuple(disc["color"]),
                )
                for disc in d["discs"]
            )
        )

    dom = data["domain"]
    lat = data["lattice"]
    return Panel(
        index=data["index"],
        class_id=data["class_id"],
        title=data["title"],
        viewport=tuple(data["viewport"]),
        domain=Domain(dom["x_min"], dom["x_max"], dom["y_min"], dom["y_max"]),
        px_per_unit=data["px_per_unit"],
        lattice=LatticeInfo(
            shape=ShapeKind(lat["shape"]),
            bins_x=lat["bins_x"],
            grid_rows=lat["grid_rows"],
            grid_cols=lat["grid_cols"],
            bin_count=lat["bin_count"],
        ),
        bin_polygons=tuple(tuple(tuple(pt) for pt in poly) for poly in data["bin_polygons"]),
        fills=tuple(BinFillItem(bin=f["bin"], fill=fill_from(f["fill"])) for f in data["fills"]),
        boundaries=data["boundaries"],
        glyphs=tuple(
            GlyphItem(bin=g["bin"], geometry=glyph_from(g["geometry"])) for g in data["glyphs"]
        ),
        x_ticks=tuple(
            AxisTick(value=t["value"], px=t["px"], label=t["label"]) for t in data["x_ticks"]
        ),
        y_ticks=tuple(
            AxisTick(value=t["value"], px=t["px"], label=t["label"]) for t in data["y_ticks"]
        ),
    )
