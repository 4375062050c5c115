"""Per-bin foreground glyphs: pies, bars, and sampled point clusters.

Glyph geometry is resolved in panel (screen) coordinates with y growing
downward; callers hand in the bin's inscribed box or polygon already
transformed.  Polygons must be counter-clockwise in that frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .aggregation import nudge_inside
from .encoding import Color, Palette
from .errors import EmptyBinError, InvalidParameterError
from .tessellation import Point, Polygon, polygon_centroid

MIN_AREA_PIE_RADIUS = 3.0  # panel units; keeps sparse bins visible


class PieVariant(str, Enum):
    PIE = "pie"
    DONUT = "donut"
    AREA_SCALED = "area-scaled"


class BarVariant(str, Enum):
    GROUPED = "grouped"
    STACKED = "stacked"


@dataclass(frozen=True)
class PieSlice:
    class_id: int
    start_deg: float  # clockwise from 12 o'clock
    end_deg: float
    color: Color


@dataclass(frozen=True)
class PieSlices:
    center: Point
    outer_radius: float
    inner_radius: float
    slices: tuple[PieSlice, ...]
    kind: str = field(default="pie", init=False)


@dataclass(frozen=True)
class BarRect:
    class_id: int
    x: float
    y: float
    width: float
    height: float
    color: Color


@dataclass(frozen=True)
class Bars:
    variant: BarVariant
    baseline_y: float
    bars: tuple[BarRect, ...]
    kind: str = field(default="bars", init=False)


@dataclass(frozen=True)
class PointDisc:
    class_id: int
    x: float
    y: float
    radius: float
    color: Color


@dataclass(frozen=True)
class PointCluster:
    discs: tuple[PointDisc, ...]
    kind: str = field(default="points", init=False)


GlyphGeometry = PieSlices | Bars | PointCluster


def pie_glyph(
    counts: Sequence[int],
    variant: PieVariant,
    center: Point,
    max_radius: float,
    palette: Palette,
    density_for_area: Optional[float] = None,
) -> PieSlices:
    """Part-whole pie for one bin's class mix.

    Slices are sorted by descending proportion (ties by class id) and
    laid out clockwise from 12 o'clock; the final slice absorbs float
    rounding so the angles always close at exactly 360.  The
    area-scaled variant shrinks the disc so its area tracks bin
    density, floored at a small visible radius.
    """
    total = sum(counts)
    if total <= 0:
        raise EmptyBinError("pie glyph on an empty bin")
    outer = max_radius
    if variant is PieVariant.AREA_SCALED:
        if density_for_area is None:
            raise InvalidParameterError("area-scaled pies need the bin density")
        outer = max(MIN_AREA_PIE_RADIUS, max_radius * math.sqrt(max(0.0, density_for_area)))
        outer = min(outer, max_radius)
    inner = 0.5 * outer if variant is PieVariant.DONUT else 0.0
    order = sorted(
        (c for c, n in enumerate(counts) if n > 0),
        key=lambda c: (-counts[c], c),
    )
    slices = []
    cursor = 0.0
    for rank, c in enumerate(order):
        span = 360.0 * counts[c] / total
        end = 360.0 if rank == len(order) - 1 else cursor + span
        slices.append(PieSlice(class_id=c, start_deg=cursor, end_deg=end, color=palette.color(c)))
        cursor = end
    return PieSlices(center=center, outer_radius=outer, inner_radius=inner, slices=tuple(slices))


def bar_glyph(
    values: Sequence[float],
    variant: BarVariant,
    box: tuple[float, float, float, float],
    palette: Palette,
    proportional: bool = False,
    stack_scale: float = 1.0,
) -> Bars:
    """Bar chart inside the bin's inscribed box (y grows downward).

    Grouped bars stand side by side on the box bottom, one per class in
    registry order, full height meaning value 1.  Stacked bars pile
    segments in registry order; with ``proportional`` the values are
    renormalized to sum to 1 (the bin-internal part-whole reading),
    otherwise segment heights are divided by ``stack_scale`` so the
    tallest stack in the plot still fits the box.
    """
    x0, y0, x1, y1 = box
    width, h_max = x1 - x0, y1 - y0
    k = len(values)
    if k == 0 or h_max <= 0 or width <= 0:
        return Bars(variant=variant, baseline_y=y1, bars=())
    bars = []
    if variant is BarVariant.GROUPED:
        bar_w = width / k
        for c, v in enumerate(values):
            h = max(0.0, min(1.0, float(v))) * h_max
            bars.append(
                BarRect(class_id=c, x=x0 + c * bar_w, y=y1 - h, width=bar_w, height=h, color=palette.color(c))
            )
    else:
        vals = [max(0.0, float(v)) for v in values]
        total = sum(vals)
        if proportional and total > 0:
            vals = [v / total for v in vals]
        elif stack_scale > 0:
            vals = [v / stack_scale for v in vals]
        cursor = y1
        for c, v in enumerate(vals):
            h = v * h_max
            cursor -= h
            bars.append(BarRect(class_id=c, x=x0, y=cursor, width=width, height=h, color=palette.color(c)))
    return Bars(variant=variant, baseline_y=y1, bars=tuple(bars))


def point_glyph(
    points: Sequence[tuple[float, float, int]],
    radius: float,
    polygon: Polygon,
    palette: Palette,
    max_iterations: int = 20,
) -> PointCluster:
    """Sampled point discs with bounded overlap relaxation.

    Runs at most ``max_iterations`` passes of pairwise separation; every
    pass ends by pulling discs back inside the polygon, so no disc ever
    leaves the bin.
    """
    pos = [(float(x), float(y)) for x, y, _ in points]
    cids = [c for _, _, c in points]
    if pos:
        centroid = polygon_centroid(polygon)
        min_d = 2.0 * radius
        for _ in range(max_iterations):
            moved = False
            for i in range(len(pos)):
                for j in range(i + 1, len(pos)):
                    dx = pos[j][0] - pos[i][0]
                    dy = pos[j][1] - pos[i][1]
                    d = math.hypot(dx, dy)
                    if d >= min_d - 1e-12:
                        continue
                    if d == 0.0:
                        dx, dy, d = 1.0, 0.0, 1.0  # deterministic split direction
                    push = 0.5 * (min_d - d) / d
                    pos[i] = (pos[i][0] - dx * push, pos[i][1] - dy * push)
                    pos[j] = (pos[j][0] + dx * push, pos[j][1] + dy * push)
                    moved = True
            pos = [nudge_inside(x, y, polygon, centroid, radius) for x, y in pos]
            if not moved:
                break
    discs = tuple(
        PointDisc(class_id=c, x=x, y=y, radius=radius, color=palette.color(c))
        for (x, y), c in zip(pos, cids)
    )
    return PointCluster(discs=discs)
