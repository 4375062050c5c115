"""Design validation and scene composition.

A :class:`DesignSpec` captures every decision for one plot: lattice
shape and size, boundaries, normalization, scale, composition,
background fill, glyph, palette, and seeds.  :func:`validate` checks
the combination rules and returns violations as data; :func:`compose`
turns a dataset plus a valid spec into a :class:`Scene`, a
resolution-independent display list in panel pixel coordinates that
the SVG renderer and the explorer UI both consume.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from .aggregation import (
    BinSummaryGrid,
    Dataset,
    IntensityGrid,
    NormalizationMode,
    ScaleKind,
    aggregate,
    density_intensity,
    normalize,
    sample_points,
)
from .encoding import (
    BinFill,
    Palette,
    attribute_block_fill,
    bin_seed,
    blend_fill,
    default_hatch_angles,
    hatch_fill,
    luminance_fill,
    majority_fill,
    weave_fill,
)
from .errors import SpecNotValidatedError
from .glyphs import (
    BarVariant,
    GlyphGeometry,
    PieVariant,
    bar_glyph,
    pie_glyph,
    point_glyph,
)
from .tessellation import BinLattice, Domain, ShapeKind, build_lattice

# Panel chrome in pixels.
MARGIN_LEFT = 46.0
MARGIN_BOTTOM = 36.0
PANEL_TOP = 24.0
PANEL_RIGHT = 10.0
PANEL_GAP = 6.0
LEGEND_WIDTH = 132.0
FIGURE_PAD = 8.0

POINT_RADIUS_PX = 2.5
HATCH_SPACING_MIN = 2.0
HATCH_SPACING_MAX = 10.0
GLYPH_BOX_INSET = 0.1
MIN_FRAGMENT_PX = 2.0


class Composition(str, Enum):
    SUPERIMPOSED = "superimposed"
    JUXTAPOSED = "juxtaposed"


class BackgroundKind(str, Enum):
    NONE = "none"
    LUMINANCE = "luminance"
    MAJORITY = "majority"
    BLEND = "blend"
    WEAVE = "weave"
    ATTRIBUTE_BLOCKS = "attribute-blocks"
    HATCHING = "hatching"


class GlyphKind(str, Enum):
    NONE = "none"
    PIE = "pie"
    DONUT = "donut"
    AREA_PIE = "area-pie"
    GROUPED_BAR = "grouped-bar"
    STACKED_BAR = "stacked-bar"
    POINTS = "points"


PIE_GLYPHS = {GlyphKind.PIE, GlyphKind.DONUT, GlyphKind.AREA_PIE}
BAR_GLYPHS = {GlyphKind.GROUPED_BAR, GlyphKind.STACKED_BAR}
FULL_AREA_BACKGROUNDS = {BackgroundKind.ATTRIBUTE_BLOCKS, BackgroundKind.HATCHING}


@dataclass(frozen=True)
class DesignSpec:
    """Validated record of every design decision for one plot."""

    shape: ShapeKind = ShapeKind.HEX
    bins_x: int = 20
    boundaries: bool = True
    normalization: NormalizationMode = NormalizationMode.GLOBAL
    scale: ScaleKind = ScaleKind.LINEAR
    composition: Composition = Composition.SUPERIMPOSED
    background: BackgroundKind = BackgroundKind.LUMINANCE
    glyph: GlyphKind = GlyphKind.NONE
    palette: Palette = field(default_factory=Palette)
    seed: int = 0
    panel_size: int = 420
    quantization: Optional[int] = None
    hatch_draw_order: Optional[tuple[int, ...]] = None
    fragment_grid: int = 8
    sample_budget: int = 10
    domain: Optional[Domain] = None
    per_class_bins_x: Optional[tuple[int, ...]] = None


@dataclass(frozen=True)
class Violation:
    rule: str
    reason: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.reason}"


def validate(spec: DesignSpec, dataset: Optional[Dataset] = None) -> list[Violation]:
    """Check every combination rule; returns all violations, not just the first."""
    v: list[Violation] = []
    if spec.bins_x < 1:
        v.append(Violation("positive-bins", "bins_x must be at least 1"))
    if spec.fragment_grid < 2:
        v.append(Violation("fragment-grid-size", "fragment grid side must be at least 2"))
    if spec.sample_budget < 1:
        v.append(Violation("sample-budget", "sample budget must be at least 1"))
    if spec.quantization is not None and spec.quantization < 2:
        v.append(Violation("quantization-levels", "quantized ramps need at least 2 levels"))

    if spec.glyph in PIE_GLYPHS and spec.normalization is not NormalizationMode.BIN_INTERNAL:
        v.append(
            Violation(
                "pie-requires-bin-internal",
                "pie glyphs read as part-whole shares of one bin, which only "
                "bin-internal normalization provides",
            )
        )
    if (
        spec.composition is Composition.JUXTAPOSED
        and spec.normalization is NormalizationMode.BIN_INTERNAL
    ):
        v.append(
            Violation(
                "juxtaposed-requires-class-or-global",
                "side-by-side per-class panels only compare under class-internal "
                "or global normalization",
            )
        )
    if spec.background is BackgroundKind.WEAVE:
        if spec.normalization is NormalizationMode.CLASS_INTERNAL:
            v.append(
                Violation(
                    "weave-normalization",
                    "woven fragments carry a part-whole reading that class-internal "
                    "normalization would contradict",
                )
            )
        if spec.glyph is not GlyphKind.NONE:
            v.append(
                Violation(
                    "weave-covers-bins",
                    "glyphs would cover the fragment pattern that weaving needs "
                    "to stay readable",
                )
            )
    if spec.background in FULL_AREA_BACKGROUNDS and spec.glyph is not GlyphKind.NONE:
        v.append(
            Violation(
                "full-area-fills-exclude-glyphs",
                f"{spec.background.value} occupies the entire bin area and cannot "
                "share it with glyphs",
            )
        )
    if (
        not spec.boundaries
        and spec.background in (BackgroundKind.NONE, BackgroundKind.LUMINANCE)
        and spec.glyph is GlyphKind.NONE
    ):
        v.append(
            Violation(
                "boundaryless-needs-glyphs",
                "without boundaries a bin must contain glyphs to communicate "
                "its class distribution",
            )
        )

    if spec.hatch_draw_order is not None and dataset is not None:
        if sorted(spec.hatch_draw_order) != list(range(dataset.class_count)):
            v.append(
                Violation(
                    "hatch-draw-order",
                    "hatch draw order must be a permutation of the class ids",
                )
            )
    if spec.per_class_bins_x is not None:
        if spec.composition is not Composition.JUXTAPOSED:
            v.append(
                Violation(
                    "heterogeneous-needs-juxtaposed",
                    "per-class bin sizes only make sense with one panel per class",
                )
            )
        elif dataset is not None and len(spec.per_class_bins_x) != dataset.class_count:
            v.append(
                Violation(
                    "heterogeneous-arity",
                    "per-class bin sizes must list one entry per class",
                )
            )
    if dataset is not None and dataset.class_count > len(spec.palette.class_colors):
        v.append(
            Violation(
                "palette-capacity",
                f"{dataset.class_count} classes exceed the palette's "
                f"{len(spec.palette.class_colors)} colors",
            )
        )
    return v


# -- scene model ---------------------------------------------------------------


@dataclass(frozen=True)
class AxisTick:
    value: float
    px: float  # panel-local
    label: str


@dataclass(frozen=True)
class BinFillItem:
    bin: int
    fill: BinFill


@dataclass(frozen=True)
class GlyphItem:
    bin: int
    geometry: GlyphGeometry


@dataclass(frozen=True)
class LatticeInfo:
    shape: ShapeKind
    bins_x: int
    grid_rows: int
    grid_cols: int
    bin_count: int


@dataclass(frozen=True)
class Panel:
    """One plot area; geometry is panel-local px with y growing down."""

    index: int
    class_id: Optional[int]
    title: str
    viewport: tuple[float, float, float, float]  # (x, y, w, h) in figure px
    domain: Domain
    px_per_unit: float
    lattice: LatticeInfo
    bin_polygons: tuple[tuple[tuple[float, float], ...], ...]
    fills: tuple[BinFillItem, ...]
    boundaries: bool
    glyphs: tuple[GlyphItem, ...]
    x_ticks: tuple[AxisTick, ...]
    y_ticks: tuple[AxisTick, ...]


@dataclass(frozen=True)
class LegendEntry:
    class_id: int
    label: str
    color: tuple[int, int, int]


@dataclass(frozen=True)
class Scene:
    width: float
    height: float
    panels: tuple[Panel, ...]
    legend: tuple[LegendEntry, ...]
    meta: dict


# -- axes ------------------------------------------------------------------------


def nice_step(raw: float) -> float:
    """Round up to a 1/2/5 x 10^k step."""
    if raw <= 0:
        return 1.0
    power = math.floor(math.log10(raw))
    base = 10.0 ** power
    for mult in (1.0, 2.0, 5.0):
        if raw <= mult * base:
            return mult * base
    return 10.0 * base


def nice_ticks(lo: float, hi: float, max_ticks: int = 8) -> list[float]:
    """Round-number ticks covering [lo, hi], at most ``max_ticks`` of them."""
    step = nice_step((hi - lo) / 6.0)
    while True:
        first = math.ceil(lo / step - 1e-9)
        last = math.floor(hi / step + 1e-9)
        if last - first + 1 <= max_ticks:
            return [k * step for k in range(first, last + 1)]
        step = nice_step(step * 1.0001)


def _tick_label(value: float) -> str:
    return f"{value:g}"


def axes_and_legend(
    spec: DesignSpec, domain: Domain, classes
) -> tuple[list[float], list[float], list[LegendEntry]]:
    """Tick values per axis plus legend entries in registry order."""
    xs = nice_ticks(domain.x_min, domain.x_max)
    ys = nice_ticks(domain.y_min, domain.y_max)
    legend = [
        LegendEntry(class_id=c.class_id, label=c.label, color=spec.palette.color(c.class_id))
        for c in classes
    ]
    return xs, ys, legend


# -- composition ------------------------------------------------------------------


def compose(dataset: Dataset, spec: DesignSpec, workers: int = 1) -> Scene:
    """Aggregate, encode, and arrange panels into a Scene.

    The spec must validate cleanly.  ``workers`` parallelizes per-bin
    fill encoding; per-bin seeds make the output identical for any
    worker count.
    """
    violations = validate(spec, dataset)
    if violations:
        err = SpecNotValidatedError("; ".join(str(v) for v in violations))
        err.violations = violations
        raise err
    domain = spec.domain or dataset.bounding_domain()
    class_count = dataset.class_count

    if spec.composition is Composition.SUPERIMPOSED:
        panel_specs: list[tuple[Optional[int], int]] = [(None, spec.bins_x)]
    else:
        sizes = spec.per_class_bins_x or tuple([spec.bins_x] * class_count)
        panel_specs = [(c, sizes[c]) for c in range(class_count)]

    homogeneous = len({s for _, s in panel_specs}) == 1
    shared: dict[int, tuple[BinLattice, BinSummaryGrid, IntensityGrid, np.ndarray]] = {}

    def panel_data(bins_x: int):
        if bins_x not in shared:
            lattice = build_lattice(domain, spec.shape, bins_x)
            grid = aggregate(lattice, dataset)
            intensities = normalize(grid, spec.normalization, spec.scale)
            density = density_intensity(grid, spec.scale)
            shared[bins_x] = (lattice, grid, intensities, density)
        return shared[bins_x]

    n_panels = len(panel_specs)
    grid_cols = math.ceil(math.sqrt(n_panels))
    grid_rows = math.ceil(n_panels / grid_cols)

    panel_w = float(spec.panel_size)
    px_per_unit = panel_w / domain.width
    panel_h = domain.height * px_per_unit
    block_w = MARGIN_LEFT + panel_w + PANEL_RIGHT + PANEL_GAP
    block_h = PANEL_TOP + panel_h + MARGIN_BOTTOM + PANEL_GAP

    panels = []
    for idx, (class_id, bins_x) in enumerate(panel_specs):
        lattice, grid, intensities, density = panel_data(bins_x)
        row, col = idx // grid_cols, idx % grid_cols
        vx = FIGURE_PAD + col * block_w + MARGIN_LEFT
        vy = FIGURE_PAD + row * block_h + PANEL_TOP
        panels.append(
            _build_panel(
                idx,
                class_id,
                spec,
                dataset,
                lattice,
                grid,
                intensities,
                density,
                viewport=(vx, vy, panel_w, panel_h),
                workers=workers,
            )
        )

    width = FIGURE_PAD * 2 + grid_cols * block_w - PANEL_GAP + LEGEND_WIDTH
    height = FIGURE_PAD * 2 + grid_rows * block_h - PANEL_GAP
    legend = tuple(
        LegendEntry(class_id=c.class_id, label=c.label, color=spec.palette.color(c.class_id))
        for c in dataset.classes
    )
    meta = {
        "design": spec_to_config(spec),
        "class_count": class_count,
        "point_count": len(dataset),
        "homogeneous_panels": homogeneous,
    }
    return Scene(width=width, height=height, panels=tuple(panels), legend=legend, meta=meta)


def _transform(domain: Domain, viewport, px_per_unit):
    _, _, _, h = viewport

    def to_px(x: float, y: float) -> tuple[float, float]:
        return ((x - domain.x_min) * px_per_unit, h - (y - domain.y_min) * px_per_unit)

    return to_px


def _build_panel(
    index: int,
    class_id: Optional[int],
    spec: DesignSpec,
    dataset: Dataset,
    lattice: BinLattice,
    grid: BinSummaryGrid,
    intensities: IntensityGrid,
    density: np.ndarray,
    viewport,
    workers: int,
) -> Panel:
    domain = lattice.domain
    px_per_unit = viewport[2] / domain.width
    to_px = _transform(domain, viewport, px_per_unit)

    polygons = []
    for b in range(lattice.bin_count):
        poly = lattice.bin_polygon(b)
        # y-flip reverses orientation; reverse vertices to stay CCW
        polygons.append(tuple(to_px(x, y) for x, y in reversed(poly)))

    values = intensities.values
    fills = _encode_fills(spec, grid, values, density, class_id, px_per_unit, workers)
    glyphs = _build_glyphs(
        spec, dataset, lattice, grid, values, density, class_id, to_px, px_per_unit
    )

    x_tick_values = nice_ticks(domain.x_min, domain.x_max)
    y_tick_values = nice_ticks(domain.y_min, domain.y_max)
    x_ticks = tuple(
        AxisTick(value=v, px=to_px(v, domain.y_min)[0], label=_tick_label(v)) for v in x_tick_values
    )
    y_ticks = tuple(
        AxisTick(value=v, px=to_px(domain.x_min, v)[1], label=_tick_label(v)) for v in y_tick_values
    )
    if class_id is None:
        title = ""
    else:
        title = dataset.classes[class_id].label
    return Panel(
        index=index,
        class_id=class_id,
        title=title,
        viewport=tuple(float(v) for v in viewport),
        domain=domain,
        px_per_unit=px_per_unit,
        lattice=LatticeInfo(
            shape=lattice.shape,
            bins_x=lattice.bins_x,
            grid_rows=lattice.grid_rows,
            grid_cols=lattice.grid_cols,
            bin_count=lattice.bin_count,
        ),
        bin_polygons=tuple(polygons),
        fills=fills,
        boundaries=spec.boundaries,
        glyphs=glyphs,
        x_ticks=x_ticks,
        y_ticks=y_ticks,
    )


def _effective_fragment_side(spec: DesignSpec, px_per_unit: float, cell_width: float) -> int:
    """Clamp the fragment grid so fragments stay legible on screen."""
    cell_px = cell_width * px_per_unit
    return max(2, min(spec.fragment_grid, int(cell_px / MIN_FRAGMENT_PX) or 2))


def _encode_fills(
    spec: DesignSpec,
    grid: BinSummaryGrid,
    values: np.ndarray,
    density: np.ndarray,
    class_id: Optional[int],
    px_per_unit: float,
    workers: int,
) -> tuple[BinFillItem, ...]:
    if spec.background is BackgroundKind.NONE:
        return ()
    palette = spec.palette
    counts = grid.counts
    k = grid.class_count
    frag_side = _effective_fragment_side(spec, px_per_unit, grid.lattice.cell_width)
    if spec.hatch_draw_order is not None:
        draw_order = list(spec.hatch_draw_order)
    else:
        class_totals = grid.class_totals
        # densest classes paint first so sparse classes stay visible on top
        draw_order = sorted(range(k), key=lambda c: (-int(class_totals[c]), c))
    angles = default_hatch_angles(k)

    def fill_for(b: int) -> BinFill:
        counts_row = counts[b].tolist()
        values_row = values[b].tolist()
        if class_id is not None:
            counts_row = [n if c == class_id else 0 for c, n in enumerate(counts_row)]
            values_row = [v if c == class_id else 0.0 for c, v in enumerate(values_row)]
        bg = spec.background
        if bg is BackgroundKind.LUMINANCE:
            if class_id is not None:
                return luminance_fill(
                    values_row[class_id], palette.class_ramp(class_id), spec.quantization
                )
            return luminance_fill(float(density[b]), palette.density_ramp, spec.quantization)
        if bg is BackgroundKind.MAJORITY:
            return majority_fill(counts_row, values_row, spec.normalization, palette)
        if bg is BackgroundKind.BLEND:
            return blend_fill(values_row, palette)
        if bg is BackgroundKind.WEAVE:
            if spec.normalization is NormalizationMode.GLOBAL:
                bin_density = values_row[class_id] if class_id is not None else float(density[b])
            else:
                bin_density = None
            return weave_fill(
                counts_row,
                spec.normalization,
                frag_side,
                bin_seed(spec.seed, b),
                palette,
                density=bin_density,
            )
        if bg is BackgroundKind.ATTRIBUTE_BLOCKS:
            return attribute_block_fill(values_row, palette, quantization=spec.quantization)
        return hatch_fill(
            values_row,
            palette,
            angles=angles,
            draw_order=draw_order,
            spacing_min=HATCH_SPACING_MIN,
            spacing_max=HATCH_SPACING_MAX,
        )

    bins = range(grid.lattice.bin_count)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            encoded = list(pool.map(fill_for, bins))
    else:
        encoded = [fill_for(b) for b in bins]
    return tuple(BinFillItem(bin=b, fill=f) for b, f in zip(bins, encoded))


def _inset_box(box, inset_fraction):
    x0, y0, x1, y1 = box
    pad = inset_fraction * min(x1 - x0, y1 - y0)
    return (x0 + pad, y0 + pad, x1 - pad, y1 - pad)


def _build_glyphs(
    spec: DesignSpec,
    dataset: Dataset,
    lattice: BinLattice,
    grid: BinSummaryGrid,
    values: np.ndarray,
    density: np.ndarray,
    class_id: Optional[int],
    to_px,
    px_per_unit: float,
) -> tuple[GlyphItem, ...]:
    if spec.glyph is GlyphKind.NONE:
        return ()
    palette = spec.palette
    counts = grid.counts
    items: list[GlyphItem] = []

    if spec.glyph is GlyphKind.POINTS:
        per_bin = _points_by_bin(dataset, lattice, class_id)
        disc_r_data = POINT_RADIUS_PX / px_per_unit
        for b in sorted(per_bin):
            pts = per_bin[b]
            sampled = sample_points(
                pts, spec.sample_budget, lattice, b, bin_seed(spec.seed, b), disc_r_data
            )
            if not sampled:
                continue
            polygon_px = _polygon_px(lattice, b, to_px)
            px_pts = [(*to_px(x, y), c) for x, y, c in sampled]
            cluster = point_glyph(px_pts, POINT_RADIUS_PX, list(polygon_px), palette)
            items.append(GlyphItem(bin=b, geometry=cluster))
        return tuple(items)

    for b in range(lattice.bin_count):
        counts_row = counts[b].tolist()
        values_row = values[b].tolist()
        if class_id is not None:
            counts_row = [n if c == class_id else 0 for c, n in enumerate(counts_row)]
            values_row = [v if c == class_id else 0.0 for c, v in enumerate(values_row)]
        if sum(counts_row) == 0:
            continue
        box = _box_px(lattice.inscribed_box(b), to_px)
        box = _inset_box(box, GLYPH_BOX_INSET)
        if spec.glyph in PIE_GLYPHS:
            variant = {
                GlyphKind.PIE: PieVariant.PIE,
                GlyphKind.DONUT: PieVariant.DONUT,
                GlyphKind.AREA_PIE: PieVariant.AREA_SCALED,
            }[spec.glyph]
            center = ((box[0] + box[2]) / 2.0, (box[1] + box[3]) / 2.0)
            r_max = min(box[2] - box[0], box[3] - box[1]) / 2.0
            geometry = pie_glyph(
                counts_row,
                variant,
                center,
                r_max,
                palette,
                density_for_area=float(density[b]) if variant is PieVariant.AREA_SCALED else None,
            )
        else:
            proportional = (
                spec.glyph is GlyphKind.STACKED_BAR
                and spec.normalization is NormalizationMode.BIN_INTERNAL
            )
            if proportional:
                bar_values = [float(n) for n in counts_row]
            else:
                bar_values = values_row
            stack_scale = 1.0
            if spec.glyph is GlyphKind.STACKED_BAR and not proportional:
                stack_scale = _max_stack(values, class_id)
            geometry = bar_glyph(
                bar_values,
                BarVariant.GROUPED if spec.glyph is GlyphKind.GROUPED_BAR else BarVariant.STACKED,
                box,
                palette,
                proportional=proportional,
                stack_scale=stack_scale,
            )
        items.append(GlyphItem(bin=b, geometry=geometry))
    return tuple(items)


def _max_stack(values: np.ndarray, class_id: Optional[int]) -> float:
    if class_id is not None:
        m = float(values[:, class_id].max(initial=0.0))
    else:
        m = float(values.sum(axis=1).max(initial=0.0))
    return m if m > 0 else 1.0


def _points_by_bin(dataset: Dataset, lattice: BinLattice, class_id: Optional[int]):
    per_bin: dict[int, list[tuple[float, float, int]]] = {}
    for x, y, c in zip(dataset.xs.tolist(), dataset.ys.tolist(), dataset.class_ids.tolist()):
        if class_id is not None and c != class_id:
            continue
        per_bin.setdefault(lattice.assign(x, y), []).append((x, y, c))
    return per_bin


def _polygon_px(lattice: BinLattice, b: int, to_px) -> tuple:
    poly = lattice.bin_polygon(b)
    return tuple(to_px(x, y) for x, y in reversed(poly))


def _box_px(box_data, to_px) -> tuple[float, float, float, float]:
    x0, y0 = to_px(box_data[0], box_data[1])
    x1, y1 = to_px(box_data[2], box_data[3])
    return (min(x0, x1), min(y0, y1), max(x0, x1), max(y0, y1))


# -- config round-trip -------------------------------------------------------


def spec_to_config(spec: DesignSpec) -> dict:
    """Plain-JSON mirror of a DesignSpec (palette as hex strings)."""
    cfg = {
        "shape": spec.shape.value,
        "bins_x": spec.bins_x,
        "boundaries": spec.boundaries,
        "normalization": spec.normalization.value,
        "scale": spec.scale.value,
        "composition": spec.composition.value,
        "background": spec.background.value,
        "glyph": spec.glyph.value,
        "seed": spec.seed,
        "panel_size": spec.panel_size,
        "quantization": spec.quantization,
        "fragment_grid": spec.fragment_grid,
        "sample_budget": spec.sample_budget,
        "palette": ["#%02x%02x%02x" % c for c in spec.palette.class_colors],
    }
    if spec.hatch_draw_order is not None:
        cfg["hatch_draw_order"] = list(spec.hatch_draw_order)
    if spec.per_class_bins_x is not None:
        cfg["per_class_bins_x"] = list(spec.per_class_bins_x)
    if spec.domain is not None:
        cfg["domain"] = {
            "x_min": spec.domain.x_min,
            "x_max": spec.domain.x_max,
            "y_min": spec.domain.y_min,
            "y_max": spec.domain.y_max,
        }
    return cfg


def with_seed(spec: DesignSpec, seed: int) -> DesignSpec:
    return replace(spec, seed=seed)
