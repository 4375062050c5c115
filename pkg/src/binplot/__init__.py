"""Binned aggregation of multi-class 2D point data, rendered to SVG.

Pipeline: build a lattice over the data domain, count points per bin
per class, normalize, encode bins with one of the catalog fills, add
optional glyphs, compose panels, and serialize to deterministic SVG or
scene JSON.
"""

from .aggregation import (
    BinSummaryGrid,
    ClassInfo,
    Dataset,
    IntensityGrid,
    NormalizationMode,
    ScaleKind,
    aggregate,
    attenuate,
    class_quotas,
    density_intensity,
    largest_remainder,
    normalize,
    sample_points,
)
from .encoding import (
    DEFAULT_CLASS_COLORS,
    FragmentGrid,
    Palette,
    Ramp,
    SolidColor,
    StrokeSet,
    SubBlockGrid,
    attribute_block_fill,
    blend_fill,
    hatch_fill,
    luminance_fill,
    majority_fill,
    weave_fill,
)
from .glyphs import (
    Bars,
    BarVariant,
    PieSlices,
    PieVariant,
    PointCluster,
    bar_glyph,
    pie_glyph,
    point_glyph,
)
from .io import load_config, load_csv, parse_config
from .layout import (
    BackgroundKind,
    Composition,
    DesignSpec,
    GlyphKind,
    Scene,
    Violation,
    axes_and_legend,
    compose,
    validate,
)
from .render_svg import render, scene_from_json, scene_to_json
from .tessellation import BinLattice, Domain, ShapeKind, build_lattice

__all__ = [
    "BinLattice",
    "BinSummaryGrid",
    "BackgroundKind",
    "Bars",
    "BarVariant",
    "ClassInfo",
    "Composition",
    "DEFAULT_CLASS_COLORS",
    "Dataset",
    "DesignSpec",
    "Domain",
    "FragmentGrid",
    "GlyphKind",
    "IntensityGrid",
    "NormalizationMode",
    "Palette",
    "PieSlices",
    "PieVariant",
    "PointCluster",
    "Ramp",
    "ScaleKind",
    "Scene",
    "ShapeKind",
    "SolidColor",
    "StrokeSet",
    "SubBlockGrid",
    "Violation",
    "aggregate",
    "attenuate",
    "attribute_block_fill",
    "axes_and_legend",
    "bar_glyph",
    "blend_fill",
    "build_lattice",
    "class_quotas",
    "compose",
    "density_intensity",
    "hatch_fill",
    "largest_remainder",
    "load_config",
    "load_csv",
    "luminance_fill",
    "majority_fill",
    "normalize",
    "parse_config",
    "pie_glyph",
    "point_glyph",
    "render",
    "sample_points",
    "scene_from_json",
    "scene_to_json",
    "validate",
    "weave_fill",
]

__version__ = "0.1.0"
