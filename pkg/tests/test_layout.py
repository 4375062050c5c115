"""Design validation, axes, and scene composition."""

import itertools

import pytest

from binplot.aggregation import NormalizationMode, ScaleKind
from binplot.encoding import FragmentGrid, SolidColor
from binplot.errors import SpecNotValidatedError
from binplot.layout import (
    BackgroundKind,
    Composition,
    DesignSpec,
    GlyphKind,
    axes_and_legend,
    compose,
    nice_ticks,
    validate,
)
from binplot.tessellation import Domain, ShapeKind
from conftest import make_blob_dataset

LEGALITY_RULES = {
    "pie-requires-bin-internal",
    "juxtaposed-requires-class-or-global",
    "weave-normalization",
    "weave-covers-bins",
    "full-area-fills-exclude-glyphs",
    "boundaryless-needs-glyphs",
}


def legal_by_definition(composition, normalization, background, glyph, boundaries):
    """Independent restatement of the five combination rules."""
    pies = {GlyphKind.PIE, GlyphKind.DONUT, GlyphKind.AREA_PIE}
    if glyph in pies and normalization is not NormalizationMode.BIN_INTERNAL:
        return False
    if composition is Composition.JUXTAPOSED and normalization is NormalizationMode.BIN_INTERNAL:
        return False
    if background is BackgroundKind.WEAVE:
        if normalization is NormalizationMode.CLASS_INTERNAL or glyph is not GlyphKind.NONE:
            return False
    if background in (BackgroundKind.ATTRIBUTE_BLOCKS, BackgroundKind.HATCHING):
        if glyph is not GlyphKind.NONE:
            return False
    if not boundaries and background in (BackgroundKind.NONE, BackgroundKind.LUMINANCE):
        if glyph is GlyphKind.NONE:
            return False
    return True


# -- validation ----------------------------------------------------------------


def test_pie_with_class_internal_rejected():
    spec = DesignSpec(glyph=GlyphKind.PIE, normalization=NormalizationMode.CLASS_INTERNAL)
    rules = {v.rule for v in validate(spec)}
    assert "pie-requires-bin-internal" in rules


def test_juxtaposed_with_bin_internal_rejected():
    spec = DesignSpec(
        composition=Composition.JUXTAPOSED, normalization=NormalizationMode.BIN_INTERNAL
    )
    rules = {v.rule for v in validate(spec)}
    assert "juxtaposed-requires-class-or-global" in rules


def test_luminance_with_boundaries_no_glyph_valid():
    spec = DesignSpec(
        background=BackgroundKind.LUMINANCE,
        boundaries=True,
        glyph=GlyphKind.NONE,
        composition=Composition.SUPERIMPOSED,
        normalization=NormalizationMode.GLOBAL,
    )
    assert validate(spec) == []


def test_validate_reports_all_violations():
    spec = DesignSpec(
        composition=Composition.JUXTAPOSED,
        normalization=NormalizationMode.CLASS_INTERNAL,
        background=BackgroundKind.WEAVE,
        glyph=GlyphKind.PIE,
    )
    rules = [v.rule for v in validate(spec)]
    assert {"pie-requires-bin-internal", "weave-normalization", "weave-covers-bins"} <= set(rules)
    assert len(rules) == len(set(rules))


def test_legality_cross_product_matches_rules_exactly():
    for combo in itertools.product(
        list(Composition), list(NormalizationMode), list(BackgroundKind), list(GlyphKind), (True, False)
    ):
        composition, normalization, background, glyph, boundaries = combo
        spec = DesignSpec(
            composition=composition,
            normalization=normalization,
            background=background,
            glyph=glyph,
            boundaries=boundaries,
        )
        violations = [v for v in validate(spec) if v.rule in LEGALITY_RULES]
        expected_legal = legal_by_definition(*combo)
        assert (not violations) == expected_legal, (combo, violations)


def test_violation_reasons_are_named_and_explained():
    spec = DesignSpec(glyph=GlyphKind.PIE, normalization=NormalizationMode.GLOBAL)
    v = [x for x in validate(spec) if x.rule == "pie-requires-bin-internal"][0]
    assert "bin-internal" in v.reason


# -- axes ------------------------------------------------------------------------


def test_nice_ticks_unit_domain():
    assert nice_ticks(0.0, 10.0) == [0.0, 2.0, 4.0, 6.0, 8.0, 10.0]


def test_nice_ticks_offset_domain():
    ticks = nice_ticks(2800.0, 3300.0)
    assert ticks == [2800.0, 2900.0, 3000.0, 3100.0, 3200.0, 3300.0]


def test_nice_ticks_cap():
    for lo, hi in ((0.0, 1.0), (-3.7, 12.9), (0.001, 0.0017), (5.0, 50000.0)):
        ticks = nice_ticks(lo, hi)
        assert 2 <= len(ticks) <= 8
        assert ticks == sorted(ticks)
        assert ticks[0] >= lo - 1e-9 and ticks[-1] <= hi + 1e-9


def test_axes_and_legend_entries():
    ds = make_blob_dataset(seed=1, n_points=50, n_classes=1)
    spec = DesignSpec()
    xs, ys, legend = axes_and_legend(spec, Domain(0, 10, 0, 10), ds.classes)
    assert len(legend) == 1
    assert legend[0].label == ds.classes[0].label


# -- composition ------------------------------------------------------------------


def juxt_spec(**kw):
    base = dict(
        composition=Composition.JUXTAPOSED,
        normalization=NormalizationMode.GLOBAL,
        background=BackgroundKind.LUMINANCE,
        glyph=GlyphKind.NONE,
        bins_x=8,
        panel_size=200,
    )
    base.update(kw)
    return DesignSpec(**base)


def test_juxtaposed_one_class_one_panel():
    ds = make_blob_dataset(seed=2, n_points=300, n_classes=1)
    scene = compose(ds, juxt_spec())
    assert len(scene.panels) == 1


def test_juxtaposed_four_classes_two_by_two():
    ds = make_blob_dataset(seed=3, n_points=800, n_classes=4)
    scene = compose(ds, juxt_spec())
    assert len(scene.panels) == 4
    xs = sorted({p.viewport[0] for p in scene.panels})
    ys = sorted({p.viewport[1] for p in scene.panels})
    assert len(xs) == 2 and len(ys) == 2
    assert [p.class_id for p in scene.panels] == [0, 1, 2, 3]


def test_juxtaposed_panels_congruent():
    ds = make_blob_dataset(seed=4, n_points=600, n_classes=3)
    scene = compose(ds, juxt_spec())
    first = scene.panels[0]
    for p in scene.panels[1:]:
        assert p.viewport[2:] == first.viewport[2:]
        assert p.x_ticks == first.x_ticks
        assert p.y_ticks == first.y_ticks
        assert p.bin_polygons == first.bin_polygons


def test_superimposed_weave_global_fill_counts():
    ds = make_blob_dataset(seed=5, n_points=1000, n_classes=3)
    spec = DesignSpec(
        background=BackgroundKind.WEAVE,
        normalization=NormalizationMode.GLOBAL,
        glyph=GlyphKind.NONE,
        boundaries=True,
        bins_x=6,
        shape=ShapeKind.RECT,
        panel_size=240,
    )
    scene = compose(ds, spec)
    panel = scene.panels[0]
    assert len(panel.fills) == panel.lattice.bin_count
    assert all(isinstance(item.fill, FragmentGrid) for item in panel.fills)
    assert panel.boundaries
    assert len(panel.bin_polygons) == panel.lattice.bin_count


def test_compose_rejects_invalid_spec():
    ds = make_blob_dataset(seed=6, n_points=100, n_classes=2)
    bad = DesignSpec(glyph=GlyphKind.PIE, normalization=NormalizationMode.GLOBAL)
    with pytest.raises(SpecNotValidatedError):
        compose(ds, bad)


def test_compose_deterministic_across_workers():
    ds = make_blob_dataset(seed=7, n_points=1500, n_classes=4)
    spec = DesignSpec(
        background=BackgroundKind.WEAVE,
        normalization=NormalizationMode.BIN_INTERNAL,
        bins_x=10,
        seed=5,
        panel_size=260,
    )
    assert compose(ds, spec, workers=1) == compose(ds, spec, workers=8)
    assert compose(ds, spec) == compose(ds, spec)


def test_glyph_scene_has_glyphs_only_for_occupied_bins():
    ds = make_blob_dataset(seed=8, n_points=400, n_classes=3)
    spec = DesignSpec(
        background=BackgroundKind.LUMINANCE,
        glyph=GlyphKind.PIE,
        normalization=NormalizationMode.BIN_INTERNAL,
        shape=ShapeKind.HEX,
        bins_x=7,
        panel_size=240,
    )
    scene = compose(ds, spec)
    panel = scene.panels[0]
    assert panel.glyphs
    occupied = {item.bin for item in panel.fills if isinstance(item.fill, SolidColor)}
    for g in panel.glyphs:
        assert 0 <= g.bin < panel.lattice.bin_count
    assert len({g.bin for g in panel.glyphs}) == len(panel.glyphs)


def test_point_glyphs_within_panels():
    ds = make_blob_dataset(seed=9, n_points=500, n_classes=2)
    spec = DesignSpec(
        background=BackgroundKind.BLEND,
        glyph=GlyphKind.POINTS,
        normalization=NormalizationMode.BIN_INTERNAL,
        shape=ShapeKind.RECT,
        bins_x=6,
        panel_size=240,
        sample_budget=6,
    )
    scene = compose(ds, spec)
    panel = scene.panels[0]
    assert panel.glyphs
    for item in panel.glyphs:
        for disc in item.geometry.discs:
            assert -1e-6 <= disc.x <= panel.viewport[2] + 1e-6
            assert -1e-6 <= disc.y <= panel.viewport[3] + 1e-6


def test_scale_log_valid_everywhere():
    ds = make_blob_dataset(seed=10, n_points=900, n_classes=3)
    spec = DesignSpec(
        background=BackgroundKind.LUMINANCE,
        scale=ScaleKind.LOG,
        bins_x=9,
        panel_size=200,
    )
    scene = compose(ds, spec)
    assert scene.panels[0].fills


def test_heterogeneous_bins_need_juxtaposed():
    spec = DesignSpec(per_class_bins_x=(4, 8))
    rules = {v.rule for v in validate(spec)}
    assert "heterogeneous-needs-juxtaposed" in rules


def test_every_legal_combination_composes():
    ds = make_blob_dataset(seed=13, n_points=150, n_classes=3)
    composed = 0
    for combo in itertools.product(
        list(Composition), list(NormalizationMode), list(BackgroundKind), list(GlyphKind), (True, False)
    ):
        composition, normalization, background, glyph, boundaries = combo
        spec = DesignSpec(
            composition=composition,
            normalization=normalization,
            background=background,
            glyph=glyph,
            boundaries=boundaries,
            bins_x=3,
            panel_size=90,
            fragment_grid=3,
            sample_budget=4,
        )
        if validate(spec, ds):
            continue
        scene = compose(ds, spec)
        assert scene.panels
        composed += 1
    assert composed > 100  # the legal subset is large


def test_heterogeneous_juxtaposed_panels_differ():
    ds = make_blob_dataset(seed=12, n_points=400, n_classes=2)
    spec = juxt_spec(per_class_bins_x=(4, 8))
    scene = compose(ds, spec)
    assert scene.panels[0].lattice.bins_x == 4
    assert scene.panels[1].lattice.bins_x == 8
    assert scene.meta["homogeneous_panels"] is False
