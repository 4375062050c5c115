"""Counting, normalization, attenuation, apportionment, and sampling."""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from binplot.aggregation import (
    ClassInfo,
    Dataset,
    NormalizationMode,
    ScaleKind,
    aggregate,
    class_quotas,
    density_intensity,
    largest_remainder,
    normalize,
    sample_points,
)
from binplot.errors import PointOutOfDomainError
from binplot.tessellation import Domain, ShapeKind, build_lattice, point_in_convex_polygon
from conftest import make_blob_dataset

MODES = list(NormalizationMode)


# -- oracles ----------------------------------------------------------------


def naive_counts(lattice, dataset):
    """Per-point loop with a plain dict accumulator."""
    acc = {}
    for x, y, c in zip(dataset.xs, dataset.ys, dataset.class_ids):
        acc[(lattice.assign(float(x), float(y)), int(c))] = (
            acc.get((lattice.assign(float(x), float(y)), int(c)), 0) + 1
        )
    return acc


def two_loop_normalize(counts, mode):
    """Straightforward double loop over the counts matrix."""
    n_bins = len(counts)
    n_classes = len(counts[0]) if counts else 0
    out = [[0.0] * n_classes for _ in range(n_bins)]
    if mode is NormalizationMode.BIN_INTERNAL:
        for b in range(n_bins):
            m = max(counts[b])
            if m > 0:
                for c in range(n_classes):
                    out[b][c] = counts[b][c] / m
    elif mode is NormalizationMode.CLASS_INTERNAL:
        for c in range(n_classes):
            m = max(counts[b][c] for b in range(n_bins))
            if m > 0:
                for b in range(n_bins):
                    out[b][c] = counts[b][c] / m
    else:
        m = max(max(row) for row in counts) if n_bins else 0
        if m > 0:
            for b in range(n_bins):
                for c in range(n_classes):
                    out[b][c] = counts[b][c] / m
    return out


def exact_largest_remainder(weights, total):
    """Hamilton apportionment in exact rational arithmetic."""
    wsum = sum(weights)
    if wsum == 0:
        return [0] * len(weights)
    shares = [Fraction(total) * Fraction(w) / Fraction(wsum) for w in weights]
    out = [int(s) for s in shares]
    order = sorted(range(len(weights)), key=lambda i: (-(shares[i] - out[i]), i))
    for i in order[: total - sum(out)]:
        out[i] += 1
    return out


# -- aggregate ----------------------------------------------------------------


def test_empty_dataset():
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.RECT, 5)
    ds = Dataset(np.array([]), np.array([]), np.array([], dtype=np.int64), [ClassInfo(0, "a")])
    grid = aggregate(lat, ds)
    assert grid.grand_total == 0
    assert not grid.counts.any()


def test_four_points_one_cell():
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.RECT, 10)
    pts = [(3.2, 4.3, 0), (3.5, 4.5, 0), (3.9, 4.1, 0), (3.1, 4.9, 0)]
    ds = Dataset.from_points(pts, ["a", "b"])
    grid = aggregate(lat, ds)
    b = lat.bin_index(3, 4)
    assert grid.counts[b, 0] == 4
    assert grid.grand_total == 4


@pytest.mark.parametrize("shape", list(ShapeKind))
def test_counts_match_naive_loop(shape):
    ds = make_blob_dataset(seed=5, n_points=10_000, n_classes=3)
    lat = build_lattice(Domain(0, 10, 0, 10), shape, 13)
    grid = aggregate(lat, ds)
    assert grid.grand_total == 10_000
    oracle = naive_counts(lat, ds)
    for (b, c), n in oracle.items():
        assert grid.counts[b, c] == n
    assert grid.counts.sum() == sum(oracle.values())


def test_order_invariance(blob_dataset):
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.HEX, 8)
    fwd = aggregate(lat, blob_dataset)
    perm = np.random.RandomState(3).permutation(len(blob_dataset))
    shuffled = Dataset(
        blob_dataset.xs[perm],
        blob_dataset.ys[perm],
        blob_dataset.class_ids[perm],
        blob_dataset.classes,
    )
    assert np.array_equal(fwd.counts, aggregate(lat, shuffled).counts)


def test_out_of_domain_reports_indices():
    lat = build_lattice(Domain(0, 1, 0, 1), ShapeKind.RECT, 2)
    ds = Dataset.from_points([(0.5, 0.5, 0), (2.0, 0.5, 0), (0.5, -3.0, 0)], ["a"])
    with pytest.raises(PointOutOfDomainError) as err:
        aggregate(lat, ds)
    assert err.value.indices == [1, 2]


def test_summary_invariants(blob_dataset):
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.TRI, 6)
    grid = aggregate(lat, blob_dataset)
    assert np.array_equal(grid.totals, grid.counts.sum(axis=1))
    assert np.array_equal(grid.class_totals, grid.counts.sum(axis=0))
    assert grid.grand_total == len(blob_dataset)


# -- normalize / attenuate ----------------------------------------------------


def grid_from_counts(counts):
    from binplot.aggregation import BinSummaryGrid

    counts = np.asarray(counts, dtype=np.int64)
    lat = build_lattice(Domain(0, 1, 0, 1), ShapeKind.RECT, 1)
    return BinSummaryGrid(lattice=lat, counts=counts)


def test_bin_internal_example():
    grid = grid_from_counts([[4, 1]])
    values = normalize(grid, NormalizationMode.BIN_INTERNAL).values
    assert values.tolist() == [[1.0, 0.25]]


def test_class_internal_example():
    grid = grid_from_counts([[4], [8], [2]])
    values = normalize(grid, NormalizationMode.CLASS_INTERNAL).values
    assert values.ravel().tolist() == [0.5, 1.0, 0.25]


def test_global_example():
    grid = grid_from_counts([[4, 1], [8, 2]])
    values = normalize(grid, NormalizationMode.GLOBAL).values
    assert values.tolist() == [[0.5, 0.125], [1.0, 0.25]]


@pytest.mark.parametrize("mode", MODES)
def test_normalize_matches_two_loop_oracle(mode, blob_dataset):
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.RECT, 12)
    grid = aggregate(lat, blob_dataset)
    values = normalize(grid, mode).values
    oracle = two_loop_normalize(grid.counts.tolist(), mode)
    assert values.tolist() == oracle  # exact equality, same divisions


@pytest.mark.parametrize("mode", MODES)
@pytest.mark.parametrize("scale", list(ScaleKind))
def test_unit_max_reaches_one(mode, scale, blob_dataset):
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.HEX, 9)
    grid = aggregate(lat, blob_dataset)
    iv = normalize(grid, mode, scale)
    assert float(iv.values.min()) >= 0.0 and float(iv.values.max()) <= 1.0
    if mode is NormalizationMode.BIN_INTERNAL:
        units = iv.values.max(axis=1)[grid.totals > 0]
    elif mode is NormalizationMode.CLASS_INTERNAL:
        units = iv.values.max(axis=0)[grid.class_totals > 0]
    else:
        units = iv.values.max(initial=0.0).reshape(1) if grid.grand_total else np.array([])
    assert np.all(units == 1.0)


def test_log_attenuation_values():
    # oracle: direct evaluation of the log1p ratio
    grid = grid_from_counts([[1], [10], [100]])
    values = normalize(grid, NormalizationMode.CLASS_INTERNAL, ScaleKind.LOG).values.ravel()
    expected = [math.log1p(n) / math.log1p(100) for n in (1, 10, 100)]
    assert values.tolist() == pytest.approx(expected, abs=1e-12)
    assert [round(v, 4) for v in values] == [0.1502, 0.5196, 1.0]


def test_log_endpoints():
    grid = grid_from_counts([[0], [7]])
    values = normalize(grid, NormalizationMode.GLOBAL, ScaleKind.LOG).values.ravel()
    assert values[0] == 0.0
    assert values[1] == 1.0


def test_log_preserves_ordering(blob_dataset):
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.RECT, 9)
    grid = aggregate(lat, blob_dataset)
    lin = normalize(grid, NormalizationMode.GLOBAL).values.ravel()
    logged = normalize(grid, NormalizationMode.GLOBAL, ScaleKind.LOG).values.ravel()
    for i in range(len(lin)):
        for j in range(i + 1, len(lin)):
            if lin[i] < lin[j]:
                assert logged[i] < logged[j]
            elif lin[i] == lin[j]:
                assert logged[i] == logged[j]


def test_density_intensity(blob_dataset):
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.RECT, 9)
    grid = aggregate(lat, blob_dataset)
    dens = density_intensity(grid)
    assert dens.max() == 1.0
    top = int(np.argmax(grid.totals))
    assert dens[top] == 1.0


# -- apportionment ------------------------------------------------------------


def test_quota_examples():
    assert class_quotas([90, 10], 10) == [9, 1]
    assert class_quotas([99, 1], 5) == [4, 1]
    assert largest_remainder([0.5, 0.25, 0.25], 16) == [8, 4, 4]


def test_largest_remainder_matches_exact_oracle():
    rng = random.Random(17)
    for _ in range(300):
        k = rng.randint(1, 8)
        weights = [rng.randint(0, 50) for _ in range(k)]
        total = rng.randint(0, 40)
        got = largest_remainder(weights, total)
        assert got == exact_largest_remainder(weights, total)
        if sum(weights):
            assert sum(got) == total
            for w, q in zip(weights, got):
                assert abs(q - total * w / sum(weights)) < 1.0


def test_quota_floor_at_one_takes_from_largest():
    quotas = class_quotas([980, 10, 5, 5], 10)
    assert quotas == [7, 1, 1, 1]
    assert sum(quotas) == 10


def test_budget_raised_to_class_count():
    quotas = class_quotas([5, 5, 5, 5], 2)
    assert quotas == [1, 1, 1, 1]


# -- sampling -----------------------------------------------------------------


def bin_point_fixture(seed, counts):
    rng = random.Random(seed)
    pts = []
    for cid, n in counts.items():
        for _ in range(n):
            pts.append((rng.uniform(4.0, 5.0), rng.uniform(4.0, 5.0), cid))
    return pts


def test_sampling_covers_all_classes():
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.RECT, 10)
    pts = bin_point_fixture(3, {0: 97, 1: 2, 2: 1})
    sample = sample_points(pts, 6, lat, lat.assign(4.5, 4.5), seed=9)
    assert {c for _, _, c in sample} == {0, 1, 2}
    assert len(sample) == 6


def test_sampling_single_class():
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.RECT, 10)
    pts = bin_point_fixture(4, {2: 40})
    b = lat.assign(4.5, 4.5)
    sample = sample_points(pts, 3, lat, b, seed=1)
    assert len(sample) == 3
    poly = lat.bin_polygon(b)
    assert all(point_in_convex_polygon(x, y, poly, eps=1e-12) for x, y, _ in sample)


def test_sampling_deterministic_and_seed_sensitive():
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.HEX, 10)
    pts = bin_point_fixture(8, {0: 50, 1: 30})
    b = lat.assign(4.5, 4.5)
    pts = [p for p in pts if lat.assign(p[0], p[1]) == b] or pts
    a = sample_points(pts, 8, lat, b, seed=42)
    assert a == sample_points(pts, 8, lat, b, seed=42)
    assert a != sample_points(pts, 8, lat, b, seed=43)


def test_sampling_nudges_discs_inside():
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.RECT, 10)
    b = lat.bin_index(4, 4)
    poly = lat.bin_polygon(b)
    # points hugging the cell edges
    pts = [(4.001, 4.5, 0), (4.999, 4.998, 1), (4.5, 4.0005, 0)]
    r = 0.08
    sample = sample_points(pts, 3, lat, b, seed=0, disc_radius=r)
    for x, y, _ in sample:
        for shift in ((r, 0), (-r, 0), (0, r), (0, -r)):
            assert point_in_convex_polygon(x + shift[0], y + shift[1], poly, eps=1e-9)


def test_quota_respects_bin_proportions():
    lat = build_lattice(Domain(0, 10, 0, 10), ShapeKind.RECT, 10)
    pts = bin_point_fixture(5, {0: 90, 1: 10})
    sample = sample_points(pts, 10, lat, lat.assign(4.5, 4.5), seed=2)
    by_class = {}
    for _, _, c in sample:
        by_class[c] = by_class.get(c, 0) + 1
    assert by_class == {0: 9, 1: 1}
