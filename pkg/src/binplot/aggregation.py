"""Per-bin per-class counting, normalization, and point sampling.

Counts are reduced to intensities in [0, 1] under one of three
normalization modes:

* bin-internal: divide by the maximum frequency within each bin,
* class-internal: divide by the maximum frequency within each class,
* global: divide by the single maximum over all bins and classes.

A log attenuation can be applied before the division to keep dense
bins from washing out the rest of the scale.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidParameterError, PointOutOfDomainError
from .tessellation import (
    BinLattice,
    Domain,
    Point,
    point_in_convex_polygon,
    polygon_centroid,
)


class NormalizationMode(str, Enum):
    BIN_INTERNAL = "bin-internal"
    CLASS_INTERNAL = "class-internal"
    GLOBAL = "global"


class ScaleKind(str, Enum):
    LINEAR = "linear"
    LOG = "log"


@dataclass(frozen=True)
class ClassInfo:
    class_id: int
    label: str


@dataclass
class Dataset:
    """Labeled 2D points plus an ordered class registry."""

    xs: np.ndarray
    ys: np.ndarray
    class_ids: np.ndarray
    classes: list[ClassInfo]

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.float64)
        self.ys = np.asarray(self.ys, dtype=np.float64)
        self.class_ids = np.asarray(self.class_ids, dtype=np.int64)
        if not (len(self.xs) == len(self.ys) == len(self.class_ids)):
            raise InvalidParameterError("point arrays must have equal length")
        known = {c.class_id for c in self.classes}
        if len(self.class_ids) and not set(np.unique(self.class_ids)) <= known:
            raise InvalidParameterError("point references a class_id missing from the registry")

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def class_count(self) -> int:
        return len(self.classes)

    def bounding_domain(self, pad_fraction: float = 0.01) -> Domain:
        """Data bounding box padded per axis so extreme points are interior."""
        if len(self) == 0:
            return Domain(0.0, 1.0, 0.0, 1.0)
        x_min, x_max = float(self.xs.min()), float(self.xs.max())
        y_min, y_max = float(self.ys.min()), float(self.ys.max())
        pad_x = (x_max - x_min) * pad_fraction or 0.5
        pad_y = (y_max - y_min) * pad_fraction or 0.5
        return Domain(x_min - pad_x, x_max + pad_x, y_min - pad_y, y_max + pad_y)

    @classmethod
    def from_points(cls, points: Iterable[tuple[float, float, int]], labels: Sequence[str]) -> "Dataset":
        pts = list(points)
        xs = np.array([p[0] for p in pts], dtype=np.float64)
        ys = np.array([p[1] for p in pts], dtype=np.float64)
        cids = np.array([p[2] for p in pts], dtype=np.int64)
        classes = [ClassInfo(i, lbl) for i, lbl in enumerate(labels)]
        return cls(xs, ys, cids, classes)


@dataclass
class BinSummaryGrid:
    """Raw frequency counts: one row per bin, one column per class."""

    lattice: BinLattice
    counts: np.ndarray  # (bin_count, class_count) int64
    classes: list[ClassInfo] = field(default_factory=list)

    @property
    def totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def class_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def grand_total(self) -> int:
        return int(self.counts.sum())

    @property
    def class_count(self) -> int:
        return self.counts.shape[1]


@dataclass
class IntensityGrid:
    """Per-bin per-class values in [0, 1] under a normalization mode."""

    values: np.ndarray  # (bin_count, class_count) float64
    mode: NormalizationMode
    scale: ScaleKind = ScaleKind.LINEAR


def aggregate(lattice: BinLattice, dataset: Dataset) -> BinSummaryGrid:
    """Count points per bin per class.

    Every point must lie inside the (closed) lattice domain; offenders
    are reported with their indices.  Input order never affects the
    result, so point partitions may be counted in parallel and summed.
    """
    counts = np.zeros((lattice.bin_count, dataset.class_count), dtype=np.int64)
    d = lattice.domain
    xs, ys, cids = dataset.xs, dataset.ys, dataset.class_ids
    inside = (xs >= d.x_min) & (xs <= d.x_max) & (ys >= d.y_min) & (ys <= d.y_max)
    if not inside.all():
        raise PointOutOfDomainError(np.flatnonzero(~inside).tolist())
    from .tessellation import ShapeKind

    if lattice.shape is ShapeKind.RECT and len(xs):
        cols = np.minimum(((xs - d.x_min) / lattice.cell_width).astype(np.int64), lattice.grid_cols - 1)
        rows = np.minimum(((ys - d.y_min) / lattice.cell_height).astype(np.int64), lattice.grid_rows - 1)
        bins = rows * lattice.grid_cols + cols
        np.add.at(counts, (bins, cids), 1)
    else:
        assign = lattice.assign
        for x, y, c in zip(xs.tolist(), ys.tolist(), cids.tolist()):
            counts[assign(x, y), c] += 1
    return BinSummaryGrid(lattice=lattice, counts=counts, classes=list(dataset.classes))


def _unit_max(counts: np.ndarray, mode: NormalizationMode) -> np.ndarray:
    """Normalization denominator broadcast to the counts shape."""
    if mode is NormalizationMode.BIN_INTERNAL:
        return counts.max(axis=1, keepdims=True)
    if mode is NormalizationMode.CLASS_INTERNAL:
        return counts.max(axis=0, keepdims=True)
    return counts.max(initial=0, keepdims=True).reshape(1, 1)


def normalize(
    grid: BinSummaryGrid,
    mode: NormalizationMode,
    scale: ScaleKind = ScaleKind.LINEAR,
) -> IntensityGrid:
    """Reduce counts to intensities in [0, 1].

    Empty normalization units come out as all zeros; otherwise the unit
    maximum maps to exactly 1.0.  With log scale, counts n become
    log(1+n) / log(1+n_max) of their unit, which keeps the maximum at
    1.0 and preserves ordering.
    """
    counts = grid.counts.astype(np.float64)
    if counts.size == 0:
        return IntensityGrid(values=np.zeros_like(counts), mode=mode, scale=scale)
    num = np.log1p(counts) if scale is ScaleKind.LOG else counts
    den = _unit_max(num, mode)
    values = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    return IntensityGrid(values=values, mode=mode, scale=scale)


def attenuate(grid: BinSummaryGrid, mode: NormalizationMode, scale: ScaleKind) -> IntensityGrid:
    """Alias of :func:`normalize` with an explicit scale argument."""
    return normalize(grid, mode, scale)


def density_intensity(grid: BinSummaryGrid, scale: ScaleKind = ScaleKind.LINEAR) -> np.ndarray:
    """Per-bin total density scaled to [0, 1] over the busiest bin."""
    totals = grid.totals.astype(np.float64)
    if scale is ScaleKind.LOG:
        totals = np.log1p(totals)
    m = totals.max(initial=0.0)
    return totals / m if m > 0 else totals


def largest_remainder(weights: Sequence[float], total: int) -> list[int]:
    """Integer apportionment of ``total`` proportional to ``weights``.

    Each entry gets the floor of its exact share; leftovers go to the
    largest fractional remainders, ties broken by position.  Entries
    differ from their exact shares by strictly less than 1.  Shares are
    computed in exact rational arithmetic so tie-breaks never depend on
    float rounding.
    """
    if total < 0:
        raise InvalidParameterError("total must be non-negative")
    if sum(weights) <= 0:
        return [0] * len(weights)
    wsum = sum(Fraction(w) for w in weights)
    exact = [Fraction(total) * Fraction(w) / wsum for w in weights]
    out = [int(e) for e in exact]
    order = sorted(range(len(weights)), key=lambda i: (-(exact[i] - out[i]), i))
    for i in order[: total - sum(out)]:
        out[i] += 1
    return out


def class_quotas(counts: Sequence[int], budget: int) -> list[int]:
    """Largest-remainder quotas with every non-empty class kept at >= 1.

    The floor-at-one adjustment takes slots from the class with the
    largest quota, repeatedly, which distorts dominant proportions the
    least.  A budget below the number of non-empty classes is raised to
    that number.
    """
    present = [i for i, c in enumerate(counts) if c > 0]
    if not present:
        return [0] * len(counts)
    budget = max(budget, len(present))
    quotas = largest_remainder(counts, budget)
    while True:
        starved = [i for i in present if quotas[i] == 0]
        if not starved:
            return quotas
        donor = max(range(len(quotas)), key=lambda i: (quotas[i], -i))
        quotas[donor] -= 1
        quotas[starved[0]] += 1


def sample_points(
    bin_points: Sequence[tuple[float, float, int]],
    budget: int,
    lattice: BinLattice,
    bin: int,
    seed: int,
    disc_radius: float = 0.0,
) -> list[tuple[float, float, int]]:
    """Deterministically sample a bin's points, one per class minimum.

    Quotas follow :func:`class_quotas` over the bin's class mix; the
    seed fixes both which points are drawn and their order.  A sampled
    point whose disc of ``disc_radius`` (data units) would cross the
    bin boundary is pulled toward the bin centroid until it fits.
    """
    if budget < 1:
        raise InvalidParameterError("budget must be >= 1")
    if not bin_points:
        return []
    by_class: dict[int, list[tuple[float, float, int]]] = {}
    for p in bin_points:
        by_class.setdefault(p[2], []).append(p)
    class_ids = sorted(by_class)
    counts = [len(by_class[c]) for c in class_ids]
    quotas = class_quotas(counts, budget)
    rng = random.Random(seed)
    polygon = lattice.bin_polygon(bin)
    centroid = polygon_centroid(polygon)
    out: list[tuple[float, float, int]] = []
    for cid, quota in zip(class_ids, quotas):
        pool = by_class[cid]
        quota = min(quota, len(pool))
        chosen = pool if quota == len(pool) else rng.sample(pool, quota)
        for x, y, c in chosen:
            nx, ny = nudge_inside(x, y, polygon, centroid, disc_radius)
            out.append((nx, ny, c))
    return out


def nudge_inside(
    x: float,
    y: float,
    polygon: list[Point],
    centroid: Point,
    radius: float,
) -> Point:
    """Move a point toward the centroid until its disc clears every edge.

    Signed edge distance is linear along the segment to the centroid, so
    the minimal sufficient step solves in closed form per edge.  If even
    the centroid lacks clearance the centroid is returned.
    """
    if radius <= 0.0 and point_in_convex_polygon(x, y, polygon):
        return (x, y)
    t_needed = 0.0
    n = len(polygon)
    for i in range(n):
        x0, y0 = polygon[i]
        x1, y1 = polygon[(i + 1) % n]
        ex, ey = x1 - x0, y1 - y0
        norm = (ex * ex + ey * ey) ** 0.5
        if norm == 0.0:
            continue
        # inward signed distance for CCW polygons
        d_p = (ex * (y - y0) - ey * (x - x0)) / norm
        d_c = (ex * (centroid[1] - y0) - ey * (centroid[0] - x0)) / norm
        if d_p >= radius:
            continue
        if d_c <= d_p:
            return centroid
        t = (radius - d_p) / (d_c - d_p)
        t_needed = max(t_needed, min(1.0, t))
    if t_needed == 0.0:
        return (x, y)
    return (x + t_needed * (centroid[0] - x), y + t_needed * (centroid[1] - y))
