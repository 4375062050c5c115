"""Lattice construction, assignment, polygons, and adjacency."""

import math
import random

import pytest

from binplot.errors import (
    InvalidBinIndexError,
    InvalidDomainError,
    InvalidParameterError,
    OutOfDomainError,
)
from binplot.tessellation import (
    Domain,
    ShapeKind,
    build_lattice,
    point_in_convex_polygon,
    polygon_area,
    signed_area,
)

UNIT10 = Domain(0.0, 10.0, 0.0, 10.0)


# -- oracles ----------------------------------------------------------------


def enumerate_hex_rows(domain, bins_x):
    """Stack hex rows bottom-up until every y in the domain is covered.

    A row of pointy-top hexes centered at cy covers the strip up to
    cy + R/2 on its own; the interlocking fringe above that needs the
    next row.  Count rows until the last row's own strip reaches y_max.
    """
    w = domain.width / bins_x
    r = w / math.sqrt(3.0)
    pitch = 1.5 * r
    rows = 0
    while True:
        cy = domain.y_min + rows * pitch
        rows += 1
        if cy + r / 2.0 >= domain.y_max - 1e-12:
            return rows


def brute_force_hex_assign(lattice, x, y):
    """Scan every hex center; minimum distance, ties to lowest index."""
    best_d2 = math.inf
    best = -1
    for b in range(lattice.bin_count):
        cx, cy = lattice.bin_center(b)
        d2 = (x - cx) ** 2 + (y - cy) ** 2
        if d2 < best_d2:
            best_d2 = d2
            best = b
    return best


def containment_assign(lattice, x, y):
    """Point-in-polygon over all bins with the stated tie-breaks.

    Rect/Tri half-open intervals put shared rect edges in the upper or
    right cell (the larger rect index) and shared diagonals in the lower
    triangle; hex ties go to the lowest index.
    """
    containing = [
        b
        for b in range(lattice.bin_count)
        if point_in_convex_polygon(x, y, lattice.bin_polygon(b, clip=False))
    ]
    assert containing, f"point ({x}, {y}) in no polygon"
    if lattice.shape is ShapeKind.HEX:
        return containing[0]
    if lattice.shape is ShapeKind.RECT:
        return containing[-1]
    best_cell = max(b // 2 for b in containing)
    return min(b for b in containing if b // 2 == best_cell)


# -- construction -----------------------------------------------------------


def test_rect_10x10():
    lat = build_lattice(UNIT10, ShapeKind.RECT, 10)
    assert (lat.grid_cols, lat.grid_rows) == (10, 10)
    assert lat.cell_width == 1.0 and lat.cell_height == 1.0
    assert lat.bin_count == 100


def test_rect_single_cell():
    lat = build_lattice(UNIT10, ShapeKind.RECT, 1)
    assert lat.bin_count == 1
    assert lat.bin_polygon(0) == [(0.0, 0.0), (10.0, 0.0), (10.0, 10.0), (0.0, 10.0)]


def test_hex_example_geometry():
    domain = Domain(0.0, 12.0, 0.0, 12.0)
    lat = build_lattice(domain, ShapeKind.HEX, 6)
    assert lat.cell_width == pytest.approx(2.0)  # column pitch
    rows = enumerate_hex_rows(domain, 6)
    assert lat.grid_rows == rows == 8
    # even rows hold bins_x + 1 cells, odd rows bins_x
    expected = sum(7 if j % 2 == 0 else 6 for j in range(rows))
    assert lat.bin_count == expected == 52


def test_anisotropic_rect_rows_follow_cell_size():
    lat = build_lattice(Domain(0.0, 10.0, 0.0, 25.0), ShapeKind.RECT, 10)
    assert lat.cell_width == 1.0
    assert lat.grid_rows == 25


def test_tri_has_two_triangles_per_cell():
    lat = build_lattice(UNIT10, ShapeKind.TRI, 5)
    assert lat.grid_cols == 10
    assert lat.bin_count == lat.grid_rows * 10


def test_invalid_inputs():
    with pytest.raises(InvalidParameterError):
        build_lattice(UNIT10, ShapeKind.RECT, 0)
    with pytest.raises(InvalidDomainError):
        Domain(0.0, 0.0, 0.0, 1.0)
    with pytest.raises(InvalidDomainError):
        Domain(0.0, 1.0, 5.0, 1.0)


# -- assignment -------------------------------------------------------------

def test_rect_assign_half_open():
    lat = build_lattice(UNIT10, ShapeKind.RECT, 10)
    assert lat.assign(2.5, 3.5) == lat.bin_index(2, 3)
    assert lat.assign(2.0, 3.0) == lat.bin_index(2, 3)  # shared edges go to the upper cell


def test_rect_assign_closed_top_right():
    lat = build_lattice(UNIT10, ShapeKind.RECT, 10)
    assert lat.assign(10.0, 10.0) == lat.bin_index(9, 9)
    assert lat.assign(10.0, 0.0) == lat.bin_index(9, 0)
    assert lat.assign(0.0, 10.0) == lat.bin_index(0, 9)


def test_assign_rejects_outside():
    lat = build_lattice(UNIT10, ShapeKind.RECT, 10)
    with pytest.raises(OutOfDomainError):
        lat.assign(10.0001, 5.0)
    with pytest.raises(OutOfDomainError):
        lat.assign(5.0, -0.0001)


@pytest.mark.parametrize("shape", list(ShapeKind))
def test_assign_matches_containment_oracle(shape):
    rng = random.Random(4217)
    lat = build_lattice(Domain(-3.0, 9.0, 2.0, 8.5), shape, 7)
    for _ in range(1000):
        x = rng.uniform(-3.0, 9.0)
        y = rng.uniform(2.0, 8.5)
        assert lat.assign(x, y) == containment_assign(lat, x, y)


def test_hex_assign_matches_brute_force_nearest_center():
    rng = random.Random(99)
    lat = build_lattice(UNIT10, ShapeKind.HEX, 6)
    for _ in range(1000):
        x, y = rng.uniform(0, 10), rng.uniform(0, 10)
        assert lat.assign(x, y) == brute_force_hex_assign(lat, x, y)


def test_hex_assign_tie_breaks_to_lowest_index():
    lat = build_lattice(UNIT10, ShapeKind.HEX, 5)
    # midpoint of the shared edge between bins 0 and 1 is equidistant
    c0, c1 = lat.bin_center(0), lat.bin_center(1)
    mx, my = (c0[0] + c1[0]) / 2.0, (c0[1] + c1[1]) / 2.0
    assert lat.assign(mx, my) == 0
    assert brute_force_hex_assign(lat, mx, my) == 0


# -- polygons ---------------------------------------------------------------


def test_rect_corner_polygon():
    lat = build_lattice(UNIT10, ShapeKind.RECT, 10)
    assert lat.bin_polygon(0) == [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


@pytest.mark.parametrize("shape,arity", [(ShapeKind.RECT, 4), (ShapeKind.HEX, 6), (ShapeKind.TRI, 3)])
def test_unclipped_arity(shape, arity):
    lat = build_lattice(Domain(0.0, 7.0, 0.0, 5.0), shape, 4)
    for b in range(lat.bin_count):
        assert len(lat.bin_polygon(b, clip=False)) == arity


@pytest.mark.parametrize("shape", list(ShapeKind))
def test_polygons_ccw(shape):
    lat = build_lattice(Domain(0.0, 7.0, 0.0, 5.0), shape, 4)
    for b in range(lat.bin_count):
        assert signed_area(lat.bin_polygon(b, clip=False)) > 0
        clipped = lat.bin_polygon(b)
        if len(clipped) >= 3:
            assert signed_area(clipped) > 0


def test_hex_unclipped_areas_equal():
    lat = build_lattice(Domain(0.0, 12.0, 0.0, 12.0), ShapeKind.HEX, 6)
    areas = [polygon_area(lat.bin_polygon(b, clip=False)) for b in range(lat.bin_count)]
    ref = areas[0]
    for a in areas[1:]:
        assert abs(a - ref) <= 1e-9 * ref


@pytest.mark.parametrize("shape", list(ShapeKind))
@pytest.mark.parametrize("bins_x", [1, 4, 9])
def test_clipped_areas_tile_domain(shape, bins_x):
    domain = Domain(-1.0, 5.0, 0.0, 4.3)
    lat = build_lattice(domain, shape, bins_x)
    total = sum(polygon_area(lat.bin_polygon(b)) for b in range(lat.bin_count))
    target = domain.width * domain.height
    assert abs(total - target) <= 1e-6 * target


def test_bin_polygon_invalid_index():
    lat = build_lattice(UNIT10, ShapeKind.RECT, 2)
    with pytest.raises(InvalidBinIndexError):
        lat.bin_polygon(lat.bin_count)
    with pytest.raises(InvalidBinIndexError):
        lat.neighbors(-1)


# -- adjacency --------------------------------------------------------------


def shared_edge_neighbors(lattice, bin):
    """Scan all polygon pairs for a shared (2-vertex) edge.

    Vertices are quantized to 1e-9 of the cell size first: adjacent hex
    rows reach the same corner through different arithmetic, so exact
    float equality would miss shared edges by one ulp.
    """
    tol = lattice.cell_width * 1e-9

    def edges(poly):
        q = [(round(x / tol), round(y / tol)) for x, y in poly]
        return {frozenset((q[i], q[(i + 1) % len(q)])) for i in range(len(q))}

    mine = edges(lattice.bin_polygon(bin, clip=False))
    out = []
    for other in range(lattice.bin_count):
        if other != bin and mine & edges(lattice.bin_polygon(other, clip=False)):
            out.append(other)
    return out


def test_rect_interior_neighbors():
    lat = build_lattice(UNIT10, ShapeKind.RECT, 10)
    b = lat.bin_index(5, 5)
    expected = {lat.bin_index(4, 5), lat.bin_index(6, 5), lat.bin_index(5, 4), lat.bin_index(5, 6)}
    assert set(lat.neighbors(b)) == expected


def test_rect_corner_has_two_neighbors():
    lat = build_lattice(UNIT10, ShapeKind.RECT, 10)
    assert len(lat.neighbors(0)) == 2


@pytest.mark.parametrize("shape,interior_count", [(ShapeKind.RECT, 4), (ShapeKind.HEX, 6), (ShapeKind.TRI, 3)])
def test_neighbors_match_shared_edge_scan(shape, interior_count):
    lat = build_lattice(Domain(0.0, 6.0, 0.0, 6.0), shape, 5)
    interior_seen = False
    for b in range(lat.bin_count):
        got = lat.neighbors(b)
        assert got == sorted(shared_edge_neighbors(lat, b))
        if len(got) == interior_count:
            interior_seen = True
    assert interior_seen


# -- properties -------------------------------------------------------------


@pytest.mark.parametrize("shape", list(ShapeKind))
def test_partition_property(shape):
    rng = random.Random(7)
    lat = build_lattice(Domain(0.0, 6.0, 0.0, 6.0), shape, 5)
    pts = [(rng.uniform(0, 6), rng.uniform(0, 6)) for _ in range(500)]
    groups = {}
    for p in pts:
        groups.setdefault(lat.assign(*p), []).append(p)
    assert sum(len(g) for g in groups.values()) == len(pts)
    assert all(0 <= b < lat.bin_count for b in groups)


@pytest.mark.parametrize("shape", list(ShapeKind))
def test_deterministic_construction_and_assignment(shape):
    a = build_lattice(Domain(0.2, 5.7, -1.0, 3.3), shape, 6)
    b = build_lattice(Domain(0.2, 5.7, -1.0, 3.3), shape, 6)
    assert a == b
    rng = random.Random(3)
    for _ in range(200):
        x, y = rng.uniform(0.2, 5.7), rng.uniform(-1.0, 3.3)
        assert a.assign(x, y) == b.assign(x, y)
        assert a.bin_polygon(a.assign(x, y)) == b.bin_polygon(b.assign(x, y))
