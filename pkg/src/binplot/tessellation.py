"""Regular bin lattices over a 2D data domain.

Three shapes tile the plane: rectangles, pointy-top hexagons, and
triangles (rectangular cells split along alternating diagonals).  All
lattice geometry lives in data space, uniformly scaled on both axes:
``bins_x`` cells span the x extent and the same data-per-unit factor
applies to y, so hexagons are regular whenever the rendered panel
preserves the data aspect ratio.

Cells overhanging the domain edge are clipped for rendering but still
own their interior points.  Bin indices are row-major from the bottom
row up and are stable across runs.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum

from .errors import InvalidBinIndexError, InvalidParameterError, OutOfDomainError

Point = tuple[float, float]
Polygon = list[Point]

_SQRT3 = math.sqrt(3.0)
_COVER_EPS = 1e-9


class ShapeKind(str, Enum):
    RECT = "rect"
    HEX = "hex"
    TRI = "tri"


@dataclass(frozen=True)
class Domain:
    """Closed axis-aligned extent of the data space."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            from .errors import InvalidDomainError

            raise InvalidDomainError(
                f"degenerate domain [{self.x_min}, {self.x_max}] x [{self.y_min}, {self.y_max}]"
            )

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


@dataclass(frozen=True)
class BinLattice:
    """Tessellation descriptor with point-to-bin assignment.

    Immutable after construction; :meth:`assign` and :meth:`bin_polygon`
    are pure and safe to call concurrently.
    """

    shape: ShapeKind
    domain: Domain
    bins_x: int
    cell_width: float   # column pitch in data units
    cell_height: float  # row pitch in data units (1.5 * circumradius for hex)
    grid_rows: int
    grid_cols: int
    bin_count: int
    hex_radius: float = 0.0
    _row_starts: tuple[int, ...] = field(default=(), repr=False)

    # -- indexing ---------------------------------------------------------

    def row_ncols(self, row: int) -> int:
        """Number of bins in a lattice row."""
        if self.shape is ShapeKind.HEX:
            return self.bins_x + 1 if row % 2 == 0 else self.bins_x
        return self.grid_cols

    def bin_index(self, col: int, row: int) -> int:
        if self.shape is ShapeKind.HEX:
            return self._row_starts[row] + col
        return row * self.grid_cols + col

    def bin_grid_position(self, bin: int) -> tuple[int, int]:
        """(col, row) of a bin; for triangles col counts half-cells."""
        self._check_bin(bin)
        if self.shape is ShapeKind.HEX:
            row = bisect_right(self._row_starts, bin) - 1
            return bin - self._row_starts[row], row
        return bin % self.grid_cols, bin // self.grid_cols

    def _check_bin(self, bin: int) -> None:
        if not 0 <= bin < self.bin_count:
            raise InvalidBinIndexError(f"bin {bin} outside [0, {self.bin_count})")

    # -- geometry ---------------------------------------------------------

    def bin_center(self, bin: int) -> Point:
        """Cell center (hex/rect) or triangle centroid, in data space."""
        self._check_bin(bin)
        d = self.domain
        if self.shape is ShapeKind.HEX:
            col, row = self.bin_grid_position(bin)
            off = 0.0 if row % 2 == 0 else self.cell_width / 2.0
            return (d.x_min + off + col * self.cell_width, d.y_min + row * self.cell_height)
        if self.shape is ShapeKind.RECT:
            col, row = self.bin_grid_position(bin)
            return (
                d.x_min + (col + 0.5) * self.cell_width,
                d.y_min + (row + 0.5) * self.cell_height,
            )
        verts = self.bin_polygon(bin, clip=False)
        cx = (verts[0][0] + verts[1][0] + verts[2][0]) / 3.0
        cy = (verts[0][1] + verts[1][1] + verts[2][1]) / 3.0
        return (cx, cy)

    def bin_polygon(self, bin: int, clip: bool = True) -> Polygon:
        """Cell outline as CCW vertices, clipped to the domain by default.

        Unclipped arity is fixed per shape (4 rect, 6 hex, 3 tri);
        clipping against the domain box may change it for edge bins.
        Adjacent bins share exact edge coordinates.
        """
        self._check_bin(bin)
        d = self.domain
        if self.shape is ShapeKind.RECT:
            col, row = self.bin_grid_position(bin)
            x0 = d.x_min + col * self.cell_width
            x1 = d.x_min + (col + 1) * self.cell_width
            y0 = d.y_min + row * self.cell_height
            y1 = d.y_min + (row + 1) * self.cell_height
            poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
        elif self.shape is ShapeKind.HEX:
            cx, cy = self.bin_center(bin)
            hw = self.cell_width / 2.0
            r = self.hex_radius
            hr = r / 2.0
            poly = [
                (cx + hw, cy - hr),
                (cx + hw, cy + hr),
                (cx, cy + r),
                (cx - hw, cy + hr),
                (cx - hw, cy - hr),
                (cx, cy - r),
            ]
        else:
            poly = self._tri_vertices(bin)
        return clip_polygon_to_domain(poly, d) if clip else poly

    def _tri_vertices(self, bin: int) -> Polygon:
        half, row = self.bin_grid_position(bin)
        col, sub = half // 2, half % 2
        d = self.domain
        x0 = d.x_min + col * self.cell_width
        x1 = d.x_min + (col + 1) * self.cell_width
        y0 = d.y_min + row * self.cell_height
        y1 = d.y_min + (row + 1) * self.cell_height
        if col % 2 == 0:
            # diagonal bottom-left to top-right
            if sub == 0:
                return [(x0, y0), (x1, y0), (x1, y1)]
            return [(x0, y0), (x1, y1), (x0, y1)]
        # diagonal top-left to bottom-right
        if sub == 0:
            return [(x0, y0), (x1, y0), (x0, y1)]
        return [(x1, y0), (x1, y1), (x0, y1)]

    # -- assignment -------------------------------------------------------

    def assign(self, x: float, y: float) -> int:
        """Bin index owning a point inside the closed domain.

        Rect/Tri use half-open cell intervals with the top row and
        rightmost column closed so domain-max points are owned.  Hex
        assignment is nearest center, ties to the lowest bin index.
        """
        d = self.domain
        if not d.contains(x, y):
            raise OutOfDomainError(f"point ({x}, {y}) outside domain")
        if self.shape is ShapeKind.HEX:
            return self._assign_hex(x, y)
        col = min(int((x - d.x_min) / self.cell_width), self.grid_cols - 1)
        row = min(int((y - d.y_min) / self.cell_height), self.grid_rows - 1)
        if self.shape is ShapeKind.RECT:
            return row * self.grid_cols + col
        return self._assign_tri(x, y, col, row)

    def _assign_tri(self, x: float, y: float, rcol: int, row: int) -> int:
        # rcol indexes the underlying rect cell; bins hold two triangles per cell
        rcol = min(rcol, self.bins_x - 1)
        d = self.domain
        x0 = d.x_min + rcol * self.cell_width
        y0 = d.y_min + row * self.cell_height
        dx, dy = x - x0, y - y0
        cw, ch = self.cell_width, self.cell_height
        if rcol % 2 == 0:
            above = cw * dy - ch * dx > 0.0
        else:
            above = cw * (dy - ch) + ch * dx > 0.0
        return row * self.grid_cols + 2 * rcol + (1 if above else 0)

    def _assign_hex(self, x: float, y: float) -> int:
        # Nearest hex center over a small candidate window.  Uses the same
        # squared-distance arithmetic as a full scan, so results (ties
        # included) are identical to brute force over every center.
        d = self.domain
        w = self.cell_width
        pitch = self.cell_height
        j0 = int(round((y - d.y_min) / pitch))
        best_d2 = math.inf
        best = -1
        for j in range(max(0, j0 - 2), min(self.grid_rows, j0 + 3)):
            cy = d.y_min + j * pitch
            off = 0.0 if j % 2 == 0 else w / 2.0
            ncols = self.row_ncols(j)
            i0 = int(round((x - d.x_min - off) / w))
            for i in range(max(0, i0 - 2), min(ncols, i0 + 3)):
                cx = d.x_min + off + i * w
                d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy)
                if d2 < best_d2:
                    best_d2 = d2
                    best = self._row_starts[j] + i
        return best

    # -- adjacency --------------------------------------------------------

    def neighbors(self, bin: int) -> list[int]:
        """Edge-adjacent bin indices, ascending."""
        self._check_bin(bin)
        if self.shape is ShapeKind.RECT:
            col, row = self.bin_grid_position(bin)
            out = []
            for dc, dr in ((0, -1), (-1, 0), (1, 0), (0, 1)):
                c, r = col + dc, row + dr
                if 0 <= c < self.grid_cols and 0 <= r < self.grid_rows:
                    out.append(self.bin_index(c, r))
            return sorted(out)
        if self.shape is ShapeKind.HEX:
            col, row = self.bin_grid_position(bin)
            shift = 0 if row % 2 == 0 else 1
            cand = [(col - 1, row), (col + 1, row)]
            for dr in (-1, 1):
                cand.append((col - 1 + shift, row + dr))
                cand.append((col + shift, row + dr))
            out = []
            for c, r in cand:
                if 0 <= r < self.grid_rows and 0 <= c < self.row_ncols(r):
                    out.append(self.bin_index(c, r))
            return sorted(out)
        return self._tri_neighbors(bin)

    def _tri_neighbors(self, bin: int) -> list[int]:
        # shared-edge scan over triangles in the same and adjacent rect cells
        mine = self.bin_polygon(bin, clip=False)
        mine_edges = _edge_set(mine)
        half, row = self.bin_grid_position(bin)
        col = half // 2
        out = []
        for dc in (-1, 0, 1):
            for dr in (-1, 0, 1):
                c, r = col + dc, row + dr
                if not (0 <= c < self.bins_x and 0 <= r < self.grid_rows):
                    continue
                for sub in (0, 1):
                    other = r * self.grid_cols + 2 * c + sub
                    if other == bin:
                        continue
                    if mine_edges & _edge_set(self.bin_polygon(other, clip=False)):
                        out.append(other)
        return sorted(out)

    # -- glyph support ----------------------------------------------------

    def inscribed_box(self, bin: int) -> tuple[float, float, float, float]:
        """Axis-aligned box inside the bin polygon: (x0, y0, x1, y1).

        Used to size pie and bar glyphs.  Clamped to the domain for
        edge bins, which may shrink it.
        """
        self._check_bin(bin)
        d = self.domain
        if self.shape is ShapeKind.RECT:
            col, row = self.bin_grid_position(bin)
            x0 = d.x_min + col * self.cell_width
            y0 = d.y_min + row * self.cell_height
            box = (x0, y0, x0 + self.cell_width, y0 + self.cell_height)
        elif self.shape is ShapeKind.HEX:
            cx, cy = self.bin_center(bin)
            hw, hr = self.cell_width / 2.0, self.hex_radius / 2.0
            box = (cx - hw, cy - hr, cx + hw, cy + hr)
        else:
            box = self._tri_inscribed_box(bin)
        x0, y0, x1, y1 = box
        return (
            max(x0, d.x_min),
            max(y0, d.y_min),
            min(x1, d.x_max),
            min(y1, d.y_max),
        )

    def _tri_inscribed_box(self, bin: int) -> tuple[float, float, float, float]:
        half, row = self.bin_grid_position(bin)
        col, sub = half // 2, half % 2
        d = self.domain
        x0 = d.x_min + col * self.cell_width
        x1 = d.x_min + (col + 1) * self.cell_width
        y0 = d.y_min + row * self.cell_height
        y1 = d.y_min + (row + 1) * self.cell_height
        hw, hh = self.cell_width / 2.0, self.cell_height / 2.0
        # box anchored at the right-angle vertex, spanning half of each leg
        if col % 2 == 0:
            if sub == 0:  # right angle at bottom-right
                return (x1 - hw, y0, x1, y0 + hh)
            return (x0, y1 - hh, x0 + hw, y1)  # right angle at top-left
        if sub == 0:  # right angle at bottom-left
            return (x0, y0, x0 + hw, y0 + hh)
        return (x1 - hw, y1 - hh, x1, y1)  # right angle at top-right


def build_lattice(domain: Domain, shape: ShapeKind, bins_x: int) -> BinLattice:
    """Construct a lattice whose cells cover the entire domain.

    ``bins_x`` is the target cell count along x; the cell width is the
    x extent divided by ``bins_x`` and the same length scales y.
    """
    if bins_x < 1:
        raise InvalidParameterError(f"bins_x must be >= 1, got {bins_x}")
    shape = ShapeKind(shape)
    cw = domain.width / bins_x
    if shape is ShapeKind.HEX:
        r = cw / _SQRT3
        pitch = 1.5 * r
        rows = 1 + max(0, math.ceil((domain.height - r / 2.0) / pitch - _COVER_EPS))
        starts = []
        total = 0
        for j in range(rows):
            starts.append(total)
            total += bins_x + 1 if j % 2 == 0 else bins_x
        return BinLattice(
            shape=shape,
            domain=domain,
            bins_x=bins_x,
            cell_width=cw,
            cell_height=pitch,
            grid_rows=rows,
            grid_cols=bins_x + 1,
            bin_count=total,
            hex_radius=r,
            _row_starts=tuple(starts),
        )
    rows = max(1, math.ceil(domain.height / cw - _COVER_EPS))
    cols = bins_x if shape is ShapeKind.RECT else 2 * bins_x
    return BinLattice(
        shape=shape,
        domain=domain,
        bins_x=bins_x,
        cell_width=cw,
        cell_height=cw,
        grid_rows=rows,
        grid_cols=cols,
        bin_count=rows * cols,
    )


# -- polygon helpers -------------------------------------------------------


def polygon_area(poly: Polygon) -> float:
    """Unsigned shoelace area."""
    return abs(signed_area(poly))


def signed_area(poly: Polygon) -> float:
    acc = 0.0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        acc += x0 * y1 - x1 * y0
    return acc / 2.0


def polygon_centroid(poly: Polygon) -> Point:
    """Area centroid; falls back to the vertex mean for slivers."""
    a = signed_area(poly)
    if abs(a) < 1e-30:
        n = len(poly)
        return (sum(p[0] for p in poly) / n, sum(p[1] for p in poly) / n)
    cx = cy = 0.0
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        cross = x0 * y1 - x1 * y0
        cx += (x0 + x1) * cross
        cy += (y0 + y1) * cross
    return (cx / (6.0 * a), cy / (6.0 * a))


def point_in_convex_polygon(x: float, y: float, poly: Polygon, eps: float = 0.0) -> bool:
    """Closed containment test for a CCW convex polygon."""
    n = len(poly)
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        if (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) < -eps:
            return False
    return True


def clip_polygon_to_domain(poly: Polygon, domain: Domain) -> Polygon:
    """Sutherland-Hodgman clip against the domain box, CCW preserved."""
    def clip_edge(points, inside, intersect):
        out = []
        n = len(points)
        for i in range(n):
            cur, nxt = points[i], points[(i + 1) % n]
            cur_in, nxt_in = inside(cur), inside(nxt)
            if cur_in:
                out.append(cur)
                if not nxt_in:
                    out.append(intersect(cur, nxt))
            elif nxt_in:
                out.append(intersect(cur, nxt))
        return out

    def x_cut(bound):
        def f(a, b):
            t = (bound - a[0]) / (b[0] - a[0])
            return (bound, a[1] + t * (b[1] - a[1]))
        return f

    def y_cut(bound):
        def f(a, b):
            t = (bound - a[1]) / (b[1] - a[1])
            return (a[0] + t * (b[0] - a[0]), bound)
        return f

    out = clip_edge(poly, lambda p: p[0] >= domain.x_min, x_cut(domain.x_min))
    if out:
        out = clip_edge(out, lambda p: p[0] <= domain.x_max, x_cut(domain.x_max))
    if out:
        out = clip_edge(out, lambda p: p[1] >= domain.y_min, y_cut(domain.y_min))
    if out:
        out = clip_edge(out, lambda p: p[1] <= domain.y_max, y_cut(domain.y_max))
    deduped: Polygon = []
    for p in out:
        if not deduped or p != deduped[-1]:
            deduped.append(p)
    if len(deduped) > 1 and deduped[0] == deduped[-1]:
        deduped.pop()
    return deduped


def _edge_set(poly: Polygon) -> set:
    n = len(poly)
    return {frozenset((poly[i], poly[(i + 1) % n])) for i in range(n)}
