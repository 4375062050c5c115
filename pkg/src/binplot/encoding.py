"""Visual encodings of per-bin class values.

Bins can be filled with a single color (luminance ramp, majority class,
weighted blend) or with multi-element fills that use the whole cell
area: woven color fragments, per-class attribute blocks, and angled
hatching.  Every fill is a pure function of (values, parameters, seed),
so bins may be encoded in any order or in parallel.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .aggregation import NormalizationMode, largest_remainder
from .errors import (
    GridTooSmallError,
    InvalidParameterError,
    TooManyClassesError,
    UnsupportedNormalizationError,
)

Color = tuple[int, int, int]

WHITE: Color = (255, 255, 255)
BLACK: Color = (0, 0, 0)

# Colorblind-aware 10-color categorical set.
DEFAULT_CLASS_COLORS: tuple[Color, ...] = (
    (63, 144, 218),
    (255, 169, 14),
    (189, 31, 1),
    (148, 164, 162),
    (131, 45, 182),
    (169, 107, 89),
    (231, 99, 0),
    (185, 172, 112),
    (113, 117, 129),
    (146, 218, 221),
)

MAX_CLASSES = 10


def srgb_to_linear(c: float) -> float:
    """One sRGB component in [0,1] to linear light."""
    return c / 12.92 if c <= 0.04045 else ((c + 0.055) / 1.055) ** 2.4


def linear_to_srgb(c: float) -> float:
    return c * 12.92 if c <= 0.0031308 else 1.055 * c ** (1.0 / 2.4) - 0.055


def _to_byte(c: float) -> int:
    return min(255, max(0, int(c * 255.0 + 0.5)))


def mix_linear(colors: Sequence[Color], weights: Sequence[float]) -> Color:
    """Weighted average in linear-light RGB, re-encoded to sRGB bytes."""
    out = []
    for ch in range(3):
        lin = sum(w * srgb_to_linear(col[ch] / 255.0) for col, w in zip(colors, weights))
        out.append(_to_byte(linear_to_srgb(lin)))
    return (out[0], out[1], out[2])


def lerp_color(a: Color, b: Color, t: float) -> Color:
    return tuple(int(a[ch] + t * (b[ch] - a[ch]) + 0.5) for ch in range(3))


@dataclass(frozen=True)
class Ramp:
    """Sequential color ramp; ``at(0)`` is the lightest stop."""

    stops: tuple[Color, ...] = (WHITE, BLACK)

    def at(self, t: float) -> Color:
        stops = self.stops
        if len(stops) == 1:
            return stops[0]
        t = min(1.0, max(0.0, t))
        pos = t * (len(stops) - 1)
        i = min(int(pos), len(stops) - 2)
        return lerp_color(stops[i], stops[i + 1], pos - i)


@dataclass(frozen=True)
class Palette:
    """Class colors plus the density ramp used for backgrounds."""

    class_colors: tuple[Color, ...] = DEFAULT_CLASS_COLORS
    background: Color = WHITE
    density_ramp: Ramp = field(default_factory=Ramp)
    quantization_levels: Optional[int] = None

    def __post_init__(self):
        if len(self.class_colors) > MAX_CLASSES:
            raise TooManyClassesError(
                f"at most {MAX_CLASSES} class colors, got {len(self.class_colors)}"
            )
        if len(set(self.class_colors)) != len(self.class_colors):
            raise InvalidParameterError("class colors must be pairwise distinct")

    def color(self, class_id: int) -> Color:
        return self.class_colors[class_id]

    def class_ramp(self, class_id: int) -> Ramp:
        """White-to-hue ramp for single-class tone encodings."""
        return Ramp((WHITE, self.class_colors[class_id]))


# -- fill geometry records ---------------------------------------------------


@dataclass(frozen=True)
class SolidColor:
    color: Color
    kind: str = field(default="solid", init=False)


@dataclass(frozen=True)
class FragmentGrid:
    """F x F woven fragments, row-major from the top-left."""

    side: int
    colors: tuple[Color, ...]
    kind: str = field(default="fragments", init=False)


@dataclass(frozen=True)
class SubBlockGrid:
    """Fixed per-class sub-cells, row-major from the top-left."""

    rows: int
    cols: int
    colors: tuple[Color, ...]
    kind: str = field(default="blocks", init=False)


@dataclass(frozen=True)
class HatchLayer:
    class_id: int
    angle_deg: float
    spacing: float
    color: Color


@dataclass(frozen=True)
class StrokeSet:
    """Hatch layers in paint order; later layers draw on top."""

    layers: tuple[HatchLayer, ...]
    kind: str = field(default="strokes", init=False)


BinFill = SolidColor | FragmentGrid | SubBlockGrid | StrokeSet


# -- fills --------------------------------------------------------------------


def quantize_intensity(intensity: float, levels: int) -> float:
    """Snap to the midpoint of the enclosing level."""
    if levels < 1:
        raise InvalidParameterError("quantization needs >= 1 level")
    k = min(int(intensity * levels), levels - 1)
    return (k + 0.5) / levels


def luminance_fill(intensity: float, ramp: Ramp, quantization: Optional[int] = None) -> SolidColor:
    """Map a density intensity to a ramp color; darker means denser."""
    if not 0.0 <= intensity <= 1.0:
        raise InvalidParameterError(f"intensity {intensity} outside [0, 1]")
    if quantization:
        intensity = quantize_intensity(intensity, quantization)
    return SolidColor(ramp.at(intensity))


def majority_fill(
    counts: Sequence[int],
    intensities: Sequence[float],
    mode: NormalizationMode,
    palette: Palette,
) -> SolidColor:
    """Color of the most prominent class in a bin.

    Bin-internal and global modes compare raw counts; class-internal
    compares class-normalized intensities, which can promote a class
    that is locally rare but near its own peak.  Ties go to the lowest
    class id; an empty bin shows the background.
    """
    values = intensities if mode is NormalizationMode.CLASS_INTERNAL else counts
    best, best_v = -1, 0
    for c, v in enumerate(values):
        if v > best_v:
            best, best_v = c, v
    if best < 0:
        return SolidColor(palette.background)
    return SolidColor(palette.color(best))


def blend_fill(intensities: Sequence[float], palette: Palette) -> SolidColor:
    """Weighted average of class colors in linear-light RGB."""
    total = float(sum(intensities))
    if total <= 0.0:
        return SolidColor(palette.background)
    weights = [v / total for v in intensities]
    colors = [palette.color(c) for c in range(len(intensities))]
    return SolidColor(mix_linear(colors, weights))


def weave_fill(
    counts: Sequence[int],
    mode: NormalizationMode,
    fragment_side: int,
    seed: int,
    palette: Palette,
    density: Optional[float] = None,
) -> FragmentGrid:
    """Woven fragments proportional to the bin's class mix.

    Bin-internal weaving colors every fragment.  Global weaving colors
    round(F^2 * density) fragments, leaving the rest white, so the
    white ratio encodes overall bin density; ``density`` is the bin's
    globally scaled total in [0, 1].  Fragment positions come from a
    seeded Fisher-Yates shuffle; the seed never changes the counts.
    """
    if mode is NormalizationMode.CLASS_INTERNAL:
        raise UnsupportedNormalizationError("weaving supports bin-internal or global modes only")
    if fragment_side < 2:
        raise InvalidParameterError("fragment grid side must be >= 2")
    n = fragment_side * fragment_side
    if mode is NormalizationMode.GLOBAL:
        if density is None:
            raise InvalidParameterError("global weaving requires the bin density")
        colored = int(n * min(1.0, max(0.0, density)) + 0.5)
    else:
        colored = n if sum(counts) else 0
    quotas = largest_remainder(counts, colored)
    cells: list[Color] = []
    for c, q in enumerate(quotas):
        cells.extend([palette.color(c)] * q)
    cells.extend([WHITE] * (n - len(cells)))
    rng = random.Random(seed)
    for i in range(n - 1, 0, -1):
        j = rng.randrange(i + 1)
        cells[i], cells[j] = cells[j], cells[i]
    return FragmentGrid(side=fragment_side, colors=tuple(cells))


def attribute_block_fill(
    intensities: Sequence[float],
    palette: Palette,
    rows: Optional[int] = None,
    cols: Optional[int] = None,
    quantization: Optional[int] = None,
) -> SubBlockGrid:
    """One fixed sub-cell per class, toned by class intensity.

    The class-to-cell mapping is row-major and identical across every
    bin of a plot; unused cells stay white.
    """
    k = len(intensities)
    if rows is None or cols is None:
        side = 1
        while side * side < k:
            side += 1
        rows = rows or side
        cols = cols or side
    if rows * cols < k:
        raise GridTooSmallError(f"{rows}x{cols} block grid cannot hold {k} classes")
    cells = []
    for c in range(rows * cols):
        if c < k:
            cells.append(luminance_fill(intensities[c], palette.class_ramp(c), quantization).color)
        else:
            cells.append(WHITE)
    return SubBlockGrid(rows=rows, cols=cols, colors=tuple(cells))


def default_hatch_angles(class_count: int) -> tuple[float, ...]:
    """Evenly spaced stroke angles in [0, 180)."""
    return tuple(180.0 * c / class_count for c in range(class_count))


def hatch_fill(
    intensities: Sequence[float],
    palette: Palette,
    angles: Optional[Sequence[float]] = None,
    draw_order: Optional[Sequence[int]] = None,
    spacing_min: float = 2.0,
    spacing_max: float = 10.0,
) -> StrokeSet:
    """Angled parallel strokes per class; denser lines mean more weight.

    Stroke spacing interpolates from ``spacing_max`` at intensity 0+ to
    ``spacing_min`` at intensity 1; zero-intensity classes draw nothing.
    ``draw_order`` lists class ids back-to-front.
    """
    k = len(intensities)
    angles = tuple(angles) if angles is not None else default_hatch_angles(k)
    if k > len(angles):
        raise TooManyClassesError(f"{k} classes but only {len(angles)} hatch angles")
    order = list(draw_order) if draw_order is not None else list(range(k))
    if sorted(order) != list(range(k)):
        raise InvalidParameterError("draw_order must be a permutation of class ids")
    layers = []
    for c in order:
        v = float(intensities[c])
        if v <= 0.0:
            continue
        spacing = spacing_max - v * (spacing_max - spacing_min)
        layers.append(HatchLayer(class_id=c, angle_deg=angles[c], spacing=spacing, color=palette.color(c)))
    return StrokeSet(layers=tuple(layers))


def bin_seed(global_seed: int, bin_index: int) -> int:
    """Stable per-bin seed so parallel encoding order never matters."""
    return (global_seed * 0x9E3779B97F4A7C15 + bin_index + 1) & 0xFFFFFFFFFFFFFFFF
