"""CSV dataset ingestion and JSON design-config parsing."""

from __future__ import annotations

import csv
import io as _io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .aggregation import ClassInfo, Dataset, NormalizationMode, ScaleKind
from .encoding import MAX_CLASSES, Palette
from .errors import (
    ConfigError,
    CsvParseError,
    MissingColumnError,
    TooManyClassesError,
)
from .layout import BackgroundKind, Composition, DesignSpec, GlyphKind
from .tessellation import Domain, ShapeKind

DEFAULT_COLUMNS = {"x": "x", "y": "y", "class": "class"}


def load_csv(
    source: Union[str, Path, _io.TextIOBase],
    x_col: str = "x",
    y_col: str = "y",
    class_col: str = "class",
) -> Dataset:
    """Parse a header-first CSV into a Dataset.

    Class labels are interned to ids in first-appearance order, so the
    legend follows the data narrative.  Malformed rows are reported
    with their 1-based line number (the header is line 1).
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return load_csv(fh, x_col, y_col, class_col)
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise CsvParseError(1, "empty file, expected a header row") from None
    header = [h.strip() for h in header]
    columns = {}
    for name in (x_col, y_col, class_col):
        if name not in header:
            raise MissingColumnError(f"column {name!r} not in header {header}")
        columns[name] = header.index(name)
    xs: list[float] = []
    ys: list[float] = []
    cids: list[int] = []
    labels: dict[str, int] = {}
    for line, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) < len(header):
            raise CsvParseError(line, f"expected {len(header)} fields, got {len(row)}")
        try:
            x = float(row[columns[x_col]])
            y = float(row[columns[y_col]])
        except ValueError as err:
            raise CsvParseError(line, str(err)) from None
        label = row[columns[class_col]].strip()
        if label not in labels:
            if len(labels) == MAX_CLASSES:
                raise TooManyClassesError(
                    f"line {line}: class {label!r} is the {MAX_CLASSES + 1}th distinct "
                    f"class; at most {MAX_CLASSES} are supported"
                )
            labels[label] = len(labels)
        xs.append(x)
        ys.append(y)
        cids.append(labels[label])
    classes = [ClassInfo(i, lbl) for lbl, i in labels.items()]
    return Dataset(
        np.array(xs, dtype=np.float64),
        np.array(ys, dtype=np.float64),
        np.array(cids, dtype=np.int64),
        classes,
    )


def dataset_to_csv(dataset: Dataset, columns: Optional[dict] = None) -> str:
    """Inverse of :func:`load_csv`; used by the service's persistence."""
    columns = columns or DEFAULT_COLUMNS
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([columns["x"], columns["y"], columns["class"]])
    labels = {c.class_id: c.label for c in dataset.classes}
    for x, y, c in zip(dataset.xs.tolist(), dataset.ys.tolist(), dataset.class_ids.tolist()):
        writer.writerow([repr(x), repr(y), labels[c]])
    return buf.getvalue()


# -- design configs -----------------------------------------------------------

_ENUM_FIELDS = {
    "shape": ShapeKind,
    "normalization": NormalizationMode,
    "scale": ScaleKind,
    "composition": Composition,
    "background": BackgroundKind,
    "glyph": GlyphKind,
}
_INT_FIELDS = {"bins_x", "seed", "panel_size", "fragment_grid", "sample_budget"}
_KNOWN_KEYS = (
    set(_ENUM_FIELDS)
    | _INT_FIELDS
    | {
        "boundaries",
        "quantization",
        "hatch_draw_order",
        "per_class_bins_x",
        "palette",
        "domain",
        "columns",
        "class_order",
    }
)

DEFAULT_QUANTIZATION_LEVELS = 5


def _parse_hex_color(text: str) -> tuple[int, int, int]:
    text = text.strip()
    if not (text.startswith("#") and len(text) == 7):
        raise ConfigError(f"palette colors must look like '#rrggbb', got {text!r}")
    try:
        return tuple(int(text[i : i + 2], 16) for i in (1, 3, 5))
    except ValueError:
        raise ConfigError(f"palette colors must look like '#rrggbb', got {text!r}") from None


@dataclass(frozen=True)
class IngestOptions:
    """Dataset-shaping settings carried next to the design spec."""

    columns: dict
    class_order: Optional[tuple[str, ...]] = None


def parse_config(data: dict) -> tuple[DesignSpec, IngestOptions]:
    """Turn a config mapping into (DesignSpec, ingest options).

    Unknown keys are rejected; enum strings are checked against the
    design vocabulary with the allowed values in the error message.
    """
    if not isinstance(data, dict):
        raise ConfigError("design config must be a JSON object")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    kwargs = {}
    for key, enum_cls in _ENUM_FIELDS.items():
        if key in data:
            try:
                kwargs[key] = enum_cls(data[key])
            except ValueError:
                allowed = [e.value for e in enum_cls]
                raise ConfigError(f"{key} must be one of {allowed}, got {data[key]!r}") from None
    for key in _INT_FIELDS:
        if key in data:
            value = data[key]
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"{key} must be an integer, got {value!r}")
            kwargs[key] = value
    if "boundaries" in data:
        if not isinstance(data["boundaries"], bool):
            raise ConfigError(f"boundaries must be true or false, got {data['boundaries']!r}")
        kwargs["boundaries"] = data["boundaries"]
    if "quantization" in data and data["quantization"] is not None:
        # true opts into the default level count; an int sets it explicitly
        if data["quantization"] is True:
            kwargs["quantization"] = DEFAULT_QUANTIZATION_LEVELS
        elif isinstance(data["quantization"], int) and not isinstance(data["quantization"], bool):
            kwargs["quantization"] = data["quantization"]
        else:
            raise ConfigError("quantization must be true, an integer level count, or null")
    if "hatch_draw_order" in data and data["hatch_draw_order"] is not None:
        kwargs["hatch_draw_order"] = tuple(int(c) for c in data["hatch_draw_order"])
    if "per_class_bins_x" in data and data["per_class_bins_x"] is not None:
        kwargs["per_class_bins_x"] = tuple(int(n) for n in data["per_class_bins_x"])
    if "palette" in data and data["palette"] is not None:
        colors = tuple(_parse_hex_color(c) for c in data["palette"])
        kwargs["palette"] = Palette(class_colors=colors)
    if "domain" in data and data["domain"] is not None:
        dom = data["domain"]
        required = {"x_min", "x_max", "y_min", "y_max"}
        if not isinstance(dom, dict) or set(dom) != required:
            raise ConfigError(f"domain must carry exactly the keys {sorted(required)}")
        kwargs["domain"] = Domain(
            float(dom["x_min"]), float(dom["x_max"]), float(dom["y_min"]), float(dom["y_max"])
        )
    columns = dict(DEFAULT_COLUMNS)
    if "columns" in data and data["columns"] is not None:
        cols = data["columns"]
        if not isinstance(cols, dict) or set(cols) - {"x", "y", "class"}:
            raise ConfigError("columns must map a subset of {x, y, class} to column names")
        columns.update({k: str(v) for k, v in cols.items()})
    class_order = None
    if "class_order" in data and data["class_order"] is not None:
        if not isinstance(data["class_order"], list):
            raise ConfigError("class_order must be a list of class labels")
        class_order = tuple(str(label) for label in data["class_order"])
    return DesignSpec(**kwargs), IngestOptions(columns=columns, class_order=class_order)


def load_config(path: Union[str, Path]) -> tuple[DesignSpec, IngestOptions]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as err:
            raise ConfigError(f"config is not valid JSON: {err}") from None
    return parse_config(data)


def reorder_classes(dataset: Dataset, leading_labels) -> Dataset:
    """Reassign class ids so the listed labels come first, in that order.

    Labels absent from the dataset raise; unlisted classes keep their
    first-appearance order after the listed ones.
    """
    by_label = {c.label: c.class_id for c in dataset.classes}
    for label in leading_labels:
        if label not in by_label:
            raise ConfigError(f"class_order names unknown class {label!r}")
    leading = [by_label[label] for label in leading_labels]
    rest = [c.class_id for c in dataset.classes if c.label not in set(leading_labels)]
    old_order = leading + rest
    remap = {old: new for new, old in enumerate(old_order)}
    classes = [ClassInfo(remap[old], dataset.classes[old].label) for old in old_order]
    new_ids = np.array([remap[int(c)] for c in dataset.class_ids], dtype=np.int64)
    return Dataset(dataset.xs, dataset.ys, new_ids, classes)
