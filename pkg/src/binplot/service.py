"""Embedded HTTP service backing the design-explorer UI.

Datasets are held in memory under monotonically increasing ids; every
response is a pure function of the stored datasets and the request, so
repeating a request returns byte-identical bodies.  An optional
persist directory snapshots uploaded CSVs for reload.
"""

from __future__ import annotations

import io as _io
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .aggregation import (
    BinSummaryGrid,
    Dataset,
    NormalizationMode,
    ScaleKind,
    aggregate,
    normalize,
)
from .errors import (
    BinplotError,
    ConfigError,
    CsvParseError,
    MissingColumnError,
    PointOutOfDomainError,
    TooManyClassesError,
)
from .io import dataset_to_csv, load_csv, parse_config
from .layout import compose, validate
from .render_svg import render, scene_to_dict
from .tessellation import ShapeKind, build_lattice


@dataclass
class _Entry:
    dataset: Dataset
    name: str
    grids: dict[tuple[str, int], BinSummaryGrid] = field(default_factory=dict)


class SessionStore:
    """Dataset registry with cached per-lattice summaries."""

    def __init__(self):
        self._lock = threading.RLock()
        self._entries: dict[str, _Entry] = {}
        self._next_id = 1

    def add(self, dataset: Dataset, name: str = "") -> str:
        with self._lock:
            ds_id = f"ds-{self._next_id}"
            self._next_id += 1
            self._entries[ds_id] = _Entry(dataset=dataset, name=name)
            return ds_id

    def get(self, ds_id: str) -> Optional[_Entry]:
        with self._lock:
            return self._entries.get(ds_id)

    def ids(self) -> list[str]:
        with self._lock:
            return list(self._entries)

    def summary_grid(self, ds_id: str, shape: ShapeKind, bins_x: int) -> BinSummaryGrid:
        """Cached counts; evicting an entry would only cost recomputation."""
        entry = self.get(ds_id)
        key = (shape.value, bins_x)
        with self._lock:
            cached = entry.grids.get(key)
        if cached is not None:
            return cached
        lattice = build_lattice(entry.dataset.bounding_domain(), shape, bins_x)
        grid = aggregate(lattice, entry.dataset)
        with self._lock:
            entry.grids[key] = grid
        return grid


def _error_payload(err: Exception) -> dict:
    kind = {
        CsvParseError: "parse-error",
        MissingColumnError: "missing-column",
        TooManyClassesError: "too-many-classes",
        PointOutOfDomainError: "point-out-of-domain",
        ConfigError: "config-error",
    }.get(type(err), "error")
    payload = {"error": kind, "detail": str(err)}
    if isinstance(err, CsvParseError):
        payload["line"] = err.line
    return payload


def create_app(persist_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="binplot service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = SessionStore()
    app.state.store = store
    persist_path = Path(persist_dir) if persist_dir else None
    if persist_path:
        persist_path.mkdir(parents=True, exist_ok=True)
        for csv_file in sorted(persist_path.glob("*.csv")):
            try:
                store.add(load_csv(csv_file), name=csv_file.stem)
            except BinplotError:
                continue

    def _dataset_meta(ds_id: str, entry: _Entry) -> dict:
        dataset = entry.dataset
        domain = dataset.bounding_domain()
        return {
            "id": ds_id,
            "name": entry.name,
            "point_count": len(dataset),
            "classes": [
                {"id": c.class_id, "label": c.label} for c in dataset.classes
            ],
            "domain": {
                "x_min": domain.x_min,
                "x_max": domain.x_max,
                "y_min": domain.y_min,
                "y_max": domain.y_max,
            },
        }

    @app.post("/datasets")
    async def upload_dataset(
        request: Request,
        x_col: str = Query(default="x"),
        y_col: str = Query(default="y"),
        class_col: str = Query(default="class"),
        name: str = Query(default=""),
    ):
        body = await request.body()
        try:
            text = body.decode("utf-8")
            dataset = load_csv(_io.StringIO(text), x_col, y_col, class_col)
        except (UnicodeDecodeError, BinplotError) as err:
            return JSONResponse(status_code=400, content=_error_payload(err))
        ds_id = store.add(dataset, name=name)
        if persist_path:
            (persist_path / f"{ds_id}.csv").write_text(
                dataset_to_csv(dataset), encoding="utf-8"
            )
        return _dataset_meta(ds_id, store.get(ds_id))

    @app.get("/datasets")
    def list_datasets():
        return {"datasets": [_dataset_meta(i, store.get(i)) for i in store.ids()]}

    @app.get("/datasets/{ds_id}/summary")
    def dataset_summary(
        ds_id: str,
        shape: str = Query(default="hex"),
        bins_x: int = Query(default=20, ge=1),
        normalization: str = Query(default="global"),
        scale: str = Query(default="linear"),
    ):
        entry = store.get(ds_id)
        if entry is None:
            return JSONResponse(status_code=404, content={"error": "unknown-dataset"})
        try:
            shape_kind = ShapeKind(shape)
            mode = NormalizationMode(normalization)
            scale_kind = ScaleKind(scale)
        except ValueError as err:
            return JSONResponse(status_code=400, content={"error": "bad-params", "detail": str(err)})
        grid = store.summary_grid(ds_id, shape_kind, bins_x)
        intensities = normalize(grid, mode, scale_kind)
        lattice = grid.lattice
        return {
            "dataset_id": ds_id,
            "shape": shape_kind.value,
            "bins_x": bins_x,
            "normalization": mode.value,
            "scale": scale_kind.value,
            "grid_rows": lattice.grid_rows,
            "grid_cols": lattice.grid_cols,
            "bin_count": lattice.bin_count,
            "classes": [{"id": c.class_id, "label": c.label} for c in grid.classes],
            "class_totals": grid.class_totals.tolist(),
            "grand_total": grid.grand_total,
            "bins": [
                {
                    "index": b,
                    "counts": grid.counts[b].tolist(),
                    "total": int(grid.totals[b]),
                    "intensity": intensities.values[b].tolist(),
                }
                for b in range(lattice.bin_count)
            ],
        }

    @app.get("/datasets/{ds_id}/points")
    def dataset_points(
        ds_id: str,
        shape: str = Query(default="hex"),
        bins_x: int = Query(default=20, ge=1),
        bins: str = Query(default=""),
    ):
        """Raw points per bin, for the zoomed-in detail view."""
        entry = store.get(ds_id)
        if entry is None:
            return JSONResponse(status_code=404, content={"error": "unknown-dataset"})
        try:
            shape_kind = ShapeKind(shape)
            wanted = sorted({int(b) for b in bins.split(",") if b.strip() != ""})
        except ValueError as err:
            return JSONResponse(status_code=400, content={"error": "bad-params", "detail": str(err)})
        grid = store.summary_grid(ds_id, shape_kind, bins_x)
        lattice = grid.lattice
        wanted_set = {b for b in wanted if 0 <= b < lattice.bin_count}
        dataset = entry.dataset
        by_bin: dict[int, list] = {b: [] for b in sorted(wanted_set)}
        for x, y, c in zip(
            dataset.xs.tolist(), dataset.ys.tolist(), dataset.class_ids.tolist()
        ):
            b = lattice.assign(x, y)
            if b in wanted_set:
                by_bin[b].append([x, y, c])
        return {
            "dataset_id": ds_id,
            "bins": {str(b): pts for b, pts in by_bin.items()},
        }

    def _scene_or_error(body: dict):
        ds_id = body.get("dataset_id")
        entry = store.get(ds_id) if ds_id else None
        if entry is None:
            return None, JSONResponse(status_code=404, content={"error": "unknown-dataset"})
        try:
            spec, _ = parse_config(body.get("config") or {})
        except ConfigError as err:
            return None, JSONResponse(status_code=422, content=_error_payload(err))
        violations = validate(spec, entry.dataset)
        if violations:
            return None, JSONResponse(
                status_code=422,
                content={
                    "violations": [{"rule": v.rule, "reason": v.reason} for v in violations]
                },
            )
        return compose(entry.dataset, spec), None

    @app.post("/render")
    async def render_svg(request: Request):
        body = await request.json()
        scene, error = _scene_or_error(body)
        if error is not None:
            return error
        return Response(content=render(scene), media_type="image/svg+xml")

    @app.post("/scene")
    async def scene_json(request: Request):
        body = await request.json()
        scene, error = _scene_or_error(body)
        if error is not None:
            return error
        return scene_to_dict(scene)

    return app
