"""Read-only HTTP JSON service over one dataset directory.

Endpoints: /api/meta, /api/frame?var=ID&t=TS, /api/range?var=ID, /healthz,
plus optional static files at /. The dataset is loaded once into immutable
memory; responses carry long-lived cache headers.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from climoe.data.series import FrameSeries, load_series

CACHE_HEADER = "public, max-age=86400, immutable"


class DatasetView:
    """Precomputed lookup tables for serving one FrameSeries."""

    def __init__(self, series: FrameSeries):
        self.series = series
        self.display = series.display_timestamps()
        self.t_index = {t: i for i, t in enumerate(self.display)}
        self.global_min = series.values.min(axis=(1, 2, 3))
        self.global_max = series.values.max(axis=(1, 2, 3))
        self.var_ids = {v.feature_id for v in series.variables}

    def meta(self) -> dict:
        return {
            "grid": self.series.grid.to_dict(),
            "variables": [v.to_dict() for v in self.series.variables],
            "timestamps": self.display,
            "ranges": {
                str(v.feature_id): {
                    "min": float(self.global_min[v.feature_id - 1]),
                    "max": float(self.global_max[v.feature_id - 1]),
                }
                for v in self.series.variables
            },
        }

    def frame(self, feature_id: int, t_idx: int) -> dict:
        grid = self.series.frame(feature_id, t_idx)
        return {
            "feature_id": feature_id,
            "timestamp": self.display[t_idx],
            "min": float(grid.min()),
            "max": float(grid.max()),
            "values": grid.ravel().tolist(),
        }


def _error(status: int, message: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, "detail": detail})


def _parse_var(view: DatasetView, raw: str | None):
    if raw is None or raw == "":
        return None, _error(400, "missing parameter", "query parameter 'var' is required")
    try:
        fid = int(raw)
    except ValueError:
        return None, _error(400, "malformed parameter", f"'var' must be an integer, got {raw!r}")
    if fid not in view.var_ids:
        return None, _error(404, "unknown variable", f"variable {fid} is not in this dataset")
    return fid, None


def build_app(data_dir: str | Path, static_dir: str | Path | None = None) -> FastAPI:
    view = DatasetView(load_series(data_dir))
    app = FastAPI(title="climoe data service", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def cache_headers(request: Request, call_next):
        response = await call_next(request)
        if request.url.path.startswith("/api/") and response.status_code == 200:
            response.headers["Cache-Control"] = CACHE_HEADER
        return response

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok"}

    @app.get("/api/meta")
    async def meta():
        return view.meta()

    @app.get("/api/range")
    async def var_range(request: Request):
        fid, err = _parse_var(view, request.query_params.get("var"))
        if err:
            return err
        return {
            "feature_id": fid,
            "min": float(view.global_min[fid - 1]),
            "max": float(view.global_max[fid - 1]),
        }

    @app.get("/api/frame")
    async def frame(request: Request):
        fid, err = _parse_var(view, request.query_params.get("var"))
        if err:
            return err
        ts = request.query_params.get("t")
        if ts is None or ts == "":
            return _error(400, "missing parameter", "query parameter 't' is required")
        t_idx = view.t_index.get(ts)
        if t_idx is None:
            if not _looks_like_timestamp(ts):
                return _error(400, "malformed parameter", f"'t' must be YYYY-MM-DD HH:MM, got {ts!r}")
            return _error(404, "unknown timestamp", f"timestamp {ts!r} is not in this dataset")
        return view.frame(fid, t_idx)

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="static")

    return app


def _looks_like_timestamp(ts: str) -> bool:
    from climoe.data.series import parse_display
    from climoe.errors import SchemaError

    try:
        parse_display(ts)
        return True
    except SchemaError:
        return False


def serve(data_dir: str | Path, port: int = 8080, static_dir: str | Path | None = None, host: str = "127.0.0.1"):
    """Blocking uvicorn server; used by the CLI."""
    import uvicorn

    app = build_app(data_dir, static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
