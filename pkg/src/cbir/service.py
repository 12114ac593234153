"""Read-only HTTP JSON API over a loaded index and optional model."""

from __future__ import annotations

import io
import time
from pathlib import Path

import numpy as np
from fastapi import FastAPI, File, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles
from PIL import Image

from .errors import InvalidImage
from .features import compose_descriptor
from .image import load_image
from .retrieval import batch_distances, parse_metric, prepare_query, top_k
from .store import FeatureIndex
from .svm.multiclass import MulticlassModel, OneVsRestModel, predict_class

DEFAULT_UPLOAD_CAP = 8 * 1024 * 1024
THUMB_SIDE = 128


def _rank_records(
    index: FeatureIndex,
    query: np.ndarray,
    k: int,
    metric_name: str,
    rows: np.ndarray | None = None,
) -> list[dict]:
    """Top-k result dicts, optionally restricted to a subset of record rows."""
    metric = parse_metric(metric_name)
    if rows is None:
        distances = batch_distances(query, index, metric)
        ranked = top_k(distances, k, labels=index.labels)
        return [
            {
                "id": r.id,
                "label": r.label,
                "score": r.distance,
                "thumbnail_url": f"/thumb/{r.id}",
            }
            for r in ranked
        ]
    sub = index.subset(rows)
    distances = batch_distances(query, sub, metric)
    ranked = top_k(distances, k)
    return [
        {
            "id": int(rows[r.id]),
            "label": sub.label_of(r.id),
            "score": r.distance,
            "thumbnail_url": f"/thumb/{int(rows[r.id])}",
        }
        for r in ranked
    ]


def _answer(
    index: FeatureIndex,
    model: MulticlassModel | OneVsRestModel | None,
    query: np.ndarray,
    mode: str,
    k: int,
    metric: str,
    started: float,
) -> dict:
    if mode == "svm":
        if model is None:
            raise HTTPException(status_code=409, detail="svm mode requires a loaded model")
        predicted, _ = predict_class(model, query)
        labels = np.asarray(index.labels)
        rows = np.flatnonzero(labels == predicted)
        results = _rank_records(index, query, k, metric, rows=rows)
        predicted_class = predicted
    elif mode == "knn":
        results = _rank_records(index, query, k, metric)
        predicted_class = None
    else:
        raise HTTPException(status_code=400, detail=f"unknown mode {mode!r}")
    return {
        "mode": mode,
        "predicted_class": predicted_class,
        "results": results,
        "timing_ms": (time.perf_counter() - started) * 1000.0,
    }


def create_app(
    index: FeatureIndex,
    model: MulticlassModel | OneVsRestModel | None = None,
    static_dir: str | Path | None = None,
    upload_cap: int = DEFAULT_UPLOAD_CAP,
) -> FastAPI:
    """Build the service; all served data is immutable after this call."""
    app = FastAPI(title="cbir query service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/images")
    def list_images(page: int = 0, page_size: int = 50) -> dict:
        if page < 0 or page_size < 1:
            raise HTTPException(status_code=400, detail="bad pagination parameters")
        start = page * page_size
        items = [
            {"id": i, "label": index.label_of(i), "thumbnail_url": f"/thumb/{i}"}
            for i in range(start, min(start + page_size, len(index)))
        ]
        return {
            "total": len(index),
            "page": page,
            "page_size": page_size,
            "items": items,
        }

    @app.get("/api/query")
    def query_by_id(id: int, mode: str = "knn", k: int = 10, metric: str = "l1") -> dict:
        started = time.perf_counter()
        if not 0 <= id < len(index):
            raise HTTPException(status_code=404, detail=f"unknown image id {id}")
        # Stored rows are already in index space; the model is expected to
        # have been trained on this same index, so no re-normalization here.
        query = index.descriptor(id)
        return _answer(index, model, query, mode, k, metric, started)

    @app.post("/api/query")
    async def query_by_upload(
        image: UploadFile = File(...),
        mode: str = "knn",
        k: int = 10,
        metric: str = "l1",
    ) -> dict:
        started = time.perf_counter()
        data = await image.read()
        if len(data) > upload_cap:
            raise HTTPException(status_code=413, detail="upload exceeds size cap")
        try:
            descriptor = compose_descriptor(load_image(data))
        except InvalidImage as exc:
            raise HTTPException(status_code=400, detail=f"undecodable image: {exc}")
        query = prepare_query(index, descriptor)
        return _answer(index, model, query, mode, k, metric, started)

    @app.get("/thumb/{id}")
    def thumbnail(id: int) -> Response:
        if not 0 <= id < len(index) or not index.paths[id]:
            raise HTTPException(status_code=404, detail=f"unknown image id {id}")
        try:
            with Image.open(index.paths[id]) as img:
                img = img.convert("RGB")
                img.thumbnail((THUMB_SIDE, THUMB_SIDE))
                buf = io.BytesIO()
                img.save(buf, format="JPEG")
        except OSError:
            raise HTTPException(status_code=404, detail="source image unavailable")
        return Response(content=buf.getvalue(), media_type="image/jpeg")

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(
    index: FeatureIndex,
    model: MulticlassModel | OneVsRestModel | None = None,
    static_dir: str | Path | None = None,
    host: str = "127.0.0.1",
    port: int = 8000,
) -> None:
    import uvicorn

    uvicorn.run(create_app(index, model, static_dir), host=host, port=port)
