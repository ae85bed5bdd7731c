"""HTTP facade for one open project: JSON reads, a single serialized command
writer, server-sent version events, byte-range video serving, exports, and
snapshot upload. Everything the browser UI needs, nothing else."""

from __future__ import annotations

import asyncio
import json
import logging
import mimetypes
import re
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response, StreamingResponse

from . import __version__
from .errors import (
    AlreadyClosed,
    DuplicateDetection,
    DuplicateName,
    LabelingError,
    MissingEndpoint,
    ShortcutConflict,
    UnknownDetection,
    UnknownRecord,
    UnknownTrack,
)
from .exports import (
    SnapshotRegistry,
    export_interactions,
    export_metadata,
    export_tracking,
)
from .session import Project, synced_frame
from .state import PALETTE

logger = logging.getLogger(__name__)

_NOT_FOUND = (UnknownTrack, UnknownDetection, UnknownRecord, MissingEndpoint)
_CONFLICT = (DuplicateDetection, DuplicateName, AlreadyClosed, ShortcutConflict)

SHORTCUT_PANELS = ("individuals", "ethogram")

_RANGE_RE = re.compile(r"bytes=(\d*)-(\d*)$")
KEEPALIVE_SECONDS = 15.0


def _error_status(exc: LabelingError) -> int:
    if isinstance(exc, _NOT_FOUND):
        return 404
    if isinstance(exc, _CONFLICT):
        return 409
    return 400


class EventHub:
    """Fan-out of version bumps to SSE subscribers across threads.

    Publishers may run in worker threads (the command writer); consumers are
    asyncio generators. Each subscriber gets its own queue; delivery is at
    least the latest version, bursts may collapse.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._subscribers: dict[int, tuple[asyncio.AbstractEventLoop, asyncio.Queue]] = {}
        self._next_token = 1

    def subscribe(self) -> tuple[int, asyncio.Queue]:
        loop = asyncio.get_running_loop()
        queue: asyncio.Queue = asyncio.Queue()
        with self._lock:
            token = self._next_token
            self._next_token += 1
            self._subscribers[token] = (loop, queue)
        return token, queue

    def unsubscribe(self, token: int) -> None:
        with self._lock:
            self._subscribers.pop(token, None)

    def publish(self, version: int) -> None:
        with self._lock:
            targets = list(self._subscribers.values())
        for loop, queue in targets:
            loop.call_soon_threadsafe(queue.put_nowait, version)


def _sse_event(version: int) -> str:
    return f"event: version\ndata: {json.dumps({'version': version})}\n\n"


def _file_slice(path: Path, start: int, end: int, chunk: int = 64 * 1024):
    remaining = end - start + 1
    with path.open("rb") as fh:
        fh.seek(start)
        while remaining > 0:
            block = fh.read(min(chunk, remaining))
            if not block:
                break
            remaining -= len(block)
            yield block


def _video_response(path: Path, range_header: str | None) -> Response:
    media_type = mimetypes.guess_type(path.name)[0] or "video/mp4"
    size = path.stat().st_size
    match = _RANGE_RE.match(range_header.strip()) if range_header else None
    if match is None or match.group(0) == "bytes=-":
        return StreamingResponse(
            _file_slice(path, 0, size - 1) if size else iter(()),
            media_type=media_type,
            headers={"accept-ranges": "bytes", "content-length": str(size)},
        )
    first, last = match.group(1), match.group(2)
    if first == "":
        # suffix form: last N bytes
        start = max(size - int(last), 0)
        end = size - 1
    else:
        start = int(first)
        end = min(int(last), size - 1) if last else size - 1
    if start >= size or start > end:
        return Response(
            status_code=416, headers={"content-range": f"bytes */{size}"}
        )
    return StreamingResponse(
        _file_slice(path, start, end),
        status_code=206,
        media_type=media_type,
        headers={
            "accept-ranges": "bytes",
            "content-range": f"bytes {start}-{end}/{size}",
            "content-length": str(end - start + 1),
        },
    )


def _detection_payload(state, det) -> dict:
    return {
        "track_id": det.track_id,
        "x": det.x,
        "y": det.y,
        "w": det.w,
        "h": det.h,
        "det_conf": det.det_conf,
        "class_label": det.class_label,
        "class_name": state.store.class_name(det.class_label),
        "individual_id": det.individual_id,
        "id_conf": det.id_conf,
        "individual_name": state.individual_name(det.individual_id),
        "style": state.style_for(det.class_label),
    }


def _record_payload(record) -> dict:
    return {
        "record_id": record.record_id,
        "subject": record.subject,
        "action": record.action,
        "target": record.target,
        "start_frame": record.start_frame,
        "end_frame": record.end_frame,
        "duration_frames": record.duration_frames(),
        "created_by": record.created_by,
        "open": record.is_open,
    }


def build_app(project: Project, ui_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="vilabel", version=__version__)
    lock = threading.Lock()
    hub = EventHub()
    project.listeners.append(hub.publish)
    registry = SnapshotRegistry(project.directory)

    @app.exception_handler(LabelingError)
    async def labeling_error(request: Request, exc: LabelingError):
        return JSONResponse(
            status_code=_error_status(exc),
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    def _views_payload() -> list[dict]:
        return [
            {
                "view_id": view.view_id,
                "frame_offset": view.frame_offset,
                "frame_count": view.frame_count,
                "url": f"/video/{view.view_id}",
            }
            for view in project.state.views
        ]

    @app.get("/state")
    def get_state():
        with lock:
            state = project.state
            ann = state.annotation
            style_labels = sorted(set(state.store.class_names) | set(state.styles))
            return {
                "version": project.version,
                "video": {
                    "name": Path(project.config.main_video).name,
                    "url": "/video/main",
                    "fps": project.fps,
                    "frame_count": project.config.frame_count,
                    "frame_base": project.config.frame_base,
                },
                "annotator": state.annotator,
                "roster": list(ann.roster),
                "ethogram": list(ann.ethogram),
                "self_directed": sorted(ann.self_directed),
                "shortcuts": {
                    panel: ann.shortcuts(panel) for panel in SHORTCUT_PANELS
                },
                "class_names": {
                    str(label): name for label, name in state.store.class_names.items()
                },
                "styles": {
                    str(label): state.style_for(label) for label in style_labels
                },
                "palette": list(PALETTE),
                "views": _views_payload(),
                "tracking_format": state.tracking_format.value
                if state.tracking_format
                else None,
                "track_count": len(state.store.track_ids()),
                "detection_count": len(state.store),
                "behavior_count": len(ann.listing()),
                "notes": ann.get_notes(),
            }

    @app.get("/frame/{frame}/detections")
    def frame_detections(frame: int):
        if frame < 0:
            return JSONResponse(status_code=404, content={"error": "bad frame"})
        with lock:
            state = project.state
            return {
                "frame": frame,
                "version": project.version,
                "detections": [
                    _detection_payload(state, det)
                    for det in state.store.detections_at(frame)
                ],
            }

    @app.get("/frame/{frame}/thumbnail-meta")
    def thumbnail_meta(frame: int):
        count = project.config.frame_count
        if frame < 0 or (count is not None and frame >= count):
            return JSONResponse(status_code=404, content={"error": "bad frame"})
        with lock:
            return {
                "frame": frame,
                "time_s": frame / project.fps,
                "video_url": "/video/main",
                "detection_count": len(project.state.store.detections_at(frame)),
                "views": [
                    {
                        "view_id": view.view_id,
                        "frame": synced_frame(
                            frame, view.frame_offset, view.frame_count
                        ),
                    }
                    for view in project.state.views
                ],
            }

    @app.post("/commands")
    async def post_command(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or not isinstance(body.get("kind"), str):
            return JSONResponse(
                status_code=400, content={"error": "expected {kind, params}"}
            )
        params = body.get("params") or {}
        if not isinstance(params, dict):
            return JSONResponse(
                status_code=400, content={"error": "params must be an object"}
            )
        # write path: one journal writer at a time, per the append-order rule
        def run():
            with lock:
                return project.apply(body["kind"], params), project.version

        result, version = await asyncio.get_running_loop().run_in_executor(None, run)
        return {"version": version, "result": result}

    @app.get("/behaviors")
    def behaviors():
        with lock:
            return {
                "version": project.version,
                "behaviors": [
                    _record_payload(r) for r in project.state.annotation.listing()
                ],
            }

    @app.get("/export/{what}")
    def export(what: str):
        with lock:
            if what == "tracking":
                name, text = export_tracking(project)
                media = "text/plain"
            elif what == "interactions":
                name, text = export_interactions(project)
                media = "text/csv"
            elif what == "metadata":
                name, text = export_metadata(project)
                media = "text/csv"
            else:
                return JSONResponse(
                    status_code=404, content={"error": f"unknown export {what!r}"}
                )
        return Response(
            text.encode("utf-8"),
            media_type=media,
            headers={"content-disposition": f'attachment; filename="{name}"'},
        )

    @app.post("/snapshots")
    async def post_snapshot(request: Request, frame: int, with_boxes: bool = False):
        image = await request.body()
        if not image:
            return JSONResponse(status_code=400, content={"error": "empty image"})
        with lock:
            name = registry.register(project.video_name, frame, with_boxes, image)
        return {"file": name, "frame": frame, "with_boxes": with_boxes}

    @app.get("/snapshots")
    def list_snapshots():
        with lock:
            return {"snapshots": registry.listing()}

    @app.get("/events")
    async def events():
        async def stream():
            token, queue = hub.subscribe()
            try:
                yield _sse_event(project.version)
                while True:
                    try:
                        version = await asyncio.wait_for(
                            queue.get(), timeout=KEEPALIVE_SECONDS
                        )
                    except asyncio.TimeoutError:
                        yield ": keepalive\n\n"
                        continue
                    while not queue.empty():
                        version = queue.get_nowait()
                    yield _sse_event(version)
            finally:
                hub.unsubscribe(token)

        return StreamingResponse(
            stream(),
            media_type="text/event-stream",
            headers={"cache-control": "no-cache", "x-accel-buffering": "no"},
        )

    @app.get("/video/{view_id}")
    def video(view_id: str, request: Request):
        if view_id == "main":
            path = Path(project.config.main_video)
        else:
            with lock:
                view = project.state.view_by_id(view_id)
            if view is None:
                return JSONResponse(
                    status_code=404, content={"error": f"unknown view {view_id!r}"}
                )
            path = Path(view.path)
        if not path.is_file():
            return JSONResponse(
                status_code=404, content={"error": f"video file missing: {path.name}"}
            )
        return _video_response(path, request.headers.get("range"))

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    else:

        @app.get("/")
        def root():
            return {"service": "vilabel", "version": __version__}

    return app


def serve(
    project: Project,
    port: int,
    host: str = "127.0.0.1",
    ui_dir: Path | None = None,
) -> None:
    """Run the API until interrupted. Binds loopback unless told otherwise."""
    import uvicorn

    app = build_app(project, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
