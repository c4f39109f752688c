"""Local single-session HTTP service for the browser UI.

One image session per process. Mutations (upload, select, edit) serialize
under a lock; every mutating request must carry the revision it was issued
against and is rejected with 409 when stale, because pair ids are only
meaningful within one revision.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, Response
from pydantic import BaseModel

from .edits import EditOp
from .errors import (
    InvalidPairIdError,
    NoSelectionError,
    ScaleOutOfRangeError,
    TopoeditError,
)
from .features import BrushRect, mask_to_png_bytes
from .field import ChannelId, decode_image_bytes, encode_png
from .session import Session

DEFAULT_PORT = 7230


class RectBody(BaseModel):
    x: tuple[float, float]
    y: tuple[float, float]


class SelectBody(BaseModel):
    revision: int
    channel: str
    kind: str
    rects: list[RectBody]


class EditBody(BaseModel):
    revision: int
    op: str
    scale: float


def create_app(connectivity: int = 8) -> FastAPI:
    app = FastAPI(title="topoedit")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    state = {"session": None}
    lock = threading.RLock()

    def session_or_404() -> Session:
        sess = state["session"]
        if sess is None:
            raise _HttpError(404, "no active session; POST an image to /session first")
        return sess

    class _HttpError(Exception):
        def __init__(self, status: int, message: str):
            self.status = status
            self.message = message

    @app.exception_handler(_HttpError)
    async def _handle(_req, exc: _HttpError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    def check_revision(sess: Session, revision: int) -> None:
        if revision != sess.revision:
            raise _HttpError(
                409, f"stale revision {revision}; server is at {sess.revision}"
            )

    @app.post("/session")
    async def post_session(request: Request):
        data = await request.body()
        try:
            image = decode_image_bytes(data)
        except TopoeditError as exc:
            raise _HttpError(400, str(exc))
        with lock:
            state["session"] = Session(image, connectivity=connectivity)
            sess = state["session"]
            return {"revision": sess.revision, "width": sess.width, "height": sess.height}

    @app.get("/image.png")
    def get_image():
        with lock:
            sess = session_or_404()
            return Response(content=encode_png(sess.render()), media_type="image/png")

    @app.get("/diagram")
    def get_diagram(channel: str, kind: str):
        if kind not in ("pd", "pv"):
            raise _HttpError(400, "kind must be 'pd' or 'pv'")
        try:
            chan = ChannelId.parse(channel)
        except ValueError as exc:
            raise _HttpError(400, str(exc))
        with lock:
            sess = session_or_404()
            points = sess.diagram_points(chan, kind)
            return {
                "revision": sess.revision,
                "channel": chan.value,
                "kind": kind,
                "points": [
                    {"pair": pt.pair_id, "x": pt.x, "y": pt.y, "kind": pt.kind.value}
                    for pt in points
                ],
            }

    @app.post("/select")
    def post_select(body: SelectBody):
        if body.kind not in ("pd", "pv"):
            raise _HttpError(400, "kind must be 'pd' or 'pv'")
        try:
            chan = ChannelId.parse(body.channel)
            rects = [BrushRect(diagram=body.kind, x=r.x, y=r.y) for r in body.rects]
        except ValueError as exc:
            raise _HttpError(400, str(exc))
        with lock:
            sess = session_or_404()
            check_revision(sess, body.revision)
            selected = sess.select(chan, body.kind, rects)
            return {
                "revision": sess.revision,
                "selected": sorted(selected),
                "mask_url": "/mask.png",
            }

    @app.post("/edit")
    def post_edit(body: EditBody):
        try:
            op = EditOp(body.op)
        except ValueError:
            raise _HttpError(400, f"unknown edit op {body.op!r}")
        with lock:
            sess = session_or_404()
            check_revision(sess, body.revision)
            try:
                revision = sess.apply_to_selection(op, body.scale)
            except (ScaleOutOfRangeError, NoSelectionError, InvalidPairIdError) as exc:
                raise _HttpError(400, str(exc))
            return {"revision": revision}

    @app.get("/mask.png")
    def get_mask():
        with lock:
            sess = session_or_404()
            return Response(content=mask_to_png_bytes(sess.selection_mask()), media_type="image/png")

    @app.get("/log")
    def get_log():
        with lock:
            sess = session_or_404()
            return PlainTextResponse("\n".join(sess.log_lines()) + "\n")

    return app


def serve(host: str = "127.0.0.1", port: int = DEFAULT_PORT, connectivity: int = 8) -> None:
    import uvicorn

    uvicorn.run(create_app(connectivity=connectivity), host=host, port=port, log_level="warning")
