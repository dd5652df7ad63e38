"""Local HTTP session service for interactive editing.

Upload an image, fit a structure, then stream previews as edit scripts
arrive. Previews are stateless: each one starts from the fitted baseline
structure, so a drag interaction simply re-sends its whole script.
Requests on one session are serialized; sessions are isolated.
"""

from __future__ import annotations

import secrets
import struct
import threading
import time

import cv2
import numpy as np
from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from .color_space import IlluminantAxis
from .editing import EditScript
from .fitting import FitConfig
from .imaging import ImageBuffer, ImageIOError, decode_image, encode_png
from .structure import TriangularStructure, assign
from .workflow import fit_image, init_from_angles, recolor_image, uniform_init

PREVIEW_LONG_SIDE = 512


class Session:
    def __init__(self, image: ImageBuffer):
        self.id = secrets.token_hex(16)
        self.image = image
        self.cloud = image.linear_cloud()
        self.preview_image = _downscale(image, PREVIEW_LONG_SIDE)
        self.structure: TriangularStructure | None = None
        self.assignment: np.ndarray | None = None
        self.preview_assignment: np.ndarray | None = None
        self.fit_report = None
        self.revision = 0
        self.lock = threading.Lock()
        self.last_access = time.monotonic()


def _downscale(buf: ImageBuffer, long_side: int) -> ImageBuffer:
    h, w = buf.height, buf.width
    scale = long_side / max(h, w)
    if scale >= 1.0:
        return buf
    new_w, new_h = max(1, round(w * scale)), max(1, round(h * scale))
    resized = cv2.resize(buf.pixels, (new_w, new_h), interpolation=cv2.INTER_AREA)
    return ImageBuffer(resized)


def _parse_axis(spec) -> IlluminantAxis:
    if spec == "gray" or spec is None:
        return IlluminantAxis.gray()
    try:
        return IlluminantAxis(np.asarray(spec["a"]), np.asarray(spec["b"]))
    except (KeyError, TypeError, ValueError) as e:
        raise HTTPException(422, f"invalid axis: {e}")


def _parse_script(payload) -> EditScript:
    try:
        return EditScript.from_dict(payload)
    except (KeyError, TypeError, ValueError) as e:
        raise HTTPException(422, f"invalid edit script: {e}")


def create_app(max_megapixels: float = 32.0, idle_timeout: float = 3600.0) -> FastAPI:
    app = FastAPI(title="trichrome service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        now = time.monotonic()
        with registry_lock:
            expired = [
                sid for sid, s in sessions.items()
                if now - s.last_access > idle_timeout
            ]
            for sid in expired:
                del sessions[sid]
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(404, "unknown session")
        session.last_access = now
        return session

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        data = await request.body()
        try:
            image = decode_image(data)
        except ImageIOError as e:
            raise HTTPException(400, str(e))
        if image.width * image.height > max_megapixels * 1e6:
            raise HTTPException(413, "image exceeds the configured megapixel limit")
        session = Session(image)
        with registry_lock:
            sessions[session.id] = session
        return {"id": session.id, "width": image.width, "height": image.height}

    @app.post("/sessions/{session_id}/fit")
    async def fit_session(session_id: str, request: Request):
        session = get_session(session_id)
        params = await request.json()
        k = params.get("k", 3)
        if not isinstance(k, int) or k < 1:
            raise HTTPException(422, "k must be a positive integer")
        axis = _parse_axis(params.get("axis", "gray"))
        init_spec = params.get("init", "uniform")
        try:
            if init_spec == "uniform":
                init = uniform_init(axis, k)
            else:
                if len(init_spec) != k:
                    raise ValueError(f"init lists {len(init_spec)} angles, k is {k}")
                init = init_from_angles(axis, init_spec)
            stride = int(params.get("stride", 1))
            cfg = FitConfig(stride=stride)
        except ValueError as e:
            raise HTTPException(422, str(e))

        with session.lock:
            try:
                structure, assignment, report = fit_image(session.image, init, cfg)
            except ValueError as e:
                raise HTTPException(422, str(e))
            session.structure = structure
            session.assignment = assignment
            session.preview_assignment = assign(
                session.preview_image.linear_cloud(), structure
            )
            session.fit_report = report
        return {
            "structure": structure.to_dict(),
            "report": {
                "iterations": report.iterations,
                "final_objective": report.final_objective,
                "converged": report.converged,
            },
        }

    def _render(session: Session, payload, preview: bool) -> bytes:
        script = _parse_script(payload)
        with session.lock:
            if session.structure is None:
                raise HTTPException(409, "fit has not been run for this session")
            buf = session.preview_image if preview else session.image
            asg = session.preview_assignment if preview else session.assignment
            try:
                out = recolor_image(buf, session.structure, script, assignment=asg)
            except ValueError as e:
                raise HTTPException(422, str(e))
            session.revision += 1
            return encode_png(out)

    @app.post("/sessions/{session_id}/preview")
    async def preview(session_id: str, request: Request):
        session = get_session(session_id)
        data = _render(session, await request.json(), preview=True)
        return Response(content=data, media_type="image/png")

    @app.post("/sessions/{session_id}/export")
    async def export(session_id: str, request: Request):
        session = get_session(session_id)
        data = _render(session, await request.json(), preview=False)
        return Response(content=data, media_type="image/png")

    @app.get("/sessions/{session_id}/cloud")
    async def cloud(session_id: str, max_points: int = 100_000):
        session = get_session(session_id)
        if max_points < 1:
            raise HTTPException(422, "max_points must be >= 1")
        with session.lock:
            payload = _cloud_payload(session, max_points)
        return Response(content=payload, media_type="application/octet-stream")

    return app


def _cloud_payload(session: Session, max_points: int) -> bytes:
    """Binary cloud: u32 count, count * (3*f32 pos + 3*u8 color), u8 flag,
    then when fitted: axis 2*3*f32, u32 k, k*3*f32 vertices. Little-endian."""
    from .imaging import cloud_sample

    positions, colors = cloud_sample(session.image, max_points)
    n = len(positions)
    parts = [struct.pack("<I", n)]
    interleaved = np.zeros(n, dtype=[("pos", "<f4", 3), ("col", "u1", 3)])
    interleaved["pos"] = positions.astype(np.float32)
    interleaved["col"] = colors
    parts.append(interleaved.tobytes())
    s = session.structure
    if s is None:
        parts.append(b"\x00")
    else:
        parts.append(b"\x01")
        parts.append(np.concatenate([s.axis.a, s.axis.b]).astype("<f4").tobytes())
        parts.append(struct.pack("<I", s.k))
        parts.append(s.colored.astype("<f4").tobytes())
    return b"".join(parts)
