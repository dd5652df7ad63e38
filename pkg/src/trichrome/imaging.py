"""Image decode/encode and point-cloud export.

Images are held as 8-bit sRGB row-major buffers. PNG and JPEG can be
read (16-bit PNGs are rounded down to 8 bits); only PNG is written so
that save/load round trips are bit-exact. Clouds are exported as ASCII
PLY with positions in linear RGB and display colors in sRGB.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from .color_space import srgb_to_linear
from .structure import TriangularStructure


class ImageIOError(Exception):
    pass


@dataclass(frozen=True)
class ImageBuffer:
    """8-bit sRGB image; pixels shape (height, width, 3), dtype uint8."""

    pixels: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pixels)
        if p.ndim != 3 or p.shape[2] != 3 or p.dtype != np.uint8:
            raise ValueError("pixels must be (h, w, 3) uint8")
        object.__setattr__(self, "pixels", p)

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    def linear_cloud(self) -> np.ndarray:
        """Row-major (n, 3) linear RGB cloud of all pixels."""
        return srgb_to_linear(self.pixels.reshape(-1, 3))


def load_image(path) -> ImageBuffer:
    """Decode a PNG or JPEG file to 8-bit RGB, discarding alpha.

    16-bit PNG channels are downconverted with round-to-nearest.
    """
    path = Path(path)
    if not path.is_file():
        raise ImageIOError(f"no such image file: {path}")
    try:
        return decode_image(path.read_bytes())
    except ImageIOError as e:
        raise ImageIOError(f"{e}: {path}") from None


def encode_png(buf: ImageBuffer) -> bytes:
    """Encode the buffer as PNG bytes (lossless, deterministic)."""
    if buf.width == 0 or buf.height == 0:
        raise ImageIOError("cannot encode a zero-sized image")
    ok, data = cv2.imencode(".png", buf.pixels[:, :, ::-1])
    if not ok:
        raise ImageIOError("PNG encoding failed")
    return data.tobytes()


def save_image(buf: ImageBuffer, path) -> None:
    """Write the buffer as PNG; load_image(save_image(b)) == b exactly."""
    path = Path(path)
    if path.suffix.lower() in (".jpg", ".jpeg"):
        raise ImageIOError("lossy output not supported for round-trip guarantees")
    data = encode_png(buf)
    try:
        path.write_bytes(data)
    except OSError as e:
        raise ImageIOError(f"cannot write {path}: {e}") from e


def decode_image(data: bytes) -> ImageBuffer:
    """Decode in-memory PNG/JPEG bytes; same semantics as load_image."""
    raw = cv2.imdecode(np.frombuffer(data, dtype=np.uint8), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ImageIOError("could not decode image bytes")
    if raw.ndim == 2:
        raw = raw[:, :, None].repeat(3, axis=2)
    elif raw.shape[2] == 4:
        raw = raw[:, :, :3]
    if raw.dtype == np.uint16:
        raw = np.round(raw.astype(np.float64) * (255.0 / 65535.0)).astype(np.uint8)
    elif raw.dtype != np.uint8:
        raise ImageIOError(f"unsupported sample depth {raw.dtype}")
    return ImageBuffer(raw[:, :, ::-1].copy())


def cloud_sample(buf: ImageBuffer, max_points: int):
    """Uniform-stride decimation of the pixel cloud.

    Returns (positions (n,3) linear RGB, display colors (n,3) uint8) with
    n <= max_points; deterministic for a given buffer.
    """
    if max_points < 1:
        raise ValueError("max_points must be >= 1")
    srgb = buf.pixels.reshape(-1, 3)
    stride = int(np.ceil(len(srgb) / max_points))
    sampled = srgb[::stride]
    return srgb_to_linear(sampled), sampled


def export_cloud_ply(
    buf: ImageBuffer,
    path,
    structure: TriangularStructure | None = None,
    max_points: int = 100_000,
) -> None:
    """Write the (decimated) pixel cloud as ASCII PLY.

    Vertex positions are linear RGB coordinates, colors the original sRGB
    pixels. When a structure is given, its axis endpoints and colored
    vertices are appended as extra labeled vertices.
    """
    positions, colors = cloud_sample(buf, max_points)

    overlay_pos = np.empty((0, 3))
    overlay_labels: list[str] = []
    if structure is not None:
        overlay_pos = np.vstack(
            [structure.axis.a, structure.axis.b, structure.colored]
        )
        overlay_labels = ["axis_a", "axis_b"] + [
            f"colored_{i}" for i in range(structure.k)
        ]

    n = len(positions) + len(overlay_pos)
    lines = [
        "ply",
        "format ascii 1.0",
        "comment positions are linear RGB coordinates",
    ]
    if structure is not None:
        lines.append(
            "comment structure overlay: last "
            f"{len(overlay_pos)} vertices are {' '.join(overlay_labels)}"
        )
    lines += [
        f"element vertex {n}",
        "property float x",
        "property float y",
        "property float z",
        "property uchar red",
        "property uchar green",
        "property uchar blue",
        "end_header",
    ]
    body = [
        f"{p[0]:.8f} {p[1]:.8f} {p[2]:.8f} {c[0]} {c[1]} {c[2]}"
        for p, c in zip(positions, colors)
    ]
    for p in overlay_pos:
        clamped = np.clip(p, 0.0, 1.0)
        c = np.round(clamped * 255).astype(int)
        body.append(f"{p[0]:.8f} {p[1]:.8f} {p[2]:.8f} {c[0]} {c[1]} {c[2]}")
    Path(path).write_text("\n".join(lines + body) + "\n", encoding="utf-8")
