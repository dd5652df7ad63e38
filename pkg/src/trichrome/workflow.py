"""End-to-end operations shared by the CLI and the HTTP service.

Keeping these in one place guarantees the batch and interactive paths
produce byte-identical results for identical inputs.
"""

from __future__ import annotations

import numpy as np

from .color_space import IlluminantAxis, from_cylindrical
from .editing import EditedStructure, EditScript, apply_edit
from .color_space import linear_to_srgb
from .fitting import FitConfig, FitReport, fit
from .imaging import ImageBuffer
from .structure import TriangularStructure, assign


def uniform_init(axis: IlluminantAxis, k: int) -> TriangularStructure:
    """k colored vertices spread uniformly in angle, at r=0.5, h=0.5."""
    if k < 1:
        raise ValueError("k must be >= 1")
    thetas = 2.0 * np.pi * np.arange(k) / k
    colored = from_cylindrical(thetas, np.full(k, 0.5), np.full(k, 0.5), axis)
    return TriangularStructure(axis, colored)


def init_from_angles(axis: IlluminantAxis, angles_deg) -> TriangularStructure:
    """Colored vertices at the given angles (degrees), at r=0.5, h=0.5."""
    thetas = np.deg2rad(np.asarray(angles_deg, dtype=np.float64))
    k = len(thetas)
    colored = from_cylindrical(thetas, np.full(k, 0.5), np.full(k, 0.5), axis)
    return TriangularStructure(axis, colored)


def fit_image(
    buf: ImageBuffer, init: TriangularStructure, cfg: FitConfig = FitConfig()
) -> tuple[TriangularStructure, np.ndarray, FitReport]:
    """Fit a structure to an image's pixel cloud."""
    return fit(buf.linear_cloud(), init, cfg)


def recolor_image(
    buf: ImageBuffer,
    s: TriangularStructure,
    script: EditScript,
    assignment: np.ndarray | None = None,
    n_threads: int = 1,
) -> ImageBuffer:
    """Apply an edit script to a whole image and re-encode to 8-bit sRGB."""
    cloud = buf.linear_cloud()
    if assignment is None:
        assignment = assign(cloud, s)
    es = EditedStructure(s, script)
    edited = apply_edit(cloud, assignment, es, script.filter_scale, n_threads)
    pixels = linear_to_srgb(edited).reshape(buf.height, buf.width, 3)
    return ImageBuffer(pixels)
