"""Synthetic ground-truth cloud generation.

Builds clouds from the physical triangle model: for a uniformly lit
material the visible colors span the triangle with vertices black,
diffuse*light and specular*light (component-wise products), anchored at
the dark axis endpoint. Clouds come with the exact generating angles, so
they double as an independent oracle for the fitting loop.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .color_space import RADIAL_EPS, IlluminantAxis, to_cylindrical


@dataclass(frozen=True)
class MaterialSpec:
    """One material's triangle: diffuse, specular and light colors."""

    diffuse: np.ndarray
    specular: np.ndarray
    light: np.ndarray = field(default_factory=lambda: np.ones(3))
    samples: int = 1000
    # Dirichlet concentration over (black, diffuse*light, specular*light)
    weights: tuple[float, float, float] = (1.0, 1.0, 1.0)
    sigma: float = 0.0  # isotropic off-plane noise, linear RGB units

    def __post_init__(self):
        for name in ("diffuse", "specular", "light"):
            object.__setattr__(
                self, name, np.asarray(getattr(self, name), dtype=np.float64).reshape(3)
            )
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")


@dataclass(frozen=True)
class SyntheticSpec:
    axis: IlluminantAxis
    materials: tuple[MaterialSpec, ...]
    # color bleeding: (material index, material index, sample count)
    bleed_pairs: tuple[tuple[int, int, int], ...] = ()


def material_vertices(axis: IlluminantAxis, m: MaterialSpec) -> np.ndarray:
    """The three physical triangle vertices of a material, in linear RGB."""
    return np.stack(
        [axis.a, axis.a + m.diffuse * m.light, axis.a + m.specular * m.light]
    )


def generate_cloud(spec: SyntheticSpec, seed: int):
    """Sample a cloud from the spec; returns (cloud, ground_truth_angles).

    The ground-truth angle of material i is the angle of its diffuse
    vertex about the axis. Reproducible bit-exactly for a given seed.
    """
    rng = np.random.default_rng(seed)
    angles = np.empty(len(spec.materials))
    per_material: list[np.ndarray] = []

    for i, m in enumerate(spec.materials):
        verts = material_vertices(spec.axis, m)
        theta, r, _ = to_cylindrical(verts[1], spec.axis)
        if r < RADIAL_EPS:
            raise ValueError(f"material {i}: diffuse*light lies on the axis")
        angles[i] = theta
        w = rng.dirichlet(m.weights, size=m.samples)
        pts = w @ verts
        if m.sigma > 0:
            pts = pts + rng.normal(0.0, m.sigma, size=pts.shape)
        per_material.append(pts)

    blocks = list(per_material)
    for i, j, count in spec.bleed_pairs:
        src = per_material[i][rng.integers(0, len(per_material[i]), size=count)]
        dst = per_material[j][rng.integers(0, len(per_material[j]), size=count)]
        t = rng.random(count)[:, None]
        blocks.append((1.0 - t) * src + t * dst)

    return np.vstack(blocks), angles


def synthetic_image(spec: SyntheticSpec, seed: int, width: int, height: int):
    """Render a cloud as an sRGB image buffer (pixel order = sample order).

    Clamps to gamut before quantization; resamples the cloud to exactly
    width*height points.
    """
    from .color_space import linear_to_srgb
    from .imaging import ImageBuffer

    cloud, angles = generate_cloud(spec, seed)
    n = width * height
    rng = np.random.default_rng(seed + 1)
    idx = rng.integers(0, len(cloud), size=n)
    pixels = linear_to_srgb(np.clip(cloud[idx], 0.0, 1.0)).reshape(height, width, 3)
    return ImageBuffer(pixels), angles
