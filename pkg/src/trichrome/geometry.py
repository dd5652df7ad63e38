"""3D triangle primitives used by the color structure.

Triangles follow the structure convention v0 = axis dark endpoint,
v1 = axis light endpoint, v2 = colored vertex, but nothing here depends
on it. Closest-point queries use the standard Voronoi-region case
analysis and are vectorized over query points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .color_space import IlluminantAxis

DEGENERATE_AREA_EPS = 1e-12


@dataclass(frozen=True)
class Triangle3:
    v0: np.ndarray
    v1: np.ndarray
    v2: np.ndarray

    def __post_init__(self):
        for name in ("v0", "v1", "v2"):
            v = np.asarray(getattr(self, name), dtype=np.float64).reshape(3)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"triangle vertex {name} must be finite")
            object.__setattr__(self, name, v)

    @property
    def area(self) -> float:
        return 0.5 * float(
            np.linalg.norm(np.cross(self.v1 - self.v0, self.v2 - self.v0))
        )

    @property
    def is_degenerate(self) -> bool:
        return self.area <= DEGENERATE_AREA_EPS

    def vertices(self) -> np.ndarray:
        return np.stack([self.v0, self.v1, self.v2])


def closest_point(tri: Triangle3, points):
    """Closest point(s) of the closed triangle to `points` and distance(s).

    `points` is shape (3,) or (N, 3); returns (q, d) with matching shape.
    Degenerate triangles fall back to the closest point on their longest
    edge segment.
    """
    p = np.asarray(points, dtype=np.float64)
    single = p.ndim == 1
    p = np.atleast_2d(p)

    if tri.is_degenerate:
        q = _closest_point_segment(*_longest_edge(tri), p)
    else:
        q = _closest_point_triangle(tri.v0, tri.v1, tri.v2, p)
    d = np.linalg.norm(p - q, axis=1)
    if single:
        return q[0], float(d[0])
    return q, d


def _longest_edge(tri: Triangle3):
    edges = [(tri.v0, tri.v1), (tri.v1, tri.v2), (tri.v2, tri.v0)]
    return max(edges, key=lambda e: np.linalg.norm(e[1] - e[0]))


def _closest_point_segment(a, b, p):
    ab = b - a
    denom = float(ab @ ab)
    if denom <= 0.0:
        return np.broadcast_to(a, p.shape).copy()
    t = np.clip((p - a) @ ab / denom, 0.0, 1.0)
    return a + t[:, None] * ab


def _closest_point_triangle(a, b, c, p):
    # Ericson, "Real-Time Collision Detection" 5.1.5, vectorized over p.
    # Only two matvecs are point-dependent; the remaining dot products are
    # per-triangle constants. The result is expressed as barycentric
    # coefficients (v, w) over edges ab, ac so q is a single reconstruction.
    ab = b - a
    ac = c - a
    abab = ab @ ab
    abac = ab @ ac
    acac = ac @ ac

    d1 = (p - a) @ ab
    d2 = (p - a) @ ac
    d3 = d1 - abab
    d4 = d2 - abac
    d5 = d1 - abac
    d6 = d2 - acac

    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2

    with np.errstate(divide="ignore", invalid="ignore"):
        t_ab = np.clip(d1 / (d1 - d3), 0.0, 1.0)
        t_ac = np.clip(d2 / (d2 - d6), 0.0, 1.0)
        t_bc = np.clip((d4 - d3) / ((d4 - d3) + (d5 - d6)), 0.0, 1.0)
        denom = va + vb + vc
        v_face = vb / denom
        w_face = vc / denom

    in_vert_a = (d1 <= 0) & (d2 <= 0)
    in_vert_b = (d3 >= 0) & (d4 <= d3)
    in_vert_c = (d6 >= 0) & (d5 <= d6)
    in_edge_ab = (vc <= 0) & (d1 >= 0) & (d3 <= 0)
    in_edge_ac = (vb <= 0) & (d2 >= 0) & (d6 <= 0)
    in_edge_bc = (va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0)

    # priority order matches the region case analysis: vertices, edges, face
    v = np.select(
        [in_vert_a, in_vert_b, in_vert_c, in_edge_ab, in_edge_ac, in_edge_bc],
        [0.0, 1.0, 0.0, t_ab, 0.0, 1.0 - t_bc],
        default=v_face,
    )
    w = np.select(
        [in_vert_a, in_vert_b, in_vert_c, in_edge_ab, in_edge_ac, in_edge_bc],
        [0.0, 0.0, 1.0, 0.0, t_ac, t_bc],
        default=w_face,
    )
    return a + v[:, None] * ab + w[:, None] * ac


@dataclass(frozen=True)
class Barycentric:
    w0: float
    w1: float
    w2: float

    def as_array(self):
        return np.array([self.w0, self.w1, self.w2])


def barycentric_of(tri: Triangle3, point) -> Barycentric:
    """Affine weights of the in-plane projection of `point`.

    Weights sum to 1; individual weights go negative when the projection
    falls outside the triangle. Raises on degenerate triangles.
    """
    if tri.is_degenerate:
        raise ValueError("barycentric coordinates undefined for degenerate triangle")
    p = np.asarray(point, dtype=np.float64).reshape(3)
    ab = tri.v1 - tri.v0
    ac = tri.v2 - tri.v0
    ap = p - tri.v0
    d00 = ab @ ab
    d01 = ab @ ac
    d11 = ac @ ac
    d20 = ap @ ab
    d21 = ap @ ac
    denom = d00 * d11 - d01 * d01
    w1 = (d11 * d20 - d01 * d21) / denom
    w2 = (d00 * d21 - d01 * d20) / denom
    return Barycentric(1.0 - w1 - w2, float(w1), float(w2))


def apply_barycentric(tri: Triangle3, bary: Barycentric):
    """Evaluate sum(w_i * v_i); weights must sum to 1 within 1e-6."""
    total = bary.w0 + bary.w1 + bary.w2
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"barycentric weights sum to {total}, expected 1")
    return bary.w0 * tri.v0 + bary.w1 * tri.v1 + bary.w2 * tri.v2


def rotate_about_axis(points, axis: IlluminantAxis, delta: float):
    """Rigidly rotate point(s) about the axis line by `delta` radians."""
    p = np.asarray(points, dtype=np.float64)
    rel = p - axis.a
    along = rel @ axis.u
    x = rel @ axis.e0
    y = rel @ axis.w
    cd, sd = np.cos(delta), np.sin(delta)
    xr = x * cd - y * sd
    yr = x * sd + y * cd
    return (
        axis.a
        + np.multiply.outer(along, axis.u)
        + np.multiply.outer(xr, axis.e0)
        + np.multiply.outer(yr, axis.w)
    )
