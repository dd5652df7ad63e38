"""The triangular color structure: shared axis plus colored vertices.

A structure holds k triangles (axis.a, axis.b, colored[i]); colored
vertices are kept sorted by their angle about the axis. Assignment maps
every color of a cloud to its nearest triangle (distance to the bounded
triangle, ties broken by lowest index).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .color_space import RADIAL_EPS, IlluminantAxis, to_cylindrical
from .geometry import Triangle3, closest_point

ANGLE_SEPARATION_EPS = 1e-6


@dataclass(frozen=True)
class TriangularStructure:
    axis: IlluminantAxis
    colored: np.ndarray  # (k, 3) colored vertices, sorted by angle
    thetas: np.ndarray = field(init=False)  # (k,) angle of each colored vertex
    radii: np.ndarray = field(init=False)  # (k,) distance of each vertex to the axis
    heights: np.ndarray = field(init=False)  # (k,) normalized height of each vertex

    def __post_init__(self):
        colored = np.asarray(self.colored, dtype=np.float64).reshape(-1, 3)
        if len(colored) == 0:
            # invalid (validate reports "no triangles") but constructible, so
            # loaders can surface the violation instead of crashing
            empty = np.empty(0)
            object.__setattr__(self, "colored", colored)
            for name in ("thetas", "radii", "heights"):
                object.__setattr__(self, name, empty)
            return
        theta, r, h = to_cylindrical(colored, self.axis)
        order = np.argsort(theta, kind="stable")
        object.__setattr__(self, "colored", colored[order])
        object.__setattr__(self, "thetas", theta[order])
        object.__setattr__(self, "radii", r[order])
        object.__setattr__(self, "heights", h[order])

    @property
    def k(self) -> int:
        return len(self.colored)

    def triangle(self, i: int) -> Triangle3:
        return Triangle3(self.axis.a, self.axis.b, self.colored[i])

    def triangles(self):
        return [self.triangle(i) for i in range(self.k)]

    def validate(self) -> list[str]:
        return validate(self)

    def to_dict(self) -> dict:
        return {
            "axis": {"a": self.axis.a.tolist(), "b": self.axis.b.tolist()},
            "colored": self.colored.tolist(),
        }

    @staticmethod
    def from_dict(data: dict) -> "TriangularStructure":
        axis = IlluminantAxis(
            np.asarray(data["axis"]["a"], dtype=np.float64),
            np.asarray(data["axis"]["b"], dtype=np.float64),
        )
        return TriangularStructure(axis, np.asarray(data["colored"], dtype=np.float64))


def validate(s: TriangularStructure) -> list[str]:
    """Collect invariant violations; an empty list means the structure is valid."""
    violations = []
    if s.k < 1:
        violations.append("no triangles")
    on_axis = np.flatnonzero(s.radii < RADIAL_EPS)
    for i in on_axis:
        violations.append(f"colored vertex {i} on illuminant axis")
    if s.k >= 2:
        # adjacent pairs in sorted order, including the wrap-around pair
        gaps = np.diff(np.concatenate([s.thetas, [s.thetas[0] + 2.0 * np.pi]]))
        for i in np.flatnonzero(np.abs(gaps) < ANGLE_SEPARATION_EPS):
            j = (i + 1) % s.k
            violations.append(f"coincident triangle angles ({i}, {j})")
    if not np.all(np.isfinite(s.colored)):
        violations.append("non-finite colored vertex")
    return violations


def distances_to_structure(cloud, s: TriangularStructure):
    """Distance of every color to every triangle; shape (n, k)."""
    cloud = np.atleast_2d(np.asarray(cloud, dtype=np.float64))
    d = np.empty((len(cloud), s.k))
    for i in range(s.k):
        _, d[:, i] = closest_point(s.triangle(i), cloud)
    return d


def assign(cloud, s: TriangularStructure) -> np.ndarray:
    """Index of the nearest triangle per color; ties go to the lowest index."""
    return np.argmin(distances_to_structure(cloud, s), axis=1)


def sector_of(theta, s: TriangularStructure):
    """Locate `theta` between two adjacent triangle angles.

    Returns (i, j, alpha): triangles i and j = next in cyclic sorted order
    bracket theta counter-clockwise, alpha in [0, 1) is the normalized
    angular position. For k = 1 returns (0, 0, 0).
    """
    theta_arr = np.asarray(theta, dtype=np.float64)
    i, j, alpha = _sector_arrays(theta_arr, s)
    if theta_arr.ndim == 0:
        return int(i), int(j), float(alpha)
    return i, j, alpha


def _sector_arrays(theta, s: TriangularStructure):
    two_pi = 2.0 * np.pi
    if s.k == 1:
        zero = np.zeros_like(theta)
        return zero.astype(np.intp), zero.astype(np.intp), zero

    i = np.searchsorted(s.thetas, theta, side="right") - 1
    i = np.where(i < 0, s.k - 1, i)
    j = (i + 1) % s.k
    span = np.mod(s.thetas[j] - s.thetas[i], two_pi)
    span = np.where(span < ANGLE_SEPARATION_EPS, two_pi, span)
    offset = np.mod(theta - s.thetas[i], two_pi)
    # a query a few ulps below thetas[j] can round to alpha == 1.0; keep
    # the interval half-open so sector membership stays unambiguous
    return i, j, np.minimum(offset / span, np.nextafter(1.0, 0.0))


def save_structure(s: TriangularStructure, path) -> None:
    Path(path).write_text(json.dumps(s.to_dict(), indent=2), encoding="utf-8")


def load_structure(path) -> TriangularStructure:
    """Load a structure file, rejecting invalid ones with the violation list."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    s = TriangularStructure.from_dict(data)
    violations = validate(s)
    if violations:
        raise ValueError("invalid structure file: " + "; ".join(violations))
    return s
