"""Structure-driven color transforms: recoloring, filtering, gamut clamp.

Recoloring transports a color through the edited structure: the color's
cylindrical projections on its two bracketing triangles are re-expressed
through barycentric coordinates in the edited triangles, and the results
are blended in cylindrical coordinates with the angular weight alpha
measured in the pre-edit structure. Structural filtering scales each
color's displacement from its assigned triangle. Out-of-gamut results
are clamped back onto [0, 1]^3 per channel.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .color_space import RADIAL_EPS, IlluminantAxis, to_cylindrical
from .geometry import closest_point
from .structure import TriangularStructure, _sector_arrays, validate

TWO_PI = 2.0 * np.pi
MAX_FILTER_SCALE = 8.0

try:  # compiled fast path; the numpy implementation below is the reference
    from ._kernels import edit_pixels as _edit_pixels
except ImportError:  # pragma: no cover
    _edit_pixels = None


@dataclass(frozen=True)
class EditScript:
    """Declarative edit: per-triangle vertex moves, an optional axis move
    and a filter scale. Triangle indices refer to the fitted structure's
    sorted order."""

    vertex_moves: dict[int, np.ndarray] = field(default_factory=dict)
    axis_move: tuple[np.ndarray, np.ndarray] | None = None
    filter_scale: float = 1.0

    def __post_init__(self):
        moves = {
            int(i): np.asarray(c, dtype=np.float64).reshape(3)
            for i, c in self.vertex_moves.items()
        }
        object.__setattr__(self, "vertex_moves", moves)
        if self.axis_move is not None:
            a, b = self.axis_move
            object.__setattr__(
                self,
                "axis_move",
                (
                    np.asarray(a, dtype=np.float64).reshape(3),
                    np.asarray(b, dtype=np.float64).reshape(3),
                ),
            )
        if not 0.0 <= self.filter_scale <= MAX_FILTER_SCALE:
            raise ValueError(f"filter_scale must be in [0, {MAX_FILTER_SCALE}]")

    def to_dict(self) -> dict:
        return {
            "vertex_moves": {str(i): c.tolist() for i, c in self.vertex_moves.items()},
            "axis_move": None
            if self.axis_move is None
            else {"a": self.axis_move[0].tolist(), "b": self.axis_move[1].tolist()},
            "filter_scale": self.filter_scale,
        }

    @staticmethod
    def from_dict(data: dict) -> "EditScript":
        axis_move = data.get("axis_move")
        return EditScript(
            vertex_moves={
                int(i): np.asarray(c, dtype=np.float64)
                for i, c in data.get("vertex_moves", {}).items()
            },
            axis_move=None
            if axis_move is None
            else (np.asarray(axis_move["a"]), np.asarray(axis_move["b"])),
            filter_scale=float(data.get("filter_scale", 1.0)),
        )

    @staticmethod
    def identity() -> "EditScript":
        return EditScript()


class EditedStructure:
    """A before/after structure pair with explicit index correspondence.

    `after_colored[i]` is where `before.colored[i]` moved; `after` is the
    re-sorted structure built from those vertices. All edit math indexes
    triangles in the before structure's order.
    """

    def __init__(self, before: TriangularStructure, script: EditScript):
        bad = [i for i in script.vertex_moves if not 0 <= i < before.k]
        if bad:
            raise ValueError(f"vertex move indices out of range: {bad}")
        after_colored = before.colored.copy()
        for i, c in script.vertex_moves.items():
            after_colored[i] = c
        if script.axis_move is not None:
            after_axis = IlluminantAxis(*script.axis_move)
        else:
            after_axis = before.axis

        self.before = before
        self.after_axis = after_axis
        self.after_colored = after_colored  # aligned with before's indices
        self.after = TriangularStructure(after_axis, after_colored)

        violations = validate(self.after)
        if violations:
            raise ValueError("invalid edited structure: " + "; ".join(violations))

        # cylindrical placement of the moved vertices, in before-index order
        theta, r, h = to_cylindrical(after_colored, after_axis)
        self.after_thetas = theta
        self.after_radii = r
        self.after_heights = h

    @staticmethod
    def identity(before: TriangularStructure) -> "EditedStructure":
        return EditedStructure(before, EditScript.identity())

    def _transport_tables(self):
        """Per-triangle constants for the pixel pipeline (before-index order)."""
        if not hasattr(self, "_tables"):
            before = self.before
            k = before.k
            j = (np.arange(k) + 1) % k
            span_before = np.mod(before.thetas[j] - before.thetas, TWO_PI)
            dth_after = np.mod(self.after_thetas[j] - self.after_thetas, TWO_PI)
            if k == 1:
                span_before[:] = TWO_PI
                dth_after[:] = TWO_PI
            ab = self.after_axis.b - self.after_axis.a
            ac = self.after_colored - self.after_axis.a
            self._tables = {
                "span_before": span_before,
                "dth_after": dth_after,
                "ratio": self.after_radii / before.radii,
                "h_slope": (self.after_heights - before.heights) / before.radii,
                "tri_ab": ab,
                "tri_ac": ac,
                "tri_abab": float(ab @ ab),
                "tri_abac": ac @ ab,
                "tri_acac": np.einsum("ij,ij->i", ac, ac),
            }
        return self._tables


def recolor(colors, es: EditedStructure):
    """Transport color(s) through the structure edit; shape (3,) or (N, 3)."""
    c = np.asarray(colors, dtype=np.float64)
    single = c.ndim == 1
    c = np.atleast_2d(c)
    out = _recolor_block(c, es)
    return out[0] if single else out


def _recolor_block(c, es: EditedStructure):
    # The cylindrical projection of a color on triangle i is (theta_i, r, h)
    # with barycentric weights w2 = r / r_i, w1 = h - w2 * h_i (exact, the
    # projection lies in the triangle's plane). Transporting those weights
    # into the edited triangle gives a point whose cylindrical coordinates
    # about the edited axis are again closed-form:
    #   theta' = theta'_i,   r' = w2 * r'_i,   h' = w1 + w2 * h'_i
    # so the whole per-pixel blend reduces to gathers and lerps; no
    # per-projection trigonometry is needed.
    before = es.before
    ax2 = es.after_axis
    theta, r, h = to_cylindrical(c, before.axis)

    if before.k == 1:
        # full-circle reduction: the single triangle brackets itself and
        # alpha tracks the color's own angular offset around the axis
        i = j = np.zeros(len(c), dtype=np.intp)
        alpha = np.mod(theta - before.thetas[0], TWO_PI) / TWO_PI
    else:
        i, j, alpha = _sector_arrays(theta, before)

    # per-triangle transport constants, in before-index order
    tables = es._transport_tables()
    ratio = tables["ratio"]  # r' = r * ratio
    h_slope = tables["h_slope"]  # h' = h + r * slope
    # counter-clockwise sector width in the edited structure (2*pi when a
    # triangle brackets itself, i.e. k = 1)
    dth = tables["dth_after"][i]

    beta = 1.0 - alpha
    th_out = es.after_thetas[i] + alpha * dth
    r_out = r * (beta * ratio[i] + alpha * ratio[j])
    h_out = h + r * (beta * h_slope[i] + alpha * h_slope[j])

    radial = np.cos(th_out)[:, None] * ax2.e0 + np.sin(th_out)[:, None] * ax2.w
    out = ax2.a + (h_out * ax2.length)[:, None] * ax2.u + r_out[:, None] * radial

    # colors numerically on the axis keep their height and follow the axis
    near_axis = r < RADIAL_EPS
    if np.any(near_axis):
        out[near_axis] = ax2.a + np.multiply.outer(
            h[near_axis] * ax2.length, ax2.u
        )
    return out


def filter_point(colors, s: TriangularStructure, idx, scale: float):
    """Scale the displacement of color(s) from triangle `idx` by `scale`."""
    if scale < 0:
        raise ValueError("filter scale must be >= 0")
    c = np.asarray(colors, dtype=np.float64)
    single = c.ndim == 1
    c = np.atleast_2d(c)
    idx = np.broadcast_to(np.asarray(idx), (len(c),))
    out = np.empty_like(c)
    for t in np.unique(idx):
        mask = idx == t
        q, _ = closest_point(s.triangle(int(t)), c[mask])
        out[mask] = q + scale * (c[mask] - q)
    return out[0] if single else out


def clamp_gamut(colors):
    """Reproject color(s) onto the [0, 1]^3 gamut, per channel."""
    c = np.asarray(colors, dtype=np.float64)
    if np.any(np.isnan(c)):
        raise ValueError("cannot clamp NaN color channels")
    return np.clip(c, 0.0, 1.0)


def apply_edit(colors, assignment, es: EditedStructure, filter_scale: float = 1.0,
               n_threads: int = 1):
    """Recolor, filter against the edited structure, then clamp.

    `assignment` must have been computed against es.before; indices are
    carried over unchanged (pixels do not jump clusters mid-edit). With
    n_threads > 1 the pixel range is split into contiguous chunks processed
    on a thread pool; results are bit-identical to the serial path.
    """
    c = np.atleast_2d(np.asarray(colors, dtype=np.float64))
    assignment = np.asarray(assignment)
    if len(assignment) != len(c):
        raise ValueError("assignment length does not match color count")

    if n_threads <= 1 or len(c) < 4096:
        return _apply_edit_block(c, assignment, es, filter_scale)

    bounds = np.linspace(0, len(c), n_threads + 1, dtype=int)
    out = np.empty_like(c)
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        futures = [
            pool.submit(
                _apply_edit_block, c[lo:hi], assignment[lo:hi], es, filter_scale
            )
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]
        for (lo, hi), f in zip(zip(bounds[:-1], bounds[1:]), futures):
            out[lo:hi] = f.result()
    return out


def _apply_edit_block(c, assignment, es, filter_scale, use_kernel=True):
    if use_kernel and _edit_pixels is not None:
        tables = es._transport_tables()
        ax, ax2 = es.before.axis, es.after_axis
        out = np.empty_like(c)
        _edit_pixels(
            np.ascontiguousarray(c),
            np.ascontiguousarray(assignment, dtype=np.intp),
            out,
            ax.a, ax.d, ax.dd, ax.u, ax.e0, ax.w, ax.length,
            es.before.thetas, tables["span_before"],
            ax2.a, ax2.u, ax2.e0, ax2.w, ax2.length,
            es.after_thetas, tables["dth_after"],
            tables["ratio"], tables["h_slope"],
            tables["tri_ab"], np.ascontiguousarray(tables["tri_ac"]),
            tables["tri_abab"], tables["tri_abac"], tables["tri_acac"],
            float(filter_scale), RADIAL_EPS,
        )
        return out

    recolored = _recolor_block(c, es)
    # the filter runs against the edited structure, keeping the original
    # (before-order) triangle index of each pixel
    filtered = np.empty_like(recolored)
    for t in np.unique(assignment):
        mask = assignment == t
        tri = _after_triangle(es, int(t))
        q, _ = closest_point(tri, recolored[mask])
        filtered[mask] = q + filter_scale * (recolored[mask] - q)
    return clamp_gamut(filtered)


def _after_triangle(es: EditedStructure, idx: int):
    from .geometry import Triangle3

    return Triangle3(es.after_axis.a, es.after_axis.b, es.after_colored[idx])
