"""Conversions between 8-bit sRGB, linear RGB and cylindrical coordinates.

All math runs in float64 linear RGB; 8-bit values only appear at I/O
boundaries. Cylindrical coordinates (theta, r, h) are taken about an
arbitrary illuminant axis: theta is the angle around the axis, r the
distance to the axis in absolute linear-RGB units, and h the height along
the axis normalized so that h=0 at the dark endpoint and h=1 at the light
endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Colors closer than this to the axis have an undefined angle; theta is
# pinned to 0 for them.
RADIAL_EPS = 1e-6

_SRGB_LINEAR_THRESHOLD = 0.04045
_LINEAR_SRGB_THRESHOLD = 0.0031308


def srgb_to_linear(srgb):
    """Decode 8-bit sRGB values (0..255) to linear RGB (0..1).

    Piecewise IEC 61966-2-1 transfer function. Accepts scalars or arrays
    of any shape; channel layout is up to the caller.
    """
    c = np.asarray(srgb, dtype=np.float64) / 255.0
    return np.where(
        c <= _SRGB_LINEAR_THRESHOLD,
        c / 12.92,
        ((c + 0.055) / 1.055) ** 2.4,
    )


def linear_to_srgb(linear):
    """Encode linear RGB (0..1) to 8-bit sRGB with round-to-nearest.

    Raises ValueError on channels outside [0, 1]; callers are expected to
    clamp to the gamut first.
    """
    c = np.asarray(linear, dtype=np.float64)
    if np.any(c < 0.0) or np.any(c > 1.0) or not np.all(np.isfinite(c)):
        raise ValueError("linear_to_srgb requires channels in [0, 1]; clamp first")
    encoded = np.where(
        c <= _LINEAR_SRGB_THRESHOLD,
        c * 12.92,
        1.055 * c ** (1.0 / 2.4) - 0.055,
    )
    return np.round(encoded * 255.0).astype(np.uint8)


@dataclass(frozen=True)
class IlluminantAxis:
    """The shared edge of a triangular structure, from dark `a` to light `b`.

    Derived members: unit direction `u`, length `length`, a deterministic
    reference direction `e0` perpendicular to `u` (anchor of theta=0) and
    the binormal `w = u x e0`, so {e0, w, u} is right-handed orthonormal.
    """

    a: np.ndarray
    b: np.ndarray
    u: np.ndarray = field(init=False)
    length: float = field(init=False)
    e0: np.ndarray = field(init=False)
    w: np.ndarray = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.float64).reshape(3)
        b = np.asarray(self.b, dtype=np.float64).reshape(3)
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("axis endpoints must be finite")
        d = b - a
        length = float(np.linalg.norm(d))
        if length <= 1e-9:
            raise ValueError("axis endpoints are coincident")
        u = d / length
        # theta=0 anchor: rejection of (1,0,0) from u, falling back to
        # (0,1,0) when u is (anti)parallel to the red axis.
        e0 = _reference_direction(u)
        w = np.cross(u, e0)
        # kept so h is exactly 0 at a and 1 at b: h = rel.d / d.d
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "dd", float(d @ d))
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "length", length)
        object.__setattr__(self, "e0", e0)
        object.__setattr__(self, "w", w)

    @staticmethod
    def gray() -> "IlluminantAxis":
        """Default black-to-white axis."""
        return IlluminantAxis(np.zeros(3), np.ones(3))


def _reference_direction(u):
    for seed in ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)):
        seed = np.asarray(seed)
        rej = seed - np.dot(seed, u) * u
        n = np.linalg.norm(rej)
        if n >= 1e-6:
            return rej / n
    raise ValueError("could not build a reference direction")  # pragma: no cover


def to_cylindrical(colors, axis: IlluminantAxis):
    """Express linear-RGB color(s) in cylindrical coordinates about `axis`.

    `colors` is shape (3,) or (..., 3). Returns (theta, r, h) arrays (or
    scalars for a single color). theta is canonical in (-pi, pi] and set
    to 0 when r < RADIAL_EPS.
    """
    c = np.asarray(colors, dtype=np.float64)
    rel = c - axis.a
    h = rel @ axis.d / axis.dd
    p = rel - np.multiply.outer(h * axis.length, axis.u)
    x = p @ axis.e0
    y = p @ axis.w
    r = np.hypot(x, y)
    theta = np.where(r < RADIAL_EPS, 0.0, np.arctan2(y, x))
    # atan2 returns [-pi, pi]; fold -pi onto +pi for canonical range
    theta = np.where(theta <= -np.pi, np.pi, theta)
    if c.ndim == 1:
        return float(theta), float(r), float(h)
    return theta, r, h


def from_cylindrical(theta, r, h, axis: IlluminantAxis):
    """Inverse of :func:`to_cylindrical`; accepts scalars or arrays."""
    theta = np.asarray(theta, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    h = np.asarray(h, dtype=np.float64)
    radial = np.multiply.outer(r * np.cos(theta), axis.e0) + np.multiply.outer(
        r * np.sin(theta), axis.w
    )
    return axis.a + np.multiply.outer(h * axis.length, axis.u) + radial


def wrap_angle(theta):
    """Wrap angle(s) into the canonical (-pi, pi] range."""
    wrapped = np.mod(np.asarray(theta, dtype=np.float64) + np.pi, 2.0 * np.pi) - np.pi
    return np.where(wrapped <= -np.pi, np.pi, wrapped)
