"""Cross-module property tests (hypothesis-driven).

Each property states an invariant that must hold for arbitrary inputs,
complementing the example-based oracle tests in the per-module files.
"""

from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from trichrome.color_space import (
    RADIAL_EPS,
    IlluminantAxis,
    from_cylindrical,
    to_cylindrical,
    wrap_angle,
)
from trichrome.editing import clamp_gamut
from trichrome.geometry import Triangle3, closest_point, rotate_about_axis
from trichrome.structure import TriangularStructure, sector_of

unit = st.floats(0.0, 1.0, allow_nan=False, width=64)
coord = st.floats(-1.0, 2.0, allow_nan=False, width=64)
vec = st.tuples(coord, coord, coord)
angle = st.floats(-10.0, 10.0, allow_nan=False, width=64)


@settings(max_examples=80, deadline=None)
@given(vec, vec, vec, vec, st.tuples(unit, unit))
def test_closest_point_is_a_lower_bound(v0, v1, v2, p, w):
    """No point of the triangle is closer than the reported distance."""
    tri = Triangle3(v0, v1, v2)
    if tri.is_degenerate:
        return
    a, b = w
    if a + b > 1.0:
        a, b = 1.0 - a, 1.0 - b
    on_tri = (1 - a - b) * tri.v0 + a * tri.v1 + b * tri.v2
    q, d = closest_point(tri, np.asarray(p))
    assert d <= np.linalg.norm(on_tri - np.asarray(p)) + 1e-9
    # and the returned point itself realizes the distance
    assert abs(np.linalg.norm(q - np.asarray(p)) - d) < 1e-9


@settings(max_examples=80, deadline=None)
@given(angle)
def test_wrap_angle_canonical_and_idempotent(theta):
    w = float(wrap_angle(theta))
    assert -np.pi < w <= np.pi
    assert abs(float(wrap_angle(w)) - w) < 1e-12
    # wrapping never changes the angle's direction
    assert abs(np.angle(np.exp(1j * (w - theta)))) < 1e-9


@settings(max_examples=60, deadline=None)
@given(angle, st.floats(1e-5, 1.5, width=64), st.floats(-0.5, 1.5, width=64))
def test_cylindrical_round_trip(theta, r, h):
    axis = IlluminantAxis.gray()
    c = from_cylindrical(theta, r, h, axis)
    t2, r2, h2 = to_cylindrical(c, axis)
    assert abs(np.angle(np.exp(1j * (t2 - theta)))) < 1e-9
    assert abs(r2 - r) < 1e-9
    assert abs(h2 - h) < 1e-9


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.floats(-np.pi + 1e-6, np.pi, width=64), min_size=2, max_size=6, unique=True
    ),
    angle,
)
def test_sector_brackets_every_angle(thetas, query):
    thetas = sorted(thetas)
    if min(np.diff(thetas + [thetas[0] + 2 * np.pi])) < 0.05:
        return
    axis = IlluminantAxis.gray()
    k = len(thetas)
    colored = from_cylindrical(
        np.asarray(thetas), np.full(k, 0.5), np.full(k, 0.5), axis
    )
    s = TriangularStructure(axis, colored)
    i, j, alpha = sector_of(float(wrap_angle(query)), s)
    assert j == (i + 1) % k
    assert 0.0 <= alpha < 1.0
    off = (float(wrap_angle(query)) - s.thetas[i]) % (2 * np.pi)
    span = (s.thetas[j] - s.thetas[i]) % (2 * np.pi)
    assert off <= span + 1e-9


@settings(max_examples=60, deadline=None)
@given(vec, angle)
def test_rotation_preserves_axis_distance(p, delta):
    axis = IlluminantAxis.gray()
    p = np.asarray(p)
    q = rotate_about_axis(p, axis, delta)
    _, r1, h1 = to_cylindrical(p, axis)
    _, r2, h2 = to_cylindrical(q, axis)
    assert abs(r1 - r2) < 1e-9
    assert abs(h1 - h2) < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.lists(coord, min_size=3, max_size=3))
def test_clamp_gamut_is_a_projection(c):
    out = clamp_gamut(np.asarray(c))
    assert np.all((out >= 0.0) & (out <= 1.0))
    # idempotent, and a no-op for in-gamut input
    np.testing.assert_array_equal(clamp_gamut(out), out)
    if np.all((np.asarray(c) >= 0) & (np.asarray(c) <= 1)):
        np.testing.assert_array_equal(out, np.asarray(c))


@settings(max_examples=40, deadline=None)
@given(vec, angle, angle)
def test_rotations_compose(p, d1, d2):
    axis = IlluminantAxis.gray()
    p = np.asarray(p)
    both = rotate_about_axis(rotate_about_axis(p, axis, d1), axis, d2)
    once = rotate_about_axis(p, axis, d1 + d2)
    assert np.abs(both - once).max() < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.floats(0.05, 0.95, width=64), angle)
def test_near_axis_theta_pinned_to_zero(h, theta):
    # a color closer to the axis than RADIAL_EPS has theta exactly 0
    axis = IlluminantAxis.gray()
    c = from_cylindrical(theta, RADIAL_EPS * 0.5, h, axis)
    t, r, _ = to_cylindrical(c, axis)
    assert r < RADIAL_EPS
    assert t == 0.0
