from __future__ import annotations

import json

import numpy as np
import pytest

from trichrome.color_space import IlluminantAxis, from_cylindrical
from trichrome.geometry import closest_point
from trichrome.structure import (
    TriangularStructure,
    assign,
    load_structure,
    save_structure,
    sector_of,
    validate,
)

from .conftest import random_structure


def structure_at_angles(axis, degrees, r=0.5, h=0.5):
    thetas = np.deg2rad(np.asarray(degrees, dtype=float))
    k = len(thetas)
    return TriangularStructure(
        axis, from_cylindrical(thetas, np.full(k, r), np.full(k, h), axis)
    )


class TestStructure:
    def test_sorted_by_angle(self, gray_axis):
        s = structure_at_angles(gray_axis, [120, -40, 10])
        assert np.all(np.diff(s.thetas) > 0)
        assert s.k == 3

    def test_validate_ok(self, gray_axis):
        assert validate(structure_at_angles(gray_axis, [0, 120])) == []

    def test_validate_empty(self, gray_axis):
        s = TriangularStructure(gray_axis, np.empty((0, 3)))
        assert "no triangles" in validate(s)

    def test_validate_vertex_on_axis(self, gray_axis):
        s = TriangularStructure(gray_axis, np.array([[0.5, 0.5, 0.5]]))
        assert any("on illuminant axis" in v for v in validate(s))

    def test_validate_coincident_angles(self, gray_axis):
        s = structure_at_angles(gray_axis, [30, 30 + 1e-7, 200])
        assert any("coincident" in v for v in validate(s))


class TestAssign:
    def test_point_on_triangle(self, gray_axis):
        s = structure_at_angles(gray_axis, [0, 90, 180, 270])
        # a point exactly on the theta=180 triangle, inside it
        p = from_cylindrical(np.pi, 0.2, 0.5, gray_axis)
        expected = int(np.argmin(np.abs(s.thetas - np.pi)))
        assert assign(p[None, :], s)[0] == expected

    def test_on_axis_ties_to_lowest_index(self, gray_axis):
        s = structure_at_angles(gray_axis, [0, 120, 240])
        p = np.array([[0.5, 0.5, 0.5]])
        assert assign(p, s)[0] == 0

    def test_matches_per_triangle_brute_force(self, rng):
        s = random_structure(rng, 4)
        cloud = rng.uniform(0, 1, (200, 3))
        got = assign(cloud, s)
        for idx, c in zip(got, cloud):
            dists = [closest_point(s.triangle(i), c)[1] for i in range(s.k)]
            assert idx == int(np.argmin(dists))

    def test_permutation_equivariant(self, rng):
        s = random_structure(rng, 3)
        cloud = rng.uniform(0, 1, (500, 3))
        perm = rng.permutation(len(cloud))
        np.testing.assert_array_equal(assign(cloud, s)[perm], assign(cloud[perm], s))


class TestSectorOf:
    def test_on_triangle_angle(self, gray_axis):
        s = structure_at_angles(gray_axis, [0, 120, 240])
        for i, theta in enumerate(s.thetas):
            si, sj, alpha = sector_of(theta, s)
            assert (si, sj) == (i, (i + 1) % 3)
            assert alpha == 0.0

    def test_midpoint_of_sector(self, gray_axis):
        s = structure_at_angles(gray_axis, [0, 120])
        i, j, alpha = sector_of(np.deg2rad(60), s)
        assert (i, j) == (0, 1)
        assert abs(alpha - 0.5) < 1e-12

    def test_wrap_sector(self, gray_axis):
        # the sector from 120 back to 0 spans 240 degrees
        s = structure_at_angles(gray_axis, [0, 120])
        i, j, alpha = sector_of(np.deg2rad(180), s)
        assert (i, j) == (1, 0)
        # oracle: explicit mod-2pi arithmetic
        expected = ((np.deg2rad(180) - np.deg2rad(120)) % (2 * np.pi)) / (
            (np.deg2rad(0) - np.deg2rad(120)) % (2 * np.pi)
        )
        assert abs(alpha - expected) < 1e-12
        assert abs(alpha - 0.25) < 1e-12

    def test_k1_returns_zero(self, gray_axis):
        s = structure_at_angles(gray_axis, [45])
        assert sector_of(2.0, s) == (0, 0, 0.0)

    def test_bracketing_invariant(self, rng):
        s = random_structure(rng, 5)
        for theta in rng.uniform(-np.pi, np.pi, 200):
            i, j, alpha = sector_of(theta, s)
            off = (theta - s.thetas[i]) % (2 * np.pi)
            span = (s.thetas[j] - s.thetas[i]) % (2 * np.pi)
            assert off <= span + 1e-12
            assert 0 <= alpha < 1

    def test_alpha_continuity_at_boundaries(self, gray_axis):
        s = structure_at_angles(gray_axis, [0, 90, 200])
        eps = 1e-9
        for theta in s.thetas:
            _, _, a_left = sector_of(theta - eps, s)
            i, _, a_at = sector_of(theta, s)
            assert a_left > 1 - 1e-6  # left limit 1
            assert a_at == 0.0  # value 0


class TestSerialization:
    def test_round_trip(self, tmp_path, rng):
        s = random_structure(rng, 3)
        path = tmp_path / "structure.json"
        save_structure(s, path)
        loaded = load_structure(path)
        np.testing.assert_allclose(loaded.colored, s.colored, atol=1e-12)
        np.testing.assert_allclose(loaded.axis.a, s.axis.a, atol=1e-12)

    def test_file_format_shape(self, tmp_path, gray_axis):
        s = structure_at_angles(gray_axis, [0, 120])
        path = tmp_path / "structure.json"
        save_structure(s, path)
        data = json.loads(path.read_text())
        assert set(data) == {"axis", "colored"}
        assert set(data["axis"]) == {"a", "b"}
        assert len(data["colored"]) == 2
        assert all(len(v) == 3 for v in data["colored"])

    def test_loader_rejects_invalid(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(
            json.dumps(
                {
                    "axis": {"a": [0, 0, 0], "b": [1, 1, 1]},
                    "colored": [[0.5, 0.5, 0.5]],
                }
            )
        )
        with pytest.raises(ValueError, match="on illuminant axis"):
            load_structure(path)
