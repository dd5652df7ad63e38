from __future__ import annotations

import numpy as np
import pytest

from trichrome.color_space import IlluminantAxis, from_cylindrical, to_cylindrical
from trichrome.editing import (
    EditedStructure,
    EditScript,
    _apply_edit_block,
    apply_edit,
    clamp_gamut,
    filter_point,
    recolor,
)
from trichrome.geometry import closest_point, rotate_about_axis
from trichrome.structure import TriangularStructure, assign

from .conftest import random_structure
from .test_structure import structure_at_angles


def in_gamut_cloud(rng, n=2000):
    return rng.uniform(0.02, 0.98, (n, 3))


class TestEditScript:
    def test_json_round_trip(self, gray_axis):
        script = EditScript(
            vertex_moves={0: np.array([0.8, 0.2, 0.1])},
            axis_move=(np.zeros(3), np.array([0.9, 0.9, 0.9])),
            filter_scale=1.5,
        )
        data = script.to_dict()
        assert set(data) == {"vertex_moves", "axis_move", "filter_scale"}
        assert data["vertex_moves"] == {"0": [0.8, 0.2, 0.1]}
        back = EditScript.from_dict(data)
        np.testing.assert_allclose(back.vertex_moves[0], script.vertex_moves[0])
        assert back.filter_scale == 1.5

    def test_filter_scale_bounds(self):
        with pytest.raises(ValueError):
            EditScript(filter_scale=-0.1)
        with pytest.raises(ValueError):
            EditScript(filter_scale=9.0)

    def test_moved_vertex_on_axis_rejected(self, gray_axis):
        s = structure_at_angles(gray_axis, [0, 120])
        with pytest.raises(ValueError, match="on illuminant axis"):
            EditedStructure(s, EditScript(vertex_moves={0: np.array([0.5, 0.5, 0.5])}))

    def test_move_index_out_of_range(self, gray_axis):
        s = structure_at_angles(gray_axis, [0])
        with pytest.raises(ValueError, match="out of range"):
            EditedStructure(s, EditScript(vertex_moves={3: np.array([1.0, 0, 0])}))


class TestRecolor:
    def test_identity_fixed_point(self, rng):
        for k in (1, 2, 3, 5):
            s = random_structure(rng, k)
            es = EditedStructure.identity(s)
            c = in_gamut_cloud(rng)
            assert np.abs(recolor(c, es) - c).max() < 1e-9

    def test_k1_pure_rotation_example(self):
        axis = IlluminantAxis.gray()
        s = TriangularStructure(axis, np.array([[1.0, 0.0, 0.0]]))
        es = EditedStructure(
            s, EditScript(vertex_moves={0: np.array([0.0, 1.0, 0.0])})
        )
        out = recolor(np.array([0.5, 0.0, 0.0]), es)
        np.testing.assert_allclose(out, [0.0, 0.5, 0.0], atol=1e-9)

    def test_uniform_rotation_equals_rigid_rotation(self, rng):
        for k in (1, 2, 3, 5):
            s = random_structure(rng, k)
            for delta in (np.pi / 6, 2 * np.pi / 3, -np.pi / 2):
                moves = {
                    i: rotate_about_axis(s.colored[i], s.axis, delta)
                    for i in range(k)
                }
                es = EditedStructure(s, EditScript(vertex_moves=moves))
                c = in_gamut_cloud(rng, 500)
                expected = rotate_about_axis(c, s.axis, delta)
                assert np.abs(recolor(c, es) - expected).max() < 1e-6

    def test_vertex_transport(self, rng):
        # a color equal to a colored vertex lands exactly on the moved vertex
        s = random_structure(rng, 3)
        target = np.array([0.9, 0.15, 0.4])
        es = EditedStructure(s, EditScript(vertex_moves={1: target}))
        out = recolor(s.colored[1], es)
        np.testing.assert_allclose(out, target, atol=1e-9)

    def test_continuity_within_sector(self, rng):
        s = random_structure(rng, 3)
        es = EditedStructure(
            s,
            EditScript(
                vertex_moves={
                    0: rotate_about_axis(s.colored[0], s.axis, 0.8) * 1.1
                }
            ),
        )
        eps = 1e-4
        theta0 = s.thetas[0] + 0.3 * (s.thetas[1] - s.thetas[0])
        c1 = from_cylindrical(theta0, 0.3, 0.5, s.axis)
        c2 = from_cylindrical(theta0 + eps, 0.3, 0.5, s.axis)
        d_out = np.linalg.norm(recolor(c1, es) - recolor(c2, es))
        assert d_out < 100 * eps  # finite Lipschitz constant, no jump

    def test_axis_move_transports_grays(self, gray_axis):
        s = structure_at_angles(gray_axis, [0, 150])
        new_b = np.array([0.8, 0.8, 0.9])
        es = EditedStructure(s, EditScript(axis_move=(np.zeros(3), new_b)))
        out = recolor(np.array([0.5, 0.5, 0.5]), es)
        np.testing.assert_allclose(out, 0.5 * new_b, atol=1e-9)

    def test_near_axis_color_survives(self, gray_axis):
        s = structure_at_angles(gray_axis, [0, 120])
        es = EditedStructure.identity(s)
        c = np.array([0.5 + 1e-9, 0.5, 0.5])
        out = recolor(c, es)
        assert np.all(np.isfinite(out))
        assert np.abs(out - c).max() < 1e-6


class TestFilterPoint:
    TRI_AXIS = IlluminantAxis(np.zeros(3), np.array([0.0, 0.0, 1.0]))

    def structure(self):
        return TriangularStructure(self.TRI_AXIS, np.array([[1.0, 0.0, 0.5]]))

    def test_scale_one_identity(self, rng):
        s = self.structure()
        c = rng.uniform(0, 1, (100, 3))
        np.testing.assert_array_equal(filter_point(c, s, 0, 1.0), c)

    def test_scale_zero_projects(self, rng):
        s = self.structure()
        c = rng.uniform(0, 1, (100, 3))
        out = filter_point(c, s, 0, 0.0)
        _, d = closest_point(s.triangle(0), out)
        assert d.max() < 1e-9

    def test_scale_two_example(self):
        # oracle: closest point grid (tested in geometry) + vector arithmetic
        s = self.structure()
        out = filter_point(np.array([0.5, 0.3, 0.5]), s, 0, 2.0)
        np.testing.assert_allclose(out, [0.5, 0.6, 0.5], atol=1e-12)

    def test_negative_scale_rejected(self):
        with pytest.raises(ValueError):
            filter_point(np.zeros(3), self.structure(), 0, -1.0)

    def test_composition(self, rng):
        # with closest points interior to the triangle, scales compose
        s = self.structure()
        base = np.array([0.4, 0.0, 0.45]) + np.array([0.0, 1.0, 0.0]) * rng.uniform(
            0.05, 0.2, (50, 1)
        )
        a, b = 1.3, 0.6
        one = filter_point(filter_point(base, s, 0, a), s, 0, b)
        both = filter_point(base, s, 0, a * b)
        assert np.abs(one - both).max() < 1e-9


class TestClampGamut:
    def test_in_gamut_unchanged(self):
        c = np.array([0.5, 0.5, 0.5])
        np.testing.assert_array_equal(clamp_gamut(c), c)

    def test_out_of_gamut_clamped(self):
        np.testing.assert_array_equal(
            clamp_gamut(np.array([1.2, -0.1, 0.5])), [1.0, 0.0, 0.5]
        )

    def test_idempotent(self, rng):
        c = rng.uniform(-2, 2, (1000, 3))
        np.testing.assert_array_equal(clamp_gamut(clamp_gamut(c)), clamp_gamut(c))

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            clamp_gamut(np.array([np.nan, 0.0, 0.0]))


class TestApplyEdit:
    def test_identity_script(self, rng):
        s = random_structure(rng, 3)
        c = in_gamut_cloud(rng)
        asg = assign(c, s)
        es = EditedStructure.identity(s)
        out = apply_edit(c, asg, es, 1.0)
        assert np.abs(out - c).max() < 1e-9

    def test_scale_zero_lands_on_triangles(self, rng):
        s = random_structure(rng, 3)
        c = in_gamut_cloud(rng, 500)
        asg = assign(c, s)
        es = EditedStructure.identity(s)
        out = apply_edit(c, asg, es, 0.0)
        unclamped = np.all((out > 1e-9) & (out < 1 - 1e-9), axis=1)
        assert unclamped.sum() > 200  # clamping only touches boundary hits
        for i, o in zip(asg[unclamped], out[unclamped]):
            _, d = closest_point(s.triangle(int(i)), o)
            assert d < 1e-6

    def test_scale_1_5_distance_ratio(self, rng):
        s = random_structure(rng, 2, axis=IlluminantAxis.gray())
        c = in_gamut_cloud(rng, 2000) * 0.6 + 0.2  # stay clear of the gamut walls
        asg = assign(c, s)
        es = EditedStructure.identity(s)
        out = apply_edit(c, asg, es, 1.5)
        d0 = np.array(
            [closest_point(s.triangle(int(i)), p)[1] for i, p in zip(asg, c)]
        )
        d1 = np.array(
            [closest_point(s.triangle(int(i)), p)[1] for i, p in zip(asg, out)]
        )
        unclamped = np.all((out > 1e-9) & (out < 1 - 1e-9), axis=1)
        keep = unclamped & (d0 > 1e-6)
        assert keep.sum() > 100
        np.testing.assert_allclose(d1[keep], 1.5 * d0[keep], atol=1e-6)

    def test_length_mismatch(self, rng):
        s = random_structure(rng, 2)
        es = EditedStructure.identity(s)
        with pytest.raises(ValueError):
            apply_edit(np.zeros((5, 3)), np.zeros(4, dtype=int), es)

    def test_kernel_matches_numpy_reference(self, rng):
        for k in (1, 2, 4):
            s = random_structure(rng, k)
            c = rng.uniform(-0.1, 1.1, (5000, 3))
            asg = assign(c, s)
            moves = {
                i: rotate_about_axis(s.colored[i] * 1.1, s.axis, 0.3)
                for i in range(k)
            }
            es = EditedStructure(s, EditScript(vertex_moves=moves))
            fast = _apply_edit_block(c, asg, es, 1.4, use_kernel=True)
            ref = _apply_edit_block(c, asg, es, 1.4, use_kernel=False)
            assert np.abs(fast - ref).max() < 1e-12

    def test_threaded_matches_serial_bitwise(self, rng):
        s = random_structure(rng, 3)
        c = rng.uniform(0, 1, (50_000, 3))
        asg = assign(c, s)
        es = EditedStructure(
            s, EditScript(vertex_moves={0: s.colored[0] * 0.7}, filter_scale=1.2)
        )
        serial = apply_edit(c, asg, es, 1.2, n_threads=1)
        threaded = apply_edit(c, asg, es, 1.2, n_threads=4)
        assert np.array_equal(serial, threaded)
