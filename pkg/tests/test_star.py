import unittest

import numpy as np

from tests.support import get_app


class TestAngleDeficit(unittest.TestCase):
    """Tests for curvature at a vertex"""

    def setUp(self):
        app = get_app()
        self.stars = app.star_service
        self.fixtures = app.fixture_service

    def test_cube_corner(self):
        self.assertAlmostEqual(self.stars.angle_deficit(self.fixtures.cube_corner()), np.pi / 2)

    def test_tetrahedron_vertex(self):
        self.assertAlmostEqual(self.stars.angle_deficit(self.fixtures.tetrahedron_vertex()), np.pi)

    def test_saddle_is_negative(self):
        # four corner angles of 120 degrees
        self.assertAlmostEqual(self.stars.angle_deficit(self.fixtures.saddle()), -2.0 * np.pi / 3)

    def test_flat_fan(self):
        self.assertAlmostEqual(self.stars.angle_deficit(self.fixtures.flat_fan()), 0.0)

    def test_translation_keeps_deficit(self):
        s = self.fixtures.monkey_saddle()
        moved = s.translated([3.0, -2.0, 0.5])
        self.assertAlmostEqual(self.stars.angle_deficit(moved), self.stars.angle_deficit(s))


class TestGaussImage(unittest.TestCase):
    """Tests for the Gauss image and the projected star"""

    def setUp(self):
        app = get_app()
        self.stars = app.star_service
        self.spherical = app.spherical_service
        self.fixtures = app.fixture_service

    def test_cube_corner_normals(self):
        g = self.stars.gauss_image(self.fixtures.cube_corner())
        np.testing.assert_allclose(g.vertices, [[0, 0, 1], [1, 0, 0], [0, 1, 0]], atol=1e-15)

    def test_convex_gauss_image_area_is_curvature(self):
        for name in ('cube_corner', 'tetrahedron_vertex'):
            with self.subTest(star=name):
                s = self.fixtures.star_fixtures()[name]()
                area = self.spherical.polygon_area_excess(self.stars.gauss_image(s))
                self.assertAlmostEqual(area, self.stars.angle_deficit(s))

    def test_gauss_angles_follow_corner_angles(self):
        s = self.fixtures.tetrahedron_vertex()
        expected = [self.stars.expected_gauss_angle(a, False, False) for a in s.angles]
        observed = self.stars.gauss_image_angles(s)
        # the Gauss angle at normal k sits between faces k - 1 and k + 1 and belongs to face k
        np.testing.assert_allclose(sorted(observed), sorted(expected))

    def test_projection_of_cube_corner(self):
        w = self.stars.project_to_sphere(self.fixtures.cube_corner())
        np.testing.assert_allclose(w.vertices, -np.eye(3))

    def test_reflex_faces_are_subdivided(self):
        s = self.fixtures.pseudo_digon()
        self.assertEqual(sum(s.reflex_flags), 2)
        dirs, inserted, owner = self.stars.subdivided_directions(s)
        self.assertEqual(len(dirs), s.valence + 2)
        self.assertEqual(sum(inserted), 2)
        self.assertEqual(sorted(set(owner)), list(range(s.valence)))

    def test_polar_of_projection_is_gauss_image(self):
        for name, build in self.fixtures.star_fixtures().items():
            with self.subTest(star=name):
                s = build()
                np.testing.assert_allclose(self.stars.polar_of_projection(s), s.normals, atol=1e-9)


class TestInflectionFaces(unittest.TestCase):
    """Tests for inflection faces"""

    def setUp(self):
        app = get_app()
        self.stars = app.star_service
        self.fixtures = app.fixture_service

    def test_convex_star_has_none(self):
        faces, weighted = self.stars.inflection_faces(self.fixtures.cube_corner())
        self.assertEqual(faces, set())
        self.assertEqual(weighted, 0)

    def test_pseudo_digon_inflects_everywhere(self):
        s = self.fixtures.pseudo_digon()
        faces, weighted = self.stars.inflection_faces(s)
        self.assertEqual(faces, set(range(4)))
        self.assertEqual(weighted, 4)

    def test_reflex_face_that_inflects(self):
        s = self.fixtures.pseudo_triangle_inflecting()
        reflex = s.reflex_flags.index(True)
        faces, _ = self.stars.inflection_faces(s)
        self.assertIn(reflex, faces)

    def test_reflex_face_that_does_not_inflect(self):
        s = self.fixtures.pseudo_triangle_not_inflecting()
        reflex = s.reflex_flags.index(True)
        faces, weighted = self.stars.inflection_faces(s)
        self.assertNotIn(reflex, faces)
        self.assertGreaterEqual(weighted, 2)

    def test_expected_gauss_angles(self):
        alpha = 0.4 * np.pi
        self.assertAlmostEqual(self.stars.expected_gauss_angle(alpha, False, False), 0.6 * np.pi)
        self.assertAlmostEqual(self.stars.expected_gauss_angle(alpha, False, True), 1.6 * np.pi)
        self.assertAlmostEqual(self.stars.expected_gauss_angle(1.2 * np.pi, True, False), 1.8 * np.pi)


class TestCurvatureParts(unittest.TestCase):
    """Tests for the split into positive and negative curvature"""

    def setUp(self):
        app = get_app()
        self.stars = app.star_service
        self.fixtures = app.fixture_service

    def test_convex_star_is_all_positive(self):
        parts = self.stars.curvature_parts(self.fixtures.cube_corner())
        self.assertAlmostEqual(parts.k_plus, np.pi / 2)
        self.assertAlmostEqual(parts.k_minus, 0.0)

    def test_saddle_is_all_negative(self):
        # the saddle's rays sum to zero, so their hull is the whole space
        parts = self.stars.curvature_parts(self.fixtures.saddle())
        self.assertEqual(parts.k_plus, 0.0)
        self.assertAlmostEqual(parts.k_minus, -2.0 * np.pi / 3)

    def test_parts_add_up(self):
        for name, build in self.fixtures.star_fixtures().items():
            with self.subTest(star=name):
                s = build()
                parts = self.stars.curvature_parts(s)
                self.assertGreaterEqual(parts.k_plus, 0.0)
                self.assertAlmostEqual(parts.k_plus + parts.k_minus, self.stars.angle_deficit(s))


class TestTransversePlane(unittest.TestCase):
    """Tests for planes onto which a star projects one-to-one"""

    def setUp(self):
        app = get_app()
        self.stars = app.star_service
        self.fixtures = app.fixture_service

    def test_graph_stars_have_transverse_plane(self):
        for s in (self.fixtures.cube_corner(), self.fixtures.saddle(), self.fixtures.monkey_saddle()):
            pole = self.stars.transverse_plane(s)
            self.assertIsNotNone(pole)
            self.assertGreater(float(np.min(s.normals @ pole)), 0.0)

    def test_no_hemisphere_around_opposite_pairs(self):
        normals = np.vstack([np.eye(3), -np.eye(3)])
        self.assertIsNone(self.stars.open_hemisphere(normals))

    def test_hemisphere_of_a_cap(self):
        normals = np.array([[0.1, 0, 1], [0, 0.1, 1], [-0.1, -0.1, 1]])
        normals /= np.linalg.norm(normals, axis=1)[:, None]
        pole = self.stars.open_hemisphere(normals)
        self.assertTrue(np.all(normals @ pole > 0))


if __name__ == '__main__':
    unittest.main()
