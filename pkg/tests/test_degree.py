import unittest

import numpy as np

from tests.support import get_app
from src.exceptions import NotGeneral


NORTH = np.array([0.0, 0.0, 1.0])
DIAGONAL = np.ones(3) / np.sqrt(3.0)


class TestNormalDegree(unittest.TestCase):
    """Tests for signed crossings of the polar polygon with a half meridian"""

    def setUp(self):
        app = get_app()
        self.degrees = app.degree_service
        self.spherical = app.spherical_service
        self.stars = app.star_service
        self.fixtures = app.fixture_service

    def test_cube_corner(self):
        s = self.fixtures.cube_corner()
        self.assertEqual(self.degrees.star_degree(s, DIAGONAL), 1)
        self.assertEqual(self.degrees.star_degree(s, -DIAGONAL), -1)

    def test_saddles(self):
        self.assertEqual(self.degrees.star_degree(self.fixtures.saddle(), NORTH), -1)
        self.assertEqual(self.degrees.star_degree(self.fixtures.monkey_saddle(), NORTH), -2)

    def test_middle_vertex_has_degree_zero(self):
        s = self.fixtures.middle_vertex()
        self.assertEqual(get_app().index_service.index(s, NORTH), -2)
        self.assertEqual(self.degrees.star_degree(s, NORTH), 0)

    def test_cap_polygon(self):
        self.assertEqual(self.degrees.normal_degree(self.fixtures.regular_polygon(5, 45.0), NORTH), 1)

    def test_pentagram_winds_twice(self):
        self.assertEqual(self.degrees.normal_degree(self.fixtures.pentagram(), NORTH), 2)

    def test_antisymmetry(self):
        w = self.stars.project_to_sphere(self.fixtures.monkey_saddle())
        xi = np.array([0.1, -0.2, 1.0])
        self.assertEqual(self.degrees.normal_degree(w, -xi), -self.degrees.normal_degree(w, xi))

    def test_rotation_invariance(self):
        w = self.stars.project_to_sphere(self.fixtures.monkey_saddle())
        rotation = self.spherical.random_rotation(seed=4)
        self.assertEqual(self.degrees.normal_degree(w.rotated(rotation), rotation @ NORTH),
                         self.degrees.normal_degree(w, NORTH))

    def test_longitude_does_not_matter(self):
        w = self.fixtures.pentagram()
        longitudes = np.random.default_rng(2).uniform(0.0, 2.0 * np.pi, 8)
        self.assertTrue(self.degrees.degree_independence_check(w, NORTH, longitudes))

    def test_meridian_through_vertex_is_moved(self):
        w = self.fixtures.regular_polygon(5, 45.0)
        wp = self.spherical.polar_polygon(w)
        e1, e2 = self.degrees.meridian_frame(NORTH)
        vertex = wp.vertices[0]
        longitude = float(np.arctan2(vertex @ e2, vertex @ e1))
        degree, used = self.degrees.polar_degree(wp, NORTH, longitude)
        self.assertEqual(degree, 1)
        self.assertNotAlmostEqual(used, longitude % (2.0 * np.pi))

    def test_azimuth_count_agrees(self):
        for w in (self.fixtures.pentagram(), self.fixtures.regular_polygon(7, 70.0, step=3)):
            wp = self.spherical.polar_polygon(w)
            self.assertEqual(self.degrees.degree_by_azimuth(wp, NORTH), self.degrees.polar_degree(wp, NORTH)[0])

    def test_direction_on_polygon_equator(self):
        w = self.spherical.polygon([[1, 0, 0], [0, 1, 1], [-1, 0, 0.5], [0, -1, -1]])
        with self.assertRaises(NotGeneral):
            self.degrees.normal_degree(w, NORTH)


class TestDegreeIdentities(unittest.TestCase):
    """Tests for the identities tying degree, index and winding numbers"""

    def setUp(self):
        app = get_app()
        self.degrees = app.degree_service
        self.spherical = app.spherical_service
        self.stars = app.star_service
        self.fixtures = app.fixture_service

    def test_saddle(self):
        w = self.stars.project_to_sphere(self.fixtures.saddle())
        report = self.degrees.degree_identities(w, NORTH)
        self.assertEqual((report.index, report.degree), (-1, -1))
        self.assertEqual((report.w_plus, report.w_minus), (-1, 0))
        self.assertEqual(report.c_parity, 0)

    def test_monkey_saddle(self):
        w = self.stars.project_to_sphere(self.fixtures.monkey_saddle())
        report = self.degrees.degree_identities(w, NORTH)
        self.assertEqual((report.index, report.degree), (-2, -2))
        self.assertEqual((report.w_plus, report.w_minus), (-2, 0))

    def test_middle_vertex(self):
        w = self.stars.project_to_sphere(self.fixtures.middle_vertex())
        report = self.degrees.degree_identities(w, NORTH)
        self.assertEqual((report.index, report.degree), (-2, 0))
        self.assertEqual((report.w_plus, report.w_minus), (-1, -1))

    def test_ordinary_point(self):
        w = self.stars.project_to_sphere(self.fixtures.cube_corner())
        report = self.degrees.degree_identities(w, [1.0, 1.0, -1.0])
        self.assertEqual((report.index, report.degree), (0, 0))

    def test_self_crossing_polygon(self):
        report = self.degrees.degree_identities(self.fixtures.pentagram(), NORTH)
        self.assertEqual(report.c_parity, 1)
        self.assertEqual((report.index, report.degree), (1, 2))
        self.assertEqual(report.winding_difference, report.degree)
        self.assertEqual(report.winding_sum, report.index + report.c_parity)

    def test_direction_touching_a_vertex(self):
        w = self.spherical.polygon([[1, 0, 0], [0, 1, 1], [-1, 0, 0.5], [0, -1, 1]])
        with self.assertRaises(NotGeneral):
            self.degrees.degree_identities(w, NORTH)


if __name__ == '__main__':
    unittest.main()
