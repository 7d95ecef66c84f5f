import unittest

import numpy as np
import pytest

from tests.support import get_app
from src.exceptions import AnchorNotFree, InadmissiblePair, InvalidDiagram, NotAdmissible, Unrealizable
from src.models.chords import ChordDiagram
from src.models.spherical import SphericalPolygon
from src.services.chord_service import noncrossing_matchings


NORTH = np.array([0.0, 0.0, 1.0])


class TestDiagramCombinatorics(unittest.TestCase):
    """Tests for enumeration, free chords and chord signs"""

    def setUp(self):
        self.chords = get_app().chord_service

    def test_noncrossing_matchings_are_catalan(self):
        self.assertEqual([len(noncrossing_matchings(2 * r)) for r in range(1, 6)], [1, 2, 5, 14, 42])

    def test_enumeration_counts(self):
        self.assertEqual([len(self.chords.enumerate_diagrams(r)) for r in range(1, 6)], [1, 2, 8, 42, 262])

    @pytest.mark.slow
    def test_enumeration_count_at_largest_size(self):
        self.assertEqual(len(self.chords.enumerate_diagrams(6)), 1828)

    def test_enumeration_bounds(self):
        self.assertEqual(self.chords.enumerate_diagrams(0), [ChordDiagram.empty()])
        with self.assertRaises(InvalidDiagram):
            self.chords.enumerate_diagrams(7)
        with self.assertRaises(InvalidDiagram):
            self.chords.enumerate_diagrams(-1)

    def test_every_diagram_has_two_free_chords(self):
        self._check_free_chords(range(1, 5))

    @pytest.mark.slow
    def test_free_chords_up_to_six_chords(self):
        self._check_free_chords((5, 6))

    def _check_free_chords(self, sizes):
        for r in sizes:
            for d in self.chords.enumerate_diagrams(r):
                with self.subTest(pi=d.pi):
                    self.assertGreaterEqual(len(self.chords.free_chords(d)), 2)
                    self.assertTrue(any(d.is_upper(j) for j in self.chords.free_chords(d)))

    def test_identity_permutation_signs(self):
        for r in range(1, 6):
            d = ChordDiagram(r, tuple(range(1, 2 * r + 1)))
            signs = self.chords.chord_signs(d)
            self.assertEqual((signs.n_plus, signs.n_minus), (r - 1, 0))
            self.assertEqual(self.chords.degree_from_diagram(signs), (1 - r, 1 - r))

    def test_degree_family(self):
        for r in range(1, 6):
            for k in range(r):
                d = self.chords.degree_family_permutation(r, k)
                with self.subTest(r=r, k=k):
                    self.assertEqual(self.chords.degree_from_diagram(self.chords.chord_signs(d)),
                                     (1 - r, r - 2 * k - 1))

    def test_degree_family_bounds(self):
        with self.assertRaises(InvalidDiagram):
            self.chords.degree_family_permutation(3, 3)
        with self.assertRaises(InvalidDiagram):
            self.chords.degree_family_permutation(0, 0)

    def test_degree_does_not_depend_on_anchor(self):
        for r in range(1, 5):
            for d in self.chords.enumerate_diagrams(r):
                with self.subTest(pi=d.pi):
                    self.assertTrue(self.chords.anchor_independent(d))

    @pytest.mark.slow
    def test_anchor_independence_at_five_chords(self):
        for d in self.chords.enumerate_diagrams(5):
            with self.subTest(pi=d.pi):
                self.assertTrue(self.chords.anchor_independent(d))

    def test_anchor_must_be_free_and_upper(self):
        d = ChordDiagram(3, (1, 6, 5, 2, 3, 4))
        with self.assertRaises(AnchorNotFree):
            self.chords.chord_signs(d, anchor=2)
        with self.assertRaises(AnchorNotFree):
            self.chords.chord_signs(d, anchor=1)
        with self.assertRaises(AnchorNotFree):
            self.chords.chord_signs(ChordDiagram.empty())


class TestDiagramEquivalence(unittest.TestCase):
    """Tests for canonical forms and free chord reduction"""

    def setUp(self):
        self.chords = get_app().chord_service

    def test_canonical_form_is_stable(self):
        d = ChordDiagram(3, (1, 6, 5, 2, 3, 4))
        self.assertEqual(self.chords.canonical_form(d), self.chords.canonical_form(d))
        self.assertTrue(self.chords.equivalent(d, d))
        self.assertEqual(self.chords.canonical_form(ChordDiagram.empty()), ())

    def test_different_chord_counts_are_not_equivalent(self):
        self.assertFalse(self.chords.equivalent(ChordDiagram(1, (1, 2)), ChordDiagram(2, (1, 2, 3, 4))))

    def test_reversed_and_mirrored_polygons_are_equivalent(self):
        for d in self.chords.enumerate_diagrams(3):
            w = self.chords.realize_diagram(d)
            mirrored = SphericalPolygon(w.vertices * [1.0, -1.0, 1.0])
            with self.subTest(pi=d.pi):
                self.assertTrue(self.chords.equivalent(d, self.chords.extract_diagram(w.reversed())))
                self.assertTrue(self.chords.equivalent(d, self.chords.extract_diagram(mirrored)))

    def test_reduce_free_chord(self):
        d = ChordDiagram(3, (1, 6, 5, 2, 3, 4))
        self.assertEqual(self.chords.reduce_free_chord(d, 1), ChordDiagram(2, (1, 2, 3, 4)))
        self.assertEqual(self.chords.reduce_free_chord(ChordDiagram(1, (1, 2)), 0), ChordDiagram.empty())

    def test_reduce_keeps_a_valid_diagram(self):
        for d in self.chords.enumerate_diagrams(4):
            for j in self.chords.free_chords(d):
                reduced = self.chords.reduce_free_chord(d, j)
                self.assertEqual(reduced.r, d.r - 1)

    def test_reduce_needs_free_chord(self):
        with self.assertRaises(AnchorNotFree):
            self.chords.reduce_free_chord(ChordDiagram(3, (1, 6, 5, 2, 3, 4)), 2)


class TestExtractionAndRealization(unittest.TestCase):
    """Tests for reading diagrams off polygons and building polygons from diagrams"""

    def setUp(self):
        app = get_app()
        self.chords = app.chord_service
        self.spherical = app.spherical_service
        self.indices = app.index_service
        self.degrees = app.degree_service
        self.fixtures = app.fixture_service

    def test_cap_polygon_has_empty_diagram(self):
        self.assertTrue(self.chords.extract_diagram(self.fixtures.regular_polygon(5, 45.0)).is_empty)

    def test_saddle_projection(self):
        w = get_app().star_service.project_to_sphere(self.fixtures.saddle())
        self.assertEqual(self.chords.extract_diagram(w, NORTH), ChordDiagram(2, (1, 2, 3, 4)))

    def test_touching_vertex_is_rejected(self):
        w = self.spherical.polygon([[1, 0, 0], [0, 1, 1], [-1, 0, 0.5], [0, -1, 1]])
        with self.assertRaises(NotAdmissible):
            self.chords.extract_diagram(w, NORTH)

    def test_round_trip(self):
        for r in range(1, 5):
            for d in self.chords.enumerate_diagrams(r):
                with self.subTest(pi=d.pi):
                    w = self.chords.realize_diagram(d)
                    self.assertTrue(self.spherical.is_simple(w))
                    self.assertEqual(self.chords.extract_diagram(w, NORTH), d)

    def test_diagram_predicts_index_and_degree(self):
        for r in range(1, 4):
            for d in self.chords.enumerate_diagrams(r):
                w = self.chords.realize_diagram(d, lift_deg=2.0)
                predicted = self.chords.degree_from_diagram(self.chords.chord_signs(d))
                with self.subTest(pi=d.pi):
                    self.assertEqual((self.indices.polygon_index(w, NORTH), self.degrees.normal_degree(w, NORTH)),
                                     predicted)

    def test_empty_diagram_is_unrealizable(self):
        with self.assertRaises(Unrealizable):
            self.chords.realize_diagram(ChordDiagram.empty())

    def test_realize_admissible_pairs(self):
        pairs = [(1, 1), (1, -1)] + [(i, d) for i in range(-5, 1) for d in range(i, -i + 1, 2)]
        for i, d in pairs:
            with self.subTest(i=i, d=d):
                w = self.chords.realize_index_degree(i, d)
                self.assertTrue(self.spherical.is_simple(w))
                self.assertEqual(self.indices.polygon_index(w, NORTH), i)
                self.assertEqual(self.degrees.normal_degree(w, NORTH), d)

    def test_reject_inadmissible_pairs(self):
        for i, d in [(1, 0), (1, 3), (0, 2), (-1, 0), (-2, 3), (2, 0)]:
            with self.subTest(i=i, d=d):
                with self.assertRaises(InadmissiblePair):
                    self.chords.realize_index_degree(i, d)


if __name__ == '__main__':
    unittest.main()
