import json
import os
import shutil
import tempfile
import unittest

import numpy as np

from tests.support import get_app
from src.config.settings import Settings
from src.exceptions import (EXIT_USAGE, EXIT_VALIDATION, IdentityViolation, InvalidDiagram, InvalidPolygon,
                            InvalidStar, ParseError, ZeroLengthEdge)
from src.models.arrangement import LayerProfile
from src.models.chords import ChordDiagram, ChordSigns, chords_cross
from src.models.mesh import ClosedMesh
from src.models.schemas import parse_diagram, parse_polygon, parse_star
from src.models.spherical import Arc, SphericalPolygon, as_unit
from src.models.star import Face, VertexStar


class TestSphericalModels(unittest.TestCase):
    """Tests for unit vectors, arcs and polygons"""

    def test_as_unit_normalizes(self):
        v = as_unit([3.0, 0.0, 4.0])
        self.assertAlmostEqual(np.linalg.norm(v), 1.0, places=15)
        np.testing.assert_allclose(v, [0.6, 0.0, 0.8])

    def test_as_unit_rejects_zero(self):
        with self.assertRaises(ZeroLengthEdge):
            as_unit([0.0, 0.0, 0.0])

    def test_arc_normal_and_length(self):
        arc = Arc(np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))
        np.testing.assert_allclose(arc.normal, [0, 0, 1])
        self.assertAlmostEqual(arc.length, np.pi / 2)
        np.testing.assert_allclose(arc.point_at(0.5), [np.sqrt(0.5), np.sqrt(0.5), 0], atol=1e-15)

    def test_arc_rejects_antipodal_endpoints(self):
        with self.assertRaises(InvalidPolygon):
            Arc(np.array([1.0, 0, 0]), np.array([-1.0, 0, 0]))

    def test_polygon_normalizes_vertices(self):
        w = SphericalPolygon(np.array([[2.0, 0, 0], [0, 3.0, 0], [0, 0, 0.5]]))
        np.testing.assert_allclose(np.linalg.norm(w.vertices, axis=1), 1.0)
        self.assertEqual(w.n, 3)
        np.testing.assert_allclose(w[3], w[0])

    def test_polygon_rejects_short_or_degenerate_input(self):
        with self.assertRaises(InvalidPolygon):
            SphericalPolygon(np.array([[1.0, 0, 0], [0, 1.0, 0]]))
        with self.assertRaises(InvalidPolygon):
            SphericalPolygon(np.array([[1.0, 0, 0], [-1.0, 0, 0], [0, 0, 1.0]]))
        with self.assertRaises(InvalidPolygon):
            SphericalPolygon(np.array([1.0, 0, 0]))

    def test_polygon_is_immutable(self):
        w = SphericalPolygon(np.eye(3))
        with self.assertRaises(ValueError):
            w.vertices[0, 0] = 5.0

    def test_reversed_and_shifted(self):
        w = SphericalPolygon(np.eye(3))
        np.testing.assert_allclose(w.reversed().vertices, np.eye(3)[::-1])
        np.testing.assert_allclose(w.shifted(1)[0], [0, 1, 0])

    def test_dict_round_trip(self):
        w = SphericalPolygon(np.eye(3))
        np.testing.assert_allclose(SphericalPolygon.from_dict(w.to_dict()).vertices, w.vertices)


class TestStarModels(unittest.TestCase):
    """Tests for faces and vertex stars"""

    def test_right_angle_face(self):
        face = Face(np.array([[0.0, 0, 0], [1.0, 0, 0], [0, 1.0, 0]]))
        self.assertAlmostEqual(face.angle, np.pi / 2)
        np.testing.assert_allclose(face.normal, [0, 0, 1], atol=1e-15)
        self.assertFalse(face.is_reflex)

    def test_reflex_face(self):
        chain = np.array([[0.0, 0, 0], [1.0, 0, 0], [-1.414, 1.414, 0], [0, -1.0, 0]])
        face = Face(chain)
        self.assertTrue(face.is_reflex)
        self.assertAlmostEqual(face.angle, 1.5 * np.pi)
        np.testing.assert_allclose(face.bisector, [-np.sqrt(0.5), np.sqrt(0.5), 0], atol=1e-12)

    def test_non_planar_face_rejected(self):
        chain = np.array([[0.0, 0, 0], [1.0, 0, 0], [1.0, 1.0, 0.5], [0, 1.0, 0]])
        with self.assertRaises(InvalidStar):
            Face(chain)

    def test_straight_face_rejected(self):
        with self.assertRaises(InvalidStar):
            Face(np.array([[0.0, 0, 0], [1.0, 0, 0], [-1.0, 0, 0]]))

    def test_cube_corner_from_ring(self):
        star = VertexStar.from_ring([0, 0, 0], [[-1, 0, 0], [0, -1, 0], [0, 0, -1]])
        self.assertEqual(star.valence, 3)
        np.testing.assert_allclose(star.angles, np.pi / 2)
        np.testing.assert_allclose(star.normals, [[0, 0, 1], [1, 0, 0], [0, 1, 0]], atol=1e-15)

    def test_coplanar_neighbours_rejected_when_strict(self):
        ring = [[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]]
        with self.assertRaises(InvalidStar):
            VertexStar.from_ring([0, 0, 0], ring)
        star = VertexStar.from_ring([0, 0, 0], ring, strict=False)
        self.assertEqual(star.valence, 4)

    def test_faces_must_share_edges(self):
        faces = [Face(np.array([[0.0, 0, 0], [1.0, 0, 0], [0, 1.0, 0.2]])),
                 Face(np.array([[0.0, 0, 0], [0, 1.0, 0], [-1.0, 0, 0.1]])),
                 Face(np.array([[0.0, 0, 0], [-1.0, 0, 0.1], [1.0, 0, 0]]))]
        with self.assertRaises(InvalidStar):
            VertexStar(np.zeros(3), faces)

    def test_star_dict_round_trip(self):
        star = VertexStar.from_ring([0, 0, 0], [[1, 0, 1], [0, 1, -1], [-1, 0, 1], [0, -1, -1]])
        again = VertexStar.from_dict(star.to_dict())
        np.testing.assert_allclose(again.ring, star.ring)
        self.assertNotIn('faces', star.to_dict())

    def test_translated_keeps_angles(self):
        star = VertexStar.from_ring([0, 0, 0], [[1, 0, 1], [0, 1, -1], [-1, 0, 1], [0, -1, -1]])
        moved = star.translated([5.0, -2.0, 1.0])
        np.testing.assert_allclose(moved.angles, star.angles)
        np.testing.assert_allclose(moved.center, [5.0, -2.0, 1.0])


class TestChordModels(unittest.TestCase):
    """Tests for chord diagrams"""

    def test_identity_diagram(self):
        d = ChordDiagram(2, (1, 2, 3, 4))
        self.assertEqual(d.upper_chords, [(1, 2), (3, 4)])
        self.assertEqual(d.lower_chords, [(2, 3), (4, 1)])
        self.assertEqual(d.index, -1)
        self.assertEqual(d.chord(3), (4, 1))
        self.assertTrue(d.is_upper(2))
        self.assertTrue(d.is_free((4, 1)))

    def test_crossing_upper_chords_rejected(self):
        with self.assertRaises(InvalidDiagram):
            ChordDiagram(2, (1, 3, 2, 4))

    def test_must_start_at_one(self):
        with self.assertRaises(InvalidDiagram):
            ChordDiagram(2, (2, 3, 4, 1))

    def test_not_a_permutation(self):
        with self.assertRaises(InvalidDiagram):
            ChordDiagram(2, (1, 2, 2, 4))

    def test_from_dict_checks_redundant_chords(self):
        data = {'r': 2, 'pi': [1, 2, 3, 4], 'upper': [[1, 2], [3, 4]], 'lower': [[2, 3], [4, 1]]}
        self.assertEqual(ChordDiagram.from_dict(data).pi, (1, 2, 3, 4))
        data['upper'] = [[1, 4], [2, 3]]
        with self.assertRaises(InvalidDiagram):
            ChordDiagram.from_dict(data)

    def test_empty_diagram(self):
        d = ChordDiagram.empty()
        self.assertTrue(d.is_empty)
        self.assertEqual(d.index, 1)

    def test_chords_cross(self):
        self.assertTrue(chords_cross((1, 3), (2, 4)))
        self.assertFalse(chords_cross((1, 4), (2, 3)))
        self.assertFalse(chords_cross((1, 2), (3, 4)))

    def test_signs_count_chords(self):
        self.assertEqual(ChordSigns(anchor=0, n_plus=2, n_minus=1).r, 4)


class TestOtherModels(unittest.TestCase):
    """Tests for meshes and layer profiles"""

    def test_tetrahedron_counts(self):
        mesh = ClosedMesh(np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]),
                          np.array([[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]))
        self.assertEqual(mesh.num_vertices, 4)
        self.assertEqual(mesh.num_edges, 6)
        self.assertEqual(mesh.euler_characteristic, 2)

    def test_shape_residual_of_saddle_profile(self):
        profile = LayerProfile(winding={0: 0, 1: -1}, c_plus_k=[], c_minus_k=[1], i_turns=4,
                               c_parity=0, algebraic_area=-0.5)
        self.assertEqual(profile.c_minus, 1)
        self.assertEqual(profile.shape_residual, 0)


class TestSchemas(unittest.TestCase):
    """Tests for input validation"""

    def test_star_input(self):
        data = parse_star({'center': [0, 0, 0], 'ring': [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
        self.assertNotIn('faces', data)

    def test_star_input_rejects_bad_points(self):
        with self.assertRaises(ParseError):
            parse_star({'center': [0, 0], 'ring': [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
        with self.assertRaises(ParseError):
            parse_star({'center': [0, 0, 0], 'ring': [[1, 0, 0], [0, 1, 0]]})
        with self.assertRaises(ParseError):
            parse_star({'center': [0, 0, 0], 'ring': [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 'colour': 1})

    def test_star_input_checks_chain_count(self):
        with self.assertRaises(ParseError):
            parse_star({'center': [0, 0, 0], 'ring': [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                        'faces': [[[0, 0, 0], [1, 0, 0], [0, 1, 0]]]})

    def test_polygon_input_accepts_bare_list(self):
        data = parse_polygon([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        self.assertEqual(len(data['vertices']), 3)

    def test_diagram_input(self):
        self.assertEqual(parse_diagram({'r': 1, 'pi': [1, 2]})['r'], 1)
        with self.assertRaises(ParseError):
            parse_diagram({'r': -1, 'pi': []})


class TestSettings(unittest.TestCase):
    """Tests for the configuration layer"""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.config_file = os.path.join(self.temp_dir, 'config.json')

    def tearDown(self):
        shutil.rmtree(self.temp_dir)

    def test_defaults(self):
        settings = Settings(self.config_file)
        self.assertEqual(settings.eps_gen, 1e-9)
        self.assertEqual(settings.default_seed, 7)
        self.assertEqual(settings.schema_version, '1')
        self.assertEqual(settings.get('chords.max_enumeration_r'), 6)
        self.assertEqual(settings.get('missing.key', 'fallback'), 'fallback')

    def test_file_overrides_merge(self):
        with open(self.config_file, 'w', encoding='utf-8') as f:
            json.dump({'geometry': {'eps_gen': 1e-7}}, f)
        settings = Settings(self.config_file)
        self.assertEqual(settings.eps_gen, 1e-7)
        self.assertEqual(settings.angle_tolerance, 1e-9)

    def test_set_save_and_reset(self):
        settings = Settings(self.config_file)
        settings.set('sampling.jobs', 4)
        self.assertTrue(settings.save())
        self.assertEqual(Settings(self.config_file).jobs, 4)
        settings.reset_to_defaults()
        self.assertEqual(settings.jobs, 1)

    def test_update_merges_sections(self):
        settings = Settings(self.config_file)
        settings.update({'sampling': {'monte_carlo_samples': 20000}, 'geometry': {'eps_gen': 1e-8}})
        self.assertEqual(settings.monte_carlo_samples, 20000)
        self.assertEqual(settings.eps_gen, 1e-8)
        self.assertEqual(settings.jobs, 1)
        everything = settings.get_all()
        self.assertEqual(everything['sampling']['monte_carlo_samples'], 20000)
        self.assertIn('chords', everything)
        everything['app'] = None
        self.assertEqual(settings.app_name, 'Discrete Gauss Map Toolkit')

    def test_services_receive_tolerances(self):
        app = get_app()
        self.assertEqual(app.spherical_service.eps, app.settings.eps_gen)
        self.assertEqual(app.chord_service.max_enumeration_r, 6)


class TestExceptions(unittest.TestCase):
    """Tests for the error hierarchy"""

    def test_envelope_payload(self):
        error = ParseError("bad file", {'line': 3})
        self.assertEqual(error.to_dict(), {'code': 'parse_error', 'message': 'bad file', 'details': {'line': 3}})
        self.assertEqual(error.exit_code, EXIT_USAGE)

    def test_identity_violation_names_identity(self):
        error = IdentityViolation('degree_winding', details={'degree': 1})
        self.assertEqual(error.exit_code, EXIT_VALIDATION)
        self.assertEqual(error.details['identity'], 'degree_winding')
        self.assertIn('degree_winding', error.message)


if __name__ == '__main__':
    unittest.main()
