"""Reference stars, polygons and meshes with known curvature, index and degree"""

import logging
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from ..exceptions import GaussMapError, InvalidStar, NotThreeCritical
from ..models.mesh import ClosedMesh
from ..models.spherical import SphericalPolygon
from ..models.star import VertexStar
from .chord_service import ChordService
from .mesh_service import MeshService
from .spherical_service import SphericalService
from .star_service import StarService


ICOSAHEDRON_FACES = [
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1]
]

# Heights of the seven-vertex torus: one maximum (4), one minimum (6) and a
# monkey saddle (0); every other vertex is regular.
THREE_CP_HEIGHTS = [0.0, 1.0, 2.0, -1.0, 3.0, -2.0, -3.0]

RIDGE, VALLEY = 'R', 'V'


def _rot_cw(v: np.ndarray) -> np.ndarray:
    return np.array([v[1], -v[0]])


def _rot_ccw(v: np.ndarray) -> np.ndarray:
    return np.array([-v[1], v[0]])


def _azimuth_point(azimuth_deg: float, height: float) -> List[float]:
    a = np.radians(azimuth_deg)
    return [float(np.cos(a)), float(np.sin(a)), float(height)]


class FixtureService:
    """Builds the reference geometry used by the tests, the CLI and the suites"""

    def __init__(self, spherical_service: SphericalService, star_service: StarService,
                 mesh_service: MeshService, chord_service: ChordService):
        self.spherical = spherical_service
        self.stars = star_service
        self.meshes = mesh_service
        self.chords = chord_service
        self.eps = spherical_service.eps
        self.logger = logging.getLogger('GaussMap.FixtureService')

    # Stars

    def cube_corner(self) -> VertexStar:
        return self.stars.star_from_ring([0, 0, 0], [[-1, 0, 0], [0, -1, 0], [0, 0, -1]])

    def tetrahedron_vertex(self) -> VertexStar:
        return self.stars.star_from_ring([1, 1, 1], [[1, -1, -1], [-1, 1, -1], [-1, -1, 1]])

    def saddle(self, h: float = 1.0) -> VertexStar:
        """Four-valent saddle: ring points alternately above and below the center"""
        return self.stars.star_from_ring([0, 0, 0], [[1, 0, h], [0, 1, -h], [-1, 0, h], [0, -1, -h]])

    def monkey_saddle(self) -> VertexStar:
        """Six-valent saddle, slightly irregular so its Gauss image stays non-degenerate"""
        azimuths = [0.0, 62.0, 118.0, 183.0, 238.0, 301.0]
        heights = [0.9, -1.1, 1.0, -0.8, 1.2, -1.0]
        return self.stars.star_from_ring([0, 0, 0], [_azimuth_point(a, h) for a, h in zip(azimuths, heights)])

    def flat_fan(self, valence: int = 6) -> VertexStar:
        """Planar fan; adjacent faces are coplanar so the star is built leniently"""
        azimuths = 360.0 * np.arange(valence) / valence + 7.0
        ring = [_azimuth_point(a, 0.0) for a in azimuths]
        return self.stars.star_from_ring([0, 0, 0], ring, strict=False)

    def star_from_gradients(self, gradients: Sequence[Sequence[float]], kinds: Sequence[str]) -> VertexStar:
        """Star whose face k is the plane z = -g_k . (x, y)

        Edge k lies between faces k - 1 and k and is a ridge or a valley as
        given by kinds[k]. Faces whose wedge exceeds pi get a third corner on
        their bisector.
        """
        g = np.asarray(gradients, dtype=float)
        n = len(g)
        if len(kinds) != n:
            raise InvalidStar("need one edge kind per gradient")

        directions = []
        for k in range(n):
            t = g[k] - g[k - 1]
            norm = np.linalg.norm(t)
            if norm < self.eps:
                raise InvalidStar(f"faces {k - 1} and {k} have equal gradients", {'face': k})
            t /= norm
            directions.append(_rot_cw(t) if kinds[k] == RIDGE else _rot_ccw(t))
        directions = np.array(directions)

        azimuth = np.arctan2(directions[:, 1], directions[:, 0])
        wedges = (np.roll(azimuth, -1) - azimuth) % (2.0 * np.pi)
        if abs(np.sum(wedges) - 2.0 * np.pi) > 1e-9:
            raise InvalidStar("edge directions do not wind once around the center")

        ring = np.array([[d[0], d[1], -np.dot(g[k], d)] for k, d in enumerate(directions)])
        chains = []
        for k in range(n):
            start, end = ring[k], ring[(k + 1) % n]
            if wedges[k] > np.pi:
                bisector = azimuth[k] + wedges[k] / 2.0
                foot = 3.0 * np.array([np.cos(bisector), np.sin(bisector)])
                middle = [foot[0], foot[1], -np.dot(g[k], foot)]
                chains.append([[0.0, 0.0, 0.0], start.tolist(), middle, end.tolist()])
            else:
                chains.append([[0.0, 0.0, 0.0], start.tolist(), end.tolist()])
        return self.stars.build_star({'center': [0, 0, 0], 'ring': ring.tolist(), 'faces': chains})

    def pseudo_triangle_not_inflecting(self) -> VertexStar:
        """One reflex face that is not an inflection face"""
        return self.star_from_gradients([(-0.5, 1.1), (1.0, -0.15), (0.0, -0.3), (-0.5, -1.2)],
                                        [RIDGE, VALLEY, RIDGE, RIDGE])

    def pseudo_triangle_inflecting(self) -> VertexStar:
        """One reflex face that is an inflection face"""
        return self.star_from_gradients([(0.0, 0.8), (1.5, -0.5), (-0.5, -0.85), (0.0, 0.0)],
                                        [RIDGE, VALLEY, RIDGE, VALLEY])

    def mixed_star(self) -> VertexStar:
        """Star whose Gauss image has one positive and one negative lobe"""
        return self.star_from_gradients([(0.5, 1.7), (-0.45, 2.01), (-1.04, 1.2), (0.98, -1.57), (0.5, -1.73)],
                                        [RIDGE, RIDGE, RIDGE, RIDGE, VALLEY])

    def pseudo_digon(self, s: float = 1.0) -> VertexStar:
        """Two opposite reflex faces, all four faces inflecting"""
        def edge(deg: float) -> np.ndarray:
            a = np.radians(deg)
            return np.array([np.cos(a), np.sin(a), s * np.sin(a)])

        e0, e1 = edge(-170.0), edge(100.0)
        e2 = np.array([-e0[0], -e0[1], e0[2]])
        e3 = np.array([-e1[0], -e1[1], e1[2]])
        m0 = 3.0 * edge(-35.0)
        a2 = np.radians(145.0)
        m2 = 3.0 * np.array([np.cos(a2), np.sin(a2), -s * np.sin(a2)])
        origin = [0.0, 0.0, 0.0]
        chains = [
            [origin, e0.tolist(), m0.tolist(), e1.tolist()],
            [origin, e1.tolist(), e2.tolist()],
            [origin, e2.tolist(), m2.tolist(), e3.tolist()],
            [origin, e3.tolist(), e0.tolist()]
        ]
        ring = [e0.tolist(), e1.tolist(), e2.tolist(), e3.tolist()]
        return self.stars.build_star({'center': origin, 'ring': ring, 'faces': chains})

    def middle_vertex(self) -> VertexStar:
        """Star over a simple polygon with index -2 and degree 0 about the north pole"""
        return self.stars.star_from_polygon(self.chords.realize_index_degree(-2, 0))

    def star_fixtures(self) -> Dict[str, Callable[[], VertexStar]]:
        return {
            'cube_corner': self.cube_corner,
            'tetrahedron_vertex': self.tetrahedron_vertex,
            'saddle': self.saddle,
            'monkey_saddle': self.monkey_saddle,
            'pseudo_triangle_not_inflecting': self.pseudo_triangle_not_inflecting,
            'pseudo_triangle_inflecting': self.pseudo_triangle_inflecting,
            'pseudo_digon': self.pseudo_digon,
            'mixed_star': self.mixed_star,
            'middle_vertex': self.middle_vertex
        }

    # Polygons

    def regular_polygon(self, n: int, colatitude_deg: float, step: int = 1,
                        offset_deg: float = 0.0) -> SphericalPolygon:
        """Vertices at one colatitude, consecutive ones step * 360/n degrees apart"""
        theta = np.radians(colatitude_deg)
        phi = np.radians(offset_deg) + 2.0 * np.pi * step * np.arange(n) / n
        pts = np.column_stack([np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi),
                               np.full(n, np.cos(theta))])
        return SphericalPolygon(pts, self.eps)

    def pentagram(self) -> SphericalPolygon:
        """Star pentagon whose polar polygon winds twice around the north pole"""
        return self.regular_polygon(5, 60.0, step=2)

    # Meshes

    def tetrahedron(self) -> ClosedMesh:
        vertices = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]
        triangles = [[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]]
        mesh = ClosedMesh(np.array(vertices, dtype=float), np.array(triangles), 'tetrahedron')
        self.meshes.validate(mesh)
        return mesh

    def grid_torus(self, m: int = 8, n: int = 8, major: float = 2.0, minor: float = 1.0,
                   jitter: float = 1e-3, seed: int = 7) -> ClosedMesh:
        """Triangulated torus of revolution around the z axis"""
        rng = np.random.default_rng(seed)
        u = 2.0 * np.pi * np.arange(m) / m
        v = 2.0 * np.pi * np.arange(n) / n
        uu, vv = np.meshgrid(u, v, indexing='ij')
        radius = major + minor * np.cos(vv)
        pts = np.stack([radius * np.cos(uu), radius * np.sin(uu), minor * np.sin(vv)], axis=-1).reshape(-1, 3)
        pts += jitter * rng.uniform(-1.0, 1.0, pts.shape)

        def vid(i: int, j: int) -> int:
            return (i % m) * n + (j % n)

        triangles = []
        for i in range(m):
            for j in range(n):
                a, b, c, d = vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)
                triangles += [[a, b, c], [a, c, d]]
        mesh = ClosedMesh(pts, np.array(triangles), f'torus_{m}x{n}')
        self.meshes.validate(mesh)
        return mesh

    def icosphere(self, level: int = 1, jitter: float = 1e-3, seed: int = 7) -> ClosedMesh:
        """Subdivided icosahedron with seeded radial jitter"""
        t = (1.0 + np.sqrt(5.0)) / 2.0
        base = np.array([[-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
                         [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
                         [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1]], dtype=float)
        vertices = list(base / np.linalg.norm(base, axis=1)[:, None])
        faces = [list(f) for f in ICOSAHEDRON_FACES]

        for _ in range(level):
            midpoint: Dict[Tuple[int, int], int] = {}

            def middle(a: int, b: int) -> int:
                key = (min(a, b), max(a, b))
                if key not in midpoint:
                    p = vertices[a] + vertices[b]
                    vertices.append(p / np.linalg.norm(p))
                    midpoint[key] = len(vertices) - 1
                return midpoint[key]

            refined = []
            for a, b, c in faces:
                ab, bc, ca = middle(a, b), middle(b, c), middle(c, a)
                refined += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
            faces = refined

        rng = np.random.default_rng(seed)
        pts = np.array(vertices)
        pts *= (1.0 + jitter * rng.uniform(-1.0, 1.0, len(pts)))[:, None]
        mesh = ClosedMesh(pts, np.array(faces), f'icosphere_{level}')
        self.meshes.validate(mesh)
        return mesh

    def three_critical_torus(self, seed: int = 7, attempts: int = 500) -> ClosedMesh:
        """Seven-vertex torus whose height along z has exactly three critical points

        Heights fix the critical points; horizontal positions are drawn until
        the two extrema have degrees +1 and -1 and no neighbouring faces are
        coplanar. The result is not checked for global embeddedness.
        """
        triangles = []
        for i in range(7):
            triangles.append([i, (i + 1) % 7, (i + 3) % 7])
            triangles.append([i, (i + 3) % 7, (i + 2) % 7])

        rng = np.random.default_rng(seed)
        xi = np.array([0.0, 0.0, 1.0])
        for attempt in range(attempts):
            xy = rng.uniform(-1.0, 1.0, (7, 2))
            mesh = ClosedMesh(np.column_stack([xy, THREE_CP_HEIGHTS]), np.array(triangles), 'three_critical_torus')
            try:
                self.meshes.validate(mesh)
                top = self.meshes.vertex_star(mesh, 4)
                bottom = self.meshes.vertex_star(mesh, 6)
                if self.meshes.degrees.star_degree(top, xi) != 1:
                    continue
                if self.meshes.degrees.star_degree(bottom, xi) != -1:
                    continue
                self.meshes.degree_sum_check(mesh, xi)
            except GaussMapError as e:
                self.logger.debug(f"three-critical torus draw {attempt} rejected: {e.code}")
                continue
            self.logger.debug(f"three-critical torus found after {attempt + 1} draws")
            return mesh
        raise NotThreeCritical(f"no valid three-critical torus in {attempts} draws")

    def mesh_fixtures(self) -> Dict[str, Callable[[], ClosedMesh]]:
        return {
            'tetrahedron': self.tetrahedron,
            'torus': self.grid_torus,
            'icosphere': self.icosphere,
            'three_critical_torus': self.three_critical_torus
        }
