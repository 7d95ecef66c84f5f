"""Service for closed oriented triangle meshes"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..exceptions import (
    CoplanarFaces, GaussMapError, IdentityViolation, InconsistentOrientation, NonManifold,
    NotClosed, NotGeneral, NotThreeCritical, ParseError
)
from ..models.mesh import ClosedMesh, MeshReport
from ..models.spherical import as_unit
from ..models.star import VertexStar
from .arrangement_service import ArrangementService
from .degree_service import DegreeService
from .index_service import IndexService
from .spherical_service import SphericalService
from .star_service import StarService


CENSUS_COLUMNS = ['vertex', 'index', 'degree', 'kind']


class MeshService:
    """Service for curvature, index and degree sums on closed meshes"""

    def __init__(self, spherical_service: SphericalService, star_service: StarService,
                 index_service: IndexService, degree_service: DegreeService,
                 arrangement_service: ArrangementService, gauss_bonnet_tolerance: float = 1e-9,
                 max_retries: int = 64):
        self.spherical = spherical_service
        self.stars = star_service
        self.indices = index_service
        self.degrees = degree_service
        self.arrangements = arrangement_service
        self.eps = spherical_service.eps
        self.gauss_bonnet_tolerance = gauss_bonnet_tolerance
        self.max_retries = max_retries
        self.logger = logging.getLogger('GaussMap.MeshService')

    # OFF files

    def parse_off(self, text: str, name: str = 'mesh', normalize: bool = True) -> ClosedMesh:
        """Reads ASCII OFF text; comments start with '#'

        With normalize the vertices are moved into the unit bounding box.
        """
        tokens = []
        for line in text.splitlines():
            line = line.split('#', 1)[0].strip()
            if line:
                tokens.append(line.split())

        if not tokens or tokens[0][0] != 'OFF':
            raise ParseError("missing 'OFF' header")
        if len(tokens[0]) > 1:
            header, body = tokens[0][1:], tokens[1:]
        else:
            header, body = (tokens[1] if len(tokens) > 1 else []), tokens[2:]
        try:
            n_vertices, n_faces = int(header[0]), int(header[1])
        except (IndexError, ValueError) as e:
            raise ParseError("malformed OFF counts line") from e
        if len(body) < n_vertices + n_faces:
            raise ParseError(f"expected {n_vertices} vertices and {n_faces} faces, file is shorter")

        try:
            vertices = np.array([[float(x) for x in row[:3]] for row in body[:n_vertices]])
            faces = []
            for row in body[n_vertices:n_vertices + n_faces]:
                if int(row[0]) != 3:
                    raise ParseError(f"only triangles are supported, got a face of arity {row[0]}")
                faces.append([int(x) for x in row[1:4]])
        except (IndexError, ValueError) as e:
            raise ParseError(f"malformed OFF body: {e}") from e
        if vertices.shape != (n_vertices, 3):
            raise ParseError("vertex lines need 3 coordinates")
        triangles = np.array(faces, dtype=int).reshape(-1, 3)
        if triangles.size and (triangles.min() < 0 or triangles.max() >= n_vertices):
            raise ParseError("face index out of range")

        mesh = ClosedMesh(vertices, triangles, name)
        if normalize:
            mesh = self.normalize(mesh)
        self.validate(mesh)
        return mesh

    def normalize(self, mesh: ClosedMesh) -> ClosedMesh:
        """Centers the mesh and scales its longest bounding box side to 1"""
        if mesh.num_vertices == 0:
            return mesh
        low, high = mesh.vertices.min(axis=0), mesh.vertices.max(axis=0)
        extent = float(np.max(high - low))
        if extent == 0.0:
            return mesh
        return ClosedMesh((mesh.vertices - (low + high) / 2.0) / extent, mesh.triangles, mesh.name)

    def load_off(self, path, normalize: bool = True) -> ClosedMesh:
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise ParseError(f"cannot read {path}: {e}") from e
        mesh = self.parse_off(text, path.stem, normalize)
        self.logger.info(f"loaded {path.name}: {mesh.num_vertices} vertices, {mesh.num_faces} faces")
        return mesh

    def write_off(self, mesh: ClosedMesh, path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = ['OFF', f"{mesh.num_vertices} {mesh.num_faces} {mesh.num_edges}"]
        lines += [' '.join(repr(float(x)) for x in v) for v in mesh.vertices]
        lines += [f"3 {a} {b} {c}" for a, b, c in mesh.triangles]
        path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
        return path

    # Validation

    def _face_normals(self, mesh: ClosedMesh) -> np.ndarray:
        v = mesh.vertices
        t = mesh.triangles
        raw = np.cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]])
        norms = np.linalg.norm(raw, axis=1)
        if np.any(norms < self.eps * mesh.bounding_diagonal ** 2):
            raise NonManifold(f"triangle {int(np.argmin(norms))} is degenerate")
        return raw / norms[:, None]

    def validate(self, mesh: ClosedMesh):
        """Checks that the mesh is a closed oriented manifold without coplanar neighbours"""
        directed: Dict[Tuple[int, int], int] = {}
        for f, (a, b, c) in enumerate(mesh.triangles):
            if len({a, b, c}) < 3:
                raise NonManifold(f"triangle {f} repeats a vertex", {'face': f})
            for u, v in ((a, b), (b, c), (c, a)):
                if (u, v) in directed:
                    other = directed[(u, v)]
                    if (v, u) in directed:
                        raise NonManifold(f"edge ({u}, {v}) has more than two faces", {'edge': [int(u), int(v)]})
                    raise InconsistentOrientation(
                        f"triangles {other} and {f} traverse edge ({u}, {v}) the same way",
                        {'edge': [int(u), int(v)]})
                directed[(u, v)] = f
        for (u, v) in directed:
            if (v, u) not in directed:
                raise NotClosed(f"edge ({u}, {v}) has a single face", {'edge': [int(u), int(v)]})

        for v in range(mesh.num_vertices):
            self._ring(mesh, v)

        normals = self._face_normals(mesh)
        for (u, v), f in directed.items():
            if u < v:
                g = directed[(v, u)]
                if np.linalg.norm(np.cross(normals[f], normals[g])) < self.eps:
                    raise CoplanarFaces(f"triangles {f} and {g} are coplanar", {'faces': [f, g]})

    def _ring(self, mesh: ClosedMesh, v: int) -> List[int]:
        """Link of v in counterclockwise order, from the triangles (v, a, b)"""
        following: Dict[int, int] = {}
        for tri in mesh.triangles:
            if v not in tri:
                continue
            k = list(tri).index(v)
            a, b = int(tri[(k + 1) % 3]), int(tri[(k + 2) % 3])
            if a in following:
                raise NonManifold(f"vertex {v} has a pinched link", {'vertex': v})
            following[a] = b
        if not following:
            raise NonManifold(f"vertex {v} belongs to no triangle", {'vertex': v})

        start = next(iter(following))
        ring = [start]
        while following.get(ring[-1]) != start:
            nxt = following.get(ring[-1])
            if nxt is None or nxt in ring:
                raise NonManifold(f"link of vertex {v} is not a single cycle", {'vertex': v})
            ring.append(nxt)
        if len(ring) != len(following):
            raise NonManifold(f"link of vertex {v} is not a single cycle", {'vertex': v})
        return ring

    def vertex_star(self, mesh: ClosedMesh, v: int) -> VertexStar:
        ring = self._ring(mesh, v)
        return self.stars.star_from_ring(mesh.vertices[v], mesh.vertices[ring])

    def stars_of(self, mesh: ClosedMesh) -> List[VertexStar]:
        return [self.vertex_star(mesh, v) for v in range(mesh.num_vertices)]

    # Curvature

    def curvatures(self, mesh: ClosedMesh) -> np.ndarray:
        return np.array([self.stars.angle_deficit(s) for s in self.stars_of(mesh)])

    def gauss_bonnet_check(self, mesh: ClosedMesh) -> float:
        """Total angle deficit minus 2 pi times the Euler characteristic"""
        residual = float(np.sum(self.curvatures(mesh)) - 2.0 * np.pi * mesh.euler_characteristic)
        if abs(residual) > self.gauss_bonnet_tolerance:
            self.logger.warning(f"Gauss-Bonnet residual {residual:.3e} on {mesh.name}")
        return residual

    # Directions

    def general_direction(self, mesh: ClosedMesh, xi=None, seed=None) -> np.ndarray:
        """xi if it is general at every vertex, otherwise a random general direction"""
        stars = self.stars_of(mesh)
        rng = np.random.default_rng(seed)
        candidate = None if xi is None else as_unit(xi, self.eps)
        for attempt in range(self.max_retries + 1):
            if candidate is not None and all(self.indices.is_general(candidate, s) for s in stars):
                if attempt and xi is not None:
                    self.logger.warning(f"direction not general, redrew {attempt} times")
                return candidate
            candidate = self.spherical.random_unit_vectors(1, rng)[0]
        raise NotGeneral(f"no general direction after {self.max_retries} draws")

    def _index_and_degree(self, star: VertexStar, xi: np.ndarray) -> Tuple[int, int]:
        return self.indices.index(star, xi), self.degrees.star_degree(star, xi)

    def _per_vertex(self, mesh: ClosedMesh, xi: np.ndarray, jobs: int = 1) -> List[Tuple[int, int]]:
        stars = self.stars_of(mesh)
        if jobs <= 1:
            return [self._index_and_degree(s, xi) for s in stars]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda s: self._index_and_degree(s, xi), stars))

    def index_sum_check(self, mesh: ClosedMesh, xi) -> Tuple[int, int]:
        xi = as_unit(xi, self.eps)
        total = sum(self.indices.index(s, xi) for s in self.stars_of(mesh))
        chi = mesh.euler_characteristic
        if total != chi:
            raise IdentityViolation('index_sum', details={'sum': total, 'chi': chi})
        return total, chi

    def degree_sum_check(self, mesh: ClosedMesh, xi) -> int:
        xi = as_unit(xi, self.eps)
        total = sum(self.degrees.star_degree(s, xi) for s in self.stars_of(mesh))
        if total != 0:
            raise IdentityViolation('degree_sum', details={'sum': total})
        return total

    # Critical points

    def critical_point_census(self, mesh: ClosedMesh, xi, jobs: int = 1) -> pd.DataFrame:
        """Vertices with non-zero index, tagged max, min or saddle"""
        xi = as_unit(xi, self.eps)
        rows = []
        for v, (index, degree) in enumerate(self._per_vertex(mesh, xi, jobs)):
            if index == 0:
                continue
            if index == 1:
                below = np.all((mesh.vertices[self._ring(mesh, v)] - mesh.vertices[v]) @ xi < 0)
                kind = 'max' if below else 'min'
            else:
                kind = 'saddle'
            rows.append({'vertex': v, 'index': index, 'degree': degree, 'kind': kind})
        return pd.DataFrame(rows, columns=CENSUS_COLUMNS)

    def three_cp_analysis(self, mesh: ClosedMesh, xi) -> dict:
        """Checks the degrees of a height function with exactly three critical points

        The two extrema have degrees +1 and -1 and the third point has degree 0
        and index chi - 2.
        """
        census = self.critical_point_census(mesh, xi)
        chi = mesh.euler_characteristic
        if len(census) != 3:
            raise NotThreeCritical(f"{len(census)} critical points instead of 3", {'count': len(census)})
        if chi == 2:
            raise NotThreeCritical("a sphere has no height function with exactly three critical points")

        top = census[census.kind == 'max']
        bottom = census[census.kind == 'min']
        rest = census[census.kind == 'saddle']
        if len(top) != 1 or len(bottom) != 1 or len(rest) != 1:
            raise NotThreeCritical("critical points are not one maximum, one minimum and one saddle")
        v_plus, v_minus, v_zero = top.iloc[0], bottom.iloc[0], rest.iloc[0]

        verdict = {
            'v_plus': {'vertex': int(v_plus.vertex), 'index': int(v_plus['index']), 'degree': int(v_plus.degree)},
            'v_minus': {'vertex': int(v_minus.vertex), 'index': int(v_minus['index']),
                        'degree': int(v_minus.degree)},
            'v_zero': {'vertex': int(v_zero.vertex), 'index': int(v_zero['index']), 'degree': int(v_zero.degree)},
            'chi': chi
        }
        checks = [
            ('max_degree', int(v_plus.degree) == 1),
            ('min_degree', int(v_minus.degree) == -1),
            ('saddle_degree', int(v_zero.degree) == 0),
            ('saddle_index', int(v_zero['index']) == chi - 2)
        ]
        for name, ok in checks:
            if not ok:
                raise IdentityViolation(name, details=verdict)
        verdict['holds'] = True
        return verdict

    # Reports

    def _vertex_record(self, star: VertexStar, v: int, xis: Sequence[np.ndarray]) -> dict:
        parts = self.stars.curvature_parts(star)
        record = {'vertex': v, **parts.to_dict()}
        try:
            record['shape'] = self.arrangements.classify_shape(star).to_dict()
        except GaussMapError as e:
            record['shape'] = {'kind': 'Unclassified', 'reason': e.code}
        try:
            record['algebraic_area'] = self.arrangements.star_algebraic_area(star)
        except GaussMapError as e:
            self.logger.debug(f"vertex {v}: no algebraic area ({e.code})")
            record['algebraic_area'] = None
        record['index'] = [self.indices.index(star, xi) for xi in xis]
        record['degree'] = [self.degrees.star_degree(star, xi) for xi in xis]
        return record

    def analyze(self, mesh: ClosedMesh, xis: Optional[Sequence] = None, seed=None, jobs: int = 1,
                three_critical: bool = False) -> MeshReport:
        """Per-vertex curvature, shape, index and degree for the given directions"""
        rng = np.random.default_rng(seed)
        if not xis:
            xis = [self.general_direction(mesh, seed=rng)]
        else:
            xis = [self.general_direction(mesh, xi, seed=rng) for xi in xis]

        stars = self.stars_of(mesh)
        if jobs <= 1:
            records = [self._vertex_record(s, v, xis) for v, s in enumerate(stars)]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                records = list(pool.map(lambda item: self._vertex_record(item[1], item[0], xis),
                                        enumerate(stars)))

        chi = mesh.euler_characteristic
        total = float(sum(r['K'] for r in records))
        index_sums = [int(sum(r['index'][k] for r in records)) for k in range(len(xis))]
        degree_sums = [int(sum(r['degree'][k] for r in records)) for k in range(len(xis))]
        for k, (isum, dsum) in enumerate(zip(index_sums, degree_sums)):
            if isum != chi:
                raise IdentityViolation('index_sum', details={'direction': k, 'sum': isum, 'chi': chi})
            if dsum != 0:
                raise IdentityViolation('degree_sum', details={'direction': k, 'sum': dsum})

        verdict = None
        if three_critical:
            try:
                verdict = self.three_cp_analysis(mesh, xis[0])
            except NotThreeCritical as e:
                verdict = {'holds': False, 'reason': e.message}

        return MeshReport(
            chi=chi,
            total_curvature=total,
            gauss_bonnet_residual=total - 2.0 * np.pi * chi,
            num_vertices=mesh.num_vertices,
            num_faces=mesh.num_faces,
            directions=[np.asarray(xi).tolist() for xi in xis],
            vertices=records,
            index_sums=index_sums,
            degree_sums=degree_sums,
            three_critical=verdict
        )
