"""Service for vertex stars: angle deficit, Gauss image and curvature parts"""

import logging
from typing import List, Optional, Set, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

from ..exceptions import AntipodalNormals, DegenerateEdge, InvalidStar, NeighborOnPlane
from ..models.spherical import SphericalPolygon
from ..models.star import CurvatureParts, VertexStar
from .spherical_service import SphericalService


class StarService:
    """Service for operations on polyhedral vertex stars"""

    def __init__(self, spherical_service: SphericalService, planarity_tolerance: float = 1e-9):
        self.spherical = spherical_service
        self.eps = spherical_service.eps
        self.planarity_tolerance = planarity_tolerance
        self.logger = logging.getLogger('GaussMap.StarService')

    def build_star(self, data: dict, strict: bool = True) -> VertexStar:
        """Creates a star from its JSON form"""
        return VertexStar.from_dict(data, self.eps, self.planarity_tolerance, strict)

    def star_from_ring(self, center, ring, strict: bool = True) -> VertexStar:
        return VertexStar.from_ring(center, ring, self.eps, self.planarity_tolerance, strict)

    def star_from_polygon(self, w: SphericalPolygon) -> VertexStar:
        """Cone over a spherical polygon: apex at the origin, faces (0, w_k, w_k+1)"""
        return self.star_from_ring(np.zeros(3), w.vertices)

    # Curvature

    def angle_deficit(self, s: VertexStar) -> float:
        return float(2.0 * np.pi - np.sum(s.angles))

    def corner_angles(self, s: VertexStar) -> np.ndarray:
        return s.angles

    def reflex_flags(self, s: VertexStar) -> List[bool]:
        return s.reflex_flags

    # Gauss image and projection

    def gauss_image(self, s: VertexStar) -> SphericalPolygon:
        """Polygon of face normals in face order"""
        normals = s.normals
        following = np.roll(normals, -1, axis=0)
        cross = np.linalg.norm(np.cross(normals, following), axis=1)
        for k in np.flatnonzero(cross < self.eps):
            if np.dot(normals[k], following[k]) < 0:
                raise AntipodalNormals(f"faces {k} and {(k + 1) % s.valence} have opposite normals",
                                       {'face': int(k)})
            raise DegenerateEdge(f"faces {k} and {(k + 1) % s.valence} have equal normals",
                                 {'face': int(k)})
        return SphericalPolygon(normals, self.eps)

    def subdivided_directions(self, s: VertexStar) -> Tuple[np.ndarray, List[bool], List[int]]:
        """Ring directions with a bisector inserted inside every reflex face

        Returns the directions, a mask of inserted bisectors and the face each
        direction opens (the face between it and the next direction).
        """
        dirs, inserted, owner = [], [], []
        for k, face in enumerate(s.faces):
            dirs.append(face.start_edge)
            inserted.append(False)
            owner.append(k)
            if face.is_reflex:
                dirs.append(face.bisector)
                inserted.append(True)
                owner.append(k)
        return np.array(dirs), inserted, owner

    def project_to_sphere(self, s: VertexStar) -> SphericalPolygon:
        """Directions from the center to the ring, reflex faces subdivided"""
        dirs, _, _ = self.subdivided_directions(s)
        return SphericalPolygon(dirs, self.eps)

    def polar_of_projection(self, s: VertexStar) -> np.ndarray:
        """Polar vectors of the projected star with repeated normals collapsed

        Coincides with the Gauss image.
        """
        polar = self.spherical.polar_vectors(self.project_to_sphere(s))
        keep = [0] + [i for i in range(1, len(polar))
                      if np.linalg.norm(polar[i] - polar[i - 1]) > 1e-7]
        collapsed = polar[keep]
        if len(collapsed) > 1 and np.linalg.norm(collapsed[-1] - collapsed[0]) <= 1e-7:
            collapsed = collapsed[:-1]
        return collapsed

    # Inflection faces

    def fold_sides(self, s: VertexStar, k: int) -> Tuple[int, int]:
        """Sides of the plane of face k on which its two neighbours leave it"""
        n = s.valence
        face, before, after = s.faces[k], s.faces[(k - 1) % n], s.faces[(k + 1) % n]
        lower = float(np.dot(face.normal, np.cross(face.start_edge, before.normal)))
        upper = float(np.dot(face.normal, np.cross(after.normal, face.end_edge)))
        if abs(lower) < self.eps or abs(upper) < self.eps:
            raise NeighborOnPlane(f"a neighbour of face {k} lies on its plane", {'face': k})
        return (1 if lower > 0 else -1), (1 if upper > 0 else -1)

    def inflection_faces(self, s: VertexStar) -> Tuple[Set[int], int]:
        """Inflection faces and their weighted count

        Reflex faces count once when inflecting and twice otherwise.
        """
        faces = set()
        weighted = 0
        for k, face in enumerate(s.faces):
            lower, upper = self.fold_sides(s, k)
            inflecting = lower != upper
            if inflecting:
                faces.add(k)
            if face.is_reflex:
                weighted += 1 if inflecting else 2
            elif inflecting:
                weighted += 1
        return faces, weighted

    def gauss_image_angles(self, s: VertexStar) -> np.ndarray:
        """Spherical angle of the Gauss image at each face normal"""
        g = self.gauss_image(s)
        return self.spherical.interior_angles(g)

    def expected_gauss_angle(self, alpha: float, reflex: bool, inflecting: bool) -> float:
        """Spherical angle at a normal predicted from the face's corner angle"""
        if inflecting:
            return 2.0 * np.pi - alpha
        return 3.0 * np.pi - alpha if reflex else np.pi - alpha

    # Convex hull cone and curvature parts

    def convex_hull_cone(self, s: VertexStar) -> Optional[VertexStar]:
        """Boundary fan of the convex hull of the rays of the star

        None when the hull is the whole space or has no apex at the center.
        """
        dirs, _, _ = self.subdivided_directions(s)
        points = np.vstack([np.zeros(3), dirs])
        try:
            hull = ConvexHull(points)
        except QhullError:
            self.logger.debug("star rays are coplanar; cone degenerates to a plane")
            return None

        if 0 not in hull.vertices:
            return None

        at_apex = [f for f, simplex in enumerate(hull.simplices) if 0 in simplex]
        ray_ids = sorted({int(i) for f in at_apex for i in hull.simplices[f] if i != 0})
        axis = np.sum(hull.equations[at_apex, :3], axis=0)
        axis /= np.linalg.norm(axis)

        rays = points[ray_ids]
        ref = rays[0] - np.dot(rays[0], axis) * axis
        ref /= np.linalg.norm(ref)
        other = np.cross(axis, ref)
        azimuth = np.arctan2(rays @ other, rays @ ref) % (2.0 * np.pi)
        rays = rays[np.argsort(azimuth)]

        rays = self._drop_flat_rays(rays)
        if len(rays) < 3:
            return None
        ring = s.center + rays * s.diameter
        try:
            return self.star_from_ring(s.center, ring, strict=False)
        except InvalidStar as e:
            self.logger.warning(f"hull cone could not be built: {e}")
            return None

    def _drop_flat_rays(self, rays: np.ndarray) -> np.ndarray:
        """Removes rays lying in the plane of their two neighbours"""
        changed = True
        while changed and len(rays) > 3:
            changed = False
            for i in range(len(rays)):
                prev, cur, nxt = rays[i - 1], rays[i], rays[(i + 1) % len(rays)]
                if abs(np.linalg.det(np.array([prev, cur, nxt]))) < self.eps:
                    rays = np.delete(rays, i, axis=0)
                    changed = True
                    break
        return rays

    def curvature_parts(self, s: VertexStar) -> CurvatureParts:
        total = self.angle_deficit(s)
        cone = self.convex_hull_cone(s)
        k_plus = 0.0 if cone is None else max(0.0, self.angle_deficit(cone))
        return CurvatureParts(k_total=total, k_plus=k_plus, k_minus=total - k_plus)

    # Transverse plane

    def transverse_plane(self, s: VertexStar) -> Optional[np.ndarray]:
        """Normal of a plane onto which the star projects one-to-one, if any"""
        return self.open_hemisphere(s.normals)

    def open_hemisphere(self, normals: np.ndarray) -> Optional[np.ndarray]:
        """Pole of an open hemisphere containing all the given unit vectors"""
        candidate = self._hemisphere_from_hull(normals)
        if candidate is None:
            candidate = self._hemisphere_from_lp(normals)
        if candidate is None:
            return None
        if np.min(normals @ candidate) <= self.eps:
            return self._hemisphere_from_lp(normals)
        return candidate

    def _hemisphere_from_hull(self, normals: np.ndarray) -> Optional[np.ndarray]:
        points = np.vstack([np.zeros(3), normals])
        try:
            hull = ConvexHull(points)
        except QhullError:
            return None
        if 0 not in hull.vertices:
            return None
        at_apex = [f for f, simplex in enumerate(hull.simplices) if 0 in simplex]
        direction = -np.sum(hull.equations[at_apex, :3], axis=0)
        norm = np.linalg.norm(direction)
        if norm < self.eps:
            return None
        return direction / norm

    def _hemisphere_from_lp(self, normals: np.ndarray) -> Optional[np.ndarray]:
        """Maximizes t subject to <x, n_f> >= t inside the unit box"""
        m = len(normals)
        cost = np.array([0.0, 0.0, 0.0, -1.0])
        a_ub = np.hstack([-normals, np.ones((m, 1))])
        result = linprog(cost, A_ub=a_ub, b_ub=np.zeros(m),
                         bounds=[(-1, 1), (-1, 1), (-1, 1), (None, 1)], method='highs')
        if not result.success or -result.fun <= self.eps:
            return None
        x = result.x[:3]
        return x / np.linalg.norm(x)
