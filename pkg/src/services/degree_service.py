"""Service for the normal degree of spherical polygons"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import IdentityViolation, NotAdmissible, NotGeneral
from ..models.degree import DegreeReport
from ..models.spherical import SphericalPolygon, as_unit
from .arrangement_service import ArrangementService
from .index_service import IndexService
from .spherical_service import SphericalService
from .star_service import StarService


GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


class DegreeService:
    """Signed crossings of the polar polygon with a half meridian"""

    def __init__(self, spherical_service: SphericalService, star_service: StarService,
                 index_service: IndexService, arrangement_service: ArrangementService,
                 max_retries: int = 64):
        self.spherical = spherical_service
        self.stars = star_service
        self.indices = index_service
        self.arrangements = arrangement_service
        self.eps = spherical_service.eps
        self.max_retries = max_retries
        self.logger = logging.getLogger('GaussMap.DegreeService')

    def meridian_frame(self, xi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Orthonormal pair spanning the equator of xi, e1 from the projected x axis"""
        for axis in (np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])):
            e1 = axis - np.dot(axis, xi) * xi
            norm = np.linalg.norm(e1)
            if norm > 1e-6:
                e1 /= norm
                return e1, np.cross(xi, e1)
        raise NotGeneral("no reference meridian for this direction")

    def _crossings(self, wp: SphericalPolygon, xi: np.ndarray, longitude: float) -> Optional[int]:
        """Signed crossing count through the half meridian, None if a vertex is on it"""
        e1, e2 = self.meridian_frame(xi)
        m = np.cos(longitude) * e1 + np.sin(longitude) * e2
        nu = np.cross(xi, m)
        verts = wp.vertices
        side = verts @ nu
        if np.any((np.abs(side) < self.eps) & (verts @ m > -self.eps)):
            return None

        total = 0
        for k in range(wp.n):
            a, b = verts[k], verts[(k + 1) % wp.n]
            sa, sb = side[k], side[(k + 1) % wp.n]
            if (sa > 0) == (sb > 0):
                continue
            p = abs(sb) * a + abs(sa) * b
            if np.dot(p, m) > 0:
                total += 1 if np.dot(np.cross(a, b), xi) > 0 else -1
        return total

    def polar_degree(self, wp: SphericalPolygon, xi, gamma_longitude: float = 0.0) -> Tuple[int, float]:
        """Degree read off the polar polygon, with the longitude actually used

        The meridian is advanced by golden angle steps while it meets a vertex.
        """
        xi = as_unit(xi, self.eps)
        if np.min(np.linalg.norm(np.cross(wp.vertices, xi), axis=1)) < self.eps:
            raise NotGeneral("the polar polygon passes through the direction")
        longitude = gamma_longitude
        for attempt in range(self.max_retries + 1):
            count = self._crossings(wp, xi, longitude)
            if count is not None:
                if attempt:
                    self.logger.warning(f"meridian moved {attempt} times to longitude {longitude:.6f}")
                return count, float(longitude % (2.0 * np.pi))
            longitude += GOLDEN_ANGLE
        raise NotGeneral("every tried meridian meets a vertex of the polar polygon")

    def _require_general(self, w: SphericalPolygon, xi: np.ndarray):
        margin = float(np.min(np.abs(w.vertices @ xi)))
        if margin <= self.eps:
            raise NotGeneral(f"direction is not general for the polygon (margin {margin:.3e})",
                             {'margin': margin})

    def normal_degree(self, w: SphericalPolygon, xi, gamma_longitude: float = 0.0) -> int:
        xi = as_unit(xi, self.eps)
        self._require_general(w, xi)
        degree, _ = self.polar_degree(self.spherical.polar_polygon(w), xi, gamma_longitude)
        return degree

    def degree_independence_check(self, w: SphericalPolygon, xi, longitudes: Sequence[float]) -> bool:
        degrees = {self.normal_degree(w, xi, lam) for lam in longitudes}
        return len(degrees) == 1

    def degree_by_azimuth(self, wp: SphericalPolygon, xi) -> int:
        """Turns of the polar polygon around the axis of xi

        Each minor arc off the poles changes the azimuth by less than pi, so
        the wrapped increments add up to the total turning.
        """
        xi = as_unit(xi, self.eps)
        e1, e2 = self.meridian_frame(xi)
        verts = wp.vertices
        if np.min(np.linalg.norm(np.cross(verts, xi), axis=1)) < self.eps:
            raise NotGeneral("a polar vertex lies on the axis of the direction")
        azimuth = np.arctan2(verts @ e2, verts @ e1)
        steps = (np.roll(azimuth, -1) - azimuth + np.pi) % (2.0 * np.pi) - np.pi
        return int(np.rint(np.sum(steps) / (2.0 * np.pi)))

    def star_degree(self, s, xi) -> int:
        """Degree of the Gauss image of a star"""
        xi = as_unit(xi, self.eps)
        if not self.indices.is_general(xi, s):
            raise NotGeneral("direction is not general for the star")
        degree, _ = self.polar_degree(self.stars.gauss_image(s), xi)
        return degree

    # Identities

    def degree_identities(self, w: SphericalPolygon, xi, gamma_longitude: float = 0.0) -> DegreeReport:
        """Degree together with the winding numbers at xi and -xi, all identities checked"""
        xi = as_unit(xi, self.eps)
        self._require_general(w, xi)
        if not self.indices.is_admissible(xi, w):
            raise NotAdmissible("polygon meets the equator of the direction non-transversally")

        wp = self.spherical.polar_polygon(w)
        degree, longitude = self.polar_degree(wp, xi, gamma_longitude)
        index = self.indices.polygon_index(w, xi)
        crossings = self.spherical.crossing_count(w)
        c = crossings % 2

        arr, profile = self.arrangements.profile(wp, self.arrangements.right_turn_count(wp), c)
        w_plus = self.arrangements.locate_winding(arr, profile.winding, xi)
        w_minus = self.arrangements.locate_winding(arr, profile.winding, -xi)
        report = DegreeReport(degree=degree, gamma_longitude=longitude, index=index,
                              w_plus=w_plus, w_minus=w_minus, c_parity=c)

        details = report.to_dict()
        if degree != w_plus - w_minus:
            raise IdentityViolation('degree_winding', details=details)
        if c + index != w_plus + w_minus:
            raise IdentityViolation('index_winding', details=details)
        if (degree + index - c) % 2:
            raise IdentityViolation('degree_parity', details=details)
        if crossings == 0:
            self._check_simple(report, w, details)
        return report

    def _check_simple(self, report: DegreeReport, w: SphericalPolygon, details: dict):
        degree, index = report.degree, report.index
        if abs(degree) > abs(index):
            raise IdentityViolation('degree_bound', details=details)
        if index == 0 and degree != 0:
            raise IdentityViolation('ordinary_degree', details=details)
        if index == 1 and abs(degree) != 1:
            raise IdentityViolation('extremum_degree', details=details)
        if self._in_open_hemisphere(w) and abs(degree) != abs(index):
            raise IdentityViolation('transverse_degree', details=details)

    def _in_open_hemisphere(self, w: SphericalPolygon) -> bool:
        """True if the polar polygon fits in an open hemisphere"""
        normals = self.spherical.polar_vectors(w)
        return self.stars.open_hemisphere(normals) is not None
