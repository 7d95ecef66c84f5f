"""Spherical primitives: angles, areas, polar polygons and crossings"""

import logging
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.transform import Rotation

from ..exceptions import (
    DegenerateEdge, DegenerateWedge, InvalidPolygon, NonTransversal, NotSimple,
    SharedGreatCircle, StraightVertex
)
from ..models.spherical import Arc, SphericalPolygon, as_unit


SeedLike = Union[int, np.random.Generator, None]


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class SphericalService:
    """Service for geometry on the unit sphere"""

    def __init__(self, eps: float = 1e-9, angle_tolerance: float = 1e-9):
        self.eps = eps
        self.angle_tolerance = angle_tolerance
        self.logger = logging.getLogger('GaussMap.SphericalService')

    # Points and arcs

    def normalize(self, v: Sequence[float]) -> np.ndarray:
        return as_unit(v, self.eps)

    def polygon(self, points) -> SphericalPolygon:
        """Builds a polygon with this service's tolerance"""
        return SphericalPolygon(np.asarray(points, dtype=float), self.eps)

    def random_unit_vectors(self, n: int, seed: SeedLike = None) -> np.ndarray:
        """Uniform points on the sphere from normalized normal deviates"""
        rng = _rng(seed)
        pts = rng.standard_normal((n, 3))
        norms = np.linalg.norm(pts, axis=1)
        while np.any(norms < self.eps):
            bad = norms < self.eps
            pts[bad] = rng.standard_normal((int(bad.sum()), 3))
            norms = np.linalg.norm(pts, axis=1)
        return pts / norms[:, None]

    def random_rotation(self, seed: SeedLike = None) -> np.ndarray:
        return Rotation.random(random_state=_rng(seed)).as_matrix()

    def arc_length(self, a: np.ndarray, b: np.ndarray) -> float:
        return float(np.arctan2(np.linalg.norm(np.cross(a, b)), np.dot(a, b)))

    def polygon_length(self, w: SphericalPolygon) -> float:
        v, nxt = w.vertices, w.next_vertices()
        return float(np.sum(np.arctan2(np.linalg.norm(np.cross(v, nxt), axis=1),
                                       np.einsum('ij,ij->i', v, nxt))))

    def on_arc(self, q: np.ndarray, arc: Arc, tolerance: Optional[float] = None) -> bool:
        """True if q, assumed on the arc's great circle, lies on the minor arc"""
        tol = self.eps if tolerance is None else tolerance
        m = arc.normal
        return (np.dot(np.cross(arc.a, q), m) >= -tol
                and np.dot(np.cross(q, arc.b), m) >= -tol
                and np.dot(q, arc.a + arc.b) > 0)

    def arc_intersection(self, a1: Arc, a2: Arc) -> List[np.ndarray]:
        """Points lying on both minor arcs"""
        n1, n2 = a1.normal, a2.normal
        line = np.cross(n1, n2)
        norm = np.linalg.norm(line)
        if norm < self.eps:
            raise SharedGreatCircle("arcs lie on one great circle")
        p = line / norm
        return [q for q in (p, -p) if self.on_arc(q, a1) and self.on_arc(q, a2)]

    # Angles and areas

    def spherical_angle(self, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
        """Angle at b turning counterclockwise (around b) from the arc towards a to the arc towards c"""
        a, b, c = (np.asarray(x, dtype=float) for x in (a, b, c))
        if np.linalg.norm(np.cross(a, b)) < self.eps or np.linalg.norm(np.cross(c, b)) < self.eps:
            raise DegenerateWedge("wedge arm coincides with or opposes its apex")
        ta = a - np.dot(a, b) * b
        tc = c - np.dot(c, b) * b
        angle = float(np.arctan2(np.dot(b, np.cross(ta, tc)), np.dot(ta, tc)) % (2.0 * np.pi))
        if angle < self.angle_tolerance or angle > 2.0 * np.pi - self.angle_tolerance:
            raise DegenerateWedge("wedge arms are aligned")
        return angle

    def interior_angles(self, w: SphericalPolygon) -> np.ndarray:
        """Angle at each vertex on the left of the oriented boundary"""
        n = w.n
        return np.array([self.spherical_angle(w[i + 1], w[i], w[i - 1]) for i in range(n)])

    def polygon_area_excess(self, p: SphericalPolygon) -> float:
        """Area on the left of a simple polygon from its angle excess"""
        if self.crossing_count(p) > 0:
            raise NotSimple("polygon crosses itself")
        return float(np.sum(self.interior_angles(p)) - (p.n - 2) * np.pi)

    # Polar polygons

    def polar_vectors(self, w: SphericalPolygon) -> np.ndarray:
        """Normalized cross products of consecutive vertices"""
        cross = np.cross(w.vertices, w.next_vertices())
        norms = np.linalg.norm(cross, axis=1)
        bad = np.flatnonzero(norms < self.eps)
        if bad.size:
            raise DegenerateEdge(f"edge {int(bad[0])} has no great circle", {'edge': int(bad[0])})
        return cross / norms[:, None]

    def polar_polygon(self, w: SphericalPolygon) -> SphericalPolygon:
        try:
            return SphericalPolygon(self.polar_vectors(w), self.eps)
        except InvalidPolygon as e:
            raise DegenerateEdge(f"polar polygon is degenerate: {e}") from e

    def polar_preimage(self, wp: SphericalPolygon) -> SphericalPolygon:
        """A polygon whose polar is wp; the result is unique up to a global sign

        Needs an even number of right turns of wp.
        """
        n = wp.n
        back = self.polar_vectors(wp)
        turns = self.turns(wp)
        signs = np.ones(n)
        for j in range(1, n):
            signs[j] = signs[j - 1] * turns[j]
        if signs[n - 1] * turns[0] != signs[0]:
            raise DegenerateEdge("polygon has an odd number of right turns and is no polar polygon")
        pts = np.empty_like(back)
        for j in range(n):
            pts[(j + 1) % n] = signs[j] * back[j]
        return SphericalPolygon(pts, self.eps)

    # Turning

    def orientation_det(self, a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
        return float(np.linalg.det(np.array([a, b, c])))

    def turn_at(self, w: SphericalPolygon, i: int) -> int:
        """+1 for a left turn at vertex i, -1 for a right turn"""
        a, b, c = w[i - 1], w[i], w[i + 1]
        scale = np.linalg.norm(np.cross(a, b)) * np.linalg.norm(np.cross(b, c))
        det = self.orientation_det(a, b, c) / scale
        if abs(det) < self.eps:
            raise StraightVertex(f"vertex {i % w.n} lies on the great circle of its neighbours",
                                 {'vertex': int(i % w.n)})
        return 1 if det > 0 else -1

    def turns(self, w: SphericalPolygon) -> np.ndarray:
        return np.array([self.turn_at(w, i) for i in range(w.n)], dtype=int)

    def inflection_edges(self, w: SphericalPolygon) -> List[int]:
        """Edges whose two endpoints turn in opposite directions"""
        t = self.turns(w)
        return [i for i in range(w.n) if t[i] != t[(i + 1) % w.n]]

    def is_general_position(self, w: SphericalPolygon) -> bool:
        """No three vertices on one great circle"""
        if w.n < 3:
            return True
        idx = np.array(list(combinations(range(w.n), 3)))
        dets = np.linalg.det(w.vertices[idx])
        return bool(np.all(np.abs(dets) > self.eps))

    # Crossings

    def self_crossings(self, w: SphericalPolygon) -> List[Tuple[int, int, np.ndarray]]:
        """Transversal crossings (i, j, point) between non-adjacent edges i < j"""
        n = w.n
        arcs = w.arcs()
        crossings = []
        for i in range(n):
            for j in range(i + 2, n):
                if i == 0 and j == n - 1:
                    continue
                try:
                    points = self.arc_intersection(arcs[i], arcs[j])
                except SharedGreatCircle:
                    if any(self.on_arc(p, arcs[j]) for p in (arcs[i].a, arcs[i].b)) or \
                            any(self.on_arc(p, arcs[i]) for p in (arcs[j].a, arcs[j].b)):
                        raise NonTransversal(f"edges {i} and {j} overlap", {'edges': [i, j]})
                    continue
                for p in points:
                    near = min(self.arc_length(p, q) for q in (arcs[i].a, arcs[i].b, arcs[j].a, arcs[j].b))
                    if near < self.eps:
                        raise NonTransversal(
                            f"edges {i} and {j} meet at a vertex", {'edges': [i, j]})
                    crossings.append((i, j, p))
        return crossings

    def crossing_count(self, w: SphericalPolygon) -> int:
        return len(self.self_crossings(w))

    def is_simple(self, w: SphericalPolygon) -> bool:
        return self.crossing_count(w) == 0

    def contains_point_parity(self, w: SphericalPolygon, p: np.ndarray, reference: np.ndarray) -> bool:
        """True if an odd number of polygon edges separate p from the reference point

        The path from p to the reference runs through an intermediate point when
        the two are far apart, so it never needs an arc of length close to pi.
        """
        p, reference = np.asarray(p, dtype=float), np.asarray(reference, dtype=float)
        if np.dot(p, reference) > -0.5:
            hops = [(p, reference)]
        else:
            side = np.cross(p, reference)
            if np.linalg.norm(side) < self.eps:
                side = np.cross(p, [1.0, 0.0, 0.0] if abs(p[0]) < 0.9 else [0.0, 1.0, 0.0])
            middle = side / np.linalg.norm(side)
            hops = [(p, middle), (middle, reference)]

        count = 0
        for a, b in hops:
            path = Arc(a, b, self.eps)
            for edge in w.arcs():
                try:
                    count += len(self.arc_intersection(path, edge))
                except SharedGreatCircle:
                    continue
        return count % 2 == 1
