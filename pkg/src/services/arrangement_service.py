"""Service for arrangements of spherical polygons, winding numbers and layers"""

import logging
from collections import deque
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from ..exceptions import (
    DegenerateEdge, DegenerateVertexOnEdge, InconsistentCycle, NoConsistentShift,
    NonTransversal, SelfIntersectingGaussImage, SharedGreatCircle, ZeroCurvature
)
from ..models.arrangement import Arrangement, LayerProfile, Segment, ShapeClassification
from ..models.spherical import Arc, SphericalPolygon, as_unit
from ..models.star import VertexStar
from .spherical_service import SphericalService
from .star_service import StarService


FALLBACK_SEED = np.array([0.2672612419124244, 0.5345224838248488, 0.8017837257372732])


def _tangent_frame(p: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    helper = np.array([1.0, 0.0, 0.0]) if abs(p[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    u = helper - np.dot(helper, p) * p
    u /= np.linalg.norm(u)
    return u, np.cross(p, u)


class ArrangementService:
    """Service for arrangements, winding numbers and the shape of Gauss images"""

    def __init__(self, spherical_service: SphericalService, star_service: StarService,
                 area_tolerance: float = 1e-8):
        self.spherical = spherical_service
        self.stars = star_service
        self.eps = spherical_service.eps
        self.area_tolerance = area_tolerance
        self.logger = logging.getLogger('GaussMap.ArrangementService')

    # Construction

    def _check_vertices_off_edges(self, wp: SphericalPolygon):
        arcs = wp.arcs()
        for k in range(wp.n):
            v = wp[k]
            for i, arc in enumerate(arcs):
                if i == k or (i + 1) % wp.n == k:
                    continue
                if abs(np.dot(v, arc.normal)) < self.eps and self.spherical.on_arc(v, arc):
                    raise DegenerateVertexOnEdge(f"vertex {k} lies on edge {i}", {'vertex': k, 'edge': i})

    def build_arrangement(self, wp: SphericalPolygon) -> Arrangement:
        """Splits the polygon at its self-crossings and traces the faces

        Half-edge 2s follows segment s forward and 2s + 1 backward; faces are
        the cycles of half-edges having the face on their left.
        """
        self._check_vertices_off_edges(wp)
        crossings = self.spherical.self_crossings(wp)
        n = wp.n
        verts = wp.vertices

        nodes = [v for v in verts]
        on_edge: Dict[int, List[int]] = {i: [] for i in range(n)}
        for i, j, p in crossings:
            on_edge[i].append(len(nodes))
            on_edge[j].append(len(nodes))
            nodes.append(p)
        nodes = np.array(nodes)

        normals = wp.edge_normals()
        segments: List[Segment] = []
        for i in range(n):
            start, end = i, (i + 1) % n
            ahead = np.cross(normals[i], verts[start])
            inner = sorted(on_edge[i], key=lambda k: np.arctan2(np.dot(nodes[k], ahead),
                                                                  np.dot(nodes[k], verts[start])))
            chain = [start] + inner + [end]
            for a, b in zip(chain[:-1], chain[1:]):
                segments.append(Segment(a, b, i, normals[i], self.spherical.arc_length(nodes[a], nodes[b])))

        half_edges = 2 * len(segments)
        origin = np.empty(half_edges, dtype=int)
        tangent = np.empty((half_edges, 3))
        for s, seg in enumerate(segments):
            origin[2 * s], origin[2 * s + 1] = seg.start, seg.end
            tangent[2 * s] = np.cross(seg.normal, nodes[seg.start])
            tangent[2 * s + 1] = -np.cross(seg.normal, nodes[seg.end])

        outgoing: Dict[int, List[int]] = {}
        angles: Dict[int, float] = {}
        for h in range(half_edges):
            u, v = _tangent_frame(nodes[origin[h]])
            angles[h] = float(np.arctan2(np.dot(tangent[h], v), np.dot(tangent[h], u)))
            outgoing.setdefault(int(origin[h]), []).append(h)
        for node in outgoing:
            outgoing[node].sort(key=lambda h: angles[h])
        position = {h: k for node in outgoing for k, h in enumerate(outgoing[node])}

        following = np.empty(half_edges, dtype=int)
        for h in range(half_edges):
            twin = h ^ 1
            around = outgoing[int(origin[twin])]
            following[h] = around[(position[twin] - 1) % len(around)]

        face_of = [-1] * half_edges
        faces: List[List[int]] = []
        for h in range(half_edges):
            if face_of[h] >= 0:
                continue
            cycle = []
            cur = h
            while face_of[cur] < 0:
                face_of[cur] = len(faces)
                cycle.append(cur)
                cur = int(following[cur])
            faces.append(cycle)

        areas = np.array([self._face_area(cycle, origin, tangent, nodes) for cycle in faces])
        segments = [replace(seg, left_face=face_of[2 * s], right_face=face_of[2 * s + 1])
                    for s, seg in enumerate(segments)]

        arr = Arrangement(
            polygon=verts,
            nodes=nodes,
            vertex_nodes=list(range(n)),
            segments=segments,
            faces=faces,
            face_areas=areas,
            crossings=[(i, j) for i, j, _ in crossings],
            half_edge_face=face_of,
            outgoing=outgoing
        )
        if arr.euler_characteristic != 2:
            self.logger.warning(f"arrangement Euler characteristic is {arr.euler_characteristic}")
        if abs(arr.total_area - 4.0 * np.pi) > self.area_tolerance:
            self.logger.warning(f"arrangement face areas sum to {arr.total_area!r}")
        self.logger.debug(f"arrangement: {arr.num_nodes} nodes, {arr.num_segments} segments, "
                          f"{arr.num_faces} faces")
        return arr

    def _face_area(self, cycle: List[int], origin, tangent, nodes) -> float:
        """Angle excess of a face traced with its interior on the left"""
        total = 0.0
        m = len(cycle)
        for k in range(m):
            h, incoming = cycle[k], cycle[k - 1]
            p = nodes[origin[h]]
            back = tangent[incoming ^ 1]
            corner = np.arctan2(np.dot(p, np.cross(tangent[h], back)), np.dot(tangent[h], back))
            total += corner % (2.0 * np.pi)
        return float(total - (m - 2) * np.pi)

    # Winding numbers

    def relative_winding(self, arr: Arrangement, seed: Optional[np.ndarray] = None) -> Dict[int, int]:
        """Winding numbers up to a constant, zero at the face of the seed point

        Crossing a segment from its left to its right decreases the value by one.
        """
        winding = {0: 0}
        neighbours: Dict[int, List[Tuple[int, int]]] = {}
        for seg in arr.segments:
            neighbours.setdefault(seg.left_face, []).append((seg.right_face, -1))
            neighbours.setdefault(seg.right_face, []).append((seg.left_face, 1))

        queue = deque([0])
        while queue:
            face = queue.popleft()
            for other, step in neighbours.get(face, []):
                value = winding[face] + step
                if other not in winding:
                    winding[other] = value
                    queue.append(other)
                elif winding[other] != value:
                    raise InconsistentCycle(f"face {other} reached with windings {winding[other]} and {value}")

        if len(winding) != arr.num_faces:
            raise InconsistentCycle("arrangement faces are not connected")

        point = self.seed_point(arr) if seed is None else as_unit(seed, self.eps)
        offset = self.locate_winding(arr, winding, point)
        return {face: value - offset for face, value in winding.items()}

    def seed_point(self, arr: Arrangement) -> np.ndarray:
        """Antipode of the length-weighted centroid of the polygon's edges"""
        verts = arr.polygon
        nxt = np.roll(verts, -1, axis=0)
        mids = verts + nxt
        mids /= np.linalg.norm(mids, axis=1)[:, None]
        lengths = np.arctan2(np.linalg.norm(np.cross(verts, nxt), axis=1), np.einsum('ij,ij->i', verts, nxt))
        centroid = np.sum(mids * lengths[:, None], axis=0)
        if np.linalg.norm(centroid) < 1e-6:
            return FALLBACK_SEED / np.linalg.norm(FALLBACK_SEED)
        return -centroid / np.linalg.norm(centroid)

    def locate_winding(self, arr: Arrangement, winding: Dict[int, int], point: Sequence[float]) -> int:
        """Winding value at a point off the curve

        Starts in the sector of the nearest usable node that contains the point
        and adds the signed crossings of the arc from that node to the point.
        """
        q = as_unit(point, self.eps)
        edges = [Arc(arr.polygon[i], arr.polygon[(i + 1) % len(arr.polygon)], self.eps)
                 for i in range(len(arr.polygon))]
        incident: Dict[int, set] = {}
        for seg in arr.segments:
            incident.setdefault(seg.start, set()).add(seg.edge)
            incident.setdefault(seg.end, set()).add(seg.edge)

        for node in np.argsort(-(arr.nodes @ q)):
            node = int(node)
            p = arr.nodes[node]
            if self.spherical.arc_length(p, q) < 1e-7 or np.dot(p, q) < -0.999:
                continue
            value = self._winding_from_node(arr, winding, edges, incident[node], node, p, q)
            if value is not None:
                return value
        raise NonTransversal("point lies on the curve or cannot be located")

    def _winding_from_node(self, arr, winding, edges, incident, node, p, q) -> Optional[int]:
        u, v = _tangent_frame(p)
        toward = q - np.dot(q, p) * p
        target = float(np.arctan2(np.dot(toward, v), np.dot(toward, u)))

        around = arr.outgoing[node]
        out_angles = []
        for h in around:
            seg = arr.segments[h // 2]
            t = np.cross(seg.normal, p) if h % 2 == 0 else -np.cross(seg.normal, p)
            out_angles.append(float(np.arctan2(np.dot(t, v), np.dot(t, u))))
        gaps = np.abs((np.array(out_angles) - target + np.pi) % (2.0 * np.pi) - np.pi)
        if np.min(gaps) < 1e-9:
            return None

        chosen = around[-1]
        for h, angle in zip(around, out_angles):
            if angle <= target:
                chosen = h
        value = winding[arr.half_edge_face[chosen]]

        path = Arc(p, q, self.eps)
        for i, edge in enumerate(edges):
            if i in incident:
                continue
            try:
                hits = self.spherical.arc_intersection(path, edge)
            except SharedGreatCircle:
                return None
            for hit in hits:
                near = min(self.spherical.arc_length(hit, x) for x in (edge.a, edge.b, p, q))
                if near < 1e-9:
                    return None
                m = edge.normal
                value += int((np.sign(np.dot(q, m)) - np.sign(np.dot(p, m))) // 2)
        return value

    # Layers and normalization

    def _layer_count(self, arr: Arrangement, members: set) -> int:
        """Connected components of a set of faces joined across segments"""
        if not members:
            return 0
        index = {face: k for k, face in enumerate(sorted(members))}
        rows, cols = [], []
        for seg in arr.segments:
            if seg.length <= self.eps:
                continue
            if seg.left_face in members and seg.right_face in members:
                rows.append(index[seg.left_face])
                cols.append(index[seg.right_face])
        graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(index), len(index)))
        count, _ = connected_components(graph, directed=False)
        return int(count)

    def layer_counts(self, arr: Arrangement, winding: Dict[int, int]) -> Tuple[List[int], List[int]]:
        """Per-level counts of positive and negative layers"""
        top = max(winding.values())
        bottom = min(winding.values())
        plus = [self._layer_count(arr, {f for f, w in winding.items() if w >= k}) for k in range(1, top + 1)]
        minus = [self._layer_count(arr, {f for f, w in winding.items() if w <= -k}) for k in range(1, -bottom + 1)]
        return plus, minus

    def layers(self, profile: LayerProfile) -> Tuple[int, int, List[int], List[int]]:
        return profile.c_plus, profile.c_minus, list(profile.c_plus_k), list(profile.c_minus_k)

    def normalize_winding(self, arr: Arrangement, relative: Dict[int, int], i_turns: int,
                          c_parity: int) -> LayerProfile:
        """Shifts the windings so that I + 2C+ - 2C- = 2 + 2c"""
        target = 2 + 2 * c_parity
        reach = (abs(target) + abs(i_turns)) // 2 + 2
        low = -max(relative.values()) - reach
        high = -min(relative.values()) + reach

        matches = []
        for shift in range(low, high + 1):
            shifted = {f: w + shift for f, w in relative.items()}
            plus, minus = self.layer_counts(arr, shifted)
            if i_turns + 2 * sum(plus) - 2 * sum(minus) == target:
                matches.append((shift, shifted, plus, minus))
        if len(matches) != 1:
            raise NoConsistentShift(
                f"{len(matches)} shifts satisfy the layer formula for I={i_turns}, c={c_parity}",
                {'i_turns': i_turns, 'c_parity': c_parity})

        shift, winding, plus, minus = matches[0]
        areas = arr.face_areas
        weighted = [winding[f] * areas[f] for f in range(arr.num_faces)]
        self.logger.debug(f"winding shift {shift}, layers +{plus} -{minus}")
        return LayerProfile(
            winding=winding,
            c_plus_k=plus,
            c_minus_k=minus,
            i_turns=i_turns,
            c_parity=c_parity,
            algebraic_area=float(np.sum(weighted)),
            positive_area=float(sum(x for x in weighted if x > 0)),
            negative_area=float(-sum(x for x in weighted if x < 0)),
            shift=shift
        )

    # Turning counts and profiles

    def right_turn_count(self, wp: SphericalPolygon, reflex_flags: Optional[Sequence[bool]] = None) -> int:
        """Right turns of wp, with reflex vertices counted by their own rule

        A reflex vertex counts once for a left turn and twice for a right turn.
        """
        turns = self.spherical.turns(wp)
        if reflex_flags is None:
            return int(np.sum(turns < 0))
        total = 0
        for turn, reflex in zip(turns, reflex_flags):
            if reflex:
                total += 2 if turn < 0 else 1
            elif turn < 0:
                total += 1
        return total

    def profile(self, wp: SphericalPolygon, i_turns: int, c_parity: int) -> Tuple[Arrangement, LayerProfile]:
        arr = self.build_arrangement(wp)
        relative = self.relative_winding(arr)
        return arr, self.normalize_winding(arr, relative, i_turns, c_parity)

    def polygon_profile(self, wp: SphericalPolygon) -> Tuple[Arrangement, LayerProfile]:
        """Profile of a polar polygon, with I and c read off the polygon itself"""
        i_turns = self.right_turn_count(wp)
        if i_turns % 2:
            raise NoConsistentShift(f"odd right turn count {i_turns}: not a polar polygon")
        try:
            source = self.spherical.polar_preimage(wp)
        except DegenerateEdge as e:
            raise NoConsistentShift(str(e)) from e
        return self.profile(wp, i_turns, self.spherical.crossing_count(source) % 2)

    def profile_for_polygon(self, w: SphericalPolygon) -> Tuple[Arrangement, LayerProfile]:
        """Profile of the polar polygon of w"""
        wp = self.spherical.polar_polygon(w)
        return self.profile(wp, self.right_turn_count(wp), self.spherical.crossing_count(w) % 2)

    def profile_for_star(self, s: VertexStar) -> Tuple[Arrangement, LayerProfile]:
        """Profile of the Gauss image of a star"""
        g = self.stars.gauss_image(s)
        _, weighted = self.stars.inflection_faces(s)
        c = self.spherical.crossing_count(self.stars.project_to_sphere(s)) % 2
        return self.profile(g, weighted, c)

    def algebraic_area(self, wp: SphericalPolygon, i_turns: Optional[int] = None,
                       c_parity: Optional[int] = None) -> float:
        """Integral of the winding number of wp over the sphere"""
        if i_turns is None or c_parity is None:
            _, profile = self.polygon_profile(wp)
        else:
            _, profile = self.profile(wp, i_turns, c_parity)
        return profile.algebraic_area

    def star_algebraic_area(self, s: VertexStar) -> float:
        _, profile = self.profile_for_star(s)
        return profile.algebraic_area

    def winding_at(self, wp: SphericalPolygon, point: Sequence[float], i_turns: Optional[int] = None,
                   c_parity: Optional[int] = None) -> int:
        """Absolute winding number of wp at a point off the curve"""
        if i_turns is None or c_parity is None:
            arr, profile = self.polygon_profile(wp)
        else:
            arr, profile = self.profile(wp, i_turns, c_parity)
        return self.locate_winding(arr, profile.winding, point)

    # Checks and dumps

    def antipodal_area_check(self, arr: Arrangement, profile: LayerProfile) -> float:
        """Difference between the winding integral and its antipodal counterpart

        The antipodal map sends the arrangement of the curve onto that of the
        negated curve with left and right exchanged; the windings are carried
        over and integrated against the independently computed face areas.
        """
        mirror = self.build_arrangement(SphericalPolygon(-arr.polygon, self.eps))
        if mirror.num_segments != arr.num_segments:
            raise InconsistentCycle("antipodal arrangement has a different segment count")
        carried: Dict[int, int] = {}
        for seg, image in zip(arr.segments, mirror.segments):
            for face, value in ((image.right_face, profile.winding[seg.left_face]),
                                (image.left_face, profile.winding[seg.right_face])):
                if carried.setdefault(face, value) != value:
                    raise InconsistentCycle("antipodal faces receive different windings")
        mirrored = sum(carried[f] * mirror.face_areas[f] for f in range(mirror.num_faces))
        return float(abs(profile.algebraic_area - mirrored))

    def arrangement_to_dict(self, arr: Arrangement, profile: Optional[LayerProfile] = None) -> dict:
        faces = []
        for f, cycle in enumerate(arr.faces):
            entry = {'segments': [h // 2 for h in cycle], 'area': float(arr.face_areas[f])}
            if profile is not None:
                entry['winding'] = profile.winding[f]
            faces.append(entry)
        return {
            'nodes': arr.nodes.tolist(),
            'segments': [{'start': s.start, 'end': s.end, 'edge': s.edge,
                          'normal': np.asarray(s.normal).tolist(),
                          'left_face': s.left_face, 'right_face': s.right_face}
                         for s in arr.segments],
            'faces': faces
        }

    # Shape

    def classify_shape(self, s: VertexStar, curvature_tolerance: float = 1e-9) -> ShapeClassification:
        """Shape of the Gauss image of a star with a simple Gauss image"""
        k = self.stars.angle_deficit(s)
        if abs(k) <= curvature_tolerance:
            raise ZeroCurvature(f"angle deficit {k!r} is zero")
        g = self.stars.gauss_image(s)
        if self.spherical.crossing_count(g) > 0:
            raise SelfIntersectingGaussImage("Gauss image crosses itself")

        turns = self.spherical.turns(g)
        if k > 0:
            if np.all(turns > 0):
                return ShapeClassification(ShapeClassification.CONVEX, list(range(g.n)))
            return ShapeClassification(ShapeClassification.UNCLASSIFIED)

        corners = [int(i) for i in np.flatnonzero(turns < 0)]
        if len(corners) == 4:
            return ShapeClassification(ShapeClassification.QUADRILATERAL, corners)
        if len(corners) == 3:
            reflex = [f for f, flag in enumerate(s.reflex_flags) if flag]
            variant = None
            if len(reflex) == 1:
                inflecting, _ = self.stars.inflection_faces(s)
                variant = 'reflex-is-inflection' if reflex[0] in inflecting else 'reflex-not-inflection'
            return ShapeClassification(ShapeClassification.TRIANGLE, corners, variant)
        if len(corners) == 2:
            return ShapeClassification(ShapeClassification.DIGON, corners)
        return ShapeClassification(ShapeClassification.UNCLASSIFIED, corners)
