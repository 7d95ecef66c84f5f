"""Service for equator chord diagrams: extraction, signs, normal degree and realization"""

import logging
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..exceptions import AnchorNotFree, InadmissiblePair, InvalidDiagram, NotAdmissible, Unrealizable
from ..models.chords import ChordDiagram, ChordSigns
from ..models.spherical import SphericalPolygon, as_unit
from .degree_service import DegreeService
from .index_service import IndexService
from .spherical_service import SphericalService


NORTH = np.array([0.0, 0.0, 1.0])

# Band pieces stay short so a lifted chord never rises much above its latitude
MAX_BAND_STEP = np.pi / 6.0
MAX_LATITUDE_DEG = 80.0


@lru_cache(maxsize=None)
def noncrossing_matchings(n: int) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    """All non-crossing perfect matchings of positions 1..n"""
    def build(lo: int, hi: int) -> List[List[Tuple[int, int]]]:
        if lo > hi:
            return [[]]
        result = []
        for partner in range(lo + 1, hi + 1, 2):
            for inside in build(lo + 1, partner - 1):
                for outside in build(partner + 1, hi):
                    result.append([(lo, partner)] + inside + outside)
        return result

    return tuple(tuple(m) for m in build(1, n))


def _partner_map(matching) -> Dict[int, int]:
    partner = {}
    for a, b in matching:
        partner[a], partner[b] = b, a
    return partner


def _relabel(sequence: List[int], n: int, reflect: bool = False) -> Tuple[int, ...]:
    """Rotates position labels so the first entry becomes 1, optionally mirrored"""
    start = sequence[0]
    if reflect:
        return tuple((start - p) % n + 1 for p in sequence)
    return tuple((p - start) % n + 1 for p in sequence)


class ChordService:
    """Service for separating chord sets of simple polygons"""

    def __init__(self, spherical_service: SphericalService, index_service: IndexService,
                 degree_service: DegreeService, base_offset: float = 0.37, apex_base_deg: float = 15.0,
                 apex_step_deg: float = 12.0, equator_lift_deg: float = 2.0, max_enumeration_r: int = 6):
        self.spherical = spherical_service
        self.indices = index_service
        self.degrees = degree_service
        self.eps = spherical_service.eps
        self.base_offset = base_offset
        self.apex_base_deg = apex_base_deg
        self.apex_step_deg = apex_step_deg
        self.equator_lift_deg = equator_lift_deg
        self.max_enumeration_r = max_enumeration_r
        self.logger = logging.getLogger('GaussMap.ChordService')

    # Extraction

    def extract_diagram(self, w: SphericalPolygon, xi=NORTH) -> ChordDiagram:
        """Chord diagram of the equator crossings of w

        A vertex on the equator counts as a crossing itself; an edge whose
        endpoints lie on opposite sides contributes the point where it meets
        the equator.
        """
        xi = as_unit(xi, self.eps)
        if not self.indices.is_admissible(xi, w):
            raise NotAdmissible("polygon meets the equator of the direction non-transversally")

        h = w.vertices @ xi
        on_equator = np.abs(h) <= self.eps
        crossings: List[Tuple[np.ndarray, bool]] = []
        for k in range(w.n):
            nxt = (k + 1) % w.n
            if on_equator[k]:
                crossings.append((w[k], bool(h[nxt] > 0)))
            elif not on_equator[nxt] and (h[k] > 0) != (h[nxt] > 0):
                p = abs(h[nxt]) * w[k] + abs(h[k]) * w[nxt]
                crossings.append((p / np.linalg.norm(p), bool(h[nxt] > 0)))

        if not crossings:
            return ChordDiagram.empty()

        first = next(k for k, (_, upward) in enumerate(crossings) if upward)
        crossings = crossings[first:] + crossings[:first]
        e1, e2 = self.degrees.meridian_frame(xi)
        points = np.array([p for p, _ in crossings])
        azimuth = np.arctan2(points @ e2, points @ e1)
        relative = (azimuth - azimuth[0]) % (2.0 * np.pi)
        order = np.argsort(relative, kind='stable')
        positions = np.empty(len(order), dtype=int)
        positions[order] = np.arange(1, len(order) + 1)

        diagram = ChordDiagram(len(crossings) // 2, tuple(int(p) for p in positions))
        self.logger.debug(f"extracted diagram r={diagram.r} pi={diagram.pi}")
        return diagram

    # Free chords and signs

    def free_chords(self, d: ChordDiagram) -> List[int]:
        """Indices of the chords joining equator-adjacent points"""
        return [j for j in range(2 * d.r) if d.is_free(d.chord(j))]

    def chord_signs(self, d: ChordDiagram, anchor: Optional[int] = None) -> ChordSigns:
        """Positive and negative upper chords, read after relabeling from the anchor

        The anchor defaults to the first free upper chord.
        """
        if d.r == 0:
            raise AnchorNotFree("the empty diagram has no chords")
        if anchor is None:
            anchor = next(j for j in self.free_chords(d) if d.is_upper(j))
        if not d.is_upper(anchor) or not d.is_free(d.chord(anchor)):
            raise AnchorNotFree(f"chord {anchor} is not a free upper chord", {'anchor': anchor})

        n = 2 * d.r
        start = d.pi[anchor]
        relabeled = [(d.pi[(anchor + k) % n] - start) % n + 1 for k in range(n)]
        n_plus = n_minus = 0
        for i in range(1, d.r):
            if relabeled[2 * i] < relabeled[2 * i + 1]:
                n_plus += 1
            else:
                n_minus += 1
        return ChordSigns(anchor=anchor, n_plus=n_plus, n_minus=n_minus)

    def degree_from_diagram(self, signs: ChordSigns) -> Tuple[int, int]:
        """Index and normal degree determined by the chord signs"""
        return 1 - signs.r, -signs.n_plus + signs.n_minus

    def anchor_independent(self, d: ChordDiagram) -> bool:
        """True if every free upper anchor gives the same degree"""
        anchors = [j for j in self.free_chords(d) if d.is_upper(j)]
        return len({self.degree_from_diagram(self.chord_signs(d, j)) for j in anchors}) == 1

    # Combinatorics

    def enumerate_diagrams(self, r: int) -> List[ChordDiagram]:
        """Every diagram with r chords per hemisphere forming one cycle"""
        if r < 0 or r > self.max_enumeration_r:
            raise InvalidDiagram(f"enumeration supports 0 <= r <= {self.max_enumeration_r}, got {r}")
        if r == 0:
            return [ChordDiagram.empty()]

        diagrams = []
        matchings = noncrossing_matchings(2 * r)
        for upper in matchings:
            up = _partner_map(upper)
            for lower in matchings:
                down = _partner_map(lower)
                sequence = [1]
                position = 1
                while True:
                    position = up[position]
                    sequence.append(position)
                    position = down[position]
                    if position == 1:
                        break
                    sequence.append(position)
                if len(sequence) == 2 * r:
                    diagrams.append(ChordDiagram(r, tuple(sequence)))
        self.logger.debug(f"{len(diagrams)} diagrams with r={r}")
        return diagrams

    def degree_family_permutation(self, r: int, k: int) -> ChordDiagram:
        """Diagram (1, ..., 2k+1, 2r, 2r-1, ..., 2k+2) of index 1 - r and degree r - 2k - 1"""
        if r < 1 or not 0 <= k <= r - 1:
            raise InvalidDiagram(f"family needs r >= 1 and 0 <= k < r, got r={r}, k={k}")
        pi = list(range(1, 2 * k + 2)) + list(range(2 * r, 2 * k + 1, -1))
        return ChordDiagram(r, tuple(pi))

    def canonical_form(self, d: ChordDiagram) -> Tuple[int, ...]:
        """Smallest relabeling over starting points, traversal direction and mirroring"""
        if d.r == 0:
            return ()
        n = 2 * d.r
        forward = list(d.pi)
        backward = forward[::-1]
        candidates = []
        for t in range(0, n, 2):
            candidates.append(forward[t:] + forward[:t])
            # reversed traversal starts at a point that was a downward crossing
            u = (n - 1 - (t + 1)) % n
            candidates.append(backward[u:] + backward[:u])
        return min(_relabel(seq, n, reflect) for seq in candidates for reflect in (False, True))

    def equivalent(self, d1: ChordDiagram, d2: ChordDiagram) -> bool:
        return d1.r == d2.r and self.canonical_form(d1) == self.canonical_form(d2)

    def reduce_free_chord(self, d: ChordDiagram, chord: int) -> ChordDiagram:
        """Diagram with a free chord pushed off the equator

        Its two traversal points disappear and the neighbouring chords of the
        other hemisphere merge into one.
        """
        if not d.is_free(d.chord(chord)):
            raise AnchorNotFree(f"chord {chord} is not free", {'chord': chord})
        n = 2 * d.r
        removed = {chord % n, (chord + 1) % n}
        kept = [k for k in range(n) if k not in removed]
        if not kept:
            return ChordDiagram.empty()

        start = next(k for k in kept if k % 2 == 0)
        at = kept.index(start)
        kept = kept[at:] + kept[:at]
        ranks = {p: i + 1 for i, p in enumerate(sorted(d.pi[k] for k in kept))}
        labels = [ranks[d.pi[k]] for k in kept]
        return ChordDiagram(d.r - 1, _relabel(labels, n - 2))

    # Realization

    def _depths(self, chords: List[Tuple[int, int]]) -> List[int]:
        """Nesting depth of each chord, zero for chords with nothing inside"""
        spans = [tuple(sorted(c)) for c in chords]
        depth = [0] * len(spans)
        for i in sorted(range(len(spans)), key=lambda i: spans[i][1] - spans[i][0]):
            lo, hi = spans[i]
            inner = [depth[j] + 1 for j in range(len(spans))
                     if j != i and lo < spans[j][0] and spans[j][1] < hi]
            depth[i] = max(inner, default=0)
        return depth

    def _point(self, latitude: float, azimuth: float) -> np.ndarray:
        return np.array([np.cos(latitude) * np.cos(azimuth), np.cos(latitude) * np.sin(azimuth),
                         np.sin(latitude)])

    def realize_diagram(self, d: ChordDiagram, lift_deg: float = 0.0) -> SphericalPolygon:
        """Simple polygon whose equator crossings about the north pole follow d

        Equator points sit on a regular 2r-gon; each chord becomes a path along
        a latitude band whose height grows with the chord's nesting depth.
        """
        if d.r == 0:
            raise Unrealizable("the empty diagram has no equator crossings")
        n = 2 * d.r
        theta = self.base_offset + 2.0 * np.pi * np.arange(n) / n
        inset = 0.25 * np.pi / d.r

        upper = [d.chord(j) for j in range(0, n, 2)]
        lower = [d.chord(j) for j in range(1, n, 2)]
        depth_up, depth_down = self._depths(upper), self._depths(lower)
        deepest = max(depth_up + depth_down)
        step = self.apex_step_deg
        if deepest and self.apex_base_deg + step * deepest > MAX_LATITUDE_DEG:
            step = (MAX_LATITUDE_DEG - self.apex_base_deg) / deepest

        lift = np.radians(lift_deg)
        vertices = []
        for j in range(n):
            a, b = d.chord(j)
            depth = depth_up[j // 2] if j % 2 == 0 else depth_down[j // 2]
            latitude = np.radians(self.apex_base_deg + step * depth)
            if j % 2:
                latitude = -latitude
            vertices.append(self._point(lift, theta[a - 1]))

            lo, hi = sorted((theta[a - 1], theta[b - 1]))
            pieces = max(2, int(np.ceil((hi - lo - 2.0 * inset) / MAX_BAND_STEP)))
            pieces += pieces % 2
            band = np.linspace(lo + inset, hi - inset, pieces + 1)
            if a > b:
                band = band[::-1]
            vertices.extend(self._point(latitude, phi) for phi in band)

        polygon = SphericalPolygon(np.array(vertices), self.eps)
        if not self.spherical.is_simple(polygon):
            raise Unrealizable(f"realized polygon for pi={d.pi} is not simple")
        return polygon

    def realize_index_degree(self, i: int, d: int) -> SphericalPolygon:
        """Simple polygon with index i and normal degree d about the north pole"""
        if i == 1:
            if abs(d) != 1:
                raise InadmissiblePair(f"a local extremum has degree +1 or -1, not {d}", {'i': i, 'd': d})
            azimuth = self.base_offset + 2.0 * np.pi * np.arange(5) / 5
            polygon = SphericalPolygon(np.array([self._point(np.pi / 3, phi) for phi in azimuth]), self.eps)
            polygon = polygon if d == 1 else polygon.reversed()
        elif i <= 0 and abs(d) <= abs(i) and (d - i) % 2 == 0:
            r = 1 - i
            k = (r - 1 - d) // 2
            polygon = self.realize_diagram(self.degree_family_permutation(r, k), self.equator_lift_deg)
        else:
            raise InadmissiblePair(f"no simple polygon has index {i} and degree {d}", {'i': i, 'd': d})

        measured = (self.indices.polygon_index(polygon, NORTH), self.degrees.normal_degree(polygon, NORTH))
        if measured != (i, d):
            raise Unrealizable(f"construction gave (i, d) = {measured} instead of {(i, d)}")
        return polygon
