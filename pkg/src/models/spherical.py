"""Value types for points, arcs and polygons on the unit sphere"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np

from ..exceptions import InvalidPolygon, ZeroLengthEdge


DEFAULT_EPS = 1e-9


def as_unit(v: Sequence[float], eps: float = DEFAULT_EPS) -> np.ndarray:
    """Returns v scaled to unit length as a float64 array"""
    arr = np.asarray(v, dtype=float).reshape(3)
    norm = np.linalg.norm(arr)
    if norm < eps:
        raise ZeroLengthEdge(f"cannot normalize vector of length {norm:.3e}")
    return arr / norm


@dataclass(frozen=True, eq=False)
class Arc:
    """Minor great-circle arc from a to b"""

    a: np.ndarray
    b: np.ndarray
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        a = as_unit(self.a, self.eps)
        b = as_unit(self.b, self.eps)
        if np.linalg.norm(np.cross(a, b)) < self.eps:
            raise InvalidPolygon("arc endpoints are equal or antipodal")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    @property
    def normal(self) -> np.ndarray:
        """Unit normal of the supporting great circle, a x b normalized"""
        n = np.cross(self.a, self.b)
        return n / np.linalg.norm(n)

    @property
    def length(self) -> float:
        return float(np.arctan2(np.linalg.norm(np.cross(self.a, self.b)), np.dot(self.a, self.b)))

    def point_at(self, t: float) -> np.ndarray:
        """Point at fraction t of the arc length"""
        theta = self.length * t
        tangent = np.cross(self.normal, self.a)
        return np.cos(theta) * self.a + np.sin(theta) * tangent

    def to_dict(self) -> dict:
        return {'a': self.a.tolist(), 'b': self.b.tolist()}


@dataclass(frozen=True, eq=False)
class SphericalPolygon:
    """Cyclic sequence of unit vectors joined by minor arcs

    Vertices are normalized on construction. Consecutive vertices must be
    neither equal nor antipodal; the first vertex is not repeated at the end.
    """

    vertices: np.ndarray
    eps: float = DEFAULT_EPS

    def __post_init__(self):
        pts = np.asarray(self.vertices, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise InvalidPolygon(f"expected an (n, 3) array of vertices, got shape {pts.shape}")
        if len(pts) < 3:
            raise InvalidPolygon(f"a spherical polygon needs at least 3 vertices, got {len(pts)}")

        norms = np.linalg.norm(pts, axis=1)
        if np.any(norms < self.eps):
            raise ZeroLengthEdge("polygon has a zero vertex")
        pts = pts / norms[:, None]

        cross = np.linalg.norm(np.cross(pts, np.roll(pts, -1, axis=0)), axis=1)
        bad = np.flatnonzero(cross < self.eps)
        if bad.size:
            raise InvalidPolygon(
                f"edge {int(bad[0])} joins equal or antipodal vertices",
                {"edge": int(bad[0])})

        pts.setflags(write=False)
        object.__setattr__(self, 'vertices', pts)

    def __len__(self) -> int:
        return len(self.vertices)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.vertices[i % len(self.vertices)]

    @property
    def n(self) -> int:
        return len(self.vertices)

    def next_vertices(self) -> np.ndarray:
        """Vertices shifted by one, so row i holds w_{i+1}"""
        return np.roll(self.vertices, -1, axis=0)

    def edge(self, i: int) -> Arc:
        return Arc(self[i], self[i + 1], self.eps)

    def arcs(self) -> List[Arc]:
        return [self.edge(i) for i in range(self.n)]

    def edge_normals(self) -> np.ndarray:
        """Unit great-circle normals of all edges"""
        cross = np.cross(self.vertices, self.next_vertices())
        return cross / np.linalg.norm(cross, axis=1)[:, None]

    def reversed(self) -> 'SphericalPolygon':
        return SphericalPolygon(self.vertices[::-1].copy(), self.eps)

    def negated(self) -> 'SphericalPolygon':
        return SphericalPolygon(-self.vertices, self.eps)

    def rotated(self, rotation: np.ndarray) -> 'SphericalPolygon':
        return SphericalPolygon(self.vertices @ np.asarray(rotation).T, self.eps)

    def shifted(self, k: int) -> 'SphericalPolygon':
        """Same polygon starting at vertex k"""
        return SphericalPolygon(np.roll(self.vertices, -k, axis=0), self.eps)

    def to_list(self) -> List[List[float]]:
        return self.vertices.tolist()

    def to_dict(self) -> dict:
        return {'vertices': self.to_list()}

    @classmethod
    def from_points(cls, points: Iterable[Sequence[float]], eps: float = DEFAULT_EPS) -> 'SphericalPolygon':
        return cls(np.array([list(p) for p in points], dtype=float), eps)

    @classmethod
    def from_dict(cls, data: dict, eps: float = DEFAULT_EPS) -> 'SphericalPolygon':
        return cls.from_points(data['vertices'], eps)
