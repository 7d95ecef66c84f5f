"""Data model for polyhedral vertex stars"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ..exceptions import InvalidStar, ZeroLengthEdge
from .spherical import DEFAULT_EPS


def newell_normal(chain: np.ndarray) -> np.ndarray:
    """Unnormalized Newell normal of a closed planar polygon"""
    nxt = np.roll(chain, -1, axis=0)
    return np.sum(np.cross(chain, nxt), axis=0)


def ccw_angle(u: np.ndarray, v: np.ndarray, axis: np.ndarray) -> float:
    """Counterclockwise angle in [0, 2pi) from u to v around a unit axis"""
    angle = np.arctan2(np.dot(axis, np.cross(u, v)), np.dot(u, v))
    return float(angle % (2.0 * np.pi))


@dataclass(frozen=True, eq=False)
class Face:
    """Planar face of a star, given by its corner chain starting at the center

    The chain is [center, ring_k, ..., ring_k+1]; intermediate points are only
    needed for faces whose corner angle at the center is reflex.
    """

    corner_chain: np.ndarray
    eps: float = DEFAULT_EPS
    planarity_tolerance: float = 1e-9
    normal: np.ndarray = field(init=False, repr=False)
    angle: float = field(init=False)

    def __post_init__(self):
        chain = np.asarray(self.corner_chain, dtype=float)
        if chain.ndim != 2 or chain.shape[1] != 3 or len(chain) < 3:
            raise InvalidStar(f"a face needs at least 3 corner points, got shape {chain.shape}")
        chain.setflags(write=False)
        object.__setattr__(self, 'corner_chain', chain)

        diameter = float(np.max(np.linalg.norm(chain[:, None, :] - chain[None, :, :], axis=2)))
        if diameter < self.eps:
            raise ZeroLengthEdge("face collapses to a point")

        raw = newell_normal(chain - chain[0])
        if np.linalg.norm(raw) < self.eps * diameter ** 2:
            raise InvalidStar("face has no well-defined plane")
        normal = raw / np.linalg.norm(raw)

        offsets = np.abs((chain - chain[0]) @ normal)
        if np.max(offsets) > self.planarity_tolerance * diameter:
            raise InvalidStar(
                f"face is not planar (deviation {np.max(offsets):.3e})",
                {'deviation': float(np.max(offsets))})

        start, end = chain[1] - chain[0], chain[-1] - chain[0]
        if np.linalg.norm(start) < self.eps or np.linalg.norm(end) < self.eps:
            raise ZeroLengthEdge("a ring vertex coincides with the center")

        angle = ccw_angle(start, end, normal)
        if abs(angle - np.pi) < self.eps or angle < self.eps:
            raise InvalidStar(f"corner angle {angle:.12f} is degenerate")

        normal.setflags(write=False)
        object.__setattr__(self, 'normal', normal)
        object.__setattr__(self, 'angle', angle)

    @property
    def center(self) -> np.ndarray:
        return self.corner_chain[0]

    @property
    def start_vertex(self) -> np.ndarray:
        return self.corner_chain[1]

    @property
    def end_vertex(self) -> np.ndarray:
        return self.corner_chain[-1]

    @property
    def start_edge(self) -> np.ndarray:
        """Unit direction from the center to the first ring vertex"""
        e = self.corner_chain[1] - self.corner_chain[0]
        return e / np.linalg.norm(e)

    @property
    def end_edge(self) -> np.ndarray:
        """Unit direction from the center to the second ring vertex"""
        e = self.corner_chain[-1] - self.corner_chain[0]
        return e / np.linalg.norm(e)

    @property
    def is_reflex(self) -> bool:
        return self.angle > np.pi

    @property
    def bisector(self) -> np.ndarray:
        """In-plane unit direction halving the corner angle"""
        half = self.angle / 2.0
        e = self.start_edge
        return np.cos(half) * e + np.sin(half) * np.cross(self.normal, e)

    def to_list(self) -> List[List[float]]:
        return self.corner_chain.tolist()


@dataclass(frozen=True, eq=False)
class VertexStar:
    """Central vertex with its counterclockwise fan of faces"""

    center: np.ndarray
    faces: List[Face]
    eps: float = DEFAULT_EPS
    strict: bool = True

    def __post_init__(self):
        center = np.asarray(self.center, dtype=float).reshape(3)
        center.setflags(write=False)
        object.__setattr__(self, 'center', center)
        object.__setattr__(self, 'faces', list(self.faces))

        if len(self.faces) < 3:
            raise InvalidStar(f"a star needs at least 3 faces, got {len(self.faces)}")

        scale = max(1.0, float(np.max(np.abs(self.ring - center))))
        for k, face in enumerate(self.faces):
            if np.linalg.norm(face.center - center) > self.eps * scale:
                raise InvalidStar(f"face {k} does not start at the center", {'face': k})
            following = self.faces[(k + 1) % len(self.faces)]
            if np.linalg.norm(face.end_vertex - following.start_vertex) > self.eps * scale:
                raise InvalidStar(f"faces {k} and {k + 1} do not share an edge", {'face': k})
            if self.strict:
                cross = np.linalg.norm(np.cross(face.normal, following.normal))
                if cross < self.eps:
                    raise InvalidStar(f"adjacent faces {k} and {k + 1} are coplanar", {'face': k})

    @property
    def valence(self) -> int:
        return len(self.faces)

    @property
    def ring(self) -> np.ndarray:
        """Ring vertices in face order"""
        return np.array([f.start_vertex for f in self.faces])

    @property
    def normals(self) -> np.ndarray:
        return np.array([f.normal for f in self.faces])

    @property
    def angles(self) -> np.ndarray:
        return np.array([f.angle for f in self.faces])

    @property
    def reflex_flags(self) -> List[bool]:
        return [f.is_reflex for f in self.faces]

    @property
    def diameter(self) -> float:
        return float(np.max(np.linalg.norm(self.ring - self.center, axis=1)))

    def translated(self, offset: Sequence[float]) -> 'VertexStar':
        offset = np.asarray(offset, dtype=float)
        faces = [Face(f.corner_chain + offset, f.eps, f.planarity_tolerance) for f in self.faces]
        return VertexStar(self.center + offset, faces, self.eps, self.strict)

    def to_dict(self) -> dict:
        """Converts the star to its JSON form; corner chains only for non-triangular faces"""
        data = {'center': self.center.tolist(), 'ring': self.ring.tolist()}
        chains = [f.to_list() if len(f.corner_chain) > 3 else None for f in self.faces]
        if any(c is not None for c in chains):
            data['faces'] = [f.to_list() for f in self.faces]
        return data

    @classmethod
    def from_ring(cls, center: Sequence[float], ring: Sequence[Sequence[float]],
                  eps: float = DEFAULT_EPS, planarity_tolerance: float = 1e-9,
                  strict: bool = True) -> 'VertexStar':
        """Creates a triangular fan star from its ring"""
        c = np.asarray(center, dtype=float)
        pts = np.asarray(ring, dtype=float)
        faces = [Face(np.array([c, pts[k], pts[(k + 1) % len(pts)]]), eps, planarity_tolerance)
                 for k in range(len(pts))]
        return cls(c, faces, eps, strict)

    @classmethod
    def from_dict(cls, data: dict, eps: float = DEFAULT_EPS, planarity_tolerance: float = 1e-9,
                  strict: bool = True) -> 'VertexStar':
        """Creates a star from its JSON form"""
        chains: Optional[list] = data.get('faces')
        if not chains:
            return cls.from_ring(data['center'], data['ring'], eps, planarity_tolerance, strict)
        faces = [Face(np.asarray(chain, dtype=float), eps, planarity_tolerance) for chain in chains]
        return cls(np.asarray(data['center'], dtype=float), faces, eps, strict)


@dataclass
class CurvatureParts:
    """Split of the angle deficit into positive and negative parts"""

    k_total: float
    k_plus: float
    k_minus: float

    def to_dict(self) -> dict:
        return {'K': self.k_total, 'K_plus': self.k_plus, 'K_minus': self.k_minus}
