"""Data model for the arrangement of a spherical polygon on the sphere"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np


@dataclass(frozen=True, eq=False)
class Segment:
    """Piece of a polygon edge between two consecutive arrangement nodes"""

    start: int
    end: int
    edge: int
    normal: np.ndarray
    length: float
    left_face: int = -1
    right_face: int = -1

    def to_dict(self) -> dict:
        return {
            'start': self.start,
            'end': self.end,
            'edge': self.edge,
            'normal': np.asarray(self.normal).tolist(),
            'length': self.length,
            'left_face': self.left_face,
            'right_face': self.right_face
        }


@dataclass
class Arrangement:
    """Planar graph induced by a polygon on the sphere

    Half-edge 2s runs along segment s in the polygon direction and 2s + 1 is
    its twin. Each face is the cycle of half-edges having the face on the left.
    """

    polygon: np.ndarray
    nodes: np.ndarray
    vertex_nodes: List[int]
    segments: List[Segment]
    faces: List[List[int]]
    face_areas: np.ndarray
    crossings: List[tuple] = field(default_factory=list)
    half_edge_face: List[int] = field(default_factory=list)
    outgoing: Dict[int, List[int]] = field(default_factory=dict)

    @property
    def num_nodes(self) -> int:
        return len(self.nodes)

    @property
    def num_segments(self) -> int:
        return len(self.segments)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def euler_characteristic(self) -> int:
        return self.num_nodes - self.num_segments + self.num_faces

    @property
    def total_area(self) -> float:
        return float(np.sum(self.face_areas))

    def face_adjacency(self) -> List[tuple]:
        """Pairs (left, right) of faces separated by a segment"""
        return [(s.left_face, s.right_face) for s in self.segments]


@dataclass
class LayerProfile:
    """Absolute winding numbers of an arrangement and their layer counts"""

    winding: Dict[int, int]
    c_plus_k: List[int]
    c_minus_k: List[int]
    i_turns: int
    c_parity: int
    algebraic_area: float
    positive_area: float = 0.0
    negative_area: float = 0.0
    shift: int = 0

    @property
    def c_plus(self) -> int:
        return int(sum(self.c_plus_k))

    @property
    def c_minus(self) -> int:
        return int(sum(self.c_minus_k))

    @property
    def shape_residual(self) -> int:
        """I + 2C+ - 2C- - 2 - 2c, zero for a correctly normalized profile"""
        return self.i_turns + 2 * self.c_plus - 2 * self.c_minus - 2 - 2 * self.c_parity

    def to_dict(self) -> dict:
        return {
            'winding': {str(k): v for k, v in sorted(self.winding.items())},
            'c_plus_k': list(self.c_plus_k),
            'c_minus_k': list(self.c_minus_k),
            'c_plus': self.c_plus,
            'c_minus': self.c_minus,
            'i_turns': self.i_turns,
            'c_parity': self.c_parity,
            'algebraic_area': self.algebraic_area,
            'positive_area': self.positive_area,
            'negative_area': self.negative_area
        }


@dataclass
class ShapeClassification:
    """Shape of a simple Gauss image"""

    kind: str
    corners: List[int] = field(default_factory=list)
    variant: Optional[str] = None

    CONVEX = 'ConvexPolygon'
    QUADRILATERAL = 'PseudoQuadrilateral'
    TRIANGLE = 'PseudoTriangle'
    DIGON = 'PseudoDigon'
    UNCLASSIFIED = 'Unclassified'

    def to_dict(self) -> dict:
        data = {'kind': self.kind, 'corners': list(self.corners)}
        if self.variant is not None:
            data['variant'] = self.variant
        return data
