"""Data model for closed oriented triangle meshes"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Set, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class ClosedMesh:
    """Triangle mesh; validity is checked by the mesh service, not here"""

    vertices: np.ndarray
    triangles: np.ndarray
    name: str = 'mesh'

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        tris = np.asarray(self.triangles, dtype=int).reshape(-1, 3)
        verts.setflags(write=False)
        tris.setflags(write=False)
        object.__setattr__(self, 'vertices', verts)
        object.__setattr__(self, 'triangles', tris)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_faces(self) -> int:
        return len(self.triangles)

    @property
    def edges(self) -> Set[Tuple[int, int]]:
        """Undirected edges as sorted index pairs"""
        result = set()
        for a, b, c in self.triangles:
            for u, v in ((a, b), (b, c), (c, a)):
                result.add((min(u, v), max(u, v)))
        return result

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def euler_characteristic(self) -> int:
        return self.num_vertices - self.num_edges + self.num_faces

    @property
    def bounding_diagonal(self) -> float:
        return float(np.linalg.norm(self.vertices.max(axis=0) - self.vertices.min(axis=0)))

    def to_dict(self) -> dict:
        return {
            'name': self.name,
            'vertices': self.vertices.tolist(),
            'triangles': self.triangles.tolist()
        }


@dataclass
class MeshReport:
    """Curvature, index and degree summary of a closed mesh"""

    chi: int
    total_curvature: float
    gauss_bonnet_residual: float
    num_vertices: int
    num_faces: int
    directions: List[List[float]] = field(default_factory=list)
    vertices: List[Dict[str, Any]] = field(default_factory=list)
    index_sums: List[int] = field(default_factory=list)
    degree_sums: List[int] = field(default_factory=list)
    three_critical: Optional[Dict[str, Any]] = None

    def to_dict(self) -> dict:
        data = {
            'chi': self.chi,
            'total_K': self.total_curvature,
            'gauss_bonnet_residual': self.gauss_bonnet_residual,
            'num_vertices': self.num_vertices,
            'num_faces': self.num_faces,
            'directions': self.directions,
            'index_sums': self.index_sums,
            'degree_sums': self.degree_sums,
            'vertices': self.vertices
        }
        if self.three_critical is not None:
            data['three_critical'] = self.three_critical
        return data
