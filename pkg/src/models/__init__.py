"""Data models for the Discrete Gauss Map Toolkit"""

from .spherical import Arc, SphericalPolygon, as_unit
from .star import Face, VertexStar, CurvatureParts
from .index import HeightDirection, IndexReport, MonteCarloEstimate
from .arrangement import Segment, Arrangement, LayerProfile, ShapeClassification
from .degree import DegreeReport
from .chords import ChordDiagram, ChordSigns
from .mesh import ClosedMesh, MeshReport

__all__ = [
    'Arc', 'SphericalPolygon', 'as_unit',
    'Face', 'VertexStar', 'CurvatureParts',
    'HeightDirection', 'IndexReport', 'MonteCarloEstimate',
    'Segment', 'Arrangement', 'LayerProfile', 'ShapeClassification',
    'DegreeReport',
    'ChordDiagram', 'ChordSigns',
    'ClosedMesh', 'MeshReport'
]
