"""Services for the Discrete Gauss Map Toolkit"""

from .spherical_service import SphericalService
from .star_service import StarService
from .index_service import IndexService
from .arrangement_service import ArrangementService
from .degree_service import DegreeService
from .chord_service import ChordService
from .mesh_service import MeshService
from .fixture_service import FixtureService
from .verification_service import VerificationService

__all__ = [
    'SphericalService', 'StarService', 'IndexService', 'ArrangementService',
    'DegreeService', 'ChordService', 'MeshService', 'FixtureService',
    'VerificationService'
]
