"""Error hierarchy for the Discrete Gauss Map Toolkit

Every error carries a stable string code (used in the JSON error envelope of
the command line) and the process exit code the command line maps it to.
"""

from typing import Any, Dict, Optional


EXIT_USAGE = 1
EXIT_VALIDATION = 2


class GaussMapError(Exception):
    """Base class of all toolkit errors"""

    code = 'gauss_map_error'
    exit_code = EXIT_VALIDATION

    def __init__(self, message: str = '', details: Optional[Dict[str, Any]] = None):
        super().__init__(message or self.code)
        self.message = message or self.code
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """Converts the error to the JSON envelope payload"""
        payload = {'code': self.code, 'message': self.message}
        if self.details:
            payload['details'] = self.details
        return payload


# Spherical primitives

class DegenerateWedge(GaussMapError):
    code = 'degenerate_wedge'


class InvalidPolygon(GaussMapError):
    code = 'invalid_polygon'


class NotSimple(GaussMapError):
    code = 'not_simple'


class DegenerateEdge(GaussMapError):
    code = 'degenerate_edge'


class NonTransversal(GaussMapError):
    code = 'non_transversal'


class SharedGreatCircle(GaussMapError):
    code = 'shared_great_circle'


class DegenerateVertexOnEdge(GaussMapError):
    code = 'degenerate_vertex_on_edge'


class ZeroLengthEdge(GaussMapError):
    code = 'zero_length_edge'


class StraightVertex(GaussMapError):
    code = 'straight_vertex'


# Vertex stars

class InvalidStar(GaussMapError):
    code = 'invalid_star'


class AntipodalNormals(GaussMapError):
    code = 'antipodal_normals'


class NeighborOnPlane(GaussMapError):
    code = 'neighbor_on_plane'


# Index theory and degree

class NotGeneral(GaussMapError):
    code = 'not_general'


class NotAdmissible(GaussMapError):
    code = 'not_admissible'


class IdentityViolation(GaussMapError):
    """An identity that holds by theory failed: a kernel bug, not a user error"""

    code = 'identity_violation'

    def __init__(self, identity: str, message: str = '', details: Optional[Dict[str, Any]] = None):
        details = dict(details or {})
        details['identity'] = identity
        super().__init__(message or f"identity '{identity}' violated", details)
        self.identity = identity


# Arrangements and layers

class InconsistentCycle(GaussMapError):
    code = 'inconsistent_cycle'


class NoConsistentShift(GaussMapError):
    code = 'no_consistent_shift'


class SelfIntersectingGaussImage(GaussMapError):
    code = 'self_intersecting_gauss_image'


class ZeroCurvature(GaussMapError):
    code = 'zero_curvature'


# Chord diagrams

class InvalidDiagram(GaussMapError):
    code = 'invalid_diagram'


class AnchorNotFree(GaussMapError):
    code = 'anchor_not_free'


class Unrealizable(GaussMapError):
    code = 'unrealizable'


class InadmissiblePair(GaussMapError):
    code = 'inadmissible_pair'


# Meshes and input files

class ParseError(GaussMapError):
    code = 'parse_error'
    exit_code = EXIT_USAGE


class NonManifold(GaussMapError):
    code = 'non_manifold'


class NotClosed(GaussMapError):
    code = 'not_closed'


class InconsistentOrientation(GaussMapError):
    code = 'inconsistent_orientation'


class CoplanarFaces(GaussMapError):
    code = 'coplanar_faces'


class NotThreeCritical(GaussMapError):
    code = 'not_three_critical'


# Command line

class UsageError(GaussMapError):
    code = 'usage_error'
    exit_code = EXIT_USAGE
