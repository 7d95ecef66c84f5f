"""Input file schemas, validated before conversion to model objects"""

from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..exceptions import ParseError


Point = List[float]


def _check_point(p: Point) -> Point:
    if len(p) != 3:
        raise ValueError(f"points need 3 coordinates, got {len(p)}")
    return p


class StarInput(BaseModel):
    """Vertex star file: center, ring and optional corner chains"""

    model_config = ConfigDict(extra='forbid')

    center: Point
    ring: List[Point] = Field(min_length=3)
    faces: Optional[List[List[Point]]] = None

    @field_validator('center')
    @classmethod
    def center_is_point(cls, v: Point) -> Point:
        return _check_point(v)

    @field_validator('ring')
    @classmethod
    def ring_points(cls, v: List[Point]) -> List[Point]:
        return [_check_point(p) for p in v]

    @model_validator(mode='after')
    def faces_match_ring(self) -> 'StarInput':
        if self.faces is not None:
            if len(self.faces) != len(self.ring):
                raise ValueError("'faces' must hold one corner chain per ring vertex")
            for chain in self.faces:
                if len(chain) < 3:
                    raise ValueError("corner chains need at least 3 points")
                for p in chain:
                    _check_point(p)
        return self


class PolygonInput(BaseModel):
    """Spherical polygon file: a bare vertex array or an object holding one"""

    model_config = ConfigDict(extra='ignore')

    vertices: List[Point] = Field(min_length=3)

    @field_validator('vertices')
    @classmethod
    def vertex_points(cls, v: List[Point]) -> List[Point]:
        return [_check_point(p) for p in v]


class DiagramInput(BaseModel):
    """Chord diagram file"""

    model_config = ConfigDict(extra='forbid')

    r: int = Field(ge=0)
    pi: List[int]
    upper: Optional[List[List[int]]] = None
    lower: Optional[List[List[int]]] = None


def parse_star(data: dict) -> dict:
    """Validates star input and returns plain data"""
    try:
        return StarInput.model_validate(data).model_dump(exclude_none=True)
    except ValidationError as e:
        raise ParseError(f"invalid star input: {e.errors()[0]['msg']}") from e


def parse_polygon(data: Union[list, dict]) -> dict:
    """Validates polygon input and returns {'vertices': [...]}"""
    if isinstance(data, list):
        data = {'vertices': data}
    try:
        return PolygonInput.model_validate(data).model_dump()
    except ValidationError as e:
        raise ParseError(f"invalid polygon input: {e.errors()[0]['msg']}") from e


def parse_diagram(data: dict) -> dict:
    """Validates chord diagram input and returns plain data"""
    try:
        return DiagramInput.model_validate(data).model_dump(exclude_none=True)
    except ValidationError as e:
        raise ParseError(f"invalid chord diagram input: {e.errors()[0]['msg']}") from e
