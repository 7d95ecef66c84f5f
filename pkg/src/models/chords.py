"""Data model for equator chord diagrams"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from ..exceptions import InvalidDiagram


Chord = Tuple[int, int]


def chords_cross(c1: Chord, c2: Chord) -> bool:
    """True if two chords between circle positions interleave"""
    a, b = sorted(c1)
    c, d = sorted(c2)
    return (a < c < b) != (a < d < b) and len({a, b, c, d}) == 4


@dataclass(frozen=True)
class ChordDiagram:
    """How a polygon crosses the equator of a direction

    Traversal point k (counted from 0) sits at equator position pi[k], positions
    numbered 1..2r counterclockwise around the direction starting at the first
    upward crossing. Chord j joins traversal points j and j + 1 (cyclically);
    even j are upper chords.
    """

    r: int
    pi: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'pi', tuple(int(p) for p in self.pi))
        if self.r < 0:
            raise InvalidDiagram(f"negative chord count {self.r}")
        if len(self.pi) != 2 * self.r:
            raise InvalidDiagram(f"expected {2 * self.r} equator points, got {len(self.pi)}")
        if self.r == 0:
            return
        if sorted(self.pi) != list(range(1, 2 * self.r + 1)):
            raise InvalidDiagram("pi is not a permutation of 1..2r")
        if self.pi[0] != 1:
            raise InvalidDiagram("pi must start at position 1")
        for hemisphere in (self.upper_chords, self.lower_chords):
            for i in range(len(hemisphere)):
                for j in range(i + 1, len(hemisphere)):
                    if chords_cross(hemisphere[i], hemisphere[j]):
                        raise InvalidDiagram(
                            f"chords {hemisphere[i]} and {hemisphere[j]} cross",
                            {'chords': [list(hemisphere[i]), list(hemisphere[j])]})

    @property
    def is_empty(self) -> bool:
        return self.r == 0

    @property
    def upper_chords(self) -> List[Chord]:
        """Equator position pairs of the chords above the equator"""
        return [(self.pi[2 * i], self.pi[2 * i + 1]) for i in range(self.r)]

    @property
    def lower_chords(self) -> List[Chord]:
        """Equator position pairs of the chords below the equator"""
        n = 2 * self.r
        return [(self.pi[2 * i + 1], self.pi[(2 * i + 2) % n]) for i in range(self.r)]

    def chord(self, j: int) -> Chord:
        n = 2 * self.r
        return self.pi[j % n], self.pi[(j + 1) % n]

    def is_upper(self, j: int) -> bool:
        return j % 2 == 0

    @property
    def index(self) -> int:
        return 1 - self.r

    def is_free(self, chord: Chord) -> bool:
        """True if the chord joins equator-adjacent positions"""
        if self.r == 0:
            return False
        gap = abs(chord[0] - chord[1])
        return gap == 1 or gap == 2 * self.r - 1

    def to_dict(self) -> dict:
        return {
            'r': self.r,
            'pi': list(self.pi),
            'upper': [list(c) for c in self.upper_chords],
            'lower': [list(c) for c in self.lower_chords]
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'ChordDiagram':
        diagram = cls(int(data['r']), tuple(data.get('pi', ())))
        for key, chords in (('upper', diagram.upper_chords), ('lower', diagram.lower_chords)):
            given = data.get(key)
            if given is not None and [tuple(c) for c in given] != chords:
                raise InvalidDiagram(f"'{key}' chords do not match pi")
        return diagram

    @classmethod
    def empty(cls) -> 'ChordDiagram':
        return cls(0, ())

    @classmethod
    def from_positions(cls, positions: Sequence[int]) -> 'ChordDiagram':
        return cls(len(positions) // 2, tuple(positions))


@dataclass(frozen=True)
class ChordSigns:
    """Signs of the upper chords relative to a free anchor chord"""

    anchor: int
    n_plus: int
    n_minus: int

    @property
    def r(self) -> int:
        return 1 + self.n_plus + self.n_minus

    def to_dict(self) -> dict:
        return {'anchor': self.anchor, 'n_plus': self.n_plus, 'n_minus': self.n_minus}
