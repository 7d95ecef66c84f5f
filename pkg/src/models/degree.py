"""Data model for normal degree reports"""

from dataclasses import dataclass


@dataclass
class DegreeReport:
    """Normal degree of a polygon together with the quantities it is tied to"""

    degree: int
    gamma_longitude: float
    index: int
    w_plus: int
    w_minus: int
    c_parity: int

    @property
    def winding_difference(self) -> int:
        return self.w_plus - self.w_minus

    @property
    def winding_sum(self) -> int:
        return self.w_plus + self.w_minus

    def to_dict(self) -> dict:
        return {
            'degree': self.degree,
            'gamma_longitude': self.gamma_longitude,
            'index': self.index,
            'w_plus': self.w_plus,
            'w_minus': self.w_minus,
            'c_parity': self.c_parity
        }
