"""Data model for height directions and critical point indices"""

from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True, eq=False)
class HeightDirection:
    """A direction together with how far it is from being non-general"""

    xi: np.ndarray
    generality_margin: float
    general: bool

    def __bool__(self) -> bool:
        return self.general

    def to_dict(self) -> dict:
        return {
            'xi': np.asarray(self.xi).tolist(),
            'generality_margin': self.generality_margin,
            'general': self.general
        }


@dataclass
class IndexReport:
    """Above index and middle vertex count of one vertex for one direction"""

    above_index: int
    middle_count: int
    agrees: bool

    @property
    def middle_index(self) -> int:
        return 1 - self.middle_count // 2

    @property
    def kind(self) -> str:
        if self.above_index == 1:
            return 'extremum'
        if self.above_index == 0:
            return 'ordinary'
        return 'saddle'

    def to_dict(self) -> dict:
        return {
            'above_index': self.above_index,
            'middle_count': self.middle_count,
            'agrees': self.agrees
        }


@dataclass
class MonteCarloEstimate:
    """Curvature recovered by integrating the index over the sphere"""

    estimate: float
    std_error: float
    n_samples: int
    seed: int
    jobs: int = 1
    rejected: int = 0
    target: Optional[float] = None

    @property
    def z_score(self) -> Optional[float]:
        if self.target is None or self.std_error == 0:
            return None
        return (self.estimate - self.target) / self.std_error

    def to_dict(self) -> dict:
        return {
            'estimate': self.estimate,
            'std_error': self.std_error,
            'n_samples': self.n_samples,
            'seed': self.seed,
            'jobs': self.jobs,
            'rejected': self.rejected
        }
