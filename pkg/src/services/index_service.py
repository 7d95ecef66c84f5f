"""Service for critical point indices with respect to height directions"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple

import numpy as np

from ..exceptions import NotGeneral
from ..models.index import HeightDirection, IndexReport, MonteCarloEstimate
from ..models.spherical import SphericalPolygon, as_unit
from ..models.star import VertexStar
from .spherical_service import SphericalService
from .star_service import StarService


def sign_changes(heights: np.ndarray) -> np.ndarray:
    """Number of sign changes around each cyclic row of heights"""
    signs = np.sign(heights)
    return np.sum(signs != np.roll(signs, -1, axis=-1), axis=-1)


class IndexService:
    """Service computing above and middle vertex indices"""

    CHUNK = 100000

    def __init__(self, star_service: StarService, spherical_service: SphericalService):
        self.stars = star_service
        self.spherical = spherical_service
        self.eps = spherical_service.eps
        self.logger = logging.getLogger('GaussMap.IndexService')

    def _directions(self, s: VertexStar) -> np.ndarray:
        dirs, _, _ = self.stars.subdivided_directions(s)
        return dirs

    # Generality

    def is_general(self, xi, s: VertexStar) -> HeightDirection:
        """Checks that no neighbour of the center shares its height

        The margin is the smallest height of a unit direction from the center.
        """
        xi = as_unit(xi, self.eps)
        margin = float(np.min(np.abs(self._directions(s) @ xi)))
        return HeightDirection(xi=xi, generality_margin=margin, general=margin > self.eps)

    def is_admissible(self, xi, w: SphericalPolygon) -> bool:
        """True if w meets the equator of xi only in transversal vertex crossings"""
        xi = as_unit(xi, self.eps)
        h = w.vertices @ xi
        on_equator = np.abs(h) <= self.eps
        for k in np.flatnonzero(on_equator):
            before, after = h[k - 1], h[(k + 1) % w.n]
            if on_equator[k - 1] or on_equator[(k + 1) % w.n] or before * after >= 0:
                return False
        return True

    def _require_general(self, xi, s: VertexStar) -> np.ndarray:
        direction = self.is_general(xi, s)
        if not direction.general:
            raise NotGeneral(
                f"direction is not general for the star (margin {direction.generality_margin:.3e})",
                {'margin': direction.generality_margin})
        return direction.xi

    # Indices

    def above_index(self, s: VertexStar, xi) -> int:
        """1 minus the edges below the center plus the face corners below it"""
        xi = self._require_general(xi, s)
        below = (self._directions(s) @ xi) < 0
        edges_below = int(np.sum(below))
        faces_below = int(np.sum(below & np.roll(below, -1)))
        return 1 - edges_below + faces_below

    def middle_count(self, s: VertexStar, xi) -> int:
        """Faces in which the center is strictly between its two face neighbours

        A reflex face is split at its bisector, so it contributes twice when both
        of its edges leave on the same side and once otherwise.
        """
        xi = self._require_general(xi, s)
        return int(sign_changes(self._directions(s) @ xi))

    def middle_vertex_index(self, s: VertexStar, xi) -> IndexReport:
        above = self.above_index(s, xi)
        middle = self.middle_count(s, xi)
        return IndexReport(above_index=above, middle_count=middle, agrees=above == 1 - middle // 2)

    def index(self, s: VertexStar, xi) -> int:
        return self.above_index(s, xi)

    def polygon_index(self, w: SphericalPolygon, xi) -> int:
        """Index of the star projecting to w"""
        xi = as_unit(xi, self.eps)
        h = w.vertices @ xi
        if np.min(np.abs(h)) <= self.eps:
            raise NotGeneral("a polygon vertex lies on the equator of the direction")
        return int(1 - sign_changes(h) // 2)

    def index_continuity_check(self, s: VertexStar, xi, seed: Optional[int] = None) -> bool:
        """Index is unchanged when xi moves by a tenth of its generality margin"""
        direction = self.is_general(xi, s)
        if not direction.general:
            raise NotGeneral("direction is not general for the star")
        rng = np.random.default_rng(seed)
        tangent = rng.standard_normal(3)
        tangent -= np.dot(tangent, direction.xi) * direction.xi
        tangent /= np.linalg.norm(tangent)
        moved = direction.xi + 0.1 * direction.generality_margin * tangent
        return self.above_index(s, moved) == self.above_index(s, direction.xi)

    # Monte Carlo integration

    def _sample_indices(self, dirs: np.ndarray, n: int, rng: np.random.Generator) -> Tuple[float, float, int]:
        """Sum and sum of squares of indices over n uniform general directions"""
        total, squares, rejected = 0.0, 0.0, 0
        remaining = n
        while remaining > 0:
            size = min(self.CHUNK, remaining)
            xi = self.spherical.random_unit_vectors(size, rng)
            heights = xi @ dirs.T
            general = np.min(np.abs(heights), axis=1) > self.eps
            rejected += int(size - np.count_nonzero(general))
            idx = 1.0 - sign_changes(heights[general]) / 2.0
            total += float(np.sum(idx))
            squares += float(np.sum(idx * idx))
            remaining -= int(np.count_nonzero(general))
        return total, squares, rejected

    def curvature_by_index_integration(self, s: VertexStar, n_samples: int, seed: int,
                                       jobs: int = 1) -> MonteCarloEstimate:
        """Half the integral of the index over the sphere, estimated by sampling

        Worker seeds are spawned from the master seed, so the estimate only
        depends on the seed and the number of jobs.
        """
        if n_samples < 1000:
            raise ValueError("n_samples must be at least 1000")
        dirs = self._directions(s)
        jobs = max(1, int(jobs))
        children = np.random.SeedSequence(seed).spawn(jobs)
        shares = [n_samples // jobs + (1 if j < n_samples % jobs else 0) for j in range(jobs)]

        def work(j: int) -> Tuple[float, float, int]:
            return self._sample_indices(dirs, shares[j], np.random.default_rng(children[j]))

        if jobs == 1:
            results = [work(0)]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(work, range(jobs)))

        total = sum(r[0] for r in results)
        squares = sum(r[1] for r in results)
        rejected = sum(r[2] for r in results)
        mean = total / n_samples
        variance = max(0.0, (squares - n_samples * mean * mean) / (n_samples - 1))
        if rejected:
            self.logger.warning(f"redrew {rejected} non-general directions")

        return MonteCarloEstimate(
            estimate=2.0 * np.pi * mean,
            std_error=2.0 * np.pi * np.sqrt(variance / n_samples),
            n_samples=n_samples,
            seed=seed,
            jobs=jobs,
            rejected=rejected,
            target=self.stars.angle_deficit(s)
        )
