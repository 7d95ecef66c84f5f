"""Seeded property suites over random stars, polygons and fixture meshes"""

import logging
from typing import Callable, Dict, List, Sequence

import numpy as np
import pandas as pd

from ..exceptions import GaussMapError, IdentityViolation, InconsistentCycle, NoConsistentShift
from ..models.mesh import ClosedMesh
from ..models.spherical import SphericalPolygon
from ..models.star import VertexStar
from .arrangement_service import ArrangementService
from .chord_service import ChordService
from .degree_service import DegreeService
from .fixture_service import FixtureService
from .index_service import IndexService
from .mesh_service import MeshService
from .spherical_service import SphericalService
from .star_service import StarService


SUITES = ('egregium', 'egregium2', 'shape-formula', 'degree-winding', 'chord-oracle',
          'gauss-bonnet', 'index-sum', 'degree-sum', 'index-agreement')

SUMMARY_COLUMNS = ['suite', 'passed', 'failed', 'skipped', 'max_residual', 'seed']

# Raised when an identity itself breaks, as opposed to a degenerate random draw
FAILURES = (IdentityViolation, NoConsistentShift, InconsistentCycle)


class VerificationService:
    """Runs the identity suites behind the verify command"""

    def __init__(self, spherical_service: SphericalService, star_service: StarService,
                 index_service: IndexService, arrangement_service: ArrangementService,
                 degree_service: DegreeService, chord_service: ChordService,
                 mesh_service: MeshService, fixture_service: FixtureService,
                 area_tolerance: float = 1e-8, gauss_bonnet_tolerance: float = 1e-9,
                 max_redraws: int = 50):
        self.spherical = spherical_service
        self.stars = star_service
        self.indices = index_service
        self.arrangements = arrangement_service
        self.degrees = degree_service
        self.chords = chord_service
        self.meshes = mesh_service
        self.fixtures = fixture_service
        self.area_tolerance = area_tolerance
        self.gauss_bonnet_tolerance = gauss_bonnet_tolerance
        self.max_redraws = max_redraws
        self.logger = logging.getLogger('GaussMap.VerificationService')

        self._cases: Dict[str, Callable[[np.random.Generator, int], float]] = {
            'egregium': self._egregium_case,
            'egregium2': self._egregium2_case,
            'shape-formula': self._shape_formula_case,
            'degree-winding': self._degree_winding_case,
            'chord-oracle': self._chord_oracle_case,
            'gauss-bonnet': self._gauss_bonnet_case,
            'index-sum': self._index_sum_case,
            'degree-sum': self._degree_sum_case,
            'index-agreement': self._index_agreement_case
        }
        self._tolerances = {
            'egregium': area_tolerance,
            'egregium2': area_tolerance,
            'gauss-bonnet': gauss_bonnet_tolerance
        }
        self._mesh_pool: List[ClosedMesh] = []

    # Generators

    def random_embedded_star(self, rng: np.random.Generator, valence: int) -> VertexStar:
        """Star over the xy plane with sorted ring azimuths, convex or saddle-like

        Every azimuth gap stays below pi, so the star is a graph over the plane
        and therefore embedded.
        """
        if valence < 3:
            raise ValueError("valence must be at least 3")
        for _ in range(self.max_redraws):
            azimuth = np.sort(rng.uniform(0.0, 2.0 * np.pi, valence))
            gaps = np.diff(np.append(azimuth, azimuth[0] + 2.0 * np.pi))
            if np.max(gaps) < 0.9 * np.pi:
                break
        else:
            azimuth = 2.0 * np.pi * (np.arange(valence) + rng.uniform(0.0, 0.5)) / valence

        radius = rng.uniform(0.5, 1.5, valence)
        if rng.random() < 0.5:
            heights = -rng.uniform(0.2, 1.0, valence)
        else:
            heights = rng.normal(0.0, 0.6, valence)
        ring = np.column_stack([radius * np.cos(azimuth), radius * np.sin(azimuth), heights])
        return self.stars.star_from_ring(np.zeros(3), ring)

    def random_immersed_polygon(self, rng: np.random.Generator, n: int) -> SphericalPolygon:
        """Polygon through n uniform points, redrawn until it is in general position"""
        for _ in range(self.max_redraws):
            w = self.spherical.polygon(self.spherical.random_unit_vectors(n, rng))
            if self.spherical.is_general_position(w):
                return w
        raise GaussMapError(f"no polygon in general position after {self.max_redraws} draws")

    def random_simple_polygon(self, rng: np.random.Generator, n: int) -> SphericalPolygon:
        """Polygon star-shaped around a random center, inside the hemisphere of that center"""
        for _ in range(self.max_redraws):
            azimuth = np.sort(rng.uniform(0.0, 2.0 * np.pi, n))
            gaps = np.diff(np.append(azimuth, azimuth[0] + 2.0 * np.pi))
            if np.max(gaps) < 0.9 * np.pi:
                break
        else:
            azimuth = 2.0 * np.pi * np.arange(n) / n
        colatitude = rng.uniform(0.15, 1.3, n)
        local = np.column_stack([np.sin(colatitude) * np.cos(azimuth),
                                 np.sin(colatitude) * np.sin(azimuth),
                                 np.cos(colatitude)])
        rotation = self.spherical.random_rotation(rng)
        return self.spherical.polygon(local @ rotation.T)

    def _random_direction(self, rng: np.random.Generator) -> np.ndarray:
        return self.spherical.random_unit_vectors(1, rng)[0]

    def _random_star(self, rng: np.random.Generator, case: int) -> VertexStar:
        """Embedded star on even cases, cone over an immersed polygon on odd ones"""
        if case % 2 == 0:
            return self.random_embedded_star(rng, int(rng.integers(4, 13)))
        return self.stars.star_from_polygon(self.random_immersed_polygon(rng, int(rng.integers(4, 9))))

    def _meshes(self, rng: np.random.Generator) -> List[ClosedMesh]:
        if not self._mesh_pool:
            self._mesh_pool = [
                self.fixtures.tetrahedron(),
                self.fixtures.grid_torus(seed=int(rng.integers(2 ** 31))),
                self.fixtures.icosphere(level=1, seed=int(rng.integers(2 ** 31)))
            ]
        return self._mesh_pool

    # Cases; each returns a residual and raises on a broken identity

    def _egregium_case(self, rng: np.random.Generator, case: int) -> float:
        s = self.random_embedded_star(rng, int(rng.integers(4, 13)))
        return abs(self.arrangements.star_algebraic_area(s) - self.stars.angle_deficit(s))

    def _egregium2_case(self, rng: np.random.Generator, case: int) -> float:
        w = self.random_immersed_polygon(rng, int(rng.integers(3, 9)))
        _, profile = self.arrangements.profile_for_polygon(w)
        expected = 2.0 * np.pi * (1 + profile.c_parity) - self.spherical.polygon_length(w)
        return abs(profile.algebraic_area - expected)

    def _shape_formula_case(self, rng: np.random.Generator, case: int) -> float:
        if case % 3 == 2:
            fixtures = list(self.fixtures.star_fixtures().values())
            s = fixtures[(case // 3) % len(fixtures)]()
            _, profile = self.arrangements.profile_for_star(s)
        else:
            w = self.random_immersed_polygon(rng, int(rng.integers(3, 9)))
            _, profile = self.arrangements.profile_for_polygon(w)
        return float(abs(profile.shape_residual))

    def _degree_winding_case(self, rng: np.random.Generator, case: int) -> float:
        if case % 2 == 0:
            w = self.random_immersed_polygon(rng, int(rng.integers(3, 9)))
        else:
            s = self.random_embedded_star(rng, int(rng.integers(4, 13)))
            w = self.stars.project_to_sphere(s)
        self.degrees.degree_identities(w, self._random_direction(rng))
        return 0.0

    def _chord_oracle_case(self, rng: np.random.Generator, case: int) -> float:
        w = self.random_simple_polygon(rng, int(rng.integers(4, 13)))
        for _ in range(self.max_redraws):
            xi = self._random_direction(rng)
            diagram = self.chords.extract_diagram(w, xi)
            if not diagram.is_empty:
                break
        else:
            raise GaussMapError("polygon never crosses the equator of a drawn direction")
        signs = self.chords.chord_signs(diagram)
        index, degree = self.chords.degree_from_diagram(signs)
        measured_index = self.indices.polygon_index(w, xi)
        measured_degree = self.degrees.normal_degree(w, xi)
        return float(abs(index - measured_index) + abs(degree - measured_degree))

    def _gauss_bonnet_case(self, rng: np.random.Generator, case: int) -> float:
        seed = int(rng.integers(2 ** 31))
        builders = (self.fixtures.tetrahedron,
                    lambda: self.fixtures.grid_torus(seed=seed),
                    lambda: self.fixtures.icosphere(level=1, seed=seed))
        return abs(self.meshes.gauss_bonnet_check(builders[case % 3]()))

    def _index_sum_case(self, rng: np.random.Generator, case: int) -> float:
        pool = self._meshes(rng)
        mesh = pool[case % len(pool)]
        xi = self.meshes.general_direction(mesh, self._random_direction(rng), seed=rng)
        total, chi = self.meshes.index_sum_check(mesh, xi)
        return float(abs(total - chi))

    def _degree_sum_case(self, rng: np.random.Generator, case: int) -> float:
        pool = self._meshes(rng)
        mesh = pool[case % len(pool)]
        xi = self.meshes.general_direction(mesh, self._random_direction(rng), seed=rng)
        return float(abs(self.meshes.degree_sum_check(mesh, xi)))

    def _index_agreement_case(self, rng: np.random.Generator, case: int) -> float:
        s = self._random_star(rng, case)
        report = self.indices.middle_vertex_index(s, self._random_direction(rng))
        return float(abs(report.above_index - report.middle_index))

    # Runner

    def run_suite(self, name: str, n: int, seed: int) -> dict:
        """Runs n cases of a suite; a case passes when its residual is within tolerance

        Draws that turn out degenerate (non-general directions, coplanar faces
        and the like) are redrawn; a case that stays degenerate is skipped.
        """
        if name not in self._cases:
            raise ValueError(f"unknown suite '{name}', expected one of {', '.join(SUITES)}")
        if n < 1:
            raise ValueError("n must be positive")

        case_fn = self._cases[name]
        tolerance = self._tolerances.get(name, 0.0)
        rng = np.random.default_rng(seed)
        self._mesh_pool = []
        passed = failed = skipped = 0
        max_residual = 0.0

        for case in range(n):
            for attempt in range(self.max_redraws):
                try:
                    residual = case_fn(rng, case)
                except FAILURES as e:
                    failed += 1
                    self.logger.warning(f"{name} case {case}: {e.code} {e.message}")
                    break
                except GaussMapError as e:
                    self.logger.debug(f"{name} case {case} draw {attempt} degenerate: {e.code}")
                    continue
                max_residual = max(max_residual, residual)
                if residual <= tolerance:
                    passed += 1
                else:
                    failed += 1
                    self.logger.warning(f"{name} case {case}: residual {residual:.3e}")
                break
            else:
                skipped += 1

        self.logger.info(f"suite {name}: {passed} passed, {failed} failed, {skipped} skipped")
        return {
            'suite': name,
            'passed': passed,
            'failed': failed,
            'skipped': skipped,
            'max_residual': float(max_residual),
            'seed': seed
        }

    def run_suites(self, names: Sequence[str], n: int, seed: int) -> List[dict]:
        return [self.run_suite(name, n, seed) for name in names]

    def summary(self, results: Sequence[dict]) -> pd.DataFrame:
        """One row per suite result"""
        return pd.DataFrame(list(results), columns=SUMMARY_COLUMNS)
