"""Main controller for the Discrete Gauss Map Toolkit"""

import logging
import sys
from pathlib import Path
from typing import Optional

from ..config.settings import Settings, get_settings
from ..services.arrangement_service import ArrangementService
from ..services.chord_service import ChordService
from ..services.degree_service import DegreeService
from ..services.fixture_service import FixtureService
from ..services.index_service import IndexService
from ..services.mesh_service import MeshService
from ..services.spherical_service import SphericalService
from ..services.star_service import StarService
from ..services.verification_service import VerificationService


class AppController:
    """Main controller that builds every service from one set of settings"""

    def __init__(self, settings: Optional[Settings] = None, configure_logging: bool = True):
        self.settings = settings or get_settings()
        if configure_logging:
            self._setup_logging()
        else:
            self.logger = logging.getLogger('GaussMap')
        self._initialize_services()

    def _setup_logging(self):
        """Configures the GaussMap logger tree; console output goes to stderr"""
        log_level = getattr(logging, str(self.settings.get('logging.level', 'WARNING')).upper(), logging.WARNING)
        if self.settings.debug_mode:
            log_level = logging.DEBUG

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )

        self.logger = logging.getLogger('GaussMap')
        self.logger.setLevel(log_level)
        self.logger.handlers.clear()
        self.logger.propagate = False

        if self.settings.get('logging.console_enabled', True):
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setFormatter(formatter)
            self.logger.addHandler(console_handler)

        if self.settings.get('logging.file_enabled', False):
            log_file = Path(self.settings.get('logging.file_path', 'logs/gaussmap.log'))
            log_file.parent.mkdir(parents=True, exist_ok=True)

            file_handler = logging.FileHandler(log_file, encoding='utf-8')
            file_handler.setFormatter(formatter)
            self.logger.addHandler(file_handler)

        self.logger.debug(f"Starting {self.settings.app_name} v{self.settings.app_version}")

    def _initialize_services(self):
        """Initializes all services, passing each its tolerances"""
        s = self.settings
        retries = s.max_direction_retries

        self.spherical_service = SphericalService(eps=s.eps_gen, angle_tolerance=s.angle_tolerance)
        self.star_service = StarService(self.spherical_service, planarity_tolerance=s.planarity_tolerance)
        self.index_service = IndexService(self.star_service, self.spherical_service)
        self.arrangement_service = ArrangementService(
            self.spherical_service, self.star_service, area_tolerance=s.area_tolerance
        )
        self.degree_service = DegreeService(
            self.spherical_service, self.star_service, self.index_service,
            self.arrangement_service, max_retries=retries
        )
        self.chord_service = ChordService(
            self.spherical_service, self.index_service, self.degree_service,
            base_offset=float(s.get('chords.base_offset', 0.37)),
            apex_base_deg=float(s.get('chords.apex_base_deg', 15.0)),
            apex_step_deg=float(s.get('chords.apex_step_deg', 12.0)),
            equator_lift_deg=float(s.get('chords.equator_lift_deg', 2.0)),
            max_enumeration_r=int(s.get('chords.max_enumeration_r', 6))
        )
        self.mesh_service = MeshService(
            self.spherical_service, self.star_service, self.index_service,
            self.degree_service, self.arrangement_service,
            gauss_bonnet_tolerance=s.gauss_bonnet_tolerance, max_retries=retries
        )
        self.fixture_service = FixtureService(
            self.spherical_service, self.star_service, self.mesh_service, self.chord_service
        )
        self.verification_service = VerificationService(
            self.spherical_service, self.star_service, self.index_service,
            self.arrangement_service, self.degree_service, self.chord_service,
            self.mesh_service, self.fixture_service,
            area_tolerance=s.area_tolerance, gauss_bonnet_tolerance=s.gauss_bonnet_tolerance
        )

        self.logger.debug("Services initialized")

    def get_settings(self) -> Settings:
        return self.settings
