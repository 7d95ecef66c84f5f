"""Shared application instance for unittest-style test cases"""

import os
import sys
from functools import lru_cache

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.config.settings import Settings
from src.controllers.app_controller import AppController

DATA_DIR = os.path.join(os.path.dirname(__file__), '..', 'data')


@lru_cache(maxsize=1)
def get_app() -> AppController:
    """AppController with default settings and untouched logging"""
    settings = Settings(os.path.join(os.path.dirname(__file__), 'no_config.json'))
    return AppController(settings, configure_logging=False)


def data_file(name: str) -> str:
    return os.path.join(DATA_DIR, name)
