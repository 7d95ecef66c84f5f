"""Controllers for the Discrete Gauss Map Toolkit"""

from .app_controller import AppController
from .command_controller import CommandController, build_parser

__all__ = ['AppController', 'CommandController', 'build_parser']
