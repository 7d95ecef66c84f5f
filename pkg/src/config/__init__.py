"""Configuration for the Discrete Gauss Map Toolkit"""

from .settings import Settings, get_settings, reload_settings

__all__ = ['Settings', 'get_settings', 'reload_settings']
