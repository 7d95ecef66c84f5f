"""Discrete Gauss Map Toolkit - Gauss images, indices and normal degrees of polyhedral surfaces"""

__version__ = "1.0.0"
__author__ = "Discrete Gauss Map Toolkit Team"
