"""Tests package for the Discrete Gauss Map Toolkit

Test structure:
- test_models.py: value types, input schemas, settings and errors
- test_spherical.py, test_star.py, test_index.py: geometric kernel
- test_arrangement.py, test_degree.py: winding numbers and normal degree
- test_chords.py: chord diagrams and realization
- test_mesh.py: OFF meshes, curvature sums and critical points
- test_controllers.py: command line commands
- test_integration.py, test_properties.py: suites and randomized properties
"""

__version__ = '1.0.0'
