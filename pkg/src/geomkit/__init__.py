"""geomkit: finite incidence geometry engine.

Construction of Grassmann, polar and half-spin geometries over small
finite fields, chamber-system machinery, sheaf extension over locally
truncated geometries, and exhaustive/sampled verifiers for their
structural properties.
"""

__version__ = "0.1.0"
