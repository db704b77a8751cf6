"""Numerical upper and lower bounds for the sharp constant G_n in the Kato
inequality ``|<v.grad w | w>_n| <= G_n |v|_n |w|_n^2`` for divergence-free
Sobolev fields on the d-dimensional torus.

Modules
  fields      spectral vector fields, Sobolev products, advection
  kernel      scalar kernels, their Taylor data and remainder extrema
  gfunction   the lattice function G_n(k), its bracket and the bound G+
  lowerbound  trial-family lower bounds G-
  optimize    grid + Nelder-Mead search utilities
  verify      seeded property suites
  cli         the ``katobounds`` command
"""

__version__ = "0.1.0"

from .fields import SpectralField, advect, leray_project, sobolev_inner, sobolev_norm, trilinear  # noqa: E402,F401
from .gfunction import CutoffConfig, default_config, gamma, sup_bracket, upper_bound_g  # noqa: E402,F401
from .lowerbound import REFERENCE_PARAMS, TrialParams, twelve_mode_family, g_lower, optimize_lower  # noqa: E402,F401
