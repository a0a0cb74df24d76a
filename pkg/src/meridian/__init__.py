"""Potential meridional fields in cylindrically layered media.

Modules
-------
rq_algebra   reduced quaternions and the meridian half-plane
special_fn   Bessel functions J, Y, I, K of real order
radial_holo  radially holomorphic expressions and their calculus
field_core   fields, Jacobians, spectra and PDE residual checks
separable    GASP and bihyperbolic Bessel series, Stokes stream functions
families     named closed-form fields
dynamics     gradient flows, equilibria, nullclines and parameter scans
cli          the ``meridian`` command
"""

from .errors import *  # noqa: F401,F403
from .field_core import MeridionalField, field_eval, field_jacobian, spectrum  # noqa: F401
from .rq_algebra import MeridianValue, ReducedQuaternion  # noqa: F401

__version__ = "0.1.0"
