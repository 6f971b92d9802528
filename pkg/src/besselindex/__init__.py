"""Discrete index transforms with Bessel and Lommel kernels of imaginary order.

Submodules
----------
specfun
    Normalized ``J_{in}``, ``K_{in}`` and the Lommel function ``S_{mu, in}``.
quad
    Adaptive Gauss-Kronrod quadrature, exponential-decay and oscillatory
    improper integrals.
transforms
    Forward transforms, coefficient analysis and both inversions.
verify
    Numerical checks of identities, bounds, equations and roundtrips.
cli
    The ``besselindex`` command.
"""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:
    __version__ = "0.1.0"

from . import quad, specfun, transforms, verify  # noqa: E402
from .exceptions import (  # noqa: E402
    AccuracyError,
    AdmissibilityError,
    BesselIndexError,
    DomainError,
    ProfileClassError,
)
from .quad import EvalReport, QuadConfig  # noqa: E402
from .transforms import CoeffSeq, PeriodicProfile, TransformKind  # noqa: E402

__all__ = [
    "AccuracyError", "AdmissibilityError", "BesselIndexError", "CoeffSeq", "DomainError", "EvalReport",
    "PeriodicProfile", "ProfileClassError", "QuadConfig", "TransformKind", "__version__", "quad", "specfun",
    "transforms", "verify",
]
