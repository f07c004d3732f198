"""Exact bound states of the single ring-shaped Coulomb potential.

Submodules
----------
specfun   real-order Legendre functions, terminating hypergeometric series, gamma
model     quantum numbers, deformed spherical harmonics, radial functions, density
grid      Cartesian density blocks, iso levels, meshes, yoz contour slices
expand    expansion of deformed harmonics over ordinary spherical harmonics
checks    the invariant suite behind ``ringcoulomb check``
"""

__version__ = "0.1.0"

from .exceptions import ConvergenceError, DomainError  # noqa: E402
from .model import (  # noqa: E402
    QuantumState,
    QuasiNumbers,
    angular_H,
    conjugation_pair,
    deformed_Ylm,
    density,
    derive_quasi,
    energy,
    mean_radius,
    radial_u,
)

__all__ = [
    "__version__",
    "ConvergenceError",
    "DomainError",
    "QuantumState",
    "QuasiNumbers",
    "angular_H",
    "conjugation_pair",
    "deformed_Ylm",
    "density",
    "derive_quasi",
    "energy",
    "mean_radius",
    "radial_u",
]
