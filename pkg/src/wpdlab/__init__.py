"""wpdlab: two-path interferometer simulations with polarization which-way
markers, wave-particle duality functionals, and Monte Carlo photon counting."""

__version__ = "0.1.0"

from . import (  # noqa: F401
    duality,
    errors,
    interferometer,
    linalg,
    montecarlo,
    polarization,
    purification,
)
