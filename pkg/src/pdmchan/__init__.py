"""Exact and numerically verified bound states of a position-dependent-mass
particle in semi-infinite parallelepipedal and cylindrical channels."""

__version__ = "0.1.0"

from .analytic import (  # noqa: E402
    QuantumNumbers,
    SpectrumEntry,
    degeneracy_report,
    delta_cylinder,
    delta_parallel,
    energy,
    enumerate_spectrum,
    phi_x,
    psi,
)
from .model import AmbiguityParams, ChannelModel, Geometry  # noqa: E402

__all__ = [
    "__version__",
    "AmbiguityParams",
    "ChannelModel",
    "Geometry",
    "QuantumNumbers",
    "SpectrumEntry",
    "degeneracy_report",
    "delta_cylinder",
    "delta_parallel",
    "energy",
    "enumerate_spectrum",
    "phi_x",
    "psi",
]
