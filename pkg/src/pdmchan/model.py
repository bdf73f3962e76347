"""Physical model: solitonic mass profile, ordering-dependent potential shift
and the two semi-infinite channel geometries.

Units are hbar = 2 m0 = 1 throughout, so energies carry units of q**2.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError

__all__ = [
    "Geometry",
    "AmbiguityParams",
    "MassProfile",
    "ChannelModel",
    "BEN_DANIEL_DUKE",
    "mass",
    "shift_coefficients",
    "effective_potential_shift",
    "potential_x",
    "reduced_x_potential",
]


class Geometry(str, enum.Enum):
    PARALLELEPIPEDAL = "parallel"
    CYLINDRICAL = "cylinder"


@dataclass(frozen=True)
class AmbiguityParams:
    """von Roos ordering parameters; gamma follows from alpha + beta + gamma = -1."""

    alpha: float = 0.0
    beta: float = -1.0

    @property
    def gamma(self) -> float:
        return -1.0 - self.alpha - self.beta


BEN_DANIEL_DUKE = AmbiguityParams(0.0, -1.0)


@dataclass(frozen=True)
class MassProfile:
    """M(x) = sech^2(q x)."""

    q: float

    def __post_init__(self):
        if not (self.q > 0.0 and math.isfinite(self.q)):
            raise ConfigurationError(f"q must be positive and finite, got {self.q}")

    def __call__(self, x):
        c = np.cosh(self.q * np.asarray(x, dtype=float))
        out = 1.0 / (c * c)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class ChannelModel:
    geometry: Geometry
    q: float = 1.0
    k: float = 1.0
    R: float | None = None
    ambiguity: AmbiguityParams = field(default_factory=AmbiguityParams)

    def __post_init__(self):
        object.__setattr__(self, "geometry", Geometry(self.geometry))
        for name in ("q", "k"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ConfigurationError(f"{name} must be positive and finite, got {v}")
        if self.geometry is Geometry.CYLINDRICAL:
            if self.R is None or not (self.R > 0.0 and math.isfinite(self.R)):
                raise ConfigurationError(f"cylinder radius R must be positive, got {self.R}")
        elif self.R is not None:
            raise ConfigurationError("R only applies to the cylindrical geometry")

    @classmethod
    def parallel(cls, q=1.0, k=1.0, alpha=0.0, beta=-1.0) -> "ChannelModel":
        return cls(Geometry.PARALLELEPIPEDAL, q, k, None, AmbiguityParams(alpha, beta))

    @classmethod
    def cylinder(cls, q=1.0, k=1.0, R=1.0, alpha=0.0, beta=-1.0) -> "ChannelModel":
        return cls(Geometry.CYLINDRICAL, q, k, R, AmbiguityParams(alpha, beta))

    @property
    def profile(self) -> MassProfile:
        return MassProfile(self.q)

    @property
    def half_width(self) -> float:
        """Half side of the square cross-section of the parallel channel."""
        return math.pi / (2.0 * self.q)

    @property
    def warnings(self) -> tuple[str, ...]:
        if self.k < 0.5:
            return (
                f"k={self.k} < 1/2: the csch^2 term is attractive and x^(1-k) is the "
                "more regular solution at x=0; finite-difference solves converge to "
                "the k -> 1-k branch, not to the closed form",
            )
        return ()


def mass(model: ChannelModel, x):
    return model.profile(x)


def shift_coefficients(ambiguity: AmbiguityParams) -> tuple[float, float]:
    """Coefficients (c_cosh, c_const) of the ordering-dependent shift.

    The shift is -2 q^2 c_cosh cosh^2(qx) + q^2 c_const.
    """
    a, b = ambiguity.alpha, ambiguity.beta
    t = a * (a + b + 1.0)
    return 2.0 * t + b + 1.0, 4.0 * t + b + 1.0


def effective_potential_shift(model: ChannelModel, x):
    """Part of V_eff generated by moving the ordering parameters out of T."""
    c_cosh, c_const = shift_coefficients(model.ambiguity)
    q2 = model.q * model.q
    c = np.cosh(model.q * np.asarray(x, dtype=float))
    out = -2.0 * q2 * c_cosh * c * c + q2 * c_const
    return out if out.ndim else float(out)


def _positive(x):
    xa = np.asarray(x, dtype=float)
    if np.any(~(xa > 0.0)):
        raise DomainError("x must be strictly positive (the channel is closed at x = 0)")
    return xa


def potential_x(model: ChannelModel, x):
    """V_eff,1(x) = -q^2 cosh^2(qx) + q^2 k(k-1) csch^2(qx) for x > 0."""
    xa = _positive(x)
    q, k = model.q, model.k
    c, s = np.cosh(q * xa), np.sinh(q * xa)
    out = q * q * (-c * c + k * (k - 1.0) / (s * s))
    return out if out.ndim else float(out)


def reduced_x_potential(model: ChannelModel, delta: float, x):
    """W(x) of the separated problem -(cosh^2(qx) phi')' + W phi = E phi."""
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    xa = _positive(x)
    q, k = model.q, model.k
    c, s = np.cosh(q * xa), np.sinh(q * xa)
    out = q * q * ((delta * delta - 1.0) * c * c + k * (k - 1.0) / (s * s))
    return out if out.ndim else float(out)
