"""Closed-form spectrum and eigenfunctions of both channel geometries."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import groupby

import numpy as np

from .errors import DomainError
from .model import ChannelModel, Geometry
from .specfun import JacobiParams, bessel_j, bessel_zero, jacobi_eval, log_gamma

__all__ = [
    "QuantumNumbers",
    "SpectrumEntry",
    "DegeneracyClass",
    "WavefunctionSample",
    "DEGENERACY_RTOL",
    "delta_parallel",
    "delta_cylinder",
    "delta_for",
    "energy",
    "log_norm_x",
    "phi_x",
    "chi_transverse",
    "chi_radial",
    "zeta_azimuthal",
    "psi",
    "enumerate_spectrum",
    "degeneracy_report",
]

DEGENERACY_RTOL = 1e-12
_BOX_SLACK = 1e-12


@dataclass(frozen=True)
class QuantumNumbers:
    """(n, l, m) for the parallel channel, (n, m, s) for the cylinder.

    Inapplicable fields are None: ``s`` for the parallel channel, ``l`` for
    the cylinder.
    """

    n: int
    m: int
    l: int | None = None
    s: int | None = None

    def __post_init__(self):
        if self.n < 0:
            raise DomainError(f"n must be >= 0, got {self.n}")
        if self.l is not None and self.s is not None:
            raise DomainError("l and s are mutually exclusive")
        if self.l is None and self.s is None:
            raise DomainError("one of l (parallel) or s (cylinder) is required")
        if self.l is not None and (self.l < 0 or self.m < 0):
            raise DomainError(f"l, m must be >= 0, got l={self.l}, m={self.m}")
        if self.s is not None and self.s < 1:
            raise DomainError(f"s must be >= 1, got {self.s}")

    @classmethod
    def parallel(cls, n: int, l: int, m: int) -> "QuantumNumbers":
        return cls(n=n, m=m, l=l)

    @classmethod
    def cylinder(cls, n: int, m: int, s: int) -> "QuantumNumbers":
        return cls(n=n, m=m, s=s)

    @property
    def is_parallel(self) -> bool:
        return self.l is not None

    def sort_key(self) -> tuple:
        if self.is_parallel:
            return (self.n, self.l, self.m)
        return (self.n, abs(self.m), self.s, 0 if self.m >= 0 else 1)

    def __str__(self):
        if self.is_parallel:
            return f"({self.n},{self.l},{self.m})"
        return f"({self.n},{self.m},{self.s})"


@dataclass(frozen=True)
class SpectrumEntry:
    qn: QuantumNumbers
    delta: float
    energy: float
    degeneracy_class: int


@dataclass(frozen=True)
class DegeneracyClass:
    class_id: int
    energy: float
    members: tuple[QuantumNumbers, ...]
    kind: str  # exchange | sign | accidental | none


@dataclass(frozen=True)
class WavefunctionSample:
    point: tuple[float, float, float]
    value: complex


def delta_parallel(l: int, m: int) -> float:
    if l < 0 or m < 0:
        raise DomainError(f"l, m must be >= 0, got l={l}, m={m}")
    return math.sqrt((l + 1) ** 2 + (m + 1) ** 2)


def delta_cylinder(model: ChannelModel, m: int, s: int) -> float:
    if model.geometry is not Geometry.CYLINDRICAL:
        raise DomainError("delta_cylinder needs a cylindrical model")
    return bessel_zero(abs(m), s).value / (model.q * model.R)


def delta_for(model: ChannelModel, qn: QuantumNumbers) -> float:
    if qn.is_parallel:
        return delta_parallel(qn.l, qn.m)
    return delta_cylinder(model, qn.m, qn.s)


def energy(model: ChannelModel, n: int, delta: float) -> float:
    """E = q^2 (2n + 1 + delta)(2n + 2k + delta)."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta}")
    return model.q * model.q * (2 * n + 1 + delta) * (2 * n + 2 * model.k + delta)


def log_norm_x(model: ChannelModel, n: int, delta: float) -> float:
    """log of the normalization constant of phi_x."""
    q, k = model.q, model.k
    return 0.5 * (
        math.log(2.0 * q * (2 * n + k + 0.5 + delta))
        + log_gamma(n + 1.0)
        + log_gamma(n + k + 0.5 + delta)
        - log_gamma(n + 1.0 + delta)
        - log_gamma(n + k + 0.5)
    )


def phi_x(model: ChannelModel, n: int, delta: float, x):
    """Normalized x-factor of the separated eigenfunction, for x >= 0."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0):
        raise DomainError("phi_x is defined for x >= 0")
    t = np.tanh(model.q * xa)
    sech = 1.0 / np.cosh(model.q * xa)
    poly = jacobi_eval(JacobiParams(model.k - 0.5, delta, n), 1.0 - 2.0 * t * t)
    out = math.exp(log_norm_x(model, n, delta)) * t**model.k * sech ** (1.0 + delta) * poly
    return out if out.ndim else float(out)


def chi_transverse(l: int, q: float, y):
    """Box mode on (-pi/2q, pi/2q): cos for even l, sin for odd l."""
    ya = np.asarray(y, dtype=float)
    if np.any(np.abs(ya) > math.pi / (2.0 * q) * (1.0 + _BOX_SLACK)):
        raise DomainError("y lies outside the channel cross-section")
    arg = (l + 1) * q * ya
    wave = np.cos(arg) if l % 2 == 0 else np.sin(arg)
    out = math.sqrt(2.0 * q / math.pi) * wave
    return out if out.ndim else float(out)


def chi_radial(model: ChannelModel, m: int, s: int, rho):
    """Radial disk mode, normalized with weight rho on [0, R]."""
    R = model.R
    ra = np.asarray(rho, dtype=float)
    if np.any(ra < 0.0) or np.any(ra > R * (1.0 + _BOX_SLACK)):
        raise DomainError("rho lies outside [0, R]")
    order = abs(m)
    j = bessel_zero(order, s).value
    norm = math.sqrt(2.0) / (R * bessel_j(order + 1, j))
    # the wall value is zero by construction, not to roundoff
    flat = np.array([0.0 if r == R else bessel_j(order, j * r / R) for r in np.atleast_1d(ra).ravel()])
    out = norm * flat.reshape(ra.shape)
    return out if out.ndim else float(out)


def zeta_azimuthal(m: int, phi: float) -> complex:
    return cmath.exp(1j * m * phi) / math.sqrt(2.0 * math.pi)


def psi(model: ChannelModel, qn: QuantumNumbers, point) -> complex | float:
    """Full 3D eigenfunction at ``point``: (x, y, z) or (x, rho, phi)."""
    x, u, v = (float(c) for c in point)
    if x < 0.0:
        raise DomainError("x < 0 lies outside the channel")
    delta = delta_for(model, qn)
    if model.geometry is Geometry.PARALLELEPIPEDAL:
        if not qn.is_parallel:
            raise DomainError("parallel channel needs (n, l, m) quantum numbers")
        return (
            phi_x(model, qn.n, delta, x)
            * chi_transverse(qn.l, model.q, u)
            * chi_transverse(qn.m, model.q, v)
        )
    if qn.is_parallel:
        raise DomainError("cylindrical channel needs (n, m, s) quantum numbers")
    return phi_x(model, qn.n, delta, x) * chi_radial(model, qn.m, qn.s, u) * zeta_azimuthal(qn.m, v)


def _exact_key(qn: QuantumNumbers) -> tuple:
    # E depends on (n, delta) only through 2n + delta; for integer
    # D = (l+1)^2 + (m+1)^2, 2n + sqrt(D) is rational iff D is a square.
    d = (qn.l + 1) ** 2 + (qn.m + 1) ** 2
    r = math.isqrt(d)
    if r * r == d:
        return ("rational", 2 * qn.n + r)
    return ("surd", qn.n, d)


def _quantum_numbers(model: ChannelModel, n_max, l_max, m_max, s_max):
    if model.geometry is Geometry.PARALLELEPIPEDAL:
        for n in range(n_max + 1):
            for l in range(l_max + 1):
                for m in range(m_max + 1):
                    yield QuantumNumbers.parallel(n, l, m)
    else:
        for n in range(n_max + 1):
            for am in range(m_max + 1):
                for s in range(1, s_max + 1):
                    yield QuantumNumbers.cylinder(n, am, s)
                    if am:
                        yield QuantumNumbers.cylinder(n, -am, s)


def enumerate_spectrum(
    model: ChannelModel,
    n_max: int,
    l_max: int = 0,
    m_max: int = 0,
    s_max: int = 1,
    rtol: float = DEGENERACY_RTOL,
) -> list[SpectrumEntry]:
    """All states within the caps, sorted by energy with degeneracy classes.

    ``l_max`` applies to the parallel channel only, ``s_max`` to the
    cylinder only; ``m_max`` bounds |m| for the cylinder. Energies within
    relative ``rtol`` share a class; for the parallel channel the class is
    further split by exact integer arithmetic on (l+1)^2 + (m+1)^2.
    """
    if min(n_max, l_max, m_max, s_max) < 0:
        raise DomainError("caps must be non-negative")
    raw = []
    for qn in _quantum_numbers(model, n_max, l_max, m_max, s_max):
        d = delta_for(model, qn)
        raw.append((energy(model, qn.n, d), qn.sort_key(), qn, d))
    raw.sort(key=lambda r: (r[0], r[1]))

    groups: list[list] = []
    for row in raw:
        if groups and row[0] - groups[-1][0][0] <= rtol * abs(groups[-1][0][0]):
            groups[-1].append(row)
        else:
            groups.append([row])

    if model.geometry is Geometry.PARALLELEPIPEDAL:
        refined = []
        for g in groups:
            parts = {}
            for row in g:
                parts.setdefault(_exact_key(row[2]), []).append(row)
            refined.extend(sorted(parts.values(), key=lambda p: (p[0][0], p[0][1])))
        groups = refined

    entries = []
    for cid, g in enumerate(groups):
        for e, _, qn, d in sorted(g, key=lambda r: r[1]):
            entries.append(SpectrumEntry(qn, d, e, cid))
    return entries


def _related(a: QuantumNumbers, b: QuantumNumbers) -> str | None:
    if a.n != b.n:
        return None
    if a.is_parallel and b.is_parallel:
        if a.l == b.m and a.m == b.l and a.l != a.m:
            return "exchange"
    elif not a.is_parallel and not b.is_parallel:
        if a.s == b.s and a.m == -b.m and a.m != 0:
            return "sign"
    return None


def degeneracy_report(entries: list[SpectrumEntry]) -> list[DegeneracyClass]:
    """Group entries by degeneracy class and tag each class.

    Two-member classes related by l <-> m are ``exchange``, by m <-> -m are
    ``sign``; any other multi-member class is ``accidental``.
    """
    out = []
    ordered = sorted(entries, key=lambda e: (e.degeneracy_class, e.qn.sort_key()))
    for cid, grp in groupby(ordered, key=lambda e: e.degeneracy_class):
        grp = list(grp)
        members = tuple(e.qn for e in grp)
        if len(members) == 1:
            kind = "none"
        elif len(members) == 2 and _related(*members):
            kind = _related(*members)
        else:
            kind = "accidental"
        out.append(DegeneracyClass(cid, grp[0].energy, members, kind))
    return out
