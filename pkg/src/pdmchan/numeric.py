"""Finite-difference solvers used to cross-check the closed forms.

The separated x-problem -(p phi')' + W phi = E phi with p = cosh^2(qx) and
the radial disk problem are both discretized in conservative (flux) form,
which yields symmetric tridiagonal matrices. Their lowest eigenvalues are
found by Sturm-sequence bisection.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError, DomainError, TruncationWarning
from .model import ChannelModel, Geometry, reduced_x_potential

__all__ = [
    "Grid1D",
    "TridiagonalOperator",
    "default_grid",
    "discretize_x",
    "discretize_radial",
    "sturm_count",
    "eigen_tridiagonal",
    "solve_x_spectrum",
    "solve_radial_spectrum",
]

log = logging.getLogger(__name__)

TAIL_DECAY = 1e-12


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid with Dirichlet end nodes excluded from the unknowns."""

    x_min: float
    x_max: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 1:
            raise ConfigurationError(f"need at least one interior node, got {self.n_points}")
        if not (self.x_min >= 0.0 and self.x_max > self.x_min):
            raise ConfigurationError(f"bad grid bounds ({self.x_min}, {self.x_max})")

    @property
    def h(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points + 1)

    @property
    def nodes(self) -> np.ndarray:
        return self.x_min + self.h * np.arange(1, self.n_points + 1)


@dataclass(frozen=True)
class TridiagonalOperator:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        if len(self.offdiag) != max(len(self.diag) - 1, 0):
            raise ConfigurationError("offdiag must have length len(diag) - 1")

    @property
    def size(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


def default_grid(model: ChannelModel, n_points: int = 8000, x_max: float | None = None) -> Grid1D:
    return Grid1D(0.0, 12.0 / model.q if x_max is None else x_max, n_points)


def discretize_x(
    model: ChannelModel,
    delta: float,
    grid: Grid1D,
    p: Callable | None = None,
    w: Callable | None = None,
) -> TridiagonalOperator:
    """Flux-form second-order discretization of -(p u')' + W u.

    ``p`` and ``w`` default to cosh^2(qx) and the reduced x potential; they
    can be overridden to exercise the scheme on simpler problems.
    """
    h = grid.h
    x = grid.nodes
    if p is None:
        q = model.q
        p = lambda s: np.cosh(q * s) ** 2  # noqa: E731
    if w is None:
        w = lambda s: reduced_x_potential(model, delta, s)  # noqa: E731
    wx = np.asarray(w(x), dtype=float) * np.ones_like(x)
    if model.k < 1.0 and abs(wx[0]) * h * h > 1.0:
        raise ConfigurationError(
            f"grid too coarse for the attractive csch^2 term: |W(x_1)| h^2 = {abs(wx[0]) * h * h:.3g}"
        )
    p_left = np.asarray(p(x - 0.5 * h), dtype=float) * np.ones_like(x)
    p_right = np.asarray(p(x + 0.5 * h), dtype=float) * np.ones_like(x)
    diag = (p_left + p_right) / (h * h) + wx
    offdiag = -p_right[:-1] / (h * h)
    return TridiagonalOperator(diag, offdiag)


def sturm_count(diag, offdiag_sq, sigma: float, pivmin: float) -> int:
    """Number of eigenvalues strictly below ``sigma``."""
    count = 0
    d = diag[0] - sigma
    if abs(d) < pivmin:
        d = -pivmin
    if d < 0.0:
        count += 1
    for i in range(1, len(diag)):
        d = diag[i] - sigma - offdiag_sq[i - 1] / d
        if abs(d) < pivmin:
            d = -pivmin
        if d < 0.0:
            count += 1
    return count


def eigen_tridiagonal(op: TridiagonalOperator, count: int) -> list[float]:
    """The ``count`` smallest eigenvalues by Sturm-sequence bisection, ascending."""
    n = op.size
    if not 0 <= count <= n:
        raise DomainError(f"count must be in [0, {n}], got {count}")
    if count == 0:
        return []
    diag = [float(v) for v in op.diag]
    off = [float(v) for v in op.offdiag]
    off_sq = [v * v for v in off]
    absoff = [abs(v) for v in off] + [0.0]
    radius = [absoff[i] + (absoff[i - 1] if i else 0.0) for i in range(n)]
    g_lo = min(d - r for d, r in zip(diag, radius))
    g_hi = max(d + r for d, r in zip(diag, radius))
    span = max(abs(g_lo), abs(g_hi), 1e-300)
    pivmin = max(2.2e-308, 2.2e-308 * max(off_sq, default=0.0)) / 2.2e-16
    g_lo -= 2.2e-16 * span + 2 * pivmin
    g_hi += 2.2e-16 * span + 2 * pivmin

    lower = [g_lo] * count
    upper = [g_hi] * count
    for j in range(count):
        while True:
            lo, hi = lower[j], upper[j]
            mid = 0.5 * (lo + hi)
            if hi - lo <= max(1e-10, 1e-12 * abs(mid)) or not lo < mid < hi:
                break
            c = sturm_count(diag, off_sq, mid, pivmin)
            for i in range(min(c, count)):
                if mid < upper[i]:
                    upper[i] = mid
            for i in range(c, count):
                if mid > lower[i]:
                    lower[i] = mid
    return [0.5 * (lo + hi) for lo, hi in zip(lower, upper)]


def _check_tail(model: ChannelModel, delta: float, grid: Grid1D, top: float) -> None:
    decay = math.exp(-(1.0 + delta) * model.q * grid.x_max)
    if decay >= TAIL_DECAY:
        warnings.warn(
            f"x_max={grid.x_max} leaves a tail factor {decay:.2e} >= {TAIL_DECAY:g}",
            TruncationWarning,
            stacklevel=3,
        )
        return
    # highest state must turn around well inside the box
    probe = 0.75 * grid.x_max
    if reduced_x_potential(model, delta, probe) <= top:
        warnings.warn(
            f"eigenvalue {top:.6g} is not confined within 3/4 of x_max={grid.x_max}",
            TruncationWarning,
            stacklevel=3,
        )


def solve_x_spectrum(
    model: ChannelModel, delta: float, n_eigen: int, grid: Grid1D | None = None
) -> list[float]:
    """Lowest ``n_eigen`` eigenvalues of the discretized separated x-problem."""
    if grid is None:
        grid = default_grid(model)
    op = discretize_x(model, delta, grid)
    vals = eigen_tridiagonal(op, n_eigen)
    log.debug("x-spectrum delta=%g N=%d: %s", delta, grid.n_points, vals)
    if vals:
        _check_tail(model, delta, grid, vals[-1])
    return vals


def discretize_radial(R: float, m: int, n_points: int) -> TridiagonalOperator:
    """Symmetrized flux-form discretization of the disk radial operator.

    Unknowns sit at rho_i = (i - 1/2) h, so the flux face at rho = 0 carries a
    zero coefficient; chi(R) = 0 is imposed at rho_{N+1} = R.
    """
    if n_points < 1:
        raise ConfigurationError("need at least one radial node")
    h = R / (n_points + 0.5)
    i = np.arange(1, n_points + 1)
    rho = (i - 0.5) * h
    face_lo = (i - 1) * h
    face_hi = i * h
    diag = (face_lo + face_hi) / (h * h * rho) + (m * m) / (rho * rho)
    offdiag = -face_hi[:-1] / (h * h * np.sqrt(rho[:-1] * rho[1:]))
    return TridiagonalOperator(diag, offdiag)


def solve_radial_spectrum(
    model: ChannelModel, m: int, n_eigen: int, n_points: int = 4000
) -> list[float]:
    """Lowest kappa^2 of -(chi'' + chi'/rho - m^2 chi/rho^2) on the disk."""
    if model.geometry is not Geometry.CYLINDRICAL:
        raise DomainError("radial spectrum needs a cylindrical model")
    return eigen_tridiagonal(discretize_radial(model.R, abs(m), n_points), n_eigen)
