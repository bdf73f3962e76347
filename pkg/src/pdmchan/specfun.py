"""Special functions used by the closed-form channel solutions.

Everything here is self-contained: Jacobi polynomials by degree recurrence,
log-gamma by Stirling's series with upward shifting, integer-order Bessel
functions of the first kind and their positive zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "JacobiParams",
    "BesselZero",
    "jacobi_eval",
    "log_gamma",
    "bessel_j",
    "bessel_j_prime",
    "bessel_zero",
    "sech",
    "csch",
]

_ENDPOINT_SLACK = 1e-12
_SERIES_LIMIT = 4.0
_ZERO_RESIDUAL = 1e-10
_ZERO_MAXITER = 200

# B_{2k} / (2k (2k-1)) for k = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class JacobiParams:
    """Indices and degree of a Jacobi polynomial P_n^{(a,b)}."""

    a: float
    b: float
    n: int

    def __post_init__(self):
        if self.a <= -1.0 or self.b <= -1.0:
            raise DomainError(f"Jacobi indices must exceed -1, got a={self.a}, b={self.b}")
        if int(self.n) != self.n or self.n < 0:
            raise DomainError(f"Jacobi degree must be a non-negative integer, got {self.n}")


@dataclass(frozen=True)
class BesselZero:
    order: int
    index: int
    value: float


def sech(x):
    return 1.0 / np.cosh(x)


def csch(x):
    return 1.0 / np.sinh(x)


def jacobi_eval(p: JacobiParams, x):
    """Evaluate P_n^{(a,b)}(x) by the three-term recurrence in the degree.

    ``x`` may be a scalar or an array; values outside [-1, 1] beyond a
    1e-12 roundoff slack raise :class:`DomainError`.
    """
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0 + _ENDPOINT_SLACK):
        raise DomainError("Jacobi argument must lie in [-1, 1]")
    a, b, n = float(p.a), float(p.b), int(p.n)

    prev = np.ones_like(xa)
    if n == 0:
        return prev if xa.ndim else float(prev)
    cur = 0.5 * (a - b) + (1.0 + 0.5 * (a + b)) * xa
    for j in range(2, n + 1):
        s = 2 * j + a + b
        c1 = 2.0 * j * (j + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (s * (s - 2.0) * xa + a * a - b * b)
        c3 = 2.0 * (j + a - 1.0) * (j + b - 1.0) * s
        prev, cur = cur, (c2 * cur - c3 * prev) / c1
    return cur if xa.ndim else float(cur)


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0."""
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"log_gamma needs a finite positive argument, got {x}")
    shift = 0.0
    z = x
    if z < 15.0:
        prod = 1.0
        while z < 15.0:
            prod *= z
            z += 1.0
        shift = math.log(prod)
    zinv = 1.0 / z
    zinv2 = zinv * zinv
    series = 0.0
    for c in reversed(_STIRLING):
        series = series * zinv2 + c
    series *= zinv
    return (z - 0.5) * math.log(z) - z + _HALF_LOG_2PI + series - shift


def _bessel_series(order: int, x: float) -> float:
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    half = 0.5 * x
    term = math.exp(order * math.log(half) - log_gamma(order + 1.0))
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + order))
        total += term
        if abs(term) < 1e-17 * max(abs(total), 1e-300) and k > half:
            return total


def _bessel_miller(order: int, x: float) -> float:
    # Backward recurrence normalized by J0 + 2*sum(J_2k) = 1.
    top = max(order, x)
    start = int(top + 20.0 + 8.0 * top ** (1.0 / 3.0))
    start += start % 2
    f_next, f_cur = 0.0, 1e-30
    norm = 0.0
    found = 0.0
    two_over_x = 2.0 / x
    for j in range(start, 0, -1):
        f_prev = j * two_over_x * f_cur - f_next
        f_next, f_cur = f_cur, f_prev
        if j - 1 == order:
            found = f_cur
        if (j - 1) % 2 == 0 and j - 1 > 0:
            norm += 2.0 * f_cur
        if abs(f_cur) > 1e250:
            f_cur *= 1e-250
            f_next *= 1e-250
            norm *= 1e-250
            found *= 1e-250
    norm += f_cur
    return found / norm


def bessel_j(order: int, x: float) -> float:
    """Bessel function of the first kind J_order(x) for integer order >= 0.

    Power series below x = 4, Miller backward recurrence above.
    """
    if order < 0 or int(order) != order:
        raise DomainError(f"order must be a non-negative integer, got {order}")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError("bessel_j needs a finite argument")
    order = int(order)
    if x < 0.0:
        # J_m(-x) = (-1)^m J_m(x)
        val = bessel_j(order, -x)
        return -val if order % 2 else val
    if x < _SERIES_LIMIT:
        return _bessel_series(order, x)
    return _bessel_miller(order, x)


def bessel_j_prime(order: int, x: float) -> float:
    """d/dx J_order(x)."""
    if order == 0:
        return -bessel_j(1, x)
    if x == 0.0:
        return 0.5 if order == 1 else 0.0
    return order / x * bessel_j(order, x) - bessel_j(order + 1, x)


def _mcmahon(order: int, index: int) -> float:
    mu = 4.0 * order * order
    beta = (index + 0.5 * order - 0.25) * math.pi
    e = 8.0 * beta
    return (
        beta
        - (mu - 1.0) / e
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e**3)
    )


def _bracket(order: int, index: int) -> tuple[float, float]:
    if order == 0:
        return (index - 0.5) * math.pi, index * math.pi
    # zeros of J_m and J_{m-1} interlace: j_{m-1,s} < j_{m,s} < j_{m-1,s+1}
    return _zero_value(order - 1, index), _zero_value(order - 1, index + 1)


@lru_cache(maxsize=None)
def _zero_value(order: int, index: int) -> float:
    lo, hi = _bracket(order, index)
    f_lo, f_hi = bessel_j(order, lo), bessel_j(order, hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if f_lo * f_hi > 0.0:
        raise ConvergenceError(f"no sign change bracketing j_({order},{index}) in [{lo}, {hi}]")

    x = _mcmahon(order, index)
    if not lo < x < hi:
        x = 0.5 * (lo + hi)
    for _ in range(_ZERO_MAXITER):
        fx = bessel_j(order, x)
        if fx == 0.0:
            break
        if (fx < 0.0) == (f_lo < 0.0):
            lo, f_lo = x, fx
        else:
            hi = x
        dfx = bessel_j_prime(order, x)
        step_ok = dfx != 0.0
        if step_ok:
            x_new = x - fx / dfx
            step_ok = lo < x_new < hi
        if not step_ok:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= 1e-15 * x or hi - lo <= 1e-15 * x:
            x = x_new
            break
        x = x_new
    else:
        raise ConvergenceError(f"iteration cap reached for j_({order},{index})")

    if abs(bessel_j(order, x)) > _ZERO_RESIDUAL:
        raise ConvergenceError(f"residual too large at j_({order},{index}) = {x}")
    return x


def bessel_zero(order: int, index: int) -> BesselZero:
    """The ``index``-th positive zero of J_order (1-based)."""
    if order < 0 or int(order) != order:
        raise DomainError(f"order must be a non-negative integer, got {order}")
    if index < 1 or int(index) != index:
        raise DomainError(f"zero index must be a positive integer, got {index}")
    return BesselZero(int(order), int(index), _zero_value(int(order), int(index)))
