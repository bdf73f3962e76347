"""Quadrature and end-to-end consistency checks of the closed forms."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import analytic
from .analytic import QuantumNumbers
from .errors import ConvergenceError, DomainError
from .model import ChannelModel, Geometry, effective_potential_shift, reduced_x_potential, shift_coefficients
from .numeric import Grid1D, default_grid, solve_radial_spectrum, solve_x_spectrum
from .specfun import JacobiParams, bessel_j, bessel_zero, log_gamma

__all__ = [
    "QuadratureSpec",
    "ResidualReport",
    "CrossValidationRow",
    "RadialRow",
    "Check",
    "VerificationReport",
    "integrate",
    "gram_matrix",
    "gram_matrix_x",
    "gram_matrix_radial",
    "x_tail",
    "hamiltonian_residual_x",
    "cross_validate",
    "radial_cross_validate",
    "bessel_zero_residuals",
    "run_suite",
]

log = logging.getLogger(__name__)

ADAPTIVE_SIMPSON = "adaptive_simpson"
GAUSS_LEGENDRE = "gauss_legendre_composite"


@dataclass(frozen=True)
class QuadratureSpec:
    method: str = GAUSS_LEGENDRE
    abs_tol: float = 1e-12
    max_depth: int = 50
    max_panels: int = 8192
    order: int = 20

    def __post_init__(self):
        if self.method not in (ADAPTIVE_SIMPSON, GAUSS_LEGENDRE):
            raise DomainError(f"unknown quadrature method {self.method!r}")
        if not self.abs_tol > 0.0:
            raise DomainError("abs_tol must be positive")


@dataclass(frozen=True)
class ResidualReport:
    label: str
    h: float
    max_relative_residual: float
    converges_second_order: bool
    ratio: float
    tol: float = 1e-4

    @property
    def passed(self) -> bool:
        return self.max_relative_residual <= self.tol and self.converges_second_order


@dataclass(frozen=True)
class CrossValidationRow:
    qn: QuantumNumbers
    e_analytic: float
    e_numeric: float
    rel_error: float
    passed: bool


@dataclass(frozen=True)
class RadialRow:
    m: int
    s: int
    kappa2_exact: float
    kappa2_numeric: float
    rel_error: float
    passed: bool


# --------------------------------------------------------------------------
# quadrature


def _simpson(f, a, b, tol, max_depth):
    def safe(x):
        v = f(x)
        if not math.isfinite(v):
            # integrable endpoint singularity: nudge inward
            v = f(x + 1e-12 * (b - a) * (1 if x == a else -1))
        return float(v)

    fa, fb = safe(a), safe(b)
    m = 0.5 * (a + b)
    fm = safe(m)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    total = 0.0
    # error estimates of intervals accepted only because of the depth cap
    capped = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    while stack:
        a0, b0, fa0, fm0, fb0, s0, t0, depth = stack.pop()
        m0 = 0.5 * (a0 + b0)
        lm, rm = 0.5 * (a0 + m0), 0.5 * (m0 + b0)
        flm, frm = safe(lm), safe(rm)
        left = (m0 - a0) / 6.0 * (fa0 + 4.0 * flm + fm0)
        right = (b0 - m0) / 6.0 * (fm0 + 4.0 * frm + fb0)
        diff = left + right - s0
        if abs(diff) <= 15.0 * t0 or depth >= max_depth:
            if abs(diff) > 15.0 * t0:
                capped += abs(diff) / 15.0
            total += left + right + diff / 15.0
        else:
            stack.append((a0, m0, fa0, flm, fm0, left, 0.5 * t0, depth + 1))
            stack.append((m0, b0, fm0, frm, fb0, right, 0.5 * t0, depth + 1))
    if capped > tol:
        raise ConvergenceError(f"adaptive Simpson hit depth {max_depth} before tolerance {tol:g}")
    return total


def _gl_rule(a, b, panels, order):
    t, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wx = (half[:, None] * w[None, :]).ravel()
    return x, wx


def _gl_converged(evaluate, a, b, spec: QuadratureSpec):
    """Double panel counts until successive estimates agree to abs_tol."""
    panels = 4
    prev = evaluate(*_gl_rule(a, b, panels, spec.order))
    while panels < spec.max_panels:
        panels *= 2
        cur = evaluate(*_gl_rule(a, b, panels, spec.order))
        if np.max(np.abs(cur - prev)) <= spec.abs_tol:
            return cur
        prev = cur
    raise ConvergenceError(f"Gauss-Legendre hit {spec.max_panels} panels before tolerance {spec.abs_tol:g}")


def _vectorized(f):
    def g(x):
        return np.asarray(f(x), dtype=float) * np.ones_like(x)

    return g


def integrate(f: Callable, a: float, b: float, spec: QuadratureSpec | None = None) -> float:
    """Integral of ``f`` over [a, b] to ``spec.abs_tol``.

    The Gauss-Legendre route calls ``f`` on arrays; adaptive Simpson calls it
    on scalars.
    """
    spec = spec or QuadratureSpec()
    if spec.method == ADAPTIVE_SIMPSON:
        return _simpson(f, a, b, spec.abs_tol, spec.max_depth)
    fv = _vectorized(f)
    return float(_gl_converged(lambda x, w: np.dot(w, fv(x)), a, b, spec))


def gram_matrix(
    funcs: Sequence[Callable],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
    weight: Callable | None = None,
) -> np.ndarray:
    """G_ij = integral of f_i f_j (times ``weight``) over [a, b]."""
    spec = spec or QuadratureSpec()
    if spec.method == ADAPTIVE_SIMPSON:
        n = len(funcs)
        g = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                fi, fj = funcs[i], funcs[j]
                if weight is None:
                    g[i, j] = integrate(lambda x: fi(x) * fj(x), a, b, spec)
                else:
                    g[i, j] = integrate(lambda x: fi(x) * fj(x) * weight(x), a, b, spec)
                g[j, i] = g[i, j]
        return g

    fv = [_vectorized(f) for f in funcs]

    def evaluate(x, w):
        vals = np.array([f(x) for f in fv])
        ww = w if weight is None else w * _vectorized(weight)(x)
        return (vals * ww) @ vals.T

    return _gl_converged(evaluate, a, b, spec)


def x_tail(model: ChannelModel, delta: float, n_max: int, level: float = 1e-16) -> float:
    """Point beyond which phi_n^2 < ``level`` for every n <= n_max.

    Uses sech(u) < 2 e^{-u} and |P_n^{(a,b)}| <= max(C(n+a, n), C(n+b, n)).
    """
    a, b = model.k - 0.5, delta
    worst = -math.inf
    for n in range(n_max + 1):
        log_binom = max(
            log_gamma(n + c + 1.0) - log_gamma(n + 1.0) - log_gamma(c + 1.0) for c in (a, b)
        )
        worst = max(worst, 2.0 * analytic.log_norm_x(model, n, delta) + 2.0 * max(log_binom, 0.0))
    return (math.log(2.0) + (worst - math.log(level)) / (2.0 * (1.0 + delta))) / model.q


def gram_matrix_x(
    model: ChannelModel,
    delta: float,
    n_max: int,
    spec: QuadratureSpec | None = None,
    x_max: float | None = None,
) -> np.ndarray:
    if n_max > 10:
        raise DomainError("gram_matrix_x supports n_max <= 10")
    b = x_tail(model, delta, n_max) if x_max is None else x_max
    funcs = [lambda x, n=n: analytic.phi_x(model, n, delta, x) for n in range(n_max + 1)]
    return gram_matrix(funcs, 0.0, b, spec)


def gram_matrix_radial(
    model: ChannelModel, m: int, s_max: int, spec: QuadratureSpec | None = None
) -> np.ndarray:
    funcs = [lambda r, s=s: analytic.chi_radial(model, m, s, r) for s in range(1, s_max + 1)]
    return gram_matrix(funcs, 0.0, model.R, spec, weight=lambda r: r)


# --------------------------------------------------------------------------
# residuals


def hamiltonian_residual_x(
    model: ChannelModel,
    delta: float,
    n: int,
    h: float = 1e-3,
    phi: Callable | None = None,
    energy_value: float | None = None,
    tol: float = 1e-4,
    n_samples: int = 4001,
) -> ResidualReport:
    """Pointwise residual of -(cosh^2 phi')' + W phi - E phi by central differences.

    Samples start at 5h to stay clear of the csch^2 endpoint; the same
    sample points are reused at h/2 to measure the convergence ratio.
    """
    if phi is None:
        phi = lambda x: analytic.phi_x(model, n, delta, x)  # noqa: E731
    e = analytic.energy(model, n, delta) if energy_value is None else energy_value
    q = model.q
    x = np.linspace(5.0 * h, x_tail(model, delta, n), n_samples)
    fx = np.asarray(phi(x), dtype=float)
    wx = reduced_x_potential(model, delta, x)
    scale = abs(e) * np.max(np.abs(fx))

    def residual(hh):
        p_r = np.cosh(q * (x + 0.5 * hh)) ** 2
        p_l = np.cosh(q * (x - 0.5 * hh)) ** 2
        flux = p_r * (phi(x + hh) - fx) - p_l * (fx - phi(x - hh))
        return float(np.max(np.abs(-flux / (hh * hh) + wx * fx - e * fx)) / scale)

    r1 = residual(h)
    r2 = residual(0.5 * h)
    ratio = r1 / r2 if r2 > 0.0 else math.inf
    return ResidualReport(
        label=f"n={n}, delta={delta:.12g}",
        h=h,
        max_relative_residual=r1,
        converges_second_order=3.5 <= ratio <= 4.5,
        ratio=ratio,
        tol=tol,
    )


# --------------------------------------------------------------------------
# cross validation


def _channels(model: ChannelModel, l_max: int, m_max: int, s_max: int):
    if model.geometry is Geometry.PARALLELEPIPEDAL:
        return [(l, m) for l in range(l_max + 1) for m in range(m_max + 1)]
    chans = []
    for am in range(m_max + 1):
        for s in range(1, s_max + 1):
            chans.append((am, s))
            if am:
                chans.append((-am, s))
    return chans


def cross_validate(
    model: ChannelModel,
    n_max: int,
    l_max: int = 0,
    m_max: int = 0,
    s_max: int = 1,
    grid: Grid1D | None = None,
    rel_bound: float = 1e-4,
    analytic_scale: float = 1.0,
) -> list[CrossValidationRow]:
    """Pair finite-difference eigenvalues with the closed-form energies.

    ``analytic_scale`` multiplies the closed-form energies; anything other
    than 1 is a fault-injection hook for negative testing.
    """
    grid = grid or default_grid(model)
    solved: dict[float, list[float]] = {}
    rows = []
    for a, b in _channels(model, l_max, m_max, s_max):
        if model.geometry is Geometry.PARALLELEPIPEDAL:
            delta = analytic.delta_parallel(a, b)
        else:
            delta = analytic.delta_cylinder(model, a, b)
        if delta not in solved:
            solved[delta] = solve_x_spectrum(model, delta, n_max + 1, grid)
        for n, e_num in enumerate(solved[delta]):
            if model.geometry is Geometry.PARALLELEPIPEDAL:
                qn = QuantumNumbers.parallel(n, a, b)
            else:
                qn = QuantumNumbers.cylinder(n, a, b)
            e_an = analytic_scale * analytic.energy(model, n, delta)
            rel = abs(e_num - e_an) / abs(e_an)
            rows.append(CrossValidationRow(qn, e_an, e_num, rel, rel <= rel_bound))
    rows.sort(key=lambda r: r.qn.sort_key())
    return rows


def radial_cross_validate(
    model: ChannelModel, m_max: int, s_max: int, n_points: int = 4000, rel_bound: float = 1e-4
) -> list[RadialRow]:
    rows = []
    for m in range(m_max + 1):
        numeric = solve_radial_spectrum(model, m, s_max, n_points)
        for s, k2 in enumerate(numeric, start=1):
            exact = (bessel_zero(m, s).value / model.R) ** 2
            rel = abs(k2 - exact) / exact
            rows.append(RadialRow(m, s, exact, k2, rel, rel <= rel_bound))
    return rows


def bessel_zero_residuals(orders: Sequence[int], s_max: int) -> list[tuple[int, int, float, float]]:
    out = []
    for m in orders:
        for s in range(1, s_max + 1):
            z = bessel_zero(m, s).value
            out.append((m, s, z, abs(bessel_j(m, z))))
    return out


# --------------------------------------------------------------------------
# suite


@dataclass
class Check:
    name: str
    status: str  # PASS | FAIL | INFO
    detail: str = ""
    data: dict = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return self.status == "FAIL"


@dataclass
class VerificationReport:
    checks: list[Check]

    @property
    def passed(self) -> bool:
        return not any(c.failed for c in self.checks)


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def run_suite(
    model: ChannelModel,
    n_max: int = 2,
    l_max: int = 0,
    m_max: int = 0,
    s_max: int = 1,
    grid: Grid1D | None = None,
    tol: float = 1e-4,
    analytic_scale: float = 1.0,
    gram_tol: float = 1e-8,
) -> VerificationReport:
    """Run every consistency check for one configuration."""
    grid = grid or default_grid(model)
    checks = []
    cylinder = model.geometry is Geometry.CYLINDRICAL

    rows = cross_validate(model, n_max, l_max, m_max, s_max, grid, tol, analytic_scale)
    worst = max((r.rel_error for r in rows), default=0.0)
    checks.append(
        Check(
            "spectrum cross-validation",
            _status(all(r.passed for r in rows)),
            f"{len(rows)} states, max rel_error {worst:.3e} (bound {tol:g})",
            {
                "rows": [
                    {
                        "qn": str(r.qn),
                        "e_analytic": r.e_analytic,
                        "e_numeric": r.e_numeric,
                        "rel_error": r.rel_error,
                        "passed": r.passed,
                    }
                    for r in rows
                ]
            },
        )
    )

    if cylinder:
        rrows = radial_cross_validate(model, m_max, s_max, rel_bound=tol)
        worst = max((r.rel_error for r in rrows), default=0.0)
        checks.append(
            Check(
                "radial cross-validation",
                _status(all(r.passed for r in rrows)),
                f"{len(rrows)} modes, max rel_error {worst:.3e}",
                {"rows": [r.__dict__ for r in rrows]},
            )
        )

    first = (0, 0) if not cylinder else (0, 1)
    delta0 = (
        analytic.delta_parallel(*first) if not cylinder else analytic.delta_cylinder(model, *first)
    )
    gram_n = min(n_max, 5)
    g = gram_matrix_x(model, delta0, gram_n)
    err = float(np.max(np.abs(g - np.eye(gram_n + 1))))
    checks.append(
        Check(
            "x orthonormality",
            _status(err <= gram_tol),
            f"n <= {gram_n}, delta={delta0:.12g}, max |G - I| {err:.3e}",
            {"max_deviation": err},
        )
    )

    if cylinder and s_max >= 1:
        errs = []
        for m in range(m_max + 1):
            gr = gram_matrix_radial(model, m, s_max)
            errs.append(float(np.max(np.abs(gr - np.eye(s_max)))))
        err = max(errs)
        checks.append(
            Check(
                "radial orthonormality",
                _status(err <= gram_tol),
                f"|m| <= {m_max}, s <= {s_max}, max |G - I| {err:.3e}",
                {"max_deviation": err},
            )
        )

    for n in range(min(n_max, 3) + 1):
        rep = hamiltonian_residual_x(model, delta0, n, tol=tol)
        checks.append(
            Check(
                f"hamiltonian residual n={n}",
                _status(rep.passed),
                f"residual {rep.max_relative_residual:.3e}, h-ratio {rep.ratio:.3f}",
                {"residual": rep.max_relative_residual, "ratio": rep.ratio},
            )
        )

    control = hamiltonian_residual_x(
        model, delta0, 0, phi=lambda x: 1.0 / np.cosh(model.q * x), tol=tol
    )
    checks.append(
        Check(
            "negative control rejected",
            _status(control.max_relative_residual >= 1e3 * tol),
            f"sech(qx) residual {control.max_relative_residual:.3e}",
            {"residual": control.max_relative_residual},
        )
    )

    orders = range(m_max + 1) if cylinder else (0, 1)
    zs = bessel_zero_residuals(orders, max(s_max, 5) if not cylinder else s_max)
    worst = max((z[3] for z in zs), default=0.0)
    checks.append(
        Check(
            "bessel zero residuals",
            _status(worst <= 1e-12),
            f"{len(zs)} zeros, max |J(j)| {worst:.3e}",
            {"max_residual": worst},
        )
    )

    c_cosh, c_const = shift_coefficients(model.ambiguity)
    xs = np.linspace(-5.0, 5.0, 50) / model.q
    shift = float(np.max(np.abs(effective_potential_shift(model, xs))))
    if c_cosh == 0.0 and c_const == 0.0:
        status = _status(shift == 0.0)
    else:
        status = "INFO"
    checks.append(
        Check(
            "effective potential shift identically zero",
            status,
            f"alpha={model.ambiguity.alpha:g}, beta={model.ambiguity.beta:g}, max |shift| {shift:.3e}",
            {"max_shift": shift},
        )
    )

    for w in model.warnings:
        checks.append(Check("model warning", "INFO", w))
    return VerificationReport(checks)
