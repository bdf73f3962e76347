import math

import numpy as np
import pytest

from pdmchan.analytic import QuantumNumbers, energy, phi_x
from pdmchan.errors import ConvergenceError, DomainError
from pdmchan.model import ChannelModel
from pdmchan.numeric import Grid1D
from pdmchan.verify import (
    QuadratureSpec,
    bessel_zero_residuals,
    cross_validate,
    gram_matrix,
    gram_matrix_radial,
    gram_matrix_x,
    hamiltonian_residual_x,
    integrate,
    radial_cross_validate,
    run_suite,
    x_tail,
)

SQ2 = math.sqrt(2.0)
SIMPSON = QuadratureSpec("adaptive_simpson", 1e-12)
GAUSS = QuadratureSpec("gauss_legendre_composite", 1e-12)


@pytest.fixture
def par():
    return ChannelModel.parallel(q=1.0, k=1.0)


# ---------------------------------------------------------------- integrate


@pytest.mark.parametrize("spec", [SIMPSON, GAUSS], ids=["simpson", "gauss"])
def test_integrate_examples(spec):
    assert integrate(lambda x: x * x, 0.0, 1.0, spec) == pytest.approx(1 / 3, abs=1e-12)
    assert integrate(np.sin, 0.0, math.pi, spec) == pytest.approx(2.0, abs=1e-12)
    # tail beyond 20 is e^-40 / 2
    assert integrate(lambda x: np.exp(-2 * x), 0.0, 20.0, spec) == pytest.approx(0.5, abs=1e-10)


def test_integrate_simpson_endpoint_singularity():
    f = lambda x: math.log(x) if x > 0 else -math.inf  # noqa: E731
    assert integrate(f, 0.0, 1.0, QuadratureSpec("adaptive_simpson", 1e-8)) == pytest.approx(-1.0, abs=1e-7)
    # uniform panels are not adaptive: only a milder endpoint behaviour is asked of them
    assert integrate(np.sqrt, 0.0, 1.0, QuadratureSpec(abs_tol=1e-10)) == pytest.approx(2 / 3, abs=1e-9)


def test_integrate_failure_reported():
    with pytest.raises(ConvergenceError):
        integrate(lambda x: np.sin(1.0 / (x + 1e-6)), 0.0, 1.0, QuadratureSpec(abs_tol=1e-14, max_panels=16))
    with pytest.raises(ConvergenceError):
        integrate(
            lambda x: math.sin(1.0 / (x + 1e-6)), 0.0, 1.0, QuadratureSpec("adaptive_simpson", 1e-14, max_depth=5)
        )


def test_quadrature_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec("trapezoid")
    with pytest.raises(DomainError):
        QuadratureSpec(abs_tol=0.0)


# ---------------------------------------------------------------- Gram matrices


def test_gram_single(par):
    g = gram_matrix_x(par, SQ2, 0)
    assert g.shape == (1, 1)
    assert g[0, 0] == pytest.approx(1.0, abs=1e-8)


def test_gram_three(par):
    np.testing.assert_allclose(gram_matrix_x(par, SQ2, 2), np.eye(3), atol=1e-8)


def test_gram_simpson_agrees(par):
    np.testing.assert_allclose(gram_matrix_x(par, SQ2, 1, SIMPSON), np.eye(2), atol=1e-8)


def test_gram_bilinear(par):
    f = lambda x: 2.0 * phi_x(par, 0, SQ2, x)  # noqa: E731
    g = gram_matrix([f], 0.0, x_tail(par, SQ2, 0))
    assert g[0, 0] == pytest.approx(4.0, abs=1e-8)


@pytest.mark.parametrize("delta", [SQ2, math.sqrt(5), 2.404825557695773])
def test_gram_symmetric_unit_diagonal(par, delta):
    g = gram_matrix_x(par, delta, 5)
    np.testing.assert_allclose(g, g.T, atol=1e-12)
    np.testing.assert_allclose(np.diag(g), 1.0, atol=1e-8)
    np.testing.assert_allclose(g, np.eye(6), atol=1e-8)


def test_gram_cap(par):
    with pytest.raises(DomainError):
        gram_matrix_x(par, SQ2, 11)


def test_gram_radial():
    c = ChannelModel.cylinder(1.0, 1.0, 1.3)
    for m in (0, 1, 3):
        np.testing.assert_allclose(gram_matrix_radial(c, m, 4), np.eye(4), atol=1e-8)


def test_x_tail_bounds_integrand(par):
    b = x_tail(par, SQ2, 5)
    for n in range(6):
        assert phi_x(par, n, SQ2, b) ** 2 < 1e-16


# ---------------------------------------------------------------- residuals


def test_residual_ground_state(par):
    rep = hamiltonian_residual_x(par, SQ2, 0, h=1e-3)
    assert rep.max_relative_residual <= 1e-5
    assert rep.converges_second_order
    assert rep.passed


def test_residual_excited(par):
    rep = hamiltonian_residual_x(par, SQ2, 2, h=1e-3)
    assert rep.max_relative_residual <= 1e-4
    assert rep.converges_second_order


@pytest.mark.parametrize("delta", [SQ2, math.sqrt(5), 2.404825557695773])
@pytest.mark.parametrize("n", range(4))
def test_residual_second_order_everywhere(par, n, delta):
    rep = hamiltonian_residual_x(par, delta, n)
    assert 3.5 <= rep.ratio <= 4.5


@pytest.mark.parametrize("k", [2.0, 2.5, 3.0])
def test_residual_other_k(k):
    m = ChannelModel.parallel(q=1.3, k=k)
    rep = hamiltonian_residual_x(m, math.sqrt(5), 1)
    assert rep.max_relative_residual <= 1e-4


def test_residual_negative_control(par):
    rep = hamiltonian_residual_x(par, SQ2, 0, phi=lambda x: 1.0 / np.cosh(x))
    assert rep.max_relative_residual > 1.0
    assert not rep.passed


def test_residual_wrong_energy_fails(par):
    rep = hamiltonian_residual_x(par, SQ2, 0, energy_value=1.01 * energy(par, 0, SQ2))
    assert not rep.passed


# ---------------------------------------------------------------- cross validation


def test_cross_validate_parallel(par):
    rows = cross_validate(par, 2, 0, 0, grid=Grid1D(0, 12, 8000))
    assert [r.qn for r in rows] == [QuantumNumbers.parallel(n, 0, 0) for n in range(3)]
    assert all(r.rel_error <= 1e-4 and r.passed for r in rows)


def test_cross_validate_cylinder():
    c = ChannelModel.cylinder(1.0, 1.0, 1.0)
    rows = cross_validate(c, 1, m_max=0, s_max=1, grid=Grid1D(0, 12, 8000))
    assert rows[0].e_analytic == pytest.approx(14.99766263603, abs=1e-9)
    assert all(r.rel_error <= 1e-4 for r in rows)


def test_cross_validate_accidental_pair(par):
    rows = cross_validate(par, 0, 8, 8, grid=Grid1D(0, 12, 2000))
    a = next(r for r in rows if (r.qn.l, r.qn.m) == (1, 8))
    b = next(r for r in rows if (r.qn.l, r.qn.m) == (5, 6))
    assert a.e_analytic == b.e_analytic
    assert a.passed and b.passed


def test_cross_validate_refinement(par):
    errs = [cross_validate(par, 1, grid=Grid1D(0, 12, n))[1].rel_error for n in (2000, 4000, 8000)]
    for a, b in zip(errs, errs[1:]):
        assert b < 2 * a
        assert b < a


def test_cross_validate_fault_flagged(par):
    rows = cross_validate(par, 0, grid=Grid1D(0, 12, 2000), analytic_scale=1.01)
    assert not rows[0].passed


def test_radial_cross_validate():
    rows = radial_cross_validate(ChannelModel.cylinder(1, 1, 1), 1, 2, 4000)
    assert len(rows) == 4
    assert all(r.passed for r in rows)


def test_bessel_zero_residuals():
    res = bessel_zero_residuals([0, 1], 5)
    assert len(res) == 10
    assert max(r[3] for r in res) <= 1e-12


# ---------------------------------------------------------------- suite


def test_suite_defaults_pass(par):
    rep = run_suite(par)
    assert rep.passed
    names = [c.name for c in rep.checks]
    assert "effective potential shift identically zero" in names
    status = {c.name: c.status for c in rep.checks}
    assert status["effective potential shift identically zero"] == "PASS"


def test_suite_fault_fails(par):
    assert not run_suite(par, grid=Grid1D(0, 12, 2000), analytic_scale=1.01).passed


def test_suite_other_ordering_is_info():
    m = ChannelModel.parallel(alpha=0.0, beta=0.0)
    rep = run_suite(m, n_max=0, grid=Grid1D(0, 12, 2000))
    status = {c.name: c.status for c in rep.checks}
    assert status["effective potential shift identically zero"] == "INFO"
    assert rep.passed


def test_suite_cylinder():
    rep = run_suite(ChannelModel.cylinder(1, 1, 1), n_max=1, m_max=1, s_max=2)
    assert rep.passed
    assert {"radial cross-validation", "radial orthonormality"} <= {c.name for c in rep.checks}
