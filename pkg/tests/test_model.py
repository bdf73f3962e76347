import math

import mpmath as mp
import numpy as np
import pytest

from pdmchan.errors import ConfigurationError, DomainError
from pdmchan.model import (
    AmbiguityParams,
    ChannelModel,
    Geometry,
    MassProfile,
    effective_potential_shift,
    mass,
    potential_x,
    reduced_x_potential,
    shift_coefficients,
)


def hp_sech2(q, x):
    return float(1 / mp.cosh(mp.mpf(q) * mp.mpf(x)) ** 2)


def test_gamma_is_derived():
    amb = AmbiguityParams(0.25, -0.5)
    assert amb.alpha + amb.beta + amb.gamma == -1.0
    assert AmbiguityParams().gamma == 0.0


def test_model_validation():
    with pytest.raises(ConfigurationError):
        ChannelModel.parallel(q=0.0)
    with pytest.raises(ConfigurationError):
        ChannelModel.parallel(k=-1.0)
    with pytest.raises(ConfigurationError):
        ChannelModel(Geometry.CYLINDRICAL, 1.0, 1.0, None)
    with pytest.raises(ConfigurationError):
        ChannelModel(Geometry.PARALLELEPIPEDAL, 1.0, 1.0, 2.0)
    with pytest.raises(ConfigurationError):
        MassProfile(-1.0)
    assert ChannelModel("cylinder", 1.0, 1.0, 1.0).geometry is Geometry.CYLINDRICAL


def test_half_width():
    assert ChannelModel.parallel(q=2.0).half_width == pytest.approx(math.pi / 4)


def test_small_k_warning():
    assert ChannelModel.parallel(k=0.3).warnings
    assert not ChannelModel.parallel(k=0.5).warnings


def test_mass_examples():
    assert mass(ChannelModel.parallel(q=1), 0.0) == 1.0
    assert mass(ChannelModel.parallel(q=1), 1.0) == pytest.approx(hp_sech2(1, 1), rel=1e-14)
    assert hp_sech2(1, 1) == pytest.approx(0.4199743416, abs=1e-10)
    m2 = ChannelModel.parallel(q=2)
    assert mass(m2, -1.0) == pytest.approx(hp_sech2(2, 1), rel=1e-14)
    assert hp_sech2(2, 1) == pytest.approx(0.0706508249, abs=1e-10)
    assert mass(m2, -1.0) == mass(m2, 1.0)


def test_mass_even_monotone_bounded():
    m = ChannelModel.parallel(q=1.3)
    x = np.linspace(0, 20, 400)
    v = mass(m, x)
    assert np.all(v > 0) and np.all(v <= 1)
    assert np.all(np.diff(v) < 0)
    np.testing.assert_array_equal(v, mass(m, -x))


def test_shift_zero_for_ben_daniel_duke():
    m = ChannelModel.parallel(q=1.7, alpha=0.0, beta=-1.0)
    xs = np.linspace(-3, 3, 50)
    assert np.all(effective_potential_shift(m, xs) == 0.0)


def test_shift_examples():
    assert effective_potential_shift(ChannelModel.parallel(q=1, alpha=0, beta=0), 0.0) == -1.0
    assert effective_potential_shift(ChannelModel.parallel(q=1, alpha=-1, beta=1), 0.0) == -2.0


@pytest.mark.parametrize("alpha,beta", [(0.3, 0.1), (-0.5, -0.5), (1.0, -2.0)])
def test_shift_against_general_formula(alpha, beta):
    # Independent route: the general expression in M, its Laplacian and gradient.
    q = 0.8
    m = ChannelModel.parallel(q=q, alpha=alpha, beta=beta)
    for x in (-1.1, 0.0, 0.4, 2.0):
        X = mp.mpf(x)
        M = lambda t: 1 / mp.cosh(q * t) ** 2  # noqa: E731
        d1 = mp.diff(M, X)
        d2 = mp.diff(M, X, 2)
        want = 0.5 * (beta + 1) * d2 / M(X) ** 2 - (alpha * (alpha + beta + 1) + beta + 1) * d1**2 / M(X) ** 3
        assert effective_potential_shift(m, x) == pytest.approx(float(want), rel=1e-10, abs=1e-12)


def test_shift_zero_iff_coefficients_vanish():
    assert shift_coefficients(AmbiguityParams(0.0, -1.0)) == (0.0, 0.0)
    assert shift_coefficients(AmbiguityParams(0.0, 0.0)) != (0.0, 0.0)


def test_potential_x_examples():
    m = ChannelModel.parallel(q=1, k=1)
    assert potential_x(m, 0.5) == pytest.approx(-float(mp.cosh(0.5) ** 2), rel=1e-14)
    assert float(mp.cosh(0.5) ** 2) == pytest.approx(1.2715403174, abs=1e-10)
    m2 = ChannelModel.parallel(q=1, k=2)
    ratio = potential_x(m2, 30.0) / -math.cosh(30.0) ** 2
    assert ratio == pytest.approx(1.0, abs=1e-20)
    m3 = ChannelModel.parallel(q=1, k=0.5)
    want = float(-mp.cosh(mp.mpf("0.1")) ** 2 - 0.25 / mp.sinh(mp.mpf("0.1")) ** 2)
    assert potential_x(m3, 0.1) == pytest.approx(want, rel=1e-13)
    assert want == pytest.approx(-26.0, abs=0.5)


def test_potential_domain():
    m = ChannelModel.parallel()
    with pytest.raises(DomainError):
        potential_x(m, 0.0)
    with pytest.raises(DomainError):
        reduced_x_potential(m, 1.0, np.array([0.1, -0.1]))
    with pytest.raises(DomainError):
        reduced_x_potential(m, 0.0, 1.0)


def test_reduced_potential_examples():
    assert reduced_x_potential(ChannelModel.parallel(q=1, k=1), 1.0, 2.0) == 0.0
    m = ChannelModel.parallel(q=1, k=1)
    assert reduced_x_potential(m, math.sqrt(2), 1.0) == pytest.approx(2.3810978455418157, rel=1e-13)
    m2 = ChannelModel.parallel(q=1, k=2)
    want = float(mp.cosh(0.5) ** 2 + 2 / mp.sinh(0.5) ** 2)
    assert want == pytest.approx(8.636929071, abs=1e-9)
    assert reduced_x_potential(m2, math.sqrt(2), 0.5) == pytest.approx(want, rel=1e-13)


def test_reduced_potential_is_separated_operator():
    # W = V_eff,1 + cosh^2 * delta^2 q^2 (transverse eigenvalue times p = 1/M)
    m = ChannelModel.parallel(q=1.4, k=1.7)
    x = np.linspace(0.05, 4, 30)
    d = math.sqrt(13.0)
    np.testing.assert_allclose(
        reduced_x_potential(m, d, x), potential_x(m, x) + d * d * m.q**2 / mass(m, x), rtol=1e-12
    )


def test_confinement():
    m = ChannelModel.parallel(q=1, k=2.5)
    assert reduced_x_potential(m, 2.0, 1e-4) > 1e7
    assert reduced_x_potential(m, 2.0, 15.0) > 1e12
