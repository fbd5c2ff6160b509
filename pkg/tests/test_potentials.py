import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.core.errors import SingularPotential
from src.core.potentials import (
    POTENTIALS,
    CotangentPotential,
    HarmonicTestPotential,
    cotangent_U,
    cotangent_Uprime,
    get_potential,
)


def test_cotangent_values():
    assert cotangent_U(np.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert cotangent_U(np.pi / 4) == pytest.approx(1.0)
    assert cotangent_U(1e-8) > 1e7
    assert cotangent_Uprime(np.pi / 2) == pytest.approx(-0.5)
    assert cotangent_Uprime(np.pi / 6) == pytest.approx(-4.0)
    assert cotangent_Uprime(np.pi / 2, radius=2.0) == pytest.approx(-0.5 / 8.0)


@pytest.mark.parametrize("sigma", [0.0, np.pi, -0.1])
def test_cotangent_singular(sigma):
    with pytest.raises(SingularPotential):
        cotangent_U(sigma)
    with pytest.raises(SingularPotential):
        cotangent_Uprime(sigma)


@pytest.mark.parametrize("d2", [0.0, 4.0, 5.0])
def test_cotangent_potential_rejects_chords_outside_domain(cotangent, d2):
    with pytest.raises(SingularPotential):
        cotangent.derivative(d2)


@settings(max_examples=100, deadline=None)
@given(
    st.floats(min_value=0.2, max_value=np.pi - 0.2),
    st.floats(min_value=0.5, max_value=3.0),
)
def test_derivative_matches_finite_difference_of_value(sigma, radius):
    potential = CotangentPotential(radius)
    d2 = potential.chord_squared(sigma)
    h = 1e-6 * d2
    numeric = (potential.evaluate(d2 + h) - potential.evaluate(d2 - h)) / (2.0 * h)
    assert numeric == pytest.approx(float(potential.derivative(d2)), rel=1e-7)


def test_arc_helpers_agree_with_closed_forms(cotangent):
    sigma = np.linspace(0.1, np.pi - 0.1, 50)
    np.testing.assert_allclose(cotangent.value_at_arc(sigma), cotangent_U(sigma), rtol=1e-12)
    np.testing.assert_allclose(cotangent.derivative_at_arc(sigma), cotangent_Uprime(sigma), rtol=1e-10)


def test_registered_potentials_are_attractive():
    for name in POTENTIALS:
        assert get_potential(name, 1.5).is_attractive()


def test_repulsive_double_is_not_attractive(repulsive):
    assert not repulsive.is_attractive()


def test_harmonic_test_potential(harmonic):
    assert harmonic.evaluate(2.0) == -2.0
    np.testing.assert_array_equal(harmonic.derivative(np.array([0.5, 1.0])), [-1.0, -1.0])


def test_get_potential():
    potential = get_potential("cotangent", radius=2.0)
    assert isinstance(potential, CotangentPotential)
    assert potential.radius == 2.0
    assert isinstance(get_potential("harmonic-test"), HarmonicTestPotential)
    with pytest.raises(ValueError, match="cotangent"):
        get_potential("newtonian")
    with pytest.raises(ValueError):
        CotangentPotential(radius=0.0)
