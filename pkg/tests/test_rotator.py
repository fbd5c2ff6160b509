import numpy as np
import pytest

from conftest import HALF_PI, random_shape
from src.core import rotator
from src.core.errors import InvalidShape, InvalidTranslation, RepulsivePotential
from src.core.families import solve_equal_mass_isosceles, solve_two_equal_mass
from src.core.geometry import Configuration, Masses, Shape
from src.core.inertia import EigenCandidate, build_J, eigen_decompose, positive_candidates
from src.core.potentials import CotangentPotential
from src.core.rotator import (
    Classification,
    check_rotator,
    gamma_identity_residual,
    hemisphere_and_sign_conditions,
    reduced_equation_residuals,
)


def test_right_equilateral_equal_masses(right_equilateral, cotangent):
    for m in (1.0, 2.5):
        masses = Masses(m, m, m)
        verdict = check_rotator(masses, right_equilateral, cotangent)
        assert verdict.is_rotator
        assert verdict.classification is Classification.EXTENDED_LAGRANGIAN
        assert verdict.omega_squared_scaled == pytest.approx(3.0 * m, abs=1e-12)
        assert verdict.gamma > 0
        np.testing.assert_allclose(verdict.configuration.cos_theta, 1 / np.sqrt(3), atol=1e-12)
        np.testing.assert_allclose(verdict.configuration.cos_phi_differences(), -0.5, atol=1e-12)
        assert verdict.configuration.omega == pytest.approx(np.sqrt(3.0 * m))
        np.testing.assert_allclose(verdict.quantities, verdict.quantities[0], rtol=1e-12)


def _isosceles_root(sigma12, near):
    return min(solve_equal_mass_isosceles(sigma12), key=lambda s: abs(s - near))


def test_isosceles_member_common_angular_velocity(equal_masses, cotangent):
    shape = Shape.isosceles(np.pi / 3, _isosceles_root(np.pi / 3, 1.33240))
    verdict = check_rotator(equal_masses, shape, cotangent, tol=1e-8)
    assert verdict.is_rotator
    assert verdict.omega_squared_scaled == pytest.approx(3.85072, abs=1e-3)


def test_scalene_equal_mass_shape_is_not_a_rotator(equal_masses, cotangent):
    verdict = check_rotator(equal_masses, Shape(0.9, 1.1, 1.3), cotangent)
    assert not verdict.is_rotator
    assert verdict.classification is Classification.NONE
    assert verdict.residual is None or verdict.residual > 1e-9


def test_equilateral_on_the_equator_is_eulerian(equal_masses, cotangent):
    sigma = 2 * np.pi / 3
    verdict = check_rotator(equal_masses, Shape(sigma, sigma, sigma), cotangent)
    assert not verdict.is_rotator
    assert verdict.classification is Classification.EQUATORIAL_EULERIAN


def test_meridian_geodesic_shape(cotangent):
    verdict = check_rotator(Masses(1.0, 2.0, 3.0), Shape(0.4, 0.6, 1.0), cotangent)
    assert not verdict.is_rotator
    assert verdict.classification in (Classification.MERIDIAN_EULERIAN, Classification.EQUATORIAL_EULERIAN)


def test_infeasible_shape_raises(equal_masses, cotangent):
    with pytest.raises(InvalidShape):
        check_rotator(equal_masses, Shape(0.1, 0.2, 0.5), cotangent)


def test_equilateral_shapes_reject_unequal_masses(rng, cotangent):
    for _ in range(200):
        masses = Masses.of(rng.uniform(1.0, 10.0, size=3))
        sigma = rng.uniform(0.2, 2.0)
        verdict = check_rotator(masses, Shape(sigma, sigma, sigma), cotangent)
        assert not verdict.is_rotator

    for sigma in np.linspace(0.2, 2.0, 10):
        assert check_rotator(Masses(3.0, 3.0, 3.0), Shape(sigma, sigma, sigma), cotangent).is_rotator


def test_equal_mass_equilateral_with_harmonic_potential(equal_masses, harmonic):
    verdict = check_rotator(equal_masses, Shape(1.0, 1.0, 1.0), harmonic)
    assert verdict.is_rotator
    assert verdict.omega_squared > 0


def test_repulsive_potential_is_rejected(rng, equal_masses, repulsive):
    for _ in range(100):
        with pytest.raises(RepulsivePotential):
            check_rotator(equal_masses, random_shape(rng), repulsive)


def test_scale_invariance_of_scaled_angular_velocity(equal_masses):
    shape = Shape.isosceles(np.pi / 3, _isosceles_root(np.pi / 3, 1.33240))
    reference = check_rotator(equal_masses, shape, CotangentPotential(1.0), tol=1e-8)
    for radius in (0.5, 2.0, 7.0):
        verdict = check_rotator(equal_masses, shape, CotangentPotential(radius), tol=1e-8)
        assert verdict.is_rotator == reference.is_rotator
        assert verdict.omega_squared_scaled == pytest.approx(reference.omega_squared_scaled, rel=1e-12)


def test_mass_relabelling_permutes_configuration(cotangent):
    point = solve_two_equal_mass(1.2)
    reference = check_rotator(point.masses, point.shape, cotangent)
    assert reference.is_rotator

    for order in ((1, 2, 0), (2, 0, 1), (0, 2, 1)):
        verdict = check_rotator(point.masses.permuted(order), point.shape.permuted(order), cotangent)
        assert verdict.is_rotator
        assert verdict.omega_squared == pytest.approx(reference.omega_squared, rel=1e-9)
        assert verdict.gamma == pytest.approx(reference.gamma, rel=1e-9)
        np.testing.assert_allclose(
            verdict.configuration.cos_theta, reference.configuration.cos_theta[list(order)], atol=1e-9
        )


def test_gamma_identity_and_reduced_equations(rng, equal_masses, cotangent):
    cases = [(equal_masses, Shape(HALF_PI, HALF_PI, HALF_PI))]
    cases += [(equal_masses, Shape(s, s, s)) for s in rng.uniform(0.2, 2.0, size=20)]
    point = solve_two_equal_mass(1.5)
    cases.append((point.masses, point.shape))

    for masses, shape in cases:
        verdict = check_rotator(masses, shape, cotangent)
        assert verdict.is_rotator
        assert gamma_identity_residual(verdict, masses, shape, cotangent) <= 1e-9
        residuals = reduced_equation_residuals(verdict.configuration, masses, cotangent)
        assert residuals.max <= 1e-8
        assert hemisphere_and_sign_conditions(verdict.configuration)


def test_right_equilateral_residuals_at_roundoff(equal_masses, right_equilateral, cotangent):
    verdict = check_rotator(equal_masses, right_equilateral, cotangent)
    assert reduced_equation_residuals(verdict.configuration, equal_masses, cotangent).max <= 1e-12


def test_perturbed_configuration_has_theta_residual(equal_masses, right_equilateral, cotangent):
    configuration = check_rotator(equal_masses, right_equilateral, cotangent).configuration
    perturbed = Configuration(
        configuration.theta + np.array([1e-3, 0.0, 0.0]),
        configuration.phi,
        omega=configuration.omega,
    )
    residuals = reduced_equation_residuals(perturbed, equal_masses, cotangent)
    assert 1e-5 < np.max(residuals.theta) < 1e-1


def test_hemisphere_conditions_reject_eulerian_layouts():
    equator = Configuration(np.full(3, HALF_PI), np.array([0.0, 2.0, 4.0]))
    assert not hemisphere_and_sign_conditions(equator)

    meridian = Configuration(np.array([0.5, 1.0, 0.7]), np.array([0.3, 0.3, 2.0]))
    assert not hemisphere_and_sign_conditions(meridian)

    mixed = Configuration(np.array([0.5, 2.5, 0.7]), np.array([0.0, 4.0, 2.0]))
    assert not hemisphere_and_sign_conditions(mixed)


def test_candidate_failing_translation_falls_through_to_next(monkeypatch, cotangent):
    point = solve_two_equal_mass(1.2)
    reference = check_rotator(point.masses, point.shape, cotangent)
    candidates = positive_candidates(eigen_decompose(build_J(point.masses, point.shape)))
    candidate = min(candidates, key=lambda c: abs(c.eigenvalue - reference.eigenvalue))
    decoy = EigenCandidate(candidate.eigenvalue, candidate.vector.copy(), candidate.indices)
    monkeypatch.setattr(rotator, "positive_candidates", lambda spectrum: [decoy] + candidates)

    translate = rotator.translate_candidate

    def translate_all_but_decoy(masses, shape, chosen, **kwargs):
        if chosen is decoy:
            raise InvalidTranslation("cos θ 超出 [-1, 1]")
        return translate(masses, shape, chosen, **kwargs)

    monkeypatch.setattr(rotator, "translate_candidate", translate_all_but_decoy)
    verdict = check_rotator(point.masses, point.shape, cotangent)
    assert verdict.is_rotator
    assert verdict.classification == Classification.EXTENDED_LAGRANGIAN
    assert any("平移失败" in note for note in verdict.notes)
    assert verdict.omega_squared_scaled == pytest.approx(point.omega_squared_scaled, rel=1e-12)


def test_all_candidates_failing_translation_is_not_a_rotator(monkeypatch, right_equilateral, cotangent):
    def reject(*args, **kwargs):
        raise InvalidTranslation("cos θ 超出 [-1, 1]")

    monkeypatch.setattr(rotator, "translate_candidate", reject)
    verdict = check_rotator(Masses(1.0, 1.0, 1.0), right_equilateral, cotangent)
    assert not verdict.is_rotator
    assert verdict.classification == Classification.NONE
    assert verdict.residual <= 1e-12
    assert verdict.configuration is None
