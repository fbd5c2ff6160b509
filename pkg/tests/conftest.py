import numpy as np
import pytest

from src.core.geometry import PAIRS, Masses, Shape, unit_vectors
from src.core.potentials import CotangentPotential, HarmonicTestPotential, PairPotential

HALF_PI = np.pi / 2


class RepulsiveTestPotential(PairPotential):
    """U = D^2, U' = +1"""

    name = "repulsive-test"

    def evaluate(self, d2):
        return np.asarray(d2, dtype=float)

    def derivative(self, d2):
        return np.ones_like(np.asarray(d2, dtype=float))


def random_shape(rng, margin=0.05):
    """三个随机球面点的形状，远离碰撞与对跖"""
    while True:
        points = rng.normal(size=(3, 3))
        points /= np.linalg.norm(points, axis=1)[:, None]
        arcs = np.array([np.arccos(np.clip(points[i] @ points[j], -1.0, 1.0)) for i, j in PAIRS])
        if np.all(arcs > margin) and np.all(arcs < np.pi - margin):
            return Shape.of(arcs)


def random_state_angles(rng):
    theta = rng.uniform(0.4, np.pi - 0.4, size=3)
    phi = rng.uniform(0.0, 2.0 * np.pi, size=3)
    return theta, phi


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def equal_masses():
    return Masses(1.0, 1.0, 1.0)


@pytest.fixture
def right_equilateral():
    return Shape(HALF_PI, HALF_PI, HALF_PI)


@pytest.fixture
def cotangent():
    return CotangentPotential(1.0)


@pytest.fixture
def harmonic():
    return HarmonicTestPotential(1.0)


@pytest.fixture
def repulsive():
    return RepulsiveTestPotential(1.0)


@pytest.fixture
def equatorial_points():
    """赤道上相隔 π/2 的两点"""
    return unit_vectors(np.array([HALF_PI, HALF_PI]), np.array([0.0, HALF_PI]))
