#!/usr/bin/env python3
"""
两体势函数
U(D^2) 与 U'(D^2) = dU/d(D^2)，吸引势要求 U' < 0
"""

import logging
from abc import ABC, abstractmethod
from typing import Dict, Type

import numpy as np

from .errors import SingularPotential

logger = logging.getLogger(__name__)


def _sin_of_arc(sigma) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    if np.any(sigma <= 0.0) or np.any(sigma >= np.pi):
        raise SingularPotential(f"余切势在 σ ∈ {{0, π}} 处奇异: σ = {sigma}")
    return np.sin(sigma)


def cotangent_U(sigma, radius: float = 1.0):
    """余切势 U = cot(σ)/R"""
    return np.cos(sigma) / (radius * _sin_of_arc(sigma))


def cotangent_Uprime(sigma, radius: float = 1.0):
    """余切势导数 U'(D^2) = -1 / (2 R^3 sin^3 σ)"""
    return -1.0 / (2.0 * radius**3 * _sin_of_arc(sigma) ** 3)


class PairPotential(ABC):
    """以弦长平方 D^2 为自变量的两体势"""

    name = "abstract"

    def __init__(self, radius: float = 1.0):
        if not radius > 0:
            raise ValueError(f"球半径必须为正: {radius}")
        self.radius = float(radius)

    @abstractmethod
    def evaluate(self, d2):
        """U(D^2)"""

    @abstractmethod
    def derivative(self, d2):
        """U'(D^2)"""

    def chord_squared(self, sigma):
        """D^2 = 4 R^2 sin^2(σ/2)"""
        return (2.0 * self.radius * np.sin(np.asarray(sigma, dtype=float) / 2.0)) ** 2

    def value_at_arc(self, sigma):
        return self.evaluate(self.chord_squared(sigma))

    def derivative_at_arc(self, sigma):
        return self.derivative(self.chord_squared(sigma))

    def is_attractive(self, samples: int = 512) -> bool:
        """在 (0, 4R^2) 的稠密采样上检查 U' < 0"""
        sigma = np.linspace(0.0, np.pi, samples + 2)[1:-1]
        return bool(np.all(self.derivative_at_arc(sigma) < 0.0))

    def __repr__(self):
        return f"{type(self).__name__}(radius={self.radius})"


class CotangentPotential(PairPotential):
    """球面上的余切势，牛顿势在正曲率空间的对应"""

    name = "cotangent"

    def _cos_sin(self, d2):
        d2 = np.asarray(d2, dtype=float)
        four_r2 = 4.0 * self.radius**2
        if np.any(d2 <= 0.0) or np.any(d2 >= four_r2):
            raise SingularPotential(f"D^2 必须在 (0, 4R^2) 内: {d2}")
        cos_sigma = 1.0 - d2 / (2.0 * self.radius**2)
        sin_sigma = np.sqrt(d2 * (four_r2 - d2)) / (2.0 * self.radius**2)
        return cos_sigma, sin_sigma

    def evaluate(self, d2):
        cos_sigma, sin_sigma = self._cos_sin(d2)
        return cos_sigma / (self.radius * sin_sigma)

    def derivative(self, d2):
        _, sin_sigma = self._cos_sin(d2)
        return -1.0 / (2.0 * self.radius**3 * sin_sigma**3)


class HarmonicTestPotential(PairPotential):
    """测试用吸引势 U = -D^2, U' = -1"""

    name = "harmonic-test"

    def evaluate(self, d2):
        return -np.asarray(d2, dtype=float)

    def derivative(self, d2):
        return -np.ones_like(np.asarray(d2, dtype=float))


POTENTIALS: Dict[str, Type[PairPotential]] = {
    CotangentPotential.name: CotangentPotential,
    HarmonicTestPotential.name: HarmonicTestPotential,
}


def get_potential(name: str, radius: float = 1.0) -> PairPotential:
    """按名称创建势函数"""
    try:
        potential_cls = POTENTIALS[name]
    except KeyError:
        raise ValueError(f"未知势函数: {name}，可选: {', '.join(sorted(POTENTIALS))}")
    potential = potential_cls(radius=radius)
    logger.debug(f"使用势函数 {potential}")
    return potential
