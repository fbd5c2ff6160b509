#!/usr/bin/env python3
"""
球面坐标基本运算
弧角、弦长、三角形可行性以及形状在球面上的临时放置
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Tuple

import numpy as np

from .errors import DegenerateShape, InvalidMasses, InvalidShape

logger = logging.getLogger(__name__)

# 两两配对顺序 (1,2), (2,3), (3,1)，全库统一
PAIRS: Tuple[Tuple[int, int], ...] = ((0, 1), (1, 2), (2, 0))


@dataclass(frozen=True)
class Masses:
    """三个正质量"""

    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        values = np.array([self.m1, self.m2, self.m3], dtype=float)
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise InvalidMasses(f"质量必须为正的有限数: {values.tolist()}")

    @classmethod
    def of(cls, values: Iterable[float]) -> "Masses":
        m1, m2, m3 = (float(v) for v in values)
        return cls(m1, m2, m3)

    @property
    def total(self) -> float:
        return self.m1 + self.m2 + self.m3

    def as_array(self) -> np.ndarray:
        return np.array([self.m1, self.m2, self.m3], dtype=float)

    def permuted(self, order: Tuple[int, int, int]) -> "Masses":
        """新编号 k 的物体取旧编号 order[k] 的质量"""
        return Masses.of(self.as_array()[list(order)])


@dataclass(frozen=True)
class Shape:
    """三个互弧角 (sigma12, sigma23, sigma31)，单位为弧度"""

    sigma12: float
    sigma23: float
    sigma31: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.as_array())):
            raise InvalidShape(f"弧角必须为有限数: {self.as_array().tolist()}")

    @classmethod
    def of(cls, values: Iterable[float]) -> "Shape":
        s12, s23, s31 = (float(v) for v in values)
        return cls(s12, s23, s31)

    @classmethod
    def from_degrees(cls, values: Iterable[float]) -> "Shape":
        return cls.of(np.radians(np.asarray(list(values), dtype=float)))

    @classmethod
    def isosceles(cls, sigma12: float, sigma: float) -> "Shape":
        """sigma23 = sigma31 = sigma 的等腰形状"""
        return cls(float(sigma12), float(sigma), float(sigma))

    def as_array(self) -> np.ndarray:
        return np.array([self.sigma12, self.sigma23, self.sigma31], dtype=float)

    def permuted(self, order: Tuple[int, int, int]) -> "Shape":
        """
        按物体重新编号后的形状

        Args:
            order: 新编号 k 对应的旧编号 order[k]

        Returns:
            Shape: 新编号下的弧角
        """
        old = self.as_array()
        lookup = {}
        for (i, j), value in zip(PAIRS, old):
            lookup[(i, j)] = lookup[(j, i)] = value
        return Shape.of(lookup[(order[i], order[j])] for i, j in PAIRS)


@dataclass
class Configuration:
    """
    球面坐标构型

    theta/phi 为三个物体的极角与方位角，omega 为绕 z 轴的角速度。
    """

    theta: np.ndarray
    phi: np.ndarray
    omega: float = 0.0
    radius: float = 1.0
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float).reshape(3)
        self.phi = np.asarray(self.phi, dtype=float).reshape(3)

    @property
    def cos_theta(self) -> np.ndarray:
        return np.cos(self.theta)

    def cos_phi_differences(self) -> np.ndarray:
        """cos(phi_i - phi_j)，顺序 (1,2), (2,3), (3,1)"""
        return np.array([np.cos(self.phi[i] - self.phi[j]) for i, j in PAIRS])

    def sin_phi_differences(self) -> np.ndarray:
        return np.array([np.sin(self.phi[i] - self.phi[j]) for i, j in PAIRS])


def arc_angle(thetai, phii, thetaj, phij):
    """
    两点之间的弧角

    数学上等于 arccos(cos θi cos θj + sin θi sin θj cos(φi-φj))，
    这里用叉积/点积的 atan2 形式，在 0 和 π 附近也不丢精度。

    Returns:
        弧角，范围 [0, π]
    """
    ui = unit_vectors(thetai, phii)
    uj = unit_vectors(thetaj, phij)
    cross = np.linalg.norm(np.cross(ui, uj), axis=-1)
    dot = np.sum(ui * uj, axis=-1)
    return np.arctan2(cross, dot)


def chord_from_arc(sigma, radius: float):
    """弦长 D = 2R sin(σ/2)"""
    return 2.0 * radius * np.sin(np.asarray(sigma, dtype=float) / 2.0)


def unit_vectors(theta, phi) -> np.ndarray:
    """球面坐标 -> 单位球上的笛卡尔坐标，最后一维为 (X, Y, Z)/R"""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return np.stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)],
        axis=-1,
    )


def configuration_shape(configuration: Configuration) -> Shape:
    """构型 -> 形状"""
    theta, phi = configuration.theta, configuration.phi
    return Shape.of(arc_angle(theta[i], phi[i], theta[j], phi[j]) for i, j in PAIRS)


def triangle_feasible(shape: Shape, tol: float = 1e-12) -> bool:
    """
    三个弧角能否构成球面三角形

    条件: 0 < σij <= π，σij <= σjk + σki，σ12 + σ23 + σ31 <= 2π
    """
    s = shape.as_array()
    if np.any(s <= 0.0) or np.any(s > np.pi + tol):
        return False
    total = s.sum()
    if total > 2.0 * np.pi + tol:
        return False
    return bool(np.all(s <= total - s + tol))


def is_geodesic_collinear(shape: Shape, tol: float = 1e-9) -> bool:
    """形状是否退化为同一大圆上的三点（欧拉型）"""
    s = shape.as_array()
    total = s.sum()
    on_half_circle = np.max(s) >= total - np.max(s) - tol
    on_full_circle = total >= 2.0 * np.pi - tol
    return bool(on_half_circle or on_full_circle)


def _clamp_unit(value: float, tol: float, what: str) -> float:
    """把舍入误差范围内的 cos 值夹到 [-1, 1]，超出容许量则报错"""
    if abs(value) > 1.0 + tol:
        raise DegenerateShape(f"{what} = {value:.15g} 超出 [-1, 1]")
    return float(np.clip(value, -1.0, 1.0))


def temporal_placement(shape: Shape, clamp_tol: float = 1e-12) -> Configuration:
    """
    临时放置: 物体3在北极，物体1在 φ=0 的经线上

    (θ3, φ3) = (0, 0), (θ1, φ1) = (σ31, 0), (θ2, φ2) = (σ23, α)

    Args:
        shape: 可行形状
        clamp_tol: cos α 的夹取容许量

    Returns:
        Configuration: 只含位置 (omega=0)
    """
    s12, s23, s31 = shape.as_array()
    denominator = np.sin(s31) * np.sin(s23)
    if abs(denominator) < 1e-15:
        raise InvalidShape(f"物体位于极点，α 无定义: {shape}")

    cos_alpha = (np.cos(s12) - np.cos(s31) * np.cos(s23)) / denominator
    alpha = np.arccos(_clamp_unit(cos_alpha, clamp_tol, "cos α"))

    return Configuration(
        theta=np.array([s31, s23, 0.0]),
        phi=np.array([0.0, alpha, 0.0]),
        metadata={"placement": "temporal"},
    )
