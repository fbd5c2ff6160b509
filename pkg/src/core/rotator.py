#!/usr/bin/env python3
"""
刚体转子分析器
判定给定质量与形状是否满足运动方程：计算 ω^2、γ、残差，
区分欧拉型与扩展拉格朗日型相对平衡。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

import numpy as np

from .errors import InvalidShape, InvalidTranslation, RepulsivePotential
from .geometry import PAIRS, Configuration, Masses, Shape, is_geodesic_collinear, triangle_feasible
from .inertia import (
    EigenCandidate,
    MassesLike,
    build_J,
    eigen_decompose,
    mass_array,
    positive_candidates,
    translate_candidate,
)
from .potentials import PairPotential

logger = logging.getLogger(__name__)


class Classification(str, Enum):
    EQUATORIAL_EULERIAN = "Equatorial-Eulerian"
    MERIDIAN_EULERIAN = "Meridian-Eulerian"
    EXTENDED_LAGRANGIAN = "ExtendedLagrangian"
    FIXED_POINT = "Fixed-point"
    NONE = "None"


@dataclass
class RotatorVerdict:
    """
    刚体转子判定结果

    omega_squared 为 ω^2 = -2 / q̄，omega_squared_scaled 为 R^3 ω^2，
    gamma = ω^2 / (2 Σ mk cos^2 θk)。非转子时这些量为 None。
    """

    is_rotator: bool
    classification: Classification
    residual: Optional[float] = None
    omega_squared: Optional[float] = None
    omega_squared_scaled: Optional[float] = None
    gamma: Optional[float] = None
    eigenvalue: Optional[float] = None
    quantities: Optional[np.ndarray] = None
    configuration: Optional[Configuration] = None
    notes: List[str] = field(default_factory=list)


@dataclass
class ReducedResiduals:
    """相对平衡约化方程的绝对残差"""

    phi: np.ndarray
    theta: np.ndarray
    cxy: float

    @property
    def max(self) -> float:
        return float(max(np.max(self.phi), np.max(self.theta), self.cxy))


def _chord_squared(shape: Shape, radius: float) -> np.ndarray:
    return (2.0 * radius * np.sin(shape.as_array() / 2.0)) ** 2


def rotator_quantities(
    masses: MassesLike,
    shape: Shape,
    potential: PairPotential,
    candidate: EigenCandidate,
) -> np.ndarray:
    """
    转子量 qij = ψi ψj / (sqrt(mi mj) U'(Dij^2))，顺序 (1,2), (2,3), (3,1)

    三者相等时公共值为 -2/ω^2。
    """
    m = mass_array(masses)
    psi = candidate.vector
    uprime = potential.derivative(_chord_squared(shape, potential.radius))
    return np.array(
        [psi[i] * psi[j] / (np.sqrt(m[i] * m[j]) * uprime[k]) for k, (i, j) in enumerate(PAIRS)]
    )


def _relative_spread(quantities: np.ndarray) -> float:
    mean = np.mean(quantities)
    return float(np.max(np.abs(quantities - mean)) / abs(mean))


def _eulerian_verdict(masses, shape, candidates, notes) -> RotatorVerdict:
    """共大圆形状只做识别，不求解"""
    total = mass_array(masses).sum()
    equatorial = any(total - c.eigenvalue <= 1e-9 * total for c in candidates)
    classification = (
        Classification.EQUATORIAL_EULERIAN if equatorial else Classification.MERIDIAN_EULERIAN
    )
    notes.append("三点共大圆，欧拉型相对平衡只做识别")
    logger.info(f"形状 {shape.as_array()} 识别为 {classification.value}")
    return RotatorVerdict(is_rotator=False, classification=classification, notes=notes)


def check_rotator(
    masses: MassesLike,
    shape: Shape,
    potential: PairPotential,
    tol: float = 1e-9,
    gap_tol: float = 1e-9,
    clamp_tol: float = 1e-12,
    collinear_tol: float = 1e-9,
) -> RotatorVerdict:
    """
    刚体转子检验

    枚举 J 的全正特征向量候选，计算三个转子量；若某个候选的相对偏差
    不超过 tol，则形状是刚体转子，并给出 ω^2、γ 和构型。

    Args:
        masses: 三个质量
        shape: 弧角
        potential: 两体势
        tol: 转子量的相对容许偏差

    Returns:
        RotatorVerdict: 判定结果
    """
    if not triangle_feasible(shape):
        raise InvalidShape(f"弧角不能构成球面三角形: {shape.as_array()}")

    uprime = potential.derivative(_chord_squared(shape, potential.radius))
    if np.any(uprime > 0.0):
        raise RepulsivePotential(f"U' > 0 (斥力)，球面上不存在拉格朗日相对平衡: U' = {uprime}")

    notes: List[str] = []
    spectrum = eigen_decompose(build_J(masses, shape), gap_tol)
    candidates = positive_candidates(spectrum)

    if is_geodesic_collinear(shape, collinear_tol):
        return _eulerian_verdict(masses, shape, candidates, notes)

    if not candidates:
        notes.append("没有分量全正的特征向量")
        return RotatorVerdict(is_rotator=False, classification=Classification.NONE, notes=notes)

    ranked = []
    for candidate in candidates:
        quantities = rotator_quantities(masses, shape, potential, candidate)
        if np.mean(quantities) > 0.0:
            raise RepulsivePotential(f"转子量公共值为正: {quantities}")
        spread = _relative_spread(quantities)
        logger.debug(f"候选 λ={candidate.eigenvalue:.12g}: q={quantities}, 偏差 {spread:.3e}")
        ranked.append((spread, candidate, quantities))
    ranked.sort(key=lambda item: item[0])

    # 按偏差从小到大尝试，取第一个能平移到球面的候选
    for spread, candidate, quantities in ranked:
        if spread > tol:
            break
        omega_squared = -2.0 / float(np.mean(quantities))
        try:
            configuration = translate_candidate(
                masses,
                shape,
                candidate,
                radius=potential.radius,
                omega=float(np.sqrt(omega_squared)),
                clamp_tol=clamp_tol,
            )
        except InvalidTranslation as e:
            notes.append(f"λ={candidate.eigenvalue:.12g} 平移失败: {e}")
            continue

        depth = mass_array(masses).sum() - candidate.eigenvalue
        return RotatorVerdict(
            is_rotator=True,
            classification=Classification.EXTENDED_LAGRANGIAN,
            residual=spread,
            omega_squared=omega_squared,
            omega_squared_scaled=potential.radius**3 * omega_squared,
            gamma=omega_squared / (2.0 * depth),
            eigenvalue=candidate.eigenvalue,
            quantities=quantities,
            configuration=configuration,
            notes=notes,
        )

    spread, candidate, quantities = ranked[0]
    return RotatorVerdict(
        is_rotator=False,
        classification=Classification.NONE,
        residual=spread,
        eigenvalue=candidate.eigenvalue,
        quantities=quantities,
        notes=notes,
    )


def gamma_identity_residual(
    verdict: RotatorVerdict, masses: MassesLike, shape: Shape, potential: PairPotential
) -> float:
    """max |γ cos θi cos θj + U'(Dij^2)|，接受的转子应为舍入误差量级"""
    cos_theta = verdict.configuration.cos_theta
    uprime = potential.derivative(_chord_squared(shape, potential.radius))
    return float(
        max(
            abs(verdict.gamma * cos_theta[i] * cos_theta[j] + uprime[k])
            for k, (i, j) in enumerate(PAIRS)
        )
    )


def reduced_equation_residuals(
    configuration: Configuration, masses: MassesLike, potential: PairPotential
) -> ReducedResiduals:
    """
    代入相对平衡的约化方程

    phi: 三个乘积 mi mj U' sin θi sin θj sin(φi - φj) 两两之差
    theta: -ω^2 mk sin θk cos θk 与右端之差
    cxy: |Σ mk sin θk cos θk (cos φk, sin φk)|
    """
    m = mass_array(masses)
    theta, phi = configuration.theta, configuration.phi
    omega = configuration.omega
    radius = configuration.radius
    sin_t, cos_t = np.sin(theta), np.cos(theta)

    def uprime(i, j):
        cos_sigma = cos_t[i] * cos_t[j] + sin_t[i] * sin_t[j] * np.cos(phi[i] - phi[j])
        d2 = 2.0 * radius**2 * (1.0 - cos_sigma)
        return float(potential.derivative(d2))

    products = np.array(
        [m[i] * m[j] * uprime(i, j) * sin_t[i] * sin_t[j] * np.sin(phi[i] - phi[j]) for i, j in PAIRS]
    )
    phi_residuals = np.abs(np.array([products[0] - products[1], products[1] - products[2]]))

    theta_residuals = np.zeros(3)
    for k in range(3):
        lhs = -(omega**2) * m[k] * sin_t[k] * cos_t[k]
        rhs = 0.0
        for i in range(3):
            if i == k:
                continue
            rhs += 2.0 * m[k] * m[i] * uprime(k, i) * (
                sin_t[k] * cos_t[i] - cos_t[k] * sin_t[i] * np.cos(phi[k] - phi[i])
            )
        theta_residuals[k] = abs(lhs - rhs)

    weights = m * sin_t * cos_t
    cxy = float(np.hypot(np.sum(weights * np.cos(phi)), np.sum(weights * np.sin(phi))))
    return ReducedResiduals(phi=phi_residuals, theta=theta_residuals, cxy=cxy)


def hemisphere_and_sign_conditions(configuration: Configuration, tol: float = 1e-12) -> bool:
    """
    扩展拉格朗日相对平衡的必要条件

    sin θk != 0，cos θk 同号且不为零，sin(φi - φj) 同号且不为零。
    """
    sin_t = np.sin(configuration.theta)
    cos_t = np.cos(configuration.theta)
    sin_gaps = configuration.sin_phi_differences()
    if np.any(np.abs(sin_t) <= tol) or np.any(np.abs(cos_t) <= tol):
        return False
    if np.any(np.abs(sin_gaps) <= tol):
        return False
    same_hemisphere = np.all(cos_t > 0) or np.all(cos_t < 0)
    same_orientation = np.all(sin_gaps > 0) or np.all(sin_gaps < 0)
    return bool(same_hemisphere and same_orientation)

