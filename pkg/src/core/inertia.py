#!/usr/bin/env python3
"""
惯性张量分析器
构造惯性张量 I 与质量对称的等价张量 J，求解 3x3 对称特征值问题，
并用平移公式把形状变成球面构型。
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidTranslation, NoPositiveEigenvector
from .geometry import PAIRS, Configuration, Masses, Shape, temporal_placement, unit_vectors

logger = logging.getLogger(__name__)

MassesLike = Union[Masses, Sequence[float], np.ndarray]

# 解析解的特征值间隔小于该比例时改用 LAPACK
_ANALYTIC_GAP = 1e-3
_RESIDUAL_TOL = 1e-12


@dataclass
class Spectrum:
    """
    J 的谱分解

    eigenvalues 升序排列，eigenvectors 的第 a 列对应第 a 个特征值，
    groups 为简并特征空间的下标分组。
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    groups: Tuple[Tuple[int, ...], ...]
    method: str = "analytic"

    @property
    def degenerate(self) -> Tuple[bool, ...]:
        flags = [False] * len(self.eigenvalues)
        for group in self.groups:
            for index in group:
                flags[index] = len(group) > 1
        return tuple(flags)

    def vector(self, index: int) -> np.ndarray:
        return self.eigenvectors[:, index]


@dataclass
class EigenCandidate:
    """分量全为正的单位特征向量（可能取自简并子空间）"""

    eigenvalue: float
    vector: np.ndarray
    indices: Tuple[int, ...]

    @property
    def degenerate(self) -> bool:
        return len(self.indices) > 1


def mass_array(masses: MassesLike) -> np.ndarray:
    if isinstance(masses, Masses):
        return masses.as_array()
    return np.asarray(masses, dtype=float).reshape(3)


def build_J(masses: MassesLike, shape: Shape) -> np.ndarray:
    """
    等价惯性张量 J

    对角元为两两质量和 (m2+m3, m3+m1, m1+m2)，
    非对角元为 -sqrt(mi mj) cos σij。
    """
    m = mass_array(masses)
    J = np.diag([m[1] + m[2], m[2] + m[0], m[0] + m[1]])
    for (i, j), cos_sigma in zip(PAIRS, np.cos(shape.as_array())):
        J[i, j] = J[j, i] = -np.sqrt(m[i] * m[j]) * cos_sigma
    return J


def build_I_temporal(masses: MassesLike, shape: Shape) -> np.ndarray:
    """临时放置下的笛卡尔惯性张量（已约去 R^2），仅作为 J 的交叉校验"""
    m = mass_array(masses)
    placement = temporal_placement(shape)
    u = unit_vectors(placement.theta, placement.phi)
    return m.sum() * np.eye(3) - (u.T * m) @ u


def characteristic_polynomial(masses: MassesLike, shape: Shape) -> Tuple[float, float, float]:
    """
    特征多项式 p(λ) = λ^3 + c2 λ^2 + c1 λ + c0 的系数

    由各物体对称的展开式直接给出，与 det(λ - J) 一致。
    """
    m = mass_array(masses)
    c12, c23, c31 = np.cos(shape.as_array())
    a, b, c = m[0] + m[1], m[1] + m[2], m[2] + m[0]
    k12 = m[0] * m[1] * c12**2
    k23 = m[1] * m[2] * c23**2
    k31 = m[2] * m[0] * c31**2

    c2 = -(a + b + c)
    c1 = a * b + b * c + c * a - (k12 + k23 + k31)
    c0 = -a * b * c + a * k12 + b * k23 + c * k31 + 2.0 * m.prod() * c12 * c23 * c31
    return float(c2), float(c1), float(c0)


def matrix_polynomial(J: np.ndarray) -> Tuple[float, float, float]:
    """3x3 对称矩阵的特征多项式系数 (c2, c1, c0)"""
    minors = (
        J[0, 0] * J[1, 1] - J[0, 1] ** 2
        + J[1, 1] * J[2, 2] - J[1, 2] ** 2
        + J[2, 2] * J[0, 0] - J[2, 0] ** 2
    )
    return -np.trace(J), minors, -np.linalg.det(J)


def _analytic_eigenvalues(J: np.ndarray) -> np.ndarray:
    """三角函数形式的闭式特征值，升序"""
    off = J[0, 1] ** 2 + J[1, 2] ** 2 + J[0, 2] ** 2
    if off == 0.0:
        return np.sort(np.diag(J))

    q = np.trace(J) / 3.0
    p = np.sqrt((np.sum((np.diag(J) - q) ** 2) + 2.0 * off) / 6.0)
    B = (J - q * np.eye(3)) / p
    r = np.clip(np.linalg.det(B) / 2.0, -1.0, 1.0)
    angle = np.arccos(r) / 3.0

    largest = q + 2.0 * p * np.cos(angle)
    smallest = q + 2.0 * p * np.cos(angle + 2.0 * np.pi / 3.0)
    middle = 3.0 * q - largest - smallest
    return np.array([smallest, middle, largest])


def _newton_polish(J: np.ndarray, values: np.ndarray) -> np.ndarray:
    c2, c1, c0 = matrix_polynomial(J)
    polished = values.copy()
    for k, lam in enumerate(values):
        p = ((lam + c2) * lam + c1) * lam + c0
        dp = (3.0 * lam + 2.0 * c2) * lam + c1
        if dp == 0.0:
            continue
        candidate = lam - p / dp
        if abs(((candidate + c2) * candidate + c1) * candidate + c0) <= abs(p):
            polished[k] = candidate
    return polished


def _cross_product_vector(J: np.ndarray, lam: float) -> np.ndarray:
    """(J - λ) 两行叉积中模最大者，即列主元选择"""
    A = J - lam * np.eye(3)
    products = [np.cross(A[0], A[1]), np.cross(A[1], A[2]), np.cross(A[2], A[0])]
    best = max(products, key=np.linalg.norm)
    return best / np.linalg.norm(best)


def _is_accurate(J: np.ndarray, values: np.ndarray, vectors: np.ndarray, scale: float) -> bool:
    residual = np.max(np.abs(J @ vectors - vectors * values))
    orthogonality = np.max(np.abs(vectors.T @ vectors - np.eye(3)))
    return residual <= _RESIDUAL_TOL * scale and orthogonality <= _RESIDUAL_TOL


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """每列绝对值最大的分量取正，使输出可复现"""
    fixed = vectors.copy()
    for a in range(fixed.shape[1]):
        if fixed[np.argmax(np.abs(fixed[:, a])), a] < 0:
            fixed[:, a] = -fixed[:, a]
    return fixed


def _group_eigenvalues(values: np.ndarray, gap: float) -> Tuple[Tuple[int, ...], ...]:
    groups = [[0]]
    for index in range(1, len(values)):
        if values[index] - values[index - 1] < gap:
            groups[-1].append(index)
        else:
            groups.append([index])
    return tuple(tuple(group) for group in groups)


def eigen_decompose(J: np.ndarray, gap_tol: float = 1e-9) -> Spectrum:
    """
    3x3 对称矩阵的特征分解

    先用闭式根加一步牛顿修正、叉积求特征向量；特征值聚集或精度不够时
    退回 numpy.linalg.eigh。简并子空间（间隔 < gap_tol * ||J||）内给出
    正交基并记录分组。

    Args:
        J: 对称矩阵
        gap_tol: 简并判定的相对间隔

    Returns:
        Spectrum: 升序特征值与正交归一特征向量
    """
    J = np.asarray(J, dtype=float)
    J = 0.5 * (J + J.T)
    scale = max(float(np.max(np.abs(J))), np.finfo(float).tiny)

    values = _newton_polish(J, _analytic_eigenvalues(J))
    method = "analytic"
    vectors = None
    if np.min(np.diff(values)) >= _ANALYTIC_GAP * scale:
        vectors = np.column_stack([_cross_product_vector(J, lam) for lam in values])
    if vectors is None or not _is_accurate(J, values, vectors, scale):
        values, vectors = np.linalg.eigh(J)
        method = "eigh"

    groups = _group_eigenvalues(values, gap_tol * scale)
    if any(len(group) > 1 for group in groups):
        logger.debug(f"J 特征值简并: {values}, 分组 {groups}")
    return Spectrum(
        eigenvalues=values,
        eigenvectors=_fix_signs(vectors),
        groups=groups,
        method=method,
    )


def _positive_cone_vector(basis: np.ndarray) -> Optional[np.ndarray]:
    """
    在子空间的单位球面上最大化 min_k ψk

    一维子空间只需调整符号；二维子空间的最优点在某个分量的峰值处
    或两个分量相等处，逐一比较即可；三维时取 (1,1,1)/√3。
    """
    dimension = basis.shape[1]
    if dimension == 1:
        v = basis[:, 0]
        return v if v.sum() >= 0 else -v
    if dimension == 3:
        return np.ones(3) / np.sqrt(3.0)

    b1, b2 = basis[:, 0], basis[:, 1]
    angles = [np.arctan2(b2[k], b1[k]) for k in range(3)]
    for i, j in PAIRS:
        t0 = np.arctan2(-(b1[i] - b1[j]), b2[i] - b2[j])
        angles.extend([t0, t0 + np.pi])
    trial = [np.cos(t) * b1 + np.sin(t) * b2 for t in angles]
    return max(trial, key=np.min)


def positive_candidates(spectrum: Spectrum, tol: float = 1e-12) -> List[EigenCandidate]:
    """每个特征空间至多给出一个分量全正的候选向量，按特征值升序"""
    candidates = []
    for group in spectrum.groups:
        vector = _positive_cone_vector(spectrum.eigenvectors[:, list(group)])
        if vector is None or np.min(vector) <= tol:
            continue
        candidates.append(
            EigenCandidate(
                eigenvalue=float(np.mean(spectrum.eigenvalues[list(group)])),
                vector=vector / np.linalg.norm(vector),
                indices=group,
            )
        )
    return candidates


def translate_candidate(
    masses: MassesLike,
    shape: Shape,
    candidate: EigenCandidate,
    radius: float = 1.0,
    omega: float = 0.0,
    clamp_tol: float = 1e-12,
) -> Configuration:
    """
    平移公式: cos θk = ψk sqrt(M - λ) / sqrt(mk)

    方位角差由 cos σij = cos θi cos θj + sin θi sin θj cos(φi - φj) 反解，
    取 sin(φi - φj) > 0 的定向，规范 φ1 = 0。
    """
    m = mass_array(masses)
    depth = m.sum() - candidate.eigenvalue
    if depth <= 1e-12 * m.sum():
        raise InvalidTranslation(f"M - λ = {depth:.3e}，物体全部位于赤道")

    cos_theta = candidate.vector * np.sqrt(depth) / np.sqrt(m)
    if np.any(cos_theta <= 0.0) or np.any(cos_theta >= 1.0):
        raise InvalidTranslation(f"cos θ 超出 (0, 1): {cos_theta}")
    theta = np.arccos(cos_theta)
    sin_theta = np.sin(theta)

    gaps = []
    for (i, j), sigma in zip(PAIRS, shape.as_array()):
        cos_gap = (np.cos(sigma) - cos_theta[i] * cos_theta[j]) / (sin_theta[i] * sin_theta[j])
        if abs(cos_gap) > 1.0 + clamp_tol:
            raise InvalidTranslation(f"cos(φ{i + 1}-φ{j + 1}) = {cos_gap:.15g} 超出 [-1, 1]")
        gaps.append(np.arccos(np.clip(cos_gap, -1.0, 1.0)))
    gaps = np.array(gaps)

    # 三个方位角差同向时必须恰好绕一圈
    closure = gaps.sum() - 2.0 * np.pi
    if abs(closure) > 1e-6:
        raise InvalidTranslation(f"方位角差不闭合: Σ(φi-φj) - 2π = {closure:.3e}")

    phi = np.mod(np.array([0.0, -gaps[0], -gaps[0] - gaps[1]]), 2.0 * np.pi)
    return Configuration(
        theta=theta,
        phi=phi,
        omega=omega,
        radius=radius,
        metadata={"eigenvalue": candidate.eigenvalue, "indices": candidate.indices},
    )


def configuration_candidates(
    masses: MassesLike,
    shape: Shape,
    radius: float = 1.0,
    gap_tol: float = 1e-9,
    clamp_tol: float = 1e-12,
) -> List[Configuration]:
    """所有可由平移公式得到的构型（调用方再按转子条件筛选）"""
    spectrum = eigen_decompose(build_J(masses, shape), gap_tol)
    configurations = []
    for candidate in positive_candidates(spectrum):
        try:
            configurations.append(
                translate_candidate(masses, shape, candidate, radius=radius, clamp_tol=clamp_tol)
            )
        except InvalidTranslation as e:
            logger.debug(f"候选 λ={candidate.eigenvalue:.12g} 被舍弃: {e}")
    return configurations


def shape_to_configuration(
    masses: MassesLike,
    shape: Shape,
    eigen_index: Optional[int] = None,
    radius: float = 1.0,
    omega: float = 0.0,
    gap_tol: float = 1e-9,
    clamp_tol: float = 1e-12,
) -> Configuration:
    """
    形状 -> 构型

    Args:
        masses: 三个质量
        shape: 弧角
        eigen_index: 指定特征值下标（升序）；None 时取特征值最小的候选
        radius: 球半径
        omega: 写入构型的角速度

    Returns:
        Configuration: 球面坐标构型
    """
    spectrum = eigen_decompose(build_J(masses, shape), gap_tol)
    candidates = positive_candidates(spectrum)
    if eigen_index is not None:
        candidates = [c for c in candidates if eigen_index in c.indices]
    if not candidates:
        raise NoPositiveEigenvector(
            f"形状 {shape.as_array()} 没有分量同号的特征向量 (index={eigen_index})"
        )
    return translate_candidate(
        masses, shape, candidates[0], radius=radius, omega=omega, clamp_tol=clamp_tol
    )
