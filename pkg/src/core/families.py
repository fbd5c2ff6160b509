#!/usr/bin/env python3
"""
刚体转子解族
等质量等腰族 q(σ, σ12) = 0、其特殊点与对称映射、直角成员，
以及两等质量族 ν(σ) 的求解与曲线追踪。
"""

import logging
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq, minimize_scalar

from ..config.config import AnalysisConfig
from .errors import (
    DegenerateDenominator,
    InvalidShape,
    NonPositiveNu,
    NoRoot,
    RotatorError,
    RotatorRejected,
)
from .geometry import Masses, Shape, is_geodesic_collinear, triangle_feasible
from .potentials import CotangentPotential
from .rotator import RotatorVerdict, check_rotator

logger = logging.getLogger(__name__)

ISOSCELES_FAMILY = "equal-mass-isosceles"
TWO_EQUAL_MASS_FAMILY = "two-equal-mass"

EQUAL_MASSES = Masses(1.0, 1.0, 1.0)
# 两等质量族固定 σ12 = π/2
TWO_EQUAL_MASS_SIGMA12 = np.pi / 2
TWO_EQUAL_MASS_END = 3.0 * np.pi / 4

ROOT_MERGE_TOL = 1e-9
BRANCH_TOL = 1e-6
# 取整后重新检验时，向两侧各尝试的可写出值个数
ROUNDING_STEPS = 4

FRAME_COLUMNS = [
    "family",
    "parameter",
    "sigma12",
    "sigma23",
    "sigma31",
    "m1",
    "m2",
    "m3",
    "nu",
    "R3_omega2",
    "gamma",
    "residual",
    "cos_theta1",
    "cos_theta2",
    "cos_theta3",
    "cos_phi12",
    "cos_phi23",
    "cos_phi31",
]


@dataclass
class FamilyPoint:
    """解族上的一个刚体转子"""

    family: str
    parameter: float
    shape: Shape
    masses: Masses
    nu: float
    omega_squared_scaled: float
    gamma: float
    residual: float
    cos_theta: np.ndarray
    cos_phi_differences: np.ndarray

    @property
    def sigma(self) -> float:
        """等腰腰长 σ23 = σ31"""
        return self.shape.sigma31

    def to_row(self) -> Dict[str, object]:
        row = {
            "family": self.family,
            "parameter": self.parameter,
            "sigma12": self.shape.sigma12,
            "sigma23": self.shape.sigma23,
            "sigma31": self.shape.sigma31,
            "m1": self.masses.m1,
            "m2": self.masses.m2,
            "m3": self.masses.m3,
            "nu": self.nu,
            "R3_omega2": self.omega_squared_scaled,
            "gamma": self.gamma,
            "residual": self.residual,
        }
        for k in range(3):
            row[f"cos_theta{k + 1}"] = float(self.cos_theta[k])
        for name, value in zip(("cos_phi12", "cos_phi23", "cos_phi31"), self.cos_phi_differences):
            row[name] = float(value)
        return row


@dataclass
class FamilyBranch:
    """
    一条追踪得到的解族

    parameters 为扫描网格（等腰族为 σ12，两等质量族为 σ），
    points 按网格顺序排列，同一网格点的多个解按 σ 升序。
    """

    family: str
    parameters: np.ndarray
    points: List[FamilyPoint] = field(default_factory=list)
    metadata: Dict[str, object] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.to_row() for p in self.points], columns=FRAME_COLUMNS)

    def sigma_pairs(self) -> np.ndarray:
        """(σ, σ12) 点集"""
        return np.array([[p.sigma, p.shape.sigma12] for p in self.points]).reshape(-1, 2)


@dataclass
class NuBand:
    """ν(σ) 在 (σ0, 3π/4) 内的局部极小与极大"""

    minimum: float
    maximum: float
    sigma_at_minimum: float
    sigma_at_maximum: float


@dataclass
class SpecialPoints:
    """等腰族与两等质量族的特殊点"""

    sigma_s: float
    pi_minus_sigma_s: float
    sigma_e: float
    two_sigma_e: float
    right_angle_sigmas: Tuple[float, ...]
    sigma_zero: float
    nu_band: NuBand

    def to_dict(self) -> Dict[str, object]:
        return {
            "sigma_s": self.sigma_s,
            "pi_minus_sigma_s": self.pi_minus_sigma_s,
            "sigma_E": self.sigma_e,
            "two_sigma_E": self.two_sigma_e,
            "right_angle_sigmas": list(self.right_angle_sigmas),
            "sigma_0": self.sigma_zero,
            "nu_band": {
                "minimum": self.nu_band.minimum,
                "maximum": self.nu_band.maximum,
                "sigma_at_minimum": self.nu_band.sigma_at_minimum,
                "sigma_at_maximum": self.nu_band.sigma_at_maximum,
            },
        }


# ---------------------------------------------------------------------------
# 求根工具
# ---------------------------------------------------------------------------


def _scan_roots(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    scan_points: int,
    xtol: float,
) -> List[float]:
    """
    开区间 (lo, hi) 上均匀扫描变号点，再用 brentq 细化

    Args:
        func: 标量函数
        lo, hi: 区间端点（不含）
        scan_points: 扫描点数
        xtol: brentq 的绝对容许误差

    Returns:
        list: 升序的根
    """
    grid = np.linspace(lo, hi, scan_points + 2)[1:-1]
    values = np.array([func(x) for x in grid])
    roots = []
    for i in range(len(grid)):
        if values[i] == 0.0:
            roots.append(float(grid[i]))
        elif i + 1 < len(grid) and values[i] * values[i + 1] < 0.0:
            roots.append(float(brentq(func, grid[i], grid[i + 1], xtol=xtol)))
    return roots


def _merge_roots(seeds: Iterable[float], found: Iterable[float], tol: float = ROOT_MERGE_TOL) -> List[float]:
    """合并重复根，种子根优先"""
    merged: List[float] = []
    for root in list(seeds) + list(found):
        if all(abs(root - kept) > tol for kept in merged):
            merged.append(root)
    return sorted(merged)


def round_significant(value: float, digits: int) -> float:
    """取 digits 位有效数字，与 ResultWriter 的输出一致"""
    return float(f"{value:.{digits}g}")


def _settle_on_output_grid(
    build: Callable[[float], Tuple[Shape, Masses, float]],
    sigma: float,
    digits: int,
    potential: CotangentPotential,
    tol: float,
    label: str,
) -> Optional[Tuple[float, Shape, Masses, float, RotatorVerdict]]:
    """
    把根移到可写出的 digits 位有效数字网格上并重新检验

    从取整后的 σ 出发，按距离依次尝试相邻的可写出值，返回第一个通过检验的。

    Args:
        build: σ -> (shape, masses, ν)，其中的量都已取整
        sigma: 求根得到的 σ
        digits: 有效数字位数
        potential: 两体势
        tol: 转子检验容许偏差
        label: 日志前缀

    Returns:
        tuple: (σ, shape, masses, ν, verdict)，没有可写出的转子时为 None
    """
    base = round_significant(sigma, digits)
    step = 10.0 ** (np.floor(np.log10(abs(base))) - digits + 1)
    for k in sorted(range(-ROUNDING_STEPS, ROUNDING_STEPS + 1), key=abs):
        trial = round_significant(base + k * step, digits)
        shape, masses, nu = build(trial)
        if not triangle_feasible(shape) or is_geodesic_collinear(shape):
            continue
        try:
            verdict = check_rotator(masses, shape, potential, tol=tol)
        except RotatorError:
            continue
        if verdict.is_rotator:
            if k:
                logger.debug(f"{label}: σ={sigma:.15g} 取整后移到 {trial!r} (偏差 {verdict.residual:.3e})")
            return trial, shape, masses, nu, verdict
    logger.debug(f"{label}: σ={sigma:.15g} 取 {digits} 位有效数字后没有通过检验的取值，舍弃")
    return None


def _point_from_verdict(
    family: str, parameter: float, shape: Shape, masses: Masses, nu: float, verdict: RotatorVerdict
) -> FamilyPoint:
    configuration = verdict.configuration
    return FamilyPoint(
        family=family,
        parameter=float(parameter),
        shape=shape,
        masses=masses,
        nu=float(nu),
        omega_squared_scaled=float(verdict.omega_squared_scaled),
        gamma=float(verdict.gamma),
        residual=float(verdict.residual),
        cos_theta=configuration.cos_theta,
        cos_phi_differences=configuration.cos_phi_differences(),
    )


# ---------------------------------------------------------------------------
# 等质量等腰族
# ---------------------------------------------------------------------------


def q_function(sigma, sigma12):
    """
    等质量等腰转子条件

    q = cos σ (2 sin^6 σ - sin^6 σ12) - sin^3 σ cos σ12 sin^3 σ12，
    σ23 = σ31 = σ。q = 0 的点即等质量等腰刚体转子。
    """
    s, c = np.sin(sigma), np.cos(sigma)
    s12, c12 = np.sin(sigma12), np.cos(sigma12)
    return c * (2.0 * s**6 - s12**6) - s**3 * c12 * s12**3


def _q_derivative(sigma: float, sigma12: float) -> float:
    """∂q/∂σ"""
    s, c = np.sin(sigma), np.cos(sigma)
    s12, c12 = np.sin(sigma12), np.cos(sigma12)
    return -s * (2.0 * s**6 - s12**6) + 12.0 * c**2 * s**5 - 3.0 * s**2 * c * c12 * s12**3


def isosceles_branch_condition(sigma: float, sigma12: float) -> float:
    """
    未平方条件的相对残差

    4 cos σ sin^3 σ - sin^3 σ12 cos σ12 = sign(cos σ) sin^3 σ12 sqrt(8 cos^2 σ + cos^2 σ12)，
    右端的符号对应分量全正的特征向量。平方引入的假根残差约为 ±1。
    """
    s, c = np.sin(sigma), np.cos(sigma)
    s12, c12 = np.sin(sigma12), np.cos(sigma12)
    lhs = 4.0 * c * s**3 - s12**3 * c12
    root = s12**3 * np.sqrt(8.0 * c**2 + c12**2)
    scale = abs(lhs) + root
    if scale == 0.0:
        return 0.0
    return float((lhs - np.sign(c) * root) / scale)


def isosceles_window(sigma12: float) -> Tuple[float, float]:
    """可行区间 σ12/2 < σ < π - σ12/2"""
    return sigma12 / 2.0, np.pi - sigma12 / 2.0


def _polish(func, derivative, x: float, lo: float, hi: float) -> float:
    """一步牛顿修正，只在残差下降且不出界时采用"""
    slope = derivative(x)
    if slope == 0.0 or not np.isfinite(slope):
        return x
    candidate = x - func(x) / slope
    if lo < candidate < hi and abs(func(candidate)) < abs(func(x)):
        return float(candidate)
    return x


def _isosceles_points(
    sigma12: float,
    radius: float = 1.0,
    scan_points: int = 2000,
    xtol: float = 1e-13,
    tol: float = 1e-9,
    digits: Optional[int] = None,
) -> List[FamilyPoint]:
    if not 0.0 < sigma12 < np.pi:
        raise InvalidShape(f"σ12 必须在 (0, π) 内: {sigma12}")
    if digits is not None:
        # 先把底边取整，腰长的根在可写出的 σ12 上求
        sigma12 = round_significant(sigma12, digits)

    lo, hi = isosceles_window(sigma12)

    def q_of(sigma):
        return float(q_function(sigma, sigma12))

    def dq_of(sigma):
        return _q_derivative(sigma, sigma12)

    def members(sigma):
        return Shape.isosceles(sigma12, sigma), EQUAL_MASSES, 1.0

    found = [_polish(q_of, dq_of, r, lo, hi) for r in _scan_roots(q_of, lo, hi, scan_points, xtol)]
    seeds = [sigma12] if lo < sigma12 < hi else []
    roots = _merge_roots(seeds, found)

    potential = CotangentPotential(radius)
    label = f"σ12={sigma12:.6f}"
    points = []
    for sigma in roots:
        shape = Shape.isosceles(sigma12, sigma)
        if not triangle_feasible(shape) or is_geodesic_collinear(shape):
            logger.debug(f"{label}: 根 σ={sigma:.12f} 不可行，舍弃")
            continue
        branch = isosceles_branch_condition(sigma, sigma12)
        if abs(branch) > BRANCH_TOL:
            logger.debug(f"{label}: 根 σ={sigma:.12f} 为平方引入的假根 ({branch:.3e})")
            continue
        if digits is not None:
            settled = _settle_on_output_grid(members, sigma, digits, potential, tol, label)
            if settled is not None:
                _, shape, _, _, verdict = settled
                points.append(_point_from_verdict(ISOSCELES_FAMILY, sigma12, shape, EQUAL_MASSES, 1.0, verdict))
            continue
        try:
            verdict = check_rotator(EQUAL_MASSES, shape, potential, tol=tol)
        except RotatorError as e:
            logger.debug(f"{label}: 根 σ={sigma:.12f} 检验出错: {e}")
            continue
        if not verdict.is_rotator:
            logger.debug(f"{label}: 根 σ={sigma:.12f} 未通过转子检验")
            continue
        points.append(_point_from_verdict(ISOSCELES_FAMILY, sigma12, shape, EQUAL_MASSES, 1.0, verdict))

    if not points:
        raise NoRoot(f"σ12={sigma12} 在可行区间 ({lo:.6f}, {hi:.6f}) 内没有刚体转子")
    return points


def solve_equal_mass_isosceles(
    sigma12: float,
    radius: float = 1.0,
    scan_points: int = 2000,
    xtol: float = 1e-13,
    tol: float = 1e-9,
) -> List[float]:
    """
    求等质量等腰族在给定 σ12 下的全部 σ

    Args:
        sigma12: 底边弧角，0 < σ12 < π
        radius: 球半径
        scan_points: 扫描点数
        xtol: 求根精度
        tol: 转子检验容许偏差

    Returns:
        list: 升序的 σ，每个都通过刚体转子检验
    """
    return [p.sigma for p in _isosceles_points(sigma12, radius, scan_points, xtol, tol)]


def symmetry_map(sigma: float, sigma12: float) -> Tuple[float, float]:
    """(σ, σ12) -> (π - σ, π - σ12)，保持 R^3 ω^2 不变"""
    return np.pi - sigma, np.pi - sigma12


def mapped_solution(
    sigma: float, sigma12: float, radius: float = 1.0, tol: float = 1e-9
) -> Optional[FamilyPoint]:
    """对称像若可行且为刚体转子则返回，否则返回 None"""
    image_sigma, image_sigma12 = symmetry_map(sigma, sigma12)
    lo, hi = isosceles_window(image_sigma12)
    if not lo < image_sigma < hi:
        logger.debug(f"对称像 ({image_sigma:.6f}, {image_sigma12:.6f}) 在可行区域之外")
        return None
    shape = Shape.isosceles(image_sigma12, image_sigma)
    if not triangle_feasible(shape) or is_geodesic_collinear(shape):
        return None
    try:
        verdict = check_rotator(EQUAL_MASSES, shape, CotangentPotential(radius), tol=tol)
    except RotatorError:
        return None
    if not verdict.is_rotator:
        return None
    return _point_from_verdict(ISOSCELES_FAMILY, image_sigma12, shape, EQUAL_MASSES, 1.0, verdict)


# ---------------------------------------------------------------------------
# 特殊点
# ---------------------------------------------------------------------------


def sigma_s() -> float:
    """鞍点 σs = arccos(sqrt(1/10))"""
    return float(np.arccos(np.sqrt(0.1)))


def sigma_e() -> float:
    """
    左曲线端点 σE

    x = cos^2 σ 满足 32x^3 + 8x^2 - 4x - 1 = 0，取 (0, 1) 内的根并做一步牛顿修正
    """
    coefficients = [32.0, 8.0, -4.0, -1.0]
    roots = np.roots(coefficients)
    real = [r.real for r in roots if abs(r.imag) < 1e-12 and 0.0 < r.real < 1.0]
    if not real:
        raise NoRoot("32x^3 + 8x^2 - 4x - 1 在 (0, 1) 内无实根")
    x = real[0]
    x -= np.polyval(coefficients, x) / np.polyval(np.polyder(coefficients), x)
    return float(np.arccos(np.sqrt(x)))


def right_angle_sigmas(radius: float = 1.0, scan_points: int = 2000, xtol: float = 1e-13) -> Tuple[float, ...]:
    """
    直角等腰成员：顶点 3 处为直角，cos σ12 = cos^2 σ，再与 q = 0 联立

    Returns:
        tuple: 升序的 σ
    """

    def g(sigma):
        return float(q_function(sigma, np.arccos(np.cos(sigma) ** 2)))

    found = _scan_roots(g, 0.0, np.pi, scan_points, xtol)
    roots = _merge_roots([np.pi / 2], found)

    potential = CotangentPotential(radius)
    accepted = []
    for sigma in roots:
        shape = Shape.isosceles(np.arccos(np.cos(sigma) ** 2), sigma)
        if not triangle_feasible(shape) or is_geodesic_collinear(shape):
            continue
        try:
            verdict = check_rotator(EQUAL_MASSES, shape, potential)
        except RotatorError:
            continue
        if verdict.is_rotator:
            accepted.append(float(sigma))
    return tuple(accepted)


# ---------------------------------------------------------------------------
# 两等质量族 m1 = m2 = m ν, m3 = m, σ12 = π/2
# ---------------------------------------------------------------------------


def nu_of_sigma(sigma):
    """
    质量比 ν(σ) = (cos σ - sin^3 σ) / (sin^3 σ (2 sin^3 σ cos σ - 1))

    只计算公式本身，不做转子检验。可接受数组。
    """
    sigma = np.asarray(sigma, dtype=float)
    s, c = np.sin(sigma), np.cos(sigma)
    denominator = s**3 * (2.0 * s**3 * c - 1.0)
    if np.any(np.abs(denominator) < 1e-15):
        raise DegenerateDenominator(f"ν(σ) 分母为零: σ = {sigma}")
    nu = (c - s**3) / denominator
    return float(nu) if nu.ndim == 0 else nu


def sigma_zero(xtol: float = 1e-13) -> float:
    """ν = 0 的端点：cos σ0 = sin^3 σ0"""
    return float(brentq(lambda s: np.cos(s) - np.sin(s) ** 3, 0.0, np.pi / 2, xtol=xtol))


def _two_equal_mass_members(sigma: float, unit_mass: float, digits: int) -> Tuple[Shape, Masses, float]:
    """可写出的 (shape, masses, ν)：σ12、ν 与质量都取 digits 位有效数字"""
    nu = round_significant(nu_of_sigma(sigma), digits)
    m = round_significant(unit_mass * nu, digits)
    shape = Shape.isosceles(round_significant(TWO_EQUAL_MASS_SIGMA12, digits), sigma)
    return shape, Masses(m, m, unit_mass), nu


def solve_two_equal_mass(
    sigma: float,
    unit_mass: float = 1.0,
    radius: float = 1.0,
    tol: float = 1e-9,
    digits: Optional[int] = None,
) -> FamilyPoint:
    """
    两等质量族：给定 σ 求 ν 并检验

    Args:
        sigma: 腰长 σ23 = σ31
        unit_mass: m3，m1 = m2 = ν m3
        radius: 球半径
        tol: 转子检验容许偏差
        digits: 给定时把 σ、σ12、ν 和质量取到该有效数字位数并重新检验

    Returns:
        FamilyPoint: 通过检验的转子

    Raises:
        DegenerateDenominator: 公式分母为零
        NonPositiveNu: ν <= 0
        RotatorRejected: 形状不可行或不是扩展拉格朗日转子（例如 3π/4 处的欧拉端点），
            或取整后没有通过检验的取值
    """
    if not 0.0 < sigma < np.pi:
        raise InvalidShape(f"σ 必须在 (0, π) 内: {sigma}")
    nu = nu_of_sigma(sigma)
    if nu <= 0.0:
        raise NonPositiveNu(f"σ={sigma:.12g} 处 ν={nu:.6g} <= 0")

    shape = Shape.isosceles(TWO_EQUAL_MASS_SIGMA12, sigma)
    masses = Masses(unit_mass * nu, unit_mass * nu, unit_mass)
    if not triangle_feasible(shape):
        raise RotatorRejected(f"σ={sigma:.12g} 的形状不可行", value=nu)

    potential = CotangentPotential(radius)
    verdict = check_rotator(masses, shape, potential, tol=tol)
    if not verdict.is_rotator:
        raise RotatorRejected(
            f"σ={sigma:.12g}, ν={nu:.12g} 不是扩展拉格朗日转子 ({verdict.classification.value})",
            verdict=verdict,
            value=nu,
        )
    if digits is None:
        return _point_from_verdict(TWO_EQUAL_MASS_FAMILY, sigma, shape, masses, nu, verdict)

    settled = _settle_on_output_grid(
        lambda s: _two_equal_mass_members(s, unit_mass, digits), sigma, digits, potential, tol, "两等质量族"
    )
    if settled is None:
        raise RotatorRejected(f"σ={sigma:.12g} 取 {digits} 位有效数字后未通过检验", verdict=verdict, value=nu)
    sigma, shape, masses, nu, verdict = settled
    return _point_from_verdict(TWO_EQUAL_MASS_FAMILY, sigma, shape, masses, nu, verdict)


def two_equal_mass_roots(nu: float, scan_points: int = 2000, xtol: float = 1e-13) -> List[float]:
    """ν(σ) = ν 在 (σ0, 3π/4) 内的全部 σ"""
    if not nu > 0.0:
        raise NonPositiveNu(f"质量比必须为正: {nu}")
    return _scan_roots(lambda s: nu_of_sigma(s) - nu, sigma_zero(), TWO_EQUAL_MASS_END, scan_points, xtol)


def count_two_equal_mass_solutions(nu: float, scan_points: int = 2000) -> int:
    """给定 ν 的扩展拉格朗日转子个数（ν=1 时包含 σ=π/2 的正三角形）"""
    return len(two_equal_mass_roots(nu, scan_points))


def two_equal_mass_band(scan_points: int = 2000) -> NuBand:
    """
    三解区间的端点：ν(σ) 在 (σ0, 3π/4) 内的局部极小值与极大值
    """
    grid = np.linspace(sigma_zero(), TWO_EQUAL_MASS_END, scan_points + 2)[1:-1]
    values = nu_of_sigma(grid)
    slopes = np.diff(values)

    maxima, minima = [], []
    for i in range(1, len(slopes)):
        bounds = (grid[i - 1], grid[i + 1])
        if slopes[i - 1] > 0.0 >= slopes[i]:
            res = minimize_scalar(lambda s: -nu_of_sigma(s), bounds=bounds, method="bounded", options={"xatol": 1e-12})
            maxima.append((float(-res.fun), float(res.x)))
        elif slopes[i - 1] < 0.0 <= slopes[i]:
            res = minimize_scalar(nu_of_sigma, bounds=bounds, method="bounded", options={"xatol": 1e-12})
            minima.append((float(res.fun), float(res.x)))

    if not maxima or not minima:
        raise NoRoot("ν(σ) 在 (σ0, 3π/4) 内没有局部极值")
    maximum, sigma_max = max(maxima)
    minimum, sigma_min = min(minima)
    logger.info(f"ν 三解区间: ({minimum:.6f}, {maximum:.6f})")
    return NuBand(minimum=minimum, maximum=maximum, sigma_at_minimum=sigma_min, sigma_at_maximum=sigma_max)


def special_points(radius: float = 1.0, scan_points: int = 2000, xtol: float = 1e-13) -> SpecialPoints:
    """汇总两个解族的特殊点"""
    s = sigma_s()
    e = sigma_e()
    return SpecialPoints(
        sigma_s=s,
        pi_minus_sigma_s=np.pi - s,
        sigma_e=e,
        two_sigma_e=2.0 * e,
        right_angle_sigmas=right_angle_sigmas(radius, scan_points, xtol),
        sigma_zero=sigma_zero(xtol),
        nu_band=two_equal_mass_band(scan_points),
    )


# ---------------------------------------------------------------------------
# 曲线追踪
# ---------------------------------------------------------------------------


def _isosceles_task(args) -> List[FamilyPoint]:
    sigma12, radius, scan_points, xtol, tol, digits = args
    try:
        return _isosceles_points(sigma12, radius, scan_points, xtol, tol, digits)
    except NoRoot as e:
        logger.warning(str(e))
        return []


def _two_equal_mass_task(args) -> Optional[FamilyPoint]:
    sigma, radius, tol, digits = args
    try:
        return solve_two_equal_mass(sigma, radius=radius, tol=tol, digits=digits)
    except RotatorError as e:
        logger.debug(f"σ={sigma:.6f} 跳过: {e}")
        return None


class FamilyTracer:
    """解族曲线追踪器"""

    def __init__(self, config: Optional[AnalysisConfig] = None):
        """
        初始化追踪器

        Args:
            config: 分析配置，None 时使用默认配置
        """
        self.config = config or AnalysisConfig()

    def _map(self, func, tasks: Sequence) -> list:
        """按网格顺序求解，workers > 0 时使用进程池"""
        workers = self.config.family.workers
        if workers > 0 and len(tasks) > 1:
            with Pool(processes=workers) as pool:
                return pool.map(func, tasks)
        return [func(task) for task in tasks]

    def trace_equal_mass_isosceles(self, resolution: Optional[int] = None) -> FamilyBranch:
        """
        在 σ12 ∈ (0, π) 的均匀网格上追踪等质量等腰族

        Args:
            resolution: 网格点数，None 时取配置值

        Returns:
            FamilyBranch: 全部通过检验的解
        """
        family = self.config.family
        resolution = resolution or family.resolution
        grid = np.linspace(0.0, np.pi, resolution + 2)[1:-1]
        logger.info(f"开始追踪等质量等腰族，网格点数 {resolution}")

        digits = self.config.output.significant_digits
        tasks = [
            (s12, self.config.radius, family.scan_points, family.xtol, self.config.rotator.tol, digits) for s12 in grid
        ]
        results = self._map(_isosceles_task, tasks)

        points = [p for group in results for p in group]
        branch = FamilyBranch(
            family=ISOSCELES_FAMILY,
            parameters=grid,
            points=points,
            metadata={
                "sigma_s": sigma_s(),
                "pi_minus_sigma_s": np.pi - sigma_s(),
                "sigma_E": sigma_e(),
                "two_sigma_E": 2.0 * sigma_e(),
            },
        )
        logger.info(f"等质量等腰族追踪完成，共 {len(points)} 个解")
        return branch

    def trace_two_equal_mass(self, resolution: Optional[int] = None) -> FamilyBranch:
        """在 σ ∈ (σ0, 3π/4) 的均匀网格上追踪两等质量族"""
        family = self.config.family
        resolution = resolution or family.resolution
        lo = sigma_zero(family.xtol)
        grid = np.linspace(lo, TWO_EQUAL_MASS_END, resolution + 2)[1:-1]
        logger.info(f"开始追踪两等质量族，网格点数 {resolution}")

        digits = self.config.output.significant_digits
        tasks = [(s, self.config.radius, self.config.rotator.tol, digits) for s in grid]
        results = self._map(_two_equal_mass_task, tasks)

        points = [p for p in results if p is not None]
        skipped = len(results) - len(points)
        if skipped:
            logger.warning(f"两等质量族有 {skipped} 个网格点未通过检验")

        branch = FamilyBranch(
            family=TWO_EQUAL_MASS_FAMILY,
            parameters=grid,
            points=points,
            metadata={"sigma_0": lo, "sigma_end": TWO_EQUAL_MASS_END},
        )
        logger.info(f"两等质量族追踪完成，共 {len(points)} 个解")
        return branch

    def print_analysis_result(self, branch: FamilyBranch):
        """
        打印追踪结果

        Args:
            branch: 解族
        """
        print("\n" + "=" * 60)
        print(f"📈 解族追踪结果: {branch.family}")
        print("=" * 60)

        print("\n1. 网格：")
        print(f"   参数范围: ({branch.parameters[0]:.6f}, {branch.parameters[-1]:.6f})")
        print(f"   网格点数: {len(branch.parameters)}")
        print(f"   解的个数: {len(branch.points)}")

        if branch.points:
            values = np.array([p.omega_squared_scaled for p in branch.points])
            residuals = np.array([p.residual for p in branch.points])
            print("\n2. R^3 ω^2：")
            print(f"   最小值: {values.min():.6f}")
            print(f"   最大值: {values.max():.6f}")
            print(f"   最大检验偏差: {residuals.max():.3e}")

        if branch.metadata:
            print("\n3. 特殊点：")
            for name, value in branch.metadata.items():
                print(f"   {name}: {value:.6f}")
