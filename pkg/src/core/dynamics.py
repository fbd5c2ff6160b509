#!/usr/bin/env python3
"""
球面三体运动方程与数值积分
由拉格朗日量 L = K + V 导出的欧拉-拉格朗日方程、角动量、能量，
以及用自适应 Runge-Kutta 积分验证相对平衡的刚性。
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp

from ..config.config import IntegrationConfig
from .errors import SingularState, StepFailure
from .geometry import PAIRS, Configuration
from .inertia import MassesLike, mass_array
from .potentials import PairPotential

logger = logging.getLogger(__name__)

TRAJECTORY_COLUMNS = [
    "t",
    "theta1",
    "theta2",
    "theta3",
    "phi1",
    "phi2",
    "phi3",
    "sigma12",
    "sigma23",
    "sigma31",
    "E",
    "cx",
    "cy",
    "cz",
]


@dataclass
class State:
    """θk, φk, θ̇k, φ̇k (k = 1..3) 与时间 t"""

    theta: np.ndarray
    phi: np.ndarray
    theta_dot: np.ndarray
    phi_dot: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float).reshape(3)
        self.phi = np.asarray(self.phi, dtype=float).reshape(3)
        self.theta_dot = np.asarray(self.theta_dot, dtype=float).reshape(3)
        self.phi_dot = np.asarray(self.phi_dot, dtype=float).reshape(3)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.theta, self.phi, self.theta_dot, self.phi_dot])

    @classmethod
    def from_vector(cls, y: np.ndarray, t: float = 0.0) -> "State":
        y = np.asarray(y, dtype=float)
        return cls(y[0:3], y[3:6], y[6:9], y[9:12], t)

    @classmethod
    def from_configuration(cls, configuration: Configuration, omega: Optional[float] = None) -> "State":
        """相对平衡初值：θ̇k = 0，φ̇k = ω"""
        omega = configuration.omega if omega is None else omega
        return cls(
            theta=configuration.theta,
            phi=configuration.phi,
            theta_dot=np.zeros(3),
            phi_dot=np.full(3, float(omega)),
        )

    def mirrored(self) -> "State":
        """关于 xz 平面的镜像 φ -> -φ"""
        return State(self.theta, -self.phi, self.theta_dot, -self.phi_dot, self.t)


@dataclass
class AngularMomentum:
    cx: float
    cy: float
    cz: float

    def as_array(self) -> np.ndarray:
        return np.array([self.cx, self.cy, self.cz])


def _cos_sigma(state: State) -> np.ndarray:
    """3x3 的 cos σij 矩阵"""
    sin_t, cos_t = np.sin(state.theta), np.cos(state.theta)
    dphi = state.phi[:, None] - state.phi[None, :]
    cos_sigma = np.outer(cos_t, cos_t) + np.outer(sin_t, sin_t) * np.cos(dphi)
    return np.clip(cos_sigma, -1.0, 1.0)


def pair_arcs(state: State) -> np.ndarray:
    """σ12, σ23, σ31"""
    cos_sigma = _cos_sigma(state)
    return np.array([np.arccos(cos_sigma[i, j]) for i, j in PAIRS])


def _pair_chords(state: State, radius: float) -> np.ndarray:
    cos_sigma = _cos_sigma(state)
    return np.array([2.0 * radius**2 * (1.0 - cos_sigma[i, j]) for i, j in PAIRS])


def _check_state(state: State, pole_guard: float, collision_guard: float):
    if np.any(np.abs(np.sin(state.theta)) < pole_guard):
        raise SingularState(f"t={state.t:.6g}: 物体接近极点, θ = {state.theta}")
    sigma = pair_arcs(state)
    if np.min(sigma) < collision_guard:
        raise SingularState(f"t={state.t:.6g}: 物体接近碰撞, σ = {sigma}")


def equations_of_motion(
    state: State,
    masses: MassesLike,
    potential: PairPotential,
    pole_guard: float = 1e-8,
    collision_guard: float = 1e-6,
) -> np.ndarray:
    """
    欧拉-拉格朗日方程

    θ̈k = sin θk cos θk φ̇k^2 + 2 Σj mj U'(Dkj^2) (sin θk cos θj - cos θk sin θj cos(φk - φj))
    φ̈k = 2 Σj mj U'(Dkj^2) sin θj sin(φk - φj) / sin θk - 2 cot θk θ̇k φ̇k

    球半径取 potential.radius。

    Args:
        state: 当前状态
        masses: 三个质量
        potential: 两体势

    Returns:
        np.ndarray: (θ̇, φ̇, θ̈, φ̈)，长度 12

    Raises:
        SingularState: sin θk 或 σij 低于保护阈值
    """
    _check_state(state, pole_guard, collision_guard)
    m = mass_array(masses)
    radius = potential.radius

    sin_t, cos_t = np.sin(state.theta), np.cos(state.theta)
    dphi = state.phi[:, None] - state.phi[None, :]

    d2 = 2.0 * radius**2 * (1.0 - _cos_sigma(state))
    np.fill_diagonal(d2, 1.0)
    uprime = np.zeros((3, 3))
    for i, j in PAIRS:
        uprime[i, j] = uprime[j, i] = float(potential.derivative(d2[i, j]))

    weights = uprime * m[None, :]
    theta_force = np.outer(sin_t, cos_t) - np.outer(cos_t, sin_t) * np.cos(dphi)
    phi_force = sin_t[None, :] * np.sin(dphi)

    theta_ddot = sin_t * cos_t * state.phi_dot**2 + 2.0 * np.sum(weights * theta_force, axis=1)
    phi_ddot = (
        2.0 * np.sum(weights * phi_force, axis=1) / sin_t
        - 2.0 * cos_t / sin_t * state.theta_dot * state.phi_dot
    )
    return np.concatenate([state.theta_dot, state.phi_dot, theta_ddot, phi_ddot])


def kinetic_energy(state: State, masses: MassesLike, radius: float) -> float:
    m = mass_array(masses)
    return float(
        0.5 * radius**2 * np.sum(m * (state.theta_dot**2 + np.sin(state.theta) ** 2 * state.phi_dot**2))
    )


def potential_energy(state: State, masses: MassesLike, potential: PairPotential) -> float:
    """V = Σ mi mj U(Dij^2)"""
    m = mass_array(masses)
    d2 = _pair_chords(state, potential.radius)
    return float(sum(m[i] * m[j] * float(potential.evaluate(d2[k])) for k, (i, j) in enumerate(PAIRS)))


def lagrangian(state: State, masses: MassesLike, potential: PairPotential) -> float:
    """L = K + V"""
    return kinetic_energy(state, masses, potential.radius) + potential_energy(state, masses, potential)


def energy(state: State, masses: MassesLike, potential: PairPotential) -> float:
    """E = K - V"""
    return kinetic_energy(state, masses, potential.radius) - potential_energy(state, masses, potential)


def generalized_momenta(state: State, masses: MassesLike, radius: float):
    """p_θk = R^2 mk θ̇k, p_φk = R^2 mk sin^2 θk φ̇k"""
    m = mass_array(masses)
    p_theta = radius**2 * m * state.theta_dot
    p_phi = radius**2 * m * np.sin(state.theta) ** 2 * state.phi_dot
    return p_theta, p_phi


def angular_momentum(state: State, masses: MassesLike, radius: float) -> AngularMomentum:
    """c = Σ mk rk × ṙk"""
    m = mass_array(masses)
    sin_t, cos_t = np.sin(state.theta), np.cos(state.theta)
    sin_p, cos_p = np.sin(state.phi), np.cos(state.phi)
    r2 = radius**2
    cx = r2 * np.sum(m * (-sin_p * state.theta_dot - sin_t * cos_t * cos_p * state.phi_dot))
    cy = r2 * np.sum(m * (cos_p * state.theta_dot - sin_t * cos_t * sin_p * state.phi_dot))
    cz = r2 * np.sum(m * sin_t**2 * state.phi_dot)
    return AngularMomentum(float(cx), float(cy), float(cz))


def _relative_drift(values: np.ndarray, reference) -> float:
    deviation = np.abs(values - reference)
    if deviation.ndim > 1:
        deviation = np.linalg.norm(values - reference, axis=1)
    scale = np.linalg.norm(reference)
    return float(np.max(deviation) / scale) if scale > 0 else float(np.max(deviation))


@dataclass
class Trajectory:
    """积分轨迹，逐采样点记录状态、形状、能量和角动量"""

    t: np.ndarray
    states: np.ndarray
    sigma: np.ndarray
    energy: np.ndarray
    momentum: np.ndarray
    metadata: Dict[str, object] = field(default_factory=dict)

    @property
    def theta(self) -> np.ndarray:
        return self.states[:, 0:3]

    @property
    def phi(self) -> np.ndarray:
        return self.states[:, 3:6]

    @property
    def theta_dot(self) -> np.ndarray:
        return self.states[:, 6:9]

    @property
    def phi_dot(self) -> np.ndarray:
        return self.states[:, 9:12]

    def max_shape_drift(self) -> float:
        return float(np.max(np.abs(self.sigma - self.sigma[0])))

    def max_theta_drift(self) -> float:
        return float(np.max(np.abs(self.theta - self.theta[0])))

    def max_rate_spread(self) -> float:
        """max |θ̇k| 与 max |φ̇i - φ̇j| 中的较大者"""
        phi_dot = self.phi_dot
        spread = max(np.max(np.abs(phi_dot[:, i] - phi_dot[:, j])) for i, j in PAIRS)
        return float(max(np.max(np.abs(self.theta_dot)), spread))

    def energy_drift(self) -> float:
        return _relative_drift(self.energy, self.energy[0])

    def momentum_drift(self) -> float:
        return _relative_drift(self.momentum, self.momentum[0])

    def summary(self) -> Dict[str, float]:
        return {
            "t_end": float(self.t[-1]),
            "samples": int(len(self.t)),
            "max_shape_drift": self.max_shape_drift(),
            "max_theta_drift": self.max_theta_drift(),
            "max_rate_spread": self.max_rate_spread(),
            "energy_drift": self.energy_drift(),
            "momentum_drift": self.momentum_drift(),
        }

    def to_frame(self) -> pd.DataFrame:
        data = np.column_stack([self.t, self.theta, self.phi, self.sigma, self.energy, self.momentum])
        return pd.DataFrame(data, columns=TRAJECTORY_COLUMNS)


def integrate(
    state0: State,
    masses: MassesLike,
    potential: PairPotential,
    t_end: float,
    config: Optional[IntegrationConfig] = None,
    samples: Optional[int] = None,
) -> Trajectory:
    """
    自适应 Runge-Kutta 积分

    Args:
        state0: 初始状态
        masses: 三个质量
        potential: 两体势
        t_end: 积分时长
        config: 积分配置（rtol/atol/方法/保护阈值）
        samples: 输出采样点数，None 时取 config.samples_per_period

    Returns:
        Trajectory: 采样轨迹

    Raises:
        SingularState: 接近极点或碰撞
        StepFailure: 步长崩溃
    """
    config = config or IntegrationConfig()
    samples = samples or config.samples_per_period
    radius = potential.radius
    t0 = state0.t
    t_eval = np.linspace(t0, t0 + t_end, samples)

    def rhs(t, y):
        return equations_of_motion(
            State.from_vector(y, t), masses, potential, config.pole_guard, config.collision_guard
        )

    def pole_event(t, y):
        return np.min(np.abs(np.sin(y[0:3]))) - config.pole_guard

    def collision_event(t, y):
        return np.min(pair_arcs(State.from_vector(y, t))) - config.collision_guard

    pole_event.terminal = True
    collision_event.terminal = True

    logger.info(f"开始积分: t ∈ [{t0:.6g}, {t0 + t_end:.6g}], 方法 {config.method}, rtol={config.rtol:g}")
    solution = solve_ivp(
        rhs,
        (t0, t0 + t_end),
        state0.as_vector(),
        method=config.method,
        t_eval=t_eval,
        rtol=config.rtol,
        atol=config.atol,
        events=[pole_event, collision_event],
    )

    if solution.status == -1:
        raise StepFailure(f"积分失败: {solution.message}")
    if solution.status == 1:
        raise SingularState(f"t={solution.t_events[0].tolist() + solution.t_events[1].tolist()} 处接近极点或碰撞")

    states = solution.y.T
    sigma = np.empty((len(solution.t), 3))
    energies = np.empty(len(solution.t))
    momenta = np.empty((len(solution.t), 3))
    for n, (t, y) in enumerate(zip(solution.t, states)):
        state = State.from_vector(y, t)
        sigma[n] = pair_arcs(state)
        energies[n] = energy(state, masses, potential)
        momenta[n] = angular_momentum(state, masses, radius).as_array()

    trajectory = Trajectory(t=solution.t, states=states, sigma=sigma, energy=energies, momentum=momenta)
    logger.info(
        f"积分完成: {solution.nfev} 次求值, 形状漂移 {trajectory.max_shape_drift():.3e}, "
        f"能量漂移 {trajectory.energy_drift():.3e}"
    )
    return trajectory


def rotation_period(omega: float) -> float:
    """T = 2π / |ω|"""
    if omega == 0.0:
        raise ValueError("ω = 0 时没有转动周期")
    return float(2.0 * np.pi / abs(omega))


def verify_relative_equilibrium(
    configuration: Configuration,
    masses: MassesLike,
    potential: PairPotential,
    periods: Optional[float] = None,
    omega_scale: float = 1.0,
    config: Optional[IntegrationConfig] = None,
) -> Trajectory:
    """
    从相对平衡构型出发积分若干个转动周期

    Args:
        configuration: 含 ω 的构型
        masses: 三个质量
        potential: 两体势
        periods: 周期数，None 时取 config.periods
        omega_scale: 初始角速度的缩放（1.0 以外用作对照）
        config: 积分配置

    Returns:
        Trajectory: 轨迹，metadata 中记录 ω 与周期
    """
    config = config or IntegrationConfig()
    periods = config.periods if periods is None else periods
    omega = configuration.omega * omega_scale
    period = rotation_period(configuration.omega)
    samples = max(int(np.ceil(config.samples_per_period * periods)), 2)

    trajectory = integrate(
        State.from_configuration(configuration, omega), masses, potential, period * periods, config, samples
    )
    trajectory.metadata.update({"omega": omega, "period": period, "periods": periods, "omega_scale": omega_scale})
    return trajectory
