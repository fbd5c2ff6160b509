import os
from dataclasses import dataclass, field
import dotenv

dotenv.load_dotenv()


@dataclass
class RotatorConfig:
    """刚体转子判定配置"""

    # 三个转子量之间允许的相对偏差
    tol: float = float(os.getenv("ROTATOR_TOL", "1e-9"))
    # 特征值间隔小于 gap * ||J|| 视为简并
    degeneracy_gap: float = float(os.getenv("DEGENERACY_GAP", "1e-9"))
    # arccos 参数超出 [-1, 1] 的容许量
    clamp_tol: float = 1e-12
    # 判定三点共大圆的容许量
    collinear_tol: float = 1e-9


@dataclass
class FamilyConfig:
    """解族求解与曲线追踪配置"""

    scan_points: int = int(os.getenv("FAMILY_SCAN_POINTS", "2000"))
    xtol: float = 1e-13
    resolution: int = int(os.getenv("FAMILY_RESOLUTION", "512"))
    # 0 表示顺序执行
    workers: int = int(os.getenv("FAMILY_WORKERS", "0"))


@dataclass
class IntegrationConfig:
    """Runge-Kutta 积分配置"""

    rtol: float = float(os.getenv("INTEGRATION_RTOL", "1e-10"))
    atol: float = float(os.getenv("INTEGRATION_ATOL", "1e-12"))
    method: str = os.getenv("INTEGRATION_METHOD", "RK45")
    pole_guard: float = 1e-8
    collision_guard: float = 1e-6
    samples_per_period: int = 400
    periods: float = 1.0


@dataclass
class OutputConfig:
    """结果输出配置"""

    output_dir: str = os.getenv("OUTPUT_DIR", "analysis_results")
    significant_digits: int = 12
    log_file: str = os.getenv("LOG_FILE", "rigid_rotator.log")


@dataclass
class AnalysisConfig:
    """Main configuration for the rigid rotator analysis"""

    rotator: RotatorConfig = field(default_factory=RotatorConfig)
    family: FamilyConfig = field(default_factory=FamilyConfig)
    integration: IntegrationConfig = field(default_factory=IntegrationConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    # Run configuration
    radius: float = float(os.getenv("SPHERE_RADIUS", "1.0"))
    potential: str = os.getenv("PAIR_POTENTIAL", "cotangent")
    log_level: str = "INFO"
