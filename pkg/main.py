#!/usr/bin/env python3
"""
刚体转子分析主入口
检验给定形状、追踪解族、积分验证、输出特殊点
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

import numpy as np

from src.config import AnalysisConfig
from src.core import (
    FamilyTracer,
    Masses,
    RepulsivePotential,
    Shape,
    check_rotator,
    gamma_identity_residual,
    get_potential,
    hemisphere_and_sign_conditions,
    reduced_equation_residuals,
    special_points,
    verify_relative_equilibrium,
)
from src.result_writer import ResultWriter

EXIT_OK = 0
EXIT_NO_ROTATOR = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3

RIGIDITY_TOL = 1e-6
CONSERVATION_TOL = 1e-8

# check 报告写成 CSV 时数组字段的列名，其余数组用 theta1, theta2, ...
CHECK_CSV_COLUMNS = {
    "masses": ["m1", "m2", "m3"],
    "shape": ["sigma12", "sigma23", "sigma31"],
    "cos_phi_differences": ["cos_phi12", "cos_phi23", "cos_phi31"],
}


def setup_logging(level: str = "INFO", log_file: str = "rigid_rotator.log"):
    """设置日志配置"""
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.FileHandler(log_file), logging.StreamHandler()],
    )


def parse_triple(text: str) -> List[float]:
    """'a,b,c' -> [a, b, c]"""
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"无法解析的数值: {text}")
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"需要三个逗号分隔的数值: {text}")
    return values


def build_config(args) -> AnalysisConfig:
    """命令行参数覆盖默认配置"""
    config = AnalysisConfig()
    if args.tol is not None:
        config.rotator.tol = args.tol
    if args.radius is not None:
        config.radius = args.radius
    if args.potential is not None:
        config.potential = args.potential
    if args.resolution is not None:
        config.family.resolution = args.resolution
    if args.workers is not None:
        config.family.workers = args.workers
    config.log_level = args.log_level
    return config


def _writer(config: AnalysisConfig) -> ResultWriter:
    return ResultWriter(
        {"output_dir": config.output.output_dir, "significant_digits": config.output.significant_digits}
    )


def _shape_from(values, degrees: bool) -> Shape:
    return Shape.from_degrees(values) if degrees else Shape.of(values)


def check_report(masses: Masses, shape: Shape, config: AnalysisConfig) -> dict:
    """
    生成检验报告

    Args:
        masses: 三个质量
        shape: 弧角（弧度）
        config: 分析配置

    Returns:
        dict: 可直接写成 JSON 的报告，verify 命令可读回
    """
    potential = get_potential(config.potential, config.radius)
    rotator = config.rotator
    verdict = check_rotator(
        masses,
        shape,
        potential,
        tol=rotator.tol,
        gap_tol=rotator.degeneracy_gap,
        clamp_tol=rotator.clamp_tol,
        collinear_tol=rotator.collinear_tol,
    )

    report = {
        "command": "check",
        "masses": masses.as_array(),
        "shape": shape.as_array(),
        "potential": config.potential,
        "radius": config.radius,
        "tol": rotator.tol,
        "is_rotator": verdict.is_rotator,
        "classification": verdict.classification,
        "residual": verdict.residual,
        "eigenvalue": verdict.eigenvalue,
        "omega_squared": verdict.omega_squared,
        "R3_omega2": verdict.omega_squared_scaled,
        "gamma": verdict.gamma,
        "notes": verdict.notes,
    }
    if verdict.is_rotator:
        configuration = verdict.configuration
        residuals = reduced_equation_residuals(configuration, masses, potential)
        report.update(
            {
                "theta": configuration.theta,
                "phi": configuration.phi,
                "omega": configuration.omega,
                "cos_theta": configuration.cos_theta,
                "cos_phi_differences": configuration.cos_phi_differences(),
                "reduced_equation_residual": residuals.max,
                "gamma_identity_residual": gamma_identity_residual(verdict, masses, shape, potential),
                "hemisphere_conditions": hemisphere_and_sign_conditions(configuration),
            }
        )
    return report


def print_check_result(report: dict):
    """打印检验结果"""
    print("\n" + "=" * 60)
    print("🔄 刚体转子检验结果")
    print("=" * 60)

    print("\n1. 输入：")
    print(f"   质量: {np.round(report['masses'], 6).tolist()}")
    print(f"   弧角: {np.round(report['shape'], 6).tolist()}")
    print(f"   势函数: {report['potential']} (R = {report['radius']})")

    print("\n2. 判定：")
    print(f"   刚体转子: {'是' if report['is_rotator'] else '否'}")
    print(f"   类型: {report['classification'].value}")
    if report["residual"] is not None:
        print(f"   转子量相对偏差: {report['residual']:.3e}")
    for note in report["notes"]:
        print(f"   备注: {note}")

    if report["is_rotator"]:
        print("\n3. 相对平衡：")
        print(f"   R^3 ω^2: {report['R3_omega2']:.6f}")
        print(f"   γ: {report['gamma']:.6f}")
        print(f"   cos θk: {np.round(report['cos_theta'], 6).tolist()}")
        print(f"   cos(φi - φj): {np.round(report['cos_phi_differences'], 6).tolist()}")
        print(f"   约化方程残差: {report['reduced_equation_residual']:.3e}")


def cmd_check(args, config: AnalysisConfig) -> int:
    if args.masses is None or args.shape is None:
        raise ValueError("check 需要 --masses 和 --shape")
    masses = Masses.of(args.masses)
    shape = _shape_from(args.shape, args.degrees)
    report = check_report(masses, shape, config)

    writer = _writer(config)
    if args.out:
        print_check_result(report)
    writer.write(report, args.out, args.format or "json", columns=CHECK_CSV_COLUMNS)
    return EXIT_OK if report["is_rotator"] else EXIT_NO_ROTATOR


def cmd_isosceles_curve(args, config: AnalysisConfig) -> int:
    tracer = FamilyTracer(config)
    branch = tracer.trace_equal_mass_isosceles(config.family.resolution)
    if args.out:
        tracer.print_analysis_result(branch)
    _writer(config).write(branch.to_frame(), args.out, args.format or "csv")
    return EXIT_OK


def cmd_two_equal_mass(args, config: AnalysisConfig) -> int:
    tracer = FamilyTracer(config)
    branch = tracer.trace_two_equal_mass(config.family.resolution)
    if args.out:
        tracer.print_analysis_result(branch)
    _writer(config).write(branch.to_frame(), args.out, args.format or "csv")
    return EXIT_OK


def cmd_verify(args, config: AnalysisConfig) -> int:
    """读回 check 的 JSON，重新检验后积分若干周期"""
    with open(args.config_file, "r", encoding="utf-8") as f:
        saved = json.load(f)

    config.potential = saved.get("potential", config.potential)
    config.radius = float(saved.get("radius", config.radius))
    masses = Masses.of(saved["masses"])
    shape = Shape.of(saved["shape"])
    potential = get_potential(config.potential, config.radius)

    verdict = check_rotator(masses, shape, potential, tol=config.rotator.tol)
    if not verdict.is_rotator:
        logging.warning(f"{args.config_file} 中的形状不是刚体转子，无法验证")
        return EXIT_NO_ROTATOR

    trajectory = verify_relative_equilibrium(
        verdict.configuration,
        masses,
        potential,
        periods=args.periods,
        omega_scale=args.omega_scale,
        config=config.integration,
    )
    summary = trajectory.summary()
    rigid = (
        summary["max_shape_drift"] <= RIGIDITY_TOL
        and summary["max_theta_drift"] <= RIGIDITY_TOL
        and summary["max_rate_spread"] <= RIGIDITY_TOL
        and summary["energy_drift"] <= CONSERVATION_TOL
        and summary["momentum_drift"] <= CONSERVATION_TOL
    )
    report = {"command": "verify", "masses": masses.as_array(), "shape": shape.as_array(), "rigid": rigid}
    report.update(summary)
    report.update(trajectory.metadata)

    if args.out:
        print("\n" + "=" * 60)
        print("🧪 积分验证结果")
        print("=" * 60)
        print(f"   周期数: {summary['t_end'] / trajectory.metadata['period']:.3f}")
        print(f"   最大形状漂移: {summary['max_shape_drift']:.3e}")
        print(f"   最大角速度偏差: {summary['max_rate_spread']:.3e}")
        print(f"   能量相对漂移: {summary['energy_drift']:.3e}")
        print(f"   角动量相对漂移: {summary['momentum_drift']:.3e}")
        print(f"   保持刚性: {'是' if rigid else '否'}")

    writer = _writer(config)
    if (args.format or "json") == "csv":
        writer.write(trajectory.to_frame(), args.out, "csv")
    else:
        writer.write(report, args.out, "json")
    return EXIT_OK if rigid else EXIT_NO_ROTATOR


def cmd_special_points(args, config: AnalysisConfig) -> int:
    points = special_points(config.radius, config.family.scan_points, config.family.xtol)
    payload = points.to_dict()
    if args.out:
        print("\n" + "=" * 60)
        print("📌 特殊点")
        print("=" * 60)
        print(f"   σs = {points.sigma_s:.6f}, π - σs = {points.pi_minus_sigma_s:.6f}")
        print(f"   σE = {points.sigma_e:.6f}, 2σE = {points.two_sigma_e:.6f}")
        print(f"   直角成员: {[round(s, 6) for s in points.right_angle_sigmas]}")
        print(f"   σ0 = {points.sigma_zero:.6f}")
        print(f"   三解区间: ({points.nu_band.minimum:.6f}, {points.nu_band.maximum:.6f})")
    _writer(config).write(payload, args.out, args.format or "json")
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "isosceles-curve": cmd_isosceles_curve,
    "two-equal-mass": cmd_two_equal_mass,
    "verify": cmd_verify,
    "special-points": cmd_special_points,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--masses", type=parse_triple, help="三个质量 a,b,c")
    common.add_argument("--shape", type=parse_triple, help="弧角 σ12,σ23,σ31（默认弧度）")
    common.add_argument("--degrees", action="store_true", help="--shape 以角度给出")
    common.add_argument("--potential", choices=["cotangent", "harmonic-test"], help="两体势")
    common.add_argument("--radius", type=float, help="球半径 R")
    common.add_argument("--tol", type=float, help="转子检验的相对容许偏差")
    common.add_argument("--resolution", type=int, help="解族网格点数")
    common.add_argument("--workers", type=int, help="并行进程数，0 为顺序执行")
    common.add_argument("--out", help="输出路径，缺省时写到标准输出")
    common.add_argument("--format", choices=["csv", "json"], help="输出格式")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="INFO",
        help="日志级别",
    )

    parser = argparse.ArgumentParser(description="球面三体刚体转子分析")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("check", parents=[common], help="检验给定质量与形状")
    subparsers.add_parser("isosceles-curve", parents=[common], help="追踪等质量等腰族")
    subparsers.add_parser("two-equal-mass", parents=[common], help="追踪两等质量族")
    verify = subparsers.add_parser("verify", parents=[common], help="积分验证 check 输出的构型")
    verify.add_argument("config_file", help="check 命令写出的 JSON")
    verify.add_argument("--periods", type=float, default=None, help="积分周期数")
    verify.add_argument("--omega-scale", type=float, default=1.0, help="初始角速度缩放（对照实验）")
    subparsers.add_parser("special-points", parents=[common], help="输出特殊点")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """主函数"""
    args = build_parser().parse_args(argv)
    config = build_config(args)

    # 设置日志
    setup_logging(args.log_level, config.output.log_file)

    try:
        return COMMANDS[args.command](args, config)
    except RepulsivePotential as e:
        logging.warning(f"斥力势: {e}")
        return EXIT_NO_ROTATOR
    except (ValueError, KeyError, OSError) as e:
        logging.error(f"输入错误: {e}")
        return EXIT_INPUT_ERROR
    except ArithmeticError as e:
        logging.error(f"数值失败: {e}")
        return EXIT_NUMERICAL_FAILURE


if __name__ == "__main__":
    sys.exit(main())
