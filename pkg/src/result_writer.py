#!/usr/bin/env python3
"""
结果输出模块
负责把曲线、轨迹写成 CSV，把单个判定与常数写成 JSON，
数字统一保留 12 位有效数字，相同输入得到逐字节相同的输出。
"""

import json
import logging
import os
import sys
from enum import Enum
from typing import Any, Dict, Optional, Sequence

import numpy as np
import pandas as pd


class ResultWriter:
    """结果输出器类"""

    def __init__(self, config: dict):
        """
        初始化结果输出器

        Args:
            config: 输出配置字典，包含以下键：
                - output_dir: 相对路径的输出目录
                - significant_digits: 有效数字位数
        """
        self.output_dir = config["output_dir"]
        self.significant_digits = config["significant_digits"]

        # 验证配置
        if not self.output_dir or not isinstance(self.significant_digits, int) or self.significant_digits <= 0:
            raise ValueError("输出配置不完整")

    @property
    def float_format(self) -> str:
        return f"%.{self.significant_digits}g"

    def _round(self, value: float) -> float:
        return float(f"{value:.{self.significant_digits}g}")

    def to_serializable(self, value: Any) -> Any:
        """递归转换为可写入 JSON 的对象，浮点数按有效数字取整"""
        if isinstance(value, dict):
            return {str(k): self.to_serializable(v) for k, v in value.items()}
        if isinstance(value, (list, tuple)):
            return [self.to_serializable(v) for v in value]
        if isinstance(value, np.ndarray):
            return [self.to_serializable(v) for v in value.tolist()]
        if isinstance(value, Enum):
            return value.value
        if isinstance(value, (bool, np.bool_)):
            return bool(value)
        if isinstance(value, (int, np.integer)):
            return int(value)
        if isinstance(value, (float, np.floating)):
            value = float(value)
            return self._round(value) if np.isfinite(value) else None
        return value

    def format_json(self, payload: dict) -> str:
        return json.dumps(self.to_serializable(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def format_frame(self, frame: pd.DataFrame) -> str:
        return frame.to_csv(index=False, float_format=self.float_format, lineterminator="\n")

    def resolve(self, path: str) -> str:
        """相对路径放在 output_dir 下"""
        if os.path.isabs(path) or os.path.dirname(path):
            return path
        return os.path.join(self.output_dir, path)

    def _write_text(self, text: str, path: Optional[str]) -> Optional[str]:
        if path is None:
            sys.stdout.write(text)
            return None
        target = self.resolve(path)
        try:
            directory = os.path.dirname(target)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(target, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            logging.info(f"结果已写入 {target}")
            return target
        except PermissionError:
            logging.error(f"没有写入权限: {target}")
            raise
        except OSError as e:
            logging.error(f"写入结果失败: {target}: {e}")
            raise

    def write_json(self, payload: dict, path: Optional[str] = None) -> Optional[str]:
        """
        写 JSON

        Args:
            payload: 结果字典
            path: 输出路径，None 时写到标准输出

        Returns:
            实际写入的路径
        """
        return self._write_text(self.format_json(payload), path)

    def write_frame(self, frame: pd.DataFrame, path: Optional[str] = None) -> Optional[str]:
        """写 CSV，path 为 None 时写到标准输出"""
        return self._write_text(self.format_frame(frame), path)

    def flatten(self, payload: dict, columns: Optional[Dict[str, Sequence[str]]] = None) -> Dict[str, Any]:
        """
        把结果字典展开成一行标量

        数组拆成多列，字符串列表用 "; " 连接，嵌套字典的键加前缀。

        Args:
            payload: 结果字典
            columns: 数组字段的列名，未给出的字段用 key1, key2, ...

        Returns:
            dict: 列名到标量的映射，顺序与 payload 一致
        """
        columns = columns or {}
        row: Dict[str, Any] = {}
        for key, value in self.to_serializable(payload).items():
            if isinstance(value, dict):
                row.update({f"{key}_{sub}": v for sub, v in self.flatten(value).items()})
            elif isinstance(value, list) and all(isinstance(v, str) for v in value):
                row[key] = "; ".join(value)
            elif isinstance(value, list):
                names = list(columns.get(key) or [f"{key}{i + 1}" for i in range(len(value))])
                if len(names) != len(value):
                    raise ValueError(f"{key} 有 {len(value)} 个分量，列名 {names} 不匹配")
                row.update(zip(names, value))
            else:
                row[key] = value
        return row

    def write(
        self,
        payload,
        path: Optional[str] = None,
        fmt: str = "json",
        columns: Optional[Dict[str, Sequence[str]]] = None,
    ) -> Optional[str]:
        """
        按格式分派：DataFrame 可写 csv 或 json；字典写 json，或展开成一行后写 csv

        Args:
            payload: DataFrame 或结果字典
            path: 输出路径，None 时写到标准输出
            fmt: "json" 或 "csv"
            columns: 字典写 csv 时数组字段的列名
        """
        if fmt == "csv":
            if not isinstance(payload, pd.DataFrame):
                payload = pd.DataFrame([self.flatten(payload, columns)])
            return self.write_frame(payload, path)
        if fmt == "json":
            if isinstance(payload, pd.DataFrame):
                payload = {"rows": payload.to_dict(orient="records")}
            return self.write_json(payload, path)
        raise ValueError(f"未知输出格式: {fmt}")
