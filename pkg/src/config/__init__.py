"""
刚体转子分析配置包
"""

from .config import AnalysisConfig

__all__ = ["AnalysisConfig"]
