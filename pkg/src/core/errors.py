"""
异常定义

输入类错误同时继承 ValueError，数值失败同时继承 ArithmeticError。
"""


class RotatorError(Exception):
    """所有刚体转子相关错误的基类"""


class InvalidMasses(RotatorError, ValueError):
    """质量不是正的有限数"""


class InvalidShape(RotatorError, ValueError):
    """形状不满足三角形条件或无法放置"""


class DegenerateShape(RotatorError, ValueError):
    """形状无法在球面上实现（cos 超出 [-1, 1]）"""


class SingularPotential(RotatorError, ValueError):
    """势函数在碰撞或对跖点处奇异"""


class RepulsivePotential(RotatorError, ValueError):
    """斥力势不存在拉格朗日相对平衡"""


class NoPositiveEigenvector(RotatorError, ArithmeticError):
    """J 没有分量同号的特征向量"""


class InvalidTranslation(RotatorError, ArithmeticError):
    """平移公式给出的 cos 值不合法"""


class NoRoot(RotatorError, ArithmeticError):
    """在可行区间内没有找到根"""


class DegenerateDenominator(RotatorError, ArithmeticError):
    """质量比公式的分母为零"""


class NonPositiveNu(RotatorError, ArithmeticError):
    """质量比不为正，没有物理意义的转子"""


class RotatorRejected(RotatorError, ArithmeticError):
    """候选形状没有通过刚体转子检验"""

    def __init__(self, message, verdict=None, value=None):
        super().__init__(message)
        self.verdict = verdict
        self.value = value


class SingularState(RotatorError, ArithmeticError):
    """积分状态接近极点或碰撞"""


class StepFailure(RotatorError, ArithmeticError):
    """积分步长崩溃"""
