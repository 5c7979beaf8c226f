"""
多项式引擎异常定义
所有模块抛出的错误都继承 PolynomialEngineError，CLI 和 HTTP 接口据此统一处理
"""


class PolynomialEngineError(Exception):
    """引擎错误基类"""


class CoefficientError(PolynomialEngineError):
    """系数运算错误：除零、未声明参数、不可逆元素"""


class VariableCountError(PolynomialEngineError):
    """变量个数不匹配或非法收缩"""


class DivisionError(PolynomialEngineError):
    """Laurent 多项式精确除法失败"""


class SubstitutionError(PolynomialEngineError):
    """代换时出现不可逆值的负幂"""

    def __init__(self, variable, exponent, message=None):
        self.variable = variable
        self.exponent = exponent
        super().__init__(
            message or f"cannot raise the value substituted for x{variable} to the power {exponent}"
        )


class OperatorIndexError(PolynomialEngineError):
    """算子下标超出类型允许的范围，或缺少 Hecke 参数"""


class BasisError(PolynomialEngineError):
    """基相关错误：重名、未知基、下标不在定义域内"""


class RecursionDepthError(BasisError):
    """约化规则递归过深（通常是自定义规则不终止）"""

    def __init__(self, basis_name, index, limit):
        self.basis_name = basis_name
        self.index = tuple(index)
        self.limit = limit
        super().__init__(
            f"basis '{basis_name}': reduction of {self.index} exceeded the recursion bound {limit}"
        )


class TriangularityError(BasisError):
    """贪心消元时首项没有严格前进"""


class SpecializationError(PolynomialEngineError):
    """特化之后剩余的不是标量"""


class PermutationError(PolynomialEngineError):
    """不是 1..n 的排列"""
