"""
系数环
有理数域 QQ、参数有理函数域 QQ(q, t1, t2, ...)，以及统一的环接口
"""

import logging
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Tuple

from sympy import QQ
from sympy.polys.fields import field
from sympy.polys.orderings import grlex

from engine_errors import CoefficientError

logger = logging.getLogger(__name__)


def format_rational(value: Fraction) -> str:
    """有理数的文本形式：整数直接输出，否则 a/b"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rational_arith(a, b, op: str) -> Fraction:
    """两个有理数的四则运算，结果总是约分后的 Fraction"""
    a, b = Fraction(a), Fraction(b)
    if op == '+':
        return a + b
    if op == '-':
        return a - b
    if op in ('*', '×'):
        return a * b
    if op in ('/', '÷'):
        if b == 0:
            raise CoefficientError(f"division of {format_rational(a)} by zero")
        return a / b
    raise CoefficientError(f"unknown rational operation '{op}'")


class CoefficientRing:
    """
    系数环接口
    多项式只通过这些方法操作系数，所以同一套引擎可以跑在 QQ、QQ(params) 和 y 多项式上
    """

    name = 'ring'
    params: Tuple[str, ...] = ()

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def coerce(self, value):
        raise NotImplementedError

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a) -> bool:
        return not a

    def equal(self, a, b) -> bool:
        return self.is_zero(self.sub(a, b))

    def is_unit(self, a) -> bool:
        return not self.is_zero(a)

    def invert(self, a):
        raise NotImplementedError

    def divide(self, a, b):
        return self.mul(a, self.invert(b))

    def power(self, a, k: int):
        if k < 0:
            return self.power(self.invert(a), -k)
        result = self.one()
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def param(self, name: str):
        raise CoefficientError(f"parameter '{name}' is not declared in {self.name}")

    def has_params(self, names: Iterable[str]) -> bool:
        return all(n in self.params for n in names)

    def is_negative(self, a) -> bool:
        """打印时是否把符号提到项前面"""
        return False

    def is_one(self, a) -> bool:
        return self.equal(a, self.one())

    def needs_parentheses(self, a) -> bool:
        """作为 c*x(...) 的系数时是否需要括号"""
        return False

    def format(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return type(self) is type(other) and self.params == other.params

    def __hash__(self):
        return hash((type(self).__name__, self.params))

    def __repr__(self):
        return self.name


class RationalField(CoefficientRing):
    """任意精度有理数"""

    name = 'Rational Field'

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def coerce(self, value):
        if isinstance(value, Fraction):
            return value
        if isinstance(value, bool):
            raise CoefficientError(f"cannot use {value!r} as a rational")
        if isinstance(value, int):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value)
            except (ValueError, ZeroDivisionError):
                return self.param(value)
        if hasattr(value, 'numerator') and hasattr(value, 'denominator'):
            return Fraction(int(value.numerator), int(value.denominator))
        raise CoefficientError(f"cannot coerce {value!r} into {self.name}")

    def invert(self, a):
        if a == 0:
            raise CoefficientError("division by zero")
        return 1 / a

    def is_negative(self, a) -> bool:
        return a < 0

    def format(self, a) -> str:
        return format_rational(a)


class ParameterField(CoefficientRing):
    """
    参数的有理函数域 QQ(p1, ..., pk)
    分子分母是 sympy 的稀疏多项式（按 grlex 排序），sympy 负责约分和分母首项系数为正的规范形式
    """

    def __init__(self, params):
        params = tuple(params)
        if not params:
            raise CoefficientError("a parameter field needs at least one parameter")
        if len(set(params)) != len(params):
            raise CoefficientError(f"duplicate parameters in {params}")
        self.params = params
        self.name = f"Fraction Field in {', '.join(params)} over Rational Field"
        generated = field(",".join(params), QQ, grlex)
        self.field = generated[0]
        self.ring = self.field.ring
        self._gens = dict(zip(params, generated[1:]))

    def zero(self):
        return self.field.zero

    def one(self):
        return self.field.one

    def param(self, name: str):
        try:
            return self._gens[name]
        except KeyError:
            raise CoefficientError(f"parameter '{name}' is not declared in {self.name}") from None

    def coerce(self, value):
        if isinstance(value, Fraction):
            return self.field(QQ(value.numerator, value.denominator))
        if isinstance(value, int) and not isinstance(value, bool):
            return self.field(value)
        if isinstance(value, str):
            try:
                return self.coerce(Fraction(value))
            except (ValueError, ZeroDivisionError):
                return self.param(value)
        if getattr(value, 'field', None) == self.field:
            return value
        if getattr(value, 'ring', None) == self.ring:
            return self.field.new(value)
        raise CoefficientError(f"cannot coerce {value!r} into {self.name}")

    def invert(self, a):
        if not a:
            raise CoefficientError("division by zero")
        return self.field.one / a

    # 参数多项式与分式

    def polynomial(self, terms):
        """由 {指数元组: 有理数} 构造参数多项式"""
        clean = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != len(self.params) or min(exps, default=0) < 0:
                raise CoefficientError(f"bad parameter exponent {exps} for {self.params}")
            coeff = Fraction(coeff)
            if coeff:
                clean[exps] = QQ(coeff.numerator, coeff.denominator)
        return self.ring.from_dict(clean) if clean else self.ring.zero

    def fraction(self, numerator, denominator):
        """num/den，经 fraction_normalize 规范化"""
        if not denominator:
            raise CoefficientError("zero denominator in a parameter fraction")
        return fraction_normalize(self.field.raw_new(self.ring(numerator), self.ring(denominator)))

    def is_negative(self, a) -> bool:
        return bool(a.numer) and a.numer.LC < 0

    def needs_parentheses(self, a) -> bool:
        return len(a.numer.terms()) > 1

    def format(self, a) -> str:
        numer = self._format_polynomial(a.numer)
        if a.denom == self.ring.one:
            return numer
        denom = self._format_polynomial(a.denom)
        if len(a.numer.terms()) > 1:
            numer = f"({numer})"
        if len(a.denom.terms()) > 1 or '*' in denom:
            denom = f"({denom})"
        return f"{numer}/{denom}"

    def _format_polynomial(self, p) -> str:
        if not p:
            return "0"
        text = ""
        for monom, coeff in p.terms():
            value = Fraction(int(coeff.numerator), int(coeff.denominator))
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.params, monom) if e]
            if not factors:
                body = format_rational(abs(value))
            elif abs(value) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([format_rational(abs(value))] + factors)
            if value < 0:
                text += f"-{body}"
            else:
                text += f"+{body}" if text else body
        return text


def fraction_normalize(f):
    """
    参数分式的规范形式：约掉有理数内容和公因式，分母首项系数为正
    幂等
    """
    if not f.denom:
        raise CoefficientError("zero denominator in a parameter fraction")
    numer, denom = f.numer.cancel(f.denom)
    return f.field.raw_new(numer, denom)


def fraction_equal(a, b) -> bool:
    """交叉相乘判断两个参数分式相等"""
    return a.numer * b.denom == b.numer * a.denom


QQ_RING = RationalField()


@lru_cache(maxsize=None)
def parameter_field(params: Tuple[str, ...]) -> ParameterField:
    logger.debug(f"创建参数域: {params}")
    return ParameterField(params)


def ring_for_params(params) -> CoefficientRing:
    """无参数时返回 QQ，否则返回（缓存的）参数域"""
    params = tuple(p for p in params if p)
    if not params:
        return QQ_RING
    return parameter_field(params)
