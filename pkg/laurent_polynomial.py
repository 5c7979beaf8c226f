"""
稀疏 Laurent 多项式
指数向量 -> 系数 的有限映射，变量个数显式保存；构造之后不可变
"""

import logging
from types import MappingProxyType
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from coefficient_rings import QQ_RING, CoefficientRing
from engine_errors import (CoefficientError, DivisionError, OperatorIndexError,
                           SubstitutionError, VariableCountError)

logger = logging.getLogger(__name__)

ExponentVector = Tuple[int, ...]

CARTAN_TYPES = ('A', 'B', 'C', 'D')


def lex_key(v: Sequence[int]):
    return tuple(v)


def graded_key(v: Sequence[int]):
    """先比总次数，再按字典序"""
    return (sum(v), tuple(v))


def check_index(cartan_type: str, i: int, n: int):
    """检查算子下标：A 为 1<=i<n，B/C 为 1<=i<=n，D 为 2<=i<=n"""
    if cartan_type not in CARTAN_TYPES:
        raise OperatorIndexError(f"unknown type '{cartan_type}', expected one of {CARTAN_TYPES}")
    low, high = {'A': (1, n - 1), 'B': (1, n), 'C': (1, n), 'D': (2, n)}[cartan_type]
    if not (low <= i <= high):
        raise OperatorIndexError(
            f"index {i} out of range for type {cartan_type} on {n} variables (allowed {low}..{high})"
        )


def reflect_vector(v: Sequence[int], i: int, cartan_type: str = 'A') -> ExponentVector:
    """单反射 s_i 作用在指数向量上（下标从 1 开始）"""
    check_index(cartan_type, i, len(v))
    w = list(v)
    k = i - 1
    if cartan_type == 'A':
        w[k], w[k + 1] = w[k + 1], w[k]
    elif cartan_type in ('B', 'C'):
        w[k] = -w[k]
    else:
        w[k - 1], w[k] = -w[k], -w[k - 1]
    return tuple(w)


class Polynomial:
    """
    n 个变量的 Laurent 多项式
    不保存零系数；所有运算返回新对象
    """

    __slots__ = ('nvars', 'ring', '_terms')

    def __init__(self, nvars: int, terms: Optional[Mapping] = None, ring: CoefficientRing = QQ_RING):
        if int(nvars) < 1:
            raise VariableCountError(f"a polynomial needs at least one variable, got {nvars}")
        self.nvars = int(nvars)
        self.ring = ring
        clean = {}
        for v, c in (terms or {}).items():
            v = tuple(int(e) for e in v)
            if len(v) != self.nvars:
                raise VariableCountError(f"exponent vector {v} does not have {self.nvars} entries")
            c = ring.coerce(c)
            if v in clean:
                c = ring.add(clean[v], c)
            if ring.is_zero(c):
                clean.pop(v, None)
            else:
                clean[v] = c
        self._terms = clean

    @classmethod
    def _raw(cls, nvars: int, ring: CoefficientRing, terms: Dict) -> 'Polynomial':
        """内部构造：调用方保证 terms 已经干净"""
        p = object.__new__(cls)
        p.nvars = nvars
        p.ring = ring
        p._terms = terms
        return p

    # 构造

    @classmethod
    def zero(cls, nvars: int, ring: CoefficientRing = QQ_RING) -> 'Polynomial':
        return cls(nvars, ring=ring)

    @classmethod
    def one(cls, nvars: int, ring: CoefficientRing = QQ_RING) -> 'Polynomial':
        return cls._raw(nvars, ring, {(0,) * nvars: ring.one()})

    @classmethod
    def constant(cls, value, nvars: int, ring: CoefficientRing = QQ_RING) -> 'Polynomial':
        return cls(nvars, {(0,) * nvars: value}, ring)

    @classmethod
    def monomial(cls, v: Sequence[int], coeff=1, ring: CoefficientRing = QQ_RING) -> 'Polynomial':
        return cls(len(v), {tuple(v): coeff}, ring)

    @classmethod
    def variable(cls, i: int, nvars: int, ring: CoefficientRing = QQ_RING) -> 'Polynomial':
        """第 i 个变量 x_i（从 1 开始）"""
        if not 1 <= i <= nvars:
            raise VariableCountError(f"variable x{i} does not exist in {nvars} variables")
        v = [0] * nvars
        v[i - 1] = 1
        return cls._raw(nvars, ring, {tuple(v): ring.one()})

    @classmethod
    def from_vectors(cls, terms: Mapping, ring: CoefficientRing = QQ_RING) -> 'Polynomial':
        """变量个数由最长的向量决定，较短的向量在末尾补零"""
        if not terms:
            raise VariableCountError("cannot infer the number of variables of an empty polynomial")
        n = max(len(v) for v in terms)
        padded = {}
        for v, c in terms.items():
            key = tuple(v) + (0,) * (n - len(v))
            padded[key] = ring.add(padded[key], ring.coerce(c)) if key in padded else ring.coerce(c)
        return cls(n, padded, ring)

    # 读取

    @property
    def terms(self) -> Mapping:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def support(self):
        return list(self._terms)

    def coefficient(self, v: Sequence[int]):
        return self._terms.get(tuple(v), self.ring.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(v) for v in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_term(self):
        return self.coefficient((0,) * self.nvars)

    def degree(self) -> int:
        if not self._terms:
            raise VariableCountError("the zero polynomial has no degree")
        return max(sum(v) for v in self._terms)

    def min_exponent(self, i: int) -> int:
        """变量 x_i 的最小指数（零多项式返回 0）"""
        return min((v[i - 1] for v in self._terms), default=0)

    def leading_vector(self, key=lex_key, largest: bool = False) -> ExponentVector:
        if not self._terms:
            raise VariableCountError("the zero polynomial has no leading term")
        pick = max if largest else min
        return pick(self._terms, key=key)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(sorted(self._terms.items(), key=lambda item: graded_key(item[0])))

    def __bool__(self):
        return bool(self._terms)

    # 运算

    def _check_compatible(self, other: 'Polynomial'):
        if not isinstance(other, Polynomial):
            raise CoefficientError(f"expected a polynomial, got {type(other).__name__}")
        if other.nvars != self.nvars:
            raise VariableCountError(
                f"polynomials on {self.nvars} and {other.nvars} variables; use change_nb_variables first"
            )
        if other.ring != self.ring:
            raise CoefficientError(f"coefficient rings differ: {self.ring} and {other.ring}")

    def _lift(self, other) -> 'Polynomial':
        if isinstance(other, Polynomial) and other.ring == self.ring:
            return other
        return Polynomial.constant(other, self.nvars, self.ring)

    def add(self, other: 'Polynomial') -> 'Polynomial':
        self._check_compatible(other)
        ring = self.ring
        result = dict(self._terms)
        for v, c in other._terms.items():
            if v in result:
                s = ring.add(result[v], c)
                if ring.is_zero(s):
                    del result[v]
                else:
                    result[v] = s
            else:
                result[v] = c
        return Polynomial._raw(self.nvars, ring, result)

    def neg(self) -> 'Polynomial':
        ring = self.ring
        return Polynomial._raw(self.nvars, ring, {v: ring.neg(c) for v, c in self._terms.items()})

    def sub(self, other: 'Polynomial') -> 'Polynomial':
        return self.add(other.neg())

    def scale(self, scalar) -> 'Polynomial':
        """乘以系数环中的标量"""
        ring = self.ring
        scalar = ring.coerce(scalar)
        if ring.is_zero(scalar):
            return Polynomial._raw(self.nvars, ring, {})
        result = {}
        for v, c in self._terms.items():
            prod = ring.mul(c, scalar)
            if not ring.is_zero(prod):
                result[v] = prod
        return Polynomial._raw(self.nvars, ring, result)

    def shift(self, w: Sequence[int]) -> 'Polynomial':
        """乘以单项式 x^w"""
        return Polynomial._raw(
            self.nvars, self.ring,
            {tuple(a + b for a, b in zip(v, w)): c for v, c in self._terms.items()},
        )

    def mul(self, other: 'Polynomial') -> 'Polynomial':
        self._check_compatible(other)
        ring = self.ring
        result = {}
        for v, a in self._terms.items():
            for w, b in other._terms.items():
                key = tuple(x + y for x, y in zip(v, w))
                prod = ring.mul(a, b)
                result[key] = ring.add(result[key], prod) if key in result else prod
        return Polynomial._raw(self.nvars, ring, {v: c for v, c in result.items() if not ring.is_zero(c)})

    def power(self, k: int) -> 'Polynomial':
        if k < 0:
            if not self.is_monomial():
                raise CoefficientError("only single-term polynomials have Laurent inverses")
            ((v, c),) = self._terms.items()
            return Polynomial.monomial([-e for e in v], self.ring.invert(c), self.ring).power(-k)
        result = Polynomial.one(self.nvars, self.ring)
        base = self
        while k:
            if k & 1:
                result = result.mul(base)
            k >>= 1
            if k:
                base = base.mul(base)
        return result

    def __add__(self, other):
        return self.add(self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.sub(self._lift(other))

    def __rsub__(self, other):
        return self._lift(other).sub(self)

    def __neg__(self):
        return self.neg()

    def __mul__(self, other):
        if isinstance(other, Polynomial) and other.ring == self.ring:
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        return self.power(int(k))

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            if self.is_constant() or self.is_zero():
                try:
                    other = self._lift(other)
                except CoefficientError:
                    return NotImplemented
            else:
                return NotImplemented
        if other.nvars != self.nvars or set(other._terms) != set(self._terms):
            return False
        return all(self.ring.equal(c, other._terms[v]) for v, c in self._terms.items())

    __hash__ = None

    # 变量与代换

    def change_nb_variables(self, m: int) -> 'Polynomial':
        """补零增加变量；收缩只在被删掉的位置全为零时允许"""
        m = int(m)
        if m < 1:
            raise VariableCountError(f"cannot use {m} variables")
        if m >= self.nvars:
            pad = (0,) * (m - self.nvars)
            return Polynomial._raw(m, self.ring, {v + pad: c for v, c in self._terms.items()})
        for v in self._terms:
            if any(v[m:]):
                raise VariableCountError(f"cannot shrink to {m} variables: x{list(v)} uses a dropped variable")
        return Polynomial._raw(m, self.ring, {v[:m]: c for v, c in self._terms.items()})

    def map_coefficients(self, f, ring: Optional[CoefficientRing] = None) -> 'Polynomial':
        ring = ring or self.ring
        result = {}
        for v, c in self._terms.items():
            c = f(c)
            if not ring.is_zero(c):
                result[v] = c
        return Polynomial._raw(self.nvars, ring, result)

    def act_reflection(self, i: int, cartan_type: str = 'A') -> 'Polynomial':
        """x^v s_i = x^{v s_i}，系数不变"""
        check_index(cartan_type, i, self.nvars)
        return Polynomial._raw(
            self.nvars, self.ring,
            {reflect_vector(v, i, cartan_type): c for v, c in self._terms.items()},
        )

    # 自定义基的规则里可以直接写 call_back(v).divided_difference(i)

    def divided_difference(self, i: int, cartan_type: str = 'A') -> 'Polynomial':
        from weyl_operators import divided_difference
        return divided_difference(self, i, cartan_type)

    def divided_difference_isobar(self, i: int, cartan_type: str = 'A') -> 'Polynomial':
        from weyl_operators import isobaric
        return isobaric(self, i, cartan_type)

    def divided_difference_isobar_hat(self, i: int, cartan_type: str = 'A') -> 'Polynomial':
        from weyl_operators import isobaric_hat
        return isobaric_hat(self, i, cartan_type)

    def hecke_generator(self, i: int, t1=None, t2=None) -> 'Polynomial':
        from weyl_operators import hecke_T
        return hecke_T(self, i, t1, t2)

    def compose(self, values: Sequence['Polynomial']) -> 'Polynomial':
        """
        把 x_j 整体换成 values[j-1]（values 可以在别的变量个数上）
        负指数只允许单项式值
        """
        if len(values) != self.nvars:
            raise VariableCountError(f"need {self.nvars} values, got {len(values)}")
        target = values[0]
        powers = {}

        def value_power(j, e):
            key = (j, e)
            if key not in powers:
                if e < 0 and not values[j].is_monomial():
                    raise SubstitutionError(j + 1, e)
                powers[key] = values[j].power(e)
            return powers[key]

        result = Polynomial.zero(target.nvars, target.ring)
        for v, c in self._terms.items():
            term = Polynomial.constant(c, target.nvars, target.ring) if target.ring == self.ring \
                else Polynomial.one(target.nvars, target.ring).scale(c)
            for j, e in enumerate(v):
                if e:
                    term = term.mul(value_power(j, e))
            result = result.add(term)
        return result

    def subs_var(self, assignments: Iterable[Tuple[int, object]]) -> 'Polynomial':
        """
        同时代换若干变量 x_i -> value（下标从 1 开始，value 与自身同变量个数）
        非单项式的值遇到负幂时先乘 x_i^k 清掉负指数，代换后再精确除以 value^k
        """
        values = [Polynomial.variable(j + 1, self.nvars, self.ring) for j in range(self.nvars)]
        pending = []
        shifted = self
        for i, value in assignments:
            if not 1 <= i <= self.nvars:
                raise VariableCountError(f"variable x{i} does not exist in {self.nvars} variables")
            value = self._lift(value)
            if value.nvars != self.nvars:
                raise VariableCountError(f"value for x{i} lives on {value.nvars} variables, expected {self.nvars}")
            values[i - 1] = value
            low = self.min_exponent(i)
            if low < 0 and not value.is_monomial():
                if value.is_zero():
                    raise SubstitutionError(i, low)
                w = [0] * self.nvars
                w[i - 1] = -low
                shifted = shifted.shift(w)
                pending.append((i, value, -low))
        result = shifted.compose(values)
        for i, value, k in pending:
            try:
                result = exact_divide(result, value.power(k))
            except DivisionError:
                raise SubstitutionError(i, -k) from None
        return result

    # 输出

    def format(self, prefix: str = 'x', brackets: str = '[]', sep: str = ', ') -> str:
        return format_terms(
            ((v, c) for v, c in self), self.ring,
            lambda v: f"{prefix}{brackets[0]}{sep.join(str(e) for e in v)}{brackets[1]}",
        )

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.format()})"


def format_terms(items, ring: CoefficientRing, render) -> str:
    """把 (向量, 系数) 序列写成 'c*x[..] + x[..] - ...' 的形式"""
    text = ""
    for v, c in items:
        negative = ring.is_negative(c)
        if negative:
            c = ring.neg(c)
        body = render(v)
        if not ring.is_one(c):
            coeff = ring.format(c)
            if ring.needs_parentheses(c):
                coeff = f"({coeff})"
            body = f"{coeff}*{body}"
        if not text:
            text = f"-{body}" if negative else body
        else:
            text += f" - {body}" if negative else f" + {body}"
    return text or "0"


def exact_divide(dividend: Polynomial, divisor: Polynomial) -> Polynomial:
    """
    Laurent 多项式的精确除法，不能整除时抛 DivisionError
    两边先平移到非负指数且除数不被任何 x_i 整除，再做字典序长除法
    """
    dividend._check_compatible(divisor)
    if divisor.is_zero():
        raise DivisionError("division by the zero polynomial")
    if dividend.is_zero():
        return dividend
    n = dividend.nvars
    ring = dividend.ring
    a = [divisor.min_exponent(i) for i in range(1, n + 1)]
    b = [dividend.min_exponent(i) for i in range(1, n + 1)]
    d = divisor.shift([-e for e in a])
    r = dividend.shift([-e for e in b])
    lead = d.leading_vector(largest=True)
    lead_coeff = d.coefficient(lead)
    quotient = {}
    while not r.is_zero():
        top = r.leading_vector(largest=True)
        diff = tuple(x - y for x, y in zip(top, lead))
        if min(diff) < 0:
            raise DivisionError(f"{divisor.format()} does not divide {dividend.format()}")
        try:
            c = ring.divide(r.coefficient(top), lead_coeff)
        except CoefficientError:
            raise DivisionError(f"leading coefficient of {divisor.format()} is not invertible") from None
        quotient[diff] = c
        r = r.sub(d.shift(diff).scale(c))
    offset = [y - x for x, y in zip(a, b)]
    return Polynomial._raw(n, ring, quotient).shift(offset)


def sample_polynomial(nvars: int, ring: CoefficientRing = QQ_RING) -> Polynomial:
    """演示用元素 1 + 2*x1 + 3*x1^2 + x^(1, 2, ..., n)"""
    first = [1] + [0] * (nvars - 1)
    second = [2] + [0] * (nvars - 1)
    stairs = list(range(1, nvars + 1))
    return Polynomial(nvars, {(0,) * nvars: 1, tuple(first): 2, tuple(second): 3, tuple(stairs): 1}, ring)
