"""
多基引擎
基 = 下标向量 -> 单项式展开的约化规则；展开带缓存，反向转换用三角消元
"""

import inspect
import logging
import threading
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from coefficient_rings import QQ_RING, CoefficientRing, ring_for_params
from engine_errors import (BasisError, CoefficientError, RecursionDepthError,
                           TriangularityError, VariableCountError)
from laurent_polynomial import Polynomial, format_terms, graded_key
from weyl_operators import OperatorKind, apply_operator

logger = logging.getLogger(__name__)

DEFAULT_RECURSION_FACTOR = 4


class IndexDomain(Enum):
    NATURAL = 'N'
    INTEGER = 'Z'

    def contains(self, v: Sequence[int]) -> bool:
        return self is IndexDomain.INTEGER or all(e >= 0 for e in v)


class LeadingOrder(Enum):
    """三角消元时首项的选法：取 key 最小的支撑向量"""
    LEX_MIN = 'lex-min'
    GRADED_MIN_LEX_MIN = 'graded-min-then-lex-min'
    GRADED_MAX_LEX_MAX = 'graded-max-then-lex-max'
    GRADED_MAX_SORTED_MAX_LEX_MAX = 'graded-max-then-sorted-max-then-lex-max'

    def key(self, v: Sequence[int]):
        v = tuple(v)
        if self is LeadingOrder.LEX_MIN:
            return v
        if self is LeadingOrder.GRADED_MIN_LEX_MIN:
            return graded_key(v)
        if self is LeadingOrder.GRADED_MAX_LEX_MAX:
            return (-sum(v), tuple(-e for e in v))
        return (-sum(v), tuple(-e for e in sorted(v, reverse=True)), tuple(-e for e in v))


# 约化规则的三种结果


@dataclass(frozen=True)
class BaseCase:
    polynomial: Polynomial


@dataclass(frozen=True)
class Step:
    """
    expand(v) = scalar * operator(expand(parent))
    operator 是 OperatorKind（配合 index/cartan_type/ambient）或者 Polynomial -> Polynomial 的函数
    """
    parent: Tuple[int, ...]
    operator: Union[OperatorKind, Callable[[Polynomial], Polynomial]]
    index: Optional[int] = None
    cartan_type: str = 'A'
    ambient: bool = False
    scalar: object = None
    label: str = ''

    def apply(self, p: Polynomial) -> Polynomial:
        if isinstance(self.operator, OperatorKind):
            result = apply_operator(p, self.operator, self.index, self.cartan_type, self.ambient)
        else:
            result = self.operator(p)
        return result if self.scalar is None else result.scale(self.scalar)

    def describe(self) -> str:
        """日志用的短名字，比如 pi_3 (B)"""
        if self.label:
            name = self.label
        elif isinstance(self.operator, OperatorKind):
            name = self.operator.value
        else:
            name = getattr(self.operator, '__name__', 'step')
        if self.index is not None:
            name = f"{name}_{self.index}"
        if self.cartan_type != 'A':
            name = f"{name} ({self.cartan_type})"
        return name


@dataclass(frozen=True)
class Combination:
    """若干结果的线性组合：parts 是 (系数, BaseCase | Step) 的元组"""
    parts: Tuple[Tuple[object, object], ...] = dataclass_field(default_factory=tuple)


ReductionOutcome = Union[BaseCase, Step, Combination]


class Basis:
    """
    一个线性基
    rule 有两种写法：
      - rule(v) 返回 BaseCase / Step / Combination（内置基都这样写）
      - rule(v, basis, call_back, **params) 直接返回多项式（自定义基，callback_style=True）
    """

    def __init__(self, name: str, prefix: str, rule, ring: CoefficientRing = QQ_RING, *,
                 index_domain: IndexDomain = IndexDomain.NATURAL,
                 order: LeadingOrder = LeadingOrder.LEX_MIN,
                 cartan_type: Optional[str] = None,
                 ambient: bool = False,
                 required_params: Sequence[str] = (),
                 callback_style: bool = False,
                 rule_params: Optional[Dict[str, object]] = None,
                 convertible: bool = True,
                 is_monomial: bool = False,
                 variable: str = 'x',
                 display: Optional[str] = None,
                 recursion_factor: int = DEFAULT_RECURSION_FACTOR,
                 description: str = ''):
        if not name or not prefix:
            raise BasisError("a basis needs a name and a display prefix")
        missing = [p for p in required_params if p not in ring.params]
        if missing:
            raise CoefficientError(
                f"basis '{name}' needs the parameters {list(required_params)}, missing {missing} in {ring}"
            )
        self.name = name
        self.prefix = prefix
        self.rule = rule
        self.ring = ring
        self.index_domain = index_domain
        self.order = order
        self.cartan_type = cartan_type
        self.ambient = ambient
        self.required_params = tuple(required_params)
        self.callback_style = callback_style
        self.rule_params = {k: ring.coerce(v) for k, v in (rule_params or {}).items()}
        self.convertible = convertible
        self.is_monomial = is_monomial
        self.variable = variable
        self.display = display or prefix
        self.recursion_factor = recursion_factor
        self.description = description
        self._cache: Dict[Tuple[int, ...], Polynomial] = {}
        self._lock = threading.Lock()

    # 下标

    def check_index(self, v: Sequence[int]) -> Tuple[int, ...]:
        try:
            v = tuple(int(e) for e in v)
        except (TypeError, ValueError):
            raise BasisError(f"basis '{self.name}': index {v!r} is not an integer vector") from None
        if not v:
            raise VariableCountError(f"basis '{self.name}': empty index vector")
        if not self.index_domain.contains(v):
            raise BasisError(f"basis '{self.name}': index {v} is outside its domain (non-negative vectors)")
        return v

    def recursion_limit(self, v: Sequence[int]) -> int:
        return self.recursion_factor * (sum(abs(e) for e in v) + len(v) ** 2)

    def monomial(self, v: Sequence[int]) -> Polynomial:
        return Polynomial.monomial(v, 1, self.ring)

    # 展开

    def expand(self, v: Sequence[int]) -> Polynomial:
        v = self.check_index(v)
        limit = self.recursion_limit(v)
        try:
            return self._expand(v, 0, limit, v)
        except RecursionError:
            # 解释器的栈先于 limit 用完
            raise RecursionDepthError(self.name, v, limit) from None

    def _expand(self, v, depth, limit, root) -> Polynomial:
        with self._lock:
            hit = self._cache.get(v)
        if hit is not None:
            return hit
        if depth > limit:
            raise RecursionDepthError(self.name, root, limit)

        def call_back(u):
            return self._expand(self.check_index(u), depth + 1, limit, root)

        if self.callback_style:
            result = self.rule(list(v), self.monomial, call_back, **self.rule_params)
            if not isinstance(result, Polynomial):
                raise BasisError(f"basis '{self.name}': rule returned {type(result).__name__} for {v}")
            result = self._coerce(result)
            if result.nvars != len(v):
                raise VariableCountError(
                    f"basis '{self.name}': rule returned {result.nvars} variables for index {v}"
                )
        else:
            outcome = self.rule(v)
            if isinstance(outcome, Step):
                logger.debug(f"{self.name}{v} 由 {outcome.parent} 经 {outcome.describe()} 得到")
            result = self._realize(outcome, call_back)
        with self._lock:
            result = self._cache.setdefault(v, result)
        return result

    def _realize(self, outcome, call_back) -> Polynomial:
        if isinstance(outcome, BaseCase):
            return self._coerce(outcome.polynomial)
        if isinstance(outcome, Step):
            return outcome.apply(call_back(outcome.parent))
        if isinstance(outcome, Combination):
            total = None
            for coeff, part in outcome.parts:
                term = self._realize(part, call_back).scale(coeff)
                total = term if total is None else total.add(term)
            if total is None:
                raise BasisError(f"basis '{self.name}': empty combination")
            return total
        raise BasisError(f"basis '{self.name}': unknown reduction outcome {outcome!r}")

    def _coerce(self, p: Polynomial) -> Polynomial:
        if p.ring == self.ring:
            return p
        return p.map_coefficients(self.ring.coerce, self.ring)

    def cache_size(self) -> int:
        with self._lock:
            return len(self._cache)

    def clear_cache(self):
        with self._lock:
            self._cache.clear()

    # 三角转换

    def to_basis(self, p: Polynomial) -> 'BasisExpansion':
        """
        贪心消元：取 order 下最小的支撑向量 v，除以 expand(v) 中 x^v 的系数后减掉
        首项必须严格前进
        """
        p = self._coerce(p)
        ring = self.ring
        if self.is_monomial:
            return BasisExpansion(self, p.nvars, dict(p.items()))
        if not self.convertible:
            raise BasisError(f"conversion into basis '{self.name}' is not supported, go through its positive variant")
        key = self.order.key
        remaining = p
        result = {}
        previous = None
        steps = 0
        while not remaining.is_zero():
            v = min(remaining.support(), key=key)
            current = key(v)
            if previous is not None and current <= previous:
                raise TriangularityError(
                    f"basis '{self.name}': leading vector {v} did not advance past the previous step"
                )
            previous = current
            self.check_index(v)
            expansion = self.expand(v)
            lead = expansion.coefficient(v)
            if ring.is_zero(lead):
                raise TriangularityError(f"basis '{self.name}': expand{v} does not contain x{list(v)}")
            c = ring.divide(remaining.coefficient(v), lead)
            result[v] = c
            remaining = remaining.sub(expansion.scale(c))
            steps += 1
        logger.debug(f"换到 {self.name} 基用了 {steps} 步")
        return BasisExpansion(self, p.nvars, result)

    def check_triangular(self, v: Sequence[int]) -> bool:
        """expand(v) 含 x^v，且其余支撑向量在 order 下都严格更大"""
        v = self.check_index(v)
        expansion = self.expand(v)
        if v not in expansion.terms:
            return False
        lead = self.order.key(v)
        return all(self.order.key(w) > lead for w in expansion.support() if w != v)

    # 构造元素

    def element(self, terms) -> 'BasisExpansion':
        """由 {下标: 系数} 构造，较短的下标在末尾补零"""
        if not terms:
            raise VariableCountError("cannot infer the number of variables of an empty expansion")
        n = max(len(v) for v in terms)
        clean = {}
        for v, c in terms.items():
            v = self.check_index(tuple(v) + (0,) * (n - len(v)))
            c = self.ring.coerce(c)
            clean[v] = self.ring.add(clean[v], c) if v in clean else c
        return BasisExpansion(self, n, clean)

    def zero(self, nvars: int) -> 'BasisExpansion':
        return BasisExpansion(self, nvars, {})

    def __getitem__(self, v) -> 'BasisExpansion':
        v = (v,) if isinstance(v, int) else tuple(v)
        return self.element({v: 1})

    def __call__(self, value) -> 'BasisExpansion':
        if isinstance(value, BasisExpansion):
            return convert(value, self)
        if isinstance(value, Polynomial):
            return self.to_basis(value)
        raise BasisError(f"cannot convert {type(value).__name__} into basis '{self.name}'")

    def summary(self) -> dict:
        return {
            'name': self.name,
            'prefix': self.prefix,
            'display': self.display,
            'index_domain': self.index_domain.value,
            'order': self.order.value,
            'type': self.cartan_type,
            'params': list(self.ring.params),
            'description': self.description,
        }

    def __repr__(self):
        return f"Basis({self.name!r}, prefix={self.prefix!r})"


class BasisExpansion:
    """基下的有限线性组合 Σ c_v · B_v"""

    __slots__ = ('basis', 'nvars', '_terms')

    def __init__(self, basis: Basis, nvars: int, terms: Dict):
        ring = basis.ring
        self.basis = basis
        self.nvars = nvars
        self._terms = {}
        for v, c in terms.items():
            v = tuple(v)
            if len(v) != nvars:
                raise VariableCountError(f"index {v} does not have {nvars} entries")
            if not ring.is_zero(c):
                self._terms[v] = c

    @property
    def ring(self) -> CoefficientRing:
        return self.basis.ring

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda item: graded_key(item[0]))

    def coefficient(self, v):
        return self._terms.get(tuple(v), self.ring.zero())

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self.items())

    # 运算

    def _check_same(self, other: 'BasisExpansion'):
        if not isinstance(other, BasisExpansion):
            raise BasisError(f"expected a basis expansion, got {type(other).__name__}")
        if other.basis is not self.basis:
            raise BasisError(f"expansions in '{self.basis.name}' and '{other.basis.name}'; convert first")
        if other.nvars != self.nvars:
            raise VariableCountError(f"expansions on {self.nvars} and {other.nvars} variables")

    def add(self, other: 'BasisExpansion') -> 'BasisExpansion':
        self._check_same(other)
        ring = self.ring
        result = dict(self._terms)
        for v, c in other._terms.items():
            result[v] = ring.add(result[v], c) if v in result else c
        return BasisExpansion(self.basis, self.nvars, result)

    def neg(self) -> 'BasisExpansion':
        return BasisExpansion(self.basis, self.nvars, {v: self.ring.neg(c) for v, c in self._terms.items()})

    def sub(self, other: 'BasisExpansion') -> 'BasisExpansion':
        return self.add(other.neg())

    def scale(self, scalar) -> 'BasisExpansion':
        ring = self.ring
        scalar = ring.coerce(scalar)
        return BasisExpansion(self.basis, self.nvars, {v: ring.mul(c, scalar) for v, c in self._terms.items()})

    def __add__(self, other):
        return self.add(other)

    def __sub__(self, other):
        return self.sub(other)

    def __neg__(self):
        return self.neg()

    def __mul__(self, other):
        if isinstance(other, BasisExpansion):
            return multiply_in_basis(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, BasisExpansion):
            return NotImplemented
        if other.basis is not self.basis or other.nvars != self.nvars:
            return False
        if set(other._terms) != set(self._terms):
            return False
        return all(self.ring.equal(c, other._terms[v]) for v, c in self._terms.items())

    __hash__ = None

    # 展开与转换

    def expand(self) -> Polynomial:
        return expand_combination(self)

    def to(self, target: Basis) -> 'BasisExpansion':
        return convert(self, target)

    def apply_operator(self, kind, i: int, cartan_type: Optional[str] = None, t1=None, t2=None):
        """
        对展开式作用算子
        环境空间基上结果仍在同一个基里（用该基记住的类型），其他基返回单项式多项式
        """
        p = self.expand()
        if self.basis.ambient:
            result = apply_operator(p, kind, i, self.basis.cartan_type, True, t1, t2)
            return BasisExpansion(self.basis, self.nvars, dict(result.items()))
        return apply_operator(p, kind, i, cartan_type or 'A', False, t1, t2)

    # 输出

    def format(self) -> str:
        prefix = self.basis.display
        # 单项式基写成 x[...]，其余（含环境空间基）写成 prefix(...)
        left, right = '[]' if self.basis.is_monomial and not self.basis.ambient else '()'
        return format_terms(
            self.items(), self.ring,
            lambda v: f"{prefix}{left}{', '.join(str(e) for e in v)}{right}",
        )

    def records(self) -> List[dict]:
        return [{'vector': list(v), 'coeff': self.ring.format(c)} for v, c in self.items()]

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"BasisExpansion({self.basis.name}, {self.format()})"


# 模块级操作


def expand(basis: Basis, v: Sequence[int]) -> Polynomial:
    return basis.expand(v)


def expand_combination(e: BasisExpansion) -> Polynomial:
    result = Polynomial.zero(e.nvars, e.ring)
    for v, c in e._terms.items():
        result = result.add(e.basis.expand(v).scale(c))
    return result


def to_basis(basis: Basis, p: Polynomial) -> BasisExpansion:
    return basis.to_basis(p)


def convert(e: BasisExpansion, target: Basis) -> BasisExpansion:
    if e.basis is target:
        return e
    logger.debug(f"换基 {e.basis.name} -> {target.name}，{len(e)} 项")
    return target.to_basis(expand_combination(e))


def multiply_in_basis(a: BasisExpansion, b: BasisExpansion) -> BasisExpansion:
    a._check_same(b)
    return a.basis.to_basis(expand_combination(a).mul(expand_combination(b)))


def _accepts_callback(rule) -> bool:
    try:
        parameters = inspect.signature(rule).parameters
    except (TypeError, ValueError):
        return False
    positional = [p for p in parameters.values()
                  if p.kind in (p.POSITIONAL_ONLY, p.POSITIONAL_OR_KEYWORD)]
    return len(positional) >= 3


class BasisRegistry:
    """
    基注册表
    名字唯一；显示前缀在"已绑定"的基之间唯一，同前缀的其他基只能按名字取，需要时用 bind_prefix 切换
    """

    def __init__(self):
        self._by_name: Dict[str, Basis] = {}
        self._by_prefix: Dict[str, str] = {}
        self._lock = threading.Lock()

    def register(self, basis: Basis, bind: bool = True) -> Basis:
        with self._lock:
            if basis.name in self._by_name:
                raise BasisError(f"a basis named '{basis.name}' is already registered")
            if bind and basis.prefix in self._by_prefix:
                raise BasisError(
                    f"prefix '{basis.prefix}' is already used by '{self._by_prefix[basis.prefix]}'"
                )
            self._by_name[basis.name] = basis
            if bind:
                self._by_prefix[basis.prefix] = basis.name
        logger.debug(f"注册基 {basis.name}（前缀 {basis.prefix}）")
        return basis

    def get(self, name: str) -> Basis:
        try:
            return self._by_name[name]
        except KeyError:
            raise BasisError(f"unknown basis '{name}', known: {sorted(self._by_name)}") from None

    def by_prefix(self, prefix: str) -> Basis:
        try:
            return self._by_name[self._by_prefix[prefix]]
        except KeyError:
            raise BasisError(f"no basis is bound to the prefix '{prefix}'") from None

    def bind_prefix(self, name: str) -> Basis:
        """让名字为 name 的基接管它的前缀"""
        basis = self.get(name)
        with self._lock:
            self._by_prefix[basis.prefix] = name
        return basis

    def prefixes(self) -> Dict[str, str]:
        return dict(self._by_prefix)

    def names(self) -> List[str]:
        return sorted(self._by_name)

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __iter__(self):
        return iter(list(self._by_name.values()))

    def __len__(self):
        return len(self._by_name)


def register_custom_basis(registry: BasisRegistry, name: str, prefix: str, rule,
                          params: Union[Dict[str, object], Iterable[Tuple[str, object]], None] = None,
                          ring: Optional[CoefficientRing] = None,
                          cartan_type: str = 'A',
                          index_domain: IndexDomain = IndexDomain.NATURAL,
                          order: LeadingOrder = LeadingOrder.LEX_MIN) -> Basis:
    """
    注册自定义基
    params 可以是字典，也可以是 (("q", "q"), ("t", "t")) 这样的 (名字, 值) 对；字符串值按系数环的参数解释
    """
    if params is None:
        params = {}
    elif not isinstance(params, dict):
        params = dict(params)
    if ring is None:
        names = tuple(v for v in params.values() if isinstance(v, str) and not _is_number(v))
        ring = ring_for_params(names)
    basis = Basis(
        name, prefix, rule, ring,
        index_domain=index_domain, order=order, cartan_type=cartan_type,
        callback_style=_accepts_callback(rule), rule_params=params,
        description='custom',
    )
    logger.info(f"自定义基 {name} 已注册，前缀 {prefix}")
    return registry.register(basis)


def _is_number(text: str) -> bool:
    try:
        QQ_RING.coerce(text)
    except CoefficientError:
        return False
    return True
