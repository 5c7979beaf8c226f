"""
内置基的约化规则与工厂函数
Schubert、Key (A/B/C/D)、Key-hat、Grothendieck（正负两种）、非对称 Macdonald，以及单项式与环境空间基
"""

import logging
from functools import lru_cache
from typing import Sequence, Tuple

from basis_engine import (BaseCase, Basis, BasisRegistry, Combination, IndexDomain,
                          LeadingOrder, Step)
from coefficient_rings import QQ_RING, CoefficientRing
from engine_errors import BasisError, CoefficientError
from laurent_polynomial import CARTAN_TYPES, Polynomial
from weyl_operators import (OperatorKind, ambient_datum, grothendieck_tau, hecke_rescaled,
                            root_datum)

logger = logging.getLogger(__name__)

MACDONALD_PARAMS = ('q', 't1', 't2')


def _ascents(v: Sequence[int], strategy: str):
    found = [i for i in range(len(v) - 1) if v[i] < v[i + 1]]
    if strategy == 'last':
        found.reverse()
    return found


def _lift_ascent(v: Sequence[int], i: int) -> Tuple[int, ...]:
    """(…, v_i, v_{i+1}, …) -> (…, v_{i+1}+1, v_i, …)，i 从 0 开始"""
    w = list(v)
    w[i], w[i + 1] = v[i + 1] + 1, v[i]
    return tuple(w)


def reduce_schubert(v: Sequence[int], strategy: str = 'first'):
    for i in _ascents(v, strategy):
        return Step(_lift_ascent(v, i), OperatorKind.NEWTON, i + 1, label='dd')
    return BaseCase(Polynomial.monomial(v))


def key_indices(cartan_type: str, n: int):
    """Key 递归可用的 (下标, 根数据)：i < n 用 A 型单根，B/C/D 在 i = n 再加上本类型的根"""
    pairs = [(i, root_datum('A', i, n)) for i in range(1, n)]
    if cartan_type in ('B', 'C') or (cartan_type == 'D' and n >= 2):
        pairs.append((n, ambient_datum(cartan_type, n, n)))
    return pairs


def is_dominant(v: Sequence[int], cartan_type: str = 'A') -> bool:
    return all(datum.pairing(v) >= 0 for _, datum in key_indices(cartan_type, len(v)))


def reduce_key(v: Sequence[int], cartan_type: str = 'A', strategy: str = 'first',
               operator: OperatorKind = OperatorKind.ISOBARIC):
    pairs = key_indices(cartan_type, len(v))
    if strategy == 'last':
        pairs = pairs[::-1]
    for i, datum in pairs:
        if datum.pairing(v) < 0:
            return Step(datum.reflect(v), operator, i, cartan_type,
                        ambient=cartan_type != 'A', label=operator.value)
    return BaseCase(Polynomial.monomial(v))


def reduce_key_hat(v: Sequence[int], strategy: str = 'first'):
    return reduce_key(v, 'A', strategy, OperatorKind.ISOBARIC_HAT)


def grothendieck_negative_base(v: Sequence[int]) -> Polynomial:
    """Π (1 - x_i^{-1})^{v_i}"""
    n = len(v)
    result = Polynomial.one(n)
    for i, e in enumerate(v, start=1):
        if e:
            inverse = [0] * n
            inverse[i - 1] = -1
            factor = Polynomial(n, {(0,) * n: 1, tuple(inverse): -1})
            result = result.mul(factor.power(e))
    return result


def reduce_grothendieck_negative(v: Sequence[int], strategy: str = 'first'):
    for i in _ascents(v, strategy):
        return Step(_lift_ascent(v, i), OperatorKind.ISOBARIC, i + 1, label='pi')
    return BaseCase(grothendieck_negative_base(v))


def reduce_grothendieck_positive(v: Sequence[int], strategy: str = 'first'):
    for i in _ascents(v, strategy):
        return Step(_lift_ascent(v, i), lambda p, i=i + 1: grothendieck_tau(p, i), i + 1, label='tau')
    return BaseCase(Polynomial.monomial(v))


# Macdonald


def macdonald_raise(p: Polynomial, q) -> Polynomial:
    """
    f -> (x_n + t2 q) · f(q x_n, x_1, …, x_{n-1})
    单项式上 x^w -> q^{w_1} x^{(w_2, …, w_n, w_1)}
    """
    ring = p.ring
    n = p.nvars
    rotated = {}
    for w, c in p.items():
        rotated[tuple(w[1:]) + (w[0],)] = ring.mul(c, ring.power(q, w[0]))
    last = [0] * n
    last[-1] = 1
    factor = Polynomial._raw(n, ring, {tuple(last): ring.one()})
    constant = ring.mul(ring.param('t2'), q)
    factor = factor.add(Polynomial.constant(constant, n, ring))
    return Polynomial(n, rotated, ring).mul(factor)


def reduce_macdonald(v: Sequence[int], ring: CoefficientRing):
    """
    M_0 = 1
    非零弱递增的 v 用提升步；其余在第一个下降处用交换步
    """
    try:
        q, t1, t2 = (ring.param(name) for name in MACDONALD_PARAMS)
    except CoefficientError:
        raise CoefficientError(f"the Macdonald basis needs the parameters {MACDONALD_PARAMS} in {ring}") from None
    v = tuple(v)
    n = len(v)
    if not any(v):
        return BaseCase(Polynomial.one(n, ring))
    descent = next((i for i in range(n - 1) if v[i] > v[i + 1]), None)
    if descent is None:
        u = (v[-1] - 1,) + v[:-1]
        return Step(u, lambda p: macdonald_raise(p, q), scalar=ring.power(q, -sum(u)), label='raise')
    i = descent + 1
    u = list(v)
    u[descent], u[descent + 1] = v[descent + 1], v[descent]
    u = tuple(u)
    d = v[descent] - v[descent + 1]
    qd = ring.power(q, d)
    kappa = ring.power(q, -2 * d)
    correction = ring.divide(ring.mul(t2, ring.add(t1, t2)), ring.add(ring.mul(t1, qd), t2))
    hecke = Step(u, lambda p: hecke_rescaled(p, i, kappa, t1, t2), i, label='T')
    same = Step(u, lambda p: p, label='id')
    return Combination(((qd, hecke), (ring.neg(correction), same)))


# 工厂


@lru_cache(maxsize=None)
def monomial_basis(ring: CoefficientRing = QQ_RING, prefix: str = 'm', display: str = 'x') -> Basis:
    return Basis('monomial', prefix, lambda v: BaseCase(Polynomial.monomial(v)), ring,
                 index_domain=IndexDomain.INTEGER, is_monomial=True, display=display,
                 description='monomials x^v')


def ambient_basis(cartan_type: str, ring: CoefficientRing = QQ_RING) -> Basis:
    """记住根系的单项式基，算子在 i = n 处用该类型的根"""
    _check_type(cartan_type)
    return Basis(f'ambient-{cartan_type}', 'mb', lambda v: BaseCase(Polynomial.monomial(v)), ring,
                 index_domain=IndexDomain.INTEGER, cartan_type=cartan_type, ambient=True,
                 is_monomial=True, display='x', description=f'ambient space of type {cartan_type}')


def schubert_basis(ring: CoefficientRing = QQ_RING, strategy: str = 'first') -> Basis:
    return Basis('schubert', 'Y', lambda v: reduce_schubert(v, strategy), ring,
                 cartan_type='A', description='Schubert polynomials')


def key_basis(cartan_type: str = 'A', ring: CoefficientRing = QQ_RING, strategy: str = 'first') -> Basis:
    _check_type(cartan_type)
    return Basis(f'key-{cartan_type}', 'K', lambda v: reduce_key(v, cartan_type, strategy), ring,
                 index_domain=IndexDomain.NATURAL if cartan_type == 'A' else IndexDomain.INTEGER,
                 cartan_type=cartan_type, description=f'Demazure characters of type {cartan_type}')


def key_hat_basis(ring: CoefficientRing = QQ_RING, strategy: str = 'first') -> Basis:
    return Basis('key-hat', '^K', lambda v: reduce_key_hat(v, strategy), ring,
                 cartan_type='A', description='Demazure atoms')


def grothendieck_negative_basis(ring: CoefficientRing = QQ_RING) -> Basis:
    return Basis('groth-neg', 'G', reduce_grothendieck_negative, ring, cartan_type='A',
                 convertible=False, description='Grothendieck polynomials in 1 - 1/x_i')


def grothendieck_positive_basis(ring: CoefficientRing = QQ_RING) -> Basis:
    return Basis('groth-pos', 'G', reduce_grothendieck_positive, ring, cartan_type='A',
                 order=LeadingOrder.GRADED_MIN_LEX_MIN, description='Grothendieck polynomials in x_i')


def macdonald_basis(ring: CoefficientRing) -> Basis:
    return Basis('macdonald', 'M', lambda v: reduce_macdonald(v, ring), ring,
                 cartan_type='A', required_params=MACDONALD_PARAMS,
                 order=LeadingOrder.GRADED_MAX_SORTED_MAX_LEX_MAX,
                 description='nonsymmetric Macdonald polynomials')


def _check_type(cartan_type: str):
    if cartan_type not in CARTAN_TYPES:
        raise BasisError(f"unknown type '{cartan_type}', expected one of {CARTAN_TYPES}")


def build_registry(ring: CoefficientRing = QQ_RING, default_type: str = 'A',
                   with_double: bool = True) -> BasisRegistry:
    """
    注册全部内置基
    同前缀的基（K、G、mb）只绑定一个：K 和 mb 取 default_type，G 取正 Grothendieck
    """
    _check_type(default_type)
    registry = BasisRegistry()
    registry.register(monomial_basis(ring))
    for t in CARTAN_TYPES:
        registry.register(ambient_basis(t, ring), bind=t == default_type)
    registry.register(schubert_basis(ring))
    for t in CARTAN_TYPES:
        registry.register(key_basis(t, ring), bind=t == default_type)
    registry.register(key_hat_basis(ring))
    registry.register(grothendieck_positive_basis(ring))
    registry.register(grothendieck_negative_basis(ring), bind=False)
    if ring.has_params(MACDONALD_PARAMS):
        registry.register(macdonald_basis(ring))
    if with_double:
        from double_algebra import double_grothendieck_basis, double_schubert_basis
        registry.register(double_schubert_basis(base=ring))
        registry.register(double_grothendieck_basis(base=ring))
    logger.info(f"基注册表就绪：{ring} 上共 {len(registry)} 个基")
    return registry


# 回调风格的规则（自定义基用）


def schubert_callback_rule(v, basis, call_back):
    for i in range(len(v) - 1):
        if v[i] < v[i + 1]:
            v[i], v[i + 1] = v[i + 1] + 1, v[i]
            return call_back(v).divided_difference(i + 1)
    return basis(v)


def qt_schubert_rule(v, basis, call_back, q=1, t=1):
    """每一步多乘 q/t 的 Schubert 规则"""
    for i in range(len(v) - 1):
        if v[i] < v[i + 1]:
            v[i], v[i + 1] = v[i + 1] + 1, v[i]
            p = call_back(v).divided_difference(i + 1)
            ring = p.ring
            return p.scale(ring.divide(ring.coerce(q), ring.coerce(t)))
    return basis(v)


def dominant_ancestor(v: Sequence[int]) -> Tuple[int, ...]:
    """沿 Schubert 递归一直往上走到没有上升的下标"""
    v = tuple(v)
    while True:
        ascents = _ascents(v, 'first')
        if not ascents:
            return v
        v = _lift_ascent(v, ascents[0])
