"""
A/B/C/D 型根数据与差商算子
所有算子都用"根串求和"实现：对每个单项式按 <v, α∨> 沿根 α 求和，不做有理函数除法
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Tuple

from engine_errors import CoefficientError, OperatorIndexError
from laurent_polynomial import Polynomial, check_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RootDatum:
    """(类型, 下标) 对应的根 α、余根 α∨、平移 δ 和符号 ε"""
    cartan_type: str
    index: int
    root: Tuple[int, ...]
    coroot: Tuple[int, ...]
    shift: Tuple[int, ...]
    sign: int = 1

    def pairing(self, v) -> int:
        return sum(a * b for a, b in zip(v, self.coroot))

    def reflect(self, v) -> Tuple[int, ...]:
        c = self.pairing(v)
        return tuple(x - c * a for x, a in zip(v, self.root))


class OperatorKind(Enum):
    NEWTON = 'dd'
    ISOBARIC = 'pi'
    ISOBARIC_HAT = 'pihat'
    HECKE = 'T'

    @classmethod
    def parse(cls, text: str) -> 'OperatorKind':
        for kind in cls:
            if kind.value == text or kind.name.lower() == str(text).lower():
                return kind
        raise OperatorIndexError(f"unknown operator '{text}', expected one of {[k.value for k in cls]}")


def _unit(n: int, i: int):
    v = [0] * n
    v[i - 1] = 1
    return v


@lru_cache(maxsize=None)
def root_datum(cartan_type: str, i: int, n: int) -> RootDatum:
    check_index(cartan_type, i, n)
    e_i = _unit(n, i)
    if cartan_type == 'A':
        alpha = tuple(a - b for a, b in zip(e_i, _unit(n, i + 1)))
        return RootDatum('A', i, alpha, alpha, tuple(e_i))
    if cartan_type == 'B':
        return RootDatum('B', i, tuple(e_i), tuple(2 * a for a in e_i), tuple(e_i))
    if cartan_type == 'C':
        return RootDatum('C', i, tuple(2 * a for a in e_i), tuple(e_i), tuple(e_i))
    alpha = tuple(a + b for a, b in zip(_unit(n, i - 1), e_i))
    return RootDatum('D', i, alpha, alpha, tuple(e_i))


def ambient_datum(cartan_type: str, i: int, n: int) -> RootDatum:
    """环境空间基：i < n 用 A 型单根，i = n 用该类型的最后一个单根"""
    if cartan_type == 'A' or i < n:
        return root_datum('A', i, n)
    return root_datum(cartan_type, i, n)


def pairing(v, datum: RootDatum) -> int:
    if len(v) != len(datum.root):
        raise OperatorIndexError(f"vector {tuple(v)} and root of length {len(datum.root)} do not match")
    return datum.pairing(v)


def _datum_for(p: Polynomial, i: int, cartan_type: str, ambient: bool) -> RootDatum:
    if ambient:
        if i < 1 or i > p.nvars or (cartan_type == 'A' and i == p.nvars):
            raise OperatorIndexError(f"index {i} out of range for the type {cartan_type} ambient space on {p.nvars} variables")
        return ambient_datum(cartan_type, i, p.nvars)
    return root_datum(cartan_type, i, p.nvars)


def _accumulate(acc, ring, w, c):
    if w in acc:
        s = ring.add(acc[w], c)
        if ring.is_zero(s):
            del acc[w]
        else:
            acc[w] = s
    else:
        acc[w] = c


def newton_on_datum(p: Polynomial, datum: RootDatum) -> Polynomial:
    ring = p.ring
    alpha, delta = datum.root, datum.shift
    acc = {}
    for v, c in p.items():
        k = datum.pairing(v)
        if k == 0:
            continue
        if k < 0:
            # 先反射再取负
            v = tuple(x - k * a for x, a in zip(v, alpha))
            c = ring.neg(c)
            k = -k
        if datum.sign < 0:
            c = ring.neg(c)
        base = tuple(x - d for x, d in zip(v, delta))
        for j in range(k):
            _accumulate(acc, ring, tuple(b - j * a for b, a in zip(base, alpha)), c)
    return Polynomial._raw(p.nvars, ring, acc)


def isobaric_on_datum(p: Polynomial, datum: RootDatum) -> Polynomial:
    ring = p.ring
    alpha = datum.root
    acc = {}
    for v, c in p.items():
        k = datum.pairing(v)
        if k >= 0:
            for j in range(k + 1):
                _accumulate(acc, ring, tuple(x - j * a for x, a in zip(v, alpha)), c)
        elif k <= -2:
            c = ring.neg(c)
            for j in range(1, -k):
                _accumulate(acc, ring, tuple(x + j * a for x, a in zip(v, alpha)), c)
    return Polynomial._raw(p.nvars, ring, acc)


def divided_difference(p: Polynomial, i: int, cartan_type: str = 'A', ambient: bool = False) -> Polynomial:
    """Newton 差商 ∂_i"""
    return newton_on_datum(p, _datum_for(p, i, cartan_type, ambient))


def isobaric(p: Polynomial, i: int, cartan_type: str = 'A', ambient: bool = False) -> Polynomial:
    """等压差商 π_i"""
    return isobaric_on_datum(p, _datum_for(p, i, cartan_type, ambient))


def isobaric_hat(p: Polynomial, i: int, cartan_type: str = 'A', ambient: bool = False) -> Polynomial:
    """π̂_i = π_i - 1"""
    return isobaric(p, i, cartan_type, ambient).sub(p)


def _hecke_params(p: Polynomial, t1, t2):
    try:
        t1 = p.ring.param('t1') if t1 is None else p.ring.coerce(t1)
        t2 = p.ring.param('t2') if t2 is None else p.ring.coerce(t2)
    except CoefficientError as e:
        raise OperatorIndexError(f"the Hecke operator needs t1 and t2 in the coefficient ring: {e}") from None
    return t1, t2


def hecke_T(p: Polynomial, i: int, t1=None, t2=None) -> Polynomial:
    """T_i = (t1 + t2) π_i - t2 s_i，只有 A 型"""
    t1, t2 = _hecke_params(p, t1, t2)
    ring = p.ring
    return isobaric(p, i).scale(ring.add(t1, t2)).sub(p.act_reflection(i).scale(t2))


def hecke_rescaled(p: Polynomial, i: int, kappa, t1=None, t2=None) -> Polynomial:
    """t1 换成 κ·t1 的 Hecke 算子 (κ t1 + t2) π_i - t2 s_i"""
    t1, t2 = _hecke_params(p, t1, t2)
    ring = p.ring
    factor = ring.add(ring.mul(ring.coerce(kappa), t1), t2)
    return isobaric(p, i).scale(factor).sub(p.act_reflection(i).scale(t2))


def grothendieck_tau(p: Polynomial, i: int) -> Polynomial:
    """τ_i(f) = ∂_i(f) + π_i(f^{s_i})，即 ((1-x_{i+1})f - (1-x_i)f^{s_i})/(x_i - x_{i+1})"""
    return divided_difference(p, i).add(isobaric(p.act_reflection(i), i))


def apply_operator(p: Polynomial, kind, i: int, cartan_type: str = 'A', ambient: bool = False,
                   t1=None, t2=None) -> Polynomial:
    kind = kind if isinstance(kind, OperatorKind) else OperatorKind.parse(kind)
    logger.debug(f"作用 {kind.value}_{i}（{cartan_type} 型），{len(p)} 项")
    if kind is OperatorKind.NEWTON:
        return divided_difference(p, i, cartan_type, ambient)
    if kind is OperatorKind.ISOBARIC:
        return isobaric(p, i, cartan_type, ambient)
    if kind is OperatorKind.ISOBARIC_HAT:
        return isobaric_hat(p, i, cartan_type, ambient)
    if cartan_type != 'A' and not (ambient and i < p.nvars):
        raise OperatorIndexError("the Hecke operator T is only defined for type A")
    return hecke_T(p, i, t1, t2)
