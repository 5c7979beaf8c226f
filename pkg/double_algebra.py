"""
双变量代数
x 上的多项式，系数是 y 上的多项式；双 Schubert / 双 Grothendieck 基，系数换基以及 x、y 角色互换
"""

import logging
from functools import lru_cache
from typing import Dict, Optional, Sequence, Tuple

from basis_engine import BaseCase, Basis, BasisExpansion, Step, multiply_in_basis
from builtin_bases import monomial_basis, schubert_basis
from coefficient_rings import QQ_RING, CoefficientRing
from engine_errors import CoefficientError, DivisionError, VariableCountError
from laurent_polynomial import Polynomial, exact_divide, format_terms, sample_polynomial
from weyl_operators import OperatorKind

logger = logging.getLogger(__name__)


class PolynomialCoefficientRing(CoefficientRing):
    """
    以另一组变量上的 Laurent 多项式为系数
    元素的变量个数可以不同，运算前自动在末尾补零对齐
    """

    def __init__(self, base: CoefficientRing = QQ_RING, variable: str = 'y'):
        self.base = base
        self.variable = variable
        self.params = base.params
        self.name = f"Laurent polynomials on {variable} over {base.name}"

    def __eq__(self, other):
        return (isinstance(other, PolynomialCoefficientRing)
                and other.base == self.base and other.variable == self.variable)

    def __hash__(self):
        return hash(('PolynomialCoefficientRing', self.base, self.variable))

    @staticmethod
    def _pad(a: Polynomial, b: Polynomial):
        m = max(a.nvars, b.nvars)
        return a.change_nb_variables(m), b.change_nb_variables(m)

    def zero(self):
        return Polynomial.zero(1, self.base)

    def one(self):
        return Polynomial.one(1, self.base)

    def coerce(self, value):
        if isinstance(value, Polynomial):
            if value.ring == self.base:
                return value
            return value.map_coefficients(self.base.coerce, self.base)
        return Polynomial.constant(self.base.coerce(value), 1, self.base)

    def variable_element(self, j: int, nvars: Optional[int] = None) -> Polynomial:
        """y_j 本身（下标从 1 开始）"""
        return Polynomial.variable(j, max(nvars or j, j), self.base)

    def add(self, a, b):
        a, b = self._pad(a, b)
        return a.add(b)

    def sub(self, a, b):
        a, b = self._pad(a, b)
        return a.sub(b)

    def neg(self, a):
        return a.neg()

    def mul(self, a, b):
        if b.is_constant() and len(b) == 1:
            return a.scale(b.constant_term())
        if a.is_constant() and len(a) == 1:
            return b.scale(a.constant_term())
        a, b = self._pad(a, b)
        return a.mul(b)

    def is_zero(self, a) -> bool:
        return a.is_zero()

    def equal(self, a, b) -> bool:
        a, b = self._pad(a, b)
        return a == b

    def invert(self, a):
        if a.is_monomial():
            return a.power(-1)
        raise CoefficientError(f"{a.format(self.variable)} is not invertible in {self.name}")

    def divide(self, a, b):
        if b.is_monomial():
            return self.mul(a, self.invert(b))
        a, b = self._pad(a, b)
        try:
            return exact_divide(a, b)
        except DivisionError as e:
            raise CoefficientError(str(e)) from None

    def param(self, name: str):
        return self.coerce(self.base.param(name))

    def is_one(self, a) -> bool:
        return len(a) == 1 and a.is_constant() and self.base.is_one(a.constant_term())

    def is_negative(self, a) -> bool:
        return len(a) == 1 and a.is_constant() and self.base.is_negative(a.constant_term())

    def needs_parentheses(self, a) -> bool:
        return not (len(a) == 1 and a.is_constant())

    def format(self, a) -> str:
        if len(a) == 1 and a.is_constant():
            return self.base.format(a.constant_term())
        return a.format(prefix=self.variable, brackets='()', sep=',')


def double_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    """两个双多项式的加法或乘法；x 变量个数不同时补零"""
    m = max(a.nvars, b.nvars)
    a, b = a.change_nb_variables(m), b.change_nb_variables(m)
    if op == '+':
        return a.add(b)
    if op in ('*', '×'):
        return a.mul(b)
    raise CoefficientError(f"unknown double operation '{op}'")


# 双 Schubert / 双 Grothendieck


def _x(i: int, n: int, ring: PolynomialCoefficientRing) -> Polynomial:
    return Polynomial.variable(i, n, ring)


def _y(j: int, n: int, m: int, ring: PolynomialCoefficientRing) -> Polynomial:
    return Polynomial.constant(ring.variable_element(j, m), n, ring)


def double_schubert_base(dominant: Sequence[int], ring: PolynomialCoefficientRing) -> Polynomial:
    """Π_i Π_{j <= λ_i} (x_i - y_j)，y 的个数取 max(λ)"""
    n = len(dominant)
    m = max(max(dominant), 1)
    result = Polynomial.one(n, ring)
    for i, e in enumerate(dominant, start=1):
        for j in range(1, e + 1):
            result = result.mul(_x(i, n, ring).sub(_y(j, n, m, ring)))
    return result


def double_grothendieck_base(dominant: Sequence[int], ring: PolynomialCoefficientRing) -> Polynomial:
    """Π_i Π_{j <= λ_i} (1 - y_j x_i^{-1})"""
    n = len(dominant)
    m = max(max(dominant), 1)
    result = Polynomial.one(n, ring)
    for i, e in enumerate(dominant, start=1):
        inverse = [0] * n
        inverse[i - 1] = -1
        x_inv = Polynomial.monomial(inverse, ring.one(), ring)
        for j in range(1, e + 1):
            result = result.mul(Polynomial.one(n, ring).sub(x_inv.mul(_y(j, n, m, ring))))
    return result


def _double_rule(base_case, operator: OperatorKind, ring: PolynomialCoefficientRing):
    def rule(v):
        for i in range(len(v) - 1):
            if v[i] < v[i + 1]:
                parent = list(v)
                parent[i], parent[i + 1] = v[i + 1] + 1, v[i]
                return Step(tuple(parent), operator, i + 1)
        return BaseCase(base_case(v, ring))
    return rule


@lru_cache(maxsize=None)
def double_schubert_basis(base: CoefficientRing = QQ_RING, variable: str = 'y') -> Basis:
    ring = PolynomialCoefficientRing(base, variable)
    return Basis('double-schubert', 'YY', _double_rule(double_schubert_base, OperatorKind.NEWTON, ring),
                 ring, cartan_type='A', description='double Schubert polynomials')


@lru_cache(maxsize=None)
def double_grothendieck_basis(base: CoefficientRing = QQ_RING, variable: str = 'y') -> Basis:
    ring = PolynomialCoefficientRing(base, variable)
    return Basis('double-groth', 'GG', _double_rule(double_grothendieck_base, OperatorKind.ISOBARIC, ring),
                 ring, cartan_type='A', convertible=False, description='double Grothendieck polynomials')


def expand_double_schubert(v: Sequence[int], base: CoefficientRing = QQ_RING) -> Polynomial:
    return double_schubert_basis(base).expand(v)


def expand_double_grothendieck(v: Sequence[int], base: CoefficientRing = QQ_RING) -> Polynomial:
    return double_grothendieck_basis(base).expand(v)


def y_nvars(p: Polynomial) -> int:
    return max((c.nvars for _, c in p.items()), default=1)


def swap_coeffs_elements(p: Polynomial, variable: str = 'x') -> Polynomial:
    """
    x^v · (Σ a_w y^w) -> y^w · (Σ a_w x^v)
    结果的系数环记作 variable 上的多项式
    """
    ring = p.ring
    if not isinstance(ring, PolynomialCoefficientRing):
        raise CoefficientError("swap_coeffs_elements needs polynomial coefficients")
    base = ring.base
    m = y_nvars(p)
    swapped_ring = PolynomialCoefficientRing(base, variable)
    grouped: Dict[Tuple[int, ...], Dict[Tuple[int, ...], object]] = {}
    for v, c in p.items():
        for w, a in c.change_nb_variables(m).items():
            grouped.setdefault(w, {})[v] = a
    terms = {w: Polynomial(p.nvars, inner, base) for w, inner in grouped.items()}
    return Polynomial(m, terms, swapped_ring)


def double_to_x_basis(p: Polynomial, x_basis: Basis) -> BasisExpansion:
    """把双多项式写成 x 上的某个基，系数仍是 y 多项式；x_basis 要建在同一个系数环上"""
    if x_basis.ring != p.ring:
        raise CoefficientError(f"basis '{x_basis.name}' lives over {x_basis.ring}, not {p.ring}")
    return x_basis.to_basis(p)


def x_side_basis(factory, ring: PolynomialCoefficientRing, **kwargs) -> Basis:
    """在 y 多项式系数环上建一个普通的 x 基，比如 x_side_basis(schubert_basis, ring)"""
    return factory(ring=ring, **kwargs)


class MixedExpansion:
    """
    张量形式 Σ c_{v,w} · X_v ⊗ Y_w
    outer 是主变量上的基，inner 是系数变量上的基，c 在基础环里
    """

    def __init__(self, outer: Basis, inner: Basis, terms: Dict, outer_name: str = 'x', inner_name: str = 'y'):
        self.outer = outer
        self.inner = inner
        self.outer_name = outer_name
        self.inner_name = inner_name
        ring = outer.ring
        self._terms = {}
        for (v, w), c in terms.items():
            if not ring.is_zero(c):
                self._terms[(tuple(v), tuple(w))] = c

    @property
    def ring(self) -> CoefficientRing:
        return self.outer.ring

    @property
    def terms(self):
        return dict(self._terms)

    @classmethod
    def product(cls, inner_element: BasisExpansion, outer_element: BasisExpansion,
                outer_name: str = 'x', inner_name: str = 'y') -> 'MixedExpansion':
        """y 侧元素乘 x 侧元素，例如 Yy(2,1,3) * Yx(1,1,2)"""
        ring = outer_element.ring
        terms = {}
        for v, a in outer_element.items():
            for w, b in inner_element.items():
                terms[(v, w)] = ring.mul(a, b)
        return cls(outer_element.basis, inner_element.basis, terms, outer_name, inner_name)

    @classmethod
    def from_double_polynomial(cls, p: Polynomial, outer: Optional[Basis] = None,
                               inner: Optional[Basis] = None) -> 'MixedExpansion':
        ring = p.ring
        if not isinstance(ring, PolynomialCoefficientRing):
            raise CoefficientError("expected a polynomial with polynomial coefficients")
        outer = outer or monomial_basis(ring.base)
        inner = inner or monomial_basis(ring.base)
        m = y_nvars(p)
        terms = {}
        for v, c in p.items():
            for w, a in c.change_nb_variables(m).items():
                terms[(v, w)] = a
        mixed = cls(monomial_basis(ring.base), monomial_basis(ring.base), terms, 'x', ring.variable)
        if not outer.is_monomial:
            mixed = mixed.change_main_basis(outer)
        if not inner.is_monomial:
            mixed = mixed.change_coeffs_bases(inner)
        return mixed

    def _grouped(self, by_outer: bool):
        groups = {}
        for (v, w), c in self._terms.items():
            key, rest = (v, w) if by_outer else (w, v)
            groups.setdefault(key, {})[rest] = c
        return groups

    def change_coeffs_bases(self, target: Basis) -> 'MixedExpansion':
        """把每个 X_v 的系数（y 侧的组合）换到 target 基"""
        terms = {}
        for v, inner_terms in self._grouped(True).items():
            converted = self.inner.element(inner_terms).to(target)
            for w, c in converted.items():
                terms[(v, w)] = c
        return MixedExpansion(self.outer, target, terms, self.outer_name, self.inner_name)

    def change_main_basis(self, target: Basis) -> 'MixedExpansion':
        terms = {}
        for w, outer_terms in self._grouped(False).items():
            converted = self.outer.element(outer_terms).to(target)
            for v, c in converted.items():
                terms[(v, w)] = c
        return MixedExpansion(target, self.inner, terms, self.outer_name, self.inner_name)

    def swap(self) -> 'MixedExpansion':
        terms = {(w, v): c for (v, w), c in self._terms.items()}
        return MixedExpansion(self.inner, self.outer, terms, self.inner_name, self.outer_name)

    def expand(self) -> Polynomial:
        """全部换成单项式，得到系数为 inner_name 多项式的双多项式"""
        base = self.ring
        mono = monomial_basis(base)
        flat = self.change_main_basis(mono).change_coeffs_bases(mono) if self._terms else self
        coeff_ring = PolynomialCoefficientRing(base, self.inner_name)
        grouped = flat._grouped(True)
        if not grouped:
            return Polynomial.zero(1, coeff_ring)
        terms = {v: Polynomial(len(next(iter(inner))), inner, base) for v, inner in grouped.items()}
        return Polynomial(len(next(iter(terms))), terms, coeff_ring)

    def multiply_coefficients(self, other: 'MixedExpansion') -> 'MixedExpansion':
        """同一 X_v 下 y 侧组合相乘（只在 inner 基下做乘法）"""
        if other.outer is not self.outer or other.inner is not self.inner:
            raise CoefficientError("mixed expansions live in different bases")
        mine, theirs = self._grouped(True), other._grouped(True)
        terms = {}
        for v in set(mine) & set(theirs):
            a = self.inner.element(mine[v])
            b = self.inner.element(theirs[v])
            m = max(a.nvars, b.nvars)
            product = multiply_in_basis(_pad_expansion(a, m), _pad_expansion(b, m))
            for w, c in product.items():
                terms[(v, w)] = c
        return MixedExpansion(self.outer, self.inner, terms, self.outer_name, self.inner_name)

    def format(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for v, inner_terms in sorted(self._grouped(True).items()):
            coeff = self.inner.element(inner_terms)
            parts.append(f"({_labelled(coeff, self.inner_name)})*{_render(self.outer, v, self.outer_name)}")
        return " + ".join(parts)

    def __eq__(self, other):
        if not isinstance(other, MixedExpansion):
            return NotImplemented
        return (other.outer is self.outer and other.inner is self.inner
                and set(other._terms) == set(self._terms)
                and all(self.ring.equal(c, other._terms[k]) for k, c in self._terms.items()))

    __hash__ = None

    def __str__(self):
        return self.format()


def _pad_expansion(e: BasisExpansion, m: int) -> BasisExpansion:
    """下标末尾补零；Schubert、Key 和单项式基对补零稳定"""
    if e.nvars > m:
        raise VariableCountError(f"cannot shrink an expansion on {e.nvars} variables to {m}")
    pad = (0,) * (m - e.nvars)
    return BasisExpansion(e.basis, m, {v + pad: c for v, c in e.items()})


def _render(basis: Basis, v, name: str) -> str:
    if basis.is_monomial:
        return f"{name}[{', '.join(str(e) for e in v)}]"
    return f"{basis.display}{name}({', '.join(str(e) for e in v)})"


def _labelled(e: BasisExpansion, name: str) -> str:
    return format_terms(e.items(), e.ring, lambda v: _render(e.basis, v, name))


class DoubleRing:
    """按角色取基：x 侧的基建在 y 多项式系数环上，y 侧的基建在基础环上"""

    def __init__(self, base: CoefficientRing = QQ_RING, x_name: str = 'x', y_name: str = 'y'):
        self.base = base
        self.x_name = x_name
        self.y_name = y_name
        self.coefficient_ring = PolynomialCoefficientRing(base, y_name)

    def x_basis(self, factory=schubert_basis, **kwargs) -> Basis:
        return x_side_basis(factory, self.coefficient_ring, **kwargs)

    def y_basis(self, factory=schubert_basis, **kwargs) -> Basis:
        """基础环上的基；MixedExpansion 的两侧都用这种基"""
        return factory(ring=self.base, **kwargs)

    def double_schubert(self) -> Basis:
        return double_schubert_basis(self.base, self.y_name)

    def double_grothendieck(self) -> Basis:
        return double_grothendieck_basis(self.base, self.y_name)

    def sample(self, nvars: int = 3) -> Polynomial:
        return sample_polynomial(nvars, self.base).map_coefficients(
            self.coefficient_ring.coerce, self.coefficient_ring)

    def swapped(self) -> 'DoubleRing':
        return DoubleRing(self.base, self.y_name, self.x_name)

    def __repr__(self):
        return f"DoubleRing({self.x_name} over {self.y_name} over {self.base.name})"
