"""
两个应用
1. Schubert 簇的射影次数（Chern 形式的幂乘 Schubert 多项式，读 Y_{n-1,...,0} 的系数）
2. 用特化的双 Schubert 多项式计算 Schur 函数行列式（Bareiss 无分数消元）
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from itertools import permutations
from typing import List, Optional, Sequence

import numpy as np
import pandas as pd

from basis_engine import Basis
from builtin_bases import schubert_basis
from coefficient_rings import QQ_RING, CoefficientRing, ring_for_params
from double_algebra import (PolynomialCoefficientRing, double_schubert_basis,
                            swap_coeffs_elements)
from engine_errors import (CoefficientError, PermutationError, SpecializationError,
                           VariableCountError)
from laurent_polynomial import Polynomial, exact_divide

logger = logging.getLogger(__name__)


# 排列与射影次数


def parse_permutation(text) -> List[int]:
    """'2143'、'2,1,4,3' 或整数序列都可以"""
    if isinstance(text, str):
        text = text.strip()
        parts = text.replace(' ', ',').split(',') if (',' in text or ' ' in text) else list(text)
        try:
            perm = [int(p) for p in parts if p]
        except ValueError:
            raise PermutationError(f"'{text}' is not a permutation in one-line notation") from None
    else:
        perm = [int(p) for p in text]
    validate_permutation(perm)
    return perm


def validate_permutation(perm: Sequence[int]):
    if sorted(perm) != list(range(1, len(perm) + 1)):
        raise PermutationError(f"{list(perm)} is not a permutation of 1..{len(perm)}")


def lehmer_code(perm: Sequence[int]) -> tuple:
    """code_i = #{j > i : σ_j < σ_i}"""
    validate_permutation(perm)
    return tuple(sum(1 for b in perm[i + 1:] if b < a) for i, a in enumerate(perm))


def permutation_length(perm: Sequence[int]) -> int:
    return sum(lehmer_code(perm))


def chern_form(n: int, ring: CoefficientRing = QQ_RING) -> Polynomial:
    """h = (n-1) x_1 + (n-2) x_2 + ... + x_{n-1}"""
    if n < 2:
        raise VariableCountError(f"the Chern form needs at least 2 variables, got {n}")
    h = Polynomial.zero(n, ring)
    for i in range(1, n):
        h = h.add(Polynomial.variable(i, n, ring).scale(n - i))
    return h


def proj_deg(perm: Sequence[int], basis: Optional[Basis] = None) -> int:
    """
    d(X_σ) = to_basis(Schubert, h^(N - ℓ(σ)) · Y_code(σ)) 中 Y_{n-1, ..., 0} 的系数
    """
    perm = list(perm)
    code = lehmer_code(perm)
    n = len(perm)
    basis = basis or schubert_basis()
    if n == 1:
        return 1
    d = n * (n - 1) // 2 - sum(code)
    product = chern_form(n, basis.ring).power(d).mul(basis.expand(code))
    result = basis.to_basis(product)
    top = tuple(range(n - 1, -1, -1))
    coeff = result.coefficient(top)
    return int(coeff)


def degree_table(n: int, workers: int = 4, basis: Optional[Basis] = None) -> pd.DataFrame:
    """S_n 全部排列的射影次数，线程池并发，Schubert 缓存共享"""
    basis = basis or schubert_basis()
    perms = [list(p) for p in permutations(range(1, n + 1))]
    degrees = {}
    workers = max(1, min(workers, 32))
    with ThreadPoolExecutor(max_workers=workers) as executor:
        future_to_perm = {executor.submit(proj_deg, p, basis): tuple(p) for p in perms}
        completed = 0
        for future in as_completed(future_to_perm):
            perm = future_to_perm[future]
            degrees[perm] = future.result()
            completed += 1
            if completed % 10 == 0:
                logger.debug(f"已完成 {completed}/{len(perms)} 个排列")
    logger.info(f"S{n} 射影次数表完成: {len(perms)} 个排列")
    rows = [{
        'permutation': ''.join(str(e) for e in p) if n < 10 else ','.join(str(e) for e in p),
        'lehmer_code': list(lehmer_code(p)),
        'length': permutation_length(p),
        'degree': degrees[tuple(p)],
    } for p in perms]
    return pd.DataFrame(rows, columns=['permutation', 'lehmer_code', 'length', 'degree'])


# 行列式


def _object_matrix(matrix, ring: CoefficientRing) -> np.ndarray:
    """元素逐个放进 object 数组，避免 numpy 把多项式当序列展开"""
    rows = [list(row) for row in matrix]
    width = len(rows[0]) if rows else 0
    a = np.empty((len(rows), width), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != width:
            raise VariableCountError(f"row {i} has {len(row)} entries, expected {width}")
        for j, e in enumerate(row):
            a[i, j] = ring.coerce(e)
    return a


def determinant(matrix, ring: CoefficientRing = QQ_RING):
    """Bareiss 无分数消元；每次除法都是精确的"""
    a = _object_matrix(matrix, ring)
    if a.shape[0] != a.shape[1]:
        raise VariableCountError(f"determinant needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return ring.one()
    sign = 1
    previous = ring.one()
    for k in range(n - 1):
        if ring.is_zero(a[k, k]):
            pivot = next((r for r in range(k + 1, n) if not ring.is_zero(a[r, k])), None)
            if pivot is None:
                return ring.zero()
            a[[k, pivot]] = a[[pivot, k]]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                numerator = ring.sub(ring.mul(a[i, j], a[k, k]), ring.mul(a[i, k], a[k, j]))
                a[i, j] = ring.divide(numerator, previous)
        previous = a[k, k]
    det = a[n - 1, n - 1]
    return ring.neg(det) if sign < 0 else det


def polynomial_determinant(matrix) -> Polynomial:
    """Polynomial 元素的行列式（同一变量个数）"""
    rows = [list(row) for row in matrix]
    if not rows or not rows[0]:
        raise VariableCountError("empty polynomial matrix")
    first = rows[0][0]
    ring = PolynomialCoefficientRing(first.ring)
    det = determinant(rows, ring)
    return det.change_nb_variables(first.nvars)


# Schur 行列式


def _scalar_residue(p: Polynomial, field):
    if p.is_zero():
        return field.zero()
    if not p.is_constant():
        raise SpecializationError(f"specialization left a non-scalar residue {p.format('y')}")
    inner = p.constant_term()
    if not inner.is_constant():
        raise SpecializationError(f"specialization left a non-scalar residue {inner.format('x')}")
    return inner.constant_term()


def schur_matrix(variables: Sequence[str], alphabets: Sequence[Sequence[str]],
                 indices: Sequence[Sequence[int]]) -> np.ndarray:
    """
    entry(u, A) = YY_u(A, y)，y_j 特化成 variables[j]
    步骤：x 代入字母表，交换 x/y 的角色，再代入 y
    """
    if len(alphabets) != len(indices):
        raise SpecializationError(f"{len(indices)} indices but {len(alphabets)} alphabets")
    field = ring_for_params(tuple(variables))
    basis = double_schubert_basis(field)
    coeff_ring = basis.ring
    matrix = np.empty((len(indices), len(alphabets)), dtype=object)
    for r, u in enumerate(indices):
        pu = basis.expand(u)
        for c, alphabet in enumerate(alphabets):
            if len(alphabet) > pu.nvars:
                raise SpecializationError(f"alphabet {list(alphabet)} is longer than index {tuple(u)}")
            try:
                x_values = [(i + 1, Polynomial.constant(coeff_ring.coerce(field.param(a)), pu.nvars, coeff_ring))
                            for i, a in enumerate(alphabet)]
                pol = pu.subs_var(x_values)
                pol = swap_coeffs_elements(pol)
                y_ring = pol.ring
                y_values = [(j + 1, Polynomial.constant(y_ring.coerce(field.param(variables[j])), pol.nvars, y_ring))
                            for j in range(min(pol.nvars, len(variables)))]
                pol = pol.subs_var(y_values)
            except CoefficientError as e:
                raise SpecializationError(f"cannot specialize YY{tuple(u)} on {list(alphabet)}: {e}") from None
            matrix[r, c] = _scalar_residue(pol, field)
    logger.debug(f"Schur 矩阵 {matrix.shape} 计算完成")
    return matrix


def vandermonde_product(variables: Sequence[str]):
    field = ring_for_params(tuple(variables))
    gens = [field.param(v) for v in variables]
    result = field.one()
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            result = field.mul(result, field.sub(gens[j], gens[i]))
    return result


def vandermonde_quotient(det, variables: Sequence[str]):
    """det / Π_{i<j}(x_j - x_i)；det 在 variables 生成的分式域里，或者是 Polynomial（按 x_1..x_n）"""
    if isinstance(det, Polynomial):
        n = det.nvars
        product = Polynomial.one(n, det.ring)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                product = product.mul(Polynomial.variable(j, n, det.ring).sub(Polynomial.variable(i, n, det.ring)))
        return exact_divide(det, product)
    field = ring_for_params(tuple(variables))
    product = vandermonde_product(variables)
    quotient = field.divide(field.coerce(det), product)
    if not quotient.denom == field.ring.one:
        raise SpecializationError("the determinant is not divisible by the Vandermonde product")
    return quotient


def format_matrix(matrix, ring: CoefficientRing) -> List[List[str]]:
    a = _object_matrix(matrix, ring)
    return [[ring.format(e) for e in row] for row in a]
