#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Laurent 多项式测试
加法、乘法、变量个数、代换、反射，以及随机的交换律/结合律/分配律检查
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import re
from fractions import Fraction

import numpy as np

from coefficient_rings import QQ_RING
from engine_errors import DivisionError, OperatorIndexError, SubstitutionError, VariableCountError
from laurent_polynomial import CARTAN_TYPES, Polynomial, exact_divide, sample_polynomial

TERM = re.compile(r'([+-])?\s*(?:(\d+)\*)?[\^A-Za-z]*[(\[]([-\d,\s]+)[)\]]')


def terms(text):
    """'2*x(0, 0) - x(-2, 0)' -> {(0, 0): 2, (-2, 0): -1}"""
    result = {}
    for sign, coeff, vector in TERM.findall(text):
        c = int(coeff or 1) * (-1 if sign == '-' else 1)
        v = tuple(int(e) for e in vector.split(','))
        result[v] = result.get(v, 0) + c
    return {v: c for v, c in result.items() if c}


def as_dict(p):
    return dict(p.items())


def random_polynomial(rng, n, size=4, low=-3, high=4):
    return Polynomial(n, {
        tuple(int(e) for e in rng.integers(low, high + 1, n)): Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        for _ in range(size)
    })


def _raises(exc, fn, *args):
    try:
        fn(*args)
    except exc:
        return True
    return False


def test_addition():
    p = Polynomial.from_vectors({(1, 1, 2): 1, (2, 3): 1})
    assert p.nvars == 3
    assert as_dict(p) == terms("x[1, 1, 2] + x[2, 3, 0]")
    x = Polynomial.monomial((1, 0))
    assert (x + x.neg()).is_zero()
    s = Polynomial.monomial((2, 0)).add(Polynomial.monomial((0, 2))).add(Polynomial.monomial((1, 1)))
    assert len(s) == 3


def test_square_after_change_of_variables():
    pol = Polynomial.from_vectors({(1, 1, 2): 1, (2, 3): 1}).change_nb_variables(4)
    assert as_dict(pol) == terms("x[1, 1, 2, 0] + x[2, 3, 0, 0]")
    assert as_dict(pol * pol) == terms("x[2, 2, 4, 0] + 2*x[3, 4, 2, 0] + x[4, 6, 0, 0]")


def test_multiplication_identities():
    p = Polynomial.from_vectors({(1, 1, 2): 3, (2, 3, 0): -1})
    assert p * Polynomial.one(3) == p
    assert as_dict(Polynomial.monomial((-1, 0)) * Polynomial.monomial((1, 0))) == {(0, 0): 1}
    assert _raises(VariableCountError, p.mul, Polynomial.one(2))


def test_change_nb_variables():
    assert Polynomial.zero(3).change_nb_variables(5).is_zero()
    assert as_dict(Polynomial.monomial((1, 0, 0)).change_nb_variables(1)) == {(1,): 1}
    assert _raises(VariableCountError, Polynomial.monomial((1, 0, 2)).change_nb_variables, 2)


def test_substitution_grothendieck_bridge():
    pol = Polynomial.from_vectors({(1, 2): 1, (2, 1): 1})
    values = [(i, Polynomial.one(2) - Polynomial.monomial([-1 if j == i - 1 else 0 for j in range(2)]))
              for i in range(1, 3)]
    expected = terms("2*x(0, 0) + x(-2, 0) - x(-2, -1) - 3*x(-1, 0) - x(-1, -2) + 4*x(-1, -1) + x(0, -2) - 3*x(0, -1)")
    assert as_dict(pol.subs_var(values)) == expected


def test_substitution_simple_cases():
    pol = Polynomial.from_vectors({(1, 2): 1, (2, 1): 3})
    assert pol.subs_var([(1, Polynomial.variable(1, 2))]) == pol
    assert as_dict(Polynomial.monomial((1, 1)).subs_var([(1, Polynomial.variable(2, 2))])) == {(0, 2): 1}


def test_substitution_negative_power_of_non_invertible_value():
    pol = Polynomial.monomial((-1, 0))
    value = Polynomial.one(2) + Polynomial.variable(2, 2)
    try:
        pol.subs_var([(1, value)])
        assert False, "expected a substitution error"
    except SubstitutionError as e:
        assert e.variable == 1
        assert e.exponent == -1


def test_reflections():
    assert as_dict(Polynomial.monomial((4, 1)).act_reflection(1)) == {(1, 4): 1}
    assert as_dict(Polynomial.monomial((1, 1, 2)).act_reflection(2, 'B')) == {(1, -1, 2): 1}
    assert as_dict(Polynomial.monomial((2, 3, 0)).act_reflection(2, 'D')) == {(-3, -2, 0): 1}
    assert _raises(OperatorIndexError, Polynomial.monomial((1, 2)).act_reflection, 2, 'A')
    assert _raises(OperatorIndexError, Polynomial.monomial((1, 2)).act_reflection, 1, 'D')


def test_reflection_is_an_involution():
    rng = np.random.default_rng(3)
    legal = {'A': range(1, 4), 'B': range(1, 5), 'C': range(1, 5), 'D': range(2, 5)}
    for _ in range(50):
        p = random_polynomial(rng, 4)
        for t in CARTAN_TYPES:
            for i in legal[t]:
                assert p.act_reflection(i, t).act_reflection(i, t) == p


def test_ring_axioms_on_random_triples():
    rng = np.random.default_rng(42)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        a, b, c = (random_polynomial(rng, n, size=3) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        for p in (a + b, a * b, a - a):
            assert all(not QQ_RING.is_zero(coeff) for _, coeff in p.items())


def test_exact_division():
    rng = np.random.default_rng(5)
    for _ in range(30):
        a = random_polynomial(rng, 3, size=3, low=0, high=3)
        b = random_polynomial(rng, 3, size=2, low=-2, high=2)
        if a.is_zero() or b.is_zero():
            continue
        assert exact_divide(a * b, b) == a
    x1, x2 = Polynomial.variable(1, 2), Polynomial.variable(2, 2)
    try:
        exact_divide(x1 + Polynomial.one(2), x2 + Polynomial.one(2))
        assert False, "expected a division error"
    except DivisionError:
        pass


def test_sample_polynomial():
    assert as_dict(sample_polynomial(3)) == {(0, 0, 0): 1, (1, 0, 0): 2, (2, 0, 0): 3, (1, 2, 3): 1}


def test_formatting():
    p = Polynomial.from_vectors({(1, 1, 2): 1, (2, 3, 0): -2})
    assert p.format() == 'x[1, 1, 2] - 2*x[2, 3, 0]'
    assert Polynomial.zero(2).format() == '0'


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith('test_') and callable(fn):
            fn()
            print(f"✅ {name}")
