#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
多基引擎测试
往返转换、展开策略无关、三角性、缓存、自定义基
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import product

import numpy as np

from basis_engine import (BaseCase, Basis, BasisRegistry, IndexDomain, Step, convert,
                          expand_combination, multiply_in_basis, register_custom_basis)
from builtin_bases import (grothendieck_positive_basis, key_basis, key_hat_basis, monomial_basis,
                           qt_schubert_rule, reduce_key, reduce_schubert, schubert_basis,
                           schubert_callback_rule)
from engine_errors import BasisError, RecursionDepthError, TriangularityError
from laurent_polynomial import Polynomial
from test_laurent_polynomial import as_dict, terms
from weyl_operators import OperatorKind, isobaric


def random_expansion(rng, basis, low=0, high=3, size=3):
    n = int(rng.integers(1, 4))
    chosen = {}
    for _ in range(size):
        v = tuple(int(e) for e in rng.integers(low, high + 1, n))
        chosen[v] = int(rng.choice([-3, -2, -1, 1, 2, 3]))
    return basis.element(chosen)


def test_round_trip():
    rng = np.random.default_rng(2016)
    cases = [
        (schubert_basis(), 0, 3),
        (key_basis('A'), 0, 3),
        (key_basis('B'), -3, 3),
        (key_hat_basis(), 0, 3),
        (grothendieck_positive_basis(), 0, 3),
    ]
    for basis, low, high in cases:
        for _ in range(100):
            e = random_expansion(rng, basis, low, high)
            assert basis.to_basis(expand_combination(e)) == e, f"{basis.name}: {e}"


def test_confluence_of_step_selection():
    rng = np.random.default_rng(50)
    pairs = [
        (schubert_basis(strategy='first'), schubert_basis(strategy='last'), 0),
        (key_basis('A', strategy='first'), key_basis('A', strategy='last'), 0),
        (key_basis('B', strategy='first'), key_basis('B', strategy='last'), -3),
    ]
    for first, last, low in pairs:
        for _ in range(50):
            n = int(rng.integers(2, 4))
            v = tuple(int(e) for e in rng.integers(low, 4, n))
            assert first.expand(v) == last.expand(v), f"{first.name} {v}"


def test_triangularity_audit():
    natural = [schubert_basis(), key_basis('A'), key_hat_basis(), grothendieck_positive_basis()]
    for n in (1, 2, 3):
        for v in product(range(4), repeat=n):
            for basis in natural:
                assert basis.check_triangular(v), f"{basis.name} {v}"
    for t in ('B', 'C', 'D'):
        basis = key_basis(t)
        for n in ((2, 3) if t == 'D' else (1, 2, 3)):
            for v in product(range(-3, 4), repeat=n):
                assert basis.check_triangular(v), f"{basis.name} {v}"


def test_expansion_cache():
    basis = schubert_basis()
    basis.clear_cache()
    first = basis.expand((1, 2, 2))
    size = basis.cache_size()
    assert size >= 2
    assert basis.expand((1, 2, 2)) is first
    assert basis.cache_size() == size


def test_concurrent_expansion_shares_the_cache():
    basis = schubert_basis()
    indices = [tuple(v) for v in product(range(3), repeat=3)]
    with ThreadPoolExecutor(max_workers=4) as executor:
        results = list(executor.map(basis.expand, indices))
    fresh = schubert_basis()
    assert all(r == fresh.expand(v) for r, v in zip(results, indices))


def test_multiply_in_basis():
    Y = schubert_basis()
    product_ = multiply_in_basis(Y[1, 0], Y[0, 1])
    assert dict(product_.items()) == {(1, 1): 1, (2, 0): 1}
    e = Y.element({(1, 2, 2): 1, (3, 4, 0): 1})
    assert multiply_in_basis(e, Y[0, 0, 0]) == e


def test_convert_to_the_same_basis_is_identity():
    Y = schubert_basis()
    e = Y.element({(2, 1, 4): 1, (3, 5, 1): -2})
    assert convert(e, Y) is e


def test_custom_schubert_basis():
    registry = BasisRegistry()
    my = register_custom_basis(registry, 'MySchub', 'Y', schubert_callback_rule)
    assert my.callback_style
    assert as_dict(my.expand((2, 1, 3))) == terms(
        "x(2, 1, 3) + x(2, 2, 2) + x(2, 3, 1) + x(3, 1, 2) + x(3, 2, 1) + x(4, 1, 1)")
    converted = my.to_basis(Polynomial.monomial((1, 2, 3)))
    assert dict(converted.items()) == terms(
        "Y(1, 2, 3) - Y(1, 3, 2) - Y(2, 1, 3) + Y(2, 3, 1) + Y(3, 1, 2) - Y(3, 2, 1) + Y(4, 1, 1)")
    assert registry.by_prefix('Y') is my


def test_custom_qt_scaled_basis():
    registry = BasisRegistry()
    qt = register_custom_basis(registry, 'qtSchub', 'YQ', qt_schubert_rule, (("q", "q"), ("t", "t")))
    ring = qt.ring
    assert ring.params == ('q', 't')
    scale = ring.divide(ring.power(ring.param('q'), 3), ring.power(ring.param('t'), 3))
    expected = {v: ring.mul(ring.coerce(c), scale) for v, c in terms(
        "x(1, 2, 3) + x(1, 3, 2) + x(2, 1, 3) + 2*x(2, 2, 2) + x(2, 3, 1) + x(3, 1, 2) + x(3, 2, 1)").items()}
    assert qt.expand((1, 2, 3)) == Polynomial(3, expected, ring)


def test_identity_rule_is_the_monomial_basis():
    registry = BasisRegistry()
    plain = register_custom_basis(registry, 'plain', 'P', lambda v: BaseCase(Polynomial.monomial(v)))
    p = Polynomial.from_vectors({(1, 2): 3, (0, 4): -1})
    assert plain.to_basis(p).expand() == p
    assert dict(plain.to_basis(p).items()) == dict(monomial_basis().to_basis(p).items())


def test_registry_rejects_duplicates():
    registry = BasisRegistry()
    register_custom_basis(registry, 'MySchub', 'Y', schubert_callback_rule)
    for name, prefix in (('MySchub', 'Z'), ('Other', 'Y')):
        try:
            register_custom_basis(registry, name, prefix, schubert_callback_rule)
            assert False, f"{name}/{prefix} should be rejected"
        except BasisError:
            pass
    try:
        registry.get('nothing')
        assert False
    except BasisError:
        pass


def test_non_terminating_rule_hits_the_recursion_bound():
    looping = Basis('loop', 'L', lambda v: Step(tuple(v), lambda p: p))
    try:
        looping.expand((1, 2))
        assert False, "expected a recursion error"
    except RecursionDepthError as e:
        assert e.basis_name == 'loop'
        assert e.index == (1, 2)


def test_non_triangular_rule_is_detected():
    def swapped(v):
        return BaseCase(Polynomial.monomial(v) + Polynomial.monomial(tuple(reversed(v))))

    basis = Basis('swapped', 'S', swapped)
    assert not basis.check_triangular((1, 0))
    try:
        basis.to_basis(Polynomial.monomial((1, 0)))
        assert False, "expected a triangularity error"
    except TriangularityError:
        pass


def test_index_domain():
    Y = schubert_basis()
    try:
        Y[1, -1]
        assert False
    except BasisError:
        pass
    assert key_basis('B').index_domain is IndexDomain.INTEGER
    # K_B(0,0,-1) = π_3^B K_B(0,0,1)，而 K_B(0,0,1) = x1 + x2 + x3
    x1, x2, x3 = (Polynomial.variable(i, 3) for i in (1, 2, 3))
    expected = isobaric(x1.add(x2).add(x3), 3, 'B')
    result = key_basis('B').expand((0, 0, -1))
    assert result == expected
    assert len(result) == 5


class ListHandler(logging.Handler):
    def __init__(self):
        super().__init__(logging.DEBUG)
        self.messages = []

    def emit(self, record):
        self.messages.append(record.getMessage())


def test_step_labels_reach_the_debug_log():
    assert reduce_schubert((1, 2, 2)).describe() == 'dd_1'
    assert reduce_key((0, 0, -1), 'B').describe() == 'pi_3 (B)'
    assert Step((1, 0), OperatorKind.ISOBARIC_HAT, 1).describe() == 'pihat_1'
    engine_logger = logging.getLogger('basis_engine')
    handler = ListHandler()
    previous = engine_logger.level
    engine_logger.addHandler(handler)
    engine_logger.setLevel(logging.DEBUG)
    try:
        Y = schubert_basis()
        Y.clear_cache()
        Y.expand((1, 2, 2))
    finally:
        engine_logger.removeHandler(handler)
        engine_logger.setLevel(previous)
    assert any('(3, 1, 2) 经 dd_1' in m for m in handler.messages), handler.messages


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith('test_') and callable(fn):
            fn()
            print(f"✅ {name}")
