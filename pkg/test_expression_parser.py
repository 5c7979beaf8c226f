#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
表达式语言测试
解析/打印往返、语法错误的位置、求值结果
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from fractions import Fraction

import numpy as np

from basis_engine import BasisExpansion
from double_algebra import expand_double_schubert
from engine_errors import BasisError, CoefficientError
from expression_parser import (MAX_NESTING, MAX_TOKENS, BinOp, ExpressionSyntaxError, Literal, Neg,
                               Number, Param, Power, SessionConfig, evaluate, parse, to_text,
                               tokenize)
from laurent_polynomial import Polynomial
from test_laurent_polynomial import as_dict, terms


def syntax_error(text, **kwargs):
    try:
        parse(text, **kwargs)
    except ExpressionSyntaxError as e:
        return e
    raise AssertionError(f"{text!r} should not parse")


def random_node(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        kind = int(rng.integers(0, 3))
        if kind == 0:
            return Literal(str(rng.choice(['Y', 'K', '^K'])), tuple(int(e) for e in rng.integers(-2, 5, 2)))
        if kind == 1:
            return Number(Fraction(int(rng.integers(0, 9)), int(rng.integers(1, 5))))
        return Param(str(rng.choice(['q', 't1', 't2'])))
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return Neg(random_node(rng, depth - 1))
    if kind == 1:
        return Power(random_node(rng, depth - 1), int(rng.integers(0, 4)))
    return BinOp(str(rng.choice(['+', '-', '*'])), random_node(rng, depth - 1), random_node(rng, depth - 1))


def test_tokenize_positions():
    tokens = tokenize("Y[1, 2]\n  + ^K[0,1]")
    assert [t.kind for t in tokens][:3] == ['ident', 'op', 'int']
    plus = tokens[6]
    assert (plus.text, plus.line, plus.column) == ('+', 2, 3)
    assert tokens[7].text == '^K'
    assert tokens[-1].kind == 'end'


def test_parse_pads_literals():
    node = parse("Y[1,2,2]+Y[3,4]")
    assert node == BinOp('+', Literal('Y', (1, 2, 2)), Literal('Y', (3, 4, 0)))
    assert to_text(node) == '(Y[1,2,2] + Y[3,4,0])'
    assert parse("m[1]", nvars=3) == Literal('m', (1, 0, 0))


def test_precedence():
    assert parse("-a^2") == Power(Neg(Param('a')), 2)
    assert parse("-(a^2)") == Neg(Power(Param('a'), 2))
    assert parse("-a*b") == BinOp('*', Neg(Param('a')), Param('b'))
    assert to_text(Neg(Power(Param('a'), 2))) == '-(a^2)'
    assert parse("1 + 2*q") == BinOp('+', Number(Fraction(1)), BinOp('*', Number(Fraction(2)), Param('q')))
    assert parse("1/2^2") == Power(Number(Fraction(1, 2)), 2)
    assert parse("a - b - c") == BinOp('-', BinOp('-', Param('a'), Param('b')), Param('c'))
    assert parse("K[-1,0]") == Literal('K', (-1, 0))


def test_print_parse_round_trip():
    rng = np.random.default_rng(77)
    for _ in range(200):
        node = random_node(rng, 4)
        assert parse(to_text(node)) == node, to_text(node)


def test_syntax_error_positions():
    e = syntax_error("Y[1,2")
    assert (e.line, e.column) == (1, 6)
    assert "']'" in e.expected
    e = syntax_error("1 +\n  * 2")
    assert (e.line, e.column) == (2, 3)
    assert 'number' in e.expected
    e = syntax_error("Q[1,2] + Y[0]", prefixes={'Y', 'K'})
    assert (e.line, e.column) == (1, 1)
    e = syntax_error("1 + #")
    assert e.column == 5
    assert str(syntax_error("3/0")).startswith('1:1')
    assert 'integer' in syntax_error("a^-1").expected
    assert 'integer' in syntax_error("Y[1,x]").expected
    syntax_error("^K + 1")
    syntax_error("(1 + 2")
    syntax_error("1 2")


def test_parser_limits():
    deep = "(" * (MAX_NESTING + 5) + "1" + ")" * (MAX_NESTING + 5)
    assert 'nested' in str(syntax_error(deep))
    assert parse("(" * 10 + "1" + ")" * 10) == Number(Fraction(1))
    long = " + ".join(["1"] * MAX_TOKENS)
    assert str(MAX_TOKENS) in str(syntax_error(long))


def test_evaluate_stays_in_a_single_basis():
    value = evaluate("Y[1,2,2]+Y[3,4]")
    assert isinstance(value, BasisExpansion)
    assert value.format() == 'Y(1, 2, 2) + Y(3, 4, 0)'
    assert as_dict(value.expand()) == terms("x(1, 2, 2) + x(2, 1, 2) + x(2, 2, 1) + x(3, 4, 0) + x(4, 3, 0)")
    product = evaluate("(Y[1,2,2]+Y[3,4])*Y[3,1,2]")
    assert dict(product.items()) == terms(
        "Y(4, 3, 4) + Y(5, 2, 4) + Y(6, 5, 2) + Y(6, 6, 1) + Y(7, 4, 2) + Y(7, 5, 1)")
    assert evaluate("m[1,1,2]+m[2,3]").format() == 'x[1, 1, 2] + x[2, 3, 0]'
    assert dict(evaluate("Y[1,0]^2").items()) == {(2, 0): 1}
    assert dict(evaluate("Y[1,0]^0").items()) == {(0, 0): 1}


def test_scalars_and_mixed_bases():
    value = evaluate("2 + Y[1,0] - 1/2")
    assert dict(value.items()) == {(0, 0): Fraction(3, 2), (1, 0): 1}
    mixed = evaluate("Y[1,0] + K[0,1]")
    assert isinstance(mixed, Polynomial)
    assert as_dict(mixed) == {(1, 0): 2, (0, 1): 1}
    assert evaluate("3*4 - 2") == 10
    assert as_dict(evaluate("m[1] * K[0,1]")) == {(2, 0): 1, (1, 1): 1}


def test_parameters():
    config = SessionConfig(params=('q', 't1', 't2'))
    ring = config.ring
    assert ring.format(evaluate("1/2*q", config)) == 'q/2'
    scaled = evaluate("t1*m[1,0]", config)
    assert ring.equal(scaled.coefficient((1, 0)), ring.param('t1'))
    assert 'macdonald' in config.registry
    try:
        evaluate("q*m[1]")
        assert False, "q is not declared over QQ"
    except CoefficientError as e:
        assert any('while evaluating' in note for note in e.__notes__)


def test_prefix_binding_and_types():
    config = SessionConfig()
    config.registry.bind_prefix('groth-neg')
    value = evaluate("G[1,2]+G[2,2]", config)
    assert value.basis.name == 'groth-neg'
    assert as_dict(value.expand()) == terms(
        "2*x(0, 0) + x(-2, 0) - x(-2, -1) - 3*x(-1, 0) - x(-1, -2) + 4*x(-1, -1) + x(0, -2) - 3*x(0, -1)")
    assert evaluate("G[1,2]").basis.name == 'groth-pos'
    typed = evaluate("K[1,2,-2]", SessionConfig(default_type='B'))
    assert typed.basis.name == 'key-B'
    assert len(typed.expand()) == 13
    assert evaluate("YY[1,2]").expand() == expand_double_schubert((1, 2))


def test_session_config_validation():
    for kwargs in ({'default_type': 'E'}, {'output_format': 'xml'}):
        try:
            SessionConfig(**kwargs)
            assert False, kwargs
        except BasisError:
            pass
    assert SessionConfig(params=(' q ', '', 't')).params == ('q', 't')


def test_session_config_from_environment():
    saved = {k: os.environ.get(k) for k in ('POLY_DEFAULT_PARAMS', 'POLY_DEFAULT_TYPE')}
    try:
        os.environ['POLY_DEFAULT_PARAMS'] = 'q,t'
        os.environ['POLY_DEFAULT_TYPE'] = 'c'
        config = SessionConfig.from_settings(output_format='structured')
        assert config.params == ('q', 't')
        assert config.default_type == 'C'
        assert config.output_format == 'structured'
        assert SessionConfig.from_settings(default_type='D').default_type == 'D'
    finally:
        for k, v in saved.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith('test_') and callable(fn):
            fn()
            print(f"✅ {name}")
