#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
命令行测试：子命令输出和退出码
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.abspath(__file__)))
os.environ['POLY_LOG_FILE'] = ''

import json
from io import StringIO

import numpy as np

from laurent_polynomial import Polynomial
from polynomial_cli import EXIT_ENGINE, EXIT_OK, EXIT_SYNTAX, main
from test_laurent_polynomial import as_dict, terms
from weyl_operators import OperatorKind, apply_operator


def run(*argv):
    out = StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_expand():
    code, output = run('expand', 'Y[1,2,2]+Y[3,4]')
    assert code == EXIT_OK
    assert output == 'x(1, 2, 2) + x(2, 1, 2) + x(2, 2, 1) + x(3, 4, 0) + x(4, 3, 0)\n'
    assert run('expand', '--basis', 'schubert', 'Y[1,2,2]+Y[3,4]') == (code, output)
    assert run('expand', '(m[1] + m[0,1])^2')[1] == 'x(0, 2) + 2*x(1, 1) + x(2, 0)\n'
    assert run('eval', 'Y[0]')[1] == 'Y(0)\n'
    code, output = run('expand', '--basis', 'groth-neg', 'G[1,2]+G[2,2]')
    assert code == EXIT_OK
    assert terms(output) == terms(
        "2*x(0, 0) + x(-2, 0) - x(-2, -1) - 3*x(-1, 0) - x(-1, -2) + 4*x(-1, -1) + x(0, -2) - 3*x(0, -1)")


def test_eval_structured():
    code, output = run('eval', '--format', 'structured', 'Y[1,2,2]+Y[3,4]')
    assert code == EXIT_OK
    payload = json.loads(output)
    assert payload['basis'] == 'schubert'
    assert payload['nvars'] == 3
    assert payload['params'] == []
    assert payload['terms'] == [{'vector': [1, 2, 2], 'coeff': '1'}, {'vector': [3, 4, 0], 'coeff': '1'}]


def test_text_and_structured_agree():
    for argv in (['expand', 'Y[1,2,2]+Y[3,4]'], ['convert', '--to', 'schubert', 'm[1,2,4]+m[2,3]'],
                 ['op', '--op', 'dd', '--i', '3', '--type', 'C', 'm[1,1,2]+m[2,3]']):
        _, text_output = run(*argv)
        _, json_output = run(*argv, '--format', 'structured')
        records = {tuple(t['vector']): int(t['coeff']) for t in json.loads(json_output)['terms']}
        assert records == terms(text_output), argv


def test_convert():
    code, output = run('convert', '--to', 'key-hat', 'm[1,2,4]+m[2,3]')
    assert code == EXIT_OK
    assert terms(output) == terms("^K(1, 2, 4) - ^K(1, 3, 3) + ^K(2, 3, 0) + ^K(2, 3, 2)")
    assert output.startswith('^K(2, 3, 0)')
    code, output = run('convert', '--to', 'schubert', 'm[1,2,4]+m[2,3]')
    assert code == EXIT_OK
    assert len(terms(output)) == 12
    code, output = run('convert', '--params', 'q,t1,t2', '--format', 'structured', '--to', 'macdonald', 'm[1,1]')
    assert code == EXIT_OK
    payload = json.loads(output)
    assert payload['params'] == ['q', 't1', 't2']
    assert {tuple(t['vector']) for t in payload['terms']} == {(0, 0), (1, 0), (1, 1), (0, 1)}


def test_operator():
    code, output = run('op', '--op', 'dd', '--i', '2', '--type', 'B', 'm[1,1,2]+m[2,3]')
    assert code == EXIT_OK
    source = Polynomial.from_vectors({(1, 1, 2): 1, (2, 3, 0): 1})
    assert terms(output) == as_dict(apply_operator(source, OperatorKind.NEWTON, 2, 'B'))
    code, output = run('op', '--op', 'pi', '--i', '1', 'Y[1,0]')
    assert code == EXIT_OK
    assert output == 'x(0, 1) + x(1, 0)\n'


def test_proj_deg():
    assert run('proj-deg', '2143') == (EXIT_OK, '78\n')
    code, output = run('proj-deg', '--format', 'structured', '2,1,4,3')
    assert json.loads(output) == {'permutation': [2, 1, 4, 3], 'degree': 78}
    code, output = run('proj-deg', '--all', '3', '--workers', '2', '--format', 'structured')
    assert code == EXIT_OK
    rows = json.loads(output)
    assert len(rows) == 6
    assert {row['permutation']: row['degree'] for row in rows}['123'] == 6


def test_schur_det():
    code, output = run('schur-det', '--vandermonde')
    assert code == EXIT_OK
    lines = output.strip().splitlines()
    assert len(lines) == 5
    assert lines[-1] == 'det / vandermonde = 1'
    assert lines[-2].startswith('det = ')
    code, output = run('schur-det', '--format', 'structured')
    payload = json.loads(output)
    assert payload['matrix'][0] == ['1', '1', '1']
    assert 'quotient' not in payload


def test_exit_codes():
    assert run('--help')[0] == EXIT_OK
    assert run('bogus')[0] == EXIT_SYNTAX
    assert run('expand')[0] == EXIT_SYNTAX
    assert run('op', '--op', 'xx', '--i', '1', 'm[1]')[0] == EXIT_SYNTAX
    assert run('expand', 'Y[1,2')[0] == EXIT_SYNTAX
    assert run('schur-det', '--indices', '0,a')[0] == EXIT_SYNTAX
    assert run('expand', 'Y[1,-1]')[0] == EXIT_ENGINE
    assert run('expand', 'q*m[1]')[0] == EXIT_ENGINE
    assert run('expand', '--basis', 'nothing', 'Y[1]')[0] == EXIT_ENGINE
    assert run('op', '--op', 'dd', '--i', '5', 'm[1,2]')[0] == EXIT_ENGINE
    assert run('proj-deg', '2243')[0] == EXIT_ENGINE
    assert run('proj-deg')[0] == EXIT_ENGINE


def test_random_input_never_crashes():
    rng = np.random.default_rng(404)
    alphabet = list("YKmG[]012,-+*() qt")
    for _ in range(10000):
        expression = ''.join(rng.choice(alphabet, int(rng.integers(1, 11))))
        code, _ = run('expand', expression)
        assert code in (EXIT_OK, EXIT_SYNTAX, EXIT_ENGINE), expression


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith('test_') and callable(fn):
            fn()
            print(f"✅ {name}")
