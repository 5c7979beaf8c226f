#!/usr/bin/env python3
"""
命令行入口
  expand    表达式展开成单项式
  eval      求值，单一基的表达式留在该基里
  convert   换到 --to 指定的基
  op        作用 ∂ / π / π̂ / T
  proj-deg  Schubert 簇的射影次数（单个排列或 --all n 整张表）
  schur-det Schur 行列式
退出码：0 成功，2 语法或参数错误，3 引擎错误
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from applications import (degree_table, determinant, format_matrix, parse_permutation,
                          proj_deg, schur_matrix, vandermonde_quotient)
from basis_engine import BasisExpansion, convert
from builtin_bases import schubert_basis
from coefficient_rings import ring_for_params
from engine_config import EngineSettings, setup_logging
from engine_errors import PolynomialEngineError
from expression_parser import ExpressionSyntaxError, SessionConfig, evaluate
from laurent_polynomial import CARTAN_TYPES, Polynomial
from weyl_operators import OperatorKind, apply_operator

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_SYNTAX = 2
EXIT_ENGINE = 3

SCHUR_VARIABLES = 'x1,x2,x3'
SCHUR_ALPHABETS = 'x1,x2;x1,x3;x2,x3'
SCHUR_INDICES = '0,0;0,1;1,1'


# 输出


def as_polynomial(value, config: SessionConfig) -> Polynomial:
    if isinstance(value, BasisExpansion):
        return value.expand()
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value, config.nvars or 1, config.ring)


def polynomial_records(p: Polynomial) -> List[dict]:
    return [{'vector': list(v), 'coeff': p.ring.format(c)} for v, c in p]


def structured(value, config: SessionConfig) -> dict:
    """结构化输出：basis、nvars、params 加上每一项的 {vector, coeff}"""
    if isinstance(value, BasisExpansion):
        return {
            'basis': value.basis.name,
            'nvars': value.nvars,
            'params': list(config.params),
            'terms': value.records(),
        }
    p = as_polynomial(value, config)
    return {
        'basis': 'monomial',
        'nvars': p.nvars,
        'params': list(config.params),
        'terms': polynomial_records(p),
    }


def text(value, config: SessionConfig) -> str:
    if isinstance(value, BasisExpansion):
        return value.format()
    return as_polynomial(value, config).format('x', '()')


def emit(value, config: SessionConfig, out=None):
    out = out or sys.stdout
    if config.output_format == 'structured':
        out.write(json.dumps(structured(value, config), ensure_ascii=False) + '\n')
    else:
        out.write(text(value, config) + '\n')


# 子命令


def _evaluate(args, config: SessionConfig):
    if args.basis:
        config.registry.bind_prefix(args.basis)
    return evaluate(args.expression, config)


def command_expand(args, config: SessionConfig, out):
    value = _evaluate(args, config)
    emit(as_polynomial(value, config), config, out)


def command_eval(args, config: SessionConfig, out):
    emit(_evaluate(args, config), config, out)


def command_convert(args, config: SessionConfig, out):
    value = _evaluate(args, config)
    target = config.registry.get(args.to)
    if isinstance(value, BasisExpansion):
        result = convert(value, target)
    else:
        result = target.to_basis(as_polynomial(value, config))
    emit(result, config, out)


def command_op(args, config: SessionConfig, out):
    value = _evaluate(args, config)
    kind = OperatorKind.parse(args.op)
    if isinstance(value, BasisExpansion):
        result = value.apply_operator(kind, args.i, config.default_type)
    else:
        result = apply_operator(as_polynomial(value, config), kind, args.i, config.default_type)
    emit(result, config, out)


def command_proj_deg(args, config: SessionConfig, out):
    if args.all is not None:
        workers = args.workers or EngineSettings().degree_workers
        table = degree_table(args.all, workers=workers, basis=schubert_basis(config.ring))
        if config.output_format == 'structured':
            out.write(table.to_json(orient='records', force_ascii=False) + '\n')
        else:
            out.write(table.to_string(index=False) + '\n')
        return
    if not args.permutation:
        raise PolynomialEngineError("proj-deg needs a permutation or --all n")
    perm = parse_permutation(args.permutation)
    degree = proj_deg(perm, schubert_basis(config.ring))
    if config.output_format == 'structured':
        out.write(json.dumps({'permutation': perm, 'degree': degree}) + '\n')
    else:
        out.write(f"{degree}\n")


def _split_groups(raw: str) -> List[List[str]]:
    return [[item.strip() for item in group.split(',') if item.strip()] for group in raw.split(';')]


def command_schur_det(args, config: SessionConfig, out):
    variables = [v.strip() for v in args.variables.split(',') if v.strip()]
    alphabets = _split_groups(args.alphabets)
    try:
        indices = [tuple(int(e) for e in group) for group in _split_groups(args.indices)]
    except ValueError:
        raise ExpressionSyntaxError(f"malformed index list '{args.indices}'", 1, 1) from None
    field = ring_for_params(tuple(variables))
    matrix = schur_matrix(variables, alphabets, indices)
    det = determinant(matrix, field)
    rows = format_matrix(matrix, field)
    payload = {'matrix': rows, 'determinant': field.format(det)}
    if args.vandermonde:
        payload['quotient'] = field.format(vandermonde_quotient(det, variables))
    if config.output_format == 'structured':
        out.write(json.dumps(payload, ensure_ascii=False) + '\n')
        return
    width = max((len(e) for row in rows for e in row), default=1)
    for row in rows:
        out.write('[' + '  '.join(e.rjust(width) for e in row) + ']\n')
    out.write(f"det = {payload['determinant']}\n")
    if 'quotient' in payload:
        out.write(f"det / vandermonde = {payload['quotient']}\n")


COMMANDS = {
    'expand': command_expand,
    'eval': command_eval,
    'convert': command_convert,
    'op': command_op,
    'proj-deg': command_proj_deg,
    'schur-det': command_schur_det,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--params', help='系数环的参数，逗号分隔，例如 q,t1,t2')
    common.add_argument('--format', dest='output_format', choices=['text', 'structured'],
                        help='输出格式')
    common.add_argument('--nvars', type=int, help='变量个数（字面量补零到这个长度）')
    common.add_argument('--type', dest='default_type', choices=CARTAN_TYPES,
                        help='默认类型：K 与 mb 的绑定，以及 op 的根系')

    parser = argparse.ArgumentParser(prog='polynomial_cli', description='多基 Laurent 多项式计算')
    sub = parser.add_subparsers(dest='command', required=True)

    for name, help_text in (('expand', '展开成单项式'), ('eval', '求值')):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument('expression')
        p.add_argument('--basis', help='让这个基接管它的前缀，例如 groth-neg、key-B')

    p = sub.add_parser('convert', parents=[common], help='换基')
    p.add_argument('expression')
    p.add_argument('--to', required=True, help='目标基的名字')
    p.add_argument('--basis', help='让这个基接管它的前缀')

    p = sub.add_parser('op', parents=[common], help='作用算子')
    p.add_argument('expression')
    p.add_argument('--op', required=True, choices=[k.value for k in OperatorKind])
    p.add_argument('--i', type=int, required=True, help='下标，从 1 开始')
    p.add_argument('--basis', help='让这个基接管它的前缀')

    p = sub.add_parser('proj-deg', parents=[common], help='射影次数')
    p.add_argument('permutation', nargs='?', help="一行记号，例如 2143 或 2,1,4,3")
    p.add_argument('--all', type=int, metavar='N', help='S_N 的整张表')
    p.add_argument('--workers', type=int, help='线程数')

    p = sub.add_parser('schur-det', parents=[common], help='Schur 行列式')
    p.add_argument('--variables', default=SCHUR_VARIABLES)
    p.add_argument('--alphabets', default=SCHUR_ALPHABETS, help='分号分隔的字母表')
    p.add_argument('--indices', default=SCHUR_INDICES, help='分号分隔的下标')
    p.add_argument('--vandermonde', action='store_true', help='再除以 Vandermonde 积')
    return parser


def session_from_args(args, settings: EngineSettings) -> SessionConfig:
    params = None
    if args.params is not None:
        params = tuple(p for p in args.params.split(',') if p.strip())
    return SessionConfig.from_settings(
        settings,
        params=params,
        nvars=args.nvars,
        default_type=args.default_type,
        output_format=args.output_format,
    )


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_SYNTAX

    try:
        settings = setup_logging(EngineSettings())
        config = session_from_args(args, settings)
        logger.debug(f"命令 {args.command}: {vars(args)}")
        COMMANDS[args.command](args, config, out)
        return EXIT_OK
    except ExpressionSyntaxError as e:
        logger.debug(f"语法错误: {e}")
        print(f"syntax error: {e}", file=sys.stderr)
        return EXIT_SYNTAX
    except PolynomialEngineError as e:
        logger.debug(f"引擎错误: {e}")
        print(f"error: {e}", file=sys.stderr)
        for note in getattr(e, '__notes__', ()):
            print(f"  {note}", file=sys.stderr)
        return EXIT_ENGINE
    except Exception as e:
        logger.error(f"命令 {args.command} 失败: {e}", exc_info=True)
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == '__main__':
    sys.exit(main())
