from flask import Blueprint, request, jsonify
import logging

from applications import (degree_table, determinant, format_matrix, parse_permutation,
                          proj_deg, schur_matrix, vandermonde_quotient)
from basis_engine import BasisExpansion, convert
from builtin_bases import build_registry, schubert_basis
from coefficient_rings import ring_for_params
from engine_config import EngineSettings
from engine_errors import PolynomialEngineError
from expression_parser import SessionConfig, evaluate
from polynomial_cli import as_polynomial, structured
from weyl_operators import OperatorKind, apply_operator

logger = logging.getLogger(__name__)

# 创建蓝图
poly_bp = Blueprint('poly', __name__, url_prefix='/api/poly')

MAX_TABLE_SIZE = 4

# Schubert 基共享缓存，射影次数请求之间复用
_schubert = schubert_basis()


def _error(e, status):
    return jsonify({'success': False, 'error': str(e)}), status


def _session(data) -> SessionConfig:
    params = data.get('params')
    if isinstance(params, str):
        params = tuple(p for p in params.split(',') if p.strip())
    elif params is not None:
        params = tuple(params)
    return SessionConfig.from_settings(
        EngineSettings(),
        params=params,
        nvars=data.get('nvars'),
        default_type=data.get('type'),
        output_format='structured',
    )


def _evaluate(data, config: SessionConfig):
    expression = data.get('expression')
    if not expression:
        raise PolynomialEngineError("missing 'expression'")
    if data.get('basis'):
        config.registry.bind_prefix(data['basis'])
    return evaluate(expression, config)


@poly_bp.route('/expand', methods=['POST'])
def expand():
    """表达式展开成单项式"""
    try:
        data = request.get_json(silent=True) or {}
        config = _session(data)
        value = _evaluate(data, config)
        result = structured(as_polynomial(value, config), config)
        return jsonify({'success': True, **result})

    except PolynomialEngineError as e:
        logger.error(f"展开失败: {e}")
        return _error(e, 400)
    except Exception as e:
        logger.error(f"展开请求失败: {e}")
        return _error(e, 500)


@poly_bp.route('/convert', methods=['POST'])
def convert_expression():
    """换到目标基"""
    try:
        data = request.get_json(silent=True) or {}
        config = _session(data)
        if not data.get('to'):
            raise PolynomialEngineError("missing 'to'")
        target = config.registry.get(data['to'])
        value = _evaluate(data, config)
        if isinstance(value, BasisExpansion):
            result = convert(value, target)
        else:
            result = target.to_basis(as_polynomial(value, config))
        return jsonify({'success': True, **structured(result, config), 'text': result.format()})

    except PolynomialEngineError as e:
        logger.error(f"换基失败: {e}")
        return _error(e, 400)
    except Exception as e:
        logger.error(f"换基请求失败: {e}")
        return _error(e, 500)


@poly_bp.route('/operator', methods=['POST'])
def operator():
    """作用 ∂ / π / π̂ / T"""
    try:
        data = request.get_json(silent=True) or {}
        config = _session(data)
        kind = OperatorKind.parse(data.get('op', 'dd'))
        try:
            i = int(data.get('i'))
        except (TypeError, ValueError):
            raise PolynomialEngineError(f"operator index must be an integer, got {data.get('i')!r}") from None
        value = _evaluate(data, config)
        if isinstance(value, BasisExpansion):
            result = value.apply_operator(kind, i, config.default_type)
        else:
            result = apply_operator(as_polynomial(value, config), kind, i, config.default_type)
        return jsonify({'success': True, **structured(result, config)})

    except PolynomialEngineError as e:
        logger.error(f"算子作用失败: {e}")
        return _error(e, 400)
    except Exception as e:
        logger.error(f"算子请求失败: {e}")
        return _error(e, 500)


@poly_bp.route('/proj_deg/<perm>', methods=['GET'])
def projective_degree(perm):
    """单个排列的射影次数"""
    try:
        permutation = parse_permutation(perm)
        degree = proj_deg(permutation, _schubert)
        return jsonify({'success': True, 'permutation': permutation, 'degree': degree})

    except PolynomialEngineError as e:
        logger.error(f"射影次数计算失败: {e}")
        return _error(e, 400)
    except Exception as e:
        logger.error(f"射影次数请求失败: {e}")
        return _error(e, 500)


@poly_bp.route('/degree_table/<int:n>', methods=['GET'])
def projective_degree_table(n):
    """S_n 的射影次数表"""
    try:
        if n < 1 or n > MAX_TABLE_SIZE:
            return _error(f"n must be between 1 and {MAX_TABLE_SIZE}", 400)
        settings = EngineSettings()
        table = degree_table(n, workers=settings.degree_workers, basis=_schubert)
        rows = [{
            'permutation': row['permutation'],
            'lehmer_code': [int(e) for e in row['lehmer_code']],
            'length': int(row['length']),
            'degree': int(row['degree']),
        } for row in table.to_dict(orient='records')]
        return jsonify({'success': True, 'results': rows, 'total': len(rows)})

    except PolynomialEngineError as e:
        logger.error(f"射影次数表失败: {e}")
        return _error(e, 400)
    except Exception as e:
        logger.error(f"射影次数表请求失败: {e}")
        return _error(e, 500)


@poly_bp.route('/schur_det', methods=['POST'])
def schur_det():
    """Schur 矩阵与行列式"""
    try:
        data = request.get_json(silent=True) or {}
        variables = data.get('variables') or ['x1', 'x2', 'x3']
        alphabets = data.get('alphabets') or [['x1', 'x2'], ['x1', 'x3'], ['x2', 'x3']]
        indices = data.get('indices') or [[0, 0], [0, 1], [1, 1]]
        try:
            indices = [tuple(int(e) for e in u) for u in indices]
        except (TypeError, ValueError):
            raise PolynomialEngineError(f"malformed index list {indices!r}") from None
        field = ring_for_params(tuple(variables))
        matrix = schur_matrix(variables, alphabets, indices)
        det = determinant(matrix, field)
        return jsonify({
            'success': True,
            'matrix': format_matrix(matrix, field),
            'determinant': field.format(det),
            'quotient': field.format(vandermonde_quotient(det, variables)),
        })

    except PolynomialEngineError as e:
        logger.error(f"Schur 行列式失败: {e}")
        return _error(e, 400)
    except Exception as e:
        logger.error(f"Schur 行列式请求失败: {e}")
        return _error(e, 500)


@poly_bp.route('/bases', methods=['GET'])
def bases():
    """已注册的基"""
    try:
        params = tuple(p for p in request.args.get('params', '').split(',') if p.strip())
        registry = build_registry(ring_for_params(params), request.args.get('type', 'A'))
        bound = registry.prefixes()
        results = []
        for basis in registry:
            info = basis.summary()
            info['bound'] = bound.get(basis.prefix) == basis.name
            results.append(info)
        return jsonify({'success': True, 'bases': results, 'total': len(results)})

    except PolynomialEngineError as e:
        logger.error(f"获取基列表失败: {e}")
        return _error(e, 400)
    except Exception as e:
        logger.error(f"获取基列表请求失败: {e}")
        return _error(e, 500)
