"""
表达式语言
  expr   := term (('+' | '-') term)*
  term   := factor ('*' factor)*
  factor := atom ('^' nat)?
  atom   := '(' expr ')' | '-' atom | rational | param | PREFIX '[' int (',' int)* ']'
  rational := nat ('/' nat)?
词法、递归下降解析、规范打印、求值
"""

import logging
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple, Union

from basis_engine import BasisExpansion, BasisRegistry, multiply_in_basis
from builtin_bases import build_registry
from coefficient_rings import CoefficientRing, ring_for_params
from double_algebra import PolynomialCoefficientRing
from engine_config import EngineSettings
from engine_errors import BasisError, PolynomialEngineError, VariableCountError
from laurent_polynomial import CARTAN_TYPES, Polynomial

logger = logging.getLogger(__name__)


class ExpressionSyntaxError(PolynomialEngineError):
    """语法错误，带行号、列号和期望的记号集合"""

    def __init__(self, message: str, line: int, column: int, expected=()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        detail = f" (expected one of: {', '.join(sorted(self.expected))})" if self.expected else ""
        super().__init__(f"{line}:{column}: {message}{detail}")


# 词法


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


TOKEN_PATTERN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<int>\d+)
  | (?P<ident>\^?[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),\[\]])
""", re.VERBOSE)


def tokenize(text: str) -> List[Token]:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = TOKEN_PATTERN.match(text, pos)
        column = pos - line_start + 1
        if not match:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", line, column)
        kind = match.lastgroup
        if kind == 'newline':
            line += 1
            line_start = match.end()
        elif kind != 'ws':
            tokens.append(Token(kind, match.group(), line, column))
        pos = match.end()
    tokens.append(Token('end', '', line, len(text) - line_start + 1))
    return tokens


# 语法树


@dataclass(frozen=True)
class Literal:
    prefix: str
    vector: Tuple[int, ...]


@dataclass(frozen=True)
class Number:
    value: Fraction


@dataclass(frozen=True)
class Param:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: 'Node'


@dataclass(frozen=True)
class BinOp:
    op: str
    left: 'Node'
    right: 'Node'


@dataclass(frozen=True)
class Power:
    base: 'Node'
    exponent: int


Node = Union[Literal, Number, Param, Neg, BinOp, Power]

MAX_NESTING = 64
MAX_TOKENS = 600

ATOM_START = frozenset({"'('", 'number', 'parameter', 'basis literal'})


class Parser:
    def __init__(self, text: str, prefixes: Optional[Iterable[str]] = None):
        self.tokens = tokenize(text)
        if len(self.tokens) > MAX_TOKENS:
            extra = self.tokens[MAX_TOKENS]
            raise ExpressionSyntaxError(f"expression longer than {MAX_TOKENS} tokens", extra.line, extra.column)
        self.pos = 0
        self.prefixes = None if prefixes is None else frozenset(prefixes)
        self.depth = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _error(self, message: str, expected) -> ExpressionSyntaxError:
        token = self.current
        found = 'end of input' if token.kind == 'end' else repr(token.text)
        return ExpressionSyntaxError(f"{message}, found {found}", token.line, token.column, expected)

    def _expect(self, text: str) -> Token:
        if self.current.kind == 'op' and self.current.text == text:
            return self._advance()
        raise self._error(f"missing '{text}'", {f"'{text}'"})

    def _is_op(self, *texts) -> bool:
        return self.current.kind == 'op' and self.current.text in texts

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != 'end':
            raise self._error("unexpected token", {"'+'", "'-'", "'*'", "'^'", 'end of input'})
        return node

    def expr(self) -> Node:
        node = self.term()
        while self._is_op('+', '-'):
            op = self._advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self._is_op('*'):
            self._advance()
            node = BinOp('*', node, self.factor())
        return node

    def _enter(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            token = self.current
            raise ExpressionSyntaxError(f"expression nested deeper than {MAX_NESTING} levels", token.line, token.column)

    def factor(self) -> Node:
        """factor := atom ('^' nat)?"""
        node = self.atom()
        if self._is_op('^'):
            self._advance()
            if self.current.kind != 'int':
                raise self._error("exponent must be a non-negative integer", {'integer'})
            node = Power(node, int(self._advance().text))
        return node

    def atom(self) -> Node:
        token = self.current
        if self._is_op('-'):
            # atom := '-' atom，所以 -a^2 是 (-a)^2
            self._advance()
            self._enter()
            node = Neg(self.atom())
            self.depth -= 1
            return node
        if self._is_op('('):
            self._advance()
            self._enter()
            node = self.expr()
            self._expect(')')
            self.depth -= 1
            return node
        if token.kind == 'int':
            self._advance()
            value = Fraction(int(token.text))
            if self._is_op('/'):
                self._advance()
                if self.current.kind != 'int':
                    raise self._error("denominator must be a positive integer", {'integer'})
                den = int(self._advance().text)
                if den == 0:
                    raise ExpressionSyntaxError("zero denominator", token.line, token.column)
                value = value / den
            return Number(value)
        if token.kind == 'ident':
            self._advance()
            if self._is_op('['):
                if self.prefixes is not None and token.text not in self.prefixes:
                    raise ExpressionSyntaxError(f"unknown basis prefix '{token.text}'", token.line, token.column,
                                                self.prefixes)
                return Literal(token.text, self.vector())
            if token.text.startswith('^'):
                raise self._error(f"'{token.text}' must be followed by a vector", {"'['"})
            return Param(token.text)
        raise self._error("expected an operand", ATOM_START | {"'-'"})

    def vector(self) -> Tuple[int, ...]:
        self._expect('[')
        entries = [self.integer()]
        while self._is_op(','):
            self._advance()
            entries.append(self.integer())
        self._expect(']')
        return tuple(entries)

    def integer(self) -> int:
        sign = 1
        if self._is_op('-'):
            self._advance()
            sign = -1
        if self.current.kind != 'int':
            raise self._error("malformed vector entry", {'integer', "'-'"})
        return sign * int(self._advance().text)


def literal_width(node: Node) -> int:
    if isinstance(node, Literal):
        return len(node.vector)
    if isinstance(node, Neg):
        return literal_width(node.operand)
    if isinstance(node, BinOp):
        return max(literal_width(node.left), literal_width(node.right))
    if isinstance(node, Power):
        return literal_width(node.base)
    return 0


def pad_literals(node: Node, n: int) -> Node:
    """所有基元素字面量补零到 n 个分量"""
    if isinstance(node, Literal):
        if len(node.vector) > n:
            raise VariableCountError(f"literal {node.prefix}{list(node.vector)} has more than {n} entries")
        return Literal(node.prefix, node.vector + (0,) * (n - len(node.vector)))
    if isinstance(node, Neg):
        return Neg(pad_literals(node.operand, n))
    if isinstance(node, BinOp):
        return BinOp(node.op, pad_literals(node.left, n), pad_literals(node.right, n))
    if isinstance(node, Power):
        return Power(pad_literals(node.base, n), node.exponent)
    return node


def parse(text: str, nvars: Optional[int] = None, prefixes: Optional[Iterable[str]] = None) -> Node:
    """解析并把字面量补齐到最长向量（或 nvars）的长度；给了 prefixes 就顺便检查字面量的前缀"""
    node = Parser(text, prefixes).parse()
    width = max(literal_width(node), nvars or 0)
    return pad_literals(node, width) if width else node


def to_text(node: Node) -> str:
    """规范打印：二元运算总是带括号，parse(to_text(e)) == e"""
    if isinstance(node, Literal):
        return f"{node.prefix}[{','.join(str(e) for e in node.vector)}]"
    if isinstance(node, Number):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Param):
        return node.name
    if isinstance(node, Neg):
        operand = to_text(node.operand)
        return f"-({operand})" if isinstance(node.operand, Power) else f"-{operand}"
    if isinstance(node, BinOp):
        return f"({to_text(node.left)} {node.op} {to_text(node.right)})"
    if isinstance(node, Power):
        base = to_text(node.base)
        if isinstance(node.base, (Neg, Power)):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    raise TypeError(f"not an expression node: {node!r}")


# 求值


@dataclass
class SessionConfig:
    """一次命令的设置：系数环、变量个数、默认类型、输出格式"""
    params: Tuple[str, ...] = ()
    nvars: Optional[int] = None
    default_type: str = 'A'
    output_format: str = 'text'
    recursion_factor: int = 4
    _registry: Optional[BasisRegistry] = field(default=None, repr=False)

    def __post_init__(self):
        self.params = tuple(p.strip() for p in self.params if p and p.strip())
        if self.default_type not in CARTAN_TYPES:
            raise BasisError(f"unknown type '{self.default_type}', expected one of {CARTAN_TYPES}")
        if self.output_format not in ('text', 'structured'):
            raise BasisError(f"unknown output format '{self.output_format}'")

    @classmethod
    def from_settings(cls, settings: Optional[EngineSettings] = None, **overrides) -> 'SessionConfig':
        settings = settings or EngineSettings()
        values = {
            'params': settings.default_params,
            'default_type': settings.default_type,
            'output_format': settings.output_format,
            'recursion_factor': settings.recursion_factor,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @property
    def ring(self) -> CoefficientRing:
        return ring_for_params(self.params)

    @property
    def registry(self) -> BasisRegistry:
        if self._registry is None:
            self._registry = build_registry(self.ring, self.default_type)
            for basis in self._registry:
                basis.recursion_factor = self.recursion_factor
        return self._registry


Value = Union[BasisExpansion, Polynomial, object]


class Evaluator:
    """
    同一个基的和与积留在该基里，混合的表达式展开成单项式
    标量当作基里下标全零元素的倍数
    """

    def __init__(self, config: SessionConfig):
        self.config = config
        self.registry = config.registry
        self.ring = config.ring

    def evaluate(self, node: Node) -> Value:
        try:
            return self._eval(node)
        except PolynomialEngineError as e:
            if not hasattr(e, 'expression'):
                e.expression = to_text(node)
                e.add_note(f"while evaluating {e.expression}")
            raise

    def _eval(self, node: Node) -> Value:
        if isinstance(node, Literal):
            return self.registry.by_prefix(node.prefix)[node.vector]
        if isinstance(node, Number):
            return self.ring.coerce(node.value)
        if isinstance(node, Param):
            return self.ring.param(node.name)
        if isinstance(node, Neg):
            return self._neg(self.evaluate(node.operand))
        if isinstance(node, Power):
            return self._power(self.evaluate(node.base), node.exponent)
        left, right = self.evaluate(node.left), self.evaluate(node.right)
        if node.op == '+':
            return self._add(left, right)
        if node.op == '-':
            return self._add(left, self._neg(right))
        return self._mul(left, right)

    # 值的种类

    @staticmethod
    def _is_scalar(value) -> bool:
        return not isinstance(value, (BasisExpansion, Polynomial))

    def _neg(self, value):
        if self._is_scalar(value):
            return self.ring.neg(value)
        return value.neg()

    def _unit(self, expansion: BasisExpansion, scalar) -> BasisExpansion:
        zeros = (0,) * expansion.nvars
        return BasisExpansion(expansion.basis, expansion.nvars, {zeros: expansion.ring.coerce(scalar)})

    def _to_polynomial(self, value, nvars: int) -> Polynomial:
        if isinstance(value, BasisExpansion):
            return value.expand()
        if isinstance(value, Polynomial):
            return value
        return Polynomial.constant(value, nvars, self.ring)

    @staticmethod
    def _unify(p: Polynomial, q: Polynomial):
        """变量个数补齐；一边是 y 多项式系数时把另一边提升上去"""
        if p.ring != q.ring:
            if isinstance(q.ring, PolynomialCoefficientRing) and not isinstance(p.ring, PolynomialCoefficientRing):
                p = p.map_coefficients(q.ring.coerce, q.ring)
            elif isinstance(p.ring, PolynomialCoefficientRing) and not isinstance(q.ring, PolynomialCoefficientRing):
                q = q.map_coefficients(p.ring.coerce, p.ring)
            elif q.ring.has_params(p.ring.params):
                p = p.map_coefficients(q.ring.coerce, q.ring)
            else:
                q = q.map_coefficients(p.ring.coerce, p.ring)
        m = max(p.nvars, q.nvars)
        return p.change_nb_variables(m), q.change_nb_variables(m)

    def _same_basis(self, a, b) -> bool:
        return (isinstance(a, BasisExpansion) and isinstance(b, BasisExpansion)
                and a.basis is b.basis and a.nvars == b.nvars)

    def _add(self, a, b):
        if self._is_scalar(a) and self._is_scalar(b):
            return self.ring.add(a, b)
        if self._same_basis(a, b):
            return a.add(b)
        if isinstance(a, BasisExpansion) and self._is_scalar(b):
            return a.add(self._unit(a, b))
        if isinstance(b, BasisExpansion) and self._is_scalar(a):
            return self._unit(b, a).add(b)
        n = self._width(a, b)
        p, q = self._unify(self._to_polynomial(a, n), self._to_polynomial(b, n))
        return p.add(q)

    def _mul(self, a, b):
        if self._is_scalar(a) and self._is_scalar(b):
            return self.ring.mul(a, b)
        if self._is_scalar(a):
            return b.scale(a)
        if self._is_scalar(b):
            return a.scale(b)
        if self._same_basis(a, b) and a.basis.convertible:
            return multiply_in_basis(a, b)
        n = self._width(a, b)
        p, q = self._unify(self._to_polynomial(a, n), self._to_polynomial(b, n))
        return p.mul(q)

    def _power(self, value, k: int):
        if self._is_scalar(value):
            return self.ring.power(value, k)
        if isinstance(value, BasisExpansion):
            if k == 0:
                return self._unit(value, 1)
            p = value.expand().power(k)
            return value.basis.to_basis(p) if value.basis.convertible else p
        return value.power(k)

    @staticmethod
    def _width(a, b) -> int:
        return max((v.nvars for v in (a, b) if not Evaluator._is_scalar(v)), default=1)


def evaluate(text_or_node, config: Optional[SessionConfig] = None) -> Value:
    config = config or SessionConfig()
    node = parse(text_or_node, config.nvars, config.registry.prefixes()) if isinstance(text_or_node, str) else text_or_node
    return Evaluator(config).evaluate(node)

