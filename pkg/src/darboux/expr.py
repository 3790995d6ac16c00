"""Tiny real-valued expression language: parse, evaluate, differentiate.

Surfaces and curves can be supplied as text like ``"cos(v)*cos(u)"``; this
module turns such text into an immutable AST, evaluates it in binary64, and
produces exact symbolic partial derivatives (with constant folding, no
algebraic simplification) so chart jets and gradients stay analytic.

Grammar (whitespace insignificant, implicit multiplication NOT allowed):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Known functions: sin cos tan exp ln sqrt sinh cosh abs sign.  ``sign`` only
shows up in derivatives of ``abs`` but is accepted by the parser so printed
derivatives re-parse.  Constants: pi, e.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Mapping

from .errors import EvalDomainError, ParseError

__all__ = ["Expression", "parse", "differentiate", "evaluate", "unparse"]

CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = ("sin", "cos", "tan", "exp", "ln", "sqrt", "sinh", "cosh", "abs", "sign")


# ---------------------------------------------------------------------------
# AST nodes (immutable)


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str  # "pi" or "e"


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Node"


Node = Num | Var | Const | Neg | BinOp | Call


@dataclass(frozen=True)
class Expression:
    """Parsed expression plus its declared variable list."""

    root: Node
    variables: tuple[str, ...]

    def __str__(self) -> str:
        return unparse(self)

    def __call__(self, **bindings: float) -> float:
        return evaluate(self, bindings)

    def diff(self, var: str) -> "Expression":
        return differentiate(self, var)


# ---------------------------------------------------------------------------
# Tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        if source[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


# ---------------------------------------------------------------------------
# Recursive-descent parser


class _Parser:
    def __init__(self, source: str, variables: tuple[str, ...]):
        self.tokens = _tokenize(source)
        self.variables = variables
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != op:
            raise ParseError(f"expected {op!r}", pos)
        self.advance()

    def parse(self) -> Node:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "+-":
                self.advance()
                node = BinOp(text, node, self.term())
            else:
                return node

    def term(self) -> Node:
        node = self.unary()
        while True:
            kind, text, _ = self.peek()
            if kind == "op" and text in "*/":
                self.advance()
                node = BinOp(text, node, self.unary())
            else:
                return node

    def unary(self) -> Node:
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        kind, text, _ = self.peek()
        if kind == "op" and text == "^":
            self.advance()
            return BinOp("^", base, self.unary())  # right-associative
        return base

    def atom(self) -> Node:
        kind, text, pos = self.advance()
        if kind == "num":
            return Num(float(text))
        if kind == "ident":
            nk, nt, _ = self.peek()
            if nk == "op" and nt == "(":
                if text not in FUNCTIONS:
                    raise ParseError(f"unknown function {text!r}", pos)
                self.advance()
                arg = self.expr()
                self.expect_op(")")
                return Call(text, arg)
            if text in CONSTANTS:
                return Const(text)
            if text not in self.variables:
                raise ParseError(f"undeclared identifier {text!r}", pos)
            return Var(text)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {text!r}", pos)


def parse(source: str, variables) -> Expression:
    """Parse ``source`` over the declared ``variables`` (list of names).

    Raises ParseError (with position) on malformed input, unknown function
    names, or identifiers that are neither declared variables nor pi/e.
    """
    if not source or not source.strip():
        raise ParseError("empty expression", 0)
    variables = tuple(variables)
    return Expression(_Parser(source, variables).parse(), variables)


# ---------------------------------------------------------------------------
# Evaluation


def _eval(node: Node, env: Mapping[str, float]) -> float:
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Const):
        return CONSTANTS[node.name]
    if isinstance(node, Var):
        try:
            return float(env[node.name])
        except KeyError:
            raise EvalDomainError(f"unbound variable {node.name!r}", node.name) from None
    if isinstance(node, Neg):
        return -_eval(node.arg, env)
    if isinstance(node, BinOp):
        a = _eval(node.left, env)
        b = _eval(node.right, env)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if node.op == "/":
            if b == 0.0:
                raise EvalDomainError("division by zero", _unparse(node))
            return a / b
        # '^'
        try:
            return math.pow(a, b)
        except (ValueError, OverflowError):
            raise EvalDomainError(f"pow domain error ({a!r}^{b!r})", _unparse(node)) from None
    # Call
    x = _eval(node.arg, env)
    fn = node.fn
    try:
        if fn == "sin":
            return math.sin(x)
        if fn == "cos":
            return math.cos(x)
        if fn == "tan":
            return math.tan(x)
        if fn == "exp":
            return math.exp(x)
        if fn == "ln":
            if x <= 0.0:
                raise EvalDomainError("ln of nonpositive value", _unparse(node))
            return math.log(x)
        if fn == "sqrt":
            if x < 0.0:
                raise EvalDomainError("sqrt of negative value", _unparse(node))
            return math.sqrt(x)
        if fn == "sinh":
            return math.sinh(x)
        if fn == "cosh":
            return math.cosh(x)
        if fn == "abs":
            return abs(x)
        # sign: the derivative of abs; deliberately undefined at the corner
        if x == 0.0:
            raise EvalDomainError("sign undefined at 0 (abs has no derivative there)", _unparse(node))
        return math.copysign(1.0, x)
    except OverflowError:
        raise EvalDomainError("overflow", _unparse(node)) from None


def evaluate(e: Expression, bindings: Mapping[str, float]) -> float:
    """Evaluate at the given variable bindings (IEEE binary64).

    Raises EvalDomainError naming the offending subexpression when evaluation
    leaves the real domain.
    """
    return _eval(e.root, bindings)


# ---------------------------------------------------------------------------
# Differentiation (exact; folds constant subtrees, nothing more)


def _is_num(node: Node, value: float | None = None) -> bool:
    return isinstance(node, Num) and (value is None or node.value == value)


def _add(a: Node, b: Node) -> Node:
    if _is_num(a) and _is_num(b):
        return Num(a.value + b.value)
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    return BinOp("+", a, b)


def _sub(a: Node, b: Node) -> Node:
    if _is_num(a) and _is_num(b):
        return Num(a.value - b.value)
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return _neg(b)
    return BinOp("-", a, b)


def _neg(a: Node) -> Node:
    if _is_num(a):
        return Num(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _mul(a: Node, b: Node) -> Node:
    if _is_num(a) and _is_num(b):
        return Num(a.value * b.value)
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return Num(0.0)
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    return BinOp("*", a, b)


def _div(a: Node, b: Node) -> Node:
    if _is_num(a, 0.0):
        return Num(0.0)
    if _is_num(b, 1.0):
        return a
    if _is_num(a) and _is_num(b) and b.value != 0.0:
        return Num(a.value / b.value)
    return BinOp("/", a, b)


def _pow(a: Node, b: Node) -> Node:
    if _is_num(b, 1.0):
        return a
    if _is_num(b, 0.0):
        return Num(1.0)
    if _is_num(a) and _is_num(b):
        try:
            return Num(math.pow(a.value, b.value))
        except (ValueError, OverflowError):
            pass  # keep symbolic; evaluation will report the domain error
    return BinOp("^", a, b)


def _call(fn: str, arg: Node) -> Node:
    if _is_num(arg):
        try:
            return Num(_eval(Call(fn, arg), {}))
        except EvalDomainError:
            pass
    return Call(fn, arg)


def _diff(node: Node, var: str) -> Node:
    if isinstance(node, (Num, Const)):
        return Num(0.0)
    if isinstance(node, Var):
        return Num(1.0) if node.name == var else Num(0.0)
    if isinstance(node, Neg):
        return _neg(_diff(node.arg, var))
    if isinstance(node, BinOp):
        u, v = node.left, node.right
        du, dv = _diff(u, var), _diff(v, var)
        if node.op == "+":
            return _add(du, dv)
        if node.op == "-":
            return _sub(du, dv)
        if node.op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        if node.op == "/":
            return _div(_sub(_mul(du, v), _mul(u, dv)), _pow(v, Num(2.0)))
        # '^': constant exponent gets the plain power rule (valid for
        # negative bases too); the general case goes through exp/ln.
        if _is_num(v):
            return _mul(_mul(v, _pow(u, Num(v.value - 1.0))), du)
        return _mul(
            _pow(u, v),
            _add(_mul(dv, _call("ln", u)), _mul(v, _div(du, u))),
        )
    # Call
    u, du = node.arg, _diff(node.arg, var)
    fn = node.fn
    if fn == "sin":
        return _mul(_call("cos", u), du)
    if fn == "cos":
        return _neg(_mul(_call("sin", u), du))
    if fn == "tan":
        return _div(du, _pow(_call("cos", u), Num(2.0)))
    if fn == "exp":
        return _mul(_call("exp", u), du)
    if fn == "ln":
        return _div(du, u)
    if fn == "sqrt":
        return _div(du, _mul(Num(2.0), _call("sqrt", u)))
    if fn == "sinh":
        return _mul(_call("cosh", u), du)
    if fn == "cosh":
        return _mul(_call("sinh", u), du)
    if fn == "abs":
        return _mul(_call("sign", u), du)
    # sign is piecewise constant: zero derivative away from the corner
    return Num(0.0)


def differentiate(e: Expression, var: str) -> Expression:
    """Exact symbolic partial derivative with respect to ``var``.

    Constant subtrees are folded so repeated application stays compact.
    abs differentiates to a sign factor whose evaluation at exactly 0 raises
    EvalDomainError instead of silently picking a branch.
    """
    if var not in e.variables:
        raise ValueError(f"variable {var!r} not declared for this expression")
    return Expression(_diff(e.root, var), e.variables)


# ---------------------------------------------------------------------------
# Unparsing (re-parseable, structure-preserving)

_LEVEL_ADD, _LEVEL_MUL, _LEVEL_NEG, _LEVEL_POW, _LEVEL_ATOM = 1, 2, 3, 4, 5


def _level(node: Node) -> int:
    if isinstance(node, Num):
        return _LEVEL_NEG if node.value < 0 else _LEVEL_ATOM
    if isinstance(node, (Var, Const, Call)):
        return _LEVEL_ATOM
    if isinstance(node, Neg):
        return _LEVEL_NEG
    return {"+": _LEVEL_ADD, "-": _LEVEL_ADD, "*": _LEVEL_MUL, "/": _LEVEL_MUL, "^": _LEVEL_POW}[node.op]


def _wrap(node: Node, minimum: int) -> str:
    text = _unparse(node)
    return f"({text})" if _level(node) < minimum else text


def _unparse(node: Node) -> str:
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Const):
        return node.name
    if isinstance(node, Call):
        return f"{node.fn}({_unparse(node.arg)})"
    if isinstance(node, Neg):
        return f"-{_wrap(node.arg, _LEVEL_NEG)}"
    if node.op in "+-":
        return f"{_wrap(node.left, _LEVEL_ADD)} {node.op} {_wrap(node.right, _LEVEL_ADD + 1)}"
    if node.op in "*/":
        return f"{_wrap(node.left, _LEVEL_MUL)}{node.op}{_wrap(node.right, _LEVEL_MUL + 1)}"
    return f"{_wrap(node.left, _LEVEL_ATOM)}^{_wrap(node.right, _LEVEL_NEG)}"


def unparse(e: Expression) -> str:
    """Render back to source text that re-parses to an equivalent tree."""
    return _unparse(e.root)
