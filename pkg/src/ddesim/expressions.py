"""Parser and evaluator for coefficient expressions in ``t`` and ``theta``.

The grammar is deliberately tiny:

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := unary ('^' factor)?
    unary  := '-'? atom
    atom   := number | 't' | 'theta' | 'pi' | func '(' expr ')' | '(' expr ')'

``func`` is one of ``sin, cos, exp, log, abs, sqrt`` and ``^`` binds
right-associatively (so ``2^3^2 == 2^(3^2)``).  Every function takes a
single argument, hence commas never occur in a valid expression, which
lets matrix-valued coefficients be written as ``,``/``;`` separated grids
of scalar expressions.  Note that per this grammar the unary minus binds
tighter than ``^``: ``-t^2`` is ``(-t)^2``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

__all__ = ["ExpressionError", "CoefficientExpr", "parse_coefficient"]

_FUNCTIONS: dict[str, Callable[[float], float]] = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "abs": abs,
    "sqrt": math.sqrt,
}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


class ExpressionError(ValueError):
    """Raised on any lexical, syntactic or semantic expression problem.

    Carries the zero-based ``position`` of the offending character in the
    source text.
    """

    def __init__(self, message: str, source: str, position: int):
        self.position = position
        super().__init__(f"{message} at position {position} in {source!r}")


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            # nothing matched: either trailing whitespace or a bad character
            rest = source[pos:]
            stripped = rest.lstrip()
            if not stripped:
                break
            bad = pos + (len(rest) - len(stripped))
            raise ExpressionError(f"unexpected character {source[bad]!r}", source, bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, allow_theta: bool, allow_t: bool):
        self.source = source
        self.allow_theta = allow_theta
        self.allow_t = allow_t
        self.tokens = _tokenize(source)
        self.index = 0
        self.uses_theta = False
        self.uses_t = False

    def peek(self):
        return self.tokens[self.index]

    def take(self):
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def error(self, message: str, tok=None):
        tok = tok or self.peek()
        raise ExpressionError(message, self.source, tok[2])

    def parse(self):
        node = self.expr()
        kind, value, _ = self.peek()
        if kind != "end":
            self.error(f"unexpected token {value!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.factor()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def factor(self):
        node = self.unary()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            node = ("pow", node, self.factor())
        return node

    def unary(self):
        if self.peek()[0] == "op" and self.peek()[1] == "-":
            self.take()
            return ("neg", self.atom())
        return self.atom()

    def atom(self):
        kind, value, pos = self.take()
        if kind == "number":
            return ("num", float(value))
        if kind == "name":
            if value == "pi":
                return ("num", math.pi)
            if value == "t":
                if not self.allow_t:
                    self.error("'t' is not allowed here", (kind, value, pos))
                self.uses_t = True
                return ("t",)
            if value == "theta":
                if not self.allow_theta:
                    self.error("'theta' is not allowed here", (kind, value, pos))
                self.uses_theta = True
                return ("theta",)
            if value in _FUNCTIONS:
                nk, nv, npos = self.take()
                if nk != "op" or nv != "(":
                    raise ExpressionError(
                        f"expected '(' after {value!r}", self.source, npos
                    )
                arg = self.expr()
                ck, cv, cpos = self.take()
                if ck != "op" or cv != ")":
                    raise ExpressionError("expected ')'", self.source, cpos)
                return ("call", value, arg)
            self.error(f"unknown identifier {value!r}", (kind, value, pos))
        if kind == "op" and value == "(":
            node = self.expr()
            ck, cv, cpos = self.take()
            if ck != "op" or cv != ")":
                raise ExpressionError("expected ')'", self.source, cpos)
            return node
        if kind == "end":
            raise ExpressionError("unexpected end of expression", self.source, pos)
        self.error(f"unexpected token {value!r}", (kind, value, pos))


def _compile(node) -> Callable[[float, float], float]:
    head = node[0]
    if head == "num":
        v = node[1]
        return lambda t, theta: v
    if head == "t":
        return lambda t, theta: t
    if head == "theta":
        return lambda t, theta: theta
    if head == "call":
        fn = _FUNCTIONS[node[1]]
        arg = _compile(node[2])
        return lambda t, theta: fn(arg(t, theta))
    if head == "neg":
        arg = _compile(node[1])
        return lambda t, theta: -arg(t, theta)
    lhs, rhs = _compile(node[1]), _compile(node[2])
    if head == "add":
        return lambda t, theta: lhs(t, theta) + rhs(t, theta)
    if head == "sub":
        return lambda t, theta: lhs(t, theta) - rhs(t, theta)
    if head == "mul":
        return lambda t, theta: lhs(t, theta) * rhs(t, theta)
    if head == "div":
        return lambda t, theta: lhs(t, theta) / rhs(t, theta)
    if head == "pow":
        return lambda t, theta: lhs(t, theta) ** rhs(t, theta)
    raise ValueError(f"unknown node {head!r}")  # pragma: no cover


@dataclass(frozen=True)
class CoefficientExpr:
    """A parsed coefficient expression, callable as ``expr(t, theta)``."""

    source: str
    ast: tuple
    uses_theta: bool
    uses_t: bool

    def __post_init__(self):
        object.__setattr__(self, "_fn", _compile(self.ast))

    def __call__(self, t: float = 0.0, theta: float = 0.0) -> float:
        return self._fn(t, theta)


def parse_coefficient(
    source: str, allow_theta: bool, *, allow_t: bool = True
) -> CoefficientExpr:
    """Parse ``source`` into an evaluable :class:`CoefficientExpr`.

    ``allow_theta`` gates the ``theta`` variable (kernel coefficients may
    use it, pointwise coefficients may not); ``allow_t`` likewise gates
    ``t`` for expressions that must depend on ``theta`` alone, such as
    initial functions.

    Raises :class:`ExpressionError` with the offending position on syntax
    errors, unknown identifiers, or use of a forbidden variable.
    """
    if not source or not source.strip():
        raise ExpressionError("empty expression", source, 0)
    parser = _Parser(source, allow_theta, allow_t)
    ast = parser.parse()
    return CoefficientExpr(
        source=source, ast=ast, uses_theta=parser.uses_theta, uses_t=parser.uses_t
    )
