"""
Text syntax for trace polynomials.

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := "-" factor | atom ("^" nat)?
    atom   := rational | "x" nat "'"? | "Tr" "(" expr ")" | "(" expr ")"

Rationals are written p or p/q. The prime marks the involution, so x1' is x1^*.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from tracealg.errors import ExprSyntaxError
from tracealg.traceRing import TracePolynomial


@dataclass(frozen=True)
class Scalar:
    value: Fraction


@dataclass(frozen=True)
class Var:
    j: int
    starred: bool = False


@dataclass(frozen=True)
class TrNode:
    child: Ast


@dataclass(frozen=True)
class Add:
    left: Ast
    right: Ast
    negateRight: bool = False


@dataclass(frozen=True)
class Mul:
    left: Ast
    right: Ast


@dataclass(frozen=True)
class Neg:
    child: Ast


@dataclass(frozen=True)
class Pow:
    base: Ast
    exponent: int


Ast = Union[Scalar, Var, TrNode, Add, Mul, Neg, Pow]


@dataclass(frozen=True)
class Token:
    kind: str   # num, var, tr, prime, op, lparen, rparen, end
    text: str
    line: int
    column: int


TOKEN_PATTERN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<float>\d+\.\d*|\.\d+)
  | (?P<num>\d+(?:/\d+)?)
  | (?P<var>x\d+)
  | (?P<tr>Tr)
  | (?P<prime>')
  | (?P<op>[-+*^])
  | (?P<lparen>\()
  | (?P<rparen>\))
""", re.VERBOSE)


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, lineStart = 0, 1, 0
    while pos < len(text):
        m = TOKEN_PATTERN.match(text, pos)
        column = pos - lineStart + 1
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", line, column)
        kind = m.lastgroup or ""
        chunk = m.group()
        if kind == "float":
            raise ExprSyntaxError(f"float literal {chunk!r} not allowed, write p/q", line, column)
        if kind == "ws":
            newlines = chunk.count("\n")
            if newlines:
                line += newlines
                lineStart = pos + chunk.rindex("\n") + 1
        else:
            tokens.append(Token(kind, chunk, line, column))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - lineStart + 1))
    return tokens


class Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected: tuple[str, ...]) -> ExprSyntaxError:
        tok = self.current
        found = repr(tok.text) if tok.kind != "end" else "end of input"
        return ExprSyntaxError(f"unexpected {found}", tok.line, tok.column, expected)

    def expect(self, kind: str, text: str) -> Token:
        if self.current.kind != kind:
            raise self.fail((repr(text),))
        return self.advance()

    def parseAll(self) -> Ast:
        node = self.expr()
        if self.current.kind != "end":
            raise self.fail(("'+'", "'-'", "'*'", "end of input"))
        return node

    def expr(self) -> Ast:
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            negate = self.advance().text == "-"
            node = Add(node, self.term(), negate)
        return node

    def term(self) -> Ast:
        node = self.factor()
        while self.current.kind == "op" and self.current.text == "*":
            self.advance()
            node = Mul(node, self.factor())
        return node

    def factor(self) -> Ast:
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            return Neg(self.factor())
        node = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            tok = self.current
            if tok.kind != "num" or "/" in tok.text:
                raise self.fail(("natural exponent",))
            self.advance()
            node = Pow(node, int(tok.text))
        return node

    def atom(self) -> Ast:
        tok = self.current
        if tok.kind == "num":
            self.advance()
            num, _, den = tok.text.partition("/")
            if den and int(den) == 0:
                raise ExprSyntaxError("zero denominator", tok.line, tok.column)
            return Scalar(Fraction(int(num), int(den) if den else 1))
        if tok.kind == "var":
            self.advance()
            j = int(tok.text[1:])
            if j < 1:
                raise ExprSyntaxError("variable index must be positive", tok.line, tok.column)
            starred = self.current.kind == "prime"
            if starred:
                self.advance()
            return Var(j, starred)
        if tok.kind == "tr":
            self.advance()
            self.expect("lparen", "(")
            child = self.expr()
            self.expect("rparen", ")")
            return TrNode(child)
        if tok.kind == "lparen":
            self.advance()
            node = self.expr()
            self.expect("rparen", ")")
            return node
        raise self.fail(("rational", "variable", "'Tr'", "'('", "'-'"))


def parse(text: str) -> Ast:
    return Parser(text).parseAll()


def toTracePolynomial(node: Ast) -> TracePolynomial:
    if isinstance(node, Scalar):
        return TracePolynomial.const(node.value)
    if isinstance(node, Var):
        return TracePolynomial.var(node.j, node.starred)
    if isinstance(node, TrNode):
        return toTracePolynomial(node.child).trace()
    if isinstance(node, Add):
        left, right = toTracePolynomial(node.left), toTracePolynomial(node.right)
        return left - right if node.negateRight else left + right
    if isinstance(node, Mul):
        return toTracePolynomial(node.left) * toTracePolynomial(node.right)
    if isinstance(node, Neg):
        return -toTracePolynomial(node.child)
    return toTracePolynomial(node.base).power(node.exponent)


def parseTrace(text: str) -> TracePolynomial:
    return toTracePolynomial(parse(text))


def formatTrace(f: TracePolynomial) -> str:
    return str(f)
