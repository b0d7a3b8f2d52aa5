"""Expression language: tokenizer, parser, AST, and the canonical printer.

Grammar (E1 is the reserved symbol for e^t):

    expr     := term (('+' | '-') term)*
    term     := factor ('*' factor)*
    factor   := atom ['^' exponent]
    atom     := NUMBER ['/' NUMBER] | IDENT | '(' expr ')' | '-' factor
    exponent := NUMBER | '-' NUMBER        # negative only when the base is E1

print_polynomial emits canonical text (global generator order inside each
monomial, terms sorted by a fixed monomial order, coefficients in lowest
terms) and parse is its left inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple, Union

from .algebra import Chart, GradedPolynomial
from .errors import ExprSyntaxError, UnknownIdentifier

EXP_SYMBOL = "E1"


# -- AST ----------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Node"


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Sub:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


Node = Union[Num, Var, Neg, Add, Sub, Mul, Pow]


# -- tokenizer ----------------------------------------------------------------

Token = Tuple[str, str, int, int]  # (type, text, line, column)

_PUNCT = {"+", "-", "*", "^", "(", ")", "/"}


def _tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append((ch, ch, line, col))
            col += 1
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("number", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", line, col)
    tokens.append(("end", "", line, col))
    return tokens


# -- parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok[0] != kind:
            raise ExprSyntaxError(
                f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2], tok[3]
            )
        return self.next()

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprSyntaxError(f"unexpected trailing {tok[1]!r}", tok[2], tok[3])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.next()
            rhs = self.term()
            node = Add(node, rhs) if op[0] == "+" else Sub(node, rhs)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[0] == "*":
            self.next()
            node = Mul(node, self.factor())
        return node

    def factor(self) -> Node:
        base = self.atom()
        if self.peek()[0] != "^":
            return base
        caret = self.next()
        negative = False
        if self.peek()[0] == "-":
            if not isinstance(base, Var) or base.name != EXP_SYMBOL:
                tok = self.peek()
                raise ExprSyntaxError(
                    f"negative powers are only allowed for {EXP_SYMBOL}",
                    tok[2],
                    tok[3],
                )
            self.next()
            negative = True
        num = self.expect("number")
        exponent = int(num[1])
        if negative:
            exponent = -exponent
        del caret
        return Pow(base, exponent)

    def atom(self) -> Node:
        tok = self.peek()
        if tok[0] == "-":
            self.next()
            return Neg(self.factor())
        if tok[0] == "number":
            self.next()
            if self.peek()[0] == "/":
                self.next()
                denom = self.expect("number")
                if int(denom[1]) == 0:
                    raise ExprSyntaxError("zero denominator", denom[2], denom[3])
                return Num(Fraction(int(tok[1]), int(denom[1])))
            return Num(Fraction(int(tok[1])))
        if tok[0] == "ident":
            self.next()
            return Var(tok[1])
        if tok[0] == "(":
            self.next()
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(
            f"expected a value, found {tok[1] or 'end of input'!r}", tok[2], tok[3]
        )


def parse_expression(text: str) -> Node:
    """Parse to an AST, or raise a position-annotated ExprSyntaxError."""
    return _Parser(_tokenize(text)).parse()


def to_polynomial(node: Node, chart: Chart) -> GradedPolynomial:
    """Evaluate an AST over the chart generators (and E1 for e^t)."""
    if isinstance(node, Num):
        return chart.constant(node.value)
    if isinstance(node, Var):
        if node.name == EXP_SYMBOL:
            return chart.exp_t(1)
        if node.name in chart.names:
            return chart.var(node.name)
        raise UnknownIdentifier(f"unknown identifier {node.name!r}")
    if isinstance(node, Neg):
        return -to_polynomial(node.operand, chart)
    if isinstance(node, Add):
        return to_polynomial(node.left, chart) + to_polynomial(node.right, chart)
    if isinstance(node, Sub):
        return to_polynomial(node.left, chart) - to_polynomial(node.right, chart)
    if isinstance(node, Mul):
        return to_polynomial(node.left, chart) * to_polynomial(node.right, chart)
    if isinstance(node, Pow):
        if isinstance(node.base, Var) and node.base.name == EXP_SYMBOL:
            return chart.exp_t(node.exponent)
        return to_polynomial(node.base, chart) ** node.exponent
    raise TypeError(f"not an expression node: {node!r}")


def parse_polynomial(text: str, chart: Chart) -> GradedPolynomial:
    return to_polynomial(parse_expression(text), chart)


# -- canonical printer ----------------------------------------------------


def _monomial_text(chart: Chart, key) -> str:
    exps, k = key
    factors = []
    for i, e in enumerate(exps):
        if e == 0:
            continue
        name = chart.names[i]
        factors.append(name if e == 1 else f"{name}^{e}")
    if k != 0:
        factors.append(EXP_SYMBOL if k == 1 else f"{EXP_SYMBOL}^{k}")
    return "*".join(factors)


def _coeff_text(coeff: Fraction) -> str:
    return str(coeff)  # Fraction prints in lowest terms, "3/2" or "3"


def print_polynomial(p: GradedPolynomial) -> str:
    """Deterministic canonical form; parse_polynomial is its inverse."""
    if p.is_zero():
        return "0"
    items = sorted(p.terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))
    pieces = []
    for key, coeff in items:
        mono = _monomial_text(p.chart, key)
        mag = abs(coeff)
        if mono:
            body = mono if mag == 1 else f"{_coeff_text(mag)}*{mono}"
        else:
            body = _coeff_text(mag)
        pieces.append((coeff < 0, body))
    out = []
    for i, (negative, body) in enumerate(pieces):
        if i == 0:
            out.append(("-" if negative else "") + body)
        else:
            out.append((" - " if negative else " + ") + body)
    return "".join(out)
