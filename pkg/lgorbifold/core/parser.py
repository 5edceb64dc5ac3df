"""
Recursive descent parser for polynomial expressions.

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | '+' unary | power
    power  := atom ('^' INTEGER)?
    atom   := NUMBER | 'z' '(' INTEGER ',' ['-'] INTEGER ')' | IDENT | '(' expr ')'

`z(m,k)` is zeta_m^k; `/` only divides by a nonzero constant. A declared variable named
`z` is still available: the root-of-unity form needs the opening parenthesis.
"""

import re
import typing as typ
from dataclasses import dataclass
from fractions import Fraction

from lgorbifold.core.errors import ConductorMismatchError, CycZeroDivisionError, ParseError
from lgorbifold.core.poly import Poly, PolyRing

_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | op | eof
    text: str
    position: int


def tokenize(text: str) -> typ.List[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if not match:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[pos + stripped]!r}", pos + stripped, text)
        kind = match.lastgroup or "op"
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, ring: PolyRing):
        self.text = text
        self.ring = ring
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.current
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        if self.current.text != text or self.current.kind != "op":
            self.fail(f"expected '{text}'")
        return self.advance()

    def expect_integer(self) -> int:
        negative = False
        if self.current.kind == "op" and self.current.text == "-":
            self.advance()
            negative = True
        if self.current.kind != "number":
            self.fail("expected an integer")
        value = int(self.advance().text)
        return -value if negative else value

    def fail(self, message: str) -> typ.NoReturn:
        token = self.current
        found = "end of input" if token.kind == "eof" else repr(token.text)
        raise ParseError(f"{message}, found {found}", token.position, self.text)

    # -- grammar

    def parse(self) -> Poly:
        if self.current.kind == "eof":
            self.fail("empty expression")
        result = self.expr()
        if self.current.kind != "eof":
            self.fail("unexpected trailing input")
        return result

    def expr(self) -> Poly:
        result = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> Poly:
        result = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op_token = self.advance()
            rhs = self.unary()
            if op_token.text == "*":
                result = result * rhs
                continue
            if not rhs.is_constant() or rhs.is_zero():
                raise ParseError(
                    "division is only allowed by a nonzero constant", op_token.position, self.text
                )
            try:
                result = result / rhs.constant_term()
            except CycZeroDivisionError:
                raise ParseError("division by zero", op_token.position, self.text)
        return result

    def unary(self) -> Poly:
        if self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            operand = self.unary()
            return -operand if op == "-" else operand
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            if self.current.kind != "number":
                self.fail("malformed exponent: expected a non-negative integer")
            base = base ** int(self.advance().text)
        return base

    def atom(self) -> Poly:
        token = self.current
        if token.kind == "number":
            self.advance()
            return self.ring.constant(Fraction(int(token.text)))
        if token.kind == "ident":
            if token.text == "z" and self.peek().text == "(":
                return self.root_of_unity()
            if token.text not in self.ring.index:
                raise ParseError(f"unknown identifier '{token.text}'", token.position, self.text)
            self.advance()
            return self.ring.gen(token.text)
        if token.kind == "op" and token.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        self.fail("expected a number, variable, z(m,k) or '('")

    def root_of_unity(self) -> Poly:
        start = self.advance()
        self.expect("(")
        order = self.expect_integer()
        self.expect(",")
        power = self.expect_integer()
        self.expect(")")
        try:
            value = self.ring.field.root_of_unity(order, power)
        except ConductorMismatchError as e:
            raise ParseError(f"conductor mismatch: {e.message}", start.position, self.text)
        return self.ring.constant(value)


def parse(text: str, ring: PolyRing) -> Poly:
    return _Parser(text, ring).parse()
