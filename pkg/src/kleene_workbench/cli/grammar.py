"""Parser for the rational-expression syntax of the command line.

::

    sum     := prod ('+' prod)*
    prod    := scaled ('.' scaled)*
    scaled  := SCALAR '@' scaled | postfix
    postfix := atom '*'*
    atom    := '0' | 'e' | 'eps' | LETTER | '(' sum ')'

``+`` binds loosest and postfix ``*`` tightest, so ``2@a*`` is ``2@(a*)``.
Scalars are digit strings or ``inf``, read by the semiring instance.
"""

from __future__ import annotations

import dataclasses
import re
from typing import TYPE_CHECKING

from kleene_workbench import exceptions, semiring
from kleene_workbench.automata import Letter, One, Prod, RationalExpr, Scale, Star, Sum, Zero
from kleene_workbench.series import UnknownLetterError

if TYPE_CHECKING:
    from kleene_workbench import ids
    from kleene_workbench.series import Alphabet

TOKEN_PATTERN = re.compile(r"\s*(?:(?P<number>[0-9]+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<symbol>[+.*@()]))")
ONE_WORDS = frozenset({"e", "eps"})
INF_WORD = "inf"


class ExpressionSyntaxError(exceptions.ParseError):
    """Malformed expression."""

    def __init__(self, *, text: str, position: int, reason: str) -> None:
        self.position = position
        super().__init__(f"{reason} at position {position} in {text!r}")


@dataclasses.dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    position = 0
    while position < len(text):
        if not text[position:].strip():
            break
        match = TOKEN_PATTERN.match(text, position)
        if match is None:
            start = len(text) - len(text[position:].lstrip())
            raise ExpressionSyntaxError(text=text, position=start, reason=f"Unexpected character {text[start]!r}")
        kind = match.lastgroup or ""
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    return tokens


class _Parser:
    def __init__(self, text: str, instance: ids.SemiringId, alphabet: Alphabet) -> None:
        self.text = text
        self.instance = instance
        self.alphabet = alphabet
        self.tokens = tokenize(text)
        self.index = 0

    def peek(self, offset: int = 0) -> Token | None:
        index = self.index + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def error(self, reason: str) -> ExpressionSyntaxError:
        token = self.peek()
        position = len(self.text) if token is None else token.position
        return ExpressionSyntaxError(text=self.text, position=position, reason=reason)

    def accept(self, symbol: str) -> bool:
        token = self.peek()
        if token is not None and token.kind == "symbol" and token.text == symbol:
            self.index += 1
            return True
        return False

    def parse(self) -> RationalExpr:
        if not self.tokens:
            raise self.error("Empty expression")
        expr = self.sum()
        if self.peek() is not None:
            raise self.error("Unexpected token")
        return expr

    def sum(self) -> RationalExpr:
        expr = self.prod()
        while self.accept("+"):
            expr = Sum(expr, self.prod())
        return expr

    def prod(self) -> RationalExpr:
        expr = self.scaled()
        while self.accept("."):
            expr = Prod(expr, self.scaled())
        return expr

    def is_scalar_prefix(self) -> bool:
        token, following = self.peek(), self.peek(1)
        return (
            token is not None
            and (token.kind == "number" or token.text == INF_WORD)
            and following is not None
            and following.text == "@"
        )

    def scaled(self) -> RationalExpr:
        if self.is_scalar_prefix():
            token = self.tokens[self.index]
            self.index += 2
            k = semiring.parse_value(self.instance, token.text)
            return Scale(k, self.scaled())
        return self.postfix()

    def postfix(self) -> RationalExpr:
        expr = self.atom()
        while self.accept("*"):
            expr = Star(expr)
        return expr

    def atom(self) -> RationalExpr:
        token = self.peek()
        if token is None:
            raise self.error("Unexpected end of expression")
        if self.accept("("):
            expr = self.sum()
            if not self.accept(")"):
                raise self.error("Expected ')'")
            return expr
        match token.kind:
            case "number" if token.text == "0":
                self.index += 1
                return Zero()
            case "name" if token.text in ONE_WORDS:
                self.index += 1
                return One()
            case "name" if token.text != INF_WORD:
                if token.text not in self.alphabet:
                    raise UnknownLetterError(letter=token.text, alphabet=self.alphabet)
                self.index += 1
                return Letter(token.text)
            case "number" | "name":
                raise self.error(f"Scalar {token.text!r} must be followed by '@'")
            case _:
                raise self.error(f"Unexpected {token.text!r}")


def parse_expr(text: str, instance: ids.SemiringId, alphabet: Alphabet) -> RationalExpr:
    """Parse ``text`` into an expression over ``alphabet``.

    Raises:
        ExpressionSyntaxError: If the text does not follow the grammar.
        UnknownLetterError: If a letter is not in the alphabet.
        InvalidScalarError: If a scalar is not in the instance's carrier.
    """
    return _Parser(text, instance, alphabet).parse()
