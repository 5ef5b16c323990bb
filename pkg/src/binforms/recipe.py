"""A small expression language for covariants built from l, c, q.

Grammar (whitespace ignored)::

    expr    := term (('+' | '-') term)*
    term    := ['-'] factor (['*'] factor)*
    factor  := primary ('^' INT)*
    primary := ATOM | NUMBER | '(' expr ')' | '[' expr ']' | '(' expr ',' expr ')' '_' INDEX
    INDEX   := INT | '{' INT '}'
    NUMBER  := INT ['/' INT]

Juxtaposition is multiplication, so ``lc`` and ``[(c,c)_2]^2`` parse as
written in the classical literature.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .forms import GENERIC, Form, transvectant


class RecipeSyntaxError(ValueError):
    def __init__(self, message: str, token: str | None = None, pos: int | None = None):
        super().__init__(message)
        self.token = token
        self.pos = pos


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Scalar:
    value: Fraction


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int


@dataclass(frozen=True)
class Sum:
    terms: tuple  # (coefficient, node) pairs


@dataclass(frozen=True)
class Transvectant:
    left: object
    right: object
    index: int


Recipe = Union[Atom, Scalar, Product, Power, Sum, Transvectant]

_TOKEN = re.compile(r"\s*(?:(\d+)|([lcq])|([()\[\],_^+\-*/{}]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = text[pos:].strip()[:1] or text[pos:pos + 1]
            raise RecipeSyntaxError(f"unexpected token {bad!r} at position {pos}", bad, pos)
        num, atom, punct = m.groups()
        if num is not None:
            tokens.append(("int", int(num), m.start(1)))
        elif atom is not None:
            tokens.append(("atom", atom, m.start(2)))
        else:
            tokens.append(("punct", punct, m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value or tok[0] == "int":
            shown = "end of input" if tok[0] == "end" else repr(str(tok[1]))
            raise RecipeSyntaxError(f"expected {value!r}, got {shown} at position {tok[2]}",
                                    str(tok[1]), tok[2])
        return tok

    def fail(self, tok):
        shown = "end of input" if tok[0] == "end" else repr(str(tok[1]))
        raise RecipeSyntaxError(f"unexpected {shown} at position {tok[2]}", str(tok[1]), tok[2])

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            self.fail(self.peek())
        return node

    def expr(self):
        terms = [(Fraction(1), self.term())]
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "punct":
            sign = Fraction(1) if self.take()[1] == "+" else Fraction(-1)
            terms.append((sign, self.term()))
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        return Sum(tuple(terms))

    def _starts_factor(self, tok):
        return tok[0] in ("int", "atom") or (tok[0] == "punct" and tok[1] in ("(", "["))

    def term(self):
        neg = False
        if self.peek()[0] == "punct" and self.peek()[1] == "-":
            self.take()
            neg = True
        factors = [self.factor()]
        while True:
            tok = self.peek()
            if tok[0] == "punct" and tok[1] == "*":
                self.take()
                factors.append(self.factor())
            elif self._starts_factor(tok):
                factors.append(self.factor())
            else:
                break
        node = factors[0] if len(factors) == 1 else Product(tuple(factors))
        if neg:
            node = Sum(((Fraction(-1), node),))
        return node

    def factor(self):
        node = self.primary()
        while self.peek()[0] == "punct" and self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                self.fail(tok)
            node = Power(node, tok[1])
        return node

    def primary(self):
        tok = self.take()
        if tok[0] == "atom":
            return Atom(tok[1])
        if tok[0] == "int":
            value = Fraction(tok[1])
            if self.peek()[0] == "punct" and self.peek()[1] == "/":
                self.take()
                den = self.take()
                if den[0] != "int" or den[1] == 0:
                    self.fail(den)
                value = Fraction(tok[1], den[1])
            return Scalar(value)
        if tok[0] == "punct" and tok[1] == "[":
            node = self.expr()
            self.expect("]")
            return node
        if tok[0] == "punct" and tok[1] == "(":
            first = self.expr()
            nxt = self.take()
            if nxt[0] == "punct" and nxt[1] == ")":
                return first
            if not (nxt[0] == "punct" and nxt[1] == ","):
                self.fail(nxt)
            second = self.expr()
            self.expect(")")
            self.expect("_")
            idx = self.take()
            if idx[0] == "punct" and idx[1] == "{":
                idx = self.take()
                if idx[0] != "int":
                    self.fail(idx)
                self.expect("}")
            elif idx[0] != "int":
                self.fail(idx)
            return Transvectant(first, second, idx[1])
        self.fail(tok)


def parse_recipe(text: str) -> Recipe:
    return _Parser(text).parse()


def evaluate(node: Recipe, atoms: dict[str, Form] | None = None) -> Form:
    atoms = atoms or GENERIC.atoms()
    if isinstance(node, Atom):
        return atoms[node.name]
    if isinstance(node, Scalar):
        return Form.constant(node.value)
    if isinstance(node, Product):
        out = evaluate(node.factors[0], atoms)
        for f in node.factors[1:]:
            out = out * evaluate(f, atoms)
        return out
    if isinstance(node, Power):
        return evaluate(node.base, atoms) ** node.exponent
    if isinstance(node, Sum):
        out = None
        for coeff, sub in node.terms:
            term = evaluate(sub, atoms).scale(coeff)
            out = term if out is None else out + term
        return out
    if isinstance(node, Transvectant):
        return transvectant(evaluate(node.left, atoms), evaluate(node.right, atoms), node.index)
    raise TypeError(f"not a recipe node: {node!r}")


@lru_cache(maxsize=256)
def evaluate_recipe(text: str) -> Form:
    """Parse and evaluate over the generic forms l, c, q."""
    return evaluate(parse_recipe(text))
