"""Tokenizer and recursive-descent parser for polynomial expressions.

    expr    ::= ['+'|'-'] term (('+'|'-') term)*
    term    ::= power ('*' power)*
    power   ::= primary ('^' NAT)?
    primary ::= RATIONAL | IDENT | FUNC '(' [NAT] IDENT ')' | '(' expr ')'
    RATIONAL ::= NAT ('/' NAT)?

Function calls are only accepted when the caller passes ``functions``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence


class ExprError(ValueError):
    def __init__(self, kind: str, message: str, col: int):
        super().__init__(message)
        self.kind = kind
        self.col = col


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<bad>\d+\.\d*|\d*\.\d+|\d+[eE][+-]?\d+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    col: int


def tokenize(text: str, offset: int = 0) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError("syntax", f"unexpected character {text[pos]!r}", offset + pos + 1)
        kind = m.lastgroup
        if kind == "bad":
            raise ExprError("non-rational-literal", f"non-rational literal {m.group()!r}; write p/q",
                            offset + pos + 1)
        if kind != "ws":
            out.append(Token(kind, m.group(), offset + pos + 1))
        pos = m.end()
    out.append(Token("end", "", offset + len(text) + 1))
    return out


# AST

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    name: str
    col: int


@dataclass(frozen=True)
class Call:
    func: str
    freq: int
    arg: str
    col: int


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Mul:
    factors: tuple


@dataclass(frozen=True)
class Add:
    terms: tuple  # of (sign, node)


class _Parser:
    def __init__(self, tokens: list[Token], functions: Sequence[str]):
        self.toks = tokens
        self.i = 0
        self.functions = set(functions)

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def take(self, text: str | None = None, kind: str | None = None) -> Token:
        t = self.tok
        if (text is not None and t.text != text) or (kind is not None and t.kind != kind):
            want = repr(text) if text else kind
            got = repr(t.text) if t.text else "end of expression"
            raise ExprError("syntax", f"expected {want}, found {got}", t.col)
        self.i += 1
        return t

    def expr(self):
        terms = []
        sign = 1
        if self.tok.text in "+-" and self.tok.kind == "op":
            sign = -1 if self.take().text == "-" else 1
        terms.append((sign, self.term()))
        while self.tok.kind == "op" and self.tok.text in "+-":
            sign = -1 if self.take().text == "-" else 1
            terms.append((sign, self.term()))
        return terms[0][1] if len(terms) == 1 and terms[0][0] == 1 else Add(tuple(terms))

    def term(self):
        factors = [self.power()]
        while self.tok.text == "*":
            self.take()
            factors.append(self.power())
        if self.tok.kind in ("ident", "num") or self.tok.text == "(":
            raise ExprError("syntax", "implicit multiplication; use '*'", self.tok.col)
        return factors[0] if len(factors) == 1 else Mul(tuple(factors))

    def power(self):
        base = self.primary()
        if self.tok.text == "^":
            self.take()
            exp = self.take(kind="num")
            return Pow(base, int(exp.text))
        return base

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.take()
            num = int(t.text)
            if self.tok.text == "/":
                self.take()
                den = self.take(kind="num")
                if int(den.text) == 0:
                    raise ExprError("non-rational-literal", "zero denominator", den.col)
                return Num(Fraction(num, int(den.text)))
            return Num(Fraction(num))
        if t.kind == "ident":
            self.take()
            if t.text in self.functions:
                self.take("(")
                freq = 1
                if self.tok.kind == "num":
                    freq = int(self.take().text)
                    if freq < 1:
                        raise ExprError("syntax", "frequency must be a positive integer", t.col)
                arg = self.take(kind="ident")
                self.take(")")
                return Call(t.text, freq, arg.text, t.col)
            if self.tok.text == "(":
                raise ExprError("syntax", f"unknown function {t.text!r}", t.col)
            return Var(t.text, t.col)
        if t.text == "(":
            self.take()
            node = self.expr()
            self.take(")")
            return node
        got = repr(t.text) if t.text else "end of expression"
        raise ExprError("syntax", f"unexpected {got}", t.col)


def parse_expr(text: str, offset: int = 0, functions: Sequence[str] = ()):
    p = _Parser(tokenize(text, offset), functions)
    node = p.expr()
    if p.tok.kind != "end":
        raise ExprError("syntax", f"unexpected {p.tok.text!r}", p.tok.col)
    return node


def variables(node) -> list[Var]:
    if isinstance(node, Var):
        return [node]
    if isinstance(node, Pow):
        return variables(node.base)
    if isinstance(node, Mul):
        return [v for f in node.factors for v in variables(f)]
    if isinstance(node, Add):
        return [v for _, t in node.terms for v in variables(t)]
    return []


def evaluate(node, *, const: Callable, var: Callable, call: Callable | None = None):
    """Fold an AST into any ring given constructors for leaves."""
    if isinstance(node, Num):
        return const(node.value)
    if isinstance(node, Var):
        return var(node)
    if isinstance(node, Call):
        return call(node)
    if isinstance(node, Pow):
        base = evaluate(node.base, const=const, var=var, call=call)
        out = const(Fraction(1))
        for _ in range(node.exp):
            out = out * base
        return out
    if isinstance(node, Mul):
        out = evaluate(node.factors[0], const=const, var=var, call=call)
        for f in node.factors[1:]:
            out = out * evaluate(f, const=const, var=var, call=call)
        return out
    if isinstance(node, Add):
        out = const(Fraction(0))
        for sign, t in node.terms:
            v = evaluate(t, const=const, var=var, call=call)
            out = out + v if sign > 0 else out - v
        return out
    raise TypeError(node)
