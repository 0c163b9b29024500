"""Canonical text and JSON forms of polynomials, and a small expression parser.

Text form lists terms in decreasing grevlex order with explicit exponents,
e.g. ``3/2*x^2*y - 1``.  The parser accepts that form and, more generally,
expressions built from rationals, identifiers, ``+ - * / ^ **`` and
parentheses (division only by constants).
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ParseError
from .order import DEFAULT_ORDER, TermOrder
from .polynomial import Polynomial, merge_variables


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_polynomial(p: Polynomial, order: TermOrder = DEFAULT_ORDER) -> str:
    if p.is_zero():
        return "0"
    names = p.variables
    parts = []
    for e, c in p.sorted_terms(order):
        mono = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(names, e) if k)
        mag = abs(c)
        if not mono:
            body = _format_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_format_coeff(mag)}*{mono}"
        parts.append((c < 0, body))
    neg, body = parts[0]
    out = ("-" if neg else "") + body
    for neg, body in parts[1:]:
        out += (" - " if neg else " + ") + body
    return out


def polynomial_to_json(p: Polynomial, order: TermOrder = DEFAULT_ORDER) -> dict:
    return {
        "variables": list(p.variables),
        "terms": [[list(e), _format_coeff(c)] for e, c in p.sorted_terms(order)],
    }


def polynomial_from_json(data: Mapping | str) -> Polynomial:
    if isinstance(data, str):
        data = json.loads(data)
    variables = tuple(data["variables"])
    terms = {tuple(e): Fraction(c) for e, c in data["terms"]}
    return Polynomial(terms, variables)


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<op>\*\*|[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError("unexpected character", text, pos)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, namespace):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.variables = tuple(variables) if variables is not None else None
        self.namespace = dict(namespace or {})

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        tok = self.take()
        if tok[1] != value:
            raise ParseError(f"expected {value!r}", self.text, tok[2])

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", self.text, tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                if not _is_const(rhs):
                    raise ParseError("division by a non-constant", self.text, pos)
                c = _const(rhs)
                if c == 0:
                    raise ParseError("division by zero", self.text, pos)
                value = value / c
        return value

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            kind, val, pos = self.take()
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer", self.text, pos)
            return base ** int(val)
        return base

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Fraction(int(val))
        if kind == "name":
            if val in self.namespace:
                return self.namespace[val]
            if self.variables is not None:
                if val not in self.variables:
                    raise ParseError(f"unknown variable {val!r}", self.text, pos)
                return Polynomial.variable(val, self.variables)
            return Polynomial.variable(val)
        if val == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {val or 'end of input'!r}", self.text, pos)


def _is_const(v):
    return isinstance(v, Fraction) or v.is_constant()


def _const(v):
    return v if isinstance(v, Fraction) else v.constant_value()


def parse_polynomial(text: str, variables: Sequence[str] | None = None,
                     namespace: Mapping[str, Polynomial] | None = None) -> Polynomial:
    """Parse ``text`` into a :class:`Polynomial`.

    With ``variables`` given, the result lives in exactly that context and
    unknown identifiers are an error.  ``namespace`` binds identifiers to
    polynomials (used to write generators in terms of invariants).
    """
    value = _Parser(text, variables, namespace).parse()
    if isinstance(value, Fraction):
        value = Polynomial.constant(value, variables or ())
    if variables is not None:
        value = value.with_variables(merge_variables(variables, value.variables))
    elif namespace is None:
        value = value.drop_unused() if value.used_variables() else value
    return value
