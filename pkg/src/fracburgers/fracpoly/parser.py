"""Recursive-descent parser for the expression mini-language.

Grammar (whitespace ignored)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | '+' unary | factor
    factor := base ('^' exponent)?
    base   := number | x | t | X | T | func '(' expr ')' | '(' expr ')'
    exponent := ['-'] number | '(' ['-'] number ')'

Columns in error messages are 0-based character offsets.
"""

from __future__ import annotations

import re

from .. import specfun
from ..errors import NotPowerSumError, ParseError, UnknownIdentifierError
from . import expr as E
from .powersum import GenPowerSum

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)
_FUNCS = set(E.FUNCTIONS) | {"gamma"}
_VARS = {"x", "t", "X", "T"}


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            col = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col]!r}", col)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, col = self.tok
        if val != value or kind != "op":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"expected {value!r}, found {found}", col)
        self.take()

    def parse(self) -> E.Expr:
        node = self.expr()
        kind, val, col = self.tok
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", col)
        return node

    def expr(self):
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = E.add(node, rhs) if op == "+" else E.sub(node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            op = self.take()[1]
            rhs = self.unary()
            node = E.mul(node, rhs) if op == "*" else E.div(node, rhs)
        return node

    def unary(self):
        if self.tok[0] == "op" and self.tok[1] == "-":
            self.take()
            return E.neg(self.unary())
        if self.tok[0] == "op" and self.tok[1] == "+":
            self.take()
            return self.unary()
        return self.factor()

    def factor(self):
        base = self.base()
        if self.tok[0] == "op" and self.tok[1] == "^":
            self.take()
            return E.power(base, self.exponent())
        return base

    def exponent(self) -> float:
        paren = False
        if self.tok[0] == "op" and self.tok[1] == "(":
            paren = True
            self.take()
        sign = 1.0
        if self.tok[0] == "op" and self.tok[1] in "+-":
            sign = -1.0 if self.take()[1] == "-" else 1.0
        kind, val, col = self.tok
        if kind != "num":
            found = "end of input" if kind == "end" else repr(val)
            raise ParseError(f"exponent must be a real literal, found {found}", col)
        self.take()
        if paren:
            self.expect(")")
        return sign * float(val)

    def base(self):
        kind, val, col = self.tok
        if kind == "num":
            self.take()
            return E.Const(float(val))
        if kind == "name":
            self.take()
            if val in _VARS:
                return E.Var(val)
            if val in _FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                if val == "gamma":
                    if not isinstance(arg, E.Const):
                        raise ParseError("gamma() needs a constant argument", col)
                    return E.Const(specfun.gamma_any(arg.value))
                return E.func(val, arg)
            raise UnknownIdentifierError(f"unknown identifier {val!r}", col)
        if kind == "op" and val == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(val)
        raise ParseError(f"unexpected {found}", col)


def parse_tree(text: str) -> E.Expr:
    """Parse into an expression tree without classifying the result."""
    return _Parser(text).parse()


def tree_to_powersum(node: E.Expr, var_map: dict) -> GenPowerSum:
    """Convert a tree to a power sum; ``var_map`` maps names to monomials."""
    if isinstance(node, E.Const):
        return GenPowerSum.const(node.value)
    if isinstance(node, E.Var):
        if node.name not in var_map:
            raise NotPowerSumError(f"variable {node.name} has no power-sum meaning here")
        return var_map[node.name]
    if isinstance(node, E.Neg):
        return -tree_to_powersum(node.arg, var_map)
    if isinstance(node, (E.Add, E.Sub, E.Mul, E.Div)):
        a = tree_to_powersum(node.left, var_map)
        b = tree_to_powersum(node.right, var_map)
        if isinstance(node, E.Add):
            return a + b
        if isinstance(node, E.Sub):
            return a - b
        if isinstance(node, E.Mul):
            return a * b
        if len(b.terms) != 1:
            raise NotPowerSumError("division by a sum is not a power sum")
        return a / b
    if isinstance(node, E.Pow):
        b = tree_to_powersum(node.base, var_map)
        n = node.exponent
        if len(b.terms) == 1:
            c, px, pt = b.terms[0]
            if c < 0 and not n.is_integer():
                raise NotPowerSumError("non-integer power of a negative coefficient")
            return GenPowerSum.monomial(c**n, px * n, pt * n)
        if n.is_integer() and n >= 0:
            out = GenPowerSum.const(1.0)
            for _ in range(int(n)):
                out = out * b
            return out
        raise NotPowerSumError("non-integer power of a sum is not a power sum")
    raise NotPowerSumError(f"{node} is not a power sum")


_RAW_VARS = {"x": GenPowerSum.monomial(1.0, 1.0, 0.0), "t": GenPowerSum.monomial(1.0, 0.0, 1.0)}


def parse_expr(text: str):
    """Parse ``text``; return a GenPowerSum over (x, t) or a canonical tree over (X, T).

    >>> str(parse_expr("x^2 + 3*t"))
    '3*t + x^2'
    """
    node = parse_tree(text)
    names = node.variables()
    raw = names & {"x", "t"}
    canon = names & {"X", "T"}
    if raw and canon:
        raise ParseError("cannot mix raw (x, t) and canonical (X, T) variables", 0)
    if canon:
        return node
    return tree_to_powersum(node, _RAW_VARS)
