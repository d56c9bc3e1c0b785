"""Text syntax for coefficients and operators.

Coefficients::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := ('+' | '-') unary | power
    power := atom ('^' unary)?
    atom  := number | 'x' | 'y' | func '(' expr ')' | '(' expr ')'
    func  := 'sin' | 'cos' | 'exp' | 'log' | 'sqrt'

Operators are sums of terms ``coefficient * Dx^i * Dy^j``; the coefficient
part must come before every ``Dx``/``Dy`` factor.  Operator files hold one
operator per line, ``#`` starts a comment and blank lines are skipped.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import sympy as sp
from sympy.printing.str import StrPrinter

from . import expr as ex
from .lpdo import LPDO

FUNCTIONS = {
    "sin": sp.sin,
    "cos": sp.cos,
    "exp": sp.exp,
    "log": sp.log,
    "sqrt": lambda e: sp.Pow(e, sp.Rational(1, 2)),
}
DERIVATIONS = ("Dx", "Dy")


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ValueError):
    def __init__(self, message, span, expected, source=""):
        self.message = message
        self.span = span
        self.expected = list(expected)
        self.source = source
        super().__init__(self._render())

    def _render(self):
        where = f"at bytes {self.span.start}..{self.span.end}"
        return f"{self.message} {where} (expected {', '.join(self.expected)})"

    def shifted(self, offset, source):
        return type(self)(self.message, SourceSpan(self.span.start + offset, self.span.end + offset),
                          self.expected, source)


class NonNormalForm(ParseError):
    """A derivation appears to the left of a coefficient factor."""


@dataclass
class _Token:
    kind: str          # "num", "name", "op", "end"
    text: str
    start: int         # character offsets; converted to bytes on error
    end: int


_TOKEN = re.compile(r"(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\u2212])")


def _tokenize(src):
    tokens, pos = [], 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos == len(src):
            last = len(src.rstrip())
            tokens.append(_Token("end", "", last, last))
            return tokens
        m = _TOKEN.match(src, pos)
        if m is None:
            raise _error(src, f"unexpected character {src[pos]!r}", pos, pos + 1,
                         ["number", "name", "operator"])
        text = "-" if m.group() == "\u2212" else m.group()
        tokens.append(_Token(m.lastgroup, text, m.start(), m.end()))
        pos = m.end()


def _byte_offset(src, i):
    return len(src[:i].encode("utf-8"))


def _error(src, message, start, end, expected, cls=ParseError):
    return cls(message, SourceSpan(_byte_offset(src, start), _byte_offset(src, max(end, start))),
               expected, src)


@dataclass
class _Parser:
    src: str
    tokens: list = field(default_factory=list)
    pos: int = 0

    def __post_init__(self):
        self.tokens = _tokenize(self.src)

    @property
    def tok(self):
        return self.tokens[self.pos]

    def advance(self):
        t = self.tokens[self.pos]
        self.pos += 1
        return t

    def at(self, text):
        return self.tok.kind in ("op", "name") and self.tok.text == text

    def fail(self, message, expected, cls=ParseError, tok=None):
        t = tok or self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        return _error(self.src, f"{message}, found {found}", t.start, t.end, expected, cls)

    def expect(self, text):
        if not self.at(text):
            raise self.fail(f"expected {text!r}", [repr(text)])
        return self.advance()

    # coefficients

    def expr(self):
        e = self.term()
        while self.at("+") or self.at("-"):
            op = self.advance().text
            rhs = self.term()
            e = e + rhs if op == "+" else e - rhs
        return e

    def term(self):
        e = self.unary()
        while self.at("*") or self.at("/"):
            op = self.advance().text
            rhs = self.unary()
            e = e * rhs if op == "*" else e / rhs
        return e

    def unary(self):
        if self.at("-"):
            self.advance()
            return -self.unary()
        if self.at("+"):
            self.advance()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.at("^"):
            self.advance()
            return sp.Pow(base, self.unary())
        return base

    def atom(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return sp.Integer(int(t.text))
        if t.kind == "name":
            if t.text in ex.VARIABLES:
                self.advance()
                return ex.VARIABLES[t.text]
            if t.text in FUNCTIONS:
                self.advance()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return FUNCTIONS[t.text](arg)
            if t.text in DERIVATIONS:
                raise self.fail("derivation not allowed inside a coefficient",
                                ["number", "x", "y", "function", "'('"])
            raise self.fail("unknown name", ["x", "y", *FUNCTIONS])
        if self.at("("):
            self.advance()
            e = self.expr()
            self.expect(")")
            return e
        raise self.fail("expected an operand", ["number", "x", "y", "function", "'('"])

    # operators

    def operator(self):
        terms = {}

        def accumulate(sign, coeff, bidegree):
            terms[bidegree] = terms.get(bidegree, 0) + sign * coeff

        sign = 1
        if self.at("-") or self.at("+"):
            sign = -1 if self.advance().text == "-" else 1
        accumulate(sign, *self.operator_term())
        while self.at("+") or self.at("-"):
            sign = -1 if self.advance().text == "-" else 1
            accumulate(sign, *self.operator_term())
        return LPDO(terms)

    def derivation(self):
        name = self.advance().text
        power = 1
        if self.at("^"):
            self.advance()
            if self.tok.kind != "num":
                raise self.fail("derivation exponent must be a non-negative integer", ["integer"])
            power = int(self.advance().text)
        return (power, 0) if name == "Dx" else (0, power)

    def operator_term(self):
        coeff, i, j = sp.S.One, 0, 0
        seen_derivation = False
        op = "*"
        while True:
            t = self.tok
            if t.kind == "name" and t.text in DERIVATIONS:
                if op == "/":
                    raise self.fail("cannot divide by a derivation", ["coefficient factor"])
                di, dj = self.derivation()
                i, j = i + di, j + dj
                seen_derivation = True
            else:
                if seen_derivation and t.kind != "end":
                    raise self.fail("coefficient must precede Dx/Dy in a term",
                                    ["Dx", "Dy"], cls=NonNormalForm)
                factor = self.unary()
                coeff = coeff * factor if op == "*" else coeff / factor
            if self.at("*") or self.at("/"):
                op = self.advance().text
            else:
                return coeff, (i, j)


def _finish(p, value):
    if p.tok.kind != "end":
        raise p.fail("unexpected trailing input", ["'+'", "'-'", "'*'", "'/'", "end of input"])
    return value


def parse_expr(src):
    """Parse a coefficient expression; the result is canonical."""
    p = _Parser(src)
    e = p.expr()
    _finish(p, e)
    try:
        return ex.canonicalize(e)
    except ZeroDivisionError:
        raise _error(p.src, "division by zero", 0, len(p.src), ["nonzero denominator"]) from None


def parse_operator(src):
    p = _Parser(src)
    try:
        op = p.operator()
    except ZeroDivisionError:
        raise _error(p.src, "division by zero", 0, len(p.src), ["nonzero denominator"]) from None
    return _finish(p, op)


def parse_operator_file(text):
    """Parse every operator in ``text``; returns ``[(line_number, LPDO), ...]``."""
    result = []
    offset = 0
    for number, line in enumerate(text.splitlines(keepends=True), start=1):
        body = line.split("#", 1)[0]
        if body.strip():
            try:
                result.append((number, parse_operator(body)))
            except ParseError as err:
                raise err.shifted(offset, text) from None
        offset += len(line.encode("utf-8"))
    return result


# -- printing ---------------------------------------------------------------

class _CoefficientPrinter(StrPrinter):
    def _print_Exp1(self, e):
        return "exp(1)"

    def _print_Pow(self, e, rational=False):
        return super()._print_Pow(e, rational).replace("**", "^")

    def _print_Mul(self, e):
        return super()._print_Mul(e).replace("**", "^")


_printer = _CoefficientPrinter({"order": "grlex"})


def print_expr(e):
    return _printer.doprint(sp.sympify(e)).replace("**", "^")


def _monomial(i, j):
    parts = []
    for name, k in (("Dx", i), ("Dy", j)):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts)


def _term(c, i, j, grouped):
    mono = _monomial(i, j)
    if not mono:
        s = print_expr(c)
        return f"({s})" if grouped and c.is_Add else s
    if c == 1:
        return mono
    s = print_expr(c)
    if c.is_Add:
        s = f"({s})"
    return f"{s}*{mono}"


def print_operator(op):
    """Deterministic text form, terms in graded-lex descending order."""
    pieces = []
    for (i, j), c in op.items():
        negative = c.could_extract_minus_sign()
        body = _term(-c if negative else c, i, j, grouped=bool(pieces) or negative)
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(pieces) if pieces else "0"
