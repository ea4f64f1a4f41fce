"""Text syntax for expressions and differential forms.

Expressions::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | base ('^' exponent)?
    base   := number | ident | func '(' expr ')' | '(' expr ')'
    exponent := '-'? number | '(' '-'? number ('/' number)? ')'

``func`` is one of sin, cos, exp, ln, sqrt.  Fractional exponents need
parentheses, so ``p^2/2`` means ``(p^2)/2``.

Forms::

    form  := sterm (('+' | '-') sterm)*
    sterm := (coefficient '*')? dNAME ('^' dNAME)*

where ``dNAME`` is the differential of chart coordinate ``NAME``.
"""

from __future__ import annotations

import difflib
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from pfaffian.expr import (
    NAMED_CONSTANTS, ONE, Expr, add, const, cos, exp, ln, mul, power, sin, sqrt, sym,
)
from pfaffian.forms import Chart, DiffForm

__all__ = ["ParseError", "parse_expression", "parse_form", "parse_chart", "parse_assignment"]

FUNCTIONS = {"sin": sin, "cos": cos, "exp": exp, "ln": ln, "sqrt": sqrt}

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, column: int, text: str = ""):
        self.message = message
        self.column = column
        self.text = text
        super().__init__(f"{message} (column {column})")

    def pointer(self) -> str:
        """The input line with a caret under the offending column."""
        return f"{self.text}\n{' ' * (self.column - 1)}^"


@dataclass(frozen=True)
class _Tok:
    kind: str       # "num", "id", "op", "diff", "end"
    text: str
    col: int        # 1-based
    index: int = -1  # chart index for "diff"


def _tokenize(text: str, diffs: dict[str, int] | None = None) -> list[_Tok]:
    out = []
    pos = 0
    text_len = len(text)
    while pos < text_len:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[col - 1]!r}", col, text)
        kind = m.lastgroup
        value = m.group(kind)
        col = m.start(kind) + 1
        if kind == "id" and diffs is not None and value in diffs:
            out.append(_Tok("diff", value, col, diffs[value]))
        else:
            out.append(_Tok(kind, value, col))
        pos = m.end()
    out.append(_Tok("end", "", text_len + 1))
    return out


class _Parser:
    def __init__(self, text: str, allowed: frozenset[str] | None, diffs: dict[str, int] | None = None):
        self.text = text
        self.allowed = allowed
        self.toks = _tokenize(text, diffs)
        self.form_mode = diffs is not None
        self.i = 0

    # -- helpers
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, op: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == op

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, tok.col, self.text)

    def expect(self, op: str) -> None:
        if not self.at(op):
            found = "end of input" if self.tok.kind == "end" else repr(self.tok.text)
            raise self.error(f"expected {op!r}, found {found}")
        self.i += 1

    # -- expressions
    def expr(self) -> Expr:
        out = self.term()
        while self.at("+") or self.at("-"):
            neg = self.tok.text == "-"
            self.i += 1
            t = self.term()
            out = add(out, -t if neg else t)
        return out

    def term(self, stop_at_diff: bool = False) -> Expr:
        out = self.factor()
        while self.at("*") or self.at("/"):
            if stop_at_diff and self.at("*") and self.peek().kind == "diff":
                break
            div = self.tok.text == "/"
            self.i += 1
            f = self.factor()
            out = mul(out, power(f, -1)) if div else mul(out, f)
        return out

    def factor(self) -> Expr:
        if self.at("-"):
            self.i += 1
            return -self.factor()
        base = self.base()
        if self.at("^"):
            self.i += 1
            return power(base, self.exponent())
        return base

    def _number(self) -> Fraction:
        if self.tok.kind != "num":
            raise self.error("expected a number")
        value = Fraction(self.tok.text)
        self.i += 1
        return value

    def exponent(self) -> Fraction:
        if self.at("("):
            self.i += 1
            sign = -1 if self.at("-") else 1
            if sign < 0:
                self.i += 1
            value = self._number()
            if self.at("/"):
                self.i += 1
                den_tok = self.tok
                den = self._number()
                if den == 0:
                    raise self.error("zero denominator in exponent", den_tok)
                value /= den
            self.expect(")")
            return sign * value
        sign = 1
        if self.at("-"):
            sign = -1
            self.i += 1
        if self.tok.kind != "num":
            raise self.error("exponent must be a rational constant")
        return sign * self._number()

    def base(self) -> Expr:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return const(Fraction(tok.text))
        if tok.kind == "id":
            self.i += 1
            if tok.text in FUNCTIONS and self.at("("):
                self.i += 1
                arg = self.expr()
                self.expect(")")
                return FUNCTIONS[tok.text](arg)
            if tok.text in FUNCTIONS:
                raise self.error(f"function {tok.text} needs an argument in parentheses", self.tok)
            self._check_ident(tok)
            return sym(tok.text)
        if self.at("("):
            self.i += 1
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "diff":
            raise self.error(f"differential {tok.text} not allowed here", tok)
        if tok.kind == "end":
            raise self.error("unexpected end of input", tok)
        raise self.error(f"unexpected {tok.text!r}", tok)

    def _check_ident(self, tok: _Tok) -> None:
        if self.allowed is None or tok.text in self.allowed or tok.text in NAMED_CONSTANTS:
            return
        if self.form_mode and tok.text.startswith("d") and len(tok.text) > 1:
            raise self.error(f"{tok.text!r} is not the differential of a chart coordinate", tok)
        close = difflib.get_close_matches(tok.text, sorted(self.allowed), n=3)
        hint = f"; did you mean {', '.join(close)}?" if close else ""
        raise self.error(f"unknown identifier {tok.text!r}{hint}", tok)

    def finish(self) -> None:
        if self.tok.kind != "end":
            raise self.error(f"unexpected {self.tok.text!r}")


def _allowed(names: Iterable[str] | None) -> frozenset[str] | None:
    return None if names is None else frozenset(names)


def parse_expression(text: str, names: Iterable[str] | None = None) -> Expr:
    """Parse ``text``; when ``names`` is given, other identifiers are rejected."""
    p = _Parser(text, _allowed(names))
    if p.tok.kind == "end":
        raise p.error("empty expression")
    out = p.expr()
    p.finish()
    return out


def parse_form(text: str, chart: Chart, parameters: Iterable[str] = (), degree: int | None = None) -> DiffForm:
    """Parse a form whose coefficients may use chart coordinates and ``parameters``."""
    allowed = frozenset(chart.names) | frozenset(parameters)
    diffs = {f"d{n}": i for i, n in enumerate(chart.names) if f"d{n}" not in allowed}
    p = _Parser(text, allowed, diffs)
    if p.tok.kind == "num" and p.tok.text.strip("0.") == "" and p.peek().kind == "end":
        return DiffForm.zero(chart, 1 if degree is None else degree)
    if p.tok.kind == "end":
        raise p.error("empty form")
    terms: list[tuple[tuple[int, ...], Expr]] = []
    found_degree = degree
    first = True
    while True:
        sign = 1
        if p.at("+") or p.at("-"):
            sign = -1 if p.tok.text == "-" else 1
            p.i += 1
        elif not first:
            break
        first = False
        start = p.tok
        if p.tok.kind == "diff":
            coeff = ONE
        else:
            coeff = p.term(stop_at_diff=True)
            if not p.at("*"):
                raise p.error("expected '*' followed by a differential")
            p.i += 1
        if p.tok.kind != "diff":
            msg = "expected a differential"
            if p.tok.kind == "id" and p.tok.text.startswith("d"):
                msg = f"{p.tok.text!r} is not the differential of a chart coordinate"
            raise p.error(msg)
        idx = [p.tok.index]
        p.i += 1
        while p.at("^"):
            p.i += 1
            if p.tok.kind != "diff":
                msg = "expected a differential after '^'"
                if p.tok.kind == "id" and p.tok.text.startswith("d"):
                    msg = f"{p.tok.text!r} is not the differential of a chart coordinate"
                raise p.error(msg)
            idx.append(p.tok.index)
            p.i += 1
        if len(idx) > chart.dim:
            raise p.error(f"degree {len(idx)} exceeds the chart dimension {chart.dim}", start)
        if found_degree is None:
            found_degree = len(idx)
        elif found_degree != len(idx):
            raise p.error(f"mixed degrees: expected {found_degree}, found {len(idx)}", start)
        terms.append((tuple(idx), coeff if sign > 0 else -coeff))
    p.finish()
    return DiffForm(chart, found_degree, terms)


def parse_chart(text: str) -> Chart:
    """Comma- or space-separated coordinate names."""
    names = [n for n in re.split(r"[,\s]+", text.strip()) if n]
    for n in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", n):
            raise ValueError(f"invalid coordinate name {n!r}")
        if n in FUNCTIONS or n in NAMED_CONSTANTS:
            raise ValueError(f"{n!r} is reserved")
    return Chart(names)


def parse_assignment(text: str) -> tuple[str, tuple[float, float]]:
    """``var=lo:hi`` as used by domain overrides."""
    m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^:]+):(.+)", text)
    if not m:
        raise ValueError(f"expected var=lo:hi, got {text!r}")
    try:
        lo, hi = float(m.group(2)), float(m.group(3))
    except ValueError:
        raise ValueError(f"bounds in {text!r} are not numbers") from None
    if not lo < hi:
        raise ValueError(f"empty interval in {text!r}")
    return m.group(1), (lo, hi)
