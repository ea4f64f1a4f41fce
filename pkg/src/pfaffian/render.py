"""Text rendering in the same syntax the parser accepts."""

from __future__ import annotations

from fractions import Fraction

from pfaffian.expr import Add, Const, Expr, Func, Mul, Pow, Sym, _split_coeff


def _const(v: Fraction) -> str:
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def _exponent(x: Fraction) -> str:
    if x.denominator == 1 and x > 0:
        return str(x.numerator)
    return f"({_const(x)})"


def _atom(e: Expr) -> str:
    """Render ``e`` so it can stand as the base of a power."""
    if isinstance(e, Sym) or isinstance(e, Func):
        return render_expr(e)
    if isinstance(e, Const) and e.value >= 0 and e.value.denominator == 1:
        return render_expr(e)
    return f"({render_expr(e)})"


def _factor(e: Expr) -> str:
    if isinstance(e, Add):
        return f"({render_expr(e)})"
    return render_expr(e)


def render_expr(e: Expr) -> str:
    if isinstance(e, Const):
        return _const(e.value)
    if isinstance(e, Sym):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}({render_expr(e.arg)})"
    if isinstance(e, Pow):
        return f"{_atom(e.base)}^{_exponent(e.exp)}"
    if isinstance(e, Mul):
        c, rest = _split_coeff(e)
        fs = rest.factors if isinstance(rest, Mul) else (rest,)
        body = "*".join(_factor(f) for f in fs)
        if c == 1:
            return body
        if c == -1:
            return f"-{body}"
        return f"{_const(c)}*{body}"
    if isinstance(e, Add):
        out = render_expr(e.terms[0])
        for t in e.terms[1:]:
            c, rest = _split_coeff(t)
            if c < 0:
                out += " - " + render_expr(-t)
            else:
                out += " + " + render_expr(t)
        return out
    raise TypeError(f"unknown node {e!r}")


def render_coefficient_term(coeff: Expr, basis: str) -> tuple[str, str]:
    """Return (sign, body) for ``coeff * basis`` inside a sum."""
    c, rest = _split_coeff(coeff)
    sign = "-" if c < 0 else "+"
    mag = -coeff if c < 0 else coeff
    if not basis:
        return sign, render_expr(mag)
    if mag == Const(1):
        return sign, basis
    return sign, f"{_factor(mag)}*{basis}"
