"""Scalar expression trees.

Every node is immutable and built through the smart constructors in this
module (:func:`add`, :func:`mul`, :func:`power`, :func:`sin`, ...), which keep
the tree in a light canonical form: sums and products are flattened and
sorted, rational constants are folded, like terms are collected and equal
bases in a product have their exponents added.  :func:`simplify` goes further
and expands products over sums, so polynomial identities usually collapse to
the constant ``0`` without any numeric probing.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping

__all__ = [
    "Expr", "Const", "Sym", "Add", "Mul", "Pow", "Func",
    "const", "sym", "symbols", "add", "mul", "power", "sin", "cos", "exp",
    "ln", "sqrt", "ZERO", "ONE", "NAMED_CONSTANTS", "EvaluationError",
    "differentiate", "simplify", "substitute", "evaluate", "free_symbols",
    "polynomial_degree",
]

# Symbols with a fixed numeric value; never sampled by the zero tester.
NAMED_CONSTANTS: dict[str, float] = {"pi": math.pi}

# Positive integer powers of sums up to this exponent are multiplied out.
EXPAND_POWER_LIMIT = 8

_CONST, _SYM, _FUNC, _POW, _MUL, _ADD = range(6)
FUNCTIONS = ("sin", "cos", "exp", "ln")


class EvaluationError(ValueError):
    """Raised when an expression is undefined at the requested point."""


class Expr:
    __slots__ = ("_key", "_hash")

    def _init_key(self, key):
        self._key = key
        self._hash = hash(key)

    # structural identity
    def __eq__(self, other):
        if isinstance(other, Expr):
            return self._key == other._key
        if isinstance(other, (int, Fraction)):
            return isinstance(self, Const) and self.value == other
        return NotImplemented

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Expr") -> bool:
        return self._key < other._key

    @property
    def key(self):
        """Total canonical sort key."""
        return self._key

    # arithmetic sugar
    def __add__(self, other):
        other = _maybe(other)
        return NotImplemented if other is None else add(self, other)

    def __radd__(self, other):
        other = _maybe(other)
        return NotImplemented if other is None else add(other, self)

    def __sub__(self, other):
        other = _maybe(other)
        return NotImplemented if other is None else add(self, mul(Const(-1), other))

    def __rsub__(self, other):
        other = _maybe(other)
        return NotImplemented if other is None else add(other, mul(Const(-1), self))

    def __neg__(self):
        return mul(Const(-1), self)

    def __mul__(self, other):
        other = _maybe(other)
        return NotImplemented if other is None else mul(self, other)

    def __rmul__(self, other):
        other = _maybe(other)
        return NotImplemented if other is None else mul(other, self)

    def __truediv__(self, other):
        other = _maybe(other)
        return NotImplemented if other is None else mul(self, power(other, Fraction(-1)))

    def __rtruediv__(self, other):
        other = _maybe(other)
        return NotImplemented if other is None else mul(other, power(self, Fraction(-1)))

    def __pow__(self, exponent):
        if isinstance(exponent, Const):
            exponent = exponent.value
        if not isinstance(exponent, (int, Fraction)):
            raise TypeError("exponents must be rational")
        return power(self, Fraction(exponent))

    def __repr__(self):
        return f"Expr({self})"

    def __str__(self):
        from pfaffian.render import render_expr
        return render_expr(self)


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)
        self._init_key((_CONST, self.value))


class Sym(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        if not name or not isinstance(name, str):
            raise ValueError(f"bad symbol name {name!r}")
        self.name = name
        self._init_key((_SYM, name))


class Func(Expr):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr):
        self.name = name
        self.arg = arg
        self._init_key((_FUNC, name, arg._key))


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: Fraction):
        self.base = base
        self.exp = exp
        self._init_key((_POW, base._key, exp))


class Mul(Expr):
    __slots__ = ("factors",)

    def __init__(self, factors: tuple):
        self.factors = factors
        self._init_key((_MUL, tuple(f._key for f in factors)))


class Add(Expr):
    __slots__ = ("terms",)

    def __init__(self, terms: tuple):
        self.terms = terms
        self._init_key((_ADD, tuple(t._key for t in terms)))


ZERO = Const(0)
ONE = Const(1)


def _coerce(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction, Rational)):
        return Const(value)
    if isinstance(value, float):
        return Const(Fraction(value).limit_denominator(10**12))
    if isinstance(value, str):
        return Sym(value)
    raise TypeError(f"cannot make an expression from {value!r}")


def _maybe(value) -> Expr | None:
    if isinstance(value, (Expr, int, Fraction, float)):
        return _coerce(value)
    return None


def const(value) -> Const:
    return Const(value)


def sym(name: str) -> Sym:
    return Sym(name)


def symbols(names: str | Iterable[str]) -> tuple[Sym, ...]:
    """``symbols("x y z")`` or ``symbols(["x", "y"])``."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    return tuple(Sym(n) for n in names)


# ---------------------------------------------------------------- constructors

def _split_coeff(e: Expr) -> tuple[Fraction, Expr | None]:
    """Split ``e`` into rational coefficient and the remaining monomial."""
    if isinstance(e, Const):
        return e.value, None
    if isinstance(e, Mul) and isinstance(e.factors[0], Const):
        rest = e.factors[1:]
        return e.factors[0].value, rest[0] if len(rest) == 1 else Mul(rest)
    return Fraction(1), e


def _scale(c: Fraction, rest: Expr) -> Expr:
    if c == 1:
        return rest
    if isinstance(rest, Mul):
        return Mul((Const(c),) + rest.factors)
    return Mul((Const(c), rest))


def add(*args) -> Expr:
    constant = Fraction(0)
    collected: dict = {}
    stack = [_coerce(a) for a in args]
    while stack:
        e = stack.pop()
        if isinstance(e, Add):
            stack.extend(e.terms)
            continue
        c, rest = _split_coeff(e)
        if rest is None:
            constant += c
            continue
        k = rest._key
        if k in collected:
            collected[k][1] += c
        else:
            collected[k] = [rest, c]
    terms = [_scale(c, rest) for rest, c in collected.values() if c != 0]
    terms.sort(key=lambda t: t._key)
    if constant != 0:
        terms.insert(0, Const(constant))
    if not terms:
        return ZERO
    if len(terms) == 1:
        return terms[0]
    return Add(tuple(terms))


def mul(*args) -> Expr:
    constant = Fraction(1)
    bases: dict = {}
    stack = [_coerce(a) for a in args]
    while stack:
        e = stack.pop()
        if isinstance(e, Const):
            constant *= e.value
            continue
        if isinstance(e, Mul):
            stack.extend(e.factors)
            continue
        if isinstance(e, Pow):
            b, x = e.base, e.exp
        else:
            b, x = e, Fraction(1)
        k = b._key
        if k in bases:
            bases[k][1] += x
        else:
            bases[k] = [b, x]
    if constant == 0:
        return ZERO
    factors = []
    again = False
    for b, x in bases.values():
        f = power(b, x)
        if isinstance(f, Const):
            constant *= f.value
        elif isinstance(f, Mul):
            # an integer power of a product distributed itself; re-flatten
            again = True
            factors.append(f)
        else:
            factors.append(f)
    if again:
        return mul(Const(constant), *factors)
    if constant == 0:
        return ZERO
    factors.sort(key=lambda f: f._key)
    if constant != 1:
        factors.insert(0, Const(constant))
    if not factors:
        return Const(constant)
    if len(factors) == 1:
        return factors[0]
    return Mul(tuple(factors))


def _exact_root(v: Fraction, e: Fraction) -> Fraction | None:
    """Return ``v**e`` when it is rational, else ``None`` (``v > 0``)."""
    q = e.denominator

    def iroot(n: int) -> int | None:
        r = round(n ** (1.0 / q))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** q == n:
                return cand
        return None

    num, den = iroot(v.numerator), iroot(v.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den) ** e.numerator


def power(base, exponent) -> Expr:
    base = _coerce(base)
    e = Fraction(exponent)
    if e == 0:
        return ONE
    if e == 1:
        return base
    if isinstance(base, Const):
        v = base.value
        if v == 1:
            return ONE
        if v == 0:
            return ZERO if e > 0 else Pow(base, e)
        if e.denominator == 1:
            return Const(v ** e.numerator)
        if v > 0:
            r = _exact_root(v, e)
            if r is not None:
                return Const(r)
        return Pow(base, e)
    if isinstance(base, Pow):
        if e.denominator == 1:
            return power(base.base, base.exp * e)
        return Pow(base, e)
    if isinstance(base, Mul) and e.denominator == 1:
        return mul(*(power(f, e) for f in base.factors))
    return Pow(base, e)


def _func(name: str, arg) -> Expr:
    arg = _coerce(arg)
    if isinstance(arg, Const) and arg.value == 0:
        if name == "sin":
            return ZERO
        if name in ("cos", "exp"):
            return ONE
    if name == "ln":
        if isinstance(arg, Const) and arg.value == 1:
            return ZERO
        if isinstance(arg, Func) and arg.name == "exp":
            return arg.arg
    return Func(name, arg)


def sin(x) -> Expr:
    return _func("sin", x)


def cos(x) -> Expr:
    return _func("cos", x)


def exp(x) -> Expr:
    return _func("exp", x)


def ln(x) -> Expr:
    return _func("ln", x)


def sqrt(x) -> Expr:
    return power(x, Fraction(1, 2))


# ---------------------------------------------------------------- traversal

@lru_cache(maxsize=None)
def free_symbols(e: Expr) -> frozenset[str]:
    """Names of all symbols in ``e``, named constants excluded."""
    if isinstance(e, Sym):
        return frozenset() if e.name in NAMED_CONSTANTS else frozenset((e.name,))
    if isinstance(e, Const):
        return frozenset()
    out: frozenset[str] = frozenset()
    for c in _children(e):
        out |= free_symbols(c)
    return out


def _children(e: Expr) -> tuple:
    if isinstance(e, Add):
        return e.terms
    if isinstance(e, Mul):
        return e.factors
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, Func):
        return (e.arg,)
    return ()


def _rebuild(e: Expr, children: list) -> Expr:
    if isinstance(e, Add):
        return add(*children)
    if isinstance(e, Mul):
        return mul(*children)
    if isinstance(e, Pow):
        return power(children[0], e.exp)
    if isinstance(e, Func):
        return _func(e.name, children[0])
    return e


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace symbols by expressions (simultaneously)."""
    mapping = {k: _coerce(v) for k, v in mapping.items()}
    cache: dict = {}

    def go(node: Expr) -> Expr:
        got = cache.get(node)
        if got is not None:
            return got
        if isinstance(node, Sym):
            out = mapping.get(node.name, node)
        elif isinstance(node, Const):
            out = node
        else:
            out = _rebuild(node, [go(c) for c in _children(node)])
        cache[node] = out
        return out

    return go(e)


# ---------------------------------------------------------------- calculus

@lru_cache(maxsize=1 << 16)
def _diff(e: Expr, var: str) -> Expr:
    if isinstance(e, Const):
        return ZERO
    if isinstance(e, Sym):
        return ONE if e.name == var else ZERO
    if var not in free_symbols(e):
        return ZERO
    if isinstance(e, Add):
        return add(*(_diff(t, var) for t in e.terms))
    if isinstance(e, Mul):
        fs = e.factors
        parts = []
        for i, f in enumerate(fs):
            df = _diff(f, var)
            if df != ZERO:
                parts.append(mul(df, *fs[:i], *fs[i + 1:]))
        return add(*parts)
    if isinstance(e, Pow):
        return mul(Const(e.exp), power(e.base, e.exp - 1), _diff(e.base, var))
    if isinstance(e, Func):
        u = e.arg
        du = _diff(u, var)
        if e.name == "sin":
            return mul(cos(u), du)
        if e.name == "cos":
            return mul(Const(-1), sin(u), du)
        if e.name == "exp":
            return mul(e, du)
        if e.name == "ln":
            return mul(power(u, Fraction(-1)), du)
    raise TypeError(f"unknown node {e!r}")


def differentiate(e: Expr, var: str, coordinates: Iterable[str] | None = None) -> Expr:
    """Partial derivative of ``e`` with respect to the symbol ``var``.

    When ``coordinates`` is given, ``var`` must be one of them.
    """
    if coordinates is not None and var not in tuple(coordinates):
        raise KeyError(f"unknown variable {var!r}")
    return simplify(_diff(_coerce(e), var))


# ---------------------------------------------------------------- simplify

def _expand_product(factors: list) -> Expr:
    terms: list = [ONE]
    for f in factors:
        if isinstance(f, Add):
            terms = [mul(t, s) for t in terms for s in f.terms]
        else:
            terms = [mul(t, f) for t in terms]
    return add(*terms)


def _trig_square(f: Expr):
    """Return (name, arg, exponent) when f is sin(u)^k or cos(u)^k, k >= 2."""
    if (isinstance(f, Pow) and isinstance(f.base, Func)
            and f.base.name in ("sin", "cos")
            and f.exp.denominator == 1 and f.exp >= 2):
        return f.base.name, f.base.arg, f.exp
    return None


def _pythagoras(e: Expr) -> Expr:
    """Rewrite c*R*sin(u)^2 + c'*R*cos(u)^2 pairs until none remain."""
    while isinstance(e, Add):
        index: dict = {"sin": {}, "cos": {}}
        for i, t in enumerate(e.terms):
            c, rest = _split_coeff(t)
            if rest is None:
                continue
            fs = rest.factors if isinstance(rest, Mul) else (rest,)
            for j, f in enumerate(fs):
                hit = _trig_square(f)
                if hit is None:
                    continue
                name, u, k = hit
                reduced = mul(*fs[:j], power(Func(name, u), k - 2), *fs[j + 1:])
                index[name].setdefault((u._key, reduced._key), (i, c, reduced, u))
        match = None
        for key, (i, c, reduced, u) in index["sin"].items():
            if key in index["cos"]:
                match = (i, c, reduced, u)
                break
        if match is None:
            return e
        i, c, reduced, u = match
        rest_terms = list(e.terms[:i] + e.terms[i + 1:])
        e = add(*rest_terms, mul(Const(c), reduced),
                mul(Const(-c), reduced, power(cos(u), 2)))
    return e


@lru_cache(maxsize=1 << 16)
def simplify(e: Expr) -> Expr:
    """Canonical expanded form.

    Beyond construction-time canonicalisation this expands products and small
    positive integer powers of sums, applies ``sin(u)^2 + cos(u)^2 -> 1``
    (with a common cofactor) and ``ln(exp(u)) -> u``.  Idempotent.
    """
    e = _coerce(e)
    if isinstance(e, (Const, Sym)):
        return e
    if isinstance(e, Func):
        return _func(e.name, simplify(e.arg))
    if isinstance(e, Pow):
        b = simplify(e.base)
        p = power(b, e.exp)
        if (isinstance(p, Pow) and isinstance(p.base, Add)
                and p.exp.denominator == 1 and 1 < p.exp <= EXPAND_POWER_LIMIT):
            return _pythagoras(_expand_product([p.base] * int(p.exp)))
        if isinstance(p, Mul):
            return simplify(p)
        return p
    if isinstance(e, Mul):
        parts = [simplify(f) for f in e.factors]
        m = mul(*parts)
        if not isinstance(m, Mul):
            return m if m == e else simplify(m)
        fs = []
        for f in m.factors:
            if (isinstance(f, Pow) and isinstance(f.base, Add)
                    and f.exp.denominator == 1 and 1 < f.exp <= EXPAND_POWER_LIMIT):
                fs.append(simplify(f))
            else:
                fs.append(f)
        if not any(isinstance(f, Add) for f in fs):
            return mul(*fs)
        return _pythagoras(_expand_product(fs))
    if isinstance(e, Add):
        return _pythagoras(add(*(simplify(t) for t in e.terms)))
    raise TypeError(f"unknown node {e!r}")


# ---------------------------------------------------------------- evaluation

def evaluate(e: Expr, assignment: Mapping[str, float]) -> float:
    """Evaluate at a point.  Raises :class:`EvaluationError` where undefined."""
    e = _coerce(e)

    def go(node: Expr) -> float:
        if isinstance(node, Const):
            return float(node.value)
        if isinstance(node, Sym):
            if node.name in assignment:
                return float(assignment[node.name])
            if node.name in NAMED_CONSTANTS:
                return NAMED_CONSTANTS[node.name]
            raise KeyError(f"no value for {node.name!r}")
        if isinstance(node, Add):
            return math.fsum(go(t) for t in node.terms)
        if isinstance(node, Mul):
            out = 1.0
            for f in node.factors:
                out *= go(f)
            return out
        if isinstance(node, Pow):
            b = go(node.base)
            x = node.exp
            if x.denominator == 1:
                if b == 0 and x < 0:
                    raise EvaluationError("division by zero")
                return b ** int(x)
            if b < 0:
                raise EvaluationError("non-integer power of a negative base")
            if b == 0 and x < 0:
                raise EvaluationError("division by zero")
            return b ** float(x)
        if isinstance(node, Func):
            u = go(node.arg)
            if node.name == "sin":
                return math.sin(u)
            if node.name == "cos":
                return math.cos(u)
            if node.name == "exp":
                try:
                    return math.exp(u)
                except OverflowError:
                    raise EvaluationError("exp overflow") from None
            if u <= 0:
                raise EvaluationError("ln of a non-positive value")
            return math.log(u)
        raise TypeError(f"unknown node {node!r}")

    try:
        value = go(e)
    except OverflowError:
        raise EvaluationError("overflow") from None
    if not math.isfinite(value):
        raise EvaluationError("non-finite value")
    return value


def polynomial_degree(e: Expr) -> int | None:
    """Total degree when ``e`` is a polynomial in its symbols, else None."""
    e = simplify(e)
    if isinstance(e, Const):
        return 0
    if isinstance(e, Sym):
        return 0 if e.name in NAMED_CONSTANTS else 1
    if isinstance(e, Pow):
        if e.exp.denominator != 1 or e.exp < 0:
            return None
        d = polynomial_degree(e.base)
        return None if d is None else d * int(e.exp)
    if isinstance(e, Mul):
        total = 0
        for f in e.factors:
            d = polynomial_degree(f)
            if d is None:
                return None
            total += d
        return total
    if isinstance(e, Add):
        degs = [polynomial_degree(t) for t in e.terms]
        return None if None in degs else max(degs)
    return None
