"""Seeded generators shared by the test modules."""

from __future__ import annotations

import random
from itertools import combinations

from hypothesis import strategies as st

from pfaffian.expr import Const, Expr, add, cos, exp, ln, mul, power, sin, sqrt, sym
from pfaffian.forms import Chart, DiffForm, VectorField


def random_poly(rng: random.Random, names, max_degree: int = 3, max_terms: int = 4) -> Expr:
    """Sum of a few monomials with small nonzero integer coefficients."""
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        c = rng.choice([-3, -2, -1, 1, 2, 3])
        deg = rng.randint(0, max_degree)
        factors = [sym(rng.choice(names)) for _ in range(deg)]
        terms.append(mul(c, *factors))
    return add(*terms)


def random_form(rng: random.Random, chart: Chart, degree: int, max_degree: int = 2,
                density: float = 0.6) -> DiffForm:
    keys = list(combinations(range(chart.dim), degree))
    picked = [k for k in keys if rng.random() < density] or [rng.choice(keys)]
    return DiffForm(chart, degree, [(k, random_poly(rng, chart.names, max_degree, 3)) for k in picked])


def random_field(rng: random.Random, chart: Chart, max_degree: int = 2) -> VectorField:
    return VectorField(chart, [random_poly(rng, chart.names, max_degree, 2) for _ in chart.names])


# ---------------------------------------------------------------- hypothesis

NAMES = ("x", "y", "z")

_leaf = st.one_of(
    st.sampled_from([sym(n) for n in NAMES]),
    st.integers(-3, 3).map(Const),
)


def _grow(children):
    return st.one_of(
        st.tuples(children, children).map(lambda t: t[0] + t[1]),
        st.tuples(children, children).map(lambda t: t[0] * t[1]),
        st.tuples(children, st.integers(1, 3)).map(lambda t: power(t[0], t[1])),
        children.map(sin),
        children.map(cos),
    )


expressions = st.recursive(_leaf, _grow, max_leaves=6)

polynomials = st.recursive(
    _leaf,
    lambda ch: st.one_of(
        st.tuples(ch, ch).map(lambda t: t[0] + t[1]),
        st.tuples(ch, ch).map(lambda t: t[0] * t[1]),
    ),
    max_leaves=6,
)

points = st.fixed_dictionaries({n: st.floats(-2, 2, allow_nan=False) for n in NAMES})


@st.composite
def forms(draw, chart: Chart, degree: int | None = None):
    deg = draw(st.integers(0, chart.dim)) if degree is None else degree
    keys = list(combinations(range(chart.dim), deg))
    chosen = draw(st.lists(st.sampled_from(keys), min_size=1, max_size=min(3, len(keys)), unique=True))
    coeffs = draw(st.lists(polynomials, min_size=len(chosen), max_size=len(chosen)))
    return DiffForm(chart, deg, list(zip(chosen, coeffs)))


# ---------------------------------------------------------------- calibration corpus

def _dense(poly: dict) -> Expr:
    return add(*(mul(c, *(power(sym(n), e) for n, e in mono if e)) for mono, c in poly.items()))


def _polymul(a: dict, b: dict) -> dict:
    """Dict-based product used as an oracle independent of ``simplify``."""
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            exps = dict(ma)
            for n, e in mb:
                exps[n] = exps.get(n, 0) + e
            key = tuple(sorted(exps.items()))
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v}


def _random_dict_poly(rng: random.Random) -> dict:
    out = {}
    for _ in range(rng.randint(2, 4)):
        key = tuple(sorted({n: rng.randint(0, 2) for n in rng.sample(NAMES, rng.randint(1, 3))}.items()))
        out[key] = out.get(key, 0) + rng.choice([-2, -1, 1, 2, 3])
    return {k: v for k, v in out.items() if v} or {(("x", 1),): 1}


def calibration_corpus(seed: int = 2024) -> tuple[list[tuple[str, Expr]], list[tuple[str, Expr]]]:
    """50 labelled identities and 50 non-identities over x, y, z."""
    x, y, z = (sym(n) for n in NAMES)
    u = x * x + 1
    w = y * y + 1
    identities = [
        ("pythagoras", sin(x) ** 2 + cos(x) ** 2 - 1),
        ("double-angle-sin", sin(2 * x) - 2 * sin(x) * cos(x)),
        ("double-angle-cos", cos(2 * x) - (cos(x) ** 2 - sin(x) ** 2)),
        ("sum-sin", sin(x + y) - (sin(x) * cos(y) + cos(x) * sin(y))),
        ("sum-cos", cos(x + y) - (cos(x) * cos(y) - sin(x) * sin(y))),
        ("diff-sin", sin(x - y) - (sin(x) * cos(y) - cos(x) * sin(y))),
        ("triple-sin", sin(3 * x) - (3 * sin(x) - 4 * sin(x) ** 3)),
        ("triple-cos", cos(3 * x) - (4 * cos(x) ** 3 - 3 * cos(x))),
        ("exp-sum", exp(x + y) - exp(x) * exp(y)),
        ("exp-double", exp(2 * x) - exp(x) ** 2),
        ("ln-exp", ln(exp(x + y)) - x - y),
        ("exp-ln", exp(ln(u)) - u),
        ("ln-product", ln(u * w) - ln(u) - ln(w)),
        ("ln-power", ln(u ** 3) - 3 * ln(u)),
        ("sqrt-square", sqrt(u) ** 2 - u),
        ("sqrt-product", sqrt(u) * sqrt(w) - sqrt(u * w)),
        ("difference-of-squares", (x - y) * (x + y) - (x ** 2 - y ** 2)),
        ("rational-sum", 1 / u + 1 / w - (u + w) / (u * w)),
        ("rational-cancel", (x ** 2 - 1) / (x - 1) - (x + 1)),
        ("rational-nested", 1 / (1 / u) - u),
        ("cube", (x + y) ** 3 - (x ** 3 + 3 * x ** 2 * y + 3 * x * y ** 2 + y ** 3)),
        ("composite-pythagoras", sin(x * y + z) ** 2 + cos(x * y + z) ** 2 - 1),
        ("square-sum-trig", (sin(x) + cos(x)) ** 2 - 1 - sin(2 * x)),
        ("tan-cancel", sin(x) / cos(x) * cos(x) - sin(x)),
        ("half-angle", sin(x / 2) ** 2 - (1 - cos(x)) / 2),
        ("cos-square", cos(x) ** 2 - (1 + cos(2 * x)) / 2),
        ("exp-trig-mix", exp(sin(x)) * exp(cos(y)) - exp(sin(x) + cos(y))),
        ("nested-trig", sin(sin(x)) ** 2 - (1 - cos(sin(x)) ** 2)),
        ("product-to-sum", 2 * sin(x) * sin(y) - (cos(x - y) - cos(x + y))),
        ("power-merge", u ** 2 * u ** 3 - u ** 5),
    ]
    rng = random.Random(seed)
    while len(identities) < 50:
        a, b = _random_dict_poly(rng), _random_dict_poly(rng)
        prod = _dense(_polymul(a, b))
        identities.append((f"poly-product-{len(identities)}", _dense(a) * _dense(b) - prod))

    non_identities = [
        ("sin-vs-x", sin(x) - x),
        ("taylor-remainder", sin(x) - x + x ** 3 / 6),
        ("wrong-double-angle", sin(2 * x) - sin(x) * cos(x)),
        ("wrong-sum", cos(x + y) - (cos(x) * cos(y) + sin(x) * sin(y))),
        ("exp-sum-wrong", exp(x + y) - exp(x) - exp(y)),
        ("ln-sum-wrong", ln(u + w) - ln(u) - ln(w)),
        ("sqrt-sum-wrong", sqrt(u + w) - sqrt(u) - sqrt(w)),
        ("square-wrong", (x + y) ** 2 - x ** 2 - y ** 2),
        ("pythagoras-off", sin(x) ** 2 + cos(x) ** 2 - 1 + x * 1e-6),
        ("rational-wrong", 1 / u + 1 / w - 2 / (u + w)),
        ("poly-x2-y", x ** 2 - y),
        ("xyz", x * y * z),
        ("cubic-shifted", (x - Const(1) / 2) ** 3),
        ("near-root", (x - y) ** 2 * z + 1e-3),
        ("trig-poly", sin(x) * cos(y) - sin(y) * cos(x)),
        ("exp-linear", exp(x) - 1 - x),
        ("composite-off", sin(x * y) ** 2 + cos(x * y) ** 2 - 1 + sin(z) ** 2 * 1e-4),
        ("half-angle-wrong", sin(x / 2) ** 2 - (1 + cos(x)) / 2),
        ("triple-wrong", sin(3 * x) - 3 * sin(x)),
        ("cos-parity-wrong", cos(x) - cos(x + y * y + 1)),
    ]
    i = 0
    while len(non_identities) < 50:
        name, e = identities[i % len(identities)]
        bump = [x, y * z, sin(y), Const(1) / 1000, x * y * y][i % 5]
        non_identities.append((f"{name}+bump{i}", e + bump))
        i += 1
    return identities, non_identities
