"""Symplectic and contact constructions on cotangent and jet charts.

Sign conventions
----------------
* ``∇H = H_p ∂/∂x - H_x ∂/∂p`` (Hamiltonian vector field).
* ``poisson_bracket(f, g) = f_x g_p - f_p g_x`` so that ``(∇f) g = -{f, g}``.
* ``vector_to_form(X) = -X_i dx^i + X^i dp_i``; its pairing with a second
  vector defines :func:`symplectic_pairing`, and ``omega_bracket(f, g) =
  -pairing(∇f, ∇g)``.  With the standard Lie bracket this is the bracket for
  which ``[∇f, ∇g] = ∇ omega_bracket(f, g)``; note ``omega_bracket = -poisson_bracket``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from pfaffian.expr import Expr, _coerce, add, differentiate, mul, simplify
from pfaffian.forms import (
    Chart, ChartMismatch, DiffForm, SmoothMap, VectorField, d,
    forms_equal, interior, pullback,
)
from pfaffian.zerotest import Domain, ZeroConfig, ZeroVerdict, is_zero, weakest

__all__ = [
    "CotangentChart", "JetChart", "JetSection", "NonHamiltonianField",
    "canonical_one_form", "symplectic_form", "lagrange_bracket",
    "lagrange_brackets", "lagrange_pullback_check", "is_lagrangian",
    "hamiltonian_vector_field", "poisson_bracket", "vector_to_form",
    "form_to_vector", "symplectic_pairing", "omega_bracket",
    "non_hamiltonian_field", "lie_bracket", "lie_derivative", "contact_form",
    "spencer_operator", "spencer_contact_check", "prolong", "hamilton_equations",
    "jet_section",
]

MAX_JET_SIZE = 4


@dataclass(frozen=True)
class CotangentChart:
    base: tuple[str, ...]
    fiber: tuple[str, ...]

    def __post_init__(self):
        if len(self.base) != len(self.fiber) or not self.base:
            raise ValueError("base and fiber need equal, nonzero counts")
        Chart(self.base + self.fiber)  # distinctness check

    @classmethod
    def standard(cls, n: int) -> "CotangentChart":
        if n == 1:
            return cls(("x",), ("p",))
        return cls(tuple(f"x{i}" for i in range(1, n + 1)),
                   tuple(f"p{i}" for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.base)

    @property
    def chart(self) -> Chart:
        return Chart(self.base + self.fiber)

    def pairs(self):
        return zip(self.base, self.fiber)


@dataclass(frozen=True)
class JetChart:
    """First-jet coordinates.

    ``kind == "source"``: (u^a, x^i, x^i_a) for maps; slope names follow
    ``f"{x}_a{a}"`` with 1-based ``a`` (``x1_a2`` is ∂x1/∂u2).
    ``kind == "scalar"``: (x^i, f, p_i) for functions.
    """

    kind: str
    base: tuple[str, ...]
    target: tuple[str, ...]
    slopes: tuple[tuple[str, ...], ...]     # source: slopes[i][a]; scalar: ((p_1..p_m),)

    @classmethod
    def source_form(cls, base: Sequence[str] = ("u",), target: Sequence[str] = ("x",)) -> "JetChart":
        base, target = tuple(base), tuple(target)
        if not (1 <= len(base) <= MAX_JET_SIZE and 1 <= len(target) <= MAX_JET_SIZE):
            raise ValueError(f"jet charts support 1..{MAX_JET_SIZE} source and target coordinates")
        slopes = tuple(tuple(f"{x}_a{a + 1}" for a in range(len(base))) for x in target)
        jc = cls("source", base, target, slopes)
        jc.chart  # validates distinctness
        return jc

    @classmethod
    def scalar_form(cls, base: Sequence[str] = ("x",), value: str = "f",
                    momenta: Sequence[str] | None = None) -> "JetChart":
        base = tuple(base)
        if not 1 <= len(base) <= MAX_JET_SIZE:
            raise ValueError(f"jet charts support 1..{MAX_JET_SIZE} base coordinates")
        if momenta is None:
            momenta = ("p",) if len(base) == 1 else tuple(f"p{i}" for i in range(1, len(base) + 1))
        if len(momenta) != len(base):
            raise ValueError("need one momentum name per base coordinate")
        jc = cls("scalar", base, (value,), (tuple(momenta),))
        jc.chart
        return jc

    @property
    def chart(self) -> Chart:
        if self.kind == "source":
            return Chart(self.base + self.target + tuple(s for row in self.slopes for s in row))
        return Chart(self.base + self.target + self.slopes[0])


@dataclass(frozen=True)
class JetSection:
    jet: JetChart
    map: SmoothMap       # base chart -> jet chart

    def __post_init__(self):
        if self.jet.kind != "source":
            raise ValueError("jet sections here use source-form jet charts")
        for u in self.jet.base:
            if self.map[u] != _coerce(u):
                raise ValueError(f"section must fix the base coordinate {u}")


def jet_section(jet: JetChart, target: Sequence, slopes: Sequence[Sequence]) -> JetSection:
    """Section with target values ``target[i]`` and slope values ``slopes[i][a]``."""
    base = Chart(jet.base)
    comps = {u: _coerce(u) for u in jet.base}
    for i, x in enumerate(jet.target):
        comps[x] = target[i]
        for a, s in enumerate(jet.slopes[i]):
            comps[s] = slopes[i][a]
    return JetSection(jet, SmoothMap(base, jet.chart, comps))


# ---------------------------------------------------------------- cotangent

def canonical_one_form(c: CotangentChart) -> DiffForm:
    ch = c.chart
    return DiffForm(ch, 1, [((ch.index(x),), _coerce(p)) for x, p in c.pairs()])


def symplectic_form(c: CotangentChart) -> DiffForm:
    return d(canonical_one_form(c))


def _cotangent_target(m: SmoothMap, c: CotangentChart) -> None:
    if m.target != c.chart:
        raise ChartMismatch("map does not target the cotangent chart")


def lagrange_bracket(m: SmoothMap, c: CotangentChart, a: str, b: str) -> Expr:
    _cotangent_target(m, c)
    terms = []
    for x, p in c.pairs():
        terms.append(mul(differentiate(m[p], a), differentiate(m[x], b)))
        terms.append(-mul(differentiate(m[p], b), differentiate(m[x], a)))
    return simplify(add(*terms))


def lagrange_brackets(m: SmoothMap, c: CotangentChart) -> dict[tuple[str, str], Expr]:
    names = m.source.names
    return {(a, b): lagrange_bracket(m, c, a, b)
            for i, a in enumerate(names) for b in names[i + 1:]}


def lagrange_pullback_check(m: SmoothMap, c: CotangentChart, domain: Domain | None = None,
                            config: ZeroConfig | None = None) -> ZeroVerdict:
    """Pulled-back Ω has coefficient [u^a, u^b] on du^a ∧ du^b (a < b)."""
    pulled = pullback(m, symplectic_form(c))
    expected = DiffForm(m.source, 2, [((m.source.index(a), m.source.index(b)), v)
                                      for (a, b), v in lagrange_brackets(m, c).items()])
    return forms_equal(pulled, expected, domain, config)


def is_lagrangian(m: SmoothMap, c: CotangentChart, domain: Domain | None = None,
                  config: ZeroConfig | None = None) -> ZeroVerdict:
    if m.source.dim != c.n:
        raise ValueError(f"source dimension must be {c.n}")
    return weakest(is_zero(v, domain, config) for v in lagrange_brackets(m, c).values())


def hamiltonian_vector_field(H, c: CotangentChart) -> VectorField:
    H = _coerce(H)
    comps = {}
    for x, p in c.pairs():
        comps[x] = differentiate(H, p)
        comps[p] = -differentiate(H, x)
    return VectorField(c.chart, comps)


def poisson_bracket(f, g, c: CotangentChart) -> Expr:
    f, g = _coerce(f), _coerce(g)
    terms = []
    for x, p in c.pairs():
        terms.append(mul(differentiate(f, x), differentiate(g, p)))
        terms.append(-mul(differentiate(f, p), differentiate(g, x)))
    return simplify(add(*terms))


def vector_to_form(X: VectorField, c: CotangentChart) -> DiffForm:
    ch = c.chart
    terms = []
    for x, p in c.pairs():
        terms.append(((ch.index(x),), -X[p]))
        terms.append(((ch.index(p),), X[x]))
    return DiffForm(ch, 1, terms)


def form_to_vector(xi: DiffForm, c: CotangentChart) -> VectorField:
    if xi.degree != 1:
        raise ValueError("form_to_vector needs a 1-form")
    comps = {}
    for x, p in c.pairs():
        comps[x] = xi.coeff(p)
        comps[p] = -xi.coeff(x)
    return VectorField(c.chart, comps)


def symplectic_pairing(X: VectorField, Y: VectorField, c: CotangentChart) -> Expr:
    xi = vector_to_form(X, c)
    return simplify(add(*(mul(xi.coeff(i), Y.components[i]) for i in range(c.chart.dim))))


def omega_bracket(f, g, c: CotangentChart) -> Expr:
    """``-pairing(∇f, ∇g)``; equals ``-poisson_bracket(f, g)``."""
    return simplify(-symplectic_pairing(hamiltonian_vector_field(f, c),
                                        hamiltonian_vector_field(g, c), c))


@dataclass(frozen=True)
class NonHamiltonianField:
    hamiltonian: Expr
    pairs: tuple[tuple[Expr, Expr], ...]
    field: VectorField
    one_form: DiffForm                      # dH + Σ μ_a dv^a
    rhs: tuple[tuple[str, Expr], ...]       # ODE right-hand sides


def non_hamiltonian_field(H, pairs: Iterable[tuple], c: CotangentChart) -> NonHamiltonianField:
    H = _coerce(H)
    pairs = tuple((_coerce(mu), _coerce(v)) for mu, v in pairs)
    X = hamiltonian_vector_field(H, c)
    ch = c.chart
    xi = d(ch.scalar(H))
    for mu, v in pairs:
        X = X + hamiltonian_vector_field(v, c).scale(mu)
        xi = xi + d(ch.scalar(v)).scale(mu)
    return NonHamiltonianField(H, pairs, X, xi, hamilton_equations(H, c, pairs))


def hamilton_equations(H, c: CotangentChart, pairs: Iterable[tuple] = ()) -> tuple[tuple[str, Expr], ...]:
    """Right-hand sides ``(name, rhs)`` for ẋ then ṗ; non-Hamiltonian pairs add μ_a terms."""
    H = _coerce(H)
    pairs = tuple((_coerce(mu), _coerce(v)) for mu, v in pairs)
    xs, ps = [], []
    for x, p in c.pairs():
        xs.append((x, simplify(add(differentiate(H, p),
                                   *(mul(mu, differentiate(v, p)) for mu, v in pairs)))))
        ps.append((p, simplify(add(-differentiate(H, x),
                                   *(-mul(mu, differentiate(v, x)) for mu, v in pairs)))))
    return tuple(xs + ps)


def lie_bracket(X: VectorField, Y: VectorField) -> VectorField:
    if X.chart != Y.chart:
        raise ChartMismatch(f"{X.chart} vs {Y.chart}")
    return VectorField(X.chart, [simplify(X.apply(yk) - Y.apply(xk))
                                 for xk, yk in zip(X.components, Y.components)])


def lie_derivative(X: VectorField, a: DiffForm) -> DiffForm:
    """Cartan's formula with the standard contraction."""
    if a.degree == 0:
        return a.chart.scalar(X.apply(a.coeff()))
    out = interior(X, d(a))
    if a.degree >= 1:
        out = out + d(interior(X, a))
    return out


# ---------------------------------------------------------------- jets

def contact_form(j: JetChart) -> DiffForm | list[DiffForm]:
    ch = j.chart
    if j.kind == "scalar":
        theta = ch.d(j.target[0])
        for x, p in zip(j.base, j.slopes[0]):
            theta = theta - ch.d(x).scale(_coerce(p))
        return theta
    forms = []
    for i, x in enumerate(j.target):
        t = ch.d(x)
        for a, u in enumerate(j.base):
            t = t - ch.d(u).scale(_coerce(j.slopes[i][a]))
        forms.append(t)
    return forms


def spencer_operator(s: JetSection) -> list[list[Expr]]:
    """Matrix ``D[a][i] = x^i_a(u) - ∂x^i/∂u^a``; zero iff the section is holonomic."""
    j = s.jet
    return [[simplify(s.map[j.slopes[i][a]] - differentiate(s.map[x], u))
             for i, x in enumerate(j.target)]
            for a, u in enumerate(j.base)]


def spencer_contact_check(s: JetSection, domain: Domain | None = None,
                          config: ZeroConfig | None = None) -> ZeroVerdict:
    """Compare Ds with the pulled-back contact forms, component by component.

    ``s*Θ^i = (∂x^i/∂u^a - x^i_a) du^a`` so ``D[a][i] + (s*Θ^i)_a`` must vanish.
    """
    D = spencer_operator(s)
    base = s.map.source
    verdicts = []
    for i, theta in enumerate(contact_form(s.jet)):
        pulled = pullback(s.map, theta)
        for a, u in enumerate(s.jet.base):
            verdicts.append(is_zero(D[a][i] + pulled.coeff(base.index(u)), domain, config))
    return weakest(verdicts)


def prolong(x: SmoothMap) -> JetSection:
    """First prolongation j¹x: slopes filled with partial derivatives."""
    jet = JetChart.source_form(x.source.names, x.target.names)
    slopes = [[differentiate(x[t], u) for u in x.source.names] for t in x.target.names]
    return jet_section(jet, [x[t] for t in x.target.names], slopes)
