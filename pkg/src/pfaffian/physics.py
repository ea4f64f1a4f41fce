"""Constructors and checks for mechanical, electromagnetic, thermodynamic,
fluid and gauge examples of Pfaffian forms."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from pfaffian.expr import (
    ONE, ZERO, Const, Expr, _coerce, add, cos, differentiate, evaluate, free_symbols, mul,
    power, simplify, sin, sqrt, substitute, sym,
)
from pfaffian.forms import (
    Chart, DiffForm, SmoothMap, VectorField, VolumeElement, d, form_is_zero, forms_equal,
    interior, partial_d, poincare_dual_form, pullback,
    rank_of_two_form, wedge,
)
from pfaffian.tape import compile_tape, run_tape
from pfaffian.pfaff import FrobeniusResult, PfaffReport, cartan_class, frobenius_test
from pfaffian.zerotest import (
    Domain, ZeroConfig, ZeroVerdict, equals, is_zero, weakest,
)

__all__ = [
    "KINEMATIC_CHART", "DragKind", "DragReport", "friction_form", "drag_domain",
    "drag_report", "gravity_drag_form", "GravityDragReport", "gravity_drag_report",
    "FaradayReport", "faraday_check", "rolling_constraint", "rolling_report",
    "ThermoPotential", "ThermoSectionReport", "thermo_contact_form",
    "legendrian_section_check", "maxwell_identity", "maxwell_residual",
    "CaratheodoryReport", "caratheodory_check", "KineticReport",
    "kinetic_term_exactness", "Metric", "FlowKind", "FlowClassification",
    "vorticity_analysis", "GaugeReport", "gauge_analysis", "gauge_shift_check",
]

KINEMATIC_CHART = Chart("t x1 x2 x3 v1 v2 v3")
_X = ("x1", "x2", "x3")
_V = ("v1", "v2", "v3")


# ---------------------------------------------------------------- drag

@dataclass(frozen=True)
class DragKind:
    tag: str                                  # "kinetic", "linear" or "nonlinear"
    params: tuple[tuple[str, Expr], ...]

    @classmethod
    def kinetic(cls, mu_k="mu_k", N="N") -> "DragKind":
        return cls("kinetic", (("mu_k", _coerce(mu_k)), ("N", _coerce(N))))

    @classmethod
    def linear(cls, alpha="alpha") -> "DragKind":
        return cls("linear", (("alpha", _coerce(alpha)),))

    @classmethod
    def nonlinear(cls, C_D="C_D", A="A", rho="rho") -> "DragKind":
        return cls("nonlinear", (("C_D", _coerce(C_D)), ("A", _coerce(A)), ("rho", _coerce(rho))))

    @classmethod
    def from_name(cls, name: str) -> "DragKind":
        try:
            return {"kinetic": cls.kinetic, "linear": cls.linear, "nonlinear": cls.nonlinear}[name]()
        except KeyError:
            raise ValueError(f"unknown drag kind {name!r}; use kinetic, linear or nonlinear") from None

    def param(self, name: str) -> Expr:
        return dict(self.params)[name]

    @property
    def speed(self) -> Expr:
        return sqrt(add(*(power(v, 2) for v in _V)))

    @property
    def alpha(self) -> Expr:
        if self.tag == "kinetic":
            return mul(self.param("mu_k"), self.param("N"), power(self.speed, -1))
        if self.tag == "linear":
            return self.param("alpha")
        return mul(Fraction(1, 2), self.param("C_D"), self.param("A"), self.param("rho"), self.speed)

    @property
    def projection_sign(self) -> int:
        """Sign s in the coefficient matrix δ_ij + s·u_i u_j."""
        return {"kinetic": -1, "linear": 0, "nonlinear": 1}[self.tag]

    @property
    def expected_det(self) -> int:
        return {"kinetic": 0, "linear": 1, "nonlinear": 2}[self.tag]


def _speed_exclusion(cols: Mapping[str, np.ndarray]) -> np.ndarray:
    sq = sum(cols[v] ** 2 for v in _V if v in cols)
    if isinstance(sq, int):
        return np.zeros(len(next(iter(cols.values()))), dtype=bool)
    return sq < 0.01


def drag_domain(kind: DragKind | None = None, base: Domain | None = None) -> Domain:
    """Positive parameter ranges and a ball around v = 0 removed."""
    positive = {name: (0.5, 2.0) for name in ("mu_k", "N", "alpha", "C_D", "A", "rho", "m", "g")}
    if base is not None:
        positive.update(base.intervals)
    return Domain(positive, base.default if base else (-2.0, 2.0), _speed_exclusion)


def friction_form(kind: DragKind, chart: Chart = KINEMATIC_CHART) -> DiffForm:
    if chart.dim != 7:
        raise ValueError("friction forms live on the chart (t, x1..x3, v1..v3)")
    names = chart.names
    xs, vs = names[1:4], names[4:7]
    alpha = kind.alpha
    if names != KINEMATIC_CHART.names:
        alpha = substitute(alpha, dict(zip(_V, (_coerce(v) for v in vs))))
    return DiffForm(chart, 1, [((chart.index(x),), -mul(alpha, _coerce(v))) for x, v in zip(xs, vs)])


@dataclass(frozen=True)
class DragReport:
    kind: DragKind
    form: DiffForm
    df: DiffForm
    table_df: DiffForm
    table_match: ZeroVerdict
    f_matrix: tuple[tuple[Expr, ...], ...]
    det: Expr
    det_verdict: ZeroVerdict
    pfaff: PfaffReport

    def to_json(self) -> dict:
        return {
            "kind": self.kind.tag,
            "form": self.form.render(),
            "df": self.df.render(),
            "table_match": self.table_match.to_json(),
            "f_matrix": [[str(c) for c in row] for row in self.f_matrix],
            "det": str(self.det),
            "expected_det": self.kind.expected_det,
            "det_check": self.det_verdict.to_json(),
            **self.pfaff.to_json(),
        }


def _det3(m) -> Expr:
    return simplify(add(
        mul(m[0][0], m[1][1], m[2][2]), mul(m[0][1], m[1][2], m[2][0]),
        mul(m[0][2], m[1][0], m[2][1]), -mul(m[0][2], m[1][1], m[2][0]),
        -mul(m[0][0], m[1][2], m[2][1]), -mul(m[0][1], m[1][0], m[2][2]),
    ))


def drag_report(kind: DragKind, domain: Domain | None = None,
                config: ZeroConfig | None = None) -> DragReport:
    ch = KINEMATIC_CHART
    domain = domain or drag_domain(kind)
    f = friction_form(kind)
    df = d(f)
    alpha = kind.alpha
    u = [mul(_coerce(v), power(kind.speed, -1)) for v in _V]
    s = kind.projection_sign
    table = DiffForm.zero(ch, 2)
    for i, v in enumerate(_V):
        for j, x in enumerate(_X):
            entry = add(ONE if i == j else ZERO, mul(s, u[i], u[j]))
            table = table + (ch.d(v) ^ ch.d(x)).scale(-mul(alpha, entry))
    match = forms_equal(df, table, domain, config)
    # dv^i ∧ dx^j sits at key (x_j, v_i) with a sign flip
    inv_alpha = power(alpha, -1)
    fm = tuple(tuple(simplify(mul(df.coeff(x, v), inv_alpha)) for x in _X) for v in _V)
    det = _det3(fm)
    det_verdict = equals(det, Const(kind.expected_det), domain, config)
    return DragReport(kind, f, df, table, match, fm, det, det_verdict, cartan_class(f, domain, config))


def gravity_drag_form(m="m", g="g", alpha="alpha") -> DiffForm:
    ch = KINEMATIC_CHART
    m, g, alpha = _coerce(m), _coerce(g), _coerce(alpha)
    v1, v2, v3 = (_coerce(v) for v in _V)
    return DiffForm(ch, 1, [
        ((ch.index("x1"),), -mul(alpha, v1)),
        ((ch.index("x2"),), -mul(alpha, v2)),
        ((ch.index("x3"),), -add(mul(m, g), mul(alpha, v3))),
    ])


@dataclass(frozen=True)
class GravityDragReport:
    form: DiffForm
    terminal_velocity: Expr
    terminal_check: ZeroVerdict        # every spatial coefficient vanishes there
    df_unchanged: ZeroVerdict
    generic_check: ZeroVerdict         # NonZero away from equilibrium

    def to_json(self) -> dict:
        return {"form": self.form.render(), "terminal_v3": str(self.terminal_velocity),
                "terminal_check": self.terminal_check.to_json(),
                "df_unchanged": self.df_unchanged.to_json(),
                "generic_check": self.generic_check.to_json()}


def gravity_drag_report(m="m", g="g", alpha="alpha", domain: Domain | None = None,
                        config: ZeroConfig | None = None) -> GravityDragReport:
    domain = domain or drag_domain()
    f = gravity_drag_form(m, g, alpha)
    vt = simplify(-mul(_coerce(m), _coerce(g), power(_coerce(alpha), -1)))
    at = {"v1": ZERO, "v2": ZERO, "v3": vt}
    terminal = weakest(is_zero(substitute(f.coeff(x), at), domain, config) for x in _X)
    unchanged = forms_equal(d(f), d(friction_form(DragKind.linear(alpha))), domain, config)
    generic = form_is_zero(f, domain, config)
    return GravityDragReport(f, vt, terminal, unchanged, generic)


# ---------------------------------------------------------------- induction

@dataclass(frozen=True)
class FaradayReport:
    dsE: DiffForm
    faraday: ZeroVerdict
    I2: DiffForm
    pairing: Expr                       # ⟨E, dB/dt⟩
    I2_identity: ZeroVerdict            # I2 + ⟨E, dB/dt⟩ V_s = 0
    I2_verdict: ZeroVerdict
    I3: DiffForm

    def to_json(self) -> dict:
        return {"spatial_dE": self.dsE.render(), "faraday": self.faraday.to_json(),
                "I2": self.I2.render(), "E_dot_Bdot": str(self.pairing),
                "I2_identity": self.I2_identity.to_json(),
                "I2_verdict": self.I2_verdict.to_json(),
                "I3": self.I3.render(), "I3_reason": "dimensional (4-form on a 3-dimensional space)"}


def faraday_check(E: DiffForm, B: VectorField, vol: DiffForm | None = None,
                  time: str = "t", domain: Domain | None = None,
                  config: ZeroConfig | None = None) -> FaradayReport:
    ch = E.chart
    spatial = [n for n in ch.names if n != time]
    if len(spatial) != 3 or time not in ch:
        raise ValueError("faraday_check expects a chart (t, x, y, z)")
    # spatial volume 3-form on the space-time chart
    if vol is None:
        vol = ch.d(spatial[0]) ^ ch.d(spatial[1]) ^ ch.d(spatial[2])
    if vol.degree != 3 or any(ch.index(time) in key for key in vol.terms):
        raise ValueError("vol must be a spatial 3-form")
    dsE = partial_d(E, spatial)
    Bdot = VectorField(ch, [differentiate(c, time) for c in B.components])
    faraday = forms_equal(dsE, -interior(Bdot, vol), domain, config)
    I2 = wedge(E, dsE)
    pairing = simplify(add(*(mul(E.coeff(n), Bdot[n]) for n in spatial)))
    identity = forms_equal(I2, vol.scale(-pairing), domain, config)
    return FaradayReport(dsE, faraday, I2, pairing, identity,
                         form_is_zero(I2, domain, config), wedge(dsE, dsE))


# ---------------------------------------------------------------- rolling

ROLLING_CHART = Chart("x y theta psi")


def rolling_constraint() -> DiffForm:
    ch = ROLLING_CHART
    psi = sym("psi")
    return ch.d("x").scale(sin(psi)) + ch.d("y").scale(cos(psi))


def rolling_report(domain: Domain | None = None, config: ZeroConfig | None = None) -> dict:
    rep = cartan_class(rolling_constraint(), domain, config)
    return {**rep.to_json(), "degrees_of_freedom": rep.dimension - 1}


# ---------------------------------------------------------------- thermodynamics

@dataclass(frozen=True)
class _ThermoLayout:
    natural: tuple[str, str]
    potential: str
    conjugates: tuple[str, str]
    signs: tuple[int, int]          # θ = dΦ + signs[k]·conj_k·d(natural_k)


_LAYOUTS = {
    "U": _ThermoLayout(("V", "S"), "U", ("P", "T"), (1, -1)),
    "F": _ThermoLayout(("V", "T"), "F", ("P", "S"), (1, 1)),
    "H": _ThermoLayout(("P", "S"), "H", ("V", "T"), (-1, -1)),
    "G": _ThermoLayout(("P", "T"), "G", ("V", "S"), (-1, 1)),
}


@dataclass(frozen=True)
class ThermoPotential:
    tag: str
    function: Expr | None = None

    def __post_init__(self):
        if self.tag not in _LAYOUTS:
            raise ValueError(f"unknown potential {self.tag!r}; use one of U, F, H, G")
        if self.function is not None:
            object.__setattr__(self, "function", _coerce(self.function))
            stray = free_symbols(self.function) - set(self.natural)
            if stray:
                raise ValueError(f"{self.tag} must depend only on {', '.join(self.natural)}; "
                                 f"found {', '.join(sorted(stray))}")

    @property
    def layout(self) -> _ThermoLayout:
        return _LAYOUTS[self.tag]

    @property
    def natural(self) -> tuple[str, str]:
        return self.layout.natural

    @property
    def chart(self) -> Chart:
        lay = self.layout
        return Chart(lay.natural + (lay.potential,) + lay.conjugates)

    def slot_labels(self) -> tuple[str, ...]:
        """Coordinates with their sign-bearing slot, e.g. ``-T``."""
        lay = self.layout
        conj = tuple(c if s > 0 else f"-{c}" for c, s in zip(lay.conjugates, lay.signs))
        return lay.natural + (lay.potential,) + conj

    def conjugates_of(self) -> tuple[Expr, Expr]:
        """Conjugate variables forced by a Legendrian section."""
        if self.function is None:
            raise ValueError("no potential function supplied")
        lay = self.layout
        return tuple(simplify(-mul(s, differentiate(self.function, n)))
                     for n, s in zip(lay.natural, lay.signs))


def thermo_contact_form(p: ThermoPotential) -> DiffForm:
    ch = p.chart
    lay = p.layout
    theta = ch.d(lay.potential)
    for n, c, s in zip(lay.natural, lay.conjugates, lay.signs):
        theta = theta + ch.d(n).scale(mul(s, _coerce(c)))
    return theta


def maxwell_identity(P, T) -> Expr:
    """``∂T/∂V + ∂P/∂S`` for user-supplied P(V, S) and T(V, S)."""
    return simplify(differentiate(_coerce(T), "V") + differentiate(_coerce(P), "S"))


def maxwell_residual(p: ThermoPotential, conjugates: Sequence) -> Expr:
    """Coefficient of the pulled-back dθ on d(nat1) ∧ d(nat2)."""
    lay = p.layout
    (n1, n2), (s1, s2) = lay.natural, lay.signs
    c1, c2 = (_coerce(c) for c in conjugates)
    return simplify(mul(s2, differentiate(c2, n1)) - mul(s1, differentiate(c1, n2)))


@dataclass(frozen=True)
class ThermoSectionReport:
    potential: ThermoPotential
    conjugates: tuple[Expr, Expr]
    theta_pullback: ZeroVerdict
    omega_pullback: ZeroVerdict
    maxwell: Expr

    def to_json(self) -> dict:
        lay = self.potential.layout
        return {
            "potential": self.potential.tag,
            "function": str(self.potential.function),
            "chart": list(self.potential.slot_labels()),
            "conjugates": {c: str(e) for c, e in zip(lay.conjugates, self.conjugates)},
            "legendrian": self.theta_pullback.to_json(),
            "maxwell_residual": str(self.maxwell),
            "maxwell": self.omega_pullback.to_json(),
        }


def legendrian_section_check(p: ThermoPotential, conjugates: Sequence | None = None,
                             domain: Domain | None = None,
                             config: ZeroConfig | None = None) -> ThermoSectionReport:
    """Pull θ and dθ back along (nat, Φ(nat), conjugates).

    Without ``conjugates`` they are derived from Φ, which makes s*θ vanish by
    construction; supplying them tests an arbitrary section.
    """
    if p.function is None:
        raise ValueError("legendrian_section_check needs a potential function")
    conj = p.conjugates_of() if conjugates is None else tuple(_coerce(c) for c in conjugates)
    for c in conj:
        stray = free_symbols(c) - set(p.natural)
        if stray:
            raise ValueError(f"conjugate depends on {', '.join(sorted(stray))}")
    lay = p.layout
    base = Chart(lay.natural)
    comps = {n: _coerce(n) for n in lay.natural}
    comps[lay.potential] = p.function
    comps.update(zip(lay.conjugates, conj))
    s = SmoothMap(base, p.chart, comps)
    theta = thermo_contact_form(p)
    return ThermoSectionReport(
        p, conj,
        form_is_zero(pullback(s, theta), domain, config),
        form_is_zero(pullback(s, d(theta)), domain, config),
        maxwell_residual(p, conj),
    )


# ---------------------------------------------------------------- Carathéodory

@dataclass(frozen=True)
class CaratheodoryReport:
    frobenius: FrobeniusResult

    @property
    def local_integrating_factor(self) -> bool:
        return self.frobenius.integrable

    def to_json(self) -> dict:
        msg = ("a local integrating factor exists near generic points (dQ = T dS locally)"
               if self.local_integrating_factor else
               "no local integrating factor: adiabatically accessible neighbourhoods")
        return {**self.frobenius.to_json(), "local_integrating_factor": self.local_integrating_factor,
                "conclusion": msg}


def caratheodory_check(dQ: DiffForm, domain: Domain | None = None,
                       config: ZeroConfig | None = None) -> CaratheodoryReport:
    return CaratheodoryReport(frobenius_test(dQ, domain, config))


# ---------------------------------------------------------------- kinetic term

@dataclass(frozen=True)
class KineticReport:
    momentum_form: DiffForm
    differential: DiffForm
    antisymmetric: DiffForm
    agreement: ZeroVerdict
    exactness: ZeroVerdict

    @property
    def exact(self) -> bool:
        return self.exactness.is_zero

    def to_json(self) -> dict:
        return {"momentum_form": self.momentum_form.render(), "d": self.differential.render(),
                "antisymmetric_part": self.antisymmetric.render(),
                "agreement": self.agreement.to_json(), "exact": self.exact,
                "exactness": self.exactness.to_json()}


def kinetic_term_exactness(m: Sequence[Sequence], chart: Chart, velocities: Sequence[str] | None = None,
                           domain: Domain | None = None,
                           config: ZeroConfig | None = None) -> KineticReport:
    vs = tuple(velocities) if velocities is not None else chart.names
    n = len(vs)
    if len(m) != n or any(len(row) != n for row in m):
        raise ValueError(f"mass matrix must be {n}x{n} to match the velocity coordinates")
    M = [[_coerce(c) for c in row] for row in m]
    pform = DiffForm.zero(chart, 1)
    for j in range(n):
        pj = add(*(mul(M[i][j], _coerce(vs[i])) for i in range(n)))
        pform = pform + chart.d(vs[j]).scale(pj)
    anti = DiffForm.zero(chart, 2)
    for i in range(n):
        for j in range(n):
            if i != j:
                anti = anti + (chart.d(vs[i]) ^ chart.d(vs[j])).scale(
                    mul(Fraction(1, 2), M[i][j] - M[j][i]))
    dp = d(pform)
    return KineticReport(pform, dp, anti, forms_equal(dp, anti, domain, config),
                         form_is_zero(anti, domain, config))


# ---------------------------------------------------------------- metrics and flows

def _det(m: list[list[Expr]]) -> Expr:
    n = len(m)
    if n == 1:
        return m[0][0]
    terms = []
    for j in range(n):
        if m[0][j] == ZERO:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        terms.append(mul(-1 if j % 2 else 1, m[0][j], _det(minor)))
    return add(*terms)


@dataclass(frozen=True)
class Metric:
    chart: Chart
    matrix: tuple[tuple[Expr, ...], ...]

    def __init__(self, chart: Chart, matrix: Sequence[Sequence]):
        rows = tuple(tuple(simplify(_coerce(c)) for c in row) for row in matrix)
        n = chart.dim
        if len(rows) != n or any(len(r) != n for r in rows):
            raise ValueError(f"metric must be {n}x{n}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"metric is not symmetric at ({i}, {j})")
        object.__setattr__(self, "chart", chart)
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def euclidean(cls, chart: Chart) -> "Metric":
        n = chart.dim
        return cls(chart, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def minkowski(cls, chart: Chart) -> "Metric":
        """Signature (+, -, -, -) with the first coordinate as time."""
        n = chart.dim
        return cls(chart, [[(1 if i == 0 else -1) if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def det(self) -> Expr:
        return simplify(_det([list(r) for r in self.matrix]))

    def degeneracy(self, domain: Domain | None = None, config: ZeroConfig | None = None) -> ZeroVerdict:
        """Zero verdict for the determinant; a zero verdict means degenerate."""
        return is_zero(self.det, domain, config)

    def inverse(self) -> tuple[tuple[Expr, ...], ...]:
        n = self.chart.dim
        m = [list(r) for r in self.matrix]
        inv_det = power(self.det, -1)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                minor = [r[:i] + r[i + 1:] for k, r in enumerate(m) if k != j]
                cof = _det(minor) if minor else ONE
                row.append(simplify(mul(-1 if (i + j) % 2 else 1, cof, inv_det)))
            out.append(tuple(row))
        return tuple(out)

    def covector_norm(self, v: DiffForm) -> Expr:
        """``g^{-1}(v, v)``."""
        gi = self.inverse()
        n = self.chart.dim
        return simplify(add(*(mul(gi[i][j], v.coeff(i), v.coeff(j))
                              for i in range(n) for j in range(n))))


class FlowKind(enum.Enum):
    POTENTIAL = ("PotentialFlow", "v = dψ")
    INTEGRATING_FACTOR = ("IntegratingFactor", "v = μdλ")
    CLEBSCH = ("ClebschFlow", "v = dψ + μdλ")
    RANK_FOUR = ("RankFourFlow", "v = μ₁dλ₁ + μ₂dλ₂")

    @property
    def tag(self) -> str:
        return self.value[0]

    @property
    def normal_form(self) -> str:
        return self.value[1]


_FLOW_BY_CLASS = {1: FlowKind.POTENTIAL, 2: FlowKind.INTEGRATING_FACTOR,
                  3: FlowKind.CLEBSCH, 4: FlowKind.RANK_FOUR}


@dataclass(frozen=True)
class FlowClassification:
    kind: FlowKind
    pfaff: PfaffReport
    vorticity_form: DiffForm             # dv (3D) or v ∧ dv (4D)
    vorticity_vector: VectorField
    frobenius_scalar: Expr               # v(ω_k)
    frobenius_verdict: ZeroVerdict
    causal_norm: Expr
    causal_type: str
    helicity_4form: DiffForm | None = None

    def to_json(self) -> dict:
        out = {
            "flow": self.kind.tag, "normal_form": self.kind.normal_form,
            "vorticity_form": self.vorticity_form.render(),
            "vorticity_vector": self.vorticity_vector.render(),
            "frobenius_scalar": str(self.frobenius_scalar),
            "frobenius_verdict": self.frobenius_verdict.to_json(),
            "causal_norm": str(self.causal_norm), "causal_type": self.causal_type,
            "pfaff": self.pfaff.to_json(),
        }
        if self.helicity_4form is not None:
            out["dv_wedge_dv"] = self.helicity_4form.render()
        return out


def _sign_type(e: Expr, domain: Domain | None, config: ZeroConfig | None) -> str:
    """positive / negative / null / mixed on seeded samples."""
    config = config or ZeroConfig()
    if is_zero(e, domain, config).is_zero:
        return "null"
    names = sorted(free_symbols(e))
    if not names:
        val = evaluate(e, {})
        return "positive" if val > 0 else "negative"
    dom = domain or Domain()
    rng = np.random.default_rng([config.seed, 7])
    pts = np.column_stack([rng.uniform(*dom.interval(n), size=4 * config.probes) for n in names])
    vals, _, ok = run_tape(compile_tape(simplify(e), tuple(names)), pts)
    vals = vals[ok.astype(bool)]
    if len(vals) and np.all(vals > 0):
        return "positive"
    if len(vals) and np.all(vals < 0):
        return "negative"
    return "mixed"


def vorticity_analysis(v: DiffForm, g: Metric | None = None, vol: VolumeElement | None = None,
                       domain: Domain | None = None,
                       config: ZeroConfig | None = None) -> FlowClassification:
    ch = v.chart
    if v.degree != 1:
        raise ValueError("the covelocity must be a 1-form")
    if ch.dim not in (3, 4):
        raise ValueError("vorticity analysis supports 3- and 4-dimensional charts")
    g = g or (Metric.euclidean(ch) if ch.dim == 3 else Metric.minkowski(ch))
    vol = vol or VolumeElement.standard(ch)
    if g.degeneracy(domain, config).is_zero:
        raise ValueError("metric is degenerate on the domain")
    dv = d(v)
    helicity = None
    if ch.dim == 3:
        vform = dv
    else:
        vform = wedge(v, dv)
        helicity = wedge(dv, dv)
    if vform.is_structurally_zero or form_is_zero(vform, domain, config).is_zero:
        omega = VectorField(ch, [ZERO] * ch.dim)
    else:
        omega = poincare_dual_form(vform, vol, domain, config)
    scalar = simplify(add(*(mul(v.coeff(i), omega.components[i]) for i in range(ch.dim))))
    rep = cartan_class(v, domain, config)
    norm = g.covector_norm(v)
    return FlowClassification(
        _FLOW_BY_CLASS[rep.class_], rep, vform, omega, scalar,
        is_zero(scalar, domain, config), norm, _sign_type(norm, domain, config), helicity,
    )


# ---------------------------------------------------------------- gauge fields

@dataclass(frozen=True)
class GaugeReport:
    A: DiffForm
    F: DiffForm
    rank: int
    chern_simons: DiffForm
    FF: DiffForm
    first_chern_integrand: DiffForm
    second_chern_integrand: DiffForm
    pfaff: PfaffReport
    gauge_invariance: ZeroVerdict | None = None

    def to_json(self) -> dict:
        out = {"A": self.A.render(), "F": self.F.render(), "rank": self.rank,
               "decomposable": self.rank == 2,
               "chern_simons": self.chern_simons.render(), "F_wedge_F": self.FF.render(),
               "first_chern_integrand": self.first_chern_integrand.render(),
               "second_chern_integrand": self.second_chern_integrand.render(),
               "pfaff": self.pfaff.to_json()}
        if self.gauge_invariance is not None:
            out["gauge_invariance"] = self.gauge_invariance.to_json()
        return out


def gauge_shift_check(A: DiffForm, lam, domain: Domain | None = None,
                      config: ZeroConfig | None = None) -> ZeroVerdict:
    """``d(A + dλ) - dA``."""
    shifted = A + d(A.chart.scalar(_coerce(lam)))
    return forms_equal(d(shifted), d(A), domain, config)


def gauge_analysis(A: DiffForm, lam=None, domain: Domain | None = None,
                   config: ZeroConfig | None = None) -> GaugeReport:
    if A.degree != 1:
        raise ValueError("gauge potential must be a 1-form")
    F = d(A)
    two_pi = mul(2, sym("pi"))
    FF = wedge(F, F)
    return GaugeReport(
        A, F, rank_of_two_form(F, domain, config), wedge(A, F), FF,
        F.scale(power(two_pi, -1)), FF.scale(power(two_pi, -2)),
        cartan_class(A, domain, config),
        None if lam is None else gauge_shift_check(A, lam, domain, config),
    )
