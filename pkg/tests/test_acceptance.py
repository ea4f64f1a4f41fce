"""The twelve acceptance criteria, one test group per criterion.

Run with ``pytest tests/test_acceptance.py``; the terminal summary prints one
PASS/FAIL line per criterion.
"""

import io
import json
import random
from contextlib import redirect_stdout

import pytest

from helpers import calibration_corpus, random_field, random_form, random_poly

from pfaffian.cli import main
from pfaffian.expr import add, cos, exp, mul, power, sin, sym
from pfaffian.forms import (
    Chart, DiffForm, SmoothMap, d, form_is_zero, forms_equal, interior, pullback,
    wedge, wedge_power,
)
from pfaffian.mech import (
    CotangentChart, JetChart, contact_form, hamiltonian_vector_field, jet_section,
    lie_bracket, lie_derivative, non_hamiltonian_field, omega_bracket, poisson_bracket,
    prolong, spencer_contact_check, spencer_operator, symplectic_form, vector_to_form,
)
from pfaffian.parse import parse_form
from pfaffian.pfaff import cartan_class, integrability_sequence
from pfaffian.physics import (
    DragKind, ThermoPotential, drag_report, gauge_analysis, gauge_shift_check,
    gravity_drag_report, legendrian_section_check, maxwell_identity, maxwell_residual,
    rolling_constraint, thermo_contact_form, vorticity_analysis,
)
from pfaffian.zerotest import Verdict, ZeroConfig, false_accept_bound, is_zero, weakest

x, y, z, w, psi = (sym(n) for n in ("x", "y", "z", "w", "psi"))


def crit(number, title):
    return pytest.mark.criterion(number, title)


def assert_zero(verdict):
    assert verdict.kind in (Verdict.STRUCTURAL_ZERO, Verdict.PROBABLY_ZERO), verdict


def assert_auditable_zero(verdict, probes=32):
    """Zero verdict; a probabilistic one must carry its seed and, for polynomials, a bound."""
    assert_zero(verdict)
    if verdict.kind is Verdict.PROBABLY_ZERO:
        assert verdict.probes == probes and verdict.seed is not None
        if verdict.bound is not None:
            assert verdict.bound <= false_accept_bound(64, probes)


# ---------------------------------------------------------------- 1

C1 = crit(1, "rolling tire: I1, I2 match, I3 = 0 structurally, class 3, codim 2, max dim 2")


@C1
def test_rolling_tire_sequence():
    ch = Chart("x y theta psi")
    xi = rolling_constraint()
    seq = integrability_sequence(xi)
    dpsi = ch.d("psi")
    I1 = wedge(dpsi, ch.d("x").scale(cos(psi)) - ch.d("y").scale(sin(psi)))
    I2 = dpsi ^ ch.d("x") ^ ch.d("y")
    assert forms_equal(seq[1].form, I1).structural
    assert forms_equal(seq[2].form, I2).structural
    assert seq[3].verdict.structural
    rep = cartan_class(xi)
    assert (rep.class_, rep.codimension, rep.max_integral_dimension) == (3, 2, 2)
    assert rep.exactness == "exact"


# ---------------------------------------------------------------- 2

C2 = crit(2, "thermodynamic contact forms: I4 matches, class 5, max dim 2 for U, F, H, G")


@C2
@pytest.mark.parametrize("tag", ["U", "F", "H", "G"])
def test_thermo_contact_class(tag):
    p = ThermoPotential(tag)
    theta = thermo_contact_form(p)
    ch = p.chart
    lay = p.layout
    (n1, n2), (c1, c2), (s1, s2) = lay.natural, lay.conjugates, lay.signs
    # θ ∧ dθ ∧ dθ with dθ = Σ s_k dc_k ∧ dn_k
    expected = (ch.d(lay.potential) ^ ch.d(c1) ^ ch.d(n1) ^ ch.d(c2) ^ ch.d(n2)).scale(2 * s1 * s2)
    seq = integrability_sequence(theta)
    assert forms_equal(seq[4].form, expected).structural
    rep = cartan_class(theta)
    assert (rep.class_, rep.max_integral_dimension) == (5, 2)
    assert seq[5].reason == "dimensional"


@C2
def test_thermo_I4_literal():
    ch = Chart("V S U P T")
    theta = parse_form("dU + P*dV - T*dS", ch)
    I4 = integrability_sequence(theta)[4].form
    literal = (ch.d("U") ^ ch.d("P") ^ ch.d("V") ^ ch.d("S") ^ ch.d("T")).scale(2)
    assert_zero(forms_equal(I4, literal))


# ---------------------------------------------------------------- 3

C3 = crit(3, "drag table: df rows, det 0/1/2, classes 5/6/6, codim 3, max dim 4, gravity term")


@C3
@pytest.mark.parametrize("kind,det,cls", [("kinetic", 0, 5), ("linear", 1, 6), ("nonlinear", 2, 6)])
def test_drag_table(kind, det, cls):
    rep = drag_report(DragKind.from_name(kind))
    assert_zero(rep.table_match)
    assert rep.kind.expected_det == det
    assert_zero(rep.det_verdict)
    assert (rep.pfaff.class_, rep.pfaff.codimension, rep.pfaff.max_integral_dimension) == (cls, 3, 4)


@C3
def test_gravity_drag():
    rep = gravity_drag_report()
    assert_zero(rep.df_unchanged)
    assert_zero(rep.terminal_check)
    assert rep.generic_check.kind is Verdict.NONZERO


# ---------------------------------------------------------------- 4

C4 = crit(4, "normal-form table: classes 1-4 with codimensions 1, 1, 2, 2")


@C4
def test_table_of_normal_forms():
    ch = Chart("x1 x2 x3 x4")
    x1, x3 = sym("x1"), sym("x3")
    forms = [ch.d("x1"), ch.d("x2").scale(x1), ch.d("x1") + ch.d("x3").scale(sym("x2")),
             ch.d("x2").scale(x1) + ch.d("x4").scale(x3)]
    got = [(r.class_, r.codimension) for r in map(cartan_class, forms)]
    assert got == [(1, 1), (2, 1), (3, 2), (4, 2)]


# ---------------------------------------------------------------- 5

C5 = crit(5, "Maxwell identities on 25 random potentials per chart; non-conjugate section NonZero")


@C5
@pytest.mark.parametrize("tag", ["U", "F", "H", "G"])
def test_maxwell_random_potentials(tag):
    rng = random.Random(f"maxwell-{tag}")
    names = ThermoPotential(tag).natural
    for _ in range(25):
        p = ThermoPotential(tag, random_poly(rng, names, 3, 4))
        rep = legendrian_section_check(p)
        assert_zero(rep.theta_pullback)
        assert_zero(rep.omega_pullback)
        assert_zero(is_zero(maxwell_residual(p, p.conjugates_of())))
        if tag == "U":
            P, T = p.conjugates_of()
            assert_zero(is_zero(maxwell_identity(P, T)))


@C5
def test_non_conjugate_section():
    V, S = sym("V"), sym("S")
    p = ThermoPotential("U", exp(S) / V)
    rep = legendrian_section_check(p, conjugates=[V * S, V])
    assert rep.omega_pullback.kind is Verdict.NONZERO
    assert rep.omega_pullback.witness


# ---------------------------------------------------------------- 6

C6 = crit(6, "symplectic suite: volume powers, conservation, bracket homomorphism, Jacobi, drift")


@C6
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_symplectic_powers(n):
    omega = symplectic_form(CotangentChart.standard(n))
    assert form_is_zero(wedge_power(omega, n)).kind is Verdict.NONZERO
    assert form_is_zero(wedge_power(omega, n + 1)).structural


@C6
def test_conservation_homomorphism_jacobi():
    rng = random.Random("symplectic")
    c = CotangentChart.standard(2)
    names = c.chart.names
    om = symplectic_form(c)
    for _ in range(20):
        f, g, h = (random_poly(rng, names, 3, 4) for _ in range(3))
        assert poisson_bracket(f, f, c) == 0
        assert_zero(is_zero(hamiltonian_vector_field(f, c).apply(f)))
        assert_zero(form_is_zero(lie_derivative(hamiltonian_vector_field(f, c), om)))
        lhs = lie_bracket(hamiltonian_vector_field(f, c), hamiltonian_vector_field(g, c))
        rhs = hamiltonian_vector_field(omega_bracket(f, g, c), c)
        assert_auditable_zero(weakest(is_zero(a - b) for a, b in zip(lhs.components, rhs.components)))
        pb = lambda a, b: poisson_bracket(a, b, c)  # noqa: E731
        assert_auditable_zero(is_zero(pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))))


@C6
def test_non_hamiltonian_drift():
    rng = random.Random("drift")
    c = CotangentChart.standard(2)
    names = c.chart.names
    ch = c.chart
    for _ in range(10):
        H = random_poly(rng, names, 3, 4)
        pairs = [(random_poly(rng, names, 2, 3), random_poly(rng, names, 2, 3)) for _ in range(2)]
        nh = non_hamiltonian_field(H, pairs, c)
        rate = nh.field.apply(H)
        drift = add(*(mul(mu, omega_bracket(v, H, c)) for mu, v in pairs))
        assert_auditable_zero(is_zero(rate - drift))
        source = DiffForm.zero(ch, 2)
        for mu, v in pairs:
            source = source + wedge(d(ch.scalar(mu)), d(ch.scalar(v)))
        assert_auditable_zero(forms_equal(d(vector_to_form(nh.field, c)), source))
        # with the standard contraction the Lie derivative carries the opposite sign
        assert_auditable_zero(forms_equal(lie_derivative(nh.field, symplectic_form(c)), -source))


# ---------------------------------------------------------------- 7

C7 = crit(7, "jet suite: prolongations are holonomic, Ds against pulled-back contact forms, class 3")


@C7
def test_prolongations_are_holonomic():
    rng = random.Random("jets")
    for k in range(20):
        p, m = 1 + k % 2, 1 + (k // 2) % 2
        base = Chart([f"u{a}" for a in range(1, p + 1)])
        target = Chart([f"y{i}" for i in range(1, m + 1)])
        xmap = SmoothMap(base, target, [random_poly(rng, base.names, 3, 4) for _ in range(m)])
        D = spencer_operator(prolong(xmap))
        assert all(e == 0 for row in D for e in row)


@C7
def test_spencer_against_contact_pullback():
    rng = random.Random("spencer")
    jet = JetChart.source_form(("u1", "u2"), ("y1", "y2"))
    for _ in range(10):
        target = [random_poly(rng, jet.base, 3, 3) for _ in jet.target]
        slopes = [[random_poly(rng, jet.base, 2, 3) for _ in jet.base] for _ in jet.target]
        s = jet_section(jet, target, slopes)
        assert_zero(spencer_contact_check(s))
    u = sym("u")
    s = jet_section(JetChart.source_form(), [u ** 2], [[3 * u]])
    assert spencer_operator(s) == [[u]]


@C7
def test_scalar_contact_form_class():
    rep = cartan_class(contact_form(JetChart.scalar_form()))
    assert rep.class_ == 3


# ---------------------------------------------------------------- 8

C8 = crit(8, "structural calculus on 100+ random forms with auditable verdicts")


def _structural_cases(seed, count):
    rng = random.Random(seed)
    ch = Chart("x y z w")
    for _ in range(count):
        p, q = rng.randint(0, 2), rng.randint(0, 2)
        yield ch, rng, random_form(rng, ch, p), random_form(rng, ch, q)


@C8
def test_structural_identities():
    n = 0
    for ch, rng, a, b in _structural_cases("calculus", 110):
        p, q = a.degree, b.degree
        assert_auditable_zero(form_is_zero(d(d(a))))
        assert_auditable_zero(forms_equal(wedge(a, b), wedge(b, a).scale((-1) ** (p * q))))
        leibniz = wedge(d(a), b) + wedge(a, d(b)).scale((-1) ** p)
        assert_auditable_zero(forms_equal(d(wedge(a, b)), leibniz))
        if p + q >= 1:
            X = random_field(rng, ch)
            lhs = interior(X, wedge(a, b))
            rhs = DiffForm.zero(ch, p + q - 1)
            if p >= 1:
                rhs = rhs + wedge(interior(X, a), b)
            if q >= 1:
                rhs = rhs + wedge(a, interior(X, b)).scale((-1) ** p)
            assert_auditable_zero(forms_equal(lhs, rhs))
        n += 1
    assert n >= 100


@C8
def test_pullback_commutes_with_d():
    rng = random.Random("pullback")
    src = Chart("s t")
    tgt = Chart("x y z w")
    for _ in range(100):
        m = SmoothMap(src, tgt, [random_poly(rng, src.names, 2, 3) for _ in tgt.names])
        a = random_form(rng, tgt, rng.randint(0, 1))
        assert_auditable_zero(forms_equal(pullback(m, d(a)), d(pullback(m, a))))


# ---------------------------------------------------------------- 9

C9 = crit(9, "vorticity: rigid rotation, Clebsch class 3, rank-four flow orthogonality")


@C9
def test_vorticity_cases():
    c3 = Chart("x y z")
    rigid = vorticity_analysis(DiffForm(c3, 1, {(0,): -y, (1,): x}))
    assert [str(e) for e in rigid.vorticity_vector.components] == ["0", "0", "2"]
    assert rigid.frobenius_scalar == 0
    cl = Chart("psi mu lam")
    clebsch = cartan_class(cl.d("psi") + cl.d("lam").scale(sym("mu")))
    assert clebsch.class_ == 3
    c4 = Chart("x1 x2 x3 x4")
    flow = vorticity_analysis(DiffForm(c4, 1, {(1,): sym("x1"), (3,): sym("x3")}))
    assert form_is_zero(flow.helicity_4form).kind is Verdict.NONZERO
    assert flow.kind.tag == "RankFourFlow"
    assert_zero(flow.frobenius_verdict)


@C9
def test_vorticity_orthogonality_random():
    rng = random.Random("orthogonal")
    c4 = Chart("t x y z")
    for _ in range(10):
        v = random_form(rng, c4, 1, max_degree=2, density=1.0)
        flow = vorticity_analysis(v)
        assert_zero(flow.frobenius_verdict)


# ---------------------------------------------------------------- 10

C10 = crit(10, "gauge: invariance, rank 2 vs 4, Chern-Simons and Chern integrands")


@C10
def test_gauge_invariance_random():
    rng = random.Random("gauge")
    ch = Chart("x y z w")
    for _ in range(10):
        A = random_form(rng, ch, 1)
        lam = random_poly(rng, ch.names, 3, 3) + sin(random_poly(rng, ch.names, 2, 2))
        assert gauge_shift_check(A, lam).structural


@C10
def test_gauge_catalog_cases():
    ch = Chart("x y z w")
    two_pi = 2 * sym("pi")
    r2 = gauge_analysis(DiffForm(ch, 1, {(1,): x}), lam=sin(x))
    assert r2.rank == 2 and r2.pfaff.class_ == 2
    assert r2.chern_simons.is_structurally_zero and r2.FF.is_structurally_zero
    assert forms_equal(r2.first_chern_integrand, (ch.d("x") ^ ch.d("y")).scale(power(two_pi, -1))).structural
    assert r2.gauge_invariance.structural
    r4 = gauge_analysis(DiffForm(ch, 1, {(1,): x, (3,): z}))
    assert r4.rank == 4 and r4.pfaff.class_ == 4
    vol = ch.d("x") ^ ch.d("y") ^ ch.d("z") ^ ch.d("w")
    cs = (ch.d("y") ^ ch.d("z") ^ ch.d("w")).scale(x) + (ch.d("x") ^ ch.d("y") ^ ch.d("w")).scale(z)
    assert forms_equal(r4.chern_simons, cs).structural
    assert forms_equal(r4.FF, vol.scale(2)).structural
    assert forms_equal(r4.second_chern_integrand, vol.scale(2 * power(two_pi, -2))).structural


# ---------------------------------------------------------------- 11

C11 = crit(11, "zero-test calibration: 0 false NonZero, 0 false zero, reproducible verdicts")


@C11
def test_calibration_corpus():
    identities, non_identities = calibration_corpus()
    assert len(identities) == 50 and len(non_identities) == 50
    false_nonzero = [n for n, e in identities if not is_zero(e).is_zero]
    false_zero = [n for n, e in non_identities if is_zero(e).is_zero]
    assert false_nonzero == [] and false_zero == []
    for _, e in identities:
        v = is_zero(e)
        if v.kind is Verdict.PROBABLY_ZERO:
            again = is_zero(e, config=ZeroConfig(seed=v.seed), label=v.label)
            assert again == v


# ---------------------------------------------------------------- 12

C12 = crit(12, "CLI: catalog self-test, byte-identical JSON, parse round-trip on 100 forms")


def _run(argv):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


@C12
def test_catalog_verify_all():
    code, _ = _run(["examples", "--verify-all"])
    assert code == 0


@C12
def test_json_determinism():
    argv = ["analyze", "--chart", "x,y,theta,psi", "--form", "sin(psi)*dx + cos(psi)*dy",
            "--format", "json", "--seed", "7"]
    first, second = _run(argv), _run(argv)
    assert first[0] == 0 and first == second
    assert json.loads(first[1])["schema"] == "pfaffian-report/1"


@C12
def test_parse_round_trip():
    rng = random.Random("roundtrip")
    ch = Chart("x y theta psi")
    for _ in range(100):
        a = random_form(rng, ch, rng.randint(1, 3))
        if rng.random() < 0.5:
            a = a + random_form(rng, ch, a.degree).scale(sin(sym(rng.choice(ch.names))))
        back = parse_form(a.render(), ch)
        assert forms_equal(back, a).structural
