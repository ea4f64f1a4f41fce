import random

import pytest
from hypothesis import given, strategies as st

from helpers import random_poly
from pfaffian.expr import Const, simplify, sin, symbols
from pfaffian.forms import Chart, SmoothMap, VectorField, d, form_is_zero, forms_equal
from pfaffian.mech import (
    CotangentChart, JetChart, canonical_one_form, contact_form, form_to_vector,
    hamilton_equations, hamiltonian_vector_field, is_lagrangian, jet_section,
    lagrange_bracket, lagrange_pullback_check, lie_bracket, lie_derivative, non_hamiltonian_field,
    omega_bracket, poisson_bracket, prolong, spencer_contact_check, spencer_operator,
    symplectic_form, vector_to_form,
)
from pfaffian.pfaff import cartan_class
from pfaffian.zerotest import Verdict, is_zero

T1 = CotangentChart.standard(1)
T2 = CotangentChart.standard(2)
x, p = symbols("x p")
x1, x2, p1, p2 = symbols("x1 x2 p1 p2")


def test_standard_charts():
    assert T1.chart.names == ("x", "p")
    assert T2.chart.names == ("x1", "x2", "p1", "p2")
    with pytest.raises(ValueError):
        CotangentChart(("x",), ("p", "q"))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_canonical_form_class(n):
    c = CotangentChart.standard(n)
    r = cartan_class(canonical_one_form(c))
    assert r.class_ == 2 * n
    assert r.max_integral_dimension == n


def test_poisson_conventions():
    assert poisson_bracket(x, p, T1) == 1
    assert poisson_bracket(p * p, x, T1) == -2 * p
    assert simplify(omega_bracket(x, p, T1) + poisson_bracket(x, p, T1)) == 0


def test_oscillator_equations():
    eq = dict(hamilton_equations((p * p + x * x) / 2, T1))
    assert eq == {"x": p, "p": -x}


def test_vector_form_dictionary():
    c = T2.chart
    e1 = VectorField(c, {"x1": Const(1)})
    assert vector_to_form(e1, T2) == c.d("p1")
    ep = VectorField(c, {"p1": Const(1)})
    assert vector_to_form(ep, T2) == -c.d("x1")


def test_hamiltonian_field_form_is_dH():
    H = p1 * p1 / 2 + sin(x1) * x2 + p2 * x1
    xi = vector_to_form(hamiltonian_vector_field(H, T2), T2)
    assert forms_equal(xi, d(T2.chart.scalar(H))).is_zero


def test_non_hamiltonian_field():
    mu, v = x1 * p2, x2 * x2
    H = (p1 * p1 + p2 * p2) / 2
    nh = non_hamiltonian_field(H, [(mu, v)], T2)
    assert forms_equal(vector_to_form(nh.field, T2), nh.one_form).is_zero
    drift = nh.field.apply(H)
    assert is_zero(drift - mu * omega_bracket(v, H, T2)).is_zero
    omega_x = d(nh.one_form)
    expected = d(T2.chart.scalar(mu)) ^ d(T2.chart.scalar(v))
    assert forms_equal(omega_x, expected).is_zero
    lie = lie_derivative(nh.field, symplectic_form(T2))
    assert forms_equal(lie, -expected).is_zero


def test_lagrangian_submanifolds():
    src = Chart("a b")
    a, b = symbols("a b")
    graph = SmoothMap(src, T2.chart, [a, b, 2 * a + b, a + 3 * b])   # gradient of a^2 + ab + 3/2 b^2
    assert is_lagrangian(graph, T2).is_zero
    assert lagrange_pullback_check(graph, T2).is_zero
    twisted = SmoothMap(src, T2.chart, [a, b, b, Const(0)])
    assert lagrange_bracket(twisted, T2, "a", "b") == -1
    assert is_lagrangian(twisted, T2).kind is Verdict.NONZERO
    assert lagrange_pullback_check(twisted, T2).is_zero


def test_scalar_contact_form():
    j = JetChart.scalar_form()
    theta = contact_form(j)
    assert theta == j.chart.d("f") - j.chart.d("x").scale(p)
    assert cartan_class(theta).class_ == 3


def test_spencer_on_prolongation_and_non_holonomic_section():
    u, v = symbols("u v")
    m = SmoothMap(Chart("u v"), Chart("X Y"), [u * v, sin(u) + v])
    s = prolong(m)
    assert all(e == 0 for row in spencer_operator(s) for e in row)
    assert spencer_contact_check(s).is_zero
    jet = JetChart.source_form(("u",), ("X",))
    bad = jet_section(jet, [u * u], [[u]])
    assert simplify(spencer_operator(bad)[0][0] + u) == 0
    assert spencer_contact_check(bad).is_zero
    with pytest.raises(ValueError):
        JetChart.source_form(tuple("abcde"), ("X",))


# ---------------------------------------------------------------- properties

@given(st.integers(0, 10_000))
def test_form_vector_round_trip(seed):
    rng = random.Random(seed)
    c = T2.chart
    X = VectorField(c, [random_poly(rng, c.names, 2, 2) for _ in c.names])
    back = form_to_vector(vector_to_form(X, T2), T2)
    assert all(simplify(back[i] - X[i]) == 0 for i in range(c.dim))


@given(st.integers(0, 10_000))
def test_bracket_of_hamiltonian_fields(seed):
    rng = random.Random(seed)
    names = T2.chart.names
    f = random_poly(rng, names, 3, 3)
    g = random_poly(rng, names, 3, 3)
    lhs = lie_bracket(hamiltonian_vector_field(f, T2), hamiltonian_vector_field(g, T2))
    rhs = hamiltonian_vector_field(omega_bracket(f, g, T2), T2)
    assert all(is_zero(lhs[i] - rhs[i]).is_zero for i in range(4))


@given(st.integers(0, 10_000))
def test_jacobi_identity(seed):
    rng = random.Random(seed)
    f, g, h = (random_poly(rng, T2.chart.names, 2, 3) for _ in range(3))
    pb = lambda a, b: poisson_bracket(a, b, T2)  # noqa: E731
    assert is_zero(pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))).is_zero


@given(st.integers(0, 10_000))
def test_hamiltonian_flow_preserves_symplectic_form(seed):
    rng = random.Random(seed)
    H = random_poly(rng, T2.chart.names, 3, 4)
    X = hamiltonian_vector_field(H, T2)
    assert form_is_zero(lie_derivative(X, symplectic_form(T2))).is_zero
    assert is_zero(X.apply(H)).is_zero


@given(st.integers(0, 10_000))
def test_cartan_formula_consistent_on_functions(seed):
    rng = random.Random(seed)
    c = T2.chart
    f = random_poly(rng, c.names, 2, 3)
    X = hamiltonian_vector_field(random_poly(rng, c.names, 2, 2), T2)
    assert forms_equal(lie_derivative(X, d(c.scalar(f))), d(c.scalar(X.apply(f)))).is_zero
