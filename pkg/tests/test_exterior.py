import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import (contraction_by_evaluation, d_by_invariant_formula, evaluate_form, unit,
                   wedge_by_shuffles)
from conftest import forms, polynomials
from multisymplectic.errors import ChartMismatch
from multisymplectic.polynomial import Polynomial
from multisymplectic.exterior import (Chart, CoordinateMap, DifferentialForm, PolyVectorField, ProductChart,
                                      contract, contract_multi, euclidean, exterior_derivative, lie_derivative,
                                      pullback, wedge)

C3 = euclidean("x", "y", "z")
C4 = euclidean("x", "y", "z", "w")


@st.composite
def vector_fields(draw, chart, max_deg=1):
    return PolyVectorField(chart, [draw(polynomials(chart.dim, max_deg, 2)) for _ in range(chart.dim)])


def test_contraction_convention():
    c = euclidean("x", "y")
    dy = PolyVectorField(c, [0, 1])
    assert contract(dy, DifferentialForm.basis(c, 0, 1)) == -DifferentialForm.basis(c, 0)


def test_basis_reorders_with_sign():
    assert DifferentialForm.basis(C3, 1, 0) == -DifferentialForm.basis(C3, 0, 1)
    assert DifferentialForm.basis(C3, 0, 0).is_zero()


@given(forms(C4, 1), forms(C4, 2))
def test_wedge_matches_shuffle_formula(a, b):
    assert wedge(a, b) == wedge_by_shuffles(a, b)


@given(forms(C4, 1), forms(C4, 2), forms(C4, 1))
def test_wedge_graded_commutative_and_associative(a, b, c):
    assert wedge(a, b) == wedge(b, a).scale((-1) ** (a.degree * b.degree))
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


@given(st.integers(0, 3).flatmap(lambda k: forms(C4, k)))
def test_d_matches_invariant_formula(a):
    assert exterior_derivative(a) == d_by_invariant_formula(a)


@given(st.integers(0, 2).flatmap(lambda k: forms(C4, k)))
def test_d_squared_is_zero(a):
    assert exterior_derivative(exterior_derivative(a)).is_zero()


@given(forms(C4, 1), forms(C4, 2))
def test_d_is_a_graded_derivation(a, b):
    d = exterior_derivative
    assert d(wedge(a, b)) == wedge(d(a), b) + wedge(a, d(b)).scale((-1) ** a.degree)


@given(st.lists(vector_fields(C4), min_size=1, max_size=3), forms(C4, 3))
def test_contract_multi_is_evaluation_in_leading_slots(vs, a):
    assert contract_multi(vs, a) == contraction_by_evaluation(vs, a)


@given(vector_fields(C3), forms(C3, 1), forms(C3, 2))
def test_contraction_is_an_antiderivation(v, a, b):
    lhs = contract(v, wedge(a, b))
    rhs = wedge(contract(v, a), b) + wedge(a, contract(v, b)).scale((-1) ** a.degree)
    assert lhs == rhs


@given(vector_fields(C3), vector_fields(C3), forms(C3, 2))
def test_cartan_identities(u, v, a):
    d = exterior_derivative
    assert lie_derivative(v, a) == d(contract(v, a)) + contract(v, d(a))
    # iota_[u,v] = [L_u, iota_v]
    assert contract(u.bracket(v), a) == lie_derivative(u, contract(v, a)) - contract(v, lie_derivative(u, a))


def test_evaluation_oracle_agrees_with_contraction_on_units():
    a = DifferentialForm.basis(C3, 0, 1, 2, coeff=C3.coordinate(0))
    v = [unit(C3, 0), unit(C3, 1), unit(C3, 2)]
    assert evaluate_form(a, v) == C3.coordinate(0)


def test_periodic_coordinates_stay_out_of_coefficients():
    T = Chart(("t", "x"), (True, False))
    with pytest.raises(ValueError):
        T.coordinate("t")
    with pytest.raises(ValueError):
        DifferentialForm.function(T, Polynomial(2, {(1, 0): 1}))
    # d(x dt) = dx ^ dt, and dt is closed but not exact
    assert exterior_derivative(DifferentialForm.basis(T, "t", coeff=T.coordinate("x"))) == \
        DifferentialForm.basis(T, "x", "t")
    assert not exterior_derivative(DifferentialForm.basis(T, "t"))


def test_forms_on_different_charts_refuse_to_mix():
    a = DifferentialForm.basis(C3, 0)
    b = DifferentialForm.basis(euclidean("u", "v", "w"), 0)
    with pytest.raises(ChartMismatch):
        wedge(a, b)


def test_product_chart_lifts_and_projects():
    A, B = euclidean("x", "y"), euclidean("u", "v", "w")
    P = ProductChart.of(A, B)
    wa = DifferentialForm.basis(A, 0, 1, coeff=A.coordinate(0))
    wb = DifferentialForm.basis(B, 0, 1, 2)
    lifted = P.lift(wa, 0)
    assert lifted.chart == P.chart
    assert pullback(P.projection(0), wa) == lifted
    assert wedge(P.lift(wa, 0), P.lift(wb, 1)).degree == 5


@given(forms(C3, 1), forms(C3, 1))
def test_pullback_commutes_with_d_and_wedge(a, b):
    # an affine map R^3 -> R^3
    x, y, z = (C3.coordinate(i) for i in range(3))
    m = CoordinateMap(C3, C3, [x + y, y - z * 2, x + 1])
    d = exterior_derivative
    assert pullback(m, d(a)) == d(pullback(m, a))
    assert pullback(m, wedge(a, b)) == wedge(pullback(m, a), pullback(m, b))


def test_zero_forms_are_falsy_in_every_degree():
    for k in range(4):
        z = DifferentialForm.zero(C3, k)
        assert z.is_zero() and not z
