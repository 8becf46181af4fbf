from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import polynomials
from multisymplectic.polynomial import Polynomial, from_terms

X = sympy.symbols("a b c")


def to_sympy(p: Polynomial):
    expr = sympy.Integer(0)
    for mono, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, e in zip(X, mono):
            term *= v ** e
        expr += term
    return sympy.expand(expr)


@given(polynomials(3), polynomials(3))
def test_ring_operations_match_sympy(p, q):
    assert to_sympy(p + q) == sympy.expand(to_sympy(p) + to_sympy(q))
    assert to_sympy(p * q) == sympy.expand(to_sympy(p) * to_sympy(q))
    assert to_sympy(p - q) == sympy.expand(to_sympy(p) - to_sympy(q))


@given(polynomials(3), st.integers(0, 2))
def test_diff_matches_sympy(p, i):
    assert to_sympy(p.diff(i)) == sympy.expand(sympy.diff(to_sympy(p), X[i]))


@given(polynomials(3), polynomials(3), st.lists(st.fractions(-2, 2, max_denominator=4), min_size=3, max_size=3))
def test_evaluation_is_a_ring_homomorphism(p, q, pt):
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)


@given(polynomials(2), polynomials(3), polynomials(3))
def test_compose_matches_substitution(p, u, v):
    got = p.compose([u, v], 3)
    want = to_sympy(p).subs({X[0]: sympy.Symbol("s0"), X[1]: sympy.Symbol("s1")}, simultaneous=True)
    want = want.subs({sympy.Symbol("s0"): to_sympy(u), sympy.Symbol("s1"): to_sympy(v)}, simultaneous=True)
    assert to_sympy(got) == sympy.expand(want)


def test_zero_terms_are_dropped():
    p = Polynomial(2, {(1, 0): 1, (0, 1): Fraction(1, 2)})
    q = p - Polynomial(2, {(1, 0): 1})
    assert q == Polynomial(2, {(0, 1): Fraction(1, 2)})
    assert not (p - p)
    assert (p - p).terms == {}


def test_from_terms_accumulates():
    p = from_terms(2, [(1, (1, 0)), (2, (1, 0)), (-3, (1, 0))])
    assert p.is_zero()


def test_exponent_length_is_checked():
    with pytest.raises(ValueError):
        Polynomial(2, {(1,): 1})
    with pytest.raises(ValueError):
        Polynomial(2, {(1, -1): 1})


def test_embed_shifts_variables():
    p = Polynomial(2, {(1, 2): 3})
    assert p.embed(5, 2) == Polynomial(5, {(0, 0, 1, 2, 0): 3})
