import random
from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest

from brute import chi, contraction_by_evaluation
from multisymplectic import moment as M
from multisymplectic.equivariant import LieAction, LieAlgebraFD, d_tot, direct_sum, tilde
from multisymplectic.errors import MomentMapError, NotEquivariant, PreconditionFailed
from multisymplectic.exterior import DifferentialForm, PolyVectorField, euclidean, exterior_derivative
from multisymplectic.observables import PrePlectic
from multisymplectic.signs import varsigma
from multisymplectic.standard import (heisenberg_plane, heisenberg_translations, sl2_plane, so2_plane,
                                      so3_volume)

MAPS = {
    "heisenberg": lambda: heisenberg_plane(),
    "sl2": lambda: sl2_plane(),
    "so2": lambda: so2_plane(),
    "so3": lambda: so3_volume(),
    "heisenberg_r4": lambda: heisenberg_translations(
        euclidean("x1", "y1", "x2", "y2"),
        [DifferentialForm.basis(euclidean("x1", "y1", "x2", "y2"), 0, 1)
         + DifferentialForm.basis(euclidean("x1", "y1", "x2", "y2"), 2, 3)])[1][0],
}


@pytest.fixture(params=sorted(MAPS))
def mmap(request):
    return MAPS[request.param]()


def test_standard_maps_verify(mmap):
    rep = M.verify(mmap)
    assert rep.passed, rep.summary()


def _random_vector(dim, rng):
    return {i: Fraction(rng.randint(-2, 2)) for i in range(dim) if rng.random() < 0.7}


def _bracket_side(m, us):
    # sum_{i<j} (-1)^(i+j+1) f([u_i, u_j], u_1, ..^i..^j..), from the full alternation
    g = m.algebra
    k = len(us)
    total = DifferentialForm.zero(m.action.chart, m.n - k + 1)
    for s in permutations(range(k)):
        br = g.bracket(us[s[0]], us[s[1]])
        if not br:
            continue
        val = m.evaluate([br] + [us[t] for t in s[2:]])
        total = total + val.scale(Fraction(chi(s, [0] * k), 2 * factorial(k - 2)))
    return total


def test_moment_equations_on_random_vectors(mmap):
    # an independent check: multilinear evaluation, vector-valued brackets, brute contractions
    rng = random.Random(17)
    act = mmap.action
    for k in range(1, mmap.n + 2):
        for _ in range(4):
            us = [_random_vector(mmap.algebra.dim, rng) for _ in range(k)]
            vs = [act.vf(u) for u in us]
            contr = contraction_by_evaluation(vs, act.plectic.omega).scale(varsigma(k))
            if k == 1:
                assert exterior_derivative(mmap.evaluate(us)) == -contr.scale(varsigma(1))
            elif k <= mmap.n:
                assert _bracket_side(mmap, us) == exterior_derivative(mmap.evaluate(us)) + contr
            else:
                assert _bracket_side(mmap, us) == contr


def test_abelian_translations_of_the_plane_have_no_moment_map():
    c = euclidean("x", "y")
    p = PrePlectic(DifferentialForm.basis(c, 0, 1))
    x, y = c.coordinate(0), c.coordinate(1)
    act = LieAction(LieAlgebraFD.abelian(2), p, [PolyVectorField(c, [-1, 0]), PolyVectorField(c, [0, -1])])
    rng = random.Random(0)
    for _ in range(5):
        # every Hamiltonian choice of f_1, shifted by arbitrary constants
        f = {(0,): DifferentialForm.function(c, y + rng.randint(-3, 3)),
             (1,): DifferentialForm.function(c, x * -1 + rng.randint(-3, 3))}
        rep = M.verify(M.MomentMap(act, f))
        assert [d.equation for d in rep.defects] == ["main2"]


def test_heisenberg_extension_repairs_translations():
    m = heisenberg_plane()
    assert m.algebra.dim == 3 and not m.algebra.is_abelian()
    assert M.verify(m).passed


PAIRS = [("heisenberg", "heisenberg"), ("sl2", "so3"), ("so3", "sl2"), ("so2", "sl2")]


@pytest.mark.parametrize("a,b", PAIRS)
def test_product_routes_agree(a, b):
    fa, fb = MAPS[a](), MAPS[b]()
    P = M.product(fa, fb)
    assert M.verify(P).passed
    assert M.product_hat_form(fa, fb) == P
    assert M.product_via_primitives(fa, fb) == P


@pytest.mark.parametrize("a,b", [("heisenberg", "heisenberg"), ("sl2", "so2"), ("so2", "so2")])
def test_presymplectic_printed_formulas(a, b):
    fa, fb = MAPS[a](), MAPS[b]()
    assert M.presymplectic_product_formulas(fa, fb) == M.product(fa, fb)


@pytest.mark.parametrize("which,m,l", [("a", 1, 1), ("b", 1, 1), ("a", 1, 0), ("b", 0, 1)])
def test_perturbed_product_coefficient_fails(which, m, l):
    fa, fb = MAPS["heisenberg"](), MAPS["heisenberg"]()
    base = M.STANDARD.ca(m, l, 1) if which == "a" else M.STANDARD.cb(m, l, 1)
    coeffs = M.STANDARD.perturbed(which, m, l, 2 * base)
    assert not M.verify(M.product(fa, fb, coeffs, check=False)).passed
    with pytest.raises(MomentMapError):
        M.product(fa, fb, coeffs)


def test_primitive_round_trip(mmap):
    phi = M.to_primitive(mmap)
    assert d_tot(phi) == tilde(mmap.action, mmap.plectic.omega)
    assert M.moment_from_primitive(mmap.action, phi) == mmap


def test_associativity_defect():
    fs = [heisenberg_plane((f"x{i}", f"y{i}")) for i in range(3)]
    r = M.associativity_defect(*fs)
    assert r.maps_differ
    assert r.left_report.passed and r.right_report.passed
    assert r.sign == 1
    assert r.unsigned_identity_holds and r.difference_is_exact_term and r.expanded_form_matches


def test_associativity_sign_for_mixed_parity():
    fs = [sl2_plane(("x", "y")), so3_volume(("u", "v", "w")), sl2_plane(("p", "q"))]
    r = M.associativity_defect(*fs)
    assert r.sign == -1
    assert r.difference_is_exact_term and r.expanded_form_matches
    assert r.left_report.passed and r.right_report.passed


def test_diagonal_power_matches_restriction():
    m = MAPS["heisenberg_r4"]()
    dp, counts = M.diagonal_power(m)
    assert counts == {k: 2 ** k - 1 for k in range(1, 4)}
    assert M.diagonal_power_via_restriction(m) == dp
    assert dp.plectic.omega == m.plectic.omega ^ m.plectic.omega


def test_diagonal_power_of_odd_form_is_zero():
    with pytest.warns(UserWarning):
        dp, _ = M.diagonal_power(so3_volume())
    assert not dp.components


def test_restrict_to_subalgebra():
    m = sl2_plane()
    s = direct_sum(m.algebra, m.algebra)
    P = M.product(m, sl2_plane(("u", "v")))
    sub = M.restrict_subalgebra(P, s.inclusion(0))
    assert M.verify(sub).passed


def test_moment_sum_requires_same_action():
    with pytest.raises(PreconditionFailed):
        M.moment_sum(sl2_plane(), so2_plane())


@pytest.mark.parametrize("make", [sl2_plane, so2_plane], ids=["sl2", "so2"])
def test_cartan_h3(make):
    fa, fb = make(("x", "y")), make(("u", "v"))
    H, rep = M.cartan_h3_check(fa, fb)
    assert rep.passed
    assert H == M.product(fa, fb)


def test_equivariance_of_first_components():
    assert M.equivariance_defects(heisenberg_plane()) == []
    m = sl2_plane()
    # f(H) + 1 still solves the first equation but breaks f([E, F]) = l_2(f(E), f(F))
    comps = dict(m.components)
    comps[(0,)] = comps[(0,)] + DifferentialForm.function(m.action.chart, 1)
    shifted = M.MomentMap(m.action, comps)
    assert M.equivariance_defects(shifted) == [(1, 2)]
    with pytest.raises(NotEquivariant):
        M.cartan_h3(shifted, sl2_plane(("u", "v")))
