import random
from fractions import Fraction
from itertools import permutations
from math import factorial

import pytest

from brute import chi
from conftest import plane, symplectic4, volume3
from multisymplectic import curved as C
from multisymplectic.errors import DegreeError, PreconditionFailed
from multisymplectic.exterior import exterior_derivative
from multisymplectic.generators import random_curved, random_curved_tuple, random_observable


def jacobi_by_permutations(p, xs):
    m = len(xs)
    degs = [x.degree for x in xs]
    total = C.CurvedElement.zero(p, sum(degs) + 3 - m)
    for i in range(0, m + 1):
        j = m + 1 - i
        w = Fraction((-1) ** (i * (j - 1)), factorial(i) * factorial(m - i))
        for s in permutations(range(m)):
            inner = C.curved_bracket(p, [xs[t] for t in s[:i]])
            val = C.curved_bracket(p, [inner] + [xs[t] for t in s[i:]])
            total = total + val.scale(w * chi(s, degs))
    return total


@pytest.mark.parametrize("m", [1, 2, 3])
def test_jacobi_matches_permutation_oracle(structure, m):
    rng = random.Random(m)
    for slots in (0, 1):
        xs = random_curved_tuple(structure, m, rng, curvature_slots=slots)
        assert C.curved_jacobi_defect(structure, xs) == jacobi_by_permutations(structure, xs)


@pytest.mark.parametrize("m", range(0, 6))
@pytest.mark.parametrize("slots", [0, 1, 2])
def test_curved_jacobi_vanishes(structure, m, slots):
    rng = random.Random(31 * m + slots)
    for _ in range(3):
        xs = random_curved_tuple(structure, m, rng, curvature_slots=slots)
        assert C.curved_jacobi_defect(structure, xs).is_zero()


def test_curvature_is_closed_and_controls_d_squared(structure):
    l0 = C.curvature(structure)
    assert C.D(structure, l0).is_zero()
    rng = random.Random(2)
    for _ in range(10):
        x = random_curved(structure, rng.randint(1 - structure.n, 2), rng)
        assert (C.D(structure, C.D(structure, x)) + C.curved_bracket(structure, [l0, x])).is_zero()


def test_unary_bracket():
    p = volume3()
    rng = random.Random(6)
    a = C.CurvedElement.from_observable(random_observable(p, -1, rng))
    assert C.D(p, a).is_zero()
    b = C.CurvedElement.from_observable(random_observable(p, 0, rng))
    assert C.D(p, b).form == -exterior_derivative(b.form)


def test_degree_range():
    p = plane()
    with pytest.raises(DegreeError):
        C.CurvedElement(p, 3)
    with pytest.raises(DegreeError):
        C.CurvedElement(p, 2, form=p.omega)
    assert C.CurvedElement.omega_multiple(p, 3).form == p.omega.scale(3)


def _defect_found(p, seed):
    # all entries of degree 0: the curvature term i = 0 is what cancels d of the top bracket
    rng = random.Random(seed)
    for m in (2, 3):
        for _ in range(6):
            xs = [random_curved(p, 0, rng) for _ in range(m)]
            if C.curved_jacobi_defect(p, xs):
                return True
    return False


def _patched_bracket(mode):
    original = C.curved_bracket

    def bracket(p, args):
        if mode == "drop" and not args:
            return C.CurvedElement.zero(p, 2)
        if mode == "flip" and any(a.degree == 2 for a in args):
            return original(p, args).scale(-1)
        return original(p, args)

    return bracket


@pytest.mark.parametrize("mode", ["drop", "flip"])
def test_broken_curvature_is_detected(monkeypatch, mode):
    p = volume3()
    assert not _defect_found(p, 1)
    monkeypatch.setattr(C, "curved_bracket", _patched_bracket(mode))
    assert _defect_found(p, 1)


def test_strict_morphism_in_the_symplectic_case():
    for p in (plane(), symplectic4()):
        rng = random.Random(3)
        tuples = [random_curved_tuple(p, k, rng, curvature_slots=rng.randint(0, 1)) for k in (1, 2, 3) for _ in range(5)]
        rep = C.symplectic_strict_morphism_check(p, tuples)
        assert rep.passed and rep.checked == 16


def test_strict_morphism_needs_n_equal_one():
    with pytest.raises(PreconditionFailed):
        C.symplectic_strict_morphism_check(volume3(), [])
