import random

import pytest

from brute import morphism_sides_by_permutations
from multisymplectic import embed as E
from multisymplectic.errors import NoSignAssignment
from multisymplectic.exterior import DifferentialForm, euclidean
from multisymplectic.generators import random_observable, random_sum_element
from multisymplectic.moment import product
from multisymplectic.observables import PrePlectic
from multisymplectic.signs import gamma
from multisymplectic.standard import heisenberg_plane, sl2_plane, so2_plane, so3_volume


def plane(a="x", b="y"):
    return PrePlectic(DifferentialForm.basis(euclidean(a, b), 0, 1))


def volume(*names):
    return PrePlectic(DifferentialForm.basis(euclidean(*names), 0, 1, 2))


SPACES = {
    "1x1": lambda: E.SumSpace(plane(), plane("u", "v")),
    "1x2": lambda: E.SumSpace(plane(), volume("u", "v", "w")),
    "2x1": lambda: E.SumSpace(volume("u", "v", "w"), plane()),
}


@pytest.fixture(params=sorted(SPACES))
def space(request):
    return SPACES[request.param]()


def _tuples(space, N, count, seed):
    rng = random.Random(seed)
    return [[random_sum_element(space, rng) for _ in range(N)] for _ in range(count)]


@pytest.mark.parametrize("N", [1, 2, 3])
def test_morphism_sides_match_permutation_oracle(space, N):
    H = E.EmbeddingH(space)
    for xs in _tuples(space, N, 3, 100 + N):
        assert E.morphism_sides(H, xs) == morphism_sides_by_permutations(H, xs)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_embedding_is_a_morphism(space, N):
    H = E.EmbeddingH(space)
    nontrivial = 0
    for xs in _tuples(space, N, 8, N):
        lhs, rhs = E.morphism_sides(H, xs)
        assert lhs == rhs
        nontrivial += bool(lhs)
    if N >= 2:
        assert nontrivial


def test_sum_of_observable_algebras_satisfies_jacobi(space):
    for N in (2, 3):
        for xs in _tuples(space, N, 5, 7 * N):
            da, db = E.sum_jacobi_defect(space, xs)
            assert da.is_zero() and db.is_zero()


def test_square_bracket_lemma(space):
    rng = random.Random(11)
    for _ in range(20):
        k, m = rng.randint(0, 3), rng.randint(0, 3)
        if k + m == 0:
            continue
        alphas = [random_observable(space.pa, 0, rng) for _ in range(k)]
        betas = [random_observable(space.pb, 0, rng) for _ in range(m)]
        assert E.lemma_square_check(space, alphas, betas).is_zero()


def _finds_defect(H, space, Ns, seed, count=8, gamma_fn=gamma):
    for N in Ns:
        for xs in _tuples(space, N, count, seed + N):
            if E.verify_linfty_morphism(H, xs, gamma_fn):
                return True
    return False


@pytest.mark.parametrize("key,which,m,i,value", [("1x2", "a", 1, 0, -1), ("1x2", "b", 2, 0, 0),
                                                 ("1x2", "b", 1, -1, 0), ("2x1", "a", 2, -1, 0)])
def test_perturbed_coefficient_breaks_the_identity(key, which, m, i, value):
    space = SPACES[key]()
    H = E.EmbeddingH(space, E.STANDARD_T.perturbed(which, m, i, value))
    assert _finds_defect(H, space, [1, 2, 3, 4], 5)


def test_perturbed_unary_coefficient_leaves_the_observables():
    from multisymplectic.errors import NotHamiltonian
    space = SPACES["1x2"]()
    H = E.EmbeddingH(space, E.STANDARD_T.perturbed("a", 0, 0, 1))
    a = random_observable(space.pa, 0, random.Random(8))
    with pytest.raises(NotHamiltonian):
        H([space.element(a, None)])


def test_perturbed_gamma_breaks_the_identity():
    space = SPACES["1x1"]()
    H = E.EmbeddingH(space)
    flipped = lambda ell, blocks: gamma(ell, blocks) + (ell == 2)
    assert _finds_defect(H, space, [2, 3], 9, gamma_fn=flipped)


def _presym_space_and_elements(seed, count):
    space = SPACES["1x1"]()
    rng = random.Random(seed)
    return space, [[random_sum_element(space, rng, degree=0) for _ in range(3)] for _ in range(count)]


def test_binary_component_matches_closed_formula():
    space, tuples = _presym_space_and_elements(1, 10)
    H = E.EmbeddingH(space)
    for f, g, _ in tuples:
        assert H([f, g]).form == E.presymplectic_h2(space, f, g)


def test_ternary_component_is_the_negated_cyclic_formula():
    # computed from the general coefficients, H_3 comes out as minus the closed cyclic expression;
    # flipping its sign breaks the morphism identity, so the general coefficients decide
    space, tuples = _presym_space_and_elements(2, 10)
    H = E.EmbeddingH(space)
    nonzero = 0
    for f, g, h in tuples:
        v = H([f, g, h]).form
        assert v == -E.presymplectic_h3(space, f, g, h)
        nonzero += bool(v)
    assert nonzero
    flipped = E.EmbeddingH(space, E.STANDARD_T.perturbed("a", 2, 0, E.HALF).perturbed("b", 2, 0, E.HALF))
    assert _finds_defect(flipped, space, [3, 4], 3)


def test_h1_lifts_hamiltonian_fields():
    space = SPACES["1x2"]()
    rng = random.Random(4)
    a = random_observable(space.pa, 0, rng)
    out = E.EmbeddingH(space)([space.element(a, None)])
    assert out.vf() == space.lift(a.vf(), 0)


@pytest.mark.parametrize("a,b", [("heisenberg", "heisenberg"), ("sl2", "so3"), ("so3", "sl2"), ("sl2", "so2")])
def test_composition_with_moment_maps_is_the_product(a, b):
    makers = {"heisenberg": heisenberg_plane, "sl2": sl2_plane, "so2": so2_plane, "so3": so3_volume}
    second = {"heisenberg": ("u", "v"), "sl2": ("u", "v"), "so2": ("u", "v"), "so3": ("p", "q", "r")}
    fa = makers[a]()
    fb = makers[b](second[b])
    H = E.EmbeddingH(E.SumSpace(fa.plectic, fb.plectic))
    res = E.compose_H_with_moments(H, fa, fb)
    assert set(res.signs.values()) == {1}
    assert res.moment == product(fa, fb)


def test_composition_detects_a_wrong_coefficient():
    fa, fb = heisenberg_plane(), heisenberg_plane(("u", "v"))
    space = E.SumSpace(fa.plectic, fb.plectic)
    H = E.EmbeddingH(space, E.STANDARD_T.perturbed("a", 1, 0, -1))
    with pytest.raises(NoSignAssignment):
        E.compose_H_with_moments(H, fa, fb)
