import pytest
from hypothesis import given
from hypothesis import strategies as st

from brute import filtered_ordered_unshuffles, filtered_unshuffles, gamma_by_definition, koszul_by_bubbles, sign_by_cycles
from multisymplectic.signs import (gamma, koszul_sign, multi_unshuffles, nondecreasing_partitions, ordered_unshuffles,
                                   perm_sign, signed_koszul, sort_with_sign, unshuffles, varsigma)


def test_varsigma_table():
    assert [varsigma(k) for k in range(1, 6)] == [1, 1, -1, -1, 1]


@pytest.mark.parametrize("m", range(9))
@pytest.mark.parametrize("l", range(9))
def test_varsigma_product_rule(m, l):
    assert varsigma(m) * varsigma(l) * varsigma(m + l) == -(-1) ** (m * l)


perms = st.integers(0, 6).flatmap(lambda n: st.permutations(list(range(n))))


@given(perms)
def test_perm_sign_matches_cycle_count(p):
    assert perm_sign(p) == sign_by_cycles(p)


@given(perms.flatmap(lambda p: st.tuples(st.just(p), st.lists(st.integers(-3, 2), min_size=len(p), max_size=len(p)))))
def test_koszul_sign_matches_adjacent_swaps(pd):
    p, degs = pd
    assert koszul_sign(p, degs) == koszul_by_bubbles(p, degs)


@given(perms.flatmap(lambda p: st.tuples(st.just(p), st.lists(st.integers(-3, 2), min_size=len(p), max_size=len(p)))))
def test_signed_koszul_is_a_character(pd):
    # chi(sigma o tau) = chi(sigma) chi(tau) with tau acting on the reordered degrees
    p, degs = pd
    n = len(p)
    tau = tuple(reversed(range(n)))
    composed = tuple(p[tau[r]] for r in range(n))
    moved = [degs[t] for t in p]
    assert signed_koszul(composed, degs) == signed_koszul(p, degs) * signed_koszul(tau, moved)


@pytest.mark.parametrize("i,j", [(i, n - i) for n in range(6) for i in range(n + 1)])
def test_unshuffles_match_filtered_permutations(i, j):
    assert sorted(unshuffles(i, j)) == filtered_unshuffles(i, j)


BLOCKS = [b for n in range(1, 6) for ell in range(1, n + 1) for b in nondecreasing_partitions(n, ell)]


@pytest.mark.parametrize("blocks", BLOCKS, ids=str)
def test_ordered_unshuffles_match_filtered_permutations(blocks):
    assert sorted(ordered_unshuffles(blocks)) == filtered_ordered_unshuffles(blocks)


@pytest.mark.parametrize("blocks", BLOCKS, ids=str)
def test_gamma_matches_definition(blocks):
    assert gamma(len(blocks), blocks) == gamma_by_definition(len(blocks), blocks)


def test_partitions_are_exhaustive():
    for n in range(1, 7):
        for ell in range(1, n + 1):
            parts = nondecreasing_partitions(n, ell)
            assert all(sum(p) == n and list(p) == sorted(p) and min(p) >= 1 for p in parts)
            brute = {tuple(sorted(c)) for c in _compositions(n, ell)}
            assert set(parts) == brute


def _compositions(n, k):
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def test_multi_unshuffle_count():
    from math import factorial
    assert len(multi_unshuffles((2, 1, 2))) == factorial(5) // (2 * 1 * 2)


def test_sort_with_sign():
    assert sort_with_sign((2, 0, 1)) == (1, (0, 1, 2))
    assert sort_with_sign((1, 0)) == (-1, (0, 1))
    assert sort_with_sign((1, 1))[0] == 0


def test_koszul_rejects_length_mismatch():
    with pytest.raises(ValueError):
        koszul_sign((0, 1), [1])
