"""Sign conventions and permutation combinatorics for graded multilinear maps.

A permutation ``sigma`` is a tuple listing which input goes to each output slot,
so ``sigma`` applied to ``(x_1, ..., x_m)`` gives ``(x_sigma[0], ..., x_sigma[m-1])``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Iterator, Sequence


def varsigma(k: int) -> int:
    """The sign -(-1)^(k(k+1)/2) attached to k-fold contractions."""
    return -1 if (k * (k + 1) // 2) % 2 == 0 else 1


def perm_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation, by counting inversions."""
    inv = 0
    n = len(perm)
    for a in range(n):
        pa = perm[a]
        for b in range(a + 1, n):
            if pa > perm[b]:
                inv += 1
    return -1 if inv & 1 else 1


def koszul_sign(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """Koszul sign of reordering graded elements with the given degrees.

    Every pair of elements whose relative order is reversed contributes
    ``(-1)^(|x||y|)``.
    """
    if len(perm) != len(degrees):
        raise ValueError("permutation and degree list differ in length")
    odd = 0
    n = len(perm)
    for a in range(n):
        pa = perm[a]
        da = degrees[pa] & 1
        if not da:
            continue
        for b in range(a + 1, n):
            pb = perm[b]
            if pa > pb and degrees[pb] & 1:
                odd ^= 1
    return -1 if odd else 1


def signed_koszul(perm: Sequence[int], degrees: Sequence[int]) -> int:
    """``(-1)^sigma * epsilon(sigma)``, the sign for graded skew-symmetric maps."""
    return perm_sign(perm) * koszul_sign(perm, degrees)


@lru_cache(maxsize=None)
def unshuffles(i: int, j: int) -> tuple[tuple[int, ...], ...]:
    """All (i, j)-unshuffles: ascending on the first i and the last j slots."""
    if i < 0 or j < 0:
        raise ValueError("negative block size")
    m = i + j
    out = []
    for first in combinations(range(m), i):
        rest = tuple(x for x in range(m) if x not in first)
        out.append(first + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def multi_unshuffles(blocks: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Permutations ascending within each of the consecutive blocks."""
    total = sum(blocks)

    def rec(remaining: tuple[int, ...], sizes: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if not sizes:
            yield ()
            return
        for first in combinations(remaining, sizes[0]):
            rest = tuple(x for x in remaining if x not in first)
            for tail in rec(rest, sizes[1:]):
                yield first + tail

    return tuple(rec(tuple(range(total)), tuple(blocks)))


@lru_cache(maxsize=None)
def ordered_unshuffles(blocks: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Unshuffles whose equal-size consecutive blocks have increasing first entries."""
    starts = []
    pos = 0
    for b in blocks:
        starts.append(pos)
        pos += b
    out = []
    for s in multi_unshuffles(blocks):
        ok = True
        for r in range(len(blocks) - 1):
            if blocks[r] == blocks[r + 1] and blocks[r] > 0 and s[starts[r]] > s[starts[r + 1]]:
                ok = False
                break
        if ok:
            out.append(s)
    return tuple(out)


@lru_cache(maxsize=None)
def nondecreasing_partitions(n: int, parts: int) -> tuple[tuple[int, ...], ...]:
    """Compositions of n into ``parts`` positive integers N_1 <= ... <= N_parts."""

    def rec(rest: int, k: int, lo: int) -> Iterator[tuple[int, ...]]:
        if k == 0:
            if rest == 0:
                yield ()
            return
        for first in range(lo, rest // k + 1):
            for tail in rec(rest - first, k - 1, first):
                yield (first,) + tail

    return tuple(rec(n, parts, 1))


def gamma(ell: int, blocks: Sequence[int]) -> int:
    """ell(ell-1)/2 + N_1(ell-1) + N_2(ell-2) + ... + N_{ell-1}."""
    return ell * (ell - 1) // 2 + sum(blocks[i] * (ell - 1 - i) for i in range(ell - 1))


def sort_with_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort basis indices; return (sign, sorted) with sign 0 on repeats."""
    if len(set(idx)) != len(idx):
        return 0, ()
    order = sorted(range(len(idx)), key=lambda r: idx[r])
    return perm_sign(order), tuple(idx[r] for r in order)
