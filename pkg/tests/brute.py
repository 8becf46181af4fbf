"""Slow reference implementations used as oracles by the tests.

Everything here sums over full permutation groups with 1/(block sizes)!
weights or evaluates forms as alternating multilinear maps, so it shares no
enumeration or sign code with the library.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations, permutations
from math import factorial

from multisymplectic.exterior import DifferentialForm, PolyVectorField
from multisymplectic.observables import l_bracket
from multisymplectic.polynomial import Polynomial


def sign_by_cycles(perm) -> int:
    seen = set()
    s = 1
    for start in range(len(perm)):
        if start in seen:
            continue
        length = 0
        j = start
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def koszul_by_bubbles(perm, degrees) -> int:
    """Sort the permuted list by adjacent swaps, multiplying (-1)^(|x||y|) per swap."""
    cur = list(perm)
    s = 1
    changed = True
    while changed:
        changed = False
        for a in range(len(cur) - 1):
            if cur[a] > cur[a + 1]:
                if degrees[cur[a]] % 2 and degrees[cur[a + 1]] % 2:
                    s = -s
                cur[a], cur[a + 1] = cur[a + 1], cur[a]
                changed = True
    return s


def chi(perm, degrees) -> int:
    return sign_by_cycles(perm) * koszul_by_bubbles(perm, degrees)


def filtered_unshuffles(i: int, j: int):
    out = []
    for p in permutations(range(i + j)):
        if list(p[:i]) == sorted(p[:i]) and list(p[i:]) == sorted(p[i:]):
            out.append(p)
    return sorted(out)


def filtered_ordered_unshuffles(blocks):
    out = []
    total = sum(blocks)
    for p in permutations(range(total)):
        pos = 0
        firsts = []
        ok = True
        for b in blocks:
            part = p[pos:pos + b]
            if list(part) != sorted(part):
                ok = False
                break
            firsts.append(part[0] if part else None)
            pos += b
        if not ok:
            continue
        for r in range(len(blocks) - 1):
            if blocks[r] == blocks[r + 1] and blocks[r] > 0 and firsts[r] > firsts[r + 1]:
                ok = False
        if ok:
            out.append(p)
    return sorted(out)


def gamma_by_definition(ell, blocks) -> int:
    return ell * (ell - 1) // 2 + sum(blocks[i] * (ell - 1 - i) for i in range(ell - 1))


# forms as alternating multilinear maps


def _vec(v) -> list[Polynomial]:
    return list(v.components) if isinstance(v, PolyVectorField) else list(v)


def evaluate_form(form: DifferentialForm, vectors) -> Polynomial:
    """omega(u_1, ..., u_k) = sum_I omega_I det(u_j^{I_i}) by the Leibniz formula."""
    chart = form.chart
    k = form.degree
    vs = [_vec(v) for v in vectors]
    assert len(vs) == k
    total = chart.poly(0)
    for I, coeff in form.items():
        det = chart.poly(0)
        for p in permutations(range(k)):
            term = chart.poly(sign_by_cycles(p))
            for r in range(k):
                term = term * vs[p[r]][I[r]]
            det = det + term
        total = total + coeff * det
    return total


def form_from_values(chart, degree: int, values) -> DifferentialForm:
    """Rebuild a form from its values on sorted coordinate-vector tuples."""
    terms = {}
    for I in combinations(range(chart.dim), degree):
        val = values(I)
        if val:
            terms[I] = val
    return DifferentialForm(chart, degree, terms)


def unit(chart, a: int) -> list[Polynomial]:
    return [chart.poly(int(t == a)) for t in range(chart.dim)]


def contraction_by_evaluation(vs, form: DifferentialForm) -> DifferentialForm:
    """iota(v_1 ... v_k) omega = omega(v_1, ..., v_k, .)."""
    chart = form.chart
    k = len(vs)
    return form_from_values(chart, form.degree - k,
                            lambda I: evaluate_form(form, list(vs) + [unit(chart, a) for a in I]))


def wedge_by_shuffles(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    chart = a.chart
    p, q = a.degree, b.degree

    def val(I):
        tot = chart.poly(0)
        for first in combinations(range(p + q), p):
            rest = [r for r in range(p + q) if r not in first]
            perm = list(first) + rest
            s = sign_by_cycles(perm)
            x = evaluate_form(a, [unit(chart, I[r]) for r in first])
            y = evaluate_form(b, [unit(chart, I[r]) for r in rest])
            tot = tot + (x * y).scale(s)
        return tot

    return form_from_values(chart, p + q, val)


def d_by_invariant_formula(a: DifferentialForm) -> DifferentialForm:
    """d alpha(e_0, ..., e_k) = sum_r (-1)^r d_{i_r} alpha(e_0, .^r., e_k) for coordinate fields."""
    chart = a.chart
    k = a.degree

    def val(I):
        tot = chart.poly(0)
        for r in range(k + 1):
            rest = [unit(chart, I[s]) for s in range(k + 1) if s != r]
            tot = tot + evaluate_form(a, rest).diff(I[r]).scale((-1) ** r)
        return tot

    return form_from_values(chart, k + 1, val)


# L-infinity identities by full permutation sums


def jacobi_by_permutations(p, args) -> DifferentialForm:
    m = len(args)
    degs = [x.degree for x in args]
    total = None
    for i in range(1, m + 1):
        j = m + 1 - i
        w = Fraction(1, factorial(i) * factorial(m - i)) * (-1) ** (i * (j - 1))
        for s in permutations(range(m)):
            inner = l_bracket(p, [args[t] for t in s[:i]])
            val = l_bracket(p, [inner] + [args[t] for t in s[i:]]).form.scale(w * chi(s, degs))
            total = val if total is None else total + val
    return total


def _rho_by_moves(blocks, xdegs) -> int:
    # H_r moves left past the elements of every earlier block
    s = 1
    pos = 0
    before = 0
    for size in blocks:
        if (1 - size) % 2 and before % 2:
            s = -s
        before += sum(xdegs[pos:pos + size])
        pos += size
    return s


def _partitions(n, parts, lo=1):
    if parts == 0:
        if n == 0:
            yield ()
        return
    for first in range(lo, n // parts + 1):
        for tail in _partitions(n - first, parts - 1, first):
            yield (first,) + tail


def morphism_sides_by_permutations(H, xs):
    """Both sides of the morphism identity, every unshuffle sum replaced by a weighted S_N sum."""
    from multisymplectic.embed import sum_bracket

    sp = H.space
    T = sp.target
    N = len(xs)
    degs = [x.degree for x in xs]
    lhs = rhs = None
    for i in range(1, N + 1):
        j = N + 1 - i
        w = Fraction((-1) ** (i * (j - 1)), factorial(i) * factorial(N - i))
        for s in permutations(range(N)):
            inner = sum_bracket(sp, [xs[t] for t in s[:i]])
            val = H([inner] + [xs[t] for t in s[i:]]).form.scale(w * chi(s, degs))
            lhs = val if lhs is None else lhs + val
    for ell in range(1, N + 1):
        for blocks in _partitions(N, ell):
            weight = Fraction(1)
            for b in blocks:
                weight /= factorial(b)
            for _, mult in Counter(blocks).items():
                weight /= factorial(mult)
            g = (-1) ** gamma_by_definition(ell, blocks)
            for s in permutations(range(N)):
                hs = []
                pos = 0
                for b in blocks:
                    hs.append(H([xs[t] for t in s[pos:pos + b]]))
                    pos += b
                sign = g * chi(s, degs) * _rho_by_moves(blocks, [degs[t] for t in s])
                val = l_bracket(T, hs).form.scale(weight * sign)
                rhs = val if rhs is None else rhs + val
    return lhs, rhs
