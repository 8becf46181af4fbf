"""Seeded generators of polynomials, forms, observables and tuples for property checks."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Sequence

from .curved import CurvedElement
from .errors import NotHamiltonian, UnsupportedOmega
from .exterior import Chart, DifferentialForm, PolyVectorField, exterior_derivative
from .observables import Observable, PrePlectic
from .polynomial import Polynomial


def rng_for(seed: int) -> random.Random:
    return random.Random(seed)


def _free_vars(chart: Chart) -> list[int]:
    return [i for i, per in enumerate(chart.periodic) if not per]


def random_polynomial(chart: Chart, rng: random.Random, max_degree: int = 2, nterms: int = 3,
                      coeff_range: int = 3) -> Polynomial:
    """A polynomial in the non-periodic coordinates with small integer coefficients."""
    free = _free_vars(chart)
    terms: dict[tuple[int, ...], Fraction] = {}
    for _ in range(nterms):
        e = [0] * chart.dim
        if free:
            for _ in range(rng.randint(0, max_degree)):
                e[rng.choice(free)] += 1
        c = rng.randint(-coeff_range, coeff_range)
        key = tuple(e)
        terms[key] = terms.get(key, Fraction(0)) + c
    return Polynomial(chart.dim, {k: v for k, v in terms.items() if v})


def random_form(chart: Chart, degree: int, rng: random.Random, max_degree: int = 2, nterms: int = 2) -> DifferentialForm:
    if degree < 0 or degree > chart.dim:
        return DifferentialForm.zero(chart, degree)
    idx = list(combinations(range(chart.dim), degree))
    picked = rng.sample(idx, min(nterms, len(idx)))
    return DifferentialForm(chart, degree, {I: random_polynomial(chart, rng, max_degree) for I in picked})


def random_observable(p: PrePlectic, degree: int, rng: random.Random, max_degree: int = 2,
                      attempts: int = 20) -> Observable:
    """A random observable; degree-0 draws are retried until they are Hamiltonian.

    When retries run out, an exact form d(beta) is returned, which is
    Hamiltonian for every omega with the zero vector field.
    """
    fdeg = p.n - 1 + degree
    if degree != 0:
        return Observable(p, degree, random_form(p.chart, fdeg, rng, max_degree))
    if p.constant_coefficient:
        for _ in range(attempts):
            form = random_form(p.chart, fdeg, rng, max_degree)
            try:
                return Observable(p, 0, form)
            except NotHamiltonian:
                continue
    exact = exterior_derivative(random_form(p.chart, fdeg - 1, rng, max_degree + 1)) if fdeg >= 1 else None
    if exact is None:
        # a constant function is Hamiltonian with the zero field
        exact = DifferentialForm.function(p.chart, rng.randint(-3, 3))
    return Observable(p, 0, exact, PolyVectorField.zero(p.chart))


def random_degree(p: PrePlectic, rng: random.Random, zero_bias: float = 0.5) -> int:
    if rng.random() < zero_bias:
        return 0
    return rng.randint(1 - p.n, 0)


def random_tuple(p: PrePlectic, m: int, rng: random.Random, degrees: Sequence[int] | None = None,
                 zero_bias: float = 0.5) -> list[Observable]:
    if degrees is None:
        degrees = [random_degree(p, rng, zero_bias) for _ in range(m)]
    return [random_observable(p, d, rng) for d in degrees]


def monomial_observables(p: PrePlectic, degree: int, max_poly_degree: int = 1) -> list[Observable]:
    """All x^e dx_I of the right form degree with |e| <= max_poly_degree that are observables.

    Degree-0 candidates that are not Hamiltonian are skipped.
    """
    chart = p.chart
    fdeg = p.n - 1 + degree
    if fdeg < 0:
        return []
    free = _free_vars(chart)
    monos = []
    for k in range(max_poly_degree + 1):
        for combo in combinations_with_replacement(free, k):
            e = [0] * chart.dim
            for i in combo:
                e[i] += 1
            monos.append(Polynomial(chart.dim, {tuple(e): Fraction(1)}))
    out = []
    for I in combinations(range(chart.dim), fdeg):
        for mono in monos:
            form = DifferentialForm(chart, fdeg, {I: mono})
            try:
                out.append(Observable(p, degree, form))
            except (NotHamiltonian, UnsupportedOmega):
                continue
    return out


def random_curved(p: PrePlectic, degree: int, rng: random.Random) -> CurvedElement:
    if degree == 2:
        return CurvedElement(p, 2, c=rng.choice([-2, -1, 1, 2, Fraction(1, 2)]))
    if degree <= 0:
        return CurvedElement.from_observable(random_observable(p, degree, rng))
    return CurvedElement(p, degree, random_form(p.chart, p.n - 1 + degree, rng))


def random_curved_tuple(p: PrePlectic, m: int, rng: random.Random, curvature_slots: int = 0) -> list[CurvedElement]:
    """m elements, mostly of degree 0, with ``curvature_slots`` of them multiples of omega."""
    slots = set(rng.sample(range(m), min(curvature_slots, m)))
    out = []
    for r in range(m):
        if r in slots:
            out.append(random_curved(p, 2, rng))
        else:
            u = rng.random()
            d = 0 if u < 0.7 else rng.randint(1 - p.n, 1)
            out.append(random_curved(p, d, rng))
    return out


def random_sum_element(space, rng: random.Random, degree: int | None = None, pure: str | None = None):
    """A random alpha + beta in the direct sum; ``pure`` = 'a' or 'b' zeroes the other side."""
    lo = space.lowest_degree()
    if degree is None:
        degree = 0 if rng.random() < 0.5 else rng.randint(lo, 0)
    parts = []
    for side, p in ((0, space.pa), (1, space.pb)):
        keep = pure is None or pure == "ab"[side]
        if keep and degree >= 1 - p.n:
            parts.append(random_observable(p, degree, rng))
        else:
            parts.append(p.zero(degree))
    return space.element(parts[0], parts[1], degree)
