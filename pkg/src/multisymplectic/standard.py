"""Standard actions with known moment maps, used by the built-in scenarios and tests."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .equivariant import LieAction, LieAlgebraFD, solve_primitive_from_potential
from .exterior import Chart, DifferentialForm, PolyVectorField, contract, euclidean
from .moment import MomentMap, moment_from_primitive
from .observables import PrePlectic


def constant_matrix(form: DifferentialForm) -> list[list[Fraction]]:
    """W[a][b] = omega(e_a, e_b) for a constant 2-form."""
    chart = form.chart
    D = chart.dim
    e = [PolyVectorField(chart, [int(t == a) for t in range(D)]) for a in range(D)]
    return [[contract(e[b], contract(e[a], form)).as_function().constant_term() for b in range(D)] for a in range(D)]


def heisenberg_translations(chart: Chart, forms: Sequence[DifferentialForm]) -> tuple[LieAlgebraFD, list[MomentMap]]:
    """Translations e_a -> -d_a extended by one central z_i per constant 2-form w_i.

    Plain translations have no moment map for a nonzero constant form, since
    f_1 would have to be linear in the brackets [e_a, e_b] = 0; the central
    extension [e_a, e_b] = sum_i w_i(e_a, e_b) z_i repairs this, with
    f^i(e_a) = sum_b w_i(e_a, e_b) x_b and f^i(z_j) = delta_ij.
    """
    D = chart.dim
    r = len(forms)
    W = [constant_matrix(w) for w in forms]
    consts = {}
    for a in range(D):
        for b in range(a + 1, D):
            row = {D + i: W[i][a][b] for i in range(r) if W[i][a][b]}
            if row:
                consts[(a, b)] = row
    g = LieAlgebraFD(D + r, consts, name="heisenberg")
    gens = [PolyVectorField(chart, [-int(t == a) for t in range(D)]) for a in range(D)]
    gens += [PolyVectorField.zero(chart)] * r
    maps = []
    for i, w in enumerate(forms):
        act = LieAction(g, PrePlectic(w), gens)
        comps = {}
        for a in range(D):
            poly = chart.poly(0)
            for b in range(D):
                if W[i][a][b]:
                    poly = poly + chart.coordinate(b) * W[i][a][b]
            comps[(a,)] = DifferentialForm.function(chart, poly)
        comps[(D + i,)] = DifferentialForm.function(chart, 1)
        maps.append(MomentMap(act, comps))
    return g, maps


def heisenberg_plane(names: Sequence[str] = ("x", "y")) -> MomentMap:
    c = euclidean(*names)
    _, (m,) = heisenberg_translations(c, [DifferentialForm.basis(c, 0, 1)])
    return m


def sl2_plane(names: Sequence[str] = ("x", "y")) -> MomentMap:
    """Linear sl2 action on the plane, basis H, E, F with [H,E] = 2E, [H,F] = -2F, [E,F] = H."""
    c = euclidean(*names)
    X, Y = c.coordinate(0), c.coordinate(1)
    p = PrePlectic(DifferentialForm.basis(c, 0, 1))
    g = LieAlgebraFD(3, {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}, name="sl2")
    act = LieAction(g, p, [PolyVectorField(c, [-X, Y]), PolyVectorField(c, [-Y, 0]), PolyVectorField(c, [0, -X])])
    fn = lambda q: DifferentialForm.function(c, q)
    return MomentMap(act, {(0,): fn(X * Y), (1,): fn(Y * Y * Fraction(1, 2)), (2,): fn(X * X * Fraction(-1, 2))})


def so2_plane(names: Sequence[str] = ("x", "y")) -> MomentMap:
    c = euclidean(*names)
    X, Y = c.coordinate(0), c.coordinate(1)
    p = PrePlectic(DifferentialForm.basis(c, 0, 1))
    act = LieAction(LieAlgebraFD(1, name="so2"), p, [PolyVectorField(c, [Y, -X])])
    return MomentMap(act, {(0,): DifferentialForm.function(c, (X * X + Y * Y) * Fraction(-1, 2))})


SO3 = {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}}


def so3_volume(names: Sequence[str] = ("x", "y", "z")) -> MomentMap:
    """Rotations of R^3 with the volume form; the moment map comes from an invariant potential."""
    c = euclidean(*names)
    P = [c.coordinate(i) for i in range(3)]
    p = PrePlectic(DifferentialForm.basis(c, 0, 1, 2))
    g = LieAlgebraFD(3, SO3, name="so3")

    def cross(i):
        e = [0, 0, 0]
        e[i] = 1
        return [e[1] * P[2] - e[2] * P[1], e[2] * P[0] - e[0] * P[2], e[0] * P[1] - e[1] * P[0]]

    act = LieAction(g, p, [PolyVectorField(c, [-q for q in cross(i)]) for i in range(3)])
    beta = (DifferentialForm.basis(c, 1, 2, coeff=P[0]) + DifferentialForm.basis(c, 2, 0, coeff=P[1])
            + DifferentialForm.basis(c, 0, 1, coeff=P[2])).scale(Fraction(1, 3))
    phi, _ = solve_primitive_from_potential(act, beta)
    return moment_from_primitive(act, phi)

