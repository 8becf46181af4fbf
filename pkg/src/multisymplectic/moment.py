"""Homotopy moment maps: verification, products, restrictions, powers and sums."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as iproduct
from typing import Mapping, Sequence

from .equivariant import (
    CochainElement,
    LieAction,
    LieAlgebraHom,
    ProductAction,
    d_tot,
    primitive_product,
    promote_cochain,
    tilde,
)
from .errors import ChartMismatch, DegreeError, MomentMapError, NotEquivariant, NotInvariant, PreconditionFailed
from .exterior import CoordinateMap, DifferentialForm, PolyVectorField, contract_multi, exterior_derivative, pullback, wedge
from .linalg import LinearSolver
from .observables import Observable, PrePlectic, l_bracket, square_bracket
from .polynomial import Polynomial
from .signs import perm_sign, sort_with_sign, unshuffles, varsigma


def _pm(e: int) -> int:
    return -1 if e % 2 else 1


class MomentMap:
    """Components f_k of a homotopy moment map, stored on sorted basis tuples.

    ``components[(i_1, ..., i_k)]`` is the (n-k)-form f_k(e_i1, ..., e_ik).
    """

    def __init__(self, action: LieAction, components: Mapping[Sequence[int], DifferentialForm],
                 product: ProductAction | None = None):
        n = action.plectic.n
        comp: dict[tuple[int, ...], DifferentialForm] = {}
        for idx, form in components.items():
            sign, key = sort_with_sign(tuple(idx))
            if not sign or not form:
                continue
            k = len(key)
            if not 1 <= k <= n:
                raise DegreeError(f"moment map component of arity {k} outside 1..{n}")
            if form.chart != action.chart:
                raise ChartMismatch("moment map component on a different chart")
            if form.degree != n - k:
                raise DegreeError(f"f_{k} must take values in {n - k}-forms")
            f = form if sign > 0 else -form
            comp[key] = comp[key] + f if key in comp else f
        self.action = action
        self.components = {k: v for k, v in comp.items() if v}
        self.product = product

    @property
    def n(self) -> int:
        return self.action.plectic.n

    @property
    def algebra(self):
        return self.action.algebra

    @property
    def plectic(self) -> PrePlectic:
        return self.action.plectic

    def f(self, idx: Sequence[int]) -> DifferentialForm:
        """f_k on an arbitrary tuple of basis indices."""
        k = len(idx)
        sign, key = sort_with_sign(tuple(idx))
        val = self.components.get(key) if sign else None
        if val is None:
            return DifferentialForm.zero(self.action.chart, self.n - k)
        return val if sign > 0 else -val

    def evaluate(self, vectors: Sequence[Mapping[int, Fraction]]) -> DifferentialForm:
        """Multilinear evaluation on Lie algebra vectors given as sparse dicts."""
        k = len(vectors)
        total = DifferentialForm.zero(self.action.chart, self.n - k)
        for choice in iproduct(*(sorted(v.items()) for v in vectors)):
            idx = tuple(i for i, _ in choice)
            if len(set(idx)) < k:
                continue
            c = Fraction(1)
            for _, a in choice:
                c *= Fraction(a)
            val = self.f(idx)
            if val:
                total = total + val.scale(c)
        return total

    def first_observable(self, i: int) -> Observable:
        """f_1(e_i) as a degree-0 observable with Hamiltonian vector field v_{e_i}."""
        return Observable(self.plectic, 0, self.f((i,)), self.action.generators[i])

    def arity(self, k: int) -> dict[tuple[int, ...], DifferentialForm]:
        return {t: f for t, f in self.components.items() if len(t) == k}

    def __eq__(self, other) -> bool:
        if not isinstance(other, MomentMap):
            return NotImplemented
        return (self.action.chart == other.action.chart and self.algebra == other.algebra
                and self.components == other.components)

    def __hash__(self) -> int:
        return hash(frozenset(self.components.items()))

    def difference(self, other: MomentMap) -> dict[tuple[int, ...], DifferentialForm]:
        keys = set(self.components) | set(other.components)
        out = {}
        for k in sorted(keys, key=lambda t: (len(t), t)):
            dk = self.f(k) - other.f(k)
            if dk:
                out[k] = dk
        return out

    def __repr__(self) -> str:
        return f"MomentMap(n={self.n}, dim g={self.algebra.dim}, {len(self.components)} nonzero components)"


@dataclass
class Defect:
    equation: str
    arity: int
    tuple: tuple[int, ...]
    form: DifferentialForm


@dataclass
class MomentReport:
    """Per-equation defects; ``passed`` iff every defect form is zero."""

    checked: int = 0
    defects: list[Defect] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.defects

    def add(self, equation: str, tup: tuple[int, ...], form: DifferentialForm) -> None:
        self.checked += 1
        if form:
            self.defects.append(Defect(equation, len(tup), tup, form))

    def merge(self, other: MomentReport) -> MomentReport:
        return MomentReport(self.checked + other.checked, self.defects + other.defects)

    def summary(self) -> str:
        if self.passed:
            return f"pass ({self.checked} equations)"
        d = self.defects[0]
        return f"fail: {len(self.defects)}/{self.checked} nonzero, first {d.equation} on {d.tuple}: {d.form.to_str()}"


def bracket_sum(m: MomentMap, tup: Sequence[int]) -> DifferentialForm:
    """sum_{i<j} (-1)^(i+j+1) f_{k-1}([x_i, x_j], x_1, ..^i..^j.., x_k)."""
    g = m.algebra
    k = len(tup)
    total = DifferentialForm.zero(m.action.chart, m.n - k + 1)
    for i in range(k):
        for j in range(i + 1, k):
            br = g.bracket_basis(tup[i], tup[j])
            if not br:
                continue
            rest = tuple(tup[:i]) + tuple(tup[i + 1:j]) + tuple(tup[j + 1:])
            sign = 1 if (i + j) & 1 else -1
            for l, c in br.items():
                val = m.f((l,) + rest)
                if val:
                    total = total + val.scale(c * sign)
    return total


def verify(m: MomentMap) -> MomentReport:
    """Check the defining equations of a homotopy moment map on all sorted basis tuples."""
    rep = MomentReport()
    act = m.action
    omega = act.plectic.omega
    n = m.n
    gens = act.generators
    for i in range(m.algebra.dim):
        rep.add("mom", (i,), exterior_derivative(m.f((i,))) + contract_multi([gens[i]], omega))
    for k in range(2, n + 2):
        for tup in combinations(range(m.algebra.dim), k):
            lhs = bracket_sum(m, tup)
            contr = contract_multi([gens[i] for i in tup], omega).scale(varsigma(k))
            if k <= n:
                rep.add("main1", tup, lhs - exterior_derivative(m.f(tup)) - contr)
            else:
                rep.add("main2", tup, lhs - contr)
    return rep


def _ensure(m: MomentMap, what: str, check: bool) -> MomentMap:
    if check:
        rep = verify(m)
        if not rep.passed:
            raise MomentMapError(f"{what} does not verify: {rep.summary()}", rep)
    return m


# ---------------------------------------------------------------- products

@dataclass(frozen=True)
class ProductCoefficients:
    """The scalars c^a_{m,l} and c^b_{m,l} of the product construction.

    ``overrides`` maps ("a" | "b", m, l) to a replacement value, for negative controls.
    """

    overrides: tuple = ()

    def _over(self, which: str, m: int, l: int):
        for key, val in self.overrides:
            if key == (which, m, l):
                return Fraction(val)
        return None

    def ca(self, m: int, l: int, na: int) -> Fraction:
        o = self._over("a", m, l)
        if o is not None:
            return o
        if l == 0:
            return Fraction(1)
        return Fraction(varsigma(m + l) * varsigma(m) * _pm((na + 1 - m) * l), 2)

    def cb(self, m: int, l: int, na: int) -> Fraction:
        o = self._over("b", m, l)
        if o is not None:
            return o
        if m == 0:
            return Fraction(_pm((l + 1) * (na + 1)))
        return Fraction(varsigma(m + l) * varsigma(l) * _pm((na + 1 - m) * (l + 1)), 2)

    def perturbed(self, which: str, m: int, l: int, value) -> ProductCoefficients:
        return ProductCoefficients(self.overrides + (((which, m, l), Fraction(value)),))


@dataclass(frozen=True)
class HatCoefficients(ProductCoefficients):
    """The coefficients used with square brackets in the simplified product formula."""

    def ca(self, m: int, l: int, na: int) -> Fraction:
        o = self._over("a", m, l)
        if o is not None:
            return o
        if l == 0:
            return Fraction(-1)
        return Fraction(-_pm((na + 1) * l), 2)

    def cb(self, m: int, l: int, na: int) -> Fraction:
        o = self._over("b", m, l)
        if o is not None:
            return o
        if m == 0:
            return Fraction(-_pm((l + 1) * (na + 1)))
        return Fraction(-_pm((na + 1) * (l + 1) + m), 2)


STANDARD = ProductCoefficients()
STANDARD_HAT = HatCoefficients()


def _split(tup: Sequence[int], da: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return tuple(i for i in tup if i < da), tuple(i - da for i in tup if i >= da)


def _iota(action: LieAction, idx: Sequence[int]) -> DifferentialForm:
    omega = action.plectic.omega
    if not idx:
        return omega
    return contract_multi([action.generators[i] for i in idx], omega)


def product(fa: MomentMap, fb: MomentMap, coeffs: ProductCoefficients = STANDARD,
            check: bool = True) -> MomentMap:
    """The moment map for the product action on (M_a x M_b, omega_a ^ omega_b)."""
    prod = ProductAction(fa.action, fb.action)
    na, nb = fa.n, fb.n
    n = na + nb + 1
    da = fa.algebra.dim
    G = prod.algebra
    lift = prod.pchart.lift
    comps = {}
    for k in range(1, n + 1):
        for tup in combinations(range(G.dim), k):
            I, J = _split(tup, da)
            m, l = len(I), len(J)
            val = DifferentialForm.zero(prod.chart, n - k)
            if 1 <= m <= na:
                c = coeffs.ca(m, l, na)
                if c:
                    val = val + wedge(lift(fa.f(I), 0), lift(_iota(fb.action, J), 1)).scale(c)
            if 1 <= l <= nb:
                c = coeffs.cb(m, l, na)
                if c:
                    val = val + wedge(lift(_iota(fa.action, I), 0), lift(fb.f(J), 1)).scale(c)
            if val:
                comps[tup] = val
    return _ensure(MomentMap(prod.action, comps, prod), "product moment map", check)


def product_hat_form(fa: MomentMap, fb: MomentMap, coeffs: ProductCoefficients = STANDARD_HAT,
                     check: bool = True) -> MomentMap:
    """The same product, written with square brackets of the first components."""
    prod = ProductAction(fa.action, fb.action)
    na, nb = fa.n, fb.n
    n = na + nb + 1
    da = fa.algebra.dim
    lift = prod.pchart.lift
    pa, pb = fa.plectic, fb.plectic
    comps = {}
    for k in range(1, n + 1):
        for tup in combinations(range(prod.algebra.dim), k):
            I, J = _split(tup, da)
            m, l = len(I), len(J)
            val = DifferentialForm.zero(prod.chart, n - k)
            if 1 <= m <= na:
                sq = square_bracket(pb, [fb.first_observable(j) for j in J])
                val = val + wedge(lift(fa.f(I), 0), lift(sq, 1)).scale(coeffs.ca(m, l, na))
            if 1 <= l <= nb:
                sq = square_bracket(pa, [fa.first_observable(i) for i in I])
                val = val + wedge(lift(sq, 0), lift(fb.f(J), 1)).scale(coeffs.cb(m, l, na))
            if val:
                comps[tup] = val
    return _ensure(MomentMap(prod.action, comps, prod), "product moment map (bracket form)", check)


# ---------------------------------------------------------------- primitives

def presymplectic_product_formulas(fa: MomentMap, fb: MomentMap) -> MomentMap:
    """The product for two pre-symplectic factors, written out term by term.

    F_1 = f^a w_b + w_a f^b;  F_2 = 1/2(-f^a(x) iota_{v(y_b)} w_b + iota_{v(x_a)} w_a f^b(y)) - (x <-> y);
    F_3 = -1/2(f^a(x) iota_{v(y_b) v(z_b)} w_b + iota_{v(x_a) v(y_a)} w_a f^b(z)) + cyclic permutations.
    """
    if fa.n != 1 or fb.n != 1:
        raise PreconditionFailed("defined only for two pre-symplectic factors")
    prod = ProductAction(fa.action, fb.action)
    lift = prod.pchart.lift
    chart = prod.chart
    da = fa.algebra.dim
    wa, wb = lift(fa.plectic.omega, 0), lift(fb.plectic.omega, 1)
    zero_vf_a = PolyVectorField.zero(fa.action.chart)
    zero_vf_b = PolyVectorField.zero(fb.action.chart)

    def fA(i):
        return lift(fa.f((i,)), 0) if i < da else DifferentialForm.zero(chart, 0)

    def fB(i):
        return lift(fb.f((i - da,)), 1) if i >= da else DifferentialForm.zero(chart, 0)

    def vA(i):
        return fa.action.generators[i] if i < da else zero_vf_a

    def vB(i):
        return fb.action.generators[i - da] if i >= da else zero_vf_b

    def iA(*idx):
        return lift(contract_multi([vA(i) for i in idx], fa.plectic.omega), 0)

    def iB(*idx):
        return lift(contract_multi([vB(i) for i in idx], fb.plectic.omega), 1)

    half = Fraction(1, 2)
    comps = {}
    for i in range(prod.algebra.dim):
        comps[(i,)] = wedge(fA(i), wb) + wedge(wa, fB(i))
    for x, y in combinations(range(prod.algebra.dim), 2):
        t = (-wedge(fA(x), iB(y)) + wedge(iA(x), fB(y))).scale(half)
        t = t - (-wedge(fA(y), iB(x)) + wedge(iA(y), fB(x))).scale(half)
        comps[(x, y)] = t
    for tup in combinations(range(prod.algebra.dim), 3):
        t = DifferentialForm.zero(chart, 0)
        for r in range(3):
            x, y, z = tup[r], tup[(r + 1) % 3], tup[(r + 2) % 3]
            t = t + (wedge(fA(x), iB(y, z)) + wedge(iA(x, y), fB(z))).scale(-half)
        comps[tup] = t
    return MomentMap(prod.action, comps, prod)


def to_primitive(m: MomentMap) -> CochainElement:
    """phi_k = varsigma(k) f_k, an element of total degree n."""
    comps = {t: f.scale(varsigma(len(t))) for t, f in m.components.items()}
    return CochainElement(m.algebra, m.action.chart, m.n, comps)


def primitive_defect(action: LieAction, phi: CochainElement) -> CochainElement:
    return d_tot(phi) - tilde(action, action.plectic.omega)


def moment_from_primitive(action: LieAction, phi: CochainElement, check: bool = True,
                          product: ProductAction | None = None) -> MomentMap:
    if check and primitive_defect(action, phi):
        raise PreconditionFailed("cochain is not a primitive of the tilde of omega")
    comps = {t: f.scale(varsigma(len(t))) for t, f in phi.items() if t}
    return _ensure(MomentMap(action, comps, product), "moment map from primitive", check)


def product_via_primitives(fa: MomentMap, fb: MomentMap, check: bool = True) -> MomentMap:
    """The product computed in the bicomplex: translate, multiply primitives, translate back."""
    prod = ProductAction(fa.action, fb.action)
    phi = primitive_product(to_primitive(fa), to_primitive(fb), prod, check=check)
    return moment_from_primitive(prod.action, phi, check=check, product=prod)


# ---------------------------------------------------------------- restrictions

def restrict_subalgebra(m: MomentMap, hom: LieAlgebraHom, check: bool = True) -> MomentMap:
    """Precompose every slot with a Lie algebra inclusion h -> g."""
    if hom.target != m.algebra:
        raise PreconditionFailed("inclusion does not land in the acting algebra")
    act = m.action
    gens = [act.vf(img) for img in hom.images]
    sub = LieAction(hom.source, act.plectic, gens)
    comps = {}
    for k in range(1, m.n + 1):
        for tup in combinations(range(hom.source.dim), k):
            val = m.evaluate([hom.images[i] for i in tup])
            if val:
                comps[tup] = val
    return _ensure(MomentMap(sub, comps), "restriction to a subalgebra", check)


def restrict_generators(action: LieAction, cmap: CoordinateMap) -> list[PolyVectorField]:
    """Vector fields u_i on the source with d(cmap)(u_i) = v_i o cmap; affine maps only."""
    if cmap.target != action.chart:
        raise ChartMismatch("map does not land in the chart of the action")
    if not cmap.is_affine():
        raise PreconditionFailed("automatic restriction of generators needs an affine map")
    src = cmap.source
    jac = [[entry.constant_term() for entry in row] for row in cmap.jacobian()]
    solver = LinearSolver(jac, src.dim)
    out = []
    for i, v in enumerate(action.generators):
        along = [cmap.pull_function(c) for c in v.components]
        monos = set()
        for p in along:
            monos.update(p.terms)
        comps: list[dict] = [{} for _ in range(src.dim)]
        for mono in monos:
            x = solver.solve([p.terms.get(mono, Fraction(0)) for p in along])
            if x is None:
                raise NotInvariant(f"generator {i} is not tangent to the submanifold")
            for s, val in enumerate(x):
                if val:
                    comps[s][mono] = val
        out.append(PolyVectorField(src, [Polynomial(src.dim, c) for c in comps]))
    return out


def restrict_submanifold(m: MomentMap, cmap: CoordinateMap, check: bool = True) -> MomentMap:
    """Pull a moment map back along an invariant submanifold i: N -> M."""
    act = m.action
    gens = restrict_generators(act, cmap)
    sub_plectic = PrePlectic(pullback(cmap, act.plectic.omega), act.plectic.n)
    sub = LieAction(act.algebra, sub_plectic, gens)
    comps = {t: pullback(cmap, f) for t, f in m.components.items()}
    return _ensure(MomentMap(sub, comps), "restriction to a submanifold", check)


# ---------------------------------------------------------------- powers and sums

def diagonal_power(m: MomentMap, coeffs: ProductCoefficients = STANDARD, check: bool = True
                   ) -> tuple[MomentMap, dict[int, int]]:
    """The moment map for (M, omega ^ omega) from the closed double-sum formula.

    Returns the map and the number of summands used at each arity.
    """
    act = m.action
    n = m.n
    chart = act.chart
    ww = wedge(act.plectic.omega, act.plectic.omega)
    plectic2 = PrePlectic(ww, 2 * n + 1)
    act2 = act.with_form(plectic2)
    if n % 2 == 0:
        warnings.warn("omega has odd degree, so omega ^ omega = 0; returning the zero moment map")
        return MomentMap(act2, {}), {k: 0 for k in range(1, 2 * n + 2)}
    counts = {}
    comps = {}
    for k in range(1, 2 * n + 2):
        counts[k] = sum(len(unshuffles(mm, k - mm)) for mm in range(1, k + 1))
        for tup in combinations(range(m.algebra.dim), k):
            val = DifferentialForm.zero(chart, 2 * n + 1 - k)
            for mm in range(1, k + 1):
                c = 2 * coeffs.ca(mm, k - mm, n)
                for s in unshuffles(mm, k - mm):
                    if mm > n:
                        continue
                    fpart = m.f([tup[i] for i in s[:mm]])
                    if not fpart:
                        continue
                    ipart = _iota(act, [tup[i] for i in s[mm:]])
                    val = val + wedge(fpart, ipart).scale(c * perm_sign(s))
            if val:
                comps[tup] = val
    return _ensure(MomentMap(act2, comps), "diagonal power", check), counts


def diagonal_power_via_restriction(m: MomentMap, check: bool = True) -> MomentMap:
    """i^* F o j: the product with itself, restricted to the diagonal subalgebra and submanifold."""
    F = product(m, m, check=check)
    prod = F.product
    diag_alg = prod.algebra.diagonal()
    Fj = restrict_subalgebra(F, diag_alg, check=check)
    chart = m.action.chart
    pc = prod.pchart
    images = [Polynomial.variable(chart.dim, i) for i in range(chart.dim)] * 2
    cmap = CoordinateMap(chart, pc.chart, images)
    out = restrict_submanifold(Fj, cmap, check=check)
    return out


def moment_sum(m1: MomentMap, m2: MomentMap, check: bool = True) -> MomentMap:
    """F^1 + F^2 for the same generators, verified against Omega_1 + Omega_2."""
    a1, a2 = m1.action, m2.action
    if a1.algebra != a2.algebra or a1.generators != a2.generators:
        raise PreconditionFailed("moment maps for different actions")
    if a1.plectic.n != a2.plectic.n:
        raise DegreeError("forms of different degree")
    plectic = PrePlectic(a1.plectic.omega + a2.plectic.omega, a1.plectic.n)
    act = a1.with_form(plectic)
    comps = dict(m1.components)
    for t, f in m2.components.items():
        comps[t] = comps[t] + f if t in comps else f
    return _ensure(MomentMap(act, comps), "sum of moment maps", check)


# ---------------------------------------------------------------- associativity

@dataclass
class AssociativityResult:
    """The two bracketings of a triple product and the gap between their primitives.

    ``difference`` is prim(f^a * (f^b * f^c)) - prim((f^a * f^b) * f^c).  With
    s = (-1)^(n_a + n_b) it equals s * d_tot(-1/4 phi^a w~_b phi^c), which the
    Leibniz rule expands to 1/4 (phi^a w~_b w~_c - s w~_a w~_b phi^c).  For
    n_a + n_b even the sign s is +1 and the exact term appears unchanged.
    """

    left: MomentMap          # (f^a * f^b) * f^c
    right: MomentMap         # f^a * (f^b * f^c)
    difference: CochainElement
    sign: int
    potential: CochainElement    # -1/4 phi^a w~_b phi^c
    expanded: CochainElement     # 1/4 (phi^a w~_b w~_c - s w~_a w~_b phi^c)
    left_report: MomentReport
    right_report: MomentReport

    @property
    def maps_differ(self) -> bool:
        return self.left != self.right

    @property
    def difference_is_exact_term(self) -> bool:
        return self.difference == d_tot(self.potential).scale(self.sign)

    @property
    def expanded_form_matches(self) -> bool:
        return self.difference == self.expanded

    @property
    def unsigned_identity_holds(self) -> bool:
        """difference == d_tot(-1/4 phi^a w~_b phi^c) with no parity sign."""
        return self.difference == d_tot(self.potential)


def associativity_defect(fa: MomentMap, fb: MomentMap, fc: MomentMap,
                         coeffs: ProductCoefficients = STANDARD) -> AssociativityResult:
    left = product(product(fa, fb, coeffs, check=False), fc, coeffs, check=False)
    right = product(fa, product(fb, fc, coeffs, check=False), coeffs, check=False)
    flat = ProductAction(fa.action, fb.action, fc.action)
    if flat.chart != left.action.chart or flat.algebra != left.algebra:
        raise ChartMismatch("triple products do not share a chart")
    diff = to_primitive(right) - to_primitive(left)
    sign = _pm(fa.n + fb.n)
    pa = promote_cochain(to_primitive(fa), flat, 0)
    pc = promote_cochain(to_primitive(fc), flat, 2)
    ta = promote_cochain(tilde(fa.action, fa.plectic.omega), flat, 0)
    tb = promote_cochain(tilde(fb.action, fb.plectic.omega), flat, 1)
    tc = promote_cochain(tilde(fc.action, fc.plectic.omega), flat, 2)
    potential = (pa * tb * pc).scale(Fraction(-1, 4))
    expanded = (pa * tb * tc - (ta * tb * pc).scale(sign)).scale(Fraction(1, 4))
    return AssociativityResult(left, right, diff, sign, potential, expanded, verify(left), verify(right))


# ---------------------------------------------------------------- Cartan-model H_3

def equivariance_defects(m: MomentMap) -> list[tuple[int, int]]:
    """Pairs (i, j) where f_1([e_i, e_j]) differs from l_2(f_1(e_i), f_1(e_j))."""
    bad = []
    g = m.algebra
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = m.evaluate([g.bracket_basis(i, j)]) if g.bracket_basis(i, j) else DifferentialForm.zero(m.action.chart, m.n - 1)
            rhs = l_bracket(m.plectic, [m.first_observable(i), m.first_observable(j)]).form
            if lhs != rhs:
                bad.append((i, j))
    return bad


def cartan_h3(fa: MomentMap, fb: MomentMap) -> MomentMap:
    """H with H_1 = F_1, H_2 = F_2 and the corrected third component, for n_a = n_b = 1."""
    if fa.n != 1 or fb.n != 1:
        raise PreconditionFailed("defined only for two pre-symplectic factors")
    for f, name in ((fa, "f^a"), (fb, "f^b")):
        if equivariance_defects(f):
            raise NotEquivariant(f"{name} is not equivariant")
    F = product(fa, fb, check=False)
    prod = F.product
    da = fa.algebra.dim
    lift = prod.pchart.lift
    chart = prod.chart
    comps = {t: v for t, v in F.components.items() if len(t) < 3}

    def part(i: int, side: int) -> dict:
        # the a- or b-component of basis vector e_i of the direct sum
        if side == 0:
            return {i: Fraction(1)} if i < da else {}
        return {i - da: Fraction(1)} if i >= da else {}

    def fa1(u):
        return lift(fa.evaluate([u]), 0) if u else DifferentialForm.zero(chart, 0)

    def fb1(u):
        return lift(fb.evaluate([u]), 1) if u else DifferentialForm.zero(chart, 0)

    for tup in combinations(range(prod.algebra.dim), 3):
        val = F.f(tup).scale(Fraction(2, 3))
        corr = DifferentialForm.zero(chart, 0)
        for r in range(3):
            x, y, z = tup[r], tup[(r + 1) % 3], tup[(r + 2) % 3]
            yz_b = fb.algebra.bracket(part(y, 1), part(z, 1))
            yz_a = fa.algebra.bracket(part(y, 0), part(z, 0))
            corr = corr + wedge(fa1(part(x, 0)), fb1(yz_b)) + wedge(fa1(yz_a), fb1(part(x, 1)))
        val = val - corr.scale(Fraction(1, 6))
        if val:
            comps[tup] = val
    return MomentMap(prod.action, comps, prod)


def cartan_h3_check(fa: MomentMap, fb: MomentMap) -> tuple[MomentMap, MomentReport]:
    H = cartan_h3(fa, fb)
    return H, verify(H)
