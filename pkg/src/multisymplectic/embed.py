"""The L-infinity embedding of a direct sum of observable algebras into the observables of the product.

Elements of the source are pairs ``alpha + beta`` of observables of the two
factors with a common degree.  The target is the observable algebra of
``(M_a x M_b, omega_a ^ omega_b)``, a Lie (n_a + n_b + 1)-algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as iproduct
from typing import Callable, Sequence

from .errors import ChartMismatch, DegreeError, NoSignAssignment
from .exterior import DifferentialForm, ProductChart, exterior_derivative, wedge
from .observables import Observable, PrePlectic, jacobi_defect, l_bracket, square_bracket
from .signs import gamma, koszul_sign, nondecreasing_partitions, ordered_unshuffles, signed_koszul, unshuffles

HALF = Fraction(1, 2)


def _pm(e: int) -> int:
    return -1 if e % 2 else 1


class SumSpace:
    """The direct sum L(M_a, omega_a) + L(M_b, omega_b) together with the target on the product."""

    def __init__(self, pa: PrePlectic, pb: PrePlectic):
        self.pa = pa
        self.pb = pb
        self.pchart = ProductChart.of(pa.chart, pb.chart)
        omega = wedge(self.pchart.lift(pa.omega, 0), self.pchart.lift(pb.omega, 1))
        self.target = PrePlectic(omega, pa.n + pb.n + 1, name="product")

    @property
    def na(self) -> int:
        return self.pa.n

    @property
    def nb(self) -> int:
        return self.pb.n

    def factor(self, side: int) -> PrePlectic:
        return self.pa if side == 0 else self.pb

    def lift(self, obj, side: int):
        return self.pchart.lift(obj, side)

    def element(self, alpha: Observable | None = None, beta: Observable | None = None,
                degree: int | None = None) -> SumObservable:
        if degree is None:
            if alpha is None and beta is None:
                raise DegreeError("the degree of the zero element must be given")
            degree = alpha.degree if alpha is not None else beta.degree
        if alpha is None:
            alpha = self.pa.zero(degree)
        if beta is None:
            beta = self.pb.zero(degree)
        return SumObservable(self, degree, alpha, beta)

    def pure(self, side: int, obs: Observable) -> SumObservable:
        return self.element(obs, None) if side == 0 else self.element(None, obs)

    def lowest_degree(self) -> int:
        return 1 - max(self.na, self.nb)


class SumObservable:
    """An element alpha + beta of the direct sum, both parts of L-infinity degree ``degree``."""

    __slots__ = ("space", "degree", "a", "b")

    def __init__(self, space: SumSpace, degree: int, a: Observable, b: Observable):
        if a.parent is not space.pa and a.parent.omega != space.pa.omega:
            raise ChartMismatch("first summand does not belong to the first factor")
        if b.parent is not space.pb and b.parent.omega != space.pb.omega:
            raise ChartMismatch("second summand does not belong to the second factor")
        if a.degree != degree or b.degree != degree:
            raise DegreeError("summands must share the degree of the pair")
        self.space = space
        self.degree = degree
        self.a = a
        self.b = b

    def part(self, side: int) -> Observable:
        return self.a if side == 0 else self.b

    @property
    def pure(self) -> str | None:
        """'a' or 'b' when exactly one summand is nonzero."""
        za, zb = self.a.is_zero(), self.b.is_zero()
        if za != zb:
            return "b" if za else "a"
        return None

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def __add__(self, other: SumObservable) -> SumObservable:
        return SumObservable(self.space, self.degree, self.a + other.a, self.b + other.b)

    def scale(self, c) -> SumObservable:
        return SumObservable(self.space, self.degree, self.a.scale(c), self.b.scale(c))

    def __repr__(self) -> str:
        return f"SumObservable(deg={self.degree}, {self.a.form.to_str()} + {self.b.form.to_str()})"


def sum_bracket(space: SumSpace, args: Sequence[SumObservable]) -> SumObservable:
    """Componentwise bracket l_k on the direct sum."""
    if not args:
        raise ValueError("l_k needs k >= 1")
    for x in args:
        if x.space is not space:
            raise ChartMismatch("element of a different direct sum")
    a = l_bracket(space.pa, [x.a for x in args])
    b = l_bracket(space.pb, [x.b for x in args])
    return SumObservable(space, a.degree, a, b)


def sum_jacobi_defect(space: SumSpace, args: Sequence[SumObservable]) -> tuple[DifferentialForm, DifferentialForm]:
    return jacobi_defect(space.pa, [x.a for x in args]), jacobi_defect(space.pb, [x.b for x in args])


def lemma_square_check(space: SumSpace, alphas: Sequence[Observable], betas: Sequence[Observable]) -> DifferentialForm:
    """[a_1 w_b, ..., w_a b_m]_{k+m} + (-1)^(m(n_a+1)) [a...]_k ^ [b...]_m on the product.

    The Hamiltonian vector field of alpha ^ omega_b is the lift of that of alpha,
    and likewise for omega_a ^ beta.
    """
    k, m = len(alphas), len(betas)
    if k + m < 1:
        raise ValueError("need at least one entry")
    T = space.target
    lifted = []
    for side, xs in ((0, alphas), (1, betas)):
        for x in xs:
            if x.degree != 0:
                lifted.append(space.target.zero(x.degree))
                continue
            if side == 0:
                form = wedge(space.lift(x.form, 0), space.lift(space.pb.omega, 1))
            else:
                form = wedge(space.lift(space.pa.omega, 0), space.lift(x.form, 1))
            lifted.append(Observable(T, 0, form, space.lift(x.vf(), side)))
    left = square_bracket(T, lifted)
    right = wedge(space.lift(square_bracket(space.pa, alphas), 0), space.lift(square_bracket(space.pb, betas), 1))
    return left + right.scale(_pm(m * (space.na + 1)))


@dataclass(frozen=True)
class EmbeddingCoefficients:
    """The coefficients t^a_{m,i} and t^b_{k,i}; ``overrides`` maps ("a"|"b", m, i) to a value."""

    overrides: tuple[tuple[tuple[str, int, int], Fraction], ...] = ()

    def _over(self, key):
        for k, v in self.overrides:
            if k == key:
                return v
        return None

    def ta(self, m: int, i: int, na: int) -> Fraction:
        o = self._over(("a", m, i))
        if o is not None:
            return Fraction(o)
        if m == 0:
            return Fraction(-1)
        return -HALF * _pm(m * (na + 1 + i))

    def tb(self, k: int, i: int, na: int) -> Fraction:
        o = self._over(("b", k, i))
        if o is not None:
            return Fraction(o)
        if k == 0:
            return Fraction(-_pm(i * (na + 1)))
        return -HALF * _pm(i * (na + 1) + k)

    def perturbed(self, which: str, m: int, i: int, value) -> EmbeddingCoefficients:
        return EmbeddingCoefficients(self.overrides + (((which, m, i), Fraction(value)),))


STANDARD_T = EmbeddingCoefficients()


def _key(obs: Observable):
    return (obs.degree, obs.form, obs.ham_vf)


class EmbeddingH:
    """The components H_l, evaluated on demand with a memo of pure evaluations."""

    def __init__(self, space: SumSpace, coeffs: EmbeddingCoefficients = STANDARD_T):
        self.space = space
        self.coeffs = coeffs
        self._cache: dict = {}

    @property
    def target(self) -> PrePlectic:
        return self.space.target

    def component(self, alphas: Sequence[Observable], betas: Sequence[Observable]) -> Observable:
        """H_{k+m}(a_1, ..., a_k, b_1, ..., b_m) for pure inputs in canonical order."""
        sp = self.space
        k, m = len(alphas), len(betas)
        if k + m < 1:
            raise ValueError("H_l needs l >= 1")
        out_deg = sum(x.degree for x in alphas) + sum(x.degree for x in betas) + 1 - (k + m)
        T = sp.target
        form = DifferentialForm.zero(T.chart, T.n - 1 + out_deg)
        if k == 1:
            a = alphas[0]
            t = self.coeffs.ta(m, a.degree, sp.na)
            form = form + wedge(sp.lift(a.form, 0), sp.lift(square_bracket(sp.pb, betas), 1)).scale(t)
        if m == 1:
            b = betas[0]
            t = self.coeffs.tb(k, b.degree, sp.na)
            form = form + wedge(sp.lift(square_bracket(sp.pa, alphas), 0), sp.lift(b.form, 1)).scale(t)
        vf = None
        if out_deg == 0:
            # only H_1 reaches degree 0; its Hamiltonian field is the lifted one
            x, side = (alphas[0], 0) if k else (betas[0], 1)
            vf = sp.lift(x.vf(), side)
        return Observable(T, out_deg, form, vf)

    def pure_value(self, alphas: Sequence[Observable], betas: Sequence[Observable]) -> Observable:
        k, m = len(alphas), len(betas)
        if k != 1 and m != 1:
            # at least two entries on each side, or none on one side and several on the other
            out_deg = sum(x.degree for x in alphas) + sum(x.degree for x in betas) + 1 - (k + m)
            return self.target.zero(out_deg)
        key = (tuple(_key(x) for x in alphas), tuple(_key(x) for x in betas))
        val = self._cache.get(key)
        if val is None:
            val = self.component(alphas, betas)
            self._cache[key] = val
        return val

    def __call__(self, args: Sequence[SumObservable]) -> Observable:
        """H_l on arbitrary elements: expand into pure pieces and reorder a's before b's."""
        l = len(args)
        if l < 1:
            raise ValueError("H_l needs l >= 1")
        degs = [x.degree for x in args]
        out_deg = sum(degs) + 1 - l
        total = self.target.zero(out_deg)
        choices = []
        for x in args:
            opts = [s for s in (0, 1) if not x.part(s).is_zero()]
            if not opts:
                return total
            choices.append(opts)
        for sides in iproduct(*choices):
            perm = tuple(r for r in range(l) if sides[r] == 0) + tuple(r for r in range(l) if sides[r] == 1)
            k = l - sum(sides)
            sign = signed_koszul(perm, degs)
            alphas = [args[r].a for r in perm[:k]]
            betas = [args[r].b for r in perm[k:]]
            val = self.pure_value(alphas, betas)
            if not val.is_zero():
                total = total + (val if sign > 0 else -val)
        return total


def embed_component(H: EmbeddingH, alphas: Sequence[Observable], betas: Sequence[Observable]) -> Observable:
    return H.component(alphas, betas)


def evaluate_H(H: EmbeddingH, args: Sequence[SumObservable]) -> Observable:
    return H(args)


def morphism_sides(H: EmbeddingH, xs: Sequence[SumObservable],
                   gamma_fn: Callable[[int, Sequence[int]], int] = gamma) -> tuple[DifferentialForm, DifferentialForm]:
    """Both sides of the L-infinity morphism identity on the tuple ``xs``."""
    sp = H.space
    T = sp.target
    N = len(xs)
    if N < 1:
        raise ValueError("need at least one element")
    degs = [x.degree for x in xs]
    deg = T.n - 1 + sum(degs) + 2 - N
    lhs = DifferentialForm.zero(T.chart, deg)
    for i in range(1, N + 1):
        j = N + 1 - i
        outer = _pm(i * (j - 1))
        for s in unshuffles(i, N - i):
            inner = sum_bracket(sp, [xs[t] for t in s[:i]])
            if inner.is_zero():
                continue
            val = H([inner] + [xs[t] for t in s[i:]])
            if val.form:
                lhs = lhs + val.form.scale(outer * signed_koszul(s, degs))
    rhs = DifferentialForm.zero(T.chart, deg)
    block_cache: dict[tuple[int, ...], Observable] = {}
    for ell in range(1, N + 1):
        for blocks in nondecreasing_partitions(N, ell):
            g = _pm(gamma_fn(ell, blocks))
            for s in ordered_unshuffles(blocks):
                hs = []
                pos = 0
                for size in blocks:
                    key = s[pos:pos + size]
                    pos += size
                    h = block_cache.get(key)
                    if h is None:
                        h = H([xs[t] for t in key])
                        block_cache[key] = h
                    hs.append(h)
                if any(h.is_zero() for h in hs):
                    continue
                val = l_bracket(T, hs)
                if not val.form:
                    continue
                sign = g * signed_koszul(s, degs) * _rho_sign(blocks, [degs[t] for t in s])
                rhs = rhs + val.form.scale(sign)
    return lhs, rhs


def _rho_sign(blocks: Sequence[int], xdegs: Sequence[int]) -> int:
    # Koszul sign of moving each H_{N_r} (degree 1 - N_r) in front of its own block
    ell = len(blocks)
    degrees = [1 - b for b in blocks] + list(xdegs)
    perm = []
    pos = ell
    for r, size in enumerate(blocks):
        perm.append(r)
        perm.extend(range(pos, pos + size))
        pos += size
    return koszul_sign(perm, degrees)


def verify_linfty_morphism(H: EmbeddingH, xs: Sequence[SumObservable],
                           gamma_fn: Callable[[int, Sequence[int]], int] = gamma) -> DifferentialForm:
    """Left minus right side of the morphism identity; zero when H is an L-infinity morphism."""
    lhs, rhs = morphism_sides(H, xs, gamma_fn)
    return lhs - rhs


def presymplectic_h2(space: SumSpace, f: SumObservable, g: SumObservable) -> DifferentialForm:
    """1/2 (f_a dg_b - df_a g_b - g_a df_b + dg_a f_b) for two pre-symplectic factors."""
    d = exterior_derivative
    L = space.lift
    fa, fb, ga, gb = L(f.a.form, 0), L(f.b.form, 1), L(g.a.form, 0), L(g.b.form, 1)
    return ((fa ^ d(gb)) - (d(fa) ^ gb) - (ga ^ d(fb)) + (d(ga) ^ fb)).scale(HALF)


def presymplectic_h3(space: SumSpace, f: SumObservable, g: SumObservable, h: SumObservable) -> DifferentialForm:
    """1/2 (f_a{g_b,h_b} + f_b{g_a,h_a} - g_a{f_b,h_b} - g_b{f_a,h_a} + h_a{f_b,g_b} + h_b{f_a,g_a})."""
    L = space.lift

    def br(side, x, y):
        p = space.factor(side)
        return L(l_bracket(p, [x.part(side), y.part(side)]).form, side)

    def fn(side, x):
        return L(x.part(side).form, side)

    total = (fn(0, f) ^ br(1, g, h)) + (fn(1, f) ^ br(0, g, h)) - (fn(0, g) ^ br(1, f, h))
    total = total - (fn(1, g) ^ br(0, f, h)) + (fn(0, h) ^ br(1, f, g)) + (fn(1, h) ^ br(0, f, g))
    return total.scale(HALF)


# composition with a pair of moment maps


@dataclass
class CompositionResult:
    moment: object
    signs: dict[int, int]
    terms: dict[int, int] = field(default_factory=dict)


def _phi(H: EmbeddingH, fa, fb, block: Sequence[int]) -> SumObservable:
    """(f^a + f^b)_N on a block of basis indices of g_a + g_b."""
    sp = H.space
    da = fa.algebra.dim
    N = len(block)
    deg = 1 - N
    if all(i < da for i in block):
        if N == 1:
            return sp.element(fa.first_observable(block[0]), None)
        return sp.element(Observable(sp.pa, deg, fa.f(block)), None, deg)
    if all(i >= da for i in block):
        shifted = tuple(i - da for i in block)
        if N == 1:
            return sp.element(None, fb.first_observable(shifted[0]))
        return sp.element(None, Observable(sp.pb, deg, fb.f(shifted)), deg)
    return sp.element(degree=deg)


def composite_arity(H: EmbeddingH, fa, fb, tup: Sequence[int]) -> DifferentialForm:
    """(H o (f^a + f^b))_k on a basis tuple, with the same sign rule as the morphism identity."""
    k = len(tup)
    T = H.target
    total = DifferentialForm.zero(T.chart, T.n - k)
    for ell in range(1, k + 1):
        for blocks in nondecreasing_partitions(k, ell):
            g = _pm(gamma(ell, blocks))
            for s in ordered_unshuffles(blocks):
                args = []
                pos = 0
                for size in blocks:
                    args.append(_phi(H, fa, fb, [tup[t] for t in s[pos:pos + size]]))
                    pos += size
                if any(a.is_zero() for a in args):
                    continue
                val = H(args)
                if val.form:
                    total = total + val.form.scale(g * signed_koszul(s, [0] * k))
    return total


def compose_H_with_moments(H: EmbeddingH, fa, fb, target=None) -> CompositionResult:
    """Compare H o (f^a + f^b) with the product moment map, one sign per arity.

    Each arity k must satisfy composite_k = s_k F_k for a single s_k in {+1, -1};
    raises NoSignAssignment naming the first arity where neither sign works.
    """
    from .moment import MomentMap, product

    if fa.plectic.omega != H.space.pa.omega or fb.plectic.omega != H.space.pb.omega:
        raise ChartMismatch("moment maps do not act on the factors of the embedding")
    F = target if target is not None else product(fa, fb)
    n = H.target.n
    dim = fa.algebra.dim + fb.algebra.dim
    signs: dict[int, int] = {}
    terms: dict[int, int] = {}
    comps = {}
    for k in range(1, n + 1):
        vals = {tup: composite_arity(H, fa, fb, tup) for tup in combinations(range(dim), k)}
        found = None
        for s in (1, -1):
            if all(v.scale(s) == F.f(tup) for tup, v in vals.items()):
                found = s
                break
        if found is None:
            raise NoSignAssignment(f"no sign makes arity {k} of the composite match the product")
        signs[k] = found
        terms[k] = sum(1 for v in vals.values() if v)
        comps.update({tup: v.scale(found) for tup, v in vals.items() if v})
    return CompositionResult(MomentMap(F.action, comps, getattr(F, "product", None)), signs, terms)
