"""Lie algebras, infinitesimal actions and the bicomplex of g-valued cochains.

Cochains are elements of Lambda g* (x) Omega(M), stored as alternating maps on
strictly increasing tuples of basis indices.  The element xi^I (x) a evaluates
to ``a`` on the sorted tuple I, so (xi^1 ^ xi^2)(e_1, e_2) = 1.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .errors import (
    ChartMismatch,
    DegreeError,
    NoAnsatzSolution,
    NotAHomomorphism,
    NotASubalgebra,
    NotClosed,
    NotInvariant,
    PreconditionFailed,
)
from .exterior import (
    Chart,
    DifferentialForm,
    PolyVectorField,
    ProductChart,
    contract_multi,
    exterior_derivative,
    lie_derivative,
    merge_sign,
    wedge,
)
from .linalg import LinearSolver
from .observables import PrePlectic
from .signs import sort_with_sign

Vector = dict  # sparse {basis index: Fraction}


class LieAlgebraFD:
    """A finite-dimensional Lie algebra given by structure constants.

    ``constants[(i, j)] = {k: c}`` means [e_i, e_j] = sum_k c e_k, for i < j.
    """

    def __init__(self, dim: int, constants: Mapping[tuple[int, int], Mapping[int, object]] | None = None,
                 name: str = "", check: bool = True):
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), row in (constants or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise ValueError(f"basis index out of range in ({i}, {j})")
            if i == j:
                if any(Fraction(c) for c in row.values()):
                    raise ValueError("[e_i, e_i] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            cur = table.setdefault((i, j), {})
            for k, c in row.items():
                c = Fraction(c) * sign
                v = cur.get(k, Fraction(0)) + c
                if v:
                    cur[k] = v
                else:
                    cur.pop(k, None)
            if not cur:
                del table[(i, j)]
        self.dim = dim
        self.constants = table
        self.name = name
        if check:
            self._check_jacobi()

    @classmethod
    def abelian(cls, dim: int, name: str = "") -> LieAlgebraFD:
        return cls(dim, {}, name=name)

    @classmethod
    def from_dense(cls, c: Sequence[Sequence[Sequence[object]]], name: str = "") -> LieAlgebraFD:
        """``c[i][j][k]`` is the coefficient of e_k in [e_i, e_j]; checked for antisymmetry."""
        dim = len(c)
        for i in range(dim):
            for j in range(dim):
                for k in range(dim):
                    if Fraction(c[i][j][k]) != -Fraction(c[j][i][k]):
                        raise ValueError("structure constants are not antisymmetric")
        consts = {(i, j): {k: c[i][j][k] for k in range(dim) if Fraction(c[i][j][k])}
                  for i in range(dim) for j in range(i + 1, dim)}
        return cls(dim, consts, name=name)

    def dense(self) -> list[list[list[Fraction]]]:
        out = [[[Fraction(0)] * self.dim for _ in range(self.dim)] for _ in range(self.dim)]
        for (i, j), row in self.constants.items():
            for k, c in row.items():
                out[i][j][k] = c
                out[j][i][k] = -c
        return out

    def bracket_basis(self, i: int, j: int) -> Vector:
        if i == j:
            return {}
        if i < j:
            return dict(self.constants.get((i, j), {}))
        return {k: -c for k, c in self.constants.get((j, i), {}).items()}

    def bracket(self, u: Vector, v: Vector) -> Vector:
        out: dict[int, Fraction] = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.bracket_basis(i, j).items():
                    out[k] = out.get(k, Fraction(0)) + a * b * c
        return {k: c for k, c in out.items() if c}

    def is_abelian(self) -> bool:
        return not self.constants

    def _check_jacobi(self) -> None:
        for i, j, k in combinations(range(self.dim), 3):
            ei, ej, ek = {i: Fraction(1)}, {j: Fraction(1)}, {k: Fraction(1)}
            total: dict[int, Fraction] = {}
            for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
                for key, val in self.bracket(a, self.bracket(b, c)).items():
                    total[key] = total.get(key, Fraction(0)) + val
            if any(total.values()):
                raise ValueError(f"Jacobi identity fails on basis ({i}, {j}, {k})")

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebraFD) and self.dim == other.dim and self.constants == other.constants

    def __hash__(self) -> int:
        return hash((self.dim, frozenset((k, frozenset(v.items())) for k, v in self.constants.items())))

    def __repr__(self) -> str:
        return f"LieAlgebraFD(dim={self.dim}{', ' + self.name if self.name else ''})"


class DirectSumAlgebra(LieAlgebraFD):
    """Direct sum with block structure constants; cross brackets vanish."""

    def __init__(self, summands: Sequence[LieAlgebraFD]):
        offsets = []
        consts: dict[tuple[int, int], dict[int, Fraction]] = {}
        off = 0
        for g in summands:
            offsets.append(off)
            for (i, j), row in g.constants.items():
                consts[(i + off, j + off)] = {k + off: c for k, c in row.items()}
            off += g.dim
        super().__init__(off, consts, name="+".join(g.name or f"g{g.dim}" for g in summands), check=False)
        self.summands = tuple(summands)
        self.offsets = tuple(offsets)

    def inclusion(self, r: int) -> LieAlgebraHom:
        g = self.summands[r]
        return LieAlgebraHom(g, self, [{i + self.offsets[r]: Fraction(1)} for i in range(g.dim)])

    def diagonal(self) -> LieAlgebraHom:
        """x -> (x, x, ...) for a sum of copies of one algebra."""
        g = self.summands[0]
        if any(h != g for h in self.summands):
            raise NotASubalgebra("diagonal needs equal summands")
        imgs = [{i + off: Fraction(1) for off in self.offsets} for i in range(g.dim)]
        return LieAlgebraHom(g, self, imgs)


def direct_sum(*summands: LieAlgebraFD) -> DirectSumAlgebra:
    return DirectSumAlgebra(summands)


class LieAlgebraHom:
    """A linear map given by images of basis vectors; checked to preserve brackets."""

    def __init__(self, source: LieAlgebraFD, target: LieAlgebraFD, images: Sequence[Vector]):
        if len(images) != source.dim:
            raise ValueError("one image per source basis vector")
        self.source = source
        self.target = target
        self.images = [{k: Fraction(v) for k, v in img.items() if Fraction(v)} for img in images]
        for i in range(source.dim):
            for j in range(i + 1, source.dim):
                lhs = self.apply(source.bracket_basis(i, j))
                rhs = target.bracket(self.images[i], self.images[j])
                if lhs != rhs:
                    raise NotASubalgebra(f"map does not preserve [e_{i}, e_{j}]")

    def apply(self, u: Vector) -> Vector:
        out: dict[int, Fraction] = {}
        for i, a in u.items():
            for k, c in self.images[i].items():
                out[k] = out.get(k, Fraction(0)) + a * c
        return {k: c for k, c in out.items() if c}


class LieAction:
    """An infinitesimal action by the vector fields ``generators[i] = v_{e_i}``.

    The generators must satisfy [v_i, v_j] = sum_k c_ij^k v_k and preserve omega.
    """

    def __init__(self, algebra: LieAlgebraFD, plectic: PrePlectic, generators: Sequence[PolyVectorField],
                 check: bool = True):
        if len(generators) != algebra.dim:
            raise ValueError("one generator per basis vector")
        for v in generators:
            if v.chart != plectic.chart:
                raise ChartMismatch("generator not on the chart of omega")
        self.algebra = algebra
        self.plectic = plectic
        self.generators = tuple(generators)
        if check:
            self._check()

    @property
    def chart(self) -> Chart:
        return self.plectic.chart

    def vf(self, u: Vector) -> PolyVectorField:
        out = PolyVectorField.zero(self.chart)
        for i, a in u.items():
            out = out + self.generators[i].scale(a)
        return out

    def _check(self) -> None:
        g = self.algebra
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = self.generators[i].bracket(self.generators[j])
                if lhs != self.vf(g.bracket_basis(i, j)):
                    raise NotAHomomorphism(f"[v_{i}, v_{j}] does not match the structure constants")
        for i, v in enumerate(self.generators):
            if lie_derivative(v, self.plectic.omega):
                raise NotInvariant(f"generator {i} does not preserve omega")

    def is_invariant(self, form: DifferentialForm) -> bool:
        return all(lie_derivative(v, form).is_zero() for v in self.generators)

    def with_form(self, plectic: PrePlectic, check: bool = True) -> LieAction:
        """The same generators acting on another closed form on the chart."""
        return LieAction(self.algebra, plectic, self.generators, check=check)


class ProductAction:
    """The product action of g_a + g_b + ... on the product with the wedge of the forms."""

    def __init__(self, *factors: LieAction):
        self.factors = tuple(factors)
        self.pchart = ProductChart.of(*(a.chart for a in factors))
        self.algebra = DirectSumAlgebra([a.algebra for a in factors])
        omega = None
        for r, a in enumerate(factors):
            lifted = self.pchart.lift(a.plectic.omega, r)
            omega = lifted if omega is None else wedge(omega, lifted)
        n = sum(a.plectic.n + 1 for a in factors) - 1
        self.plectic = PrePlectic(omega, n)
        gens = []
        for r, a in enumerate(factors):
            gens.extend(self.pchart.lift(v, r) for v in a.generators)
        self.action = LieAction(self.algebra, self.plectic, gens)

    @property
    def chart(self) -> Chart:
        return self.pchart.chart

    def lift_form(self, form: DifferentialForm, r: int) -> DifferentialForm:
        return self.pchart.lift(form, r)

    def lift_cochain(self, e: CochainElement, r: int) -> CochainElement:
        return promote_cochain(e, self, r)


def product_action(*factors: LieAction) -> ProductAction:
    return ProductAction(*factors)


class CochainElement:
    """A homogeneous element of Lambda g* (x) Omega(M).

    ``components`` maps sorted basis tuples (the empty tuple for arity 0) to forms;
    the form on an arity-k tuple has degree ``total_degree - k``.
    """

    __slots__ = ("algebra", "chart", "total_degree", "_comp")

    def __init__(self, algebra: LieAlgebraFD, chart: Chart, total_degree: int,
                 components: Mapping[tuple[int, ...], DifferentialForm] | None = None):
        comp: dict[tuple[int, ...], DifferentialForm] = {}
        for idx, form in (components or {}).items():
            sign, key = sort_with_sign(tuple(idx))
            if not sign or not form:
                continue
            if form.chart != chart:
                raise ChartMismatch("cochain component on a different chart")
            if form.degree != total_degree - len(key):
                raise DegreeError(f"component on {key} has form degree {form.degree}, expected {total_degree - len(key)}")
            val = comp.get(key)
            f = form if sign > 0 else -form
            val = f if val is None else val + f
            if val:
                comp[key] = val
            else:
                comp.pop(key, None)
        self.algebra = algebra
        self.chart = chart
        self.total_degree = total_degree
        self._comp = comp

    @classmethod
    def zero(cls, algebra: LieAlgebraFD, chart: Chart, total_degree: int) -> CochainElement:
        return cls(algebra, chart, total_degree, {})

    @classmethod
    def from_form(cls, algebra: LieAlgebraFD, form: DifferentialForm) -> CochainElement:
        """The arity-0 cochain 1 (x) form."""
        return cls(algebra, form.chart, form.degree, {(): form})

    def items(self):
        return self._comp.items()

    def component(self, idx: Sequence[int]) -> DifferentialForm:
        """Evaluate on an arbitrary basis tuple."""
        sign, key = sort_with_sign(tuple(idx))
        deg = self.total_degree - len(idx)
        if not sign:
            return DifferentialForm.zero(self.chart, deg)
        f = self._comp.get(key)
        if f is None:
            return DifferentialForm.zero(self.chart, deg)
        return f if sign > 0 else -f

    def arity_part(self, k: int) -> CochainElement:
        return CochainElement(self.algebra, self.chart, self.total_degree,
                              {i: f for i, f in self._comp.items() if len(i) == k})

    def arities(self) -> list[int]:
        return sorted({len(i) for i in self._comp})

    def is_zero(self) -> bool:
        return not self._comp

    def __bool__(self) -> bool:
        return bool(self._comp)

    def _compat(self, other: CochainElement) -> None:
        if other.algebra != self.algebra or other.chart != self.chart:
            raise ChartMismatch("cochains over different algebras or charts")

    def __add__(self, other: CochainElement) -> CochainElement:
        self._compat(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.total_degree != self.total_degree:
            raise DegreeError("adding cochains of different total degree")
        comp = dict(self._comp)
        for k, f in other._comp.items():
            comp[k] = comp[k] + f if k in comp else f
        return CochainElement(self.algebra, self.chart, self.total_degree, comp)

    def __neg__(self) -> CochainElement:
        return self.scale(-1)

    def __sub__(self, other: CochainElement) -> CochainElement:
        return self + (-other)

    def scale(self, c) -> CochainElement:
        return CochainElement(self.algebra, self.chart, self.total_degree,
                              {k: f.scale(c) for k, f in self._comp.items()})

    def __mul__(self, other):
        if isinstance(other, CochainElement):
            return cochain_product(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CochainElement):
            return NotImplemented
        if self.algebra != other.algebra or self.chart != other.chart:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.total_degree == other.total_degree and self._comp == other._comp

    def __hash__(self) -> int:
        return hash((self.chart, frozenset(self._comp.items())))

    def __repr__(self) -> str:
        parts = [f"{k}: {f.to_str()}" for k, f in sorted(self._comp.items(), key=lambda t: (len(t[0]), t[0]))]
        return f"Cochain[{self.total_degree}]{{" + ", ".join(parts) + "}"


def ce_diff(e: CochainElement) -> CochainElement:
    """Chevalley-Eilenberg differential with trivial coefficients; zero on arity 0.

    (d c)(x_0, ..., x_k) = sum_{i<j} (-1)^(i+j) c([x_i, x_j], x_0, ..^i..^j.., x_k).
    """
    g = e.algebra
    out: dict[tuple[int, ...], DifferentialForm] = {}
    arities = {len(k) for k in e._comp if k}
    deg = e.total_degree + 1
    for k in arities:
        for tup in combinations(range(g.dim), k + 1):
            acc = DifferentialForm.zero(e.chart, deg - (k + 1))
            for i in range(k + 1):
                for j in range(i + 1, k + 1):
                    br = g.bracket_basis(tup[i], tup[j])
                    if not br:
                        continue
                    rest = tup[:i] + tup[i + 1:j] + tup[j + 1:]
                    sign = -1 if (i + j) & 1 else 1
                    for l, c in br.items():
                        val = e.component((l,) + rest)
                        if val:
                            acc = acc + val.scale(c * sign)
            if acc:
                out[tup] = acc
    return CochainElement(g, e.chart, deg, out)


def de_rham(e: CochainElement) -> CochainElement:
    """(-1)^k d on the arity-k part."""
    out = {}
    for k, f in e.items():
        df = exterior_derivative(f)
        out[k] = -df if len(k) & 1 else df
    return CochainElement(e.algebra, e.chart, e.total_degree + 1, out)


def d_tot(e: CochainElement) -> CochainElement:
    return ce_diff(e) + de_rham(e)


def cochain_product(e: CochainElement, f: CochainElement) -> CochainElement:
    """(xi_I (x) a)(xi_J (x) b) = (-1)^(|a||J|) xi_I ^ xi_J (x) a ^ b."""
    e._compat(f)
    out: dict[tuple[int, ...], DifferentialForm] = {}
    for I, a in e.items():
        for J, b in f.items():
            s = merge_sign(I, J)
            if not s:
                continue
            if (a.degree * len(J)) & 1:
                s = -s
            ab = wedge(a, b)
            if not ab:
                continue
            key = tuple(sorted(I + J))
            ab = ab if s > 0 else -ab
            out[key] = out[key] + ab if key in out else ab
    return CochainElement(e.algebra, e.chart, e.total_degree + f.total_degree, out)


def promote_cochain(e: CochainElement, prod: ProductAction, r: int) -> CochainElement:
    """Pull a cochain on factor r back to the product algebra and chart."""
    fac = prod.factors[r]
    if e.algebra != fac.algebra or e.chart != fac.chart:
        raise ChartMismatch("cochain does not live on the requested factor")
    off = prod.algebra.offsets[r]
    return CochainElement(prod.algebra, prod.chart, e.total_degree,
                          {tuple(i + off for i in k): prod.pchart.lift(f, r) for k, f in e.items()})


def _check_invariant_closed(action: LieAction, sigma: DifferentialForm) -> None:
    if exterior_derivative(sigma):
        raise NotClosed("form is not closed")
    if not action.is_invariant(sigma):
        raise NotInvariant("form is not invariant under the action")


def tilde(action: LieAction, sigma: DifferentialForm, check: bool = True) -> CochainElement:
    """sum_{k=1}^N (-1)^(k-1) sigma^k with sigma^k(x_1..x_k) = iota(v_1 ^ ... ^ v_k) sigma."""
    if check:
        _check_invariant_closed(action, sigma)
    g = action.algebra
    N = sigma.degree
    out = {}
    for k in range(1, N + 1):
        sign = 1 if k & 1 else -1
        for tup in combinations(range(g.dim), k):
            val = contract_multi([action.generators[i] for i in tup], sigma)
            if val:
                out[tup] = val if sign > 0 else -val
    return CochainElement(g, action.chart, N, out)


def hat(action: LieAction, sigma: DifferentialForm, check: bool = True) -> CochainElement:
    return CochainElement.from_form(action.algebra, sigma) - tilde(action, sigma, check)


def primitive_product(phi_a: CochainElement, phi_b: CochainElement, prod: ProductAction,
                      check: bool = True) -> CochainElement:
    """The primitive of the product form built from primitives on the two factors."""
    act_a, act_b = prod.factors
    wa, wb = act_a.plectic.omega, act_b.plectic.omega
    if check:
        if d_tot(phi_a) != tilde(act_a, wa):
            raise PreconditionFailed("phi_a is not a primitive of the tilde of omega_a")
        if d_tot(phi_b) != tilde(act_b, wb):
            raise PreconditionFailed("phi_b is not a primitive of the tilde of omega_b")
    n_a = act_a.plectic.n
    G = prod.algebra
    pa, pb = promote_cochain(phi_a, prod, 0), promote_cochain(phi_b, prod, 1)
    ta, tb = promote_cochain(tilde(act_a, wa), prod, 0), promote_cochain(tilde(act_b, wb), prod, 1)
    oa = CochainElement.from_form(G, prod.lift_form(wa, 0))
    ob = CochainElement.from_form(G, prod.lift_form(wb, 1))
    sa = -1 if n_a & 1 else 1
    phi = ((-(pa * tb)) + (ta * pb).scale(sa)).scale(Fraction(1, 2)) + pa * ob + (oa * pb).scale(-sa)
    if check and d_tot(phi) != tilde(prod.action, prod.plectic.omega):
        raise PreconditionFailed("product primitive fails d_tot(phi) = tilde(omega_a ^ omega_b)")
    return phi


def potential_ansatz_terms(action: LieAction, beta: DifferentialForm) -> list[CochainElement]:
    """The cochains x_1..x_k -> iota(v_1 ^ ... ^ v_k) beta, one per arity k = 1..deg(beta)."""
    g = action.algebra
    terms = []
    for k in range(1, beta.degree + 1):
        comp = {}
        for tup in combinations(range(g.dim), k):
            val = contract_multi([action.generators[i] for i in tup], beta)
            if val:
                comp[tup] = val
        terms.append(CochainElement(g, action.chart, beta.degree, comp))
    return terms


def solve_primitive_from_potential(action: LieAction, beta: DifferentialForm) -> tuple[CochainElement, list[Fraction]]:
    """Find scalars s_k with phi = sum_k s_k iota(v_1..v_k) beta and d_tot(phi) = tilde(omega).

    Returns the primitive and the scalars.
    """
    omega = action.plectic.omega
    if exterior_derivative(beta) != omega:
        raise PreconditionFailed("d(beta) differs from omega")
    if not action.is_invariant(beta):
        raise PreconditionFailed("beta is not invariant")
    target = tilde(action, omega)
    terms = potential_ansatz_terms(action, beta)
    images = [d_tot(t) for t in terms]
    # flatten every (tuple, form index, monomial) coefficient into one linear system
    keys = set()
    for c in images + [target]:
        for tup, form in c.items():
            for idx, p in form.items():
                for mono in p.terms:
                    keys.add((tup, idx, mono))
    keys = sorted(keys)

    def coeff(c: CochainElement, key) -> Fraction:
        tup, idx, mono = key
        return c.component(tup).coefficient(idx).terms.get(mono, Fraction(0))

    rows = [[coeff(img, key) for img in images] for key in keys]
    rhs = [coeff(target, key) for key in keys]
    s = LinearSolver(rows, len(terms)).solve(rhs) if rows else [Fraction(0)] * len(terms)
    if s is None:
        raise NoAnsatzSolution("no scalars s_k make the potential ansatz a primitive")
    phi = CochainElement.zero(action.algebra, action.chart, beta.degree)
    for sk, t in zip(s, terms):
        phi = phi + t.scale(sk)
    if d_tot(phi) != target:
        raise NoAnsatzSolution("ansatz solution failed re-verification")
    return phi, s
