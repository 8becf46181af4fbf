"""Hamiltonian forms and the Lie n-algebra of observables of a closed form."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Sequence

from .errors import ChartMismatch, DegreeError, MissingVectorField, NotClosed, NotHamiltonian, UnsupportedOmega
from .exterior import Chart, DifferentialForm, PolyVectorField, contract, contract_multi, exterior_derivative
from .linalg import LinearSolver, rank
from .polynomial import Polynomial
from .signs import signed_koszul, unshuffles, varsigma


class PrePlectic:
    """A chart with a closed (n+1)-form ``omega``."""

    def __init__(self, omega: DifferentialForm, n: int | None = None, name: str = ""):
        if n is None:
            n = omega.degree - 1
        if omega and omega.degree != n + 1:
            raise DegreeError(f"omega has degree {omega.degree}, expected {n + 1}")
        if n < 0:
            raise DegreeError("omega must have degree at least 1")
        if exterior_derivative(omega):
            raise NotClosed("omega is not closed")
        self.chart: Chart = omega.chart
        self.omega = omega
        self.n = n
        self.name = name

    @cached_property
    def constant_coefficient(self) -> bool:
        return all(p.is_constant() for _, p in self.omega.items())

    @cached_property
    def _contraction_rows(self) -> tuple[list[tuple[int, ...]], list[list[Fraction]]]:
        # matrix of v -> iota_v omega for constant v: rows are n-index tuples, columns coordinates
        chart = self.chart
        rows_idx = list(combinations(range(chart.dim), self.n))
        cols = []
        for j in range(chart.dim):
            e = PolyVectorField(chart, [int(i == j) for i in range(chart.dim)])
            cols.append(contract(e, self.omega))
        rows = [[cols[j].coefficient(I).constant_term() for j in range(chart.dim)] for I in rows_idx]
        return rows_idx, rows

    @cached_property
    def _solver(self) -> LinearSolver:
        _, rows = self._contraction_rows
        return LinearSolver(rows, self.chart.dim)

    @cached_property
    def nondegenerate(self) -> bool | None:
        """Certified only for constant coefficients; ``None`` otherwise."""
        if not self.constant_coefficient:
            return None
        _, rows = self._contraction_rows
        return rank(rows, self.chart.dim) == self.chart.dim

    def curvature_form(self) -> DifferentialForm:
        return -self.omega

    def zero(self, degree: int) -> Observable:
        return Observable(self, degree, DifferentialForm.zero(self.chart, self.n - 1 + degree), None)

    def observable(self, form: DifferentialForm | Polynomial, degree: int | None = None, ham_vf=None) -> Observable:
        if isinstance(form, Polynomial):
            form = DifferentialForm.function(self.chart, form)
        if degree is None:
            degree = form.degree - (self.n - 1)
        return Observable(self, degree, form, ham_vf)

    def __repr__(self) -> str:
        return f"PrePlectic(n={self.n}, omega={self.omega.to_str()})"


def is_hamiltonian(p: PrePlectic, alpha: DifferentialForm, v: PolyVectorField) -> bool:
    """Whether d(alpha) = -iota_v omega holds exactly."""
    return (exterior_derivative(alpha) + contract(v, p.omega)).is_zero()


def hamiltonian_vf(p: PrePlectic, alpha: DifferentialForm) -> PolyVectorField:
    """Solve d(alpha) = -iota_v omega for v, one monomial at a time."""
    if not p.constant_coefficient:
        raise UnsupportedOmega("automatic solving needs a constant-coefficient omega; supply the vector field")
    if alpha.chart != p.chart:
        raise ChartMismatch("form is not on the chart of omega")
    if alpha and alpha.degree != p.n - 1:
        raise DegreeError(f"Hamiltonian forms have degree {p.n - 1}, got {alpha.degree}")
    chart = p.chart
    da = exterior_derivative(alpha)
    if da.is_zero():
        return PolyVectorField.zero(chart)
    rows_idx, _ = p._contraction_rows
    monos = set()
    for _, c in da.items():
        monos.update(c.terms)
    comps: list[dict] = [{} for _ in range(chart.dim)]
    for mono in monos:
        b = [-da.coefficient(I).terms.get(mono, Fraction(0)) for I in rows_idx]
        x = p._solver.solve(b)
        if x is None:
            raise NotHamiltonian(f"{alpha.to_str()} has no Hamiltonian vector field")
        for j, v in enumerate(x):
            if v:
                comps[j][mono] = v
    vf = PolyVectorField(chart, [Polynomial(chart.dim, c) for c in comps])
    assert is_hamiltonian(p, alpha, vf)
    return vf


class Observable:
    """An element of L-infinity degree ``degree`` in the observables of ``parent``.

    The form has degree n - 1 + degree.  Degree-0 elements carry a
    Hamiltonian vector field, solved for automatically when omega has
    constant coefficients.  Elements of degree outside 1-n..0 must be zero.
    """

    __slots__ = ("parent", "degree", "form", "ham_vf")

    def __init__(self, parent: PrePlectic, degree: int, form: DifferentialForm, ham_vf: PolyVectorField | None = None):
        if form.chart != parent.chart:
            raise ChartMismatch("observable form is not on the chart of omega")
        if form and form.degree != parent.n - 1 + degree:
            raise DegreeError(f"degree-{degree} observable needs a {parent.n - 1 + degree}-form, got {form.degree}")
        if not (1 - parent.n <= degree <= 0) and form:
            raise DegreeError(f"nonzero observable of degree {degree} outside {1 - parent.n}..0")
        if degree == 0:
            if ham_vf is None:
                if form.is_zero():
                    ham_vf = PolyVectorField.zero(parent.chart)
                elif parent.constant_coefficient:
                    ham_vf = hamiltonian_vf(parent, form)
            elif not is_hamiltonian(parent, form, ham_vf):
                raise NotHamiltonian("supplied vector field does not satisfy d(alpha) = -iota_v omega")
        else:
            ham_vf = None
        self.parent = parent
        self.degree = degree
        self.form = form
        self.ham_vf = ham_vf

    def is_zero(self) -> bool:
        return self.form.is_zero()

    def vf(self) -> PolyVectorField:
        if self.ham_vf is None:
            raise MissingVectorField("degree-0 observable without a Hamiltonian vector field")
        return self.ham_vf

    def __add__(self, other: Observable) -> Observable:
        if other.parent is not self.parent or other.degree != self.degree:
            raise DegreeError("adding observables of different degree or parent")
        vf = None
        if self.degree == 0 and self.ham_vf is not None and other.ham_vf is not None:
            vf = self.ham_vf + other.ham_vf
        return Observable(self.parent, self.degree, self.form + other.form, vf)

    def scale(self, c) -> Observable:
        vf = self.ham_vf.scale(c) if self.ham_vf is not None else None
        return Observable(self.parent, self.degree, self.form.scale(c), vf)

    def __neg__(self) -> Observable:
        return self.scale(-1)

    def __repr__(self) -> str:
        return f"Observable(deg={self.degree}, {self.form.to_str()})"


def _check_args(p: PrePlectic, args: Sequence[Observable]) -> None:
    for a in args:
        if a.parent is not p and a.parent.omega != p.omega:
            raise ChartMismatch("observable belongs to a different pre-plectic structure")


def l_bracket(p: PrePlectic, args: Sequence[Observable]) -> Observable:
    """The k-ary bracket l_k, with k = len(args)."""
    _check_args(p, args)
    k = len(args)
    if k == 0:
        raise ValueError("l_k needs k >= 1")
    out_deg = sum(a.degree for a in args) + 2 - k
    if k == 1:
        a = args[0]
        if a.degree <= -1:
            da = exterior_derivative(a.form)
            vf = PolyVectorField.zero(p.chart) if out_deg == 0 else None
            return Observable(p, out_deg, da, vf)
        return p.zero(out_deg)
    if any(a.degree != 0 for a in args) or k > p.n + 1:
        return p.zero(out_deg)
    vs = [a.vf() for a in args]
    form = contract_multi(vs, p.omega).scale(varsigma(k))
    vf = None
    if k == 2:
        # the Hamiltonian vector field of l_2(a, b) is the commutator [v_a, v_b]
        vf = vs[0].bracket(vs[1])
    return Observable(p, out_deg, form, vf)


def square_bracket(p: PrePlectic, args: Sequence[Observable]) -> DifferentialForm:
    """[ ]_0 = -omega; otherwise varsigma(k) iota(v_1 ^ ... ^ v_k) omega on degree-0 inputs."""
    _check_args(p, args)
    k = len(args)
    if k == 0:
        return -p.omega
    if any(a.degree != 0 for a in args):
        s = sum(a.degree for a in args) + 2 - k
        return DifferentialForm.zero(p.chart, p.n - 1 + s)
    vs = [a.vf() for a in args]
    return contract_multi(vs, p.omega).scale(varsigma(k))


def jacobi_defect(p: PrePlectic, args: Sequence[Observable]) -> DifferentialForm:
    """The generalized Jacobi sum over unshuffles; identically zero in an L-infinity algebra."""
    m = len(args)
    degs = [a.degree for a in args]
    total = DifferentialForm.zero(p.chart, 0)
    inner_cache: dict[tuple[int, ...], Observable] = {}
    for i in range(1, m + 1):
        j = m + 1 - i
        outer = -1 if (i * (j - 1)) & 1 else 1
        for s in unshuffles(i, m - i):
            sign = outer * signed_koszul(s, degs)
            key = s[:i]
            inner = inner_cache.get(key)
            if inner is None:
                inner = l_bracket(p, [args[t] for t in key])
                inner_cache[key] = inner
            if inner.is_zero():
                continue
            outer_val = l_bracket(p, [inner] + [args[t] for t in s[i:]])
            if outer_val.form:
                total = total + outer_val.form.scale(sign)
    return total
