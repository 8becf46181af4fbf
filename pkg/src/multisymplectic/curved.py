"""The curved L-infinity algebra of a closed form, with curvature -omega.

The graded space agrees with the observables in degrees <= 0 and adds all
n-forms in degree 1 and the line spanned by omega in degree 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import ChartMismatch, DegreeError, MissingVectorField, PreconditionFailed
from .exterior import DifferentialForm, PolyVectorField, contract_multi, exterior_derivative
from .observables import Observable, PrePlectic, l_bracket
from .signs import signed_koszul, unshuffles, varsigma


def _pm(e: int) -> int:
    return -1 if e % 2 else 1


class CurvedElement:
    """A homogeneous element of degree ``degree``.

    Degrees 1-n..1 carry a form of degree n-1+degree; degree 2 carries a
    rational ``c`` standing for c * omega.  Degree-0 elements keep a
    Hamiltonian vector field as observables do.
    """

    __slots__ = ("parent", "degree", "form", "c", "ham_vf")

    def __init__(self, parent: PrePlectic, degree: int, form: DifferentialForm | None = None,
                 c=None, ham_vf: PolyVectorField | None = None):
        n = parent.n
        if not 1 - n <= degree <= 2:
            raise DegreeError(f"curved elements live in degrees {1 - n}..2, got {degree}")
        if degree == 2:
            if form is not None:
                raise DegreeError("the degree-2 part is a multiple of omega; pass c")
            c = Fraction(c or 0)
            form = parent.omega.scale(c)
        else:
            if c is not None:
                raise DegreeError("only degree-2 elements carry a multiple of omega")
            if form is None:
                form = DifferentialForm.zero(parent.chart, n - 1 + degree)
            if form.chart != parent.chart:
                raise ChartMismatch("form is not on the chart of omega")
            if form and form.degree != n - 1 + degree:
                raise DegreeError(f"degree-{degree} element needs a {n - 1 + degree}-form")
            if degree == 0:
                ham_vf = Observable(parent, 0, form, ham_vf).ham_vf
            else:
                ham_vf = None
        self.parent = parent
        self.degree = degree
        self.form = form
        self.c = c
        self.ham_vf = ham_vf

    @classmethod
    def zero(cls, parent: PrePlectic, degree: int) -> CurvedElement:
        if degree == 2:
            return cls(parent, 2, c=0)
        if 1 - parent.n <= degree <= 1:
            return cls(parent, degree)
        return _OutOfRange(parent, degree)

    @classmethod
    def from_observable(cls, obs: Observable) -> CurvedElement:
        return cls(obs.parent, obs.degree, obs.form, ham_vf=obs.ham_vf)

    @classmethod
    def omega_multiple(cls, parent: PrePlectic, c) -> CurvedElement:
        return cls(parent, 2, c=c)

    def to_observable(self) -> Observable:
        if self.degree > 0:
            raise DegreeError("only elements of degree <= 0 are observables")
        return Observable(self.parent, self.degree, self.form, self.ham_vf)

    def vf(self) -> PolyVectorField:
        if self.ham_vf is None:
            raise MissingVectorField("degree-0 element without a Hamiltonian vector field")
        return self.ham_vf

    def is_zero(self) -> bool:
        return self.form.is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other: CurvedElement) -> CurvedElement:
        if other.degree != self.degree:
            raise DegreeError("adding curved elements of different degree")
        if isinstance(other, _OutOfRange):
            return self
        if self.degree == 2:
            return CurvedElement(self.parent, 2, c=self.c + other.c)
        vf = None
        if self.degree == 0 and self.ham_vf is not None and other.ham_vf is not None:
            vf = self.ham_vf + other.ham_vf
        return CurvedElement(self.parent, self.degree, self.form + other.form, ham_vf=vf)

    def scale(self, s) -> CurvedElement:
        if self.degree == 2:
            return CurvedElement(self.parent, 2, c=self.c * s)
        vf = self.ham_vf.scale(s) if self.ham_vf is not None else None
        return CurvedElement(self.parent, self.degree, self.form.scale(s), ham_vf=vf)

    def __neg__(self) -> CurvedElement:
        return self.scale(-1)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CurvedElement):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.degree == other.degree and self.form == other.form

    def __hash__(self) -> int:
        return hash((self.degree, self.form)) if self else 0

    def __repr__(self) -> str:
        if self.degree == 2:
            return f"CurvedElement(deg=2, {self.c} omega)"
        return f"CurvedElement(deg={self.degree}, {self.form.to_str()})"


class _OutOfRange(CurvedElement):
    """The zero element in a degree where the space is trivial."""

    def __init__(self, parent: PrePlectic, degree: int):
        self.parent = parent
        self.degree = degree
        self.form = DifferentialForm.zero(parent.chart, parent.n - 1 + degree)
        self.c = None
        self.ham_vf = None

    def __add__(self, other: CurvedElement) -> CurvedElement:
        if other.degree != self.degree:
            raise DegreeError("adding curved elements of different degree")
        return self

    def scale(self, s) -> CurvedElement:
        return self


def curvature(p: PrePlectic) -> CurvedElement:
    """l_0(1) = -omega."""
    return CurvedElement(p, 2, c=-1)


def _contraction(p: PrePlectic, alphas: Sequence[CurvedElement]) -> DifferentialForm:
    k = len(alphas)
    return contract_multi([a.vf() for a in alphas], p.omega).scale(varsigma(k))


def curved_bracket(p: PrePlectic, args: Sequence[CurvedElement]) -> CurvedElement:
    """The bracket of arity len(args); every case not listed below is zero.

    * all entries of degree 0: varsigma(k) iota(v_1 ... v_k) omega
    * one entry c' (-omega) in slot i, k >= 2 entries of degree 0 otherwise:
      c' (-1)^i d[alpha_1, ..., alpha_k]_k
    """
    for a in args:
        if a.parent is not p and a.parent.omega != p.omega:
            raise ChartMismatch("element of a different curved algebra")
    k = len(args)
    out_deg = sum(a.degree for a in args) + 2 - k
    if k == 0:
        return curvature(p)
    degs = [a.degree for a in args]
    if all(d == 0 for d in degs):
        form = _contraction(p, args)
        if out_deg < 1 - p.n:
            return CurvedElement.zero(p, out_deg)
        vf = None
        if out_deg == 0:
            vf = args[0].vf().bracket(args[1].vf())
        return CurvedElement(p, out_deg, form, ham_vf=vf)
    twos = [i for i, d in enumerate(degs) if d == 2]
    if len(twos) == 1 and all(d in (0, 2) for d in degs) and k - 1 >= 2:
        i = twos[0]
        # c omega = (-c)(-omega)
        coeff = -args[i].c
        alphas = [a for r, a in enumerate(args) if r != i]
        if not coeff:
            return CurvedElement.zero(p, out_deg)
        form = exterior_derivative(_contraction(p, alphas)).scale(coeff * _pm(i))
        if out_deg < 1 - p.n:
            return CurvedElement.zero(p, out_deg)
        # a degree-0 result is exact, so the zero field is Hamiltonian for it
        vf = PolyVectorField.zero(p.chart) if out_deg == 0 else None
        return CurvedElement(p, out_deg, form, ham_vf=vf)
    return CurvedElement.zero(p, out_deg)


def curved_jacobi_defect(p: PrePlectic, args: Sequence[CurvedElement]) -> CurvedElement:
    """The m-th curved Jacobi sum, i = 0 (curvature insertion) included."""
    m = len(args)
    degs = [a.degree for a in args]
    total = CurvedElement.zero(p, sum(degs) + 3 - m)
    inner_cache: dict[tuple[int, ...], CurvedElement] = {}
    for i in range(0, m + 1):
        j = m + 1 - i
        outer = _pm(i * (j - 1))
        for s in unshuffles(i, m - i):
            key = s[:i]
            inner = inner_cache.get(key)
            if inner is None:
                inner = curved_bracket(p, [args[t] for t in key])
                inner_cache[key] = inner
            if inner.is_zero():
                continue
            val = curved_bracket(p, [inner] + [args[t] for t in s[i:]])
            if val:
                total = total + val.scale(outer * signed_koszul(s, degs))
    return total


def D(p: PrePlectic, x: CurvedElement) -> CurvedElement:
    return curved_bracket(p, [x])


def to_observables(x: CurvedElement) -> Observable:
    """The strict morphism in the symplectic case: identity in degree 0, zero elsewhere."""
    p = x.parent
    if x.degree == 0:
        return Observable(p, 0, x.form, x.ham_vf)
    return p.zero(x.degree)


@dataclass
class StrictnessReport:
    checked: int = 0
    failures: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def symplectic_strict_morphism_check(p: PrePlectic, tuples: Sequence[Sequence[CurvedElement]]) -> StrictnessReport:
    """Check f(l^curv_k(x...)) = l_k(f(x)...) for the degree-0 identity map f, n = 1 only.

    The uncurved target has no arity-0 bracket, so k = 0 compares f(-omega) with 0.
    """
    if p.n != 1:
        raise PreconditionFailed("the strict morphism is available only for symplectic forms")
    rep = StrictnessReport()
    rep.checked += 1
    if not to_observables(curvature(p)).is_zero():
        rep.failures.append((0, ()))
    for t in tuples:
        k = len(t)
        if k == 0:
            continue
        rep.checked += 1
        left = to_observables(curved_bracket(p, t))
        right = l_bracket(p, [to_observables(x) for x in t])
        if left.form != right.form:
            rep.failures.append((k, tuple(x.degree for x in t)))
    return rep
