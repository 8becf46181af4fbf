"""Exact exterior calculus on polynomial coordinate charts.

Forms are stored in normal form: a map from strictly increasing coordinate
index tuples to nonzero polynomials.  All objects are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import ChartMismatch, IllFormedMap
from .polynomial import Polynomial, Scalar


@dataclass(frozen=True)
class Chart:
    """Ordered coordinates; ``periodic[i]`` marks circle-valued coordinates."""

    coords: tuple[str, ...]
    periodic: tuple[bool, ...] = ()

    def __post_init__(self):
        coords = tuple(self.coords)
        periodic = tuple(bool(p) for p in self.periodic) or (False,) * len(coords)
        if len(periodic) != len(coords):
            raise ValueError("periodic flags must match coordinates")
        if len(set(coords)) != len(coords):
            raise ValueError(f"duplicate coordinate names in {coords}")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "periodic", periodic)

    @property
    def dim(self) -> int:
        return len(self.coords)

    def index(self, name: str) -> int:
        return self.coords.index(name)

    def coordinate(self, name_or_index) -> Polynomial:
        """The coordinate function itself (not allowed for periodic coordinates)."""
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        if self.periodic[i]:
            raise ValueError(f"{self.coords[i]} is periodic and not a global function")
        return Polynomial.variable(self.dim, i)

    def poly(self, c: Scalar = 0) -> Polynomial:
        return Polynomial.constant(self.dim, c)

    def check_poly(self, p: Polynomial) -> None:
        if p.nvars != self.dim:
            raise ChartMismatch(f"polynomial in {p.nvars} variables on a {self.dim}-dim chart")
        for i, per in enumerate(self.periodic):
            if per and p.depends_on(i):
                raise ValueError(f"coefficient depends on periodic coordinate {self.coords[i]}")


def euclidean(*names: str) -> Chart:
    return Chart(tuple(names))


@dataclass(frozen=True)
class ProductChart:
    """The chart of a product of charts, with renamed coordinates on collision."""

    chart: Chart
    factors: tuple[Chart, ...]
    offsets: tuple[int, ...]

    @classmethod
    def of(cls, *factors: Chart) -> ProductChart:
        names: list[str] = []
        periodic: list[bool] = []
        offsets = []
        for f in factors:
            offsets.append(len(names))
            for n, p in zip(f.coords, f.periodic):
                new = n
                while new in names:
                    new += "'"
                names.append(new)
                periodic.append(p)
        return cls(Chart(tuple(names), tuple(periodic)), tuple(factors), tuple(offsets))

    def lift(self, obj, factor: int):
        """Promote a form or vector field living on factor ``factor``."""
        base = self.factors[factor]
        if obj.chart != base:
            raise ChartMismatch("object does not live on the requested factor")
        off = self.offsets[factor]
        if isinstance(obj, DifferentialForm):
            return DifferentialForm._raw(
                self.chart,
                obj.degree,
                {tuple(i + off for i in idx): p.embed(self.chart.dim, off) for idx, p in obj.items()},
            )
        if isinstance(obj, PolyVectorField):
            comps = [Polynomial.zero(self.chart.dim)] * self.chart.dim
            for i, c in enumerate(obj.components):
                comps[off + i] = c.embed(self.chart.dim, off)
            return PolyVectorField(self.chart, comps)
        if isinstance(obj, Polynomial):
            return obj.embed(self.chart.dim, off)
        raise TypeError(f"cannot lift {type(obj).__name__}")

    def projection(self, factor: int) -> CoordinateMap:
        base = self.factors[factor]
        off = self.offsets[factor]
        images = [Polynomial.variable(self.chart.dim, off + i) for i in range(base.dim)]
        return CoordinateMap(self.chart, base, images)


def merge_sign(a: Sequence[int], b: Sequence[int]) -> int:
    """Sign of sorting the concatenation of two increasing tuples; 0 if they overlap."""
    # inversions: for each element of b, the elements of a that are larger
    na = len(a)
    i = 0
    inversions = 0
    for x in b:
        while i < na and a[i] < x:
            i += 1
        if i < na and a[i] == x:
            return 0
        inversions += na - i
    return -1 if inversions & 1 else 1


class DifferentialForm:
    """A homogeneous polynomial-coefficient differential form."""

    __slots__ = ("chart", "degree", "_terms", "_hash")

    def __init__(self, chart: Chart, degree: int, terms: Mapping[Sequence[int], Polynomial] | None = None):
        acc: dict[tuple[int, ...], Polynomial] = {}
        for idx, p in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index tuple {idx} in a {degree}-form")
            if any(i < 0 or i >= chart.dim for i in idx):
                raise ValueError(f"index out of range in {idx}")
            if len(set(idx)) != len(idx):
                continue
            order = sorted(range(degree), key=lambda r: idx[r])
            sign = _perm_parity(order)
            key = tuple(idx[r] for r in order)
            if not isinstance(p, Polynomial):
                p = Polynomial.constant(chart.dim, p)
            chart.check_poly(p)
            val = acc.get(key, Polynomial.zero(chart.dim)) + (p if sign > 0 else -p)
            if val:
                acc[key] = val
            else:
                acc.pop(key, None)
        self.chart = chart
        self.degree = degree
        self._terms = acc
        self._hash = None

    @classmethod
    def _raw(cls, chart: Chart, degree: int, terms: dict) -> DifferentialForm:
        f = cls.__new__(cls)
        f.chart = chart
        f.degree = degree
        f._terms = terms
        f._hash = None
        return f

    # constructors
    @classmethod
    def zero(cls, chart: Chart, degree: int) -> DifferentialForm:
        return cls._raw(chart, degree, {})

    @classmethod
    def function(cls, chart: Chart, p: Polynomial | Scalar) -> DifferentialForm:
        if not isinstance(p, Polynomial):
            p = Polynomial.constant(chart.dim, p)
        chart.check_poly(p)
        return cls._raw(chart, 0, {(): p} if p else {})

    @classmethod
    def basis(cls, chart: Chart, *names, coeff: Polynomial | Scalar = 1) -> DifferentialForm:
        """``coeff * d(names[0]) ^ d(names[1]) ^ ...``; names may be strings or indices."""
        idx = tuple(n if isinstance(n, int) else chart.index(n) for n in names)
        if not isinstance(coeff, Polynomial):
            coeff = Polynomial.constant(chart.dim, coeff)
        return cls(chart, len(idx), {idx: coeff})

    # access
    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> dict[tuple[int, ...], Polynomial]:
        return dict(self._terms)

    def coefficient(self, idx: Sequence[int]) -> Polynomial:
        return self._terms.get(tuple(idx), Polynomial.zero(self.chart.dim))

    def as_function(self) -> Polynomial:
        if self.degree != 0:
            raise ValueError("not a 0-form")
        return self._terms.get((), Polynomial.zero(self.chart.dim))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    # arithmetic
    def _same(self, other: DifferentialForm) -> None:
        if not isinstance(other, DifferentialForm):
            raise TypeError(f"expected a form, got {type(other).__name__}")
        if other.chart != self.chart:
            raise ChartMismatch("forms live on different charts")

    def __add__(self, other: DifferentialForm) -> DifferentialForm:
        self._same(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        if other.degree != self.degree:
            raise ValueError(f"adding a {self.degree}-form and a {other.degree}-form")
        out = dict(self._terms)
        for k, p in other._terms.items():
            v = out.get(k)
            v = p if v is None else v + p
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return DifferentialForm._raw(self.chart, self.degree, out)

    def __neg__(self) -> DifferentialForm:
        return DifferentialForm._raw(self.chart, self.degree, {k: -p for k, p in self._terms.items()})

    def __sub__(self, other: DifferentialForm) -> DifferentialForm:
        return self + (-other)

    def scale(self, c: Scalar | Polynomial) -> DifferentialForm:
        if isinstance(c, Polynomial):
            self.chart.check_poly(c)
            out = {k: p * c for k, p in self._terms.items()}
            return DifferentialForm._raw(self.chart, self.degree, {k: p for k, p in out.items() if p})
        c = Fraction(c)
        if not c:
            return DifferentialForm.zero(self.chart, self.degree)
        if c == 1:
            return self
        return DifferentialForm._raw(self.chart, self.degree, {k: p.scale(c) for k, p in self._terms.items()})

    def __mul__(self, c):
        if isinstance(c, DifferentialForm):
            return wedge(self, c)
        return self.scale(c)

    def __rmul__(self, c):
        return self.scale(c)

    def __xor__(self, other: DifferentialForm) -> DifferentialForm:
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if self.chart != other.chart:
            return False
        if not self._terms and not other._terms:
            return True
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart, self.degree if self._terms else None, frozenset(self._terms.items())))
        return self._hash

    def to_str(self) -> str:
        if not self._terms:
            return "0"
        names = self.chart.coords
        parts = []
        for idx in sorted(self._terms):
            p = self._terms[idx]
            basis = "^".join("d" + names[i] for i in idx)
            coeff = p.to_str(names)
            if not basis:
                parts.append(coeff)
            elif coeff == "1":
                parts.append(basis)
            elif coeff == "-1":
                parts.append("-" + basis)
            elif len(p.terms) > 1:
                parts.append(f"({coeff})*{basis}")
            else:
                parts.append(f"{coeff}*{basis}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Form[{self.degree}]({self.to_str()})"


def _perm_parity(order: Sequence[int]) -> int:
    seen = [False] * len(order)
    sign = 1
    for s in range(len(order)):
        if seen[s]:
            continue
        j = s
        length = 0
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class PolyVectorField:
    """A vector field with polynomial components."""

    __slots__ = ("chart", "components", "_hash")

    def __init__(self, chart: Chart, components: Sequence[Polynomial | Scalar]):
        if len(components) != chart.dim:
            raise ValueError(f"{len(components)} components on a {chart.dim}-dim chart")
        comps = []
        for c in components:
            if not isinstance(c, Polynomial):
                c = Polynomial.constant(chart.dim, c)
            chart.check_poly(c)
            comps.append(c)
        self.chart = chart
        self.components = tuple(comps)
        self._hash = None

    @classmethod
    def zero(cls, chart: Chart) -> PolyVectorField:
        return cls(chart, [0] * chart.dim)

    @classmethod
    def from_dict(cls, chart: Chart, comps: Mapping) -> PolyVectorField:
        out: list[Polynomial | Scalar] = [0] * chart.dim
        for k, v in comps.items():
            out[k if isinstance(k, int) else chart.index(k)] = v
        return cls(chart, out)

    def is_zero(self) -> bool:
        return not any(self.components)

    def __add__(self, other: PolyVectorField) -> PolyVectorField:
        if other.chart != self.chart:
            raise ChartMismatch("vector fields on different charts")
        return PolyVectorField(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __neg__(self) -> PolyVectorField:
        return PolyVectorField(self.chart, [-a for a in self.components])

    def __sub__(self, other: PolyVectorField) -> PolyVectorField:
        return self + (-other)

    def scale(self, c: Scalar) -> PolyVectorField:
        return PolyVectorField(self.chart, [a.scale(c) for a in self.components])

    def apply(self, p: Polynomial) -> Polynomial:
        """Directional derivative v(p)."""
        out = Polynomial.zero(self.chart.dim)
        for i, c in enumerate(self.components):
            if c:
                out = out + c * p.diff(i)
        return out

    def bracket(self, other: PolyVectorField) -> PolyVectorField:
        """The vector-field commutator [X, Y] = XY - YX."""
        if other.chart != self.chart:
            raise ChartMismatch("vector fields on different charts")
        return PolyVectorField(
            self.chart,
            [self.apply(b) - other.apply(a) for a, b in zip(self.components, other.components)],
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.chart == other.chart and self.components == other.components

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.chart, self.components))
        return self._hash

    def __repr__(self) -> str:
        parts = [f"({c.to_str(self.chart.coords)})*d/d{n}" for n, c in zip(self.chart.coords, self.components) if c]
        return "VF(" + (" + ".join(parts) or "0") + ")"


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    if a.chart != b.chart:
        raise ChartMismatch("wedge of forms on different charts")
    out: dict[tuple[int, ...], Polynomial] = {}
    for I, p in a.items():
        for J, q in b.items():
            s = merge_sign(I, J)
            if not s:
                continue
            key = tuple(sorted(I + J))
            pq = p * q
            if s < 0:
                pq = -pq
            v = out.get(key)
            out[key] = pq if v is None else v + pq
    return DifferentialForm._raw(a.chart, a.degree + b.degree, {k: v for k, v in out.items() if v})


def wedge_all(forms: Iterable[DifferentialForm], chart: Chart | None = None) -> DifferentialForm:
    result = None
    for f in forms:
        result = f if result is None else wedge(result, f)
    if result is None:
        if chart is None:
            raise ValueError("empty wedge needs a chart")
        return DifferentialForm.function(chart, 1)
    return result


def exterior_derivative(a: DifferentialForm) -> DifferentialForm:
    chart = a.chart
    out: dict[tuple[int, ...], Polynomial] = {}
    for I, p in a.items():
        for j in range(chart.dim):
            if chart.periodic[j] or j in I:
                continue
            dp = p.diff(j)
            if not dp:
                continue
            pos = sum(1 for i in I if i < j)
            key = I[:pos] + (j,) + I[pos:]
            if pos & 1:
                dp = -dp
            v = out.get(key)
            out[key] = dp if v is None else v + dp
    return DifferentialForm._raw(chart, a.degree + 1, {k: v for k, v in out.items() if v})


d = exterior_derivative


def contract(v: PolyVectorField, a: DifferentialForm) -> DifferentialForm:
    """Interior product: the vector is inserted into the first slot."""
    if v.chart != a.chart:
        raise ChartMismatch("contraction across charts")
    out: dict[tuple[int, ...], Polynomial] = {}
    for I, p in a.items():
        for r, i in enumerate(I):
            c = v.components[i]
            if not c:
                continue
            key = I[:r] + I[r + 1:]
            term = p * c
            if r & 1:
                term = -term
            w = out.get(key)
            out[key] = term if w is None else w + term
    return DifferentialForm._raw(a.chart, a.degree - 1, {k: w for k, w in out.items() if w})


def contract_multi(vs: Sequence[PolyVectorField], a: DifferentialForm) -> DifferentialForm:
    """iota(v_1 ^ ... ^ v_k) a, computed as iota_{v_k} ... iota_{v_1} a."""
    if not vs:
        raise ValueError("contract_multi needs at least one vector field")
    out = a
    for v in vs:
        out = contract(v, out)
        if out.is_zero():
            # keep the degree bookkeeping honest
            return DifferentialForm.zero(a.chart, a.degree - len(vs))
    return out


def lie_derivative(v: PolyVectorField, a: DifferentialForm) -> DifferentialForm:
    first = exterior_derivative(contract(v, a)) if a.degree > 0 else DifferentialForm.zero(a.chart, a.degree)
    return first + contract(v, exterior_derivative(a))


@dataclass(frozen=True)
class CoordinateMap:
    """A polynomial map between charts, given by the image of each target coordinate.

    A periodic target coordinate must be sent to a periodic source coordinate
    plus a constant, so that the pullback of its differential is defined.
    """

    source: Chart
    target: Chart
    images: tuple[Polynomial, ...] = field(default=())

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.target.dim:
            raise IllFormedMap("one image per target coordinate required")
        for t, img in enumerate(images):
            if img.nvars != self.source.dim:
                raise IllFormedMap("images must be polynomials in the source coordinates")
            if self.target.periodic[t]:
                nonconst = [m for m in img.terms if any(m)]
                if len(nonconst) != 1 or sum(nonconst[0]) != 1 or img.terms[nonconst[0]] != 1:
                    raise IllFormedMap(f"periodic coordinate {self.target.coords[t]} needs image theta + const")
                s = nonconst[0].index(1)
                if not self.source.periodic[s]:
                    raise IllFormedMap(f"periodic coordinate {self.target.coords[t]} mapped to a non-periodic one")
            else:
                for s, per in enumerate(self.source.periodic):
                    if per and img.depends_on(s):
                        raise IllFormedMap(f"image of {self.target.coords[t]} depends on a periodic coordinate")

    def is_affine(self) -> bool:
        return all(img.total_degree() <= 1 for img in self.images)

    def jacobian(self) -> list[list[Polynomial]]:
        """``J[t][s] = d(image_t)/d(source_s)``."""
        return [[img.diff(s) for s in range(self.source.dim)] for img in self.images]

    def pull_function(self, p: Polynomial) -> Polynomial:
        imgs = [None if per else img for img, per in zip(self.images, self.target.periodic)]
        return p.compose(imgs, self.source.dim)

    def pushforward_tangent(self, v: PolyVectorField) -> list[Polynomial]:
        """Components of d(map)(v) along the target coordinates (as functions on the source)."""
        return [v.apply(img) for img in self.images]


def pullback(m: CoordinateMap, a: DifferentialForm) -> DifferentialForm:
    if a.chart != m.target:
        raise ChartMismatch("form does not live on the map's target chart")
    src = m.source
    diffs: dict[int, DifferentialForm] = {}

    def dimg(t: int) -> DifferentialForm:
        if t not in diffs:
            img = m.images[t]
            terms = {(s,): img.diff(s) for s in range(src.dim)}
            diffs[t] = DifferentialForm(src, 1, {k: v for k, v in terms.items() if v})
        return diffs[t]

    total = DifferentialForm.zero(src, a.degree)
    for I, p in a.items():
        coeff = m.pull_function(p)
        if not coeff:
            continue
        piece = DifferentialForm.function(src, coeff)
        for t in I:
            piece = wedge(piece, dimg(t))
            if piece.is_zero():
                break
        if piece:
            total = total + piece
    return total
