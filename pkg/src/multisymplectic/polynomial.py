"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


class Polynomial:
    """A polynomial in ``nvars`` variables, stored as ``{exponents: coefficient}``.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term dictionaries are equal.
    """

    __slots__ = ("nvars", "_terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], object] | None = None):
        clean: dict[Monomial, Fraction] = {}
        if terms:
            for mono, c in terms.items():
                mono = tuple(int(e) for e in mono)
                if len(mono) != nvars:
                    raise ValueError(f"monomial {mono} does not have {nvars} exponents")
                if any(e < 0 for e in mono):
                    raise ValueError(f"negative exponent in {mono}")
                c = Fraction(c)
                if c:
                    clean[mono] = clean.get(mono, Fraction(0)) + c
                    if not clean[mono]:
                        del clean[mono]
        self.nvars = nvars
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Monomial, Fraction]) -> Polynomial:
        p = cls.__new__(cls)
        p.nvars = nvars
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> Polynomial:
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: Scalar) -> Polynomial:
        c = Fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> Polynomial:
        mono = [0] * nvars
        mono[i] = 1
        return cls._raw(nvars, {tuple(mono): Fraction(1)})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def depends_on(self, i: int) -> bool:
        return any(m[i] for m in self._terms)

    def _check(self, other: Polynomial) -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"polynomials in {self.nvars} and {other.nvars} variables")

    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v += c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial._raw(self.nvars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def scale(self, c: Scalar) -> Polynomial:
        c = Fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        if c == 1:
            return self
        return Polynomial._raw(self.nvars, {m: v * c for m, v in self._terms.items()})

    def __mul__(self, other) -> Polynomial:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Polynomial._raw(self.nvars, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def diff(self, i: int) -> Polynomial:
        out: dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                mm = m[:i] + (e - 1,) + m[i + 1:]
                out[mm] = c * e
        return Polynomial._raw(self.nvars, out)

    def compose(self, images: Sequence[Polynomial | None], nvars: int) -> Polynomial:
        """Substitute variable ``j`` by ``images[j]`` (a polynomial in ``nvars``).

        ``images[j]`` may be ``None`` only for variables that do not occur.
        """
        result = Polynomial.zero(nvars)
        powers: dict[tuple[int, int], Polynomial] = {}
        one = Polynomial.constant(nvars, 1)
        for m, c in self._terms.items():
            term = one.scale(c)
            for j, e in enumerate(m):
                if not e:
                    continue
                if images[j] is None:
                    raise ValueError(f"no image given for variable {j}")
                key = (j, e)
                if key not in powers:
                    powers[key] = images[j] ** e
                term = term * powers[key]
            result = result + term
        return result

    def embed(self, nvars: int, offset: int) -> Polynomial:
        """Reinterpret as a polynomial in ``nvars`` variables, shifting variables by ``offset``."""
        if offset + self.nvars > nvars:
            raise ValueError("embedding does not fit")
        pre = (0,) * offset
        post = (0,) * (nvars - offset - self.nvars)
        return Polynomial._raw(nvars, {pre + m + post: c for m, c in self._terms.items()})

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        total = Fraction(0)
        for m, c in self._terms.items():
            v = c
            for x, e in zip(point, m):
                if e:
                    v *= Fraction(x) ** e
            total += v
        return total

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        names = names or [f"x{i}" for i in range(self.nvars)]
        parts = []
        for m in sorted(self._terms, reverse=True):
            c = self._terms[m]
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()})"


def from_terms(nvars: int, pairs: Iterable[tuple[Scalar, Sequence[int]]]) -> Polynomial:
    """Build a polynomial from ``(coefficient, exponents)`` pairs."""
    acc: dict[Monomial, Fraction] = {}
    for c, mono in pairs:
        mono = tuple(mono)
        acc[mono] = acc.get(mono, Fraction(0)) + Fraction(c)
    return Polynomial(nvars, acc)
