"""Exact rational linear algebra, delegated to sympy's DomainMatrix over QQ."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _dm(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    data = []
    for r in rows:
        data.append([QQ(Fraction(x).numerator, Fraction(x).denominator) for x in r])
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class LinearSolver:
    """Reusable solver for ``A x = b`` with a fixed matrix ``A``.

    Consistent systems return the solution whose free variables are zero,
    a deterministic choice of complement to the kernel.
    """

    def __init__(self, rows: Sequence[Sequence[Fraction]], ncols: int):
        self.nrows = len(rows)
        self.ncols = ncols
        self.pivots: tuple[int, ...] = ()
        self._E: list[list[Fraction]] = []
        if self.nrows:
            # row-reduce [A | I] to record the elimination matrix E with E A = rref(A)
            aug = [list(r) + [Fraction(int(i == j)) for j in range(self.nrows)] for i, r in enumerate(rows)]
            rref, pivots = _dm(aug, ncols + self.nrows).rref()
            self.pivots = tuple(p for p in pivots if p < ncols)
            self._E = [[_frac(x) for x in row[ncols:]] for row in rref.to_list()]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solve(self, b: Sequence[Fraction]) -> list[Fraction] | None:
        x = [Fraction(0)] * self.ncols
        if not self.nrows:
            return x
        eb = [sum((e * v for e, v in zip(row, b) if v and e), Fraction(0)) for row in self._E]
        if any(eb[r] for r in range(self.rank, self.nrows)):
            return None
        for r, p in enumerate(self.pivots):
            x[p] = eb[r]
        return x


def solve(rows: Sequence[Sequence[Fraction]], b: Sequence[Fraction], ncols: int) -> list[Fraction] | None:
    return LinearSolver(rows, ncols).solve(b)


def nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """A basis of the kernel."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows, ncols).nullspace()
    return [[_frac(x) for x in row] for row in ns.to_list()]


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    if not rows:
        return 0
    return _dm(rows, ncols).rank()
