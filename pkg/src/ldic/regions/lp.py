"""Exact rational linear programming: maximize c.x subject to A x <= b, x >= 0.

Dense tableau simplex with Bland's rule, so it cannot cycle. Each tableau
row is kept as Python integers over a positive row denominator; pivots
cross-multiply and divide out the row gcd, which is far cheaper than
``Fraction`` arithmetic and just as exact. A phase-one problem with
artificial variables runs first when some right-hand side is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None
    # for unbounded problems: x + t*ray stays feasible for t >= 0 and c.ray > 0
    ray: tuple[Fraction, ...] | None = None


def _reduce(nums: list[int], den: int) -> tuple[list[int], int]:
    g = math.gcd(den, *nums)
    if g > 1:
        return [v // g for v in nums], den // g
    return nums, den


def _int_row(values: Sequence[Fraction]) -> tuple[list[int], int]:
    den = math.lcm(*(v.denominator for v in values)) if values else 1
    return [v.numerator * (den // v.denominator) for v in values], den


class _Tableau:
    """Rows are (numerators, denominator); the last column is the right-hand side."""

    def __init__(self, rows, basis, obj):
        self.rows = rows
        self.basis = basis
        self.obj = obj  # reduced costs, same representation

    @staticmethod
    def _eliminate(row, prow, c):
        nums, den = row
        f = nums[c]
        if not f:
            return row
        pn, pd = prow  # pivot row normalised so that pn[c] == pd
        return _reduce([a * pd - f * b for a, b in zip(nums, pn)], den * pd)

    def pivot(self, r: int, c: int) -> None:
        nums, _ = self.rows[r]
        a = nums[c]
        # dividing the row by (a/den) leaves numerators unchanged with denominator a
        prow = _reduce(list(nums), a) if a > 0 else _reduce([-v for v in nums], -a)
        self.rows[r] = prow
        for i in range(len(self.rows)):
            if i != r:
                self.rows[i] = self._eliminate(self.rows[i], prow, c)
        self.obj = self._eliminate(self.obj, prow, c)
        self.basis[r] = c

    def run(self, allowed: int) -> tuple[str, int | None]:
        while True:
            on = self.obj[0]
            enter = next((j for j in range(allowed) if on[j] < 0), None)
            if enter is None:
                return OPTIMAL, None
            best = None
            for r, (nums, _) in enumerate(self.rows):
                a = nums[enter]
                if a > 0:
                    rhs = nums[-1]
                    if best is None:
                        best = (rhs, a, self.basis[r], r)
                        continue
                    # compare rhs/a with best ratio; ties go to the smaller basis index
                    lhs_cmp = rhs * best[1] - best[0] * a
                    if lhs_cmp < 0 or (lhs_cmp == 0 and self.basis[r] < best[2]):
                        best = (rhs, a, self.basis[r], r)
            if best is None:
                return UNBOUNDED, enter
            self.pivot(best[3], enter)

    def value(self, r: int, col: int = -1) -> Fraction:
        nums, den = self.rows[r]
        return Fraction(nums[col], den)

    def solution(self, n: int) -> list[Fraction]:
        x = [Fraction(0)] * n
        for r, j in enumerate(self.basis):
            if j < n:
                x[j] = self.value(r)
        return x

    def reduce_objective(self) -> None:
        for r, j in enumerate(self.basis):
            self.obj = self._eliminate(self.obj, self.rows[r], j)


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    n = len(c)
    m = len(A)
    b = [Fraction(v) for v in b]
    negative = [i for i in range(m) if b[i] < 0]
    nart = len(negative)
    width = n + m + nart
    rows, basis = [], []
    k = n + m
    for i in range(m):
        vals = [Fraction(v) for v in A[i]] + [Fraction(0)] * (m + nart) + [b[i]]
        vals[n + i] = Fraction(1)
        if b[i] < 0:
            vals = [-v for v in vals]
            vals[k] = Fraction(1)
            basis.append(k)
            k += 1
        else:
            basis.append(n + i)
        rows.append(_int_row(vals))

    if nart:
        # phase one: maximize -(sum of artificials)
        obj = [0] * (width + 1)
        for j in range(n + m, width):
            obj[j] = 1
        tab = _Tableau(rows, basis, (obj, 1))
        tab.reduce_objective()
        tab.run(width)
        if tab.obj[0][-1] < 0:
            return LPResult(INFEASIBLE)
        keep = []
        for r, j in enumerate(tab.basis):
            if j >= n + m:
                col = next((q for q in range(n + m) if tab.rows[r][0][q] != 0), None)
                if col is None:
                    continue  # redundant row
                tab.pivot(r, col)
            keep.append(r)
        rows = [(tab.rows[r][0][: n + m] + [tab.rows[r][0][-1]], tab.rows[r][1]) for r in keep]
        basis = [tab.basis[r] for r in keep]
        width = n + m

    cvals = [-Fraction(v) for v in c] + [Fraction(0)] * (width - n + 1)
    tab = _Tableau(rows, basis, _int_row(cvals))
    tab.reduce_objective()
    status, enter = tab.run(width)
    x = tab.solution(n)
    if status == UNBOUNDED:
        ray = [Fraction(0)] * n
        if enter < n:
            ray[enter] = Fraction(1)
        for r, j in enumerate(tab.basis):
            if j < n:
                ray[j] = -tab.value(r, enter)
        return LPResult(UNBOUNDED, None, tuple(x), tuple(ray))
    on, od = tab.obj
    return LPResult(OPTIMAL, Fraction(on[-1], od), tuple(x))


def feasible_point(A: Sequence[Sequence], b: Sequence, n: int) -> tuple[Fraction, ...] | None:
    if all(Fraction(v) >= 0 for v in b):
        return tuple(Fraction(0) for _ in range(n))
    res = maximize([0] * n, A, b)
    return None if res.status == INFEASIBLE else res.x
