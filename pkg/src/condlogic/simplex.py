"""Exact rational simplex for small linear programs in equality form.

Solves ``max c.x  s.t.  A x = b, x >= 0`` with :class:`fractions.Fraction`
arithmetic, two phases and Bland's rule (smallest index enters and leaves),
so results are exact and deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    basis: tuple[int, ...] = ()

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        piv = row[col]
        if piv != 1:
            inv = 1 / piv
            row[:] = [v * inv for v in row]
            self.rhs[r] *= inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[col]
            if f:
                other[:] = [a - f * b if b else a for a, b in zip(other, row)]
                self.rhs[i] -= f * self.rhs[r]
        self.basis[r] = col

    def reduced_costs(self, cost: Sequence[Fraction]) -> list[Fraction]:
        # d_j = c_j - c_B . column_j, for maximisation entering needs d_j > 0
        d = list(cost)
        for r, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb:
                for j, a in enumerate(self.rows[r]):
                    if a:
                        d[j] -= cb * a
        return d

    def optimise(self, cost: Sequence[Fraction], allowed: int) -> str:
        """Maximise over columns ``< allowed`` (others never enter)."""
        while True:
            d = self.reduced_costs(cost)
            entering = next((j for j in range(allowed) if d[j] > 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            for r, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = self.rhs[r] / a
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)


def solve(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
          c: Sequence[Fraction] | None = None, maximize: bool = True) -> LPResult:
    """Optimise ``c.x`` over ``{x >= 0 : A x = b}``; ``c=None`` tests feasibility."""
    m = len(A)
    n = len(A[0]) if m else (len(c) if c is not None else 0)
    if c is None:
        c = [Fraction(0)] * n
    cost = [Fraction(v) if maximize else -Fraction(v) for v in c]
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        bi = Fraction(b[i])
        if bi < 0:
            row = [-v for v in row]
            bi = -bi
        rows.append(row + [Fraction(int(k == i)) for k in range(m)])
        rhs.append(bi)
    tab = _Tableau(rows, rhs, [n + i for i in range(m)])

    # phase 1: minimise the sum of artificials
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    tab.optimise(phase1, n + m)
    if any(tab.rhs[r] != 0 for r, bj in enumerate(tab.basis) if bj >= n):
        return LPResult(INFEASIBLE)

    # drive degenerate artificials out of the basis; drop redundant rows
    r = 0
    while r < len(tab.rows):
        if tab.basis[r] >= n:
            col = next((j for j in range(n) if tab.rows[r][j] != 0), None)
            if col is None:
                del tab.rows[r], tab.rhs[r], tab.basis[r]
                continue
            tab.pivot(r, col)
        r += 1
    tab.rows = [row[:n] for row in tab.rows]

    status = tab.optimise(cost, n)
    x = [Fraction(0)] * n
    for r, bj in enumerate(tab.basis):
        x[bj] = tab.rhs[r]
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, tuple(x), None, tuple(tab.basis))
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, tuple(x), value, tuple(tab.basis))


def feasible_point(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> tuple[Fraction, ...] | None:
    res = solve(A, b)
    return res.x if res.status == OPTIMAL else None
