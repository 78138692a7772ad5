"""Fourier-Motzkin elimination over exact rationals.

An independent feasibility and optimisation procedure for small systems of
linear equalities and inequalities. It shares no code with the simplex kernel
and is used as a cross-check oracle for coherence decisions.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = tuple[tuple[Fraction, ...], Fraction]  # sum a_j x_j <= b


class Unbounded(Exception):
    pass


def _normalise(a: Sequence[Fraction], b: Fraction) -> Row | None:
    """Scale so the first nonzero coefficient has absolute value 1.

    Returns ``None`` for a trivially true row; raises ``ValueError`` for a
    trivially false one.
    """
    pivot = next((v for v in a if v != 0), None)
    if pivot is None:
        if b < 0:
            raise ValueError("0 <= negative")
        return None
    s = abs(pivot)
    return tuple(v / s for v in a), b / s


def _dedupe(rows: list[Row]) -> list[Row]:
    # keep the tightest right-hand side per coefficient vector
    best: dict[tuple[Fraction, ...], Fraction] = {}
    for a, b in rows:
        if a not in best or b < best[a]:
            best[a] = b
    return [(a, b) for a, b in best.items()]


def _substitute(eqs: list[Row], ineqs: list[Row], n: int) -> tuple[list[Row], list[int]] | None:
    """Use each equality to eliminate one variable (Gaussian substitution).

    Returns the remaining inequalities over the surviving variables, or
    ``None`` if the equalities are inconsistent.
    """
    eqs = [(list(a), b) for a, b in eqs]
    rows = [(list(a), b) for a, b in ineqs]
    alive = list(range(n))
    while eqs:
        a, b = eqs.pop()
        j = next((k for k in alive if a[k] != 0), None)
        if j is None:
            if b != 0:
                return None
            continue
        piv = a[j]
        # x_j = (b - sum_{k != j} a_k x_k) / piv
        def elim(row: list[Fraction], rhs: Fraction) -> tuple[list[Fraction], Fraction]:
            f = row[j] / piv
            if f == 0:
                return row, rhs
            return [r - f * ak for r, ak in zip(row, a)], rhs - f * b
        eqs = [elim(r, rb) for r, rb in eqs]
        rows = [elim(r, rb) for r, rb in rows]
        alive.remove(j)
    out: list[Row] = []
    for a, b in rows:
        try:
            r = _normalise(a, b)
        except ValueError:
            return None
        if r is not None:
            out.append(r)
    return _dedupe(out), alive


def _eliminate(rows: list[Row], j: int) -> list[Row]:
    pos, neg, rest = [], [], []
    for a, b in rows:
        (pos if a[j] > 0 else neg if a[j] < 0 else rest).append((a, b))
    out = list(rest)
    for ap, bp in pos:
        for an, bn in neg:
            fp, fn = ap[j], -an[j]
            a = tuple(fn * x + fp * y for x, y in zip(ap, an))
            r = _normalise(a, fn * bp + fp * bn)
            if r is not None:
                out.append(r)
    return _dedupe(out)


def _run(rows: list[Row], variables: list[int]) -> list[Row]:
    variables = list(variables)
    while variables:
        def cost(j: int) -> int:
            p = sum(1 for a, _ in rows if a[j] > 0)
            q = sum(1 for a, _ in rows if a[j] < 0)
            return p * q - p - q
        j = min(variables, key=lambda v: (cost(v), v))
        rows = _eliminate(rows, j)
        variables.remove(j)
    return rows


def _nonneg(n: int) -> list[Row]:
    return [(tuple(Fraction(-1) if k == j else Fraction(0) for k in range(n)), Fraction(0)) for j in range(n)]


def feasible(eqs: Sequence[Row], ineqs: Sequence[Row], n: int, nonneg: bool = True) -> bool:
    """Is ``{x : eqs hold, ineqs hold[, x >= 0]}`` nonempty?"""
    try:
        return maximize([Fraction(0)] * n, eqs, ineqs, n, nonneg) is not None
    except Unbounded:  # pragma: no cover - zero objective is bounded
        return True


def maximize(c: Sequence[Fraction], eqs: Sequence[Row], ineqs: Sequence[Row], n: int,
             nonneg: bool = True) -> Fraction | None:
    """Maximum of ``c.x`` over the system; ``None`` if infeasible.

    Raises :class:`Unbounded` when the objective has no upper bound. An
    auxiliary variable ``t`` with ``t <= c.x <= t`` is kept to the end of the
    elimination; the bounds left on ``t`` give the answer.
    """
    def ext(a: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(Fraction(v) for v in a) + (Fraction(0),)

    cc = tuple(Fraction(v) for v in c)
    rows = [(ext(a), Fraction(b)) for a, b in ineqs]
    if nonneg:
        rows += [(ext(a), b) for a, b in _nonneg(n)]
    rows.append((cc + (Fraction(-1),), Fraction(0)))
    rows.append((tuple(-v for v in cc) + (Fraction(1),), Fraction(0)))
    sub = _substitute([(ext(a), Fraction(b)) for a, b in eqs], rows, n + 1)
    if sub is None:
        return None
    remaining, alive = sub
    try:
        remaining = _run(remaining, [v for v in alive if v != n])
    except ValueError:  # a combination reduced to 0 <= negative
        return None
    upper: Fraction | None = None
    lower: Fraction | None = None
    for a, b in remaining:
        coef = a[n]
        if coef == 0:
            if b < 0:
                return None
            continue
        bound = b / coef
        if coef > 0:
            upper = bound if upper is None else min(upper, bound)
        else:
            lower = bound if lower is None else max(lower, bound)
    if upper is not None and lower is not None and lower > upper:
        return None
    if upper is None:
        raise Unbounded()
    return upper


# ---------------------------------------------------------------------------
# Independent coherence oracle


def coherent(fam: Sequence[object], values: Sequence[Fraction]) -> bool:
    """Coherence of ``values`` on ``fam`` decided by elimination alone.

    Constituents are rebuilt here world by world from trivalent values so the
    oracle shares neither constituent nor LP code with :mod:`.coherence`.
    """
    from .events import ConditionalEvent, TrivalentValue, Universe, eval_trivalent

    fam = [ConditionalEvent.of(c) for c in fam]
    vals = [Fraction(v) for v in values]
    u = Universe.of(fam)
    patterns = sorted({
        tuple(eval_trivalent(c, w) for c in fam) for w in u.worlds()
    }, key=lambda p: tuple(m.value for m in p))
    active = list(range(len(fam)))
    while active:
        pats = sorted({tuple(p[i] for i in active) for p in patterns}, key=str)
        pats = [p for p in pats if any(m is not TrivalentValue.VOID for m in p)]
        m = len(pats)
        eqs: list[Row] = []
        for k, i in enumerate(active):
            row = []
            for p in pats:
                mark = p[k]
                row.append(1 - vals[i] if mark is TrivalentValue.TRUE
                           else -vals[i] if mark is TrivalentValue.FALSE else Fraction(0))
            eqs.append((tuple(row), Fraction(0)))
        eqs.append((tuple(Fraction(1) for _ in pats), Fraction(1)))
        if not feasible(eqs, [], m):
            return False
        zero = []
        for k, i in enumerate(active):
            c = [Fraction(0 if p[k] is TrivalentValue.VOID else 1) for p in pats]
            if maximize(c, eqs, [], m) == 0:
                zero.append(i)
        active = zero
    return True
