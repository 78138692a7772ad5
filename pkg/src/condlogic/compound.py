"""Compound and iterated conditionals as conditional random quantities.

The conjunction of ``E1|H1, ..., En|Hn`` takes value 1 where every member is
true, 0 where some member is false, and otherwise the prevision ``x_S`` of
the conjunction of the members ``S`` that are void. The previsions ``x_S``
are inputs: supplied directly, computed from a probability distribution over
worlds, or derived from an assessment on events when coherence pins them
down. Tables are stored world by world and grouped into constituents for
display.

The iterated conditional ``(E|H) | C(F)`` is ``C(F + [E|H]) + mu (1 - C(F))``
with ``mu`` its own prevision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

from .coherence import Assessment, CoherenceError, Item, constituents, quantity_interval
from .events import (
    ConditionalEvent,
    Conditional,
    Event,
    LogicError,
    TOP,
    TrivalentValue,
    Universe,
    World,
    _negation,
    conjunction,
    disjunction,
    _universe,
    implies,
    is_impossible,
    render_conditional,
    render_event,
)
from .rational import Interval, Rational, fmt, q

T, F, V = TrivalentValue.TRUE, TrivalentValue.FALSE, TrivalentValue.VOID

Key = frozenset
Prevision = Union[Fraction, Interval]


class IncoherentInput(ValueError):
    """Previsions that no coherent assessment can produce."""


class ZeroProbability(ValueError):
    """A formula needs ``P(H) > 0`` and the distribution gives 0."""


class Undetermined(ValueError):
    """A needed prevision is not fixed by the available information."""

    def __init__(self, message: str, interval: Interval | None = None):
        super().__init__(message)
        self.interval = interval


def _key(k: object) -> frozenset[int]:
    if isinstance(k, int):
        return frozenset((k,))
    return frozenset(int(i) for i in k)  # type: ignore[union-attr]


def _subsets(n: int) -> list[frozenset[int]]:
    return [frozenset(c) for r in range(1, n + 1) for c in combinations(range(n), r)]


def _label(keys: Iterable[int]) -> str:
    return "x{" + ",".join(str(i + 1) for i in sorted(keys)) + "}"


# ---------------------------------------------------------------------------
# Distributions over worlds


@dataclass(frozen=True)
class Distribution:
    """An exact probability on the worlds of a universe (indexed by world)."""

    universe: Universe
    probs: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.probs) != self.universe.size:
            raise ValueError(f"need {self.universe.size} world probabilities, got {len(self.probs)}")
        if any(p < 0 for p in self.probs) or sum(self.probs) != 1:
            raise ValueError("world probabilities must be nonnegative and sum to 1")

    @classmethod
    def uniform(cls, u: Universe) -> Distribution:
        return cls(u, tuple(Fraction(1, u.size) for _ in range(u.size)))

    @classmethod
    def point(cls, u: Universe, world: World | Mapping[str, bool]) -> Distribution:
        k = u.index(world)
        return cls(u, tuple(Fraction(int(i == k)) for i in range(u.size)))

    @classmethod
    def from_weights(cls, u: Universe, weights: Sequence[Rational]) -> Distribution:
        """Normalise nonnegative world weights (in world-index order)."""
        w = [q(x) for x in weights]
        total = sum(w, Fraction(0))
        if total <= 0:
            raise ValueError("weights must have a positive total")
        return cls(u, tuple(x / total for x in w))

    def prob_mask(self, mask: int) -> Fraction:
        return sum((self.probs[k] for k in self.universe.indices(mask)), Fraction(0))

    def prob(self, e: Event) -> Fraction:
        return self.prob_mask(self.universe.mask(e))

    def conditional(self, c: Conditional) -> Fraction:
        c = ConditionalEvent.of(c)
        t, f, _ = c.masks(self.universe)
        h = self.prob_mask(t | f)
        if h == 0:
            raise ZeroProbability(f"P({c.antecedent}) = 0")
        return self.prob_mask(t) / h

    def expect(self, values: Sequence[Fraction]) -> Fraction:
        return sum((p * v for p, v in zip(self.probs, values)), Fraction(0))


# ---------------------------------------------------------------------------
# Conjunction tables


def frechet_bounds(xs: Sequence[Rational]) -> Interval:
    """``[max(sum x - n + 1, 0), min x]``."""
    vals = [q(x) for x in xs]
    if not vals:
        raise ValueError("Frechet bounds of nothing")
    for v in vals:
        if not 0 <= v <= 1:
            raise ValueError(f"{fmt(v)} is outside [0, 1]")
    return Interval(max(sum(vals) - len(vals) + 1, Fraction(0)), min(vals))


def _world_marks(fam: Sequence[ConditionalEvent], u: Universe) -> list[tuple[TrivalentValue, ...]]:
    masks = [c.masks(u) for c in fam]
    out = []
    for k in range(u.size):
        bit = 1 << k
        out.append(tuple(T if t & bit else F if f & bit else V for t, f, _ in masks))
    return out


def _value(marks: Sequence[TrivalentValue], prev: Mapping[frozenset[int], Fraction],
           positions: Sequence[int] | None = None) -> Fraction | None:
    """Definition-style value at one world; ``None`` if the needed x_S is missing."""
    idx = range(len(marks)) if positions is None else positions
    if any(marks[i] is F for i in idx):
        return Fraction(0)
    void = frozenset(i for i in idx if marks[i] is V)
    if not void:
        return Fraction(1)
    return prev.get(void)


@dataclass(frozen=True)
class ValueTable:
    """The conjunction of ``family`` as a world-wise random quantity.

    ``previsions`` maps each nonempty subset ``S`` (0-based member indices)
    to ``x_S``; the full set's entry is the table's own prevision and may be
    missing when unknown.
    """

    family: tuple[ConditionalEvent, ...]
    universe: Universe = field(repr=False)
    previsions: Mapping[frozenset[int], Fraction] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.family)

    @property
    def prevision(self) -> Fraction | None:
        return self.previsions.get(frozenset(range(self.n)))

    def world_values(self) -> tuple[Fraction | None, ...]:
        return tuple(_value(m, self.previsions) for m in _world_marks(self.family, self.universe))

    def value(self, world: World | Mapping[str, bool]) -> Fraction | None:
        return self.world_values()[self.universe.index(world)]

    def rows(self) -> list[tuple[str, Fraction | None]]:
        """(constituent pattern, value) in constituent order."""
        vals = self.world_values()
        out = []
        for con in constituents(self.family, self.universe):
            k = next(iter(self.universe.indices(con.mask)))
            out.append((con.label, vals[k]))
        return out

    def expectation(self, dist: Distribution) -> Fraction:
        vals = self.world_values()
        if any(v is None for v in vals):
            raise Undetermined("the table's own prevision is needed as a value")
        return dist.expect(vals)  # type: ignore[arg-type]

    def is_constant(self, c: Rational) -> bool:
        c = q(c)
        return all(v == c for v in self.world_values())

    def __str__(self) -> str:
        head = " & ".join(render_conditional(c) for c in self.family)
        body = ", ".join(f"{lab}: {'?' if v is None else fmt(v)}" for lab, v in self.rows())
        return f"{head} = {{{body}}}"


def previsions_from_distribution(fam: Sequence[Conditional], dist: Distribution) -> dict[frozenset[int], Fraction]:
    """All ``x_S`` by the generalised McGee formula, smallest subsets first.

    Raises :class:`ZeroProbability` if some union of antecedents has
    probability 0 (the caller must supply those previsions directly).
    """
    fam = [ConditionalEvent.of(c) for c in fam]
    u = dist.universe
    marks = _world_marks(fam, u)
    out: dict[frozenset[int], Fraction] = {}
    for s in _subsets(len(fam)):
        pos = sorted(s)
        num = Fraction(0)
        den = Fraction(0)
        for k, m in enumerate(marks):
            if all(m[i] is V for i in pos):
                continue
            den += dist.probs[k]
            v = _value(m, out, pos)
            num += dist.probs[k] * v  # type: ignore[operator]
        if den == 0:
            raise ZeroProbability(f"the antecedents of {_label(s)} have probability 0")
        out[s] = num / den
    return out


def _validate(prev: Mapping[frozenset[int], Fraction], n: int) -> None:
    for s, v in prev.items():
        if not s or not s <= frozenset(range(n)):
            raise ValueError(f"prevision key {sorted(s)} does not name members 0..{n - 1}")
        if not 0 <= v <= 1:
            raise IncoherentInput(f"{_label(s)} = {fmt(v)} is outside [0, 1]")
        if len(s) >= 2 and all(frozenset((i,)) in prev for i in s):
            bounds = frechet_bounds([prev[frozenset((i,))] for i in sorted(s)])
            if v not in bounds:
                raise IncoherentInput(f"{_label(s)} = {fmt(v)} violates the Frechet bounds {bounds}")
            for i in s:
                sub = s - {i}
                if len(sub) >= 1 and sub in prev and v > prev[sub]:
                    raise IncoherentInput(
                        f"{_label(s)} = {fmt(v)} exceeds {_label(sub)} = {fmt(prev[sub])} (monotonicity)"
                    )


def _needed(fam: Sequence[ConditionalEvent], u: Universe) -> set[frozenset[int]]:
    """Subsets whose prevision appears as a table value (strict subsets of
    the family and, when the all-void constituent exists, the full set)."""
    out: set[frozenset[int]] = set()
    for m in set(_world_marks(fam, u)):
        if any(x is F for x in m):
            continue
        void = frozenset(i for i, x in enumerate(m) if x is V)
        if void:
            out.add(void)
    return out


def conjunction_table(fam: Sequence[Conditional], previsions: Mapping[object, Rational] | None = None,
                      dist: Distribution | None = None, universe: Universe | None = None) -> ValueTable:
    """The conjunction table of ``fam``.

    ``previsions`` keys are member indices (an ``int`` or an iterable of
    ints, 0-based). Missing entries are computed from ``dist`` when given.
    """
    fam = [ConditionalEvent.of(c) for c in fam]
    if not fam:
        raise ValueError("conjunction of an empty family")
    u = dist.universe if dist is not None and universe is None else _universe(universe, fam)
    prev = {_key(k): q(v) for k, v in (previsions or {}).items()}
    if dist is not None:
        for s, v in previsions_from_distribution(fam, dist).items():
            prev.setdefault(s, v)
    # a single member's own prevision is its probability
    _validate(prev, len(fam))
    missing = sorted(_needed(fam, u) - set(prev) - {frozenset(range(len(fam)))}, key=sorted)
    if missing:
        raise Undetermined("missing previsions " + ", ".join(_label(s) for s in missing))
    return ValueTable(tuple(fam), u, dict(prev))


def conjunction_prevision_pair(c1: Conditional, c2: Conditional, x: Rational, y: Rational,
                               dist: Distribution) -> Fraction:
    """``[P(AHBK) + x P(~H BK) + y P(AH ~K)] / P(H v K)`` for ``A|H``, ``B|K``."""
    c1, c2 = ConditionalEvent.of(c1), ConditionalEvent.of(c2)
    x, y = q(x), q(y)
    u = dist.universe
    ah, nah, nh = c1.masks(u)
    bk, nbk, nk = c2.masks(u)
    hk = (ah | nah) | (bk | nbk)
    den = dist.prob_mask(hk)
    if den == 0:
        raise ZeroProbability("P(H v K) = 0; supply the conjunction's prevision directly")
    num = dist.prob_mask(ah & bk) + x * dist.prob_mask(nh & bk) + y * dist.prob_mask(ah & nk)
    return num / den


def reduce_pair_special(c1: Conditional, c2: Conditional) -> ConditionalEvent | None:
    """``AHBK | (H v K)`` when ``AH~K`` and ``~HBK`` are both impossible."""
    c1, c2 = ConditionalEvent.of(c1), ConditionalEvent.of(c2)
    u = Universe.of(c1, c2)
    ah, _, nh = c1.masks(u)
    bk, _, nk = c2.masks(u)
    if ah & nk or nh & bk:
        return None
    def unique(parts: Iterable[Event]) -> list[Event]:
        out: list[Event] = []
        for p in parts:
            if p != TOP and p not in out:
                out.append(p)
        return out

    def lean(parts: list[Event], redundant) -> list[Event]:
        """Drop parts made redundant by the others; sort the rest by name."""
        kept = list(parts)
        for p in parts:
            rest = [r for r in kept if r is not p]
            if rest and redundant(p, rest):
                kept = rest
        return sorted(kept, key=render_event)

    a, h, b, k = c1.consequent, c1.antecedent, c2.consequent, c2.antecedent
    conj = lean(unique((a, h, b, k)), lambda p, rest: implies(conjunction(rest), p, u))
    if TOP in (h, k):
        ante: Event = TOP
    else:
        ante = disjunction(lean(unique((h, k)), lambda p, rest: implies(p, disjunction(rest), u)))
    return ConditionalEvent(conjunction(conj) if conj else TOP, ante)


def disjunction_values(t1: ValueTable, t2: ValueTable, conj: ValueTable) -> tuple[Fraction, ...]:
    """World-wise ``C1 + C2 - (C1 & C2)`` (inclusion-exclusion)."""
    v1, v2, v12 = t1.world_values(), t2.world_values(), conj.world_values()
    if any(v is None for v in v1 + v2 + v12):
        raise Undetermined("disjunction needs every table value")
    return tuple(a + b - c for a, b, c in zip(v1, v2, v12))  # type: ignore[operator]


def monotonicity_check(fam1: Sequence[Conditional], fam2: Sequence[Conditional],
                       previsions: Mapping[object, Rational], universe: Universe | None = None) -> bool:
    """``C(fam2) <= C(fam1)`` world-wise, for ``fam1`` a subfamily of ``fam2``.

    ``previsions`` are keyed by ``fam2`` indices; the subfamily's entries are
    taken over through the index map.
    """
    f1 = [ConditionalEvent.of(c) for c in fam1]
    f2 = [ConditionalEvent.of(c) for c in fam2]
    try:
        where = [f2.index(c) for c in f1]
    except ValueError:
        raise ValueError("fam1 is not a subfamily of fam2") from None
    u = _universe(universe, f2)
    prev2 = {_key(k): q(v) for k, v in previsions.items()}
    back = {j: i for i, j in enumerate(where)}
    prev1 = {frozenset(back[j] for j in s): v for s, v in prev2.items() if s <= set(where)}
    big = conjunction_table(f2, prev2, universe=u).world_values()
    small = conjunction_table(f1, prev1, universe=u).world_values()
    return all(b is None or s is None or b <= s for b, s in zip(big, small))


# ---------------------------------------------------------------------------
# Deriving previsions from an assessment on events


def _conj_item(fam: Sequence[ConditionalEvent], prev: Mapping[frozenset[int], Fraction],
               u: Universe, label: str) -> Item:
    """The conjunction as a bet conditional on the union of the antecedents."""
    num: list[Fraction] = []
    den: list[Fraction] = []
    full = frozenset(range(len(fam)))
    for m in _world_marks(fam, u):
        if all(x is V for x in m):
            num.append(Fraction(0))
            den.append(Fraction(0))
            continue
        v = _value(m, {s: p for s, p in prev.items() if s != full})
        if v is None:
            raise Undetermined(f"{label} needs a sub-conjunction prevision that is not determined")
        num.append(v)
        den.append(Fraction(1))
    return Item.from_worlds(num, den, label)


def derive_previsions(fam: Sequence[Conditional], assessment: Assessment,
                      known: Mapping[object, Rational] | None = None,
                      universe: Universe | None = None) -> dict[frozenset[int], Prevision]:
    """``x_S`` for every nonempty ``S``: a point when coherence with
    ``assessment`` fixes it, otherwise the coherent interval.

    Points are fed back as further assessed quantities before larger subsets
    are examined.
    """
    fam = [ConditionalEvent.of(c) for c in fam]
    u = _universe(universe, fam, list(assessment.family))
    items = [Item.event(c, u) for c in assessment.family]
    vals = list(assessment.values)
    pinned = {_key(k): q(v) for k, v in (known or {}).items()}
    out: dict[frozenset[int], Prevision] = {}
    points: dict[frozenset[int], Fraction] = {}
    for s in _subsets(len(fam)):
        pos = sorted(s)
        sub = [fam[i] for i in pos]
        local = {frozenset(pos.index(i) for i in t): v for t, v in points.items() if t < s}
        try:
            target = _conj_item(sub, local, u, _label(s))
        except Undetermined:
            continue
        if s in pinned:
            value: Prevision = pinned[s]
        else:
            try:
                value = quantity_interval(items, vals, target, u)
            except CoherenceError as exc:
                raise IncoherentInput(str(exc)) from exc
            if value.is_point:
                value = value.lo
        out[s] = value
        if isinstance(value, Fraction):
            points[s] = value
            items.append(target)
            vals.append(value)
    return out


# ---------------------------------------------------------------------------
# Iterated conditionals


@dataclass(frozen=True)
class IteratedTable:
    """``consequent | C(antecedent)`` world by world.

    ``mu`` is a point when the antecedent's prevision is positive (compound
    prevision theorem) or when coherence fixes it; otherwise an interval and
    ``note`` says why.
    """

    consequent: ConditionalEvent
    antecedent: tuple[ConditionalEvent, ...]
    conj: ValueTable
    ante: ValueTable
    mu: Prevision
    note: str = ""

    @property
    def universe(self) -> Universe:
        return self.conj.universe

    @property
    def family(self) -> tuple[ConditionalEvent, ...]:
        return self.antecedent + (self.consequent,)

    def affine(self) -> tuple[tuple[Fraction, Fraction], ...]:
        """World-wise ``(a, b)`` with value ``a + b * mu``."""
        cv, av = self.conj.world_values(), self.ante.world_values()
        out = []
        for c, a in zip(cv, av):
            if c is None or a is None:
                # both tables void: the bet is called off and pays mu back
                out.append((Fraction(0), Fraction(1)))
            else:
                out.append((c, 1 - a))
        return tuple(out)

    def world_values(self, mu: Rational | None = None) -> tuple[Fraction, ...]:
        m = self.mu if mu is None else q(mu)
        if isinstance(m, Interval):
            raise Undetermined("mu is an interval; pass a value", m)
        return tuple(a + b * m for a, b in self.affine())

    def rows(self, mu: Rational | None = None) -> list[tuple[str, Fraction]]:
        vals = self.world_values(mu)
        out = []
        for con in constituents(self.family, self.universe):
            k = next(iter(self.universe.indices(con.mask)))
            out.append((con.label, vals[k]))
        return out

    def is_constant(self, c: Rational) -> bool:
        return all(v == q(c) for v in self.world_values())

    def __str__(self) -> str:
        ante = " & ".join(render_conditional(c) for c in self.antecedent)
        mu = str(self.mu) if isinstance(self.mu, Interval) else fmt(self.mu)
        return f"{render_conditional(self.consequent)} | ({ante}): mu = {mu}"


def _mu_from_ratios(conj: Sequence[Fraction | None], ante: Sequence[Fraction | None]) -> Interval:
    ratios = [c / a for c, a in zip(conj, ante) if a is not None and c is not None and a > 0]
    if not ratios:
        raise Undetermined("the antecedent conjunction is 0 everywhere")
    return Interval(min(ratios), max(ratios))


def iterated_table(cons: Conditional, ante: Conditional | Sequence[Conditional],
                   previsions: Mapping[object, Rational] | None = None,
                   dist: Distribution | None = None, assessment: Assessment | None = None,
                   universe: Universe | None = None) -> IteratedTable:
    """Build ``cons | C(ante)``.

    Previsions are keyed over the joint family ``ante + [cons]`` (the
    consequent has index ``len(ante)``). They can also come from ``dist`` or
    be derived from ``assessment``. With ``x = P(C(ante)) > 0`` the result has
    ``mu = z / x`` for ``z = P(C(ante + [cons]))``; with ``x = 0`` it is the
    interval of ratios ``C(ante + [cons]) / C(ante)`` over worlds with a
    positive denominator. When ``x`` is not available the ratio is optimised
    over the assessment instead.
    """
    cons = ConditionalEvent.of(cons)
    ante_fam = [ConditionalEvent.of(a) for a in
                (ante if isinstance(ante, (list, tuple)) else [ante])]
    if not ante_fam:
        raise ValueError("an iterated conditional needs an antecedent")
    for a in ante_fam:
        if is_impossible(a.consequent & a.antecedent):
            raise LogicError(f"antecedent member {render_conditional(a)} is constantly 0")
    full = ante_fam + [cons]
    n = len(ante_fam)
    objs: list[object] = list(full) + (list(assessment.family) if assessment else [])
    u = dist.universe if dist is not None and universe is None else _universe(universe, objs)

    prev: dict[frozenset[int], Prevision] = {_key(k): q(v) for k, v in (previsions or {}).items()}
    if dist is not None:
        for s, v in previsions_from_distribution(full, dist).items():
            prev.setdefault(s, v)
    if assessment is not None:
        for s, v in derive_previsions(full, assessment, {k: v for k, v in prev.items()
                                                          if isinstance(v, Fraction)}, u).items():
            prev.setdefault(s, v)
    points = {s: v for s, v in prev.items() if isinstance(v, Fraction)}
    _validate(points, len(full))

    ante_key = frozenset(range(n))
    full_key = frozenset(range(n + 1))
    ante_prev = {s: v for s, v in points.items() if s <= ante_key}
    ante_table = ValueTable(tuple(ante_fam), u, ante_prev)
    conj_table = ValueTable(tuple(full), u, points)

    # values other than the tables' own previsions must all be known
    for table, own in ((ante_table, ante_key), (conj_table, full_key)):
        missing = _needed(list(table.family), u) - set(table.previsions) - {own}
        if missing:
            raise Undetermined("missing previsions " + ", ".join(_label(s) for s in sorted(missing, key=sorted)))

    av = ante_table.world_values()
    if all(a == 0 for a in av):
        raise LogicError("the antecedent conjunction is constantly 0")

    x = points.get(ante_key)
    z = points.get(full_key)
    note = ""
    if x is not None and x > 0:
        if z is not None:
            mu: Prevision = z / x
        else:
            zi = prev.get(full_key)
            if not isinstance(zi, Interval):
                raise Undetermined("the prevision of the joint conjunction is not available")
            mu = Interval(zi.lo / x, zi.hi / x)
            note = "the joint conjunction's prevision is only known as an interval"
    elif x == 0 and assessment is None:
        if z not in (None, 0):
            raise IncoherentInput("a zero antecedent prevision forces the joint prevision to 0")
        mu = _mu_from_ratios(conj_table.world_values(), av)
        note = "antecedent prevision is 0: mu is only bounded by the table's ratios"
    else:
        # x unknown, or x = 0 with an assessment whose zero layer may still fix mu
        if assessment is None:
            raise Undetermined("the antecedent conjunction's prevision is needed")
        mu = _mu_by_ratio(conj_table, ante_table, assessment, u)
        if mu.is_point:
            mu = mu.lo
        else:
            note = "mu is not fixed by the assessment"
    if isinstance(mu, Interval) and mu.is_point:
        mu = mu.lo
    return IteratedTable(cons, tuple(ante_fam), conj_table, ante_table, mu, note)


def _mu_by_ratio(conj: ValueTable, ante: ValueTable, assessment: Assessment, u: Universe) -> Interval:
    """Range of ``sum l C_joint / sum l C_ante`` over the assessment's weights.

    Worlds where every member of the joint family is void pay ``z - mu x = 0``
    whatever the previsions, so they are treated as called off.
    """
    cv, av = conj.world_values(), ante.world_values()
    num, den = [], []
    for c, a in zip(cv, av):
        if c is None:
            num.append(Fraction(0))
            den.append(Fraction(0))
        elif a is None:
            raise Undetermined("the antecedent conjunction's prevision is needed")
        else:
            num.append(c)
            den.append(a)
    target = Item.from_worlds(num, den, "mu")
    items = [Item.event(c, u) for c in assessment.family]
    try:
        return quantity_interval(items, list(assessment.values), target, u)
    except CoherenceError as exc:
        raise IncoherentInput(str(exc)) from exc


def iterated_negation_check(t: IteratedTable) -> bool:
    """``(~E|H) | C(F) = 1 - (E|H) | C(F)`` world-wise.

    The negated table is rebuilt from the decomposition
    ``C(S + [~E|H]) = C(S) - C(S + [E|H])`` for every subfamily ``S`` and
    uses ``nu = 1 - mu``.
    """
    n = len(t.antecedent)
    neg = ConditionalEvent(_negation(t.consequent.consequent), t.consequent.antecedent)
    prev = dict(t.conj.previsions)
    neg_prev: dict[frozenset[int], Fraction] = {}
    for s, v in prev.items():
        if n not in s:
            neg_prev[s] = v
        elif s == frozenset((n,)):
            neg_prev[s] = 1 - v
        elif s - {n} in prev:
            neg_prev[s] = prev[s - {n}] - v
    conj_neg = ValueTable(t.antecedent + (neg,), t.universe, neg_prev)
    if isinstance(t.mu, Interval):
        mus: list[Fraction] = [t.mu.lo, t.mu.hi]
    else:
        mus = [t.mu]
    for mu in mus:
        other = IteratedTable(neg, t.antecedent, conj_neg, t.ante, 1 - mu)
        mine = t.world_values(mu)
        if any(a + b != 1 for a, b in zip(mine, other.world_values())):
            return False
    return True


def biconditional_values(x: Rational, y: Rational) -> tuple[Fraction, Fraction]:
    """For ``P(A|B) = x`` and ``P(B|A) = y``: the prevision ``z`` of
    ``(A|B) & (B|A) = AB|(A v B)`` and ``mu = x + y - z`` of the disjunction."""
    x, y = q(x), q(y)
    for v in (x, y):
        if not 0 <= v <= 1:
            raise ValueError(f"{fmt(v)} is outside [0, 1]")
    z = x * y / (x + y - x * y) if x + y > 0 else Fraction(0)
    return z, x + y - z


def decomposition_check(c1: Conditional, c2: Conditional, x: Rational, z: Rational, eta: Rational,
                        y: Rational | None = None, universe: Universe | None = None) -> bool:
    """``(B|K) & (A|H) + (~B|K) & (A|H) = A|H`` world-wise.

    ``c1 = A|H`` with ``P(A|H) = x``; ``z`` and ``eta`` are the previsions of
    the two conjunctions. ``y = P(B|K)`` only shows up where ``K`` is void
    and cancels there; when omitted both extremes 0 and 1 are checked.
    Raises :class:`IncoherentInput` when ``z + eta != x``.
    """
    c1, c2 = ConditionalEvent.of(c1), ConditionalEvent.of(c2)
    x, z, eta = q(x), q(z), q(eta)
    if z + eta != x:
        raise IncoherentInput(f"z + eta = x is violated: {fmt(z)} + {fmt(eta)} != {fmt(x)}")
    neg2 = ConditionalEvent(_negation(c2.consequent), c2.antecedent)
    u = _universe(universe, c1, c2)
    def values(fam: list[ConditionalEvent], prev: dict[object, Fraction]) -> tuple[Fraction | None, ...]:
        return ValueTable(tuple(fam), u, {_key(k): v for k, v in prev.items()}).world_values()

    single = values([c1], {0: x})
    for yy in ([q(y)] if y is not None else [Fraction(0), Fraction(1)]):
        pos = values([c1, c2], {0: x, 1: yy, (0, 1): z})
        neg = values([c1, neg2], {0: x, 1: 1 - yy, (0, 1): eta})
        if not all(a + b == c for a, b, c in zip(pos, neg, single)):  # type: ignore[operator]
            return False
    return True
