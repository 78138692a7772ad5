"""Coherence of conditional probability assessments.

An assessment ``p`` on ``E1|H1, ..., En|Hn`` is checked geometrically. Every
constituent inside ``H1 v ... v Hn`` gives a point ``Q_h`` whose ``i``-th
coordinate is 1, 0 or ``p_i`` as the constituent makes ``Ei|Hi`` true, false
or void. The assessment must be a convex combination of the points, and the
sub-assessment on the conditionals whose antecedent can get zero weight (the
zero layer) must be coherent in turn. All linear programs are solved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Union

from . import simplex
from .events import (
    ConditionalEvent,
    Conditional,
    TrivalentValue,
    Universe,
    World,
    _universe,
    render_conditional,
)
from .rational import Interval, Rational, fmt, q

T, F, V = TrivalentValue.TRUE, TrivalentValue.FALSE, TrivalentValue.VOID


class CoherenceError(ValueError):
    """Precondition failure, e.g. extending an incoherent assessment."""


# ---------------------------------------------------------------------------
# Constituents and points


@dataclass(frozen=True)
class Constituent:
    pattern: tuple[TrivalentValue, ...]
    mask: int
    universe: Universe = field(repr=False)

    def __post_init__(self) -> None:
        if not self.mask:
            raise ValueError("a constituent needs at least one world")

    @property
    def worlds(self) -> tuple[World, ...]:
        return tuple(self.universe.world(k) for k in self.universe.indices(self.mask))

    @property
    def is_void(self) -> bool:
        """The all-void constituent (C0), lying outside every antecedent."""
        return all(m is V for m in self.pattern)

    @property
    def label(self) -> str:
        return "".join(m.value for m in self.pattern)

    def __str__(self) -> str:
        return self.label


def constituents(fam: Sequence[Conditional], universe: Universe | None = None) -> list[Constituent]:
    """All satisfiable true/false/void patterns, ordered T < F < V position-wise.

    The all-void constituent, when satisfiable, comes last.
    """
    fam = [ConditionalEvent.of(c) for c in fam]
    if not fam:
        raise ValueError("constituents of an empty family")
    u = _universe(universe, fam)
    masks = [c.masks(u) for c in fam]
    out: list[Constituent] = []

    def split(i: int, mask: int, pattern: tuple[TrivalentValue, ...]) -> None:
        if i == len(fam):
            out.append(Constituent(pattern, mask, u))
            return
        for value, part in zip((T, F, V), masks[i]):
            sub = mask & part
            if sub:
                split(i + 1, sub, pattern + (value,))

    split(0, u.full, ())
    return out


@dataclass(frozen=True)
class Point:
    coords: tuple[Fraction, ...]
    constituent: Constituent

    def __str__(self) -> str:
        return "(" + ", ".join(fmt(c) for c in self.coords) + ")"


def _point(con: Constituent, values: Sequence[Fraction]) -> Point:
    coords = tuple(
        Fraction(1) if m is T else Fraction(0) if m is F else p
        for m, p in zip(con.pattern, values)
    )
    return Point(coords, con)


def build_points(fam: Sequence[Conditional], values: Sequence[Rational],
                 universe: Universe | None = None) -> list[Point]:
    """One point per constituent inside the union of the antecedents."""
    vals = _values(fam, values)
    return [_point(c, vals) for c in constituents(fam, universe) if not c.is_void]


# ---------------------------------------------------------------------------
# Assessments and verdicts


@dataclass(frozen=True)
class Assessment:
    family: tuple[ConditionalEvent, ...]
    values: tuple[Fraction, ...]

    def __init__(self, family: Sequence[Conditional], values: Sequence[Rational]):
        fam = tuple(ConditionalEvent.of(c) for c in family)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "values", _values(fam, values))

    def items(self) -> Iterator[tuple[ConditionalEvent, Fraction]]:
        return zip(self.family, self.values)

    def restrict(self, indices: Sequence[int]) -> Assessment:
        return Assessment([self.family[i] for i in indices], [self.values[i] for i in indices])

    def extend(self, c: Conditional, value: Rational) -> Assessment:
        return Assessment(self.family + (ConditionalEvent.of(c),), self.values + (q(value),))

    def __len__(self) -> int:
        return len(self.family)

    def __str__(self) -> str:
        return ", ".join(f"P{render_conditional(c)} = {fmt(v)}" for c, v in self.items())


def _values(fam: Sequence[object], values: Sequence[Rational]) -> tuple[Fraction, ...]:
    vals = tuple(q(v) for v in values)
    if len(vals) != len(fam):
        raise ValueError(f"{len(fam)} conditionals but {len(vals)} values")
    for v in vals:
        if not 0 <= v <= 1:
            raise ValueError(f"assessed value {fmt(v)} is outside [0, 1]")
    return vals


@dataclass(frozen=True)
class Layer:
    """One level of the recursive check.

    ``indices`` refer to the original family; ``weights`` is a convex
    combination of the layer's points that reproduces the assessment
    (``None`` when the layer is infeasible).
    """

    indices: tuple[int, ...]
    points: tuple[Point, ...]
    weights: tuple[Fraction, ...] | None

    def replay(self, values: Sequence[Fraction]) -> bool:
        if self.weights is None:
            return False
        if any(w < 0 for w in self.weights) or sum(self.weights) != 1:
            return False
        for k, i in enumerate(self.indices):
            if sum(w * p.coords[k] for w, p in zip(self.weights, self.points)) != values[i]:
                return False
        return True


@dataclass(frozen=True)
class CoherenceVerdict:
    coherent: bool
    layers: tuple[Layer, ...]
    reason: str = ""

    @property
    def failed_layer(self) -> int | None:
        return None if self.coherent else len(self.layers) - 1

    @property
    def certificate(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(layer.weights for layer in self.layers if layer.weights is not None)

    def replay(self, values: Sequence[Rational]) -> bool:
        """Re-verify every coherent layer's weights against ``values``."""
        vals = [q(v) for v in values]
        ok = [layer.replay(vals) for layer in self.layers]
        if self.coherent:
            return all(ok)
        return all(ok[:-1]) and not ok[-1]

    def __bool__(self) -> bool:
        return self.coherent


# ---------------------------------------------------------------------------
# Generic core: bets on conditional quantities
#
# A bet with stake s on an item assessed at p pays s * (num - p * den), where
# (num, den) is constant on each part of a partition of the worlds and the
# bet is called off where den = 0. A conditional event E|H has parts
# (EH, 1, 1) and (~EH, 0, 1); a conditional random quantity X|H has parts
# (H & X=v, v, 1); an iterated conditional uses the two conjunction tables as
# numerator and denominator.


@dataclass(frozen=True)
class Item:
    parts: tuple[tuple[int, Fraction, Fraction], ...]
    label: str = ""

    def __post_init__(self) -> None:
        for mask, num, den in self.parts:
            if not mask or den <= 0 or num < 0:
                raise ValueError("item parts need worlds, den > 0 and num >= 0")

    @property
    def support(self) -> int:
        m = 0
        for mask, _, _ in self.parts:
            m |= mask
        return m

    @classmethod
    def event(cls, c: ConditionalEvent, u: Universe) -> Item:
        t, f, _ = c.masks(u)
        parts = tuple((m, Fraction(v), Fraction(1)) for m, v in ((t, 1), (f, 0)) if m)
        return cls(parts, render_conditional(c))

    @classmethod
    def from_worlds(cls, num: Sequence[Fraction], den: Sequence[Fraction], label: str = "") -> Item:
        """Build from world-wise numerator and denominator (den 0 = called off)."""
        groups: dict[tuple[Fraction, Fraction], int] = {}
        for k, (a, d) in enumerate(zip(num, den)):
            if d:
                groups[(a, d)] = groups.get((a, d), 0) | (1 << k)
            elif a:
                raise ValueError("a called-off world must have numerator 0")
        parts = tuple((m, a, d) for (a, d), m in sorted(groups.items(), key=lambda kv: (-kv[0][0], kv[0][1])))
        return cls(parts, label)


Signature = tuple[Union[tuple[Fraction, Fraction], None], ...]


def _cells(items: Sequence[Item], u: Universe) -> list[tuple[Signature, int]]:
    """Nonempty cells of the common refinement, excluding all-called-off worlds."""
    out: list[tuple[Signature, int]] = []

    def split(i: int, mask: int, sig: Signature) -> None:
        if i == len(items):
            if any(s is not None for s in sig):
                out.append((sig, mask))
            return
        rest = mask
        for m, num, den in items[i].parts:
            sub = mask & m
            if sub:
                split(i + 1, sub, sig + ((num, den),))
                rest &= ~m
        if rest:
            split(i + 1, rest, sig + (None,))

    split(0, u.full, ())
    return out


def _gain_rows(cells: Sequence[tuple[Signature, int]], positions: Sequence[int],
               vals: Sequence[Fraction]) -> list[list[Fraction]]:
    rows = []
    for k, p in zip(positions, vals):
        rows.append([Fraction(0) if s[k] is None else s[k][0] - p * s[k][1] for s, _ in cells])
    return rows


def _zero_layer(A: list[list[Fraction]], b: list[Fraction], cells: Sequence[tuple[Signature, int]],
                positions: Sequence[int]) -> list[int]:
    """Positions ``k`` whose total stake weight ``sum_h den_k(h) l_h`` is 0 on
    the whole feasible set ``{A l = b, l >= 0}``.

    Maximises the total weight of the undecided positions; any position with
    positive weight at the optimum is decided nonzero, and the loop stops
    once the maximum is 0.
    """
    def weight(s: Signature, k: int) -> Fraction:
        return Fraction(0) if s[k] is None else s[k][1]

    remaining = list(positions)
    while remaining:
        cost = [sum((weight(s, k) for k in remaining), Fraction(0)) for s, _ in cells]
        res = simplex.solve(A, b, cost)
        if res.status != simplex.OPTIMAL:  # pragma: no cover - feasible and bounded
            raise AssertionError(f"zero-layer LP is {res.status}")
        if res.value == 0:
            return remaining
        remaining = [
            k for k in remaining
            if sum(x * weight(s, k) for x, (s, _) in zip(res.x, cells)) == 0
        ]
    return []


@dataclass(frozen=True)
class _RawLayer:
    indices: tuple[int, ...]
    cells: tuple[tuple[Signature, int], ...]
    weights: tuple[Fraction, ...] | None


def _check_items(items: Sequence[Item], vals: Sequence[Fraction], u: Universe) -> list[_RawLayer]:
    """Layers of the recursive check; the last one has ``weights=None`` when
    the assessment is incoherent."""
    layers: list[_RawLayer] = []
    indices = list(range(len(items)))
    while indices:
        cells = _cells([items[i] for i in indices], u)
        A = _gain_rows(cells, range(len(indices)), [vals[i] for i in indices])
        A.append([Fraction(1)] * len(cells))
        b = [Fraction(0)] * len(indices) + [Fraction(1)]
        res = simplex.solve(A, b)
        if res.status != simplex.OPTIMAL:
            layers.append(_RawLayer(tuple(indices), tuple(cells), None))
            return layers
        layers.append(_RawLayer(tuple(indices), tuple(cells), res.x))
        zero = _zero_layer(A, b, cells, range(len(indices)))
        indices = [indices[k] for k in zero]
    return layers


def _ratio_interval(items: Sequence[Item], vals: Sequence[Fraction], target: Item,
                    u: Universe) -> Interval:
    """Values ``z`` for which a bet on ``target`` at ``z`` keeps the coherent
    assessment ``vals`` on ``items`` coherent.

    The ratio ``sum l*num / sum l*den`` over premise-feasible weights with
    positive target weight is optimised by two Charnes-Cooper programs. If
    the target weight can also vanish, the target falls into the zero layer
    with the premises that can vanish alongside it, and the answer is the
    hull with the interval for that smaller family.
    """
    n = len(items)
    cells = _cells(list(items) + [target], u)
    premise = _gain_rows(cells, range(n), vals)
    num = [Fraction(0) if s[n] is None else s[n][0] for s, _ in cells]
    den = [Fraction(0) if s[n] is None else s[n][1] for s, _ in cells]

    found: Interval | None = None
    A = premise + [den]
    b = [Fraction(0)] * n + [Fraction(1)]
    lo = simplex.solve(A, b, num, maximize=False)
    if lo.status == simplex.OPTIMAL:
        hi = simplex.solve(A, b, num, maximize=True)
        found = Interval(lo.value, hi.value)

    A0 = premise + [den, [Fraction(1)] * len(cells)]
    b0 = [Fraction(0)] * (n + 1) + [Fraction(1)]
    if simplex.solve(A0, b0).status == simplex.OPTIMAL:
        zero = _zero_layer(A0, b0, cells, range(n))
        inner = _ratio_interval([items[k] for k in zero], [vals[k] for k in zero], target, u)
        found = inner if found is None else found.hull(inner)

    if found is None:
        raise CoherenceError("the premises admit no coherent weights")
    return found


def quantity_interval(items: Sequence[Item], values: Sequence[Rational], target: Item,
                      universe: Universe) -> Interval:
    """Coherent values for a further conditional quantity (generic form)."""
    vals = [q(v) for v in values]
    layers = _check_items(items, vals, universe)
    if layers and layers[-1].weights is None:
        raise CoherenceError("the base assessment is not coherent")
    return _ratio_interval(items, vals, target, universe)


def items_coherent(items: Sequence[Item], values: Sequence[Rational], universe: Universe) -> bool:
    layers = _check_items(items, [q(v) for v in values], universe)
    return not layers or layers[-1].weights is not None


# ---------------------------------------------------------------------------
# Conditional events


_MARK = {Fraction(1): T, Fraction(0): F}


def _as_constituent(sig: Signature, mask: int, u: Universe) -> Constituent:
    return Constituent(tuple(V if s is None else _MARK[s[0]] for s in sig), mask, u)


def check_coherence(fam: Sequence[Conditional], values: Sequence[Rational],
                    universe: Universe | None = None) -> CoherenceVerdict:
    """Decide coherence of ``P(fam[i]) = values[i]`` exactly."""
    fam = [ConditionalEvent.of(c) for c in fam]
    vals = _values(fam, values)
    if not fam:
        return CoherenceVerdict(True, ())
    u = _universe(universe, fam)
    raw = _check_items([Item.event(c, u) for c in fam], vals, u)
    layers = []
    for layer in raw:
        sub_vals = [vals[i] for i in layer.indices]
        points = tuple(_point(_as_constituent(s, m, u), sub_vals) for s, m in layer.cells)
        layers.append(Layer(layer.indices, points, layer.weights))
    if raw[-1].weights is None:
        names = ", ".join(render_conditional(fam[i]) for i in raw[-1].indices)
        return CoherenceVerdict(
            False, tuple(layers),
            f"layer {len(layers) - 1}: the assessed point of {{{names}}} "
            f"is outside the convex hull of its constituent points",
        )
    return CoherenceVerdict(True, tuple(layers))


@dataclass(frozen=True)
class Extension:
    interval: Interval
    lower: CoherenceVerdict
    upper: CoherenceVerdict

    def __str__(self) -> str:
        return str(self.interval)


def extension_interval(fam: Sequence[Conditional], values: Sequence[Rational], target: Conditional,
                       universe: Universe | None = None) -> Extension:
    """The closed interval of values ``z`` making ``values + [z]`` coherent.

    Endpoints come from linear-fractional programs over the premise system;
    both are then re-verified by a full recursive coherence check, as is the
    midpoint.
    """
    fam = [ConditionalEvent.of(c) for c in fam]
    vals = list(_values(fam, values))
    target = ConditionalEvent.of(target)
    u = _universe(universe, fam, target)
    base = check_coherence(fam, vals, u)
    if not base.coherent:
        raise CoherenceError(f"the base assessment is not coherent ({base.reason})")
    items = [Item.event(c, u) for c in fam]
    interval = _ratio_interval(items, vals, Item.event(target, u), u)
    full = fam + [target]
    lower = check_coherence(full, vals + [interval.lo], u)
    upper = check_coherence(full, vals + [interval.hi], u)
    middle = check_coherence(full, vals + [interval.midpoint], u)
    if not (lower.coherent and upper.coherent and middle.coherent):
        raise CoherenceError(
            f"candidate interval {interval} failed verification; the extension is left undecided"
        )
    return Extension(interval, lower, upper)
