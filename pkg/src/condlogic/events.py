"""Propositional events, conditional events and their trivalent compounds.

Events are formula trees over named atoms. All semantic questions (implication,
equivalence, satisfiability) are answered by exhaustive enumeration of the
worlds of a :class:`Universe`; a set of worlds is stored as a Python ``int``
bitmask, bit ``k`` standing for the ``k``-th world in lexicographic order
(first atom most significant, ``False`` before ``True``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence, Union

MAX_ATOMS = 20


class LogicError(ValueError):
    """Malformed event or conditional (unknown atom, impossible antecedent, ...)."""


class Event:
    """Base class of the formula tree. Instances are immutable and hashable."""

    __slots__ = ()

    def __and__(self, other: Event) -> Event:
        return And(_flatten(And, (self, other)))

    def __or__(self, other: Event) -> Event:
        return Or(_flatten(Or, (self, other)))

    def __invert__(self) -> Event:
        return Not(self)

    def given(self, antecedent: Event) -> ConditionalEvent:
        return ConditionalEvent(self, antecedent)

    def atoms(self) -> frozenset[str]:
        return _atoms(self)

    def __str__(self) -> str:
        return render_event(self)


@dataclass(frozen=True, slots=True)
class Atom(Event):
    name: str


@dataclass(frozen=True, slots=True)
class Const(Event):
    value: bool


@dataclass(frozen=True, slots=True)
class Not(Event):
    arg: Event


@dataclass(frozen=True, slots=True)
class And(Event):
    args: tuple[Event, ...]


@dataclass(frozen=True, slots=True)
class Or(Event):
    args: tuple[Event, ...]


TOP = Const(True)
BOTTOM = Const(False)


def atoms(*names: str) -> tuple[Atom, ...]:
    """``A, B = atoms("A", "B")``; also accepts one space-separated string."""
    if len(names) == 1 and " " in names[0]:
        names = tuple(names[0].split())
    return tuple(Atom(n) for n in names)


def _flatten(kind: type, parts: Iterable[Event]) -> tuple[Event, ...]:
    out: list[Event] = []
    for p in parts:
        if isinstance(p, kind):
            out.extend(p.args)  # type: ignore[attr-defined]
        else:
            out.append(p)
    return tuple(out)


@lru_cache(maxsize=None)
def _atoms(e: Event) -> frozenset[str]:
    if isinstance(e, Atom):
        return frozenset((e.name,))
    if isinstance(e, Const):
        return frozenset()
    if isinstance(e, Not):
        return _atoms(e.arg)
    if isinstance(e, (And, Or)):
        return frozenset().union(*(_atoms(a) for a in e.args))
    raise TypeError(f"not an event: {e!r}")


def conjunction(parts: Iterable[Event]) -> Event:
    parts = tuple(parts)
    if not parts:
        return TOP
    return parts[0] if len(parts) == 1 else And(parts)


def disjunction(parts: Iterable[Event]) -> Event:
    parts = tuple(parts)
    if not parts:
        return BOTTOM
    return parts[0] if len(parts) == 1 else Or(parts)


# ---------------------------------------------------------------------------
# Worlds and universes


@dataclass(frozen=True, slots=True)
class World:
    """A total truth assignment to the atoms of a universe."""

    atoms: tuple[str, ...]
    values: tuple[bool, ...]

    def __getitem__(self, atom: str) -> bool:
        try:
            return self.values[self.atoms.index(atom)]
        except ValueError:
            raise LogicError(f"atom {atom!r} is not assigned in this world") from None

    def as_dict(self) -> dict[str, bool]:
        return dict(zip(self.atoms, self.values))

    def __str__(self) -> str:
        return " ".join(f"{a}={int(v)}" for a, v in zip(self.atoms, self.values))


@dataclass(frozen=True)
class Universe:
    """An ordered finite set of atoms together with its ``2**n`` worlds."""

    atoms: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.atoms)) != len(self.atoms):
            raise LogicError(f"duplicate atoms in {self.atoms}")
        if len(self.atoms) > MAX_ATOMS:
            raise LogicError(
                f"{len(self.atoms)} atoms exceed the cap of {MAX_ATOMS} "
                f"(world enumeration is exponential)"
            )

    @classmethod
    def of(cls, *objects: object, max_atoms: int = MAX_ATOMS) -> Universe:
        """Universe over the atoms (sorted by name) mentioned by ``objects``."""
        names: set[str] = set()
        for obj in objects:
            names |= atoms_of(obj)
        if len(names) > max_atoms:
            raise LogicError(f"{len(names)} atoms exceed the cap of {max_atoms}")
        return cls(tuple(sorted(names)))

    @property
    def size(self) -> int:
        return 1 << len(self.atoms)

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def world(self, index: int) -> World:
        n = len(self.atoms)
        return World(self.atoms, tuple(bool(index >> (n - 1 - i) & 1) for i in range(n)))

    def worlds(self) -> Iterator[World]:
        for values in product((False, True), repeat=len(self.atoms)):
            yield World(self.atoms, values)

    def index(self, world: World | Mapping[str, bool]) -> int:
        k = 0
        for a in self.atoms:
            k = (k << 1) | int(bool(world[a]))
        return k

    def mask(self, e: Event) -> int:
        return _mask(self, e)

    def indices(self, mask: int) -> Iterator[int]:
        k = 0
        while mask:
            if mask & 1:
                yield k
            mask >>= 1
            k += 1

    def covers(self, obj: object) -> bool:
        return atoms_of(obj) <= set(self.atoms)


@lru_cache(maxsize=None)
def _atom_mask(n: int, i: int) -> int:
    # Worlds where atom i is true: blocks of 2**s ones every 2**(s+1) bits.
    s = n - 1 - i
    block = ((1 << (1 << s)) - 1) << (1 << s)
    period = 1 << (s + 1)
    reps = (1 << n) // period
    return block * (((1 << (period * reps)) - 1) // ((1 << period) - 1))


@lru_cache(maxsize=65536)
def _mask(u: Universe, e: Event) -> int:
    if isinstance(e, Atom):
        try:
            return _atom_mask(len(u.atoms), u.atoms.index(e.name))
        except ValueError:
            raise LogicError(f"unknown atom {e.name!r} (universe {u.atoms})") from None
    if isinstance(e, Const):
        return u.full if e.value else 0
    if isinstance(e, Not):
        return u.full ^ _mask(u, e.arg)
    if isinstance(e, And):
        m = u.full
        for a in e.args:
            m &= _mask(u, a)
        return m
    if isinstance(e, Or):
        m = 0
        for a in e.args:
            m |= _mask(u, a)
        return m
    raise TypeError(f"not an event: {e!r}")


def atoms_of(obj: object) -> frozenset[str]:
    if isinstance(obj, Event):
        return obj.atoms()
    if isinstance(obj, ConditionalEvent):
        return obj.consequent.atoms() | obj.antecedent.atoms()
    if isinstance(obj, (list, tuple, set, frozenset)):
        out: frozenset[str] = frozenset()
        for x in obj:
            out |= atoms_of(x)
        return out
    raise TypeError(f"cannot collect atoms of {obj!r}")


def _universe(universe: Universe | None, *objects: object) -> Universe:
    if universe is None:
        return Universe.of(*objects)
    missing = atoms_of(list(objects)) - set(universe.atoms)
    if missing:
        raise LogicError(f"atoms {sorted(missing)} are not declared in {universe.atoms}")
    return universe


# ---------------------------------------------------------------------------
# Bivalent semantics


def evaluate(e: Event, w: World | Mapping[str, bool]) -> bool:
    if isinstance(e, Atom):
        try:
            return bool(w[e.name])
        except KeyError:
            raise LogicError(f"atom {e.name!r} is not assigned") from None
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Not):
        return not evaluate(e.arg, w)
    if isinstance(e, And):
        return all(evaluate(a, w) for a in e.args)
    if isinstance(e, Or):
        return any(evaluate(a, w) for a in e.args)
    raise TypeError(f"not an event: {e!r}")


def is_impossible(e: Event, universe: Universe | None = None) -> bool:
    u = _universe(universe, e)
    return u.mask(e) == 0


def implies(a: Event, b: Event, universe: Universe | None = None) -> bool:
    """True iff ``a & ~b`` holds in no world."""
    u = _universe(universe, a, b)
    return u.mask(a) & ~u.mask(b) & u.full == 0


def equivalent_events(a: Event, b: Event, universe: Universe | None = None) -> bool:
    u = _universe(universe, a, b)
    return u.mask(a) == u.mask(b)


# ---------------------------------------------------------------------------
# Conditional events


class TrivalentValue(enum.Enum):
    TRUE = "T"
    FALSE = "F"
    VOID = "V"

    @property
    def numeric(self) -> Fraction:
        return _NUMERIC[self]

    @classmethod
    def from_numeric(cls, x: Fraction | int | str) -> TrivalentValue:
        x = Fraction(x)
        for v, n in _NUMERIC.items():
            if n == x:
                return v
        raise ValueError(f"{x} is not one of 1, 1/2, 0")

    def __str__(self) -> str:
        return self.value


_NUMERIC = {
    TrivalentValue.TRUE: Fraction(1),
    TrivalentValue.FALSE: Fraction(0),
    TrivalentValue.VOID: Fraction(1, 2),
}


@dataclass(frozen=True, slots=True)
class ConditionalEvent:
    """``consequent | antecedent``: true, false or void in each world."""

    consequent: Event
    antecedent: Event

    def __post_init__(self) -> None:
        if not isinstance(self.consequent, Event) or not isinstance(self.antecedent, Event):
            raise TypeError("conditional event components must be events")
        if is_impossible(self.antecedent):
            raise LogicError(f"antecedent {render_event(self.antecedent)} is impossible")

    @classmethod
    def of(cls, e: Event | ConditionalEvent) -> ConditionalEvent:
        """Plain events become ``E | T``."""
        if isinstance(e, ConditionalEvent):
            return e
        return cls(e, TOP)

    @property
    def is_unconditional(self) -> bool:
        return self.antecedent == TOP

    def masks(self, u: Universe) -> tuple[int, int, int]:
        """(true, false, void) world masks."""
        h = u.mask(self.antecedent)
        e = u.mask(self.consequent)
        return e & h, h & ~e & u.full, u.full ^ h

    def __str__(self) -> str:
        return render_conditional(self)


Conditional = Union[Event, ConditionalEvent]


@dataclass(frozen=True, slots=True)
class Undefined:
    """A trivalent compound with impossible antecedent (``∅|∅``): it does not exist."""

    reason: str

    def __str__(self) -> str:
        return f"undefined ({self.reason})"


def eval_trivalent(c: ConditionalEvent, w: World | Mapping[str, bool]) -> TrivalentValue:
    if not evaluate(c.antecedent, w):
        return TrivalentValue.VOID
    return TrivalentValue.TRUE if evaluate(c.consequent, w) else TrivalentValue.FALSE


def gn_implies(c1: ConditionalEvent, c2: ConditionalEvent, universe: Universe | None = None) -> bool:
    """Goodman-Nguyen inclusion: ``E1H1 ⊆ E2H2`` and ``¬E2H2 ⊆ ¬E1H1``."""
    u = _universe(universe, c1, c2)
    t1, f1, _ = c1.masks(u)
    t2, f2, _ = c2.masks(u)
    return t1 & ~t2 == 0 and f2 & ~f1 == 0


def equivalent(c1: ConditionalEvent, c2: ConditionalEvent, universe: Universe | None = None) -> bool:
    """Same trivalent value in every world."""
    u = _universe(universe, c1, c2)
    return c1.masks(u) == c2.masks(u)


def negate(c: ConditionalEvent) -> ConditionalEvent:
    return ConditionalEvent(_negation(c.consequent), c.antecedent)


def _negation(e: Event) -> Event:
    return e.arg if isinstance(e, Not) else Not(e)


def quasi_conjunction(fam: Sequence[ConditionalEvent]) -> ConditionalEvent:
    if not fam:
        raise ValueError("quasi conjunction of an empty family")
    if len(fam) == 1:
        return fam[0]
    parts = [Or((Not(c.antecedent), And((c.consequent, c.antecedent)))) for c in fam]
    return ConditionalEvent(And(tuple(parts)), Or(tuple(c.antecedent for c in fam)))


def df_conjunction(fam: Sequence[ConditionalEvent]) -> ConditionalEvent | Undefined:
    """Trivalent (Kleene) conjunction: true iff all true, false iff some false."""
    if not fam:
        raise ValueError("conjunction of an empty family")
    if len(fam) == 1:
        return fam[0]
    true_part = conjunction(And((c.consequent, c.antecedent)) for c in fam)
    false_part = disjunction(And((_negation(c.consequent), c.antecedent)) for c in fam)
    antecedent = Or((true_part, false_part))
    if is_impossible(antecedent):
        return Undefined("the conjunction has an impossible antecedent")
    return ConditionalEvent(true_part, antecedent)


def df_iterated(cons: Conditional, ante: Conditional) -> ConditionalEvent | Undefined:
    """Trivalent iterated conditional ``(B|K) |df (A|H) = B | AHK``."""
    cons = ConditionalEvent.of(cons)
    ante = ConditionalEvent.of(ante)
    parts: list[Event] = []
    for p in (ante.consequent, ante.antecedent, cons.antecedent):
        if p != TOP and p not in parts:
            parts.append(p)
    antecedent = conjunction(parts)
    if is_impossible(antecedent):
        return Undefined("the combined antecedent is impossible")
    return ConditionalEvent(cons.consequent, antecedent)


# ---------------------------------------------------------------------------
# Canonical text rendering: ~ & | T F, conditionals as (E given H)

_PREC = {Or: 1, And: 2}


def render_event(e: Event) -> str:
    if isinstance(e, Atom):
        return e.name
    if isinstance(e, Const):
        return "T" if e.value else "F"
    if isinstance(e, Not):
        inner = render_event(e.arg)
        return f"~{inner}" if isinstance(e.arg, (Atom, Const, Not)) else f"~({inner})"
    if isinstance(e, (And, Or)):
        op = " & " if isinstance(e, And) else " | "
        parts = []
        for a in e.args:
            s = render_event(a)
            parts.append(f"({s})" if isinstance(a, (And, Or)) else s)
        return op.join(parts)
    raise TypeError(f"not an event: {e!r}")


def render_conditional(c: Conditional) -> str:
    if isinstance(c, Event):
        return render_event(c)
    return f"({render_event(c.consequent)} given {render_event(c.antecedent)})"


def _math(e: Event, wrap: bool) -> str:
    s = render_event(e).replace(" & ", "∧").replace(" | ", "∨")
    return f"({s})" if wrap and isinstance(e, (And, Or)) else s


def render_bar(c: Conditional) -> str:
    """Bar notation for reports: ``B|~A``, ``AB`` written ``A∧B``."""
    if isinstance(c, Event):
        return _math(c, False)
    if c.antecedent == TOP:
        return _math(c.consequent, False)
    return f"{_math(c.consequent, True)}|{_math(c.antecedent, True)}"
