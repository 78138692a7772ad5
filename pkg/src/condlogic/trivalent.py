"""Truth-functional trivalent logic over conditional events.

Values are :class:`~condlogic.events.TrivalentValue` (numerically 1, 1/2, 0).
Validity checks evaluate premises and conclusion world by world; no
probabilities are involved here.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .events import (
    Conditional,
    ConditionalEvent,
    TrivalentValue,
    Universe,
    World,
    _universe,
)

T, F, V = TrivalentValue.TRUE, TrivalentValue.FALSE, TrivalentValue.VOID


def kleene_and(a: TrivalentValue, b: TrivalentValue) -> TrivalentValue:
    return a if a.numeric <= b.numeric else b


def kleene_or(a: TrivalentValue, b: TrivalentValue) -> TrivalentValue:
    return a if a.numeric >= b.numeric else b


def kleene_not(a: TrivalentValue) -> TrivalentValue:
    return TrivalentValue.from_numeric(1 - a.numeric)


@dataclass(frozen=True)
class JeffreyParams:
    """The four free cells of the Jeffrey conditional; each is TRUE or VOID."""

    d1: TrivalentValue = V
    d2: TrivalentValue = V
    d3: TrivalentValue = V
    d4: TrivalentValue = V

    def __post_init__(self) -> None:
        for name in ("d1", "d2", "d3", "d4"):
            if getattr(self, name) not in (T, V):
                raise ValueError(f"{name} must be 1 or 1/2")

    def __str__(self) -> str:
        return " ".join(f"{k}={getattr(self, k).numeric}" for k in ("d1", "d2", "d3", "d4"))


def jeffrey_cond(a: TrivalentValue, b: TrivalentValue, p: JeffreyParams = JeffreyParams()) -> TrivalentValue:
    """Value of ``a -> b`` under the Jeffrey table with free cells ``p``."""
    table = {
        T: {T: T, V: p.d1, F: F},
        V: {T: p.d2, V: p.d3, F: F},
        F: {T: V, V: p.d4, F: V},
    }
    return table[a][b]


class ValidityMode(enum.Enum):
    SS = "SS"
    TT = "TT"
    SS_AND_TT = "SSTT"
    SS_AND_TT_STAR = "SSTT*"


@dataclass(frozen=True)
class Verdict:
    valid: bool
    witness: World | None = None

    def __post_init__(self) -> None:
        if not self.valid and self.witness is None:
            raise ValueError("an invalid verdict needs a countermodel world")


def _violations(mode: ValidityMode, premises: Sequence[ConditionalEvent],
                conclusion: ConditionalEvent, u: Universe) -> int:
    ct, cf, _ = conclusion.masks(u)
    masks = [p.masks(u) for p in premises]
    no_false = u.full
    all_true = u.full
    some_true = 0
    some_false = 0
    for t, f, _ in masks:
        no_false &= ~f
        all_true &= t
        some_true |= t
        some_false |= f
    no_false &= u.full
    ss = all_true & ~ct & u.full
    tt = no_false & cf
    if mode is ValidityMode.SS:
        return ss
    if mode is ValidityMode.TT:
        return tt
    if mode is ValidityMode.SS_AND_TT:
        return ss | tt
    # (i) some premise true, the rest void; (ii) conclusion false forces a false premise
    star_i = no_false & some_true & ~ct & u.full
    star_ii = cf & ~some_false & u.full
    return star_i | star_ii


def check_validity(mode: ValidityMode | str, premises: Sequence[Conditional],
                   conclusion: Conditional, universe: Universe | None = None) -> Verdict:
    """Trivalent validity of ``premises / conclusion``.

    The witness of an invalid inference is the lexicographically first world
    (in atom order) that violates the mode's condition.
    """
    mode = ValidityMode(mode) if isinstance(mode, str) else mode
    prem = [ConditionalEvent.of(p) for p in premises]
    concl = ConditionalEvent.of(conclusion)
    if not prem and mode is ValidityMode.SS_AND_TT_STAR:
        raise ValueError("the starred mode needs at least one premise")
    u = _universe(universe, prem, concl)
    bad = _violations(mode, prem, concl, u)
    if not bad:
        return Verdict(True)
    first = (bad & -bad).bit_length() - 1
    return Verdict(False, u.world(first))
