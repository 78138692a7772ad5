"""p-consistency, p-entailment and the deduction theorems built on them.

p-entailment is decided by the quasi-conjunction search: ``F`` entails
``E|H`` when ``H`` implies ``E`` or some nonempty subfamily has a quasi
conjunction included (Goodman-Nguyen) in ``E|H``. The equivalent coherence
characterisation (the assessment ``1, ..., 1, 0`` on ``F + [E|H]`` is not
coherent) runs alongside as a cross-check unless switched off.

Plain events are treated throughout as conditionals with antecedent ``T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

from .coherence import Assessment, CoherenceVerdict, check_coherence, extension_interval
from .compound import IteratedTable, Undetermined, derive_previsions, iterated_table, reduce_pair_special
from .events import (
    BOTTOM,
    TOP,
    And,
    ConditionalEvent,
    Conditional,
    Event,
    LogicError,
    Or,
    Universe,
    _universe,
    gn_implies,
    implies,
    is_impossible,
    quasi_conjunction,
    render_bar,
    render_event,
)
from .rational import Interval, fmt

HE = "H⊆E"

ONE = Fraction(1)


class EntailmentError(ValueError):
    """A precondition (usually p-consistency of the premises) fails."""


class OracleDisagreement(AssertionError):
    """The two characterisations of p-entailment gave different answers."""


class TheoremViolation(AssertionError):
    """A relation the theory guarantees did not hold on a concrete instance."""


def _fam(fam: Sequence[Conditional]) -> list[ConditionalEvent]:
    return [ConditionalEvent.of(c) for c in fam]


def _ones(n: int) -> list[Fraction]:
    return [ONE] * n


def _family_text(fam: Sequence[ConditionalEvent]) -> str:
    return "{" + ", ".join(render_bar(c) for c in fam) + "}"


def p_consistent(fam: Sequence[Conditional], universe: Universe | None = None) -> bool:
    """Is the assessment giving every member probability 1 coherent?

    The empty family is p-consistent.
    """
    fam = _fam(fam)
    if not fam:
        return True
    return check_coherence(fam, _ones(len(fam)), universe).coherent


# ---------------------------------------------------------------------------
# p-entailment


Witness = Union[str, tuple[int, ...], Assessment]


@dataclass(frozen=True)
class EntailmentVerdict:
    """Outcome of ``premises => conclusion``.

    ``witness`` is ``"H⊆E"`` or a tuple of premise indices whose quasi
    conjunction is included in the conclusion when the entailment holds;
    otherwise a coherent assessment with every premise at 1 and the
    conclusion below 1 (``certificate`` is its coherence verdict).
    """

    entails: bool
    premises: tuple[ConditionalEvent, ...]
    conclusion: ConditionalEvent
    witness: Witness
    certificate: CoherenceVerdict | None = field(default=None, repr=False, compare=False)

    def replay(self) -> bool:
        c = self.conclusion
        u = _universe(None, list(self.premises) + [c])
        if self.entails:
            if self.witness == HE:
                return implies(c.antecedent, c.consequent, u)
            sub = [self.premises[i] for i in self.witness]  # type: ignore[union-attr]
            return bool(sub) and gn_implies(quasi_conjunction(sub), c, u)
        a = self.witness
        if not isinstance(a, Assessment):
            return False
        if list(a.family) != list(self.premises) + [c]:
            return False
        if any(v != 1 for v in a.values[:-1]) or a.values[-1] >= 1:
            return False
        return check_coherence(a.family, a.values, u).coherent

    def describe_witness(self) -> str:
        if self.entails:
            if self.witness == HE:
                return HE
            sub = [self.premises[i] for i in self.witness]  # type: ignore[union-attr]
            return f"QC{_family_text(sub)} ⊆ {render_bar(self.conclusion)}"
        vals = ", ".join(fmt(v) for v in self.witness.values)  # type: ignore[union-attr]
        return f"countermodel ({vals})"

    def __bool__(self) -> bool:
        return self.entails


def qc_witness(fam: Sequence[Conditional], conclusion: Conditional,
               universe: Universe | None = None) -> Witness | None:
    """The quasi-conjunction characterisation alone: a witness or ``None``.

    Subsets are tried by increasing size, so the witness is minimal.
    """
    fam = _fam(fam)
    c = ConditionalEvent.of(conclusion)
    u = _universe(universe, fam, c)
    if implies(c.antecedent, c.consequent, u):
        return HE
    for r in range(1, len(fam) + 1):
        for sub in combinations(range(len(fam)), r):
            if gn_implies(quasi_conjunction([fam[i] for i in sub]), c, u):
                return sub
    return None


def incoherent_at_zero(fam: Sequence[Conditional], conclusion: Conditional,
                       universe: Universe | None = None) -> bool:
    """The coherence characterisation: is ``(1, ..., 1, 0)`` incoherent?"""
    fam = _fam(fam)
    c = ConditionalEvent.of(conclusion)
    return not check_coherence(fam + [c], _ones(len(fam)) + [Fraction(0)], universe).coherent


def p_entails(fam: Sequence[Conditional], conclusion: Conditional, cross_oracle: bool = True,
              universe: Universe | None = None) -> EntailmentVerdict:
    """Decide ``fam => conclusion``; ``fam`` must be p-consistent."""
    fam = _fam(fam)
    c = ConditionalEvent.of(conclusion)
    u = _universe(universe, fam, c)
    if not p_consistent(fam, u):
        raise EntailmentError(f"the premises {_family_text(fam)} are not p-consistent")
    witness = qc_witness(fam, c, u)
    entails = witness is not None
    if cross_oracle and entails != incoherent_at_zero(fam, c, u):
        raise OracleDisagreement(
            f"{_family_text(fam)} => {render_bar(c)}: the quasi-conjunction test says "
            f"{'yes' if entails else 'no'} but the coherence test disagrees"
        )
    if entails:
        return EntailmentVerdict(True, tuple(fam), c, witness)  # type: ignore[arg-type]
    ext = extension_interval(fam, _ones(len(fam)), c, u)
    counter = Assessment(fam + [c], _ones(len(fam)) + [ext.interval.lo])
    return EntailmentVerdict(False, tuple(fam), c, counter, ext.lower)


def _entails(fam: Sequence[ConditionalEvent], c: Conditional, cross_oracle: bool, u: Universe) -> bool:
    """``p_entails`` that answers no (rather than raising) on p-inconsistent premises."""
    if not p_consistent(fam, u):
        return False
    return p_entails(fam, c, cross_oracle, u).entails


@dataclass(frozen=True)
class ConverseResult:
    """``Gamma + [A]`` p-consistent implies ``Gamma + [A] => B``."""

    applicable: bool
    holds: bool

    def __bool__(self) -> bool:
        return self.holds


def converse_check(gamma: Sequence[Conditional], a: Event, b: Event, cross_oracle: bool = True) -> ConverseResult:
    """From ``Gamma => B|A``, check that ``Gamma + [A]`` entails ``B`` when
    it is p-consistent (vacuously true otherwise)."""
    gamma = _fam(gamma)
    u = _universe(None, gamma, a, b)
    if not p_entails(gamma, ConditionalEvent(b, a), cross_oracle, u).entails:
        raise EntailmentError(f"the premises do not entail {render_bar(ConditionalEvent(b, a))}")
    ext = gamma + [ConditionalEvent.of(a)]
    if not p_consistent(ext, u):
        return ConverseResult(False, True)
    return ConverseResult(True, p_entails(ext, b, cross_oracle, u).entails)


# ---------------------------------------------------------------------------
# Deduction theorems


@dataclass(frozen=True)
class Conclusion:
    label: str
    certified: bool
    detail: str = ""


@dataclass(frozen=True)
class PdtReport:
    """Checked hypotheses and, when they all hold, the certified conclusions.

    ``equivalence`` records the three assertions that must agree: the two
    hypotheses together, entailment of the conjunction, and entailment of
    each part separately.
    """

    hypotheses: tuple[tuple[str, bool], ...]
    conclusions: tuple[Conclusion, ...] = ()
    equivalence: tuple[bool, bool, bool] | None = None

    @property
    def holds(self) -> bool:
        return all(ok for _, ok in self.hypotheses)

    @property
    def failing(self) -> tuple[str, ...]:
        return tuple(name for name, ok in self.hypotheses if not ok)

    def __str__(self) -> str:
        if not self.holds:
            return "hypothesis fails: " + "; ".join(self.failing)
        return "certified: " + ", ".join(c.label for c in self.conclusions)


def _require_possible(*events: Event) -> None:
    for e in events:
        if is_impossible(e):
            raise LogicError(f"{render_event(e)} is impossible")


def _hypotheses(gamma: list[ConditionalEvent], first: ConditionalEvent, second: ConditionalEvent,
                cross_oracle: bool, u: Universe) -> tuple[tuple[str, bool], ...]:
    g = _family_text(gamma)
    ext = gamma + [first]
    consistent = p_consistent(ext, u)
    h1 = consistent and _entails(gamma, first, cross_oracle, u)
    h2 = consistent and _entails(ext, second, cross_oracle, u)
    f, s = render_bar(first), render_bar(second)
    return (
        (f"{g} ∪ {{{f}}} p-consistent", consistent),
        (f"{g} ⇒ₚ {f}", h1),
        (f"{g} ∪ {{{f}}} ⇒ₚ {s}", h2),
    )


def _certify(gamma: list[ConditionalEvent], targets: Sequence[ConditionalEvent], cross_oracle: bool,
             u: Universe) -> tuple[Conclusion, ...]:
    out = []
    for t in targets:
        v = p_entails(gamma, t, cross_oracle, u)
        if not v.entails:
            raise TheoremViolation(f"hypotheses hold but {render_bar(t)} is not entailed")
        out.append(Conclusion(render_bar(t), True, v.describe_witness()))
    return tuple(out)


def deduction_theorem(gamma: Sequence[Conditional], a: Event, b: Event, cross_oracle: bool = True) -> PdtReport:
    """If ``Gamma => A`` and ``Gamma + [A] => B`` (with ``Gamma + [A]``
    p-consistent) then ``Gamma`` entails ``B|A``, ``A|B`` and ``AB|(A v B)``."""
    _require_possible(a, b)
    gamma = _fam(gamma)
    u = _universe(None, gamma, a, b)
    ca, cb = ConditionalEvent.of(a), ConditionalEvent.of(b)
    hyps = _hypotheses(gamma, ca, cb, cross_oracle, u)
    equivalence = None
    if hyps[0][1]:
        first = hyps[1][1] and hyps[2][1]
        second = _entails(gamma, ConditionalEvent.of(And((a, b))), cross_oracle, u)
        third = hyps[1][1] and _entails(gamma, cb, cross_oracle, u)
        equivalence = (first, second, third)
        if len(set(equivalence)) != 1:
            raise TheoremViolation(f"equivalence of the three assertions fails: {equivalence}")
    if not all(ok for _, ok in hyps):
        return PdtReport(hyps, (), equivalence)
    targets = [ConditionalEvent(b, a), ConditionalEvent(a, b), ConditionalEvent(And((a, b)), Or((a, b)))]
    return PdtReport(hyps, _certify(gamma, targets, cross_oracle, u), equivalence)


def _iterated_label(cons: ConditionalEvent, ante: Sequence[ConditionalEvent]) -> str:
    def part(c: ConditionalEvent) -> str:
        s = render_bar(c)
        plain = c.antecedent == TOP and not isinstance(c.consequent, (And, Or))
        return s if plain else f"({s})"
    ante_text = "∧".join(part(c) for c in ante)
    if len(ante) > 1:
        ante_text = f"({ante_text})"
    return f"{part(cons)}|{ante_text}"


def _conjunction_entailed(gamma: list[ConditionalEvent], first: ConditionalEvent, second: ConditionalEvent,
                          cross_oracle: bool, u: Universe) -> tuple[bool, str]:
    """Does ``Gamma`` give the conjunction ``first & second`` prevision 1?"""
    reduced = reduce_pair_special(first, second)
    if reduced is not None:
        return _entails(gamma, reduced, cross_oracle, u), f"reduces to {render_bar(reduced)}"
    if not gamma or not p_consistent(gamma, u):
        return False, ""
    derived = derive_previsions([first, second], Assessment(gamma, _ones(len(gamma))), universe=u)
    z = derived.get(frozenset((0, 1)))
    # a conjunction at 1 forces both parts to 1, so an underived value is not 1
    return isinstance(z, Fraction) and z == 1, ""


def deduction_theorem_generalized(gamma: Sequence[Conditional], ah: Conditional, bk: Conditional,
                                  cross_oracle: bool = True) -> PdtReport:
    """The same with conditional events ``A|H``, ``B|K``; conclusions are the
    iterated conditionals ``(B|K)|(A|H)`` and ``(A|H)|(B|K)`` at prevision 1."""
    first, second = ConditionalEvent.of(ah), ConditionalEvent.of(bk)
    _require_possible(And((first.consequent, first.antecedent)), And((second.consequent, second.antecedent)))
    gamma = _fam(gamma)
    u = _universe(None, gamma, first, second)
    hyps = _hypotheses(gamma, first, second, cross_oracle, u)
    equivalence = None
    if hyps[0][1]:
        conj, _ = _conjunction_entailed(gamma, first, second, cross_oracle, u)
        third = hyps[1][1] and _entails(gamma, second, cross_oracle, u)
        equivalence = (hyps[1][1] and hyps[2][1], conj, third)
        if len(set(equivalence)) != 1:
            raise TheoremViolation(f"equivalence of the three assertions fails: {equivalence}")
    if not all(ok for _, ok in hyps):
        return PdtReport(hyps, (), equivalence)
    ones = Assessment(gamma, _ones(len(gamma)))
    out = []
    for cons, ante in ((second, first), (first, second)):
        t = iterated_table(cons, [ante], assessment=ones, universe=u)
        if not _prevision_one(t):
            raise TheoremViolation(f"{_iterated_label(cons, [ante])} has prevision {_mu_text(t)}")
        out.append(Conclusion(_iterated_label(cons, [ante]), True, "prevision 1/1"))
    _, note = _conjunction_entailed(gamma, first, second, cross_oracle, u)
    if note:
        out.append(Conclusion(render_bar(reduce_pair_special(first, second)), True, note))  # type: ignore[arg-type]
    return PdtReport(hyps, tuple(out), equivalence)


def _prevision_one(t: IteratedTable) -> bool:
    return not isinstance(t.mu, Interval) and t.mu == 1


WEAK_MODES = ("asymmetric", "symmetric")


def weak_deduction(gamma: Sequence[Conditional], a: Event, b: Event, hstar: Event = BOTTOM,
                   mode: str = "asymmetric", cross_oracle: bool = True) -> PdtReport:
    """Weak deduction theorems with the antecedent ``A v H*`` (asymmetric,
    concluding ``B|A``) or ``A v B v H*`` (symmetric, concluding ``B|A`` and
    ``A|B``)."""
    if mode not in WEAK_MODES:
        raise ValueError(f"mode must be one of {WEAK_MODES}, got {mode!r}")
    _require_possible(a, b)
    gamma = _fam(gamma)
    u = _universe(None, gamma, a, b, hstar)
    parts = [a] if mode == "asymmetric" else [a, b]
    if hstar != BOTTOM:
        parts.append(hstar)
    ante = parts[0] if len(parts) == 1 else Or(tuple(parts))
    first, second = ConditionalEvent(a, ante), ConditionalEvent(b, ante)
    hyps = _hypotheses(gamma, first, second, cross_oracle, u)
    if not all(ok for _, ok in hyps):
        return PdtReport(hyps)
    targets = [ConditionalEvent(b, a)]
    if mode == "symmetric":
        targets.append(ConditionalEvent(a, b))
    return PdtReport(hyps, _certify(gamma, targets, cross_oracle, u))


# ---------------------------------------------------------------------------
# General Import-Export principle


SATISFIED = "satisfied"
NOT_ESTABLISHED = "not established"


@dataclass(frozen=True)
class GieReport:
    """Import-export status of ``(E|H) | C(F)`` against ``E | (H & C(F))``."""

    family: tuple[ConditionalEvent, ...]
    conclusion: ConditionalEvent
    entailment: EntailmentVerdict
    h_consistent: bool
    status: str
    left: IteratedTable | None = field(default=None, repr=False)
    right: IteratedTable | None = field(default=None, repr=False)
    reason: str = ""

    @property
    def satisfied(self) -> bool:
        return self.status == SATISFIED

    @property
    def left_label(self) -> str:
        return _iterated_label(self.conclusion, self.family)

    def __str__(self) -> str:
        if self.satisfied:
            return "satisfied, both sides 1"
        return f"not established ({self.reason})"


def _mu_text(t: IteratedTable | None) -> str:
    if t is None:
        return "undetermined"
    return str(t.mu) if isinstance(t.mu, Interval) else fmt(t.mu)


def general_import_export(fam: Sequence[Conditional], conclusion: Conditional,
                          cross_oracle: bool = True) -> GieReport:
    """Check the two sufficient conditions (``F => E|H`` and ``F + [H]``
    p-consistent). When both hold, both iterated conditionals are rebuilt
    with every premise at 1 and verified to be constantly 1. When the
    entailment fails, the left side is evaluated at the countermodel.
    """
    fam = _fam(fam)
    c = ConditionalEvent.of(conclusion)
    u = _universe(None, fam, c)
    verdict = p_entails(fam, c, cross_oracle, u)
    h = ConditionalEvent.of(c.antecedent)
    h_ok = p_consistent(fam + [h], u)
    cons_e = ConditionalEvent.of(c.consequent)
    label = _iterated_label(c, fam)
    if verdict.entails and h_ok:
        left = iterated_table(c, fam, assessment=Assessment(fam, _ones(len(fam))), universe=u)
        right = iterated_table(cons_e, fam + [h], assessment=Assessment(fam + [h], _ones(len(fam) + 1)),
                               universe=u)
        for t in (left, right):
            if not (_prevision_one(t) and t.is_constant(1)):
                raise TheoremViolation(f"{label}: an iterated conditional is not constantly 1")
        return GieReport(tuple(fam), c, verdict, h_ok, SATISFIED, left, right)
    if verdict.entails:
        reason = f"{_family_text(fam + [h])} is not p-consistent"
        return GieReport(tuple(fam), c, verdict, h_ok, NOT_ESTABLISHED, reason=reason)
    counter: Assessment = verdict.witness  # type: ignore[assignment]
    left = iterated_table(c, fam, assessment=counter, universe=u)
    try:
        right = iterated_table(cons_e, fam + [h], assessment=counter, universe=u)
    except (Undetermined, LogicError, ValueError):
        right = None
    if _prevision_one(left):
        raise TheoremViolation(f"{label} has prevision 1 at a countermodel")
    reason = f"{label} ≠ 1"
    return GieReport(tuple(fam), c, verdict, h_ok, NOT_ESTABLISHED, left, right, reason)


# ---------------------------------------------------------------------------
# Case taxonomy


@dataclass(frozen=True)
class Classification:
    """``a.*``: ``F + [H]`` not p-consistent; ``b.*``: it is."""

    label: str
    entails: bool
    h_consistent: bool
    h_entails_e: bool | None

    def __str__(self) -> str:
        return self.label


def classify_case(fam: Sequence[Conditional], conclusion: Conditional, cross_oracle: bool = True) -> Classification:
    fam = _fam(fam)
    c = ConditionalEvent.of(conclusion)
    u = _universe(None, fam, c)
    entails = p_entails(fam, c, cross_oracle, u).entails
    ext = fam + [ConditionalEvent.of(c.antecedent)]
    if not p_consistent(ext, u):
        return Classification("a.2" if entails else "a.1", entails, False, None)
    second = p_entails(ext, c.consequent, cross_oracle, u).entails
    if entails and not second:
        raise TheoremViolation("F entails E|H and F + [H] is p-consistent, yet F + [H] does not entail E")
    label = "b.3" if entails else "b.2" if second else "b.1"
    return Classification(label, entails, True, second)
