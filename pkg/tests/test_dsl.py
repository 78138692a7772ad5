from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condlogic.dsl import Definition, ParseError, Query, Script, parse_script, render_script, tokenize
from condlogic.events import TOP, atoms

from strategies import conditionals, events

A, B, C = atoms("A", "B", "C")
CORPUS = Path(__file__).parent / "corpus"


def parse(text):
    return parse_script(text)


def error(text):
    with pytest.raises(ParseError) as info:
        parse_script(text)
    return info.value


class TestTokens:
    def test_kinds(self):
        toks = tokenize("cond c := B given A # note\n")
        assert [t.kind for t in toks] == ["name", "name", "op", "name", "name", "name", "newline", "newline", "end"]

    def test_hyphenated(self):
        assert tokenize("pdt-weak")[0].text == "pdt-weak"

    def test_bad_character(self):
        with pytest.raises(ParseError) as info:
            tokenize("atoms A\nquery $")
        assert (info.value.line, info.value.column) == (2, 7)


class TestParse:
    def test_minimal(self):
        s = parse("atoms A B\ncond c := B given A\nquery coherent { c = 1/2 }")
        assert s.atoms == ("A", "B")
        assert s.queries == (Query("coherent", assignment=((B.given(A), Fraction(1, 2)),)),)

    def test_precedence(self):
        s = parse("atoms A B C\nevent e := ~A & B | C")
        assert s.definitions[0].value == ((~A & B) | C)

    def test_named_event_in_conditional(self):
        s = parse("atoms A B\nevent e := A | B\nassess (B given ~A) = 1/17\nassess e = 1")
        assert s.assessments[1] == ((A | B).given(TOP), Fraction(1))

    def test_bare_terms(self):
        s = parse("atoms A\nquery pconsistent {A, ~A}")
        assert s.queries[0].items == (A.given(TOP), (~A).given(TOP))

    def test_all_kinds(self):
        for path in sorted(CORPUS.glob("*.cl")):
            parse_script(path.read_text())

    def test_valid_modes(self):
        s = parse("atoms A B\nquery valid SSTT* {A} => B")
        assert s.queries[0].mode == "SSTT*"
        e = error("atoms A B\nquery valid XY {A} => B")
        assert "SS" in e.expected

    def test_weak_defaults(self):
        q = parse("atoms A B\nquery pdt-weak {A} A => B").queries[0]
        assert q.mode == "asymmetric" and q.hstar is None


class TestDiagnostics:
    def test_undefined_name(self):
        e = error("atoms A C\nquery pentails {c1, c2} => (C given A)")
        assert e.line == 2 and e.column == 17
        assert "c1" in e.message

    def test_range(self):
        e = error("atoms A\ncond c := A\nassess c = 3/2")
        assert e.line == 3 and "[0, 1]" in e.message

    def test_redeclaration(self):
        assert "already" in error("atoms A A").message
        assert "already" in error("atoms A\nevent A := A").message

    def test_too_many_atoms(self):
        with pytest.raises(ParseError):
            parse_script("atoms A B C", max_atoms=2)

    def test_impossible_antecedent(self):
        assert "impossible" in error("atoms A\ncond c := A given A & ~A").message

    def test_expected_set(self):
        e = error("atoms A\nfoo")
        assert "query" in e.expected
        assert str(e).startswith("line 2, column 1:")

    def test_unknown_query(self):
        assert error("atoms A\nquery nope {A}").expected


class TestRoundTrip:
    def test_corpus(self):
        for path in sorted(CORPUS.glob("*.cl")):
            s = parse_script(path.read_text())
            assert parse_script(render_script(s)) == s

    def test_idempotent(self):
        s = parse_script((CORPUS / "transitivity.cl").read_text())
        text = render_script(s)
        assert render_script(parse_script(text)) == text

    @settings(max_examples=60)
    @given(st.lists(conditionals(), min_size=1, max_size=3), conditionals(),
           st.lists(st.integers(0, 6), min_size=3, max_size=3))
    def test_generated(self, fam, target, nums):
        vals = tuple(Fraction(n, 6) for n in nums[:len(fam)])
        s = Script(
            atoms=("A", "B", "C"),
            assessments=tuple(zip(fam, vals)),
            queries=(
                Query("coherent"),
                Query("pentails", items=tuple(fam), target=target),
                Query("extend", assignment=tuple(zip(fam, vals)), target=target),
                Query("valid", items=tuple(fam), target=target, mode="TT"),
            ),
        )
        assert parse_script(render_script(s)) == s

    @given(events())
    def test_events(self, e):
        s = Script(atoms=("A", "B", "C"), definitions=(Definition("e", e),))
        assert parse_script(render_script(s)) == s
