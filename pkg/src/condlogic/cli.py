"""Command-line runner: parse a script, run its queries, print a report.

Exit status: 0 when every query succeeded, 1 when some query failed, 2 on
a parse error (nothing is run).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Sequence

from . import __version__
from .coherence import Assessment, CoherenceVerdict, check_coherence, extension_interval
from .compound import ValueTable, _needed, biconditional_values, derive_previsions, frechet_bounds, iterated_table
from .dsl import ParseError, Query, Script, parse_script
from .entailment import (
    HE,
    EntailmentVerdict,
    PdtReport,
    _iterated_label,
    classify_case,
    deduction_theorem,
    deduction_theorem_generalized,
    general_import_export,
    p_consistent,
    p_entails,
    weak_deduction,
)
from .events import BOTTOM, MAX_ATOMS, TOP, _universe, render_bar
from .rational import Interval, fmt
from .trivalent import check_validity

SCHEMA = "condlogic.report/1"


def _q(x: Fraction | Interval) -> Any:
    if isinstance(x, Interval):
        return [fmt(x.lo), fmt(x.hi)]
    return fmt(x)


def _mu(x: Fraction | Interval) -> str:
    return str(x) if isinstance(x, Interval) else fmt(x)


@dataclass(frozen=True)
class Record:
    index: int
    line: int
    query: str
    status: str  # "ok" or "error"
    text: str
    result: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"index": self.index, "line": self.line, "query": self.query, "status": self.status,
                "text": self.text, "result": self.result}

    @classmethod
    def from_json(cls, d: dict) -> Record:
        return cls(d["index"], d["line"], d["query"], d["status"], d["text"], d["result"])


@dataclass(frozen=True)
class Report:
    records: tuple[Record, ...]
    cross_oracle: bool = True

    @property
    def ok(self) -> bool:
        return all(r.status == "ok" for r in self.records)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "engine": {"name": "condlogic", "version": __version__, "cross_oracle": self.cross_oracle},
            "results": [r.to_json() for r in self.records],
        }

    @classmethod
    def from_json(cls, d: dict) -> Report:
        if d.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {d.get('schema')!r}")
        return cls(tuple(Record.from_json(r) for r in d["results"]), d["engine"]["cross_oracle"])


def render(report: Report, format: str = "text") -> str:
    if format == "json":
        return json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n"
    if format != "text":
        raise ValueError(f"unknown format {format!r}")
    return "".join(r.text + "\n" for r in report.records)


# ---------------------------------------------------------------------------
# Query handlers: each returns (text line, JSON result)


class QueryError(ValueError):
    pass


def _assessment(script: Script, q: Query) -> Assessment:
    pairs = q.assignment if q.assignment is not None else script.assessments
    if not pairs:
        raise QueryError("no assessment: add 'assess' lines or a braced assignment list")
    return Assessment([c for c, _ in pairs], [v for _, v in pairs])


def _verdict_json(v: CoherenceVerdict) -> dict:
    return {
        "coherent": v.coherent,
        "reason": v.reason,
        "layers": [
            {
                "indices": list(layer.indices),
                "points": [[fmt(x) for x in p.coords] for p in layer.points],
                "weights": None if layer.weights is None else [fmt(w) for w in layer.weights],
            }
            for layer in v.layers
        ],
    }


def _lambda(v: CoherenceVerdict) -> str:
    parts = ["(" + ", ".join(fmt(w) for w in ws) + ")" for ws in v.certificate]
    return "; ".join(parts)


def q_coherent(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    a = _assessment(script, q)
    v = check_coherence(a.family, a.values)
    if v.coherent:
        text = f"COHERENT (certificate: λ = {_lambda(v)})"
    else:
        text = f"INCOHERENT ({v.reason})"
    return text, {"assessment": [[render_bar(c), fmt(x)] for c, x in a.items()], **_verdict_json(v)}


def q_extend(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    a = _assessment(script, q)
    ext = extension_interval(a.family, a.values, q.target)  # type: ignore[arg-type]
    return f"EXTENSION {ext.interval}", {
        "target": render_bar(q.target),  # type: ignore[arg-type]
        "interval": _q(ext.interval),
        "lower_certificate": _verdict_json(ext.lower),
        "upper_certificate": _verdict_json(ext.upper),
    }


def q_pconsistent(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    ok = p_consistent(q.items)
    return ("P-CONSISTENT" if ok else "NOT P-CONSISTENT"), {"p_consistent": ok}


def _entailment_json(v: EntailmentVerdict) -> dict:
    if v.entails and v.witness == HE:
        witness: dict = {"type": "antecedent-implies-consequent"}
    elif v.entails:
        witness = {"type": "quasi-conjunction", "subset": [i + 1 for i in v.witness]}  # type: ignore[union-attr]
    else:
        witness = {"type": "countermodel", "values": [fmt(x) for x in v.witness.values]}  # type: ignore[union-attr]
        if v.certificate is not None:
            witness["certificate"] = _verdict_json(v.certificate)
    return {"entails": v.entails, "witness": witness, "replayed": v.replay()}


def q_pentails(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    v = p_entails(q.items, q.target, cross_oracle=cross)  # type: ignore[arg-type]
    word = "yes" if v.entails else "no"
    return f"pentails: {word} ({v.describe_witness()})", _entailment_json(v)


def q_valid(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    v = check_validity(q.mode, q.items, q.target)  # type: ignore[arg-type]
    if v.valid:
        return f"VALID ({q.mode})", {"mode": q.mode, "valid": True}
    w = ", ".join(f"{a}={int(b)}" for a, b in zip(v.witness.atoms, v.witness.values))  # type: ignore[union-attr]
    return f"INVALID ({q.mode}; witness {w})", {"mode": q.mode, "valid": False,
                                                "witness": {a: b for a, b in v.witness.as_dict().items()}}  # type: ignore[union-attr]


def _pdt_json(r: PdtReport) -> dict:
    return {
        "holds": r.holds,
        "hypotheses": [{"name": n, "holds": ok} for n, ok in r.hypotheses],
        "conclusions": [{"conclusion": c.label, "certified": c.certified, "detail": c.detail}
                        for c in r.conclusions],
        "equivalence": None if r.equivalence is None else list(r.equivalence),
    }


def q_pdt(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    first, second = q.first, q.second
    if first.antecedent == TOP and second.antecedent == TOP:  # type: ignore[union-attr]
        r = deduction_theorem(q.items, first.consequent, second.consequent, cross)  # type: ignore[union-attr]
    else:
        r = deduction_theorem_generalized(q.items, first, second, cross)  # type: ignore[arg-type]
    return f"PDT: {r}", _pdt_json(r)


def q_pdt_weak(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    hstar = q.hstar if q.hstar is not None else BOTTOM
    r = weak_deduction(q.items, q.first.consequent, q.second.consequent, hstar, q.mode, cross)  # type: ignore[union-attr]
    return f"PDT-WEAK ({q.mode}): {r}", _pdt_json(r)


def q_gie(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    r = general_import_export(q.items, q.target, cross)  # type: ignore[arg-type]
    return f"GIE: {r}", {
        "status": r.status,
        "entails": r.entailment.entails,
        "h_consistent": r.h_consistent,
        "left": r.left_label,
        "left_prevision": None if r.left is None else _q(r.left.mu),
        "right_prevision": None if r.right is None else _q(r.right.mu),
        "reason": r.reason,
    }


def q_classify(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    c = classify_case(q.items, q.target, cross)  # type: ignore[arg-type]
    return f"CASE {c.label}", {"case": c.label, "entails": c.entails, "h_consistent": c.h_consistent,
                               "h_entails_e": c.h_entails_e}


def q_conj_table(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    a = _assessment(script, q)
    fam = list(q.items)
    derived = derive_previsions(fam, a)
    points = {s: v for s, v in derived.items() if isinstance(v, Fraction)}
    full = frozenset(range(len(fam)))
    u = _universe(None, fam, list(a.family))
    missing = _needed(fam, u) - set(points) - {full}
    if missing:
        raise QueryError("the assessment does not fix the previsions of "
                         + ", ".join("{" + ",".join(str(i + 1) for i in sorted(s)) + "}" for s in missing))
    table = ValueTable(tuple(fam), u, points)
    own = derived.get(full)
    rows = [(lab, "z" if v is None else fmt(v)) for lab, v in table.rows()]
    head = "∧".join(f"({render_bar(c)})" if c.antecedent != TOP else render_bar(c) for c in fam)
    body = ", ".join(f"{lab}: {v}" for lab, v in rows)
    own_text = "undetermined" if own is None else _mu(own)
    return f"CONJUNCTION {head} = {{{body}}}; prevision z = {own_text}", {
        "rows": [{"constituent": lab, "value": v} for lab, v in rows],
        "prevision": None if own is None else _q(own),
    }


def q_iterated_prevision(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    a = _assessment(script, q)
    t = iterated_table(q.target, list(q.items), assessment=a)  # type: ignore[arg-type]
    label = _iterated_label(t.consequent, list(t.antecedent))
    out: dict = {"iterated": label, "mu": _q(t.mu), "note": t.note}
    if not isinstance(t.mu, Interval):
        out["rows"] = [{"constituent": lab, "value": fmt(v)} for lab, v in t.rows()]
    text = f"ITERATED {label}: mu = {_mu(t.mu)}"
    if t.note:
        text += f" ({t.note})"
    return text, out


def q_frechet(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    b = frechet_bounds(q.numbers)
    return f"FRECHET {b}", {"bounds": _q(b)}


def q_biconditional(script: Script, q: Query, cross: bool) -> tuple[str, dict]:
    z, mu = biconditional_values(*q.numbers)
    return f"BICONDITIONAL z = {fmt(z)}, mu = {fmt(mu)}", {"z": fmt(z), "mu": fmt(mu)}


HANDLERS: dict[str, Callable[[Script, Query, bool], tuple[str, dict]]] = {
    "coherent": q_coherent,
    "extend": q_extend,
    "pconsistent": q_pconsistent,
    "pentails": q_pentails,
    "valid": q_valid,
    "pdt": q_pdt,
    "pdt-weak": q_pdt_weak,
    "gie": q_gie,
    "classify": q_classify,
    "conj-table": q_conj_table,
    "iterated-prevision": q_iterated_prevision,
    "frechet": q_frechet,
    "biconditional": q_biconditional,
}


def run(script: Script, cross_oracle: bool = True) -> Report:
    """Run every query in order; a failing query becomes an error record."""
    records = []
    for i, q in enumerate(script.queries):
        try:
            text, result = HANDLERS[q.kind](script, q, cross_oracle)
            records.append(Record(i, q.line, q.kind, "ok", text, result))
        except (ValueError, ArithmeticError, AssertionError) as exc:
            kind = type(exc).__name__
            records.append(Record(i, q.line, q.kind, "error", f"ERROR {kind}: {exc}",
                                  {"error": {"type": kind, "message": str(exc)}}))
    return Report(tuple(records), cross_oracle)


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="condlogic", description=__doc__.splitlines()[0])
    parser.add_argument("script", nargs="?", default="-", help="script file, or - for stdin (default)")
    parser.add_argument("--json", action="store_true", help="print the schema-versioned JSON report")
    parser.add_argument("--max-atoms", type=int, default=MAX_ATOMS, metavar="N",
                        help=f"reject scripts declaring more than N atoms (default {MAX_ATOMS})")
    parser.add_argument("--no-cross-oracle", action="store_true",
                        help="skip the coherence cross-check of each p-entailment verdict")
    parser.add_argument("--version", action="version", version=f"condlogic {__version__}")
    args = parser.parse_args(argv)

    if args.script == "-":
        text = sys.stdin.read()
    else:
        with open(args.script, encoding="utf-8") as fh:
            text = fh.read()
    try:
        script = parse_script(text, max_atoms=args.max_atoms)
    except ParseError as exc:
        name = "<stdin>" if args.script == "-" else args.script
        print(f"{name}: {exc}", file=sys.stderr)
        return 2
    report = run(script, cross_oracle=not args.no_cross_oracle)
    sys.stdout.write(render(report, "json" if args.json else "text"))
    return 0 if report.ok else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
