"""Corpus loading, validation, and summary statistics.

A corpus is a JSON-lines file of problem records: the prose
description, its tagged entity spans, the gold tagged formulation, and
the frozen canonical table that formulation must reproduce. Loading
checks every record and collects failures into a rejection report
instead of dropping them, so a corrupted line is always visible.

Three layers of checking:

  * schema: required fields, known domain and split, entity spans that
    point at the text they claim to cover;
  * annotations: the declarative rules a gold formulation must satisfy
    (role completeness per constraint kind, ratio limits written as
    fractions, every variable resolving against a tagged VAR span);
  * self-consistency: parse the formulation, canonicalize, and compare
    against the stored table cell by cell within 1e-4.
"""

from __future__ import annotations

import json
from collections import Counter
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .canonical import CanonicalForm, canonicalize, normalize_variable
from .errors import (
    CanonicalizeError,
    EmptyCorpusError,
    LpwbError,
    NumberParseError,
    SchemaError,
)
from .ir import Constraint, ConstraintKind, Declaration, Objective, parse_ir
from .numparse import normalize_number
from .tagging import EntitySpan, Lexicons

SOURCE_DOMAINS = frozenset({"advertising", "investment", "sales"})
TARGET_DOMAINS = frozenset({"production", "science", "transportation"})
DOMAINS = SOURCE_DOMAINS | TARGET_DOMAINS
SPLITS = ("train", "dev", "test")

TOLERANCE = 1e-4

_FIELDS = {
    "id", "domain", "description", "entities",
    "gold_ir", "gold_canonical", "split", "note",
}


@dataclass
class ProblemRecord:
    """One word problem with its gold annotations."""

    id: str
    domain: str
    description: str
    entities: list[EntitySpan]
    gold_ir: str
    gold_canonical: CanonicalForm
    split: str | None = None
    note: str | None = None

    def to_json_dict(self) -> dict:
        data = {
            "id": self.id,
            "domain": self.domain,
            "description": self.description,
            "entities": [e.to_json_dict() for e in self.entities],
            "gold_ir": self.gold_ir,
            "gold_canonical": self.gold_canonical.to_json_dict(),
        }
        if self.split is not None:
            data["split"] = self.split
        if self.note is not None:
            data["note"] = self.note
        return data

    @classmethod
    def from_json_dict(cls, data: object) -> "ProblemRecord":
        """Build a record from one decoded corpus line.

        Raises :class:`SchemaError` naming the offending field; the
        caller attaches the line number.
        """
        if not isinstance(data, dict):
            raise SchemaError("record is not a JSON object")
        unknown = sorted(set(data) - _FIELDS)
        if unknown:
            raise SchemaError(f"unexpected field {unknown[0]!r}", field=unknown[0])
        for name in ("id", "domain", "description", "gold_ir"):
            value = data.get(name)
            if not isinstance(value, str) or not value:
                raise SchemaError(f"{name} must be a non-empty string", field=name)
        if data["domain"] not in DOMAINS:
            raise SchemaError(f"unknown domain {data['domain']!r}", field="domain")
        split = data.get("split")
        if split is not None and split not in SPLITS:
            raise SchemaError(f"unknown split {split!r}", field="split")
        note = data.get("note")
        if note is not None and not isinstance(note, str):
            raise SchemaError("note must be a string", field="note")

        raw_spans = data.get("entities")
        if not isinstance(raw_spans, list):
            raise SchemaError("entities must be a list", field="entities")
        try:
            entities = [EntitySpan.from_json_dict(e) for e in raw_spans]
        except LpwbError as exc:
            raise SchemaError(str(exc), field="entities") from exc
        description = data["description"]
        for span in entities:
            if not 0 <= span.start < span.end <= len(description):
                raise SchemaError(
                    f"entity span {span.start}..{span.end} out of bounds",
                    field="entities",
                )
            if description[span.start:span.end] != span.text:
                raise SchemaError(
                    f"entity text {span.text!r} does not match the "
                    f"description at offset {span.start}",
                    field="entities",
                )

        if "gold_canonical" not in data:
            raise SchemaError("gold_canonical is required", field="gold_canonical")
        try:
            canon = CanonicalForm.from_json_dict(data["gold_canonical"])
        except CanonicalizeError as exc:
            raise SchemaError(str(exc), field="gold_canonical") from exc

        return cls(
            id=data["id"],
            domain=data["domain"],
            description=description,
            entities=entities,
            gold_ir=data["gold_ir"],
            gold_canonical=canon,
            split=split,
            note=note,
        )


@dataclass(frozen=True)
class Rejection:
    """Why a corpus line was refused."""

    line: int
    record_id: str | None
    category: str  # "schema", "annotation", or "canonical_mismatch"
    detail: str

    def to_json_dict(self) -> dict:
        return {
            "line": self.line,
            "record_id": self.record_id,
            "category": self.category,
            "detail": self.detail,
        }


@dataclass
class CorpusReport:
    """Accepted records plus the rejection report for everything else."""

    records: list[ProblemRecord] = field(default_factory=list)
    rejections: list[Rejection] = field(default_factory=list)

    def __iter__(self) -> Iterator[ProblemRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def to_json_dict(self) -> dict:
        return {
            "accepted": len(self.records),
            "rejections": [r.to_json_dict() for r in self.rejections],
        }


def load_corpus(path: str | Path) -> CorpusReport:
    """Read a JSON-lines corpus, validating every record.

    Schema violations, annotation violations, and disagreements between
    the formulation and the stored canonical table each reject the line
    with that category. An empty file raises ``SchemaError("no records")``.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    report = CorpusReport()
    lexicons = Lexicons.bundled()
    seen = 0
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        seen += 1
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            report.rejections.append(
                Rejection(lineno, None, "schema", f"not valid JSON: {exc}")
            )
            continue
        record_id = data.get("id") if isinstance(data, dict) else None
        if not isinstance(record_id, str):
            record_id = None
        try:
            record = ProblemRecord.from_json_dict(data)
        except SchemaError as exc:
            report.rejections.append(Rejection(lineno, record_id, "schema", str(exc)))
            continue
        violations = validate_annotations(record, lexicons=lexicons)
        if violations:
            report.rejections.append(
                Rejection(lineno, record.id, "annotation", "; ".join(violations))
            )
            continue
        mismatch = check_self_consistency(record)
        if mismatch is not None:
            report.rejections.append(
                Rejection(lineno, record.id, "canonical_mismatch", mismatch)
            )
            continue
        report.records.append(record)
    if seen == 0:
        raise SchemaError("no records")
    return report


def write_corpus(records: Iterable[ProblemRecord], path: str | Path) -> int:
    """Write records as JSON-lines; returns the count written."""
    items = list(records)
    with open(path, "w", encoding="utf-8") as fh:
        for record in items:
            fh.write(json.dumps(record.to_json_dict(), sort_keys=True) + "\n")
    return len(items)


def bundled_corpus() -> CorpusReport:
    """Load the corpus of worked examples shipped with the package."""
    source = resources.files("lpwb") / "data" / "fixtures.jsonl"
    with resources.as_file(source) as path:
        return load_corpus(path)


def check_self_consistency(record: ProblemRecord) -> str | None:
    """Compare canonicalize(parse(gold_ir)) against the stored table.

    Returns a description of the first differing cell, or None when the
    tables agree within tolerance.
    """
    try:
        got = canonicalize(parse_ir(record.gold_ir))
    except LpwbError as exc:
        return f"gold IR does not canonicalize: {exc}"
    return first_difference(got, record.gold_canonical)


def first_difference(
    got: CanonicalForm,
    want: CanonicalForm,
    tolerance: float = TOLERANCE,
) -> str | None:
    """Name the first cell where two canonical tables disagree.

    Columns are aligned by normalized variable name, so column order is
    not a difference. Cells are visited in reading order: direction,
    objective name, objective row, then each constraint row.
    """
    if got.direction is not want.direction:
        return f"direction: {got.direction.value} != {want.direction.value}"
    if got.objective_name != want.objective_name:
        return f"objective_name: {got.objective_name!r} != {want.objective_name!r}"
    got_keys = [normalize_variable(v) for v in got.variables]
    want_keys = [normalize_variable(v) for v in want.variables]
    if sorted(got_keys) != sorted(want_keys):
        return f"variables: {got.variables} != {want.variables}"
    column = {key: j for j, key in enumerate(got_keys)}
    order = [column[key] for key in want_keys]

    def differs(a, b) -> bool:
        return abs(float(a) - float(b)) > tolerance

    for j in range(len(want_keys)):
        a, b = got.objective[order[j]], want.objective[j]
        if differs(a, b):
            return f"objective var_{j}: {float(a):g} != {float(b):g}"
    if len(got.rows) != len(want.rows):
        return f"constraint count: {len(got.rows)} != {len(want.rows)}"
    for k, (g, w) in enumerate(zip(got.rows, want.rows)):
        if g.source_kind is not w.source_kind:
            return (
                f"constraint_{k} type: "
                f"{g.source_kind.value} != {w.source_kind.value}"
            )
        if g.const_dir_text != w.const_dir_text:
            return (
                f"constraint_{k} const_dir: "
                f"{g.const_dir_text!r} != {w.const_dir_text!r}"
            )
        for j in range(len(want_keys)):
            a, b = g.coefficients[order[j]], w.coefficients[j]
            if differs(a, b):
                return f"constraint_{k} var_{j}: {float(a):g} != {float(b):g}"
        if differs(g.rhs, w.rhs):
            return f"constraint_{k} rhs: {float(g.rhs):g} != {float(w.rhs):g}"
    return None


def validate_annotations(
    record: ProblemRecord,
    lexicons: Lexicons | None = None,
) -> list[str]:
    """Declarative checks on a record's gold annotations.

    Each constraint must carry exactly the roles its kind requires (the
    parser enforces this; blocks it refuses surface here as violations),
    ratio limits must be written as fractions, comparison constraints
    must have a multiplier, and every variable in the formulation must
    resolve against a tagged VAR span. Violations are returned as data,
    never raised.
    """
    lexicons = lexicons or Lexicons.bundled()
    try:
        doc = parse_ir(record.gold_ir)
    except LpwbError as exc:
        return [f"gold IR does not parse: {exc}"]
    violations = [f"declaration {err.index}: {err.reason}" for err in doc.errors]
    tagged = {
        normalize_variable(span.text)
        for span in record.entities
        if span.label == "VAR"
    }
    for index, decl in enumerate(doc.declarations):
        for name in _variables_of(decl):
            if normalize_variable(name) not in tagged:
                violations.append(
                    f"declaration {index}: variable {name!r} "
                    "has no tagged VAR span"
                )
        if not isinstance(decl, Constraint):
            continue
        if decl.kind is ConstraintKind.RATIO and not _fraction_limit(
            decl, record, lexicons
        ):
            violations.append("ratio limit not a fraction")
        if decl.kind is ConstraintKind.XBY and decl.multiplier is None:
            violations.append(
                f"declaration {index}: comparison constraint has no multiplier"
            )
    return violations


def _variables_of(decl: Declaration) -> list[str]:
    if isinstance(decl, Objective):
        return [t.variable for t in decl.terms]
    names = [t.variable for t in decl.terms]
    for name in (decl.variable, decl.base, decl.compared):
        if name is not None:
            names.append(name)
    return names


def _fraction_limit(
    con: Constraint, record: ProblemRecord, lexicons: Lexicons
) -> bool:
    """A ratio limit must be written as a percent or a value in (0, 1].

    Formulations sometimes print a percent limit without its sign; a
    bare integer is accepted when a tagged LIMIT or PARAM span supplies
    the percent for the same token.
    """
    text = (con.limit_text or "").strip()
    if "%" in text:
        return True
    try:
        value = normalize_number(text, "limit", lexicons.number_words)
    except NumberParseError:
        return False
    if 0 < value <= 1:
        return True
    return any(
        span.label in ("LIMIT", "PARAM")
        and "%" in span.text
        and span.text.replace("%", "").strip() == text
        for span in record.entities
    )


@dataclass(frozen=True)
class CorpusStats:
    """Corpus summary: counts, means, and split composition.

    ``declarations`` counts objectives and constraints together;
    ``avg_constraints`` excludes the objective.
    """

    problems: int
    declarations: int
    constraint_types: dict[str, int]
    avg_variables: float
    avg_constraints: float
    split_sizes: dict[str, int]
    source_target: dict[str, tuple[int, int]]
    ratio_flags: tuple[str, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "problems": self.problems,
            "declarations": self.declarations,
            "constraint_types": dict(sorted(self.constraint_types.items())),
            "avg_variables": round(self.avg_variables, 2),
            "avg_constraints": round(self.avg_constraints, 2),
            "split_sizes": dict(sorted(self.split_sizes.items())),
            "source_target": {
                split: list(pair)
                for split, pair in sorted(self.source_target.items())
            },
            "ratio_flags": list(self.ratio_flags),
        }

    def to_table(self) -> str:
        lines = [
            f"problems          {self.problems}",
            f"declarations      {self.declarations}",
            f"avg variables     {self.avg_variables:.2f}",
            f"avg constraints   {self.avg_constraints:.2f}",
            "constraint types",
        ]
        for kind, count in sorted(self.constraint_types.items()):
            lines.append(f"  {kind:<20} {count}")
        if self.split_sizes:
            lines.append("split sizes")
            for split in SPLITS:
                if split in self.split_sizes:
                    lines.append(f"  {split:<20} {self.split_sizes[split]}")
        for split, (source, target) in sorted(self.source_target.items()):
            lines.append(f"{split} source:target   {source}:{target}")
        for flag in self.ratio_flags:
            lines.append(f"flag: {flag}")
        return "\n".join(lines)


def stats(corpus: Iterable[ProblemRecord]) -> CorpusStats:
    """Summary statistics over accepted records.

    Works off the stored canonical tables, so it needs no parsing and
    is permutation-invariant over records.
    """
    records = list(corpus)
    if not records:
        raise EmptyCorpusError("corpus has no records")
    histogram: Counter[str] = Counter()
    total_vars = 0
    total_cons = 0
    for record in records:
        canon = record.gold_canonical
        total_vars += len(canon.variables)
        total_cons += len(canon.rows)
        histogram.update(row.source_kind.value for row in canon.rows)
    problems = len(records)
    split_sizes = Counter(r.split for r in records if r.split is not None)

    source_target: dict[str, tuple[int, int]] = {}
    flags: list[str] = []
    # Dev and test are drawn with one source-domain problem per three
    # target-domain ones; flag a split whose ratio rounds elsewhere.
    for split in ("dev", "test"):
        members = [r for r in records if r.split == split]
        if not members:
            continue
        source = sum(1 for r in members if r.domain in SOURCE_DOMAINS)
        target = len(members) - source
        source_target[split] = (source, target)
        if source == 0 or not 2.5 <= target / source < 3.5:
            flags.append(
                f"{split} split source:target {source}:{target} is not 1:3"
            )
    return CorpusStats(
        problems=problems,
        declarations=problems + total_cons,
        constraint_types=dict(histogram),
        avg_variables=total_vars / problems,
        avg_constraints=total_cons / problems,
        split_sizes=dict(split_sizes),
        source_target=source_target,
        ratio_flags=tuple(flags),
    )
