"""Tagged intermediate representation for LP word problems.

A model is a sequence of ``<DECLARATION> ... </DECLARATION>`` blocks. Each
block is either the objective or one constraint, written as tagged
elements (``<OBJ_DIR>``, ``<VAR>``, ``<PARAM>``, ``<LIMIT>``, ...) joined
by the optional connectives ``[is]``, ``[TIMES]`` and ``[for]``. Field
order inside a block is free; roles are recovered from the tags.

Parsing is two-level: a malformed block is recorded as a
:class:`DeclarationSyntaxError` and skipped, while damage that makes the
whole document unusable (unbalanced DECLARATION tags, nothing parseable,
duplicate objectives) raises :class:`ProblemSyntaxError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import DeclarationSyntaxError, NumberParseError, ProblemSyntaxError
from .numparse import format_number, normalize_number


class ObjectiveDirection(Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class Operator(Enum):
    GREATER_OR_EQUAL = "GREATER_OR_EQUAL"
    LESS_OR_EQUAL = "LESS_OR_EQUAL"


class ConstraintKind(Enum):
    LINEAR = "LINEAR_CONSTRAINT"
    SUM = "SUM_CONSTRAINT"
    UPPER_BOUND = "UPPER_BOUND"
    LOWER_BOUND = "LOWER_BOUND"
    RATIO = "RATIO_CONSTRAINT"
    XBY = "XBY_CONSTRAINT"

    @property
    def tag(self) -> str:
        return f"[{self.value}]"


# "[XY_CONSTRAINT]" is an accepted alias: x-vs-y comparison, multiplier 1.
XY_ALIAS = "XY_CONSTRAINT"

CONNECTIVES = ("[is]", "[TIMES]", "[for]")

_KNOWN_TAGS = {
    "OBJ_DIR", "OBJ_NAME", "VAR", "PARAM", "LIMIT",
    "CONST_DIR", "OPERATOR", "CONST_TYPE",
}

_OBJ_DIR_WORDS = {
    "maximize": ObjectiveDirection.MAXIMIZE,
    "maximise": ObjectiveDirection.MAXIMIZE,
    "minimize": ObjectiveDirection.MINIMIZE,
    "minimise": ObjectiveDirection.MINIMIZE,
}


@dataclass
class Term:
    """One ``coefficient * variable`` pair."""

    variable: str
    coefficient: Fraction
    coefficient_text: str | None = field(default=None, compare=False)


@dataclass
class Objective:
    direction: ObjectiveDirection
    name: str
    terms: list[Term]


@dataclass
class Constraint:
    kind: ConstraintKind
    const_dir_text: str
    operator: Operator
    limit: Fraction | None = None
    limit_text: str | None = field(default=None, compare=False)
    terms: list[Term] = field(default_factory=list)  # LINEAR only
    variable: str | None = None                      # bounds and RATIO
    base: str | None = None                          # XBY: reference side
    compared: str | None = None                      # XBY: constrained side
    multiplier: Fraction | None = None               # XBY
    multiplier_text: str | None = field(default=None, compare=False)


Declaration = Objective | Constraint


@dataclass
class IrDocument:
    """Parse result: surviving declarations plus per-block errors."""

    declarations: list[Declaration]
    errors: list[DeclarationSyntaxError] = field(default_factory=list)
    source_text: str = ""

    @property
    def objective(self) -> Objective | None:
        for d in self.declarations:
            if isinstance(d, Objective):
                return d
        return None

    @property
    def constraints(self) -> list[Constraint]:
        return [d for d in self.declarations if isinstance(d, Constraint)]


_OPEN_DECL = "<DECLARATION>"
_CLOSE_DECL = "</DECLARATION>"
_TAG_RE = re.compile(r"<(/?)([A-Za-z_]+)>")
_BRACKET_RE = re.compile(r"\[[^\[\]<>]*\]")


def parse_ir(text: str) -> IrDocument:
    """Parse a tagged document into declarations.

    Individually malformed blocks are collected on ``errors`` and skipped;
    the document aborts only when nothing parses, DECLARATION tags do not
    balance, an objective is duplicated, or a document with no block-level
    errors still lacks an objective.
    """
    blocks = _split_blocks(text)
    if not blocks:
        raise ProblemSyntaxError("no DECLARATION blocks found")
    declarations: list[Declaration] = []
    errors: list[DeclarationSyntaxError] = []
    for index, block in enumerate(blocks):
        try:
            declarations.append(_parse_block(block, index))
        except DeclarationSyntaxError as exc:
            errors.append(DeclarationSyntaxError(exc.reason, index))
    if not declarations:
        raise ProblemSyntaxError(
            "no declaration parsed: " + "; ".join(str(e) for e in errors)
        )
    objectives = [d for d in declarations if isinstance(d, Objective)]
    if len(objectives) > 1:
        raise ProblemSyntaxError("duplicate objective declarations")
    if not objectives and not errors:
        raise ProblemSyntaxError("document declares no objective")
    return IrDocument(declarations=declarations, errors=errors, source_text=text)


def parse_declaration(text: str) -> Declaration:
    """Parse a single DECLARATION block (used for point edits)."""
    blocks = _split_blocks(text)
    if len(blocks) != 1:
        raise ProblemSyntaxError(f"expected exactly one DECLARATION block, found {len(blocks)}")
    return _parse_block(blocks[0], 0)


def _split_blocks(text: str) -> list[str]:
    blocks: list[str] = []
    outside: list[str] = []
    pos = 0
    while True:
        start = text.find(_OPEN_DECL, pos)
        if start < 0:
            outside.append(text[pos:])
            break
        outside.append(text[pos:start])
        end = text.find(_CLOSE_DECL, start)
        if end < 0:
            raise ProblemSyntaxError("unclosed <DECLARATION> block")
        inner = text[start + len(_OPEN_DECL):end]
        if _OPEN_DECL in inner:
            raise ProblemSyntaxError("nested <DECLARATION> blocks do not balance")
        blocks.append(inner)
        pos = end + len(_CLOSE_DECL)
    if any("DECLARATION" in seg for seg in outside):
        raise ProblemSyntaxError("stray DECLARATION tag outside a balanced block")
    return blocks


def _tokenize_block(block: str) -> list[tuple[str, str]]:
    """Yield ``(tag, value)`` element pairs, validating connectives."""
    fields: list[tuple[str, str]] = []
    pos = 0
    n = len(block)
    while pos < n:
        ch = block[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "[":
            m = _BRACKET_RE.match(block, pos)
            if m is None or m.group(0) not in CONNECTIVES:
                token = m.group(0) if m else block[pos:pos + 12]
                raise DeclarationSyntaxError(f"unknown connective {token!r}")
            pos = m.end()
            continue
        if ch != "<":
            run = block[pos:].split("<", 1)[0].strip()
            raise DeclarationSyntaxError(f"stray text {run[:40]!r}")
        m = _TAG_RE.match(block, pos)
        if m is None:
            raise DeclarationSyntaxError(f"malformed tag at {block[pos:pos + 20]!r}")
        if m.group(1):
            raise DeclarationSyntaxError(f"unexpected closing tag </{m.group(2)}>")
        tag = m.group(2)
        if tag not in _KNOWN_TAGS:
            raise DeclarationSyntaxError(f"unknown tag <{tag}>")
        close = block.find("<", m.end())
        if close < 0:
            raise DeclarationSyntaxError(f"missing </{tag}>")
        value = block[m.end():close]
        cm = _TAG_RE.match(block, close)
        if cm is None or not cm.group(1) or cm.group(2) != tag:
            raise DeclarationSyntaxError(f"missing </{tag}>")
        if "[" in value and tag != "CONST_TYPE":
            raise DeclarationSyntaxError(f"unexpected connective inside <{tag}>")
        fields.append((tag, value.strip()))
        pos = cm.end()
    return fields


def _parse_block(block: str, index: int) -> Declaration:
    fields = _tokenize_block(block)
    if not fields:
        raise DeclarationSyntaxError("empty declaration")
    tags = [t for t, _ in fields]
    if "OBJ_DIR" in tags:
        return _assemble_objective(fields)
    return _assemble_constraint(fields)


def _single(fields: list[tuple[str, str]], tag: str, required: bool = True) -> str | None:
    values = [v for t, v in fields if t == tag]
    if len(values) > 1:
        raise DeclarationSyntaxError(f"duplicate <{tag}>")
    if not values:
        if required:
            raise DeclarationSyntaxError(f"missing <{tag}>")
        return None
    return values[0]


def _paired_terms(fields: list[tuple[str, str]]) -> list[Term]:
    """Pair each <VAR> with the <PARAM> that follows it."""
    terms: list[Term] = []
    pending: str | None = None
    for tag, value in fields:
        if tag == "VAR":
            if pending is not None:
                raise DeclarationSyntaxError(f"variable {pending!r} has no coefficient")
            pending = value
        elif tag == "PARAM":
            if pending is None:
                raise DeclarationSyntaxError(f"coefficient {value!r} has no variable")
            terms.append(Term(pending, _number(value, "param"), value))
            pending = None
    if pending is not None:
        raise DeclarationSyntaxError(f"variable {pending!r} has no coefficient")
    return terms


def _number(token: str, context: str) -> Fraction:
    try:
        return normalize_number(token, context)
    except NumberParseError as exc:
        raise DeclarationSyntaxError(str(exc)) from exc


def _assemble_objective(fields: list[tuple[str, str]]) -> Objective:
    for tag, _ in fields:
        if tag in ("CONST_DIR", "CONST_TYPE", "OPERATOR", "LIMIT"):
            raise DeclarationSyntaxError(f"<{tag}> not allowed in an objective")
    raw_dir = _single(fields, "OBJ_DIR")
    direction = _OBJ_DIR_WORDS.get(raw_dir.casefold())
    if direction is None:
        raise DeclarationSyntaxError(f"unknown objective direction {raw_dir!r}")
    name = _single(fields, "OBJ_NAME")
    terms = _paired_terms(fields)
    if not terms:
        raise DeclarationSyntaxError("objective has no terms")
    return Objective(direction=direction, name=name, terms=terms)


def _assemble_constraint(fields: list[tuple[str, str]]) -> Constraint:
    if any(t == "OBJ_NAME" for t, _ in fields):
        raise DeclarationSyntaxError("<OBJ_NAME> not allowed in a constraint")
    raw_type = _single(fields, "CONST_TYPE")
    m = re.fullmatch(r"\[([A-Z_]+)\]", raw_type)
    if m is None:
        raise DeclarationSyntaxError(f"malformed constraint type {raw_type!r}")
    type_name = m.group(1)
    is_xy = type_name == XY_ALIAS
    try:
        kind = ConstraintKind.XBY if is_xy else ConstraintKind(type_name)
    except ValueError:
        raise DeclarationSyntaxError(f"unknown constraint type [{type_name}]") from None

    raw_op = _single(fields, "OPERATOR")
    try:
        operator = Operator(raw_op)
    except ValueError:
        raise DeclarationSyntaxError(f"unknown operator {raw_op!r}") from None
    const_dir = _single(fields, "CONST_DIR")

    limit_ctx = "ratio" if kind is ConstraintKind.RATIO else "limit"
    limit_text = _single(fields, "LIMIT", required=kind is not ConstraintKind.XBY)
    if kind is ConstraintKind.XBY and limit_text is not None:
        raise DeclarationSyntaxError("comparison constraints take no <LIMIT>")
    limit = _number(limit_text, limit_ctx) if limit_text is not None else None

    variables = [v for t, v in fields if t == "VAR"]
    params = [v for t, v in fields if t == "PARAM"]
    con = Constraint(
        kind=kind, const_dir_text=const_dir, operator=operator,
        limit=limit, limit_text=limit_text,
    )
    if kind is ConstraintKind.LINEAR:
        con.terms = _paired_terms(fields)
        if not con.terms:
            raise DeclarationSyntaxError("linear constraint has no terms")
    elif kind is ConstraintKind.SUM:
        if variables or params:
            raise DeclarationSyntaxError("sum constraint takes no variables or coefficients")
    elif kind in (ConstraintKind.UPPER_BOUND, ConstraintKind.LOWER_BOUND, ConstraintKind.RATIO):
        if len(variables) != 1 or params:
            raise DeclarationSyntaxError(f"{kind.value} needs exactly one variable and no coefficient")
        con.variable = variables[0]
    else:  # XBY / XY alias
        if len(variables) != 2:
            raise DeclarationSyntaxError("comparison constraint needs exactly two variables")
        if is_xy:
            if params:
                raise DeclarationSyntaxError(f"[{XY_ALIAS}] takes no multiplier")
            con.multiplier = Fraction(1)
        else:
            if len(params) != 1:
                raise DeclarationSyntaxError(f"[{ConstraintKind.XBY.value}] requires a multiplier")
            order = [t for t, _ in fields if t in ("VAR", "PARAM")]
            if order != ["VAR", "PARAM", "VAR"]:
                raise DeclarationSyntaxError("comparison constraint must read base, multiplier, compared")
            con.multiplier = _number(params[0], "param")
            con.multiplier_text = params[0]
        con.base, con.compared = variables[0], variables[1]
    return con


def print_ir(item: IrDocument | Declaration) -> str:
    """Render declarations back to tagged text.

    Surface numerals captured at parse time are reproduced verbatim, so a
    parse/print round trip preserves tokens like ``60,000`` and ``three``.
    """
    if isinstance(item, IrDocument):
        return "\n".join(print_ir(d) for d in item.declarations)
    lines: list[str] = ["<DECLARATION>"]
    if isinstance(item, Objective):
        lines.append(f"    <OBJ_DIR> {item.direction.value} </OBJ_DIR>")
        lines.append(f"    <OBJ_NAME> {item.name} </OBJ_NAME> [is]")
        lines.extend(_term_lines(item.terms))
    else:
        head = f"    <CONST_DIR> {item.const_dir_text} </CONST_DIR>"
        if item.limit is not None:
            head += f" <LIMIT> {item.limit_text or format_number(item.limit)} </LIMIT>"
        lines.append(head)
        lines.append(f"    <OPERATOR> {item.operator.value} </OPERATOR>")
        if item.kind is ConstraintKind.LINEAR:
            lines.append(f"    <CONST_TYPE> {item.kind.tag} </CONST_TYPE> [is]")
            lines.extend(_term_lines(item.terms))
        elif item.kind is ConstraintKind.SUM:
            lines.append(f"    <CONST_TYPE> {item.kind.tag} </CONST_TYPE>")
        elif item.kind is ConstraintKind.XBY:
            lines.append(f"    <CONST_TYPE> {item.kind.tag} </CONST_TYPE>")
            mult = item.multiplier_text or format_number(item.multiplier)
            lines.append(
                f"    <VAR> {item.base} </VAR> [TIMES] <PARAM> {mult} </PARAM> "
                f"[is] <VAR> {item.compared} </VAR>"
            )
        else:
            lines.append(f"    <CONST_TYPE> {item.kind.tag} </CONST_TYPE> [for]")
            lines.append(f"    <VAR> {item.variable} </VAR>")
    lines.append("</DECLARATION>")
    return "\n".join(lines)


def _term_lines(terms: list[Term]) -> list[str]:
    return [
        f"    <VAR> {t.variable} </VAR> [TIMES] "
        f"<PARAM> {t.coefficient_text or format_number(t.coefficient)} </PARAM>"
        for t in terms
    ]


def describe(item: Declaration) -> str:
    """One-line human rendering used by review surfaces."""
    if isinstance(item, Objective):
        body = " + ".join(f"{format_number(t.coefficient)} * {t.variable}" for t in item.terms)
        return f"{item.direction.value} {item.name}: {body}"
    op = "<=" if item.operator is Operator.LESS_OR_EQUAL else ">="
    cue = item.const_dir_text
    if item.kind is ConstraintKind.LINEAR:
        body = " + ".join(f"{format_number(t.coefficient)} * {t.variable}" for t in item.terms)
        return f"[{cue}] {body} {op} {format_number(item.limit)}"
    if item.kind is ConstraintKind.SUM:
        return f"[{cue}] total of all variables {op} {format_number(item.limit)}"
    if item.kind is ConstraintKind.RATIO:
        return f"[{cue}] {item.variable} {op} {format_number(item.limit)} of the total"
    if item.kind is ConstraintKind.XBY:
        return f"[{cue}] {item.compared} {op} {format_number(item.multiplier)} * {item.base}"
    return f"[{cue}] {item.variable} {op} {format_number(item.limit)}"
