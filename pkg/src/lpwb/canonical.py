"""Canonical constraint tables.

Every model is flattened to the context-free form

    direction  c . x
    subject to A x <= b      (x >= 0 handled by the solver)

with one row per constraint, all rows oriented ``<=``. Declarations
expand as follows (``n`` columns, ``f`` a ratio limit, ``k`` a
multiplier):

========== ==================================== =====================
kind        GREATER_OR_EQUAL                     LESS_OR_EQUAL
========== ==================================== =====================
LINEAR      -coeffs | -limit                     coeffs | limit
SUM         all -1  | -limit                     all +1 | limit
bound on j  -e_j | -limit (LOWER)                e_j | limit (UPPER)
RATIO on j  (f-1) at j, f elsewhere | 0          (1-f) at j, -f elsewhere | 0
XBY         -1 at compared, k at base | 0        +1 at compared, -k at base | 0
========== ==================================== =====================

The objective row keeps its raw coefficients; the stored direction flag
says how to read it, and only :meth:`CanonicalForm.solver_input` negates
for maximization. Arithmetic is exact rational throughout; rendering
rounds to four decimal places.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CanonicalizeError, VariableResolutionError
from .ir import (
    Constraint,
    ConstraintKind,
    IrDocument,
    Objective,
    ObjectiveDirection,
    Operator,
)
from .numparse import display_number, export_number, normalize_number  # noqa: F401  (re-export)

_WS_RE = re.compile(r"\s+")


def normalize_variable(name: str) -> str:
    """Unification key: casefold, collapse whitespace, strip one plural s."""
    key = _WS_RE.sub(" ", name.strip()).casefold()
    if len(key) > 1 and key.endswith("s") and not key.endswith("ss"):
        key = key[:-1]
    return key


def resolve_variables(doc: IrDocument, strict: bool = False) -> list[str]:
    """Column order: first appearance in the objective, then constraints.

    The display name of a column is the first surface form seen. With
    ``strict`` set, constraints may not introduce columns the objective
    does not mention.
    """
    names: list[str] = []
    keys: dict[str, int] = {}

    def visit(surface: str, introducible: bool) -> None:
        key = normalize_variable(surface)
        if key in keys:
            return
        if not introducible:
            raise VariableResolutionError(
                f"variable {surface!r} does not unify with any known column"
            )
        keys[key] = len(names)
        names.append(surface.strip())

    objective = doc.objective
    if objective is not None:
        for term in objective.terms:
            visit(term.variable, True)
    for con in doc.constraints:
        for surface in _constraint_variables(con):
            visit(surface, not strict)
    return names


def _constraint_variables(con: Constraint) -> list[str]:
    if con.kind is ConstraintKind.LINEAR:
        return [t.variable for t in con.terms]
    if con.kind is ConstraintKind.XBY:
        return [v for v in (con.base, con.compared) if v is not None]
    return [con.variable] if con.variable is not None else []


@dataclass
class CanonicalRow:
    coefficients: list[Fraction]
    rhs: Fraction
    source_kind: ConstraintKind
    const_dir_text: str

    def as_floats(self) -> tuple[list[float], float]:
        return [float(c) for c in self.coefficients], float(self.rhs)


@dataclass
class CanonicalForm:
    variables: list[str]
    direction: ObjectiveDirection
    objective: list[Fraction]
    objective_name: str = ""
    rows: list[CanonicalRow] = field(default_factory=list)

    def solver_input(self) -> tuple[list[Fraction], list[list[Fraction]], list[Fraction]]:
        """Minimize-form triple ``(c, A, b)``: maximization negates c."""
        c = list(self.objective)
        if self.direction is ObjectiveDirection.MAXIMIZE:
            c = [-v for v in c]
        return c, [list(r.coefficients) for r in self.rows], [r.rhs for r in self.rows]

    def to_json_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "direction": self.direction.value,
            "objective_name": self.objective_name,
            "objective": [export_number(v) for v in self.objective],
            "constraints": [
                {
                    "coefficients": [export_number(v) for v in row.coefficients],
                    "rhs": export_number(row.rhs),
                    "type": row.source_kind.value,
                    "const_dir": row.const_dir_text,
                }
                for row in self.rows
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json_dict(cls, data: dict) -> "CanonicalForm":
        try:
            rows = [
                CanonicalRow(
                    coefficients=[_fraction(v) for v in c["coefficients"]],
                    rhs=_fraction(c["rhs"]),
                    source_kind=ConstraintKind(c.get("type", "LINEAR_CONSTRAINT")),
                    const_dir_text=c.get("const_dir", ""),
                )
                for c in data["constraints"]
            ]
            form = cls(
                variables=list(data["variables"]),
                direction=ObjectiveDirection(data["direction"]),
                objective=[_fraction(v) for v in data["objective"]],
                objective_name=data.get("objective_name", ""),
                rows=rows,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CanonicalizeError(f"bad canonical JSON: {exc}") from exc
        n = len(form.variables)
        if len(form.objective) != n or any(len(r.coefficients) != n for r in form.rows):
            raise CanonicalizeError("canonical JSON rows disagree on column count")
        return form

    @classmethod
    def from_json(cls, text: str) -> "CanonicalForm":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CanonicalizeError(f"bad canonical JSON: {exc}") from exc
        return cls.from_json_dict(data)

    def to_table(self) -> str:
        """Plain-text table: header ``var_0 .. var_{n-1} rhs``, then
        ``objective`` and ``constraint_k`` rows."""
        headers = [""] + [f"var_{i}" for i in range(len(self.variables))] + ["rhs"]
        body = [["objective"] + [display_number(v) for v in self.objective] + [""]]
        for i, row in enumerate(self.rows):
            body.append(
                [f"constraint_{i}"]
                + [display_number(v) for v in row.coefficients]
                + [display_number(row.rhs)]
            )
        widths = [
            max(len(r[col]) for r in [headers] + body)
            for col in range(len(headers))
        ]
        lines = []
        for r in [headers] + body:
            cells = [r[0].ljust(widths[0])] + [
                r[i].rjust(widths[i]) for i in range(1, len(headers))
            ]
            lines.append("  ".join(cells).rstrip())
        return "\n".join(lines)


def _fraction(value) -> Fraction:
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def canonicalize(doc: IrDocument, strict: bool = False) -> CanonicalForm:
    """Expand a parsed document into its canonical table."""
    objective = doc.objective
    if objective is None:
        raise CanonicalizeError("document has no objective to canonicalize")
    names = resolve_variables(doc, strict=strict)
    index = {normalize_variable(n): i for i, n in enumerate(names)}
    n = len(names)

    obj = [Fraction(0)] * n
    for term in objective.terms:
        obj[index[normalize_variable(term.variable)]] += term.coefficient

    rows = [constraint_row(con, index, n) for con in doc.constraints]
    return CanonicalForm(
        variables=names,
        direction=objective.direction,
        objective=obj,
        objective_name=objective.name,
        rows=rows,
    )


def constraint_row(con: Constraint, index: dict[str, int], n: int) -> CanonicalRow:
    """Expand one constraint against a fixed column layout."""
    geq = con.operator is Operator.GREATER_OR_EQUAL
    coeffs = [Fraction(0)] * n
    rhs = Fraction(0)

    def col(surface: str) -> int:
        key = normalize_variable(surface)
        if key not in index:
            raise VariableResolutionError(f"variable {surface!r} has no column")
        return index[key]

    kind = con.kind
    if kind in (ConstraintKind.LINEAR, ConstraintKind.SUM,
                ConstraintKind.UPPER_BOUND, ConstraintKind.LOWER_BOUND):
        if con.limit is None:
            raise CanonicalizeError(f"{kind.value} is missing its limit")
        rhs = con.limit
        if kind is ConstraintKind.LINEAR:
            for term in con.terms:
                coeffs[col(term.variable)] += term.coefficient
        elif kind is ConstraintKind.SUM:
            coeffs = [Fraction(1)] * n
        else:
            if con.variable is None:
                raise CanonicalizeError(f"{kind.value} is missing its variable")
            coeffs[col(con.variable)] = Fraction(1)
        if geq:  # store every row <=-oriented
            coeffs = [-c for c in coeffs]
            rhs = -rhs
    elif kind is ConstraintKind.RATIO:
        if con.limit is None or con.variable is None:
            raise CanonicalizeError("ratio constraint needs a variable and a limit")
        f = con.limit
        if not 0 <= f <= 1:
            raise CanonicalizeError(f"ratio limit {f} outside [0, 1] after normalization")
        j = col(con.variable)
        if geq:  # x_j >= f * total  ->  f elsewhere, f-1 at j
            coeffs = [f] * n
            coeffs[j] = f - 1
        else:    # x_j <= f * total  ->  -f elsewhere, 1-f at j
            coeffs = [-f] * n
            coeffs[j] = 1 - f
    else:  # XBY: compared OP k * base
        if con.multiplier is None:
            raise CanonicalizeError("comparison constraint is missing its multiplier")
        if con.base is None or con.compared is None:
            raise CanonicalizeError("comparison constraint needs two variables")
        k = con.multiplier
        sign = 1 if geq else -1
        coeffs[col(con.compared)] += -sign * Fraction(1)
        coeffs[col(con.base)] += sign * k
    return CanonicalRow(coeffs, rhs, kind, con.const_dir_text)
