"""Declaration-level evaluation of predicted models.

A predicted model earns credit per declaration, not per whole problem.
Predicted and ground-truth declarations are compared in canonical space
after aligning variables by normalized name; a predicted declaration
matches a ground-truth one when every coefficient and the right-hand
side agree within tolerance (the objective additionally requires the
same optimization direction). Matching is one-to-one and greedy, taking
the lowest-index unmatched ground-truth candidate first.

Per problem i with D_i ground-truth declarations, P_i predictions and a
matching of size M_i:

    FP_i = P_i - M_i            (unmatched predictions)
    FN_i = max(0, D_i - P_i)    (excess ground-truth declarations)

    accuracy = 1 - sum_i min(FP_i + FN_i, D_i) / sum_i D_i

Unparseable predictions contribute P_i = 0, so every ground-truth
declaration of that problem is charged through the FN path.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import (
    CanonicalForm,
    canonicalize,
    constraint_row,
    normalize_variable,
    resolve_variables,
)
from .errors import (
    CanonicalizeError,
    EmptyCorpusError,
    ProblemSyntaxError,
    VariableResolutionError,
)
from .ir import (
    Constraint,
    ConstraintKind,
    IrDocument,
    Objective,
    ObjectiveDirection,
    parse_ir,
)

TOLERANCE = 1e-4

# Error categories. The first two are syntax-level (whole problem / one
# block); the rest name the first offending field of a declaration.
PROBLEM_SYNTAX = "ProblemSyntax"
DECLARATION_SYNTAX = "DeclarationSyntax"
CONSTRAINT_TYPE = "ConstraintType"
DIRECTION_OPERATOR = "DirectionOperator"
LIMIT = "Limit"
PARAMETER = "Parameter"
VARIABLE = "Variable"

CATEGORIES = (
    PROBLEM_SYNTAX, DECLARATION_SYNTAX, CONSTRAINT_TYPE,
    DIRECTION_OPERATOR, LIMIT, PARAMETER, VARIABLE,
)


@dataclass
class MatchResult:
    """Outcome of matching one prediction against one ground truth."""

    gold_count: int
    pred_count: int
    objective_matched: bool = False
    pairs: list[tuple[int, int]] = field(default_factory=list)  # (pred row, gold row)

    @property
    def matched(self) -> int:
        return len(self.pairs) + (1 if self.objective_matched else 0)

    @property
    def false_positives(self) -> int:
        return self.pred_count - self.matched

    @property
    def false_negatives(self) -> int:
        return max(0, self.gold_count - self.pred_count)

    @property
    def charged(self) -> int:
        return min(self.false_positives + self.false_negatives, self.gold_count)


def accuracy(results: list[MatchResult]) -> float:
    """Corpus accuracy; raises :class:`EmptyCorpusError` on zero gold mass."""
    total = sum(r.gold_count for r in results)
    if total == 0:
        raise EmptyCorpusError("no gold declarations to score against")
    return 1.0 - sum(r.charged for r in results) / total


@dataclass
class _RowSet:
    """Comparable canonical content; objective may be absent."""

    variables: list[str]
    direction: ObjectiveDirection | None
    objective: list[Fraction] | None
    rows: list[tuple[list[Fraction], Fraction] | None]
    count: int  # declarations represented (objective + constraints)

    @classmethod
    def from_form(cls, form: CanonicalForm) -> "_RowSet":
        return cls(
            variables=list(form.variables),
            direction=form.direction,
            objective=list(form.objective),
            rows=[(list(r.coefficients), r.rhs) for r in form.rows],
            count=1 + len(form.rows),
        )

    @classmethod
    def from_document(cls, doc: IrDocument) -> "_RowSet":
        """Lenient extraction: declarations that cannot be expanded stay
        as unmatched placeholders instead of aborting."""
        names = _lenient_columns(doc)
        index = {normalize_variable(n): i for i, n in enumerate(names)}
        n = len(names)
        objective = doc.objective
        obj_vec = None
        if objective is not None:
            obj_vec = [Fraction(0)] * n
            for term in objective.terms:
                obj_vec[index[normalize_variable(term.variable)]] += term.coefficient
        rows: list[tuple[list[Fraction], Fraction] | None] = []
        for con in doc.constraints:
            try:
                row = constraint_row(con, index, n)
                rows.append((row.coefficients, row.rhs))
            except (CanonicalizeError, VariableResolutionError):
                rows.append(None)
        return cls(
            variables=names,
            direction=objective.direction if objective else None,
            objective=obj_vec,
            rows=rows,
            count=len(doc.declarations),
        )


def _lenient_columns(doc: IrDocument) -> list[str]:
    try:
        return resolve_variables(doc)
    except VariableResolutionError:
        return []


def match_declarations(
    pred: CanonicalForm | IrDocument,
    gold: CanonicalForm | IrDocument,
    tol: float = TOLERANCE,
) -> MatchResult:
    """Greedy one-to-one matching in the gold variable space."""
    pred_set = pred if isinstance(pred, _RowSet) else _to_rowset(pred)
    gold_set = gold if isinstance(gold, _RowSet) else _to_rowset(gold)

    align = _alignment(pred_set.variables, gold_set.variables)
    n_gold = len(gold_set.variables)

    result = MatchResult(gold_count=gold_set.count, pred_count=pred_set.count)

    if (
        pred_set.objective is not None
        and gold_set.objective is not None
        and pred_set.direction == gold_set.direction
    ):
        mapped = _map_vector(pred_set.objective, align, n_gold)
        if mapped is not None and _close(mapped, gold_set.objective, tol):
            result.objective_matched = True

    taken: set[int] = set()
    for p_idx, pred_row in enumerate(pred_set.rows):
        if pred_row is None:
            continue
        mapped = _map_vector(pred_row[0], align, n_gold)
        if mapped is None:
            continue
        for g_idx, gold_row in enumerate(gold_set.rows):
            if g_idx in taken or gold_row is None:
                continue
            if _close(mapped, gold_row[0], tol) and _close_scalar(pred_row[1], gold_row[1], tol):
                taken.add(g_idx)
                result.pairs.append((p_idx, g_idx))
                break
    return result


def _to_rowset(model) -> _RowSet:
    if isinstance(model, CanonicalForm):
        return _RowSet.from_form(model)
    if isinstance(model, IrDocument):
        return _RowSet.from_document(model)
    raise TypeError(f"cannot match a {type(model).__name__}")


def _alignment(pred_vars: list[str], gold_vars: list[str]) -> list[int | None]:
    gold_keys = {normalize_variable(v): i for i, v in enumerate(gold_vars)}
    return [gold_keys.get(normalize_variable(v)) for v in pred_vars]


def _map_vector(vec: list[Fraction], align: list[int | None], n_gold: int):
    """Project a prediction-space vector onto gold columns.

    A nonzero weight on a variable absent from the gold model makes the
    vector unmatchable (returns None); zero weights are dropped."""
    mapped = [Fraction(0)] * n_gold
    for value, target in zip(vec, align):
        if target is None:
            if value != 0:
                return None
        else:
            mapped[target] += value
    return mapped


def _close(a, b, tol: float) -> bool:
    return all(_close_scalar(x, y, tol) for x, y in zip(a, b))


def _close_scalar(a, b, tol: float) -> bool:
    return abs(float(a) - float(b)) <= tol


def classify_errors(
    pred: IrDocument | None,
    gold: IrDocument,
    tol: float = TOLERANCE,
) -> Counter:
    """Tally error categories for one problem.

    An unparseable prediction is one ProblemSyntax error. Block-level
    failures recorded on the prediction each count as DeclarationSyntax.
    Unmatched declarations are paired with their most similar unmatched
    ground-truth counterpart; a kind mismatch is charged only as
    ConstraintType (the remainder of such a declaration follows the
    wrong shape), otherwise every differing field among direction,
    limit, parameters and variables is charged. Leftover declarations
    with no plausible counterpart are not categorized further.
    """
    tallies: Counter = Counter()
    if pred is None:
        tallies[PROBLEM_SYNTAX] += 1
        return tallies
    tallies[DECLARATION_SYNTAX] += len(pred.errors)

    match = match_declarations(pred, gold, tol)
    if pred.objective is not None and gold.objective is not None and not match.objective_matched:
        tallies.update(_objective_diff(pred.objective, gold.objective, tol))

    matched_pred = {p for p, _ in match.pairs}
    matched_gold = {g for g, _ in match.pairs}
    open_pred = [c for i, c in enumerate(pred.constraints) if i not in matched_pred]
    open_gold = {
        i: c for i, c in enumerate(gold.constraints) if i not in matched_gold
    }
    for pred_con in open_pred:
        if not open_gold:
            break
        best_idx = min(
            open_gold,
            key=lambda i: (-_similarity(pred_con, open_gold[i], tol), i),
        )
        gold_con = open_gold.pop(best_idx)
        tallies.update(_constraint_diff(pred_con, gold_con, tol))
    return tallies


def _objective_diff(pred: Objective, gold: Objective, tol: float) -> Counter:
    tallies: Counter = Counter()
    if pred.direction is not gold.direction:
        tallies[DIRECTION_OPERATOR] += 1
    pred_terms = _term_map(pred.terms)
    gold_terms = _term_map(gold.terms)
    if set(pred_terms) != set(gold_terms):
        tallies[VARIABLE] += 1
    if any(
        not _close_scalar(pred_terms[k], gold_terms[k], tol)
        for k in set(pred_terms) & set(gold_terms)
    ):
        tallies[PARAMETER] += 1
    return tallies


def _term_map(terms) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    for t in terms:
        key = normalize_variable(t.variable)
        out[key] = out.get(key, Fraction(0)) + t.coefficient
    return out


def _constraint_fields(con: Constraint) -> dict:
    return {
        "kind": con.kind,
        "operator": con.operator,
        "limit": con.limit,
        "params": _param_map(con),
        "vars": _var_keys(con),
    }


def _param_map(con: Constraint) -> dict[str, Fraction]:
    if con.kind is ConstraintKind.LINEAR:
        return _term_map(con.terms)
    if con.kind is ConstraintKind.XBY and con.multiplier is not None:
        return {"*": con.multiplier}
    return {}


def _var_keys(con: Constraint) -> frozenset:
    return frozenset(normalize_variable(v) for v in _constraint_vars(con))


def _constraint_vars(con: Constraint) -> list[str]:
    if con.kind is ConstraintKind.LINEAR:
        return [t.variable for t in con.terms]
    if con.kind is ConstraintKind.XBY:
        return [v for v in (con.base, con.compared) if v]
    return [con.variable] if con.variable else []


def _similarity(a: Constraint, b: Constraint, tol: float) -> int:
    fa, fb = _constraint_fields(a), _constraint_fields(b)
    score = 0
    score += 2 * (fa["kind"] is fb["kind"])
    score += fa["operator"] is fb["operator"]
    score += _limits_close(fa["limit"], fb["limit"], tol)
    score += fa["vars"] == fb["vars"]
    score += _params_close(fa["params"], fb["params"], tol)
    score += a.const_dir_text.casefold() == b.const_dir_text.casefold()
    return score


def _limits_close(a, b, tol: float) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return _close_scalar(a, b, tol)


def _params_close(a: dict, b: dict, tol: float) -> bool:
    return set(a) == set(b) and all(_close_scalar(a[k], b[k], tol) for k in a)


def _constraint_diff(pred: Constraint, gold: Constraint, tol: float) -> Counter:
    tallies: Counter = Counter()
    if pred.kind is not gold.kind:
        tallies[CONSTRAINT_TYPE] += 1
        return tallies
    if pred.operator is not gold.operator:
        tallies[DIRECTION_OPERATOR] += 1
    if not _limits_close(pred.limit, gold.limit, tol):
        tallies[LIMIT] += 1
    if not _params_close(_param_map(pred), _param_map(gold), tol):
        tallies[PARAMETER] += 1
    if _var_keys(pred) != _var_keys(gold):
        tallies[VARIABLE] += 1
    return tallies


@dataclass
class ProblemScore:
    problem_id: str
    result: MatchResult
    errors: Counter

    def to_json_dict(self) -> dict:
        return {
            "id": self.problem_id,
            "gold_declarations": self.result.gold_count,
            "predicted_declarations": self.result.pred_count,
            "matched": self.result.matched,
            "false_positives": self.result.false_positives,
            "false_negatives": self.result.false_negatives,
            "charged": self.result.charged,
            "errors": dict(self.errors),
        }


@dataclass
class EvalReport:
    accuracy: float
    problems: list[ProblemScore]
    error_tallies: Counter

    def to_json_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "problems": [p.to_json_dict() for p in self.problems],
            "error_tallies": {k: self.error_tallies[k] for k in CATEGORIES if self.error_tallies[k]},
        }


def evaluate_corpus(
    pairs: list[tuple[str, str]],
    ids: list[str] | None = None,
    tol: float = TOLERANCE,
) -> EvalReport:
    """Score ``(predicted_ir, gold_ir)`` text pairs.

    Gold sides must parse and canonicalize cleanly; prediction failures
    are scored, not raised.
    """
    scores: list[ProblemScore] = []
    for k, (pred_text, gold_text) in enumerate(pairs):
        pid = ids[k] if ids else str(k)
        gold_doc = parse_ir(gold_text)
        gold_form = canonicalize(gold_doc)
        try:
            pred_doc = parse_ir(pred_text)
        except ProblemSyntaxError:
            result = MatchResult(gold_count=1 + len(gold_form.rows), pred_count=0)
            scores.append(ProblemScore(pid, result, Counter({PROBLEM_SYNTAX: 1})))
            continue
        result = match_declarations(pred_doc, gold_form, tol)
        errors = classify_errors(pred_doc, gold_doc, tol)
        scores.append(ProblemScore(pid, result, errors))
    total_errors: Counter = Counter()
    for s in scores:
        total_errors.update(s.errors)
    return EvalReport(
        accuracy=accuracy([s.result for s in scores]),
        problems=scores,
        error_tallies=total_errors,
    )
