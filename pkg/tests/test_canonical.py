"""Canonical coefficient tables.

The GOLDEN tables below were worked out by hand from the fixture
problems, one row per constraint, every row oriented to <=. Tests
compare cell for cell at 1e-4 against what canonicalization produces.
"""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lpwb.canonical import (
    CanonicalForm,
    canonicalize,
    constraint_row,
    normalize_variable,
    resolve_variables,
)
from lpwb.errors import CanonicalizeError, VariableResolutionError
from lpwb.ir import (
    Constraint,
    ConstraintKind,
    IrDocument,
    ObjectiveDirection,
    Operator,
    parse_ir,
)

TOL = 1e-4

GOLDEN = {
    "resource": {
        "variables": ["Youth doses", "adult doses"],
        "direction": "maximize",
        "objective_name": "profit",
        "objective": [5, 3],
        "constraints": [
            ([20, 35], 5000, "LINEAR_CONSTRAINT"),
            ([-1, 3], 0, "XBY_CONSTRAINT"),
            ([0, -1], -10, "LOWER_BOUND"),
        ],
    },
    "investment": {
        "variables": ["trust", "savings account"],
        "direction": "maximize",
        "objective_name": "return",
        "objective": [0.02, 0.03],
        "constraints": [
            ([1, 1], 60000, "SUM_CONSTRAINT"),
            ([-0.85, 0.15], 0, "RATIO_CONSTRAINT"),
            ([-0.8, 0.2], 0, "RATIO_CONSTRAINT"),
        ],
    },
    "farming": {
        "variables": ["turnips", "pumpkins"],
        "direction": "maximize",
        "objective_name": "revenue",
        "objective": [300, 450],
        "constraints": [
            ([1, 1], 500, "SUM_CONSTRAINT"),
            ([50, 90], 40000, "LINEAR_CONSTRAINT"),
            ([80, 50], 34000, "LINEAR_CONSTRAINT"),
        ],
    },
    "mining": {
        "variables": ["heap leaching", "vat leaching"],
        "direction": "maximize",
        "objective_name": "rare earth oxide",
        "objective": [3, 5],
        "constraints": [
            ([10, 20], 100, "LINEAR_CONSTRAINT"),
            ([8, 17], 90, "LINEAR_CONSTRAINT"),
            ([1, 1], 100, "SUM_CONSTRAINT"),
        ],
    },
    "transportation": {
        "variables": ["truck", "car"],
        "direction": "minimize",
        "objective_name": "amount of gas",
        "objective": [20, 15],
        "constraints": [
            ([1, 0], 5, "UPPER_BOUND"),
            ([0.3, -0.7], 0, "RATIO_CONSTRAINT"),
            ([-50, -30], -500, "LINEAR_CONSTRAINT"),
        ],
    },
    "health": {
        "variables": ["Beam 1", "Beam 2"],
        "direction": "minimize",
        "objective_name": "total radiation received by the pancreas",
        "objective": [0.3, 0.2],
        "constraints": [
            ([0.2, 0.1], 4, "LINEAR_CONSTRAINT"),
            # prose says "at least 3"; oriented to <= the rhs is -3
            ([-0.6, -0.4], -3, "LINEAR_CONSTRAINT"),
        ],
    },
    "hotel": {
        "variables": ["Cleaners", "receptionists"],
        "direction": "minimize",
        "objective_name": "wage bill",
        "objective": [500, 350],
        "constraints": [
            ([-1, -1], -100, "SUM_CONSTRAINT"),
            ([0, -1], -20, "LOWER_BOUND"),
            ([Fraction(1, 3), -1], 0, "XBY_CONSTRAINT"),
            ([500, 350], 30000, "LINEAR_CONSTRAINT"),
        ],
    },
}


def assert_matches_golden(form: CanonicalForm, golden: dict) -> None:
    assert form.variables == golden["variables"]
    assert form.direction.value == golden["direction"]
    assert form.objective_name == golden["objective_name"]
    for got, want in zip(form.objective, golden["objective"], strict=True):
        assert abs(float(got) - float(want)) <= TOL
    assert len(form.rows) == len(golden["constraints"])
    for row, (coeffs, rhs, kind) in zip(form.rows, golden["constraints"]):
        assert row.source_kind.value == kind
        assert abs(float(row.rhs) - float(rhs)) <= TOL
        for got, want in zip(row.coefficients, coeffs, strict=True):
            assert abs(float(got) - float(want)) <= TOL


@pytest.mark.parametrize("pid", sorted(GOLDEN))
def test_fixture_canonicalization_matches_golden(pid, by_id):
    form = canonicalize(parse_ir(by_id[pid]["gold_ir"]))
    assert_matches_golden(form, GOLDEN[pid])


def test_geq_rows_are_negated_leq_rows(by_id):
    """A >= constraint emits exactly the negation of its <= reading."""
    from copy import deepcopy

    for pid, record in by_id.items():
        doc = parse_ir(record["gold_ir"])
        names = resolve_variables(doc)
        index = {normalize_variable(n): i for i, n in enumerate(names)}
        for con in doc.constraints:
            if con.operator is not Operator.GREATER_OR_EQUAL:
                continue
            row = constraint_row(con, index, len(names))
            flipped = deepcopy(con)
            flipped.operator = Operator.LESS_OR_EQUAL
            mirror = constraint_row(flipped, index, len(names))
            assert row.coefficients == [-v for v in mirror.coefficients], pid
            assert row.rhs == -mirror.rhs, pid


def test_health_lower_limit_negates(gold_forms):
    row = gold_forms["health"].rows[1]
    assert row.rhs == -3
    assert row.coefficients == [Fraction(-3, 5), Fraction(-2, 5)]


def test_resolve_variables_orders(by_id):
    doc = parse_ir(by_id["resource"]["gold_ir"])
    assert resolve_variables(doc) == ["Youth doses", "adult doses"]
    doc = parse_ir(by_id["transportation"]["gold_ir"])
    assert resolve_variables(doc) == ["truck", "car"]


def test_first_surface_form_names_the_column(by_id):
    # farming constraints say "Turnips"; the objective said "turnips" first
    form = canonicalize(parse_ir(by_id["farming"]["gold_ir"]))
    assert form.variables == ["turnips", "pumpkins"]


def test_normalize_variable():
    assert normalize_variable("Youth  Doses") == "youth dose"
    assert normalize_variable("doses") == normalize_variable("dose")
    assert normalize_variable("glass") == "glass"  # double s is not a plural
    assert normalize_variable("s") == "s"


def test_strict_mode_blocks_new_columns():
    text = (
        "<DECLARATION>"
        " <OBJ_DIR> maximize </OBJ_DIR> <OBJ_NAME> profit </OBJ_NAME> [is]"
        " <VAR> x </VAR> [TIMES] <PARAM> 1 </PARAM>"
        "</DECLARATION>"
        "<DECLARATION>"
        " <CONST_DIR> at most </CONST_DIR> <LIMIT> 5 </LIMIT>"
        " <OPERATOR> LESS_OR_EQUAL </OPERATOR>"
        " <CONST_TYPE> [UPPER_BOUND] </CONST_TYPE> [for] <VAR> y </VAR>"
        "</DECLARATION>"
    )
    doc = parse_ir(text)
    assert resolve_variables(doc) == ["x", "y"]
    with pytest.raises(VariableResolutionError):
        resolve_variables(doc, strict=True)
    with pytest.raises(VariableResolutionError):
        canonicalize(doc, strict=True)


def test_canonicalize_needs_an_objective():
    doc = IrDocument(declarations=[], errors=[], source_text="")
    with pytest.raises(CanonicalizeError, match="no objective"):
        canonicalize(doc)


def test_solver_input_negates_maximization(gold_forms):
    c, A, b = gold_forms["farming"].solver_input()
    assert c == [-300, -450]
    assert A[0] == [1, 1] and b[0] == 500

    c, _, _ = gold_forms["health"].solver_input()
    assert c == [Fraction(3, 10), Fraction(1, 5)]  # minimize passes through


@pytest.mark.parametrize("operator", list(Operator))
@given(
    f=st.fractions(
        min_value=Fraction(1, 100), max_value=Fraction(1), max_denominator=100
    )
)
def test_ratio_rows_balance(operator, f):
    con = Constraint(
        kind=ConstraintKind.RATIO,
        const_dir_text="at least",
        operator=operator,
        limit=f,
        variable="x",
    )
    row = constraint_row(con, {"x": 0, "y": 1}, 2)
    assert row.rhs == 0
    geq = operator is Operator.GREATER_OR_EQUAL
    assert row.coefficients[0] == (f - 1 if geq else 1 - f)
    assert row.coefficients[1] == (f if geq else -f)
    assert sum(row.coefficients) == (2 * f - 1 if geq else 1 - 2 * f)


@pytest.mark.parametrize("operator", list(Operator))
@given(
    k=st.fractions(
        min_value=Fraction(1, 10), max_value=Fraction(10), max_denominator=20
    )
)
def test_comparison_rows_use_unit_and_multiplier(operator, k):
    con = Constraint(
        kind=ConstraintKind.XBY,
        const_dir_text="at least",
        operator=operator,
        base="y",
        compared="x",
        multiplier=k,
    )
    row = constraint_row(con, {"x": 0, "y": 1}, 2)
    assert row.rhs == 0
    if operator is Operator.GREATER_OR_EQUAL:
        assert row.coefficients == [Fraction(-1), k]
    else:
        assert row.coefficients == [Fraction(1), -k]


def test_sum_rows_span_every_column(by_id):
    form = canonicalize(parse_ir(by_id["investment"]["gold_ir"]))
    assert form.rows[0].coefficients == [1, 1]
    # GEQ sum row negates (hotel: minimum of 100 workers)
    form = canonicalize(parse_ir(by_id["hotel"]["gold_ir"]))
    assert form.rows[0].coefficients == [-1, -1]
    assert form.rows[0].rhs == -100


def test_upper_and_lower_bound_rows(gold_forms):
    upper = gold_forms["transportation"].rows[0]
    assert (upper.coefficients, upper.rhs) == ([1, 0], 5)
    lower = gold_forms["resource"].rows[2]
    assert (lower.coefficients, lower.rhs) == ([0, -1], -10)


def test_canonicalize_is_deterministic(by_id):
    text = by_id["mining"]["gold_ir"]
    first = canonicalize(parse_ir(text))
    second = canonicalize(parse_ir(text))
    assert first == second


def test_constraint_permutation_keeps_columns(by_id):
    doc = parse_ir(by_id["farming"]["gold_ir"])
    base = canonicalize(doc)
    shuffled = IrDocument(
        declarations=[doc.declarations[0]] + doc.declarations[1:][::-1],
        errors=[],
        source_text="",
    )
    form = canonicalize(shuffled)
    assert form.variables == base.variables
    assert form.objective == base.objective
    assert [
        (r.coefficients, r.rhs) for r in form.rows
    ] == [(r.coefficients, r.rhs) for r in base.rows][::-1]


def test_json_round_trip(gold_forms):
    for pid, form in gold_forms.items():
        data = form.to_json_dict()
        again = CanonicalForm.from_json_dict(data)
        assert again.to_json_dict() == data, pid
        assert CanonicalForm.from_json(form.to_json()).to_json_dict() == data


def test_from_json_dict_reads_floats_exactly():
    form = CanonicalForm.from_json_dict(
        {
            "variables": ["x"],
            "direction": "minimize",
            "objective": [0.3333],
            "constraints": [
                {"coefficients": [0.1], "rhs": 4, "type": "LINEAR_CONSTRAINT"}
            ],
        }
    )
    assert form.objective == [Fraction(3333, 10000)]
    assert form.rows[0].coefficients == [Fraction(1, 10)]
    assert form.objective_name == ""


@pytest.mark.parametrize(
    "data",
    [
        {"variables": ["x"], "direction": "sideways", "objective": [1], "constraints": []},
        {"variables": ["x"], "objective": [1], "constraints": []},
        {"variables": ["x"], "direction": "minimize", "objective": [1, 2], "constraints": []},
        {
            "variables": ["x"],
            "direction": "minimize",
            "objective": [1],
            "constraints": [{"coefficients": [1, 2], "rhs": 0}],
        },
        {
            "variables": ["x"],
            "direction": "minimize",
            "objective": [1],
            "constraints": [{"rhs": 0}],
        },
    ],
)
def test_from_json_dict_rejects_malformed(data):
    with pytest.raises(CanonicalizeError):
        CanonicalForm.from_json_dict(data)


def test_row_for_unknown_variable_fails():
    con = Constraint(
        kind=ConstraintKind.UPPER_BOUND,
        const_dir_text="at most",
        operator=Operator.LESS_OR_EQUAL,
        limit=Fraction(5),
        variable="van",
    )
    with pytest.raises(VariableResolutionError):
        constraint_row(con, {"truck": 0}, 1)


def test_missing_limit_is_reported():
    con = Constraint(
        kind=ConstraintKind.SUM,
        const_dir_text="has",
        operator=Operator.LESS_OR_EQUAL,
        limit=None,
    )
    with pytest.raises(CanonicalizeError, match="missing its limit"):
        constraint_row(con, {"x": 0}, 1)


def test_table_rendering(gold_forms):
    assert gold_forms["resource"].to_table() == (
        "              var_0  var_1   rhs\n"
        "objective         5      3\n"
        "constraint_0     20     35  5000\n"
        "constraint_1     -1      3     0\n"
        "constraint_2      0     -1   -10"
    )
    assert gold_forms["hotel"].to_table() == (
        "               var_0  var_1    rhs\n"
        "objective        500    350\n"
        "constraint_0      -1     -1   -100\n"
        "constraint_1       0     -1    -20\n"
        "constraint_2  0.3333     -1      0\n"
        "constraint_3     500    350  30000"
    )
