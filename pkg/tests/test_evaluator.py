"""Declaration-level matching, the accuracy metric, and error taxonomy."""

import random
from collections import Counter

import pytest

from lpwb.canonical import canonicalize
from lpwb.errors import EmptyCorpusError
from lpwb.evaluator import (
    CONSTRAINT_TYPE,
    DECLARATION_SYNTAX,
    DIRECTION_OPERATOR,
    LIMIT,
    PARAMETER,
    PROBLEM_SYNTAX,
    VARIABLE,
    MatchResult,
    accuracy,
    classify_errors,
    evaluate_corpus,
    match_declarations,
)
from lpwb.ir import parse_ir

EXTRA_BOUND = (
    "<DECLARATION>"
    " <CONST_DIR> at most </CONST_DIR> <LIMIT> 77 </LIMIT>"
    " <OPERATOR> LESS_OR_EQUAL </OPERATOR>"
    " <CONST_TYPE> [UPPER_BOUND] </CONST_TYPE> [for]"
    " <VAR> Youth doses </VAR>"
    "</DECLARATION>"
)

TINY_GOLD = (
    "<DECLARATION>"
    " <OBJ_DIR> maximize </OBJ_DIR> <OBJ_NAME> profit </OBJ_NAME> [is]"
    " <VAR> chairs </VAR> [TIMES] <PARAM> 4 </PARAM>"
    "</DECLARATION>"
    "<DECLARATION>"
    " <CONST_DIR> at most </CONST_DIR> <LIMIT> 5 </LIMIT>"
    " <OPERATOR> LESS_OR_EQUAL </OPERATOR>"
    " <CONST_TYPE> [UPPER_BOUND] </CONST_TYPE> [for] <VAR> chairs </VAR>"
    "</DECLARATION>"
)


def drop_last_block(ir_text: str) -> str:
    blocks = ir_text.strip().split("</DECLARATION>")
    return "</DECLARATION>".join(blocks[:-2]) + "</DECLARATION>"


def test_match_result_arithmetic():
    result = MatchResult(gold_count=4, pred_count=3, objective_matched=True,
                         pairs=[(0, 0), (1, 1)])
    assert result.matched == 3
    assert result.false_positives == 0
    assert result.false_negatives == 1
    assert result.charged == 1


def test_identity_prediction_matches_everything(by_id, gold_forms):
    doc = parse_ir(by_id["resource"]["gold_ir"])
    result = match_declarations(doc, gold_forms["resource"])
    assert result.matched == 4
    assert result.objective_matched
    assert result.false_positives == 0
    assert result.false_negatives == 0
    assert accuracy([result]) == 1.0


def test_identity_holds_for_every_fixture(records, gold_forms):
    results = [
        match_declarations(parse_ir(r["gold_ir"]), gold_forms[r["id"]])
        for r in records
    ]
    assert accuracy(results) == 1.0
    for record, result in zip(records, results):
        assert result.charged == 0, record["id"]


def test_canonical_form_prediction_is_accepted(gold_forms):
    # the pred side may arrive already canonicalized
    result = match_declarations(gold_forms["farming"], gold_forms["farming"])
    assert result.matched == 4


def test_missing_constraint_is_a_false_negative(by_id, gold_forms):
    pred = parse_ir(drop_last_block(by_id["resource"]["gold_ir"]))
    result = match_declarations(pred, gold_forms["resource"])
    assert result.matched == 3
    assert result.false_negatives == 1
    assert result.false_positives == 0
    assert accuracy([result]) == 0.75


def test_altered_limit_is_a_false_positive(by_id, gold_forms):
    pred = parse_ir(
        by_id["resource"]["gold_ir"].replace("<LIMIT> 5000 <", "<LIMIT> 4000 <")
    )
    result = match_declarations(pred, gold_forms["resource"])
    assert result.matched == 3
    assert result.false_positives == 1
    assert result.false_negatives == 0
    assert accuracy([result]) == 0.75


def test_empty_prediction_scores_zero():
    report = evaluate_corpus([("", TINY_GOLD), ("not ir either", TINY_GOLD)])
    for score in report.problems:
        assert score.result.pred_count == 0
        assert score.result.gold_count == 2
        assert score.errors == Counter({PROBLEM_SYNTAX: 1})
    assert report.accuracy == 0.0


def test_extra_prediction_clamps_false_negatives(by_id, gold_forms):
    # five predicted declarations against four gold ones: FN stays 0
    pred = parse_ir(by_id["resource"]["gold_ir"] + EXTRA_BOUND)
    result = match_declarations(pred, gold_forms["resource"])
    assert result.pred_count == 5
    assert result.matched == 4
    assert result.false_positives == 1
    assert result.false_negatives == 0
    assert accuracy([result]) == 0.75


def test_charge_clamps_at_gold_size():
    # a wild prediction cannot push one problem's penalty past its size
    result = MatchResult(gold_count=2, pred_count=4)
    assert result.false_positives == 4
    assert result.charged == 2
    assert accuracy([result]) == 0.0
    padding = MatchResult(gold_count=2, pred_count=2, objective_matched=True,
                          pairs=[(0, 0)])
    assert abs(accuracy([result, padding]) - 0.5) <= 1e-9


def test_two_problem_corpus_accuracy(by_id):
    pred_a = by_id["resource"]["gold_ir"] + EXTRA_BOUND  # one false positive
    report = evaluate_corpus([(pred_a, by_id["resource"]["gold_ir"]),
                              (TINY_GOLD, TINY_GOLD)])
    assert abs(report.accuracy - 5 / 6) <= 1e-9
    assert abs(report.accuracy - 0.8333) <= 1e-4


def test_accuracy_rejects_empty_corpus():
    with pytest.raises(EmptyCorpusError):
        accuracy([])
    with pytest.raises(EmptyCorpusError):
        accuracy([MatchResult(gold_count=0, pred_count=0)])


def test_fuzzed_accuracy_stays_on_the_unit_interval():
    rng = random.Random(41)
    triples_seen = 0
    while triples_seen < 10_000:
        batch = []
        for _ in range(rng.randint(1, 5)):
            gold = rng.randint(1, 8)
            pred = rng.randint(0, 10)
            matched = rng.randint(0, min(pred, gold))
            result = MatchResult(
                gold_count=gold,
                pred_count=pred,
                pairs=[(i, i) for i in range(matched)],
            )
            assert result.false_positives + result.false_negatives >= 0
            batch.append(result)
            triples_seen += 1
        value = accuracy(batch)
        assert 0.0 <= value <= 1.0


def test_matching_more_rows_never_hurts():
    for gold in range(1, 6):
        for pred in range(0, 7):
            scores = []
            for matched in range(0, min(pred, gold) + 1):
                result = MatchResult(
                    gold_count=gold,
                    pred_count=pred,
                    pairs=[(i, i) for i in range(matched)],
                )
                scores.append(accuracy([result]))
            assert scores == sorted(scores), (gold, pred)


def test_matching_is_permutation_invariant(by_id, gold_forms):
    text = by_id["farming"]["gold_ir"]
    blocks = [b + "</DECLARATION>" for b in text.strip().split("</DECLARATION>") if b.strip()]
    shuffled = "\n".join([blocks[0]] + blocks[1:][::-1])
    result = match_declarations(parse_ir(shuffled), gold_forms["farming"])
    assert result.matched == 4
    assert result.charged == 0


def test_variable_surface_variants_still_match(gold_forms):
    # plural and case differences unify before comparison
    pred = parse_ir(
        "<DECLARATION>"
        " <OBJ_DIR> maximize </OBJ_DIR> <OBJ_NAME> profit </OBJ_NAME> [is]"
        " <VAR> youth dose </VAR> [TIMES] <PARAM> 5 </PARAM>"
        " <VAR> Adult Doses </VAR> [TIMES] <PARAM> 3 </PARAM>"
        "</DECLARATION>"
    )
    result = match_declarations(pred, gold_forms["resource"])
    assert result.objective_matched


def test_equivalent_rows_match_across_kinds(by_id, gold_forms):
    # a SUM row restated as LINEAR with unit coefficients is the same row
    pred = parse_ir(
        by_id["farming"]["gold_ir"].replace(
            "<CONST_DIR> has </CONST_DIR> <LIMIT> 500 </LIMIT>\n"
            "    <OPERATOR> LESS_OR_EQUAL </OPERATOR>\n"
            "    <CONST_TYPE> [SUM_CONSTRAINT] </CONST_TYPE>",
            "<CONST_DIR> has </CONST_DIR> <LIMIT> 500 </LIMIT>\n"
            "    <OPERATOR> LESS_OR_EQUAL </OPERATOR>\n"
            "    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]\n"
            "    <VAR> turnips </VAR> [TIMES] <PARAM> 1 </PARAM>\n"
            "    <VAR> pumpkins </VAR> [TIMES] <PARAM> 1 </PARAM>",
        )
    )
    result = match_declarations(pred, gold_forms["farming"])
    assert result.matched == 4


def test_unknown_variable_mass_blocks_a_match(gold_forms):
    pred = parse_ir(
        "<DECLARATION>"
        " <OBJ_DIR> maximize </OBJ_DIR> <OBJ_NAME> profit </OBJ_NAME> [is]"
        " <VAR> Youth doses </VAR> [TIMES] <PARAM> 5 </PARAM>"
        " <VAR> pet doses </VAR> [TIMES] <PARAM> 3 </PARAM>"
        "</DECLARATION>"
    )
    result = match_declarations(pred, gold_forms["resource"])
    assert not result.objective_matched


def test_greedy_matching_agrees_with_exhaustive_search(records, gold_forms):
    """Greedy pair selection must find the maximum assignment here."""
    from itertools import permutations

    def brute_force(pred_rows, gold_rows, tol=1e-4):
        def close(a, b):
            return all(abs(float(x) - float(y)) <= tol for x, y in zip(a[0], b[0])) \
                and abs(float(a[1]) - float(b[1])) <= tol

        best = 0
        idx = range(len(gold_rows))
        for perm in permutations(idx, min(len(pred_rows), len(gold_rows))):
            count = sum(
                close(pred_rows[i], gold_rows[g])
                for i, g in enumerate(perm)
            )
            best = max(best, count)
        return best

    for record in records:
        gold = gold_forms[record["id"]]
        variants = [
            record["gold_ir"],
            drop_last_block(record["gold_ir"]),
        ]
        for text in variants:
            pred = parse_ir(text)
            pred_form = canonicalize(pred) if pred.objective else None
            if pred_form is None:
                continue
            rows = [(list(r.coefficients), r.rhs) for r in pred_form.rows]
            gold_rows = [(list(r.coefficients), r.rhs) for r in gold.rows]
            greedy = len(match_declarations(pred, gold).pairs)
            assert greedy == brute_force(rows, gold_rows), record["id"]


def test_kind_confusion_charges_only_constraint_type():
    gold = parse_ir(
        "<DECLARATION>"
        " <OBJ_DIR> maximize </OBJ_DIR> <OBJ_NAME> profit </OBJ_NAME> [is]"
        " <VAR> pills </VAR> [TIMES] <PARAM> 2 </PARAM>"
        " <VAR> syrup </VAR> [TIMES] <PARAM> 3 </PARAM>"
        "</DECLARATION>"
        "<DECLARATION>"
        " <CONST_DIR> at least </CONST_DIR> <LIMIT> 15 </LIMIT>"
        " <OPERATOR> GREATER_OR_EQUAL </OPERATOR>"
        " <CONST_TYPE> [RATIO_CONSTRAINT] </CONST_TYPE> [for] <VAR> pills </VAR>"
        "</DECLARATION>"
    )
    pred = parse_ir(gold.source_text.replace("[RATIO_CONSTRAINT]", "[LOWER_BOUND]"))
    tallies = classify_errors(pred, gold)
    assert tallies == Counter({CONSTRAINT_TYPE: 1})


def test_wrong_limit_charges_limit():
    gold = parse_ir(
        "<DECLARATION>"
        " <OBJ_DIR> maximize </OBJ_DIR> <OBJ_NAME> profit </OBJ_NAME> [is]"
        " <VAR> tables </VAR> [TIMES] <PARAM> 90 </PARAM>"
        "</DECLARATION>"
        "<DECLARATION>"
        " <CONST_DIR> budget </CONST_DIR> <LIMIT> 20000 </LIMIT>"
        " <OPERATOR> LESS_OR_EQUAL </OPERATOR>"
        " <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]"
        " <VAR> tables </VAR> [TIMES] <PARAM> 100 </PARAM>"
        "</DECLARATION>"
    )
    pred = parse_ir(gold.source_text.replace("<LIMIT> 20000 <", "<LIMIT> 500 <"))
    assert classify_errors(pred, gold) == Counter({LIMIT: 1})


def test_flipped_operator_charges_direction():
    gold = parse_ir(TINY_GOLD)
    pred = parse_ir(
        TINY_GOLD
        .replace("LESS_OR_EQUAL", "GREATER_OR_EQUAL")
        .replace("[UPPER_BOUND]", "[LOWER_BOUND]")
    )
    # kind and operator both moved; the kind difference wins
    assert classify_errors(pred, gold) == Counter({CONSTRAINT_TYPE: 1})
    pred = parse_ir(TINY_GOLD.replace("LESS_OR_EQUAL", "GREATER_OR_EQUAL"))
    assert classify_errors(pred, gold) == Counter({DIRECTION_OPERATOR: 1})


def test_coefficient_and_variable_charges():
    gold = parse_ir(
        "<DECLARATION>"
        " <OBJ_DIR> minimize </OBJ_DIR> <OBJ_NAME> cost </OBJ_NAME> [is]"
        " <VAR> vans </VAR> [TIMES] <PARAM> 7 </PARAM>"
        "</DECLARATION>"
        "<DECLARATION>"
        " <CONST_DIR> at most </CONST_DIR> <LIMIT> 50 </LIMIT>"
        " <OPERATOR> LESS_OR_EQUAL </OPERATOR>"
        " <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]"
        " <VAR> vans </VAR> [TIMES] <PARAM> 4 </PARAM>"
        "</DECLARATION>"
    )
    pred = parse_ir(gold.source_text.replace("<PARAM> 4 <", "<PARAM> 9 <"))
    assert classify_errors(pred, gold) == Counter({PARAMETER: 1})

    pred = parse_ir(gold.source_text.replace("<VAR> vans </VAR> [TIMES] <PARAM> 4",
                                             "<VAR> bikes </VAR> [TIMES] <PARAM> 4"))
    tallies = classify_errors(pred, gold)
    assert tallies[VARIABLE] == 1


def test_objective_errors_are_classified():
    gold = parse_ir(TINY_GOLD)
    pred = parse_ir(TINY_GOLD.replace("maximize", "minimize"))
    assert classify_errors(pred, gold)[DIRECTION_OPERATOR] == 1
    pred = parse_ir(TINY_GOLD.replace("<PARAM> 4 <", "<PARAM> 6 <", 1))
    assert classify_errors(pred, gold) == Counter({PARAMETER: 1})


def test_unparseable_and_broken_predictions(by_id):
    gold = parse_ir(TINY_GOLD)
    assert classify_errors(None, gold) == Counter({PROBLEM_SYNTAX: 1})
    broken = parse_ir(TINY_GOLD.replace(" </OBJ_NAME>", "", 1))
    assert classify_errors(broken, gold)[DECLARATION_SYNTAX] == 1


def test_corpus_report_shape(records):
    pairs = [(r["gold_ir"], r["gold_ir"]) for r in records]
    report = evaluate_corpus(pairs, ids=[r["id"] for r in records])
    assert report.accuracy == 1.0
    assert report.error_tallies == Counter()
    data = report.to_json_dict()
    assert data["accuracy"] == 1.0
    assert data["error_tallies"] == {}
    assert [p["id"] for p in data["problems"]] == [r["id"] for r in records]
    first = data["problems"][0]
    assert first["matched"] == first["gold_declarations"]
    assert first["charged"] == 0
