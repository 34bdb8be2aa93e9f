"""Bundled worked examples: seven small LP word problems.

Each record carries the description text, hand-checked entity spans,
the reference declaration list in tagged form, and the canonical
coefficient table it must reduce to. ``python -m lpwb.fixtures OUT``
writes them as JSONL; the same records ship under ``lpwb/data``.
"""

from __future__ import annotations

import json
import sys

from .tagging import EntitySpan


def _mark(
    text: str,
    label: str,
    context: str,
    target: str | None = None,
    occurrence: int = 1,
) -> dict:
    """Span dict for ``target`` inside the ``occurrence``-th ``context``."""
    target = target if target is not None else context
    start = -1
    for _ in range(occurrence):
        start = text.index(context, start + 1)
    begin = start + context.index(target)
    span = EntitySpan(begin, begin + len(target), label, text[begin:begin + len(target)])
    if span.text != target:
        raise ValueError(f"located {span.text!r}, wanted {target!r}")
    return span.to_json_dict()


RESOURCE_TEXT = (
    "There is only 5000 grams of a rare flower extract needed to make both "
    "youth and adult doses. Youth doses contain 20 grams of extract and "
    "adult doses contain 35 grams. Demand is such that at least three times "
    "as many youth doses are needed than the adult doses. A minimum of 10 "
    "adult doses need to be made. Youth doses are sold for a profit of $5 "
    "while adult doses are sold at a profit of $3. How many of each dose "
    "should be prepared to maximize profit?"
)

RESOURCE_IR = """\
<DECLARATION>
    <OBJ_DIR> maximize </OBJ_DIR>
    <OBJ_NAME> profit </OBJ_NAME> [is]
    <VAR> Youth doses </VAR> [TIMES] <PARAM> 5 </PARAM>
    <VAR> adult doses </VAR> [TIMES] <PARAM> 3 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> only </CONST_DIR> <LIMIT> 5000 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]
    <VAR> Youth doses </VAR> [TIMES] <PARAM> 20 </PARAM>
    <VAR> adult doses </VAR> [TIMES] <PARAM> 35 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at least </CONST_DIR>
    <OPERATOR> GREATER_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [XBY_CONSTRAINT] </CONST_TYPE>
    <VAR> adult doses </VAR> [TIMES] <PARAM> three </PARAM> [is] <VAR> youth doses </VAR>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> minimum </CONST_DIR> <LIMIT> 10 </LIMIT>
    <OPERATOR> GREATER_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LOWER_BOUND] </CONST_TYPE> [for]
    <VAR> adult doses </VAR>
</DECLARATION>
"""


def _resource() -> dict:
    t = RESOURCE_TEXT
    entities = [
        _mark(t, "CONST_DIR", "only"),
        _mark(t, "LIMIT", "5000"),
        _mark(t, "VAR", "both youth", "youth"),
        _mark(t, "VAR", "youth and adult doses", "adult doses"),
        _mark(t, "VAR", "Youth doses contain", "Youth doses"),
        _mark(t, "PARAM", "contain 20", "20"),
        _mark(t, "VAR", "and adult doses contain", "adult doses"),
        _mark(t, "PARAM", "contain 35", "35"),
        _mark(t, "CONST_DIR", "at least"),
        _mark(t, "PARAM", "three"),
        _mark(t, "VAR", "many youth doses", "youth doses"),
        _mark(t, "VAR", "than the adult doses", "adult doses"),
        _mark(t, "CONST_DIR", "minimum"),
        _mark(t, "LIMIT", "of 10", "10"),
        _mark(t, "VAR", "10 adult doses", "adult doses"),
        _mark(t, "VAR", "Youth doses are sold", "Youth doses"),
        _mark(t, "PARAM", "of $5", "5"),
        _mark(t, "VAR", "while adult doses", "adult doses"),
        _mark(t, "PARAM", "of $3", "3"),
        _mark(t, "OBJ_DIR", "maximize"),
        _mark(t, "OBJ_NAME", "maximize profit", "profit"),
    ]
    canonical = {
        "variables": ["Youth doses", "adult doses"],
        "direction": "maximize",
        "objective_name": "profit",
        "objective": [5, 3],
        "constraints": [
            {"coefficients": [20, 35], "rhs": 5000,
             "type": "LINEAR_CONSTRAINT", "const_dir": "only"},
            {"coefficients": [-1, 3], "rhs": 0,
             "type": "XBY_CONSTRAINT", "const_dir": "at least"},
            {"coefficients": [0, -1], "rhs": -10,
             "type": "LOWER_BOUND", "const_dir": "minimum"},
        ],
    }
    return {
        "id": "resource",
        "domain": "sales",
        "description": t,
        "entities": entities,
        "gold_ir": RESOURCE_IR,
        "gold_canonical": canonical,
    }


INVESTMENT_TEXT = (
    "Your client has $60,000 available to invest for a 1 year term. The "
    "money can be placed in a trust yielding a 2% return or in a savings "
    "account yielding a 3% return. Based on your experience, you advise "
    "your client that at least 15% of the investment be placed in the trust "
    "and that at most 80% of the investment be placed in the savings "
    "account. How much should your client invest in each so as to maximize "
    "his return on investment?"
)

INVESTMENT_IR = """\
<DECLARATION>
    <OBJ_DIR> maximize </OBJ_DIR>
    <OBJ_NAME> return </OBJ_NAME> [is]
    <VAR> trust </VAR> [TIMES] <PARAM> 2% </PARAM>
    <VAR> savings account </VAR> [TIMES] <PARAM> 3% </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> available </CONST_DIR> <LIMIT> 60,000 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [SUM_CONSTRAINT] </CONST_TYPE>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at least </CONST_DIR> <LIMIT> 15 </LIMIT>
    <OPERATOR> GREATER_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [RATIO_CONSTRAINT] </CONST_TYPE> [for]
    <VAR> trust </VAR>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at most </CONST_DIR> <LIMIT> 80 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [RATIO_CONSTRAINT] </CONST_TYPE> [for]
    <VAR> savings account </VAR>
</DECLARATION>
"""


def _investment() -> dict:
    t = INVESTMENT_TEXT
    entities = [
        _mark(t, "LIMIT", "60,000"),
        _mark(t, "CONST_DIR", "available"),
        _mark(t, "VAR", "a trust yielding", "trust"),
        _mark(t, "PARAM", "2%"),
        _mark(t, "VAR", "a savings account yielding", "savings account"),
        _mark(t, "PARAM", "3%"),
        _mark(t, "CONST_DIR", "at least"),
        _mark(t, "LIMIT", "15%"),
        _mark(t, "VAR", "in the trust", "trust"),
        _mark(t, "CONST_DIR", "at most"),
        _mark(t, "LIMIT", "80%"),
        _mark(t, "VAR", "the savings account", "savings account"),
        _mark(t, "OBJ_DIR", "maximize"),
        _mark(t, "OBJ_NAME", "maximize his return", "return"),
    ]
    canonical = {
        "variables": ["trust", "savings account"],
        "direction": "maximize",
        "objective_name": "return",
        "objective": [0.02, 0.03],
        "constraints": [
            {"coefficients": [1, 1], "rhs": 60000,
             "type": "SUM_CONSTRAINT", "const_dir": "available"},
            {"coefficients": [-0.85, 0.15], "rhs": 0,
             "type": "RATIO_CONSTRAINT", "const_dir": "at least"},
            {"coefficients": [-0.8, 0.2], "rhs": 0,
             "type": "RATIO_CONSTRAINT", "const_dir": "at most"},
        ],
    }
    return {
        "id": "investment",
        "domain": "investment",
        "description": t,
        "entities": entities,
        "gold_ir": INVESTMENT_IR,
        "gold_canonical": canonical,
    }


FARMING_TEXT = (
    "A farmer has 500 acres of land to grow turnips and pumpkins. Turnips "
    "require 50 minutes of watering and $80 worth of pesticide per acre. "
    "Pumpkins require 90 minutes of watering and $50 worth of pesticide per "
    "acre. The farmer has 40000 minutes available for watering and $34000 "
    "available to spend on pesticide. If the revenue per acre of turnips is "
    "$300 and the revenue per acre of pumpkins is $450, how many acres of "
    "each should he grow to maximize his revenue."
)

FARMING_IR = """\
<DECLARATION>
    <OBJ_DIR> maximize </OBJ_DIR>
    <OBJ_NAME> revenue </OBJ_NAME> [is]
    <VAR> turnips </VAR> [TIMES] <PARAM> 300 </PARAM>
    <VAR> pumpkins </VAR> [TIMES] <PARAM> 450 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> has </CONST_DIR> <LIMIT> 500 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [SUM_CONSTRAINT] </CONST_TYPE>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> available </CONST_DIR> <LIMIT> 40000 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]
    <VAR> Turnips </VAR> [TIMES] <PARAM> 50 </PARAM>
    <VAR> Pumpkins </VAR> [TIMES] <PARAM> 90 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> available </CONST_DIR> <LIMIT> 34000 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]
    <VAR> Turnips </VAR> [TIMES] <PARAM> 80 </PARAM>
    <VAR> Pumpkins </VAR> [TIMES] <PARAM> 50 </PARAM>
</DECLARATION>
"""


def _farming() -> dict:
    t = FARMING_TEXT
    entities = [
        _mark(t, "CONST_DIR", "farmer has 500", "has"),
        _mark(t, "LIMIT", "500 acres", "500"),
        _mark(t, "VAR", "grow turnips", "turnips"),
        _mark(t, "VAR", "and pumpkins", "pumpkins"),
        _mark(t, "VAR", "Turnips require", "Turnips"),
        _mark(t, "PARAM", "50 minutes", "50"),
        _mark(t, "PARAM", "$80", "80"),
        _mark(t, "VAR", "Pumpkins require", "Pumpkins"),
        _mark(t, "PARAM", "90 minutes", "90"),
        _mark(t, "PARAM", "$50 worth", "50"),
        _mark(t, "CONST_DIR", "available", occurrence=1),
        _mark(t, "LIMIT", "40000"),
        _mark(t, "CONST_DIR", "available", occurrence=2),
        _mark(t, "LIMIT", "34000"),
        _mark(t, "VAR", "acre of turnips", "turnips"),
        _mark(t, "PARAM", "$300", "300"),
        _mark(t, "VAR", "acre of pumpkins", "pumpkins"),
        _mark(t, "PARAM", "$450", "450"),
        _mark(t, "OBJ_DIR", "maximize"),
        _mark(t, "OBJ_NAME", "maximize his revenue", "revenue"),
    ]
    canonical = {
        "variables": ["turnips", "pumpkins"],
        "direction": "maximize",
        "objective_name": "revenue",
        "objective": [300, 450],
        "constraints": [
            {"coefficients": [1, 1], "rhs": 500,
             "type": "SUM_CONSTRAINT", "const_dir": "has"},
            {"coefficients": [50, 90], "rhs": 40000,
             "type": "LINEAR_CONSTRAINT", "const_dir": "available"},
            {"coefficients": [80, 50], "rhs": 34000,
             "type": "LINEAR_CONSTRAINT", "const_dir": "available"},
        ],
    }
    return {
        "id": "farming",
        "domain": "sales",
        "description": t,
        "entities": entities,
        "gold_ir": FARMING_IR,
        "gold_canonical": canonical,
    }


MINING_TEXT = (
    "A mining company has available a total of 100 square miles of mining "
    "sites and considering the use of two mining techniques: heap leaching "
    "and vat leaching. For each square mile of land, heap leaching "
    "technique can have a daily production of 3 tons of rare earth oxide "
    "per square miles but it also creates 8 tons of polluted wastewater and "
    "requires 10 extraction machines. On the other hand, vat leaching "
    "technique produces 5 tons of rare earth oxide per square miles per day "
    "while creating 17 tons of polluted wastewater and requiring 20 "
    "extraction machines. There are 100 machines available and due to "
    "environmental regulations, the amount of polluted wastewater must be "
    "at most 90 tons daily. Find the proportion of lands that use each "
    "mining technique in order to maximize the daily production of rare "
    "earth oxide."
)

MINING_IR = """\
<DECLARATION>
    <OBJ_DIR> maximize </OBJ_DIR>
    <OBJ_NAME> rare earth oxide </OBJ_NAME> [is]
    <VAR> heap leaching </VAR> [TIMES] <PARAM> 3 </PARAM>
    <VAR> vat leaching </VAR> [TIMES] <PARAM> 5 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> available </CONST_DIR> <LIMIT> 100 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]
    <VAR> heap leaching </VAR> [TIMES] <PARAM> 10 </PARAM>
    <VAR> vat leaching </VAR> [TIMES] <PARAM> 20 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at most </CONST_DIR> <LIMIT> 90 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]
    <VAR> heap leaching </VAR> [TIMES] <PARAM> 8 </PARAM>
    <VAR> vat leaching </VAR> [TIMES] <PARAM> 17 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> available </CONST_DIR> <LIMIT> 100 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [SUM_CONSTRAINT] </CONST_TYPE>
</DECLARATION>
"""


def _mining() -> dict:
    t = MINING_TEXT
    entities = [
        _mark(t, "CONST_DIR", "available", occurrence=1),
        _mark(t, "LIMIT", "100 square", "100"),
        _mark(t, "VAR", "heap leaching and", "heap leaching"),
        _mark(t, "VAR", "and vat leaching", "vat leaching"),
        _mark(t, "VAR", "heap leaching technique", "heap leaching"),
        _mark(t, "PARAM", "of 3 tons", "3"),
        _mark(t, "PARAM", "8 tons", "8"),
        _mark(t, "PARAM", "10 extraction", "10"),
        _mark(t, "VAR", "vat leaching technique", "vat leaching"),
        _mark(t, "PARAM", "produces 5 tons", "5"),
        _mark(t, "PARAM", "17 tons", "17"),
        _mark(t, "PARAM", "20 extraction", "20"),
        _mark(t, "LIMIT", "100 machines", "100"),
        _mark(t, "CONST_DIR", "available", occurrence=2),
        _mark(t, "CONST_DIR", "at most"),
        _mark(t, "LIMIT", "90"),
        _mark(t, "OBJ_DIR", "maximize"),
        _mark(t, "OBJ_NAME", "maximize the daily production of rare earth oxide",
              "rare earth oxide"),
    ]
    canonical = {
        "variables": ["heap leaching", "vat leaching"],
        "direction": "maximize",
        "objective_name": "rare earth oxide",
        "objective": [3, 5],
        "constraints": [
            {"coefficients": [10, 20], "rhs": 100,
             "type": "LINEAR_CONSTRAINT", "const_dir": "available"},
            {"coefficients": [8, 17], "rhs": 90,
             "type": "LINEAR_CONSTRAINT", "const_dir": "at most"},
            {"coefficients": [1, 1], "rhs": 100,
             "type": "SUM_CONSTRAINT", "const_dir": "available"},
        ],
    }
    return {
        "id": "mining",
        "domain": "production",
        "description": t,
        "entities": entities,
        "gold_ir": MINING_IR,
        "gold_canonical": canonical,
    }


TRANSPORT_TEXT = (
    "A shipping company need to transport packages by either truck or car. "
    "A truck can transport 50 packages per trip while a car can transport "
    "30 packages per trip. In addition, a truck uses 20 liters of gas per "
    "trip while a car uses 15 liters of gas per trip. There can be at most "
    "5 truck trips made and at least 30% of all the trips must be made by "
    "car. The company needs to transport at least 500 packages. How many of "
    "each transportation should they use to minimize the total amount of "
    "gas consumed?"
)

TRANSPORT_IR = """\
<DECLARATION>
    <OBJ_DIR> minimize </OBJ_DIR>
    <OBJ_NAME> amount of gas </OBJ_NAME> [is]
    <VAR> truck </VAR> [TIMES] <PARAM> 20 </PARAM>
    <VAR> car </VAR> [TIMES] <PARAM> 15 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at most </CONST_DIR> <LIMIT> 5 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [UPPER_BOUND] </CONST_TYPE> [for]
    <VAR> truck </VAR>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at least </CONST_DIR> <LIMIT> 30 </LIMIT>
    <OPERATOR> GREATER_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [RATIO_CONSTRAINT] </CONST_TYPE> [for]
    <VAR> car </VAR>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at least </CONST_DIR> <LIMIT> 500 </LIMIT>
    <OPERATOR> GREATER_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]
    <VAR> truck </VAR> [TIMES] <PARAM> 50 </PARAM>
    <VAR> car </VAR> [TIMES] <PARAM> 30 </PARAM>
</DECLARATION>
"""


def _transport() -> dict:
    t = TRANSPORT_TEXT
    entities = [
        _mark(t, "VAR", "either truck", "truck"),
        _mark(t, "VAR", "or car", "car"),
        _mark(t, "VAR", "A truck can", "truck"),
        _mark(t, "PARAM", "50 packages", "50"),
        _mark(t, "VAR", "a car can", "car"),
        _mark(t, "PARAM", "30 packages", "30"),
        _mark(t, "VAR", "truck uses", "truck"),
        _mark(t, "PARAM", "20 liters", "20"),
        _mark(t, "VAR", "car uses", "car"),
        _mark(t, "PARAM", "15 liters", "15"),
        _mark(t, "CONST_DIR", "at most"),
        _mark(t, "LIMIT", "5 truck", "5"),
        _mark(t, "VAR", "5 truck trips", "truck"),
        _mark(t, "CONST_DIR", "at least", occurrence=1),
        _mark(t, "LIMIT", "30%"),
        _mark(t, "VAR", "by car", "car"),
        _mark(t, "CONST_DIR", "at least", occurrence=2),
        _mark(t, "LIMIT", "500 packages", "500"),
        _mark(t, "OBJ_DIR", "minimize"),
        _mark(t, "OBJ_NAME", "total amount of gas consumed", "amount of gas"),
    ]
    canonical = {
        "variables": ["truck", "car"],
        "direction": "minimize",
        "objective_name": "amount of gas",
        "objective": [20, 15],
        "constraints": [
            {"coefficients": [1, 0], "rhs": 5,
             "type": "UPPER_BOUND", "const_dir": "at most"},
            {"coefficients": [0.3, -0.7], "rhs": 0,
             "type": "RATIO_CONSTRAINT", "const_dir": "at least"},
            {"coefficients": [-50, -30], "rhs": -500,
             "type": "LINEAR_CONSTRAINT", "const_dir": "at least"},
        ],
    }
    return {
        "id": "transportation",
        "domain": "transportation",
        "description": t,
        "entities": entities,
        "gold_ir": TRANSPORT_IR,
        "gold_canonical": canonical,
    }


HEALTH_TEXT = (
    "A patient is undergoing radiation treatment involving two beams, Beam "
    "1 and Beam 2. Beam 1 delivers a dose of 0.3 units of medicine per "
    "minute to the benign area of the pancreas and 0.2 units of medicine "
    "per minute to the benign area of the skin. Beam 2 delivers 0.2 units "
    "of medicine per minute to the benign area of the pancreas and 0.1 "
    "units of medicine per minute to the benign area of the skin. In "
    "addition, beam 1 delivers 0.6 units of medicine per minute to the "
    "tumor and beam 2 delivers 0.4 units of medicine per minute to the "
    "tumor. At most 4 units of medicine should be received by the skin and "
    "at least 3 units of medicine should be delivered to the tumor. How "
    "many minutes of each beam should be used to minimize the total "
    "radiation received by the pancreas?"
)

HEALTH_IR = """\
<DECLARATION>
    <OBJ_DIR> minimize </OBJ_DIR>
    <OBJ_NAME> total radiation received by the pancreas </OBJ_NAME> [is]
    <VAR> Beam 1 </VAR> [TIMES] <PARAM> 0.3 </PARAM>
    <VAR> Beam 2 </VAR> [TIMES] <PARAM> 0.2 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> At most </CONST_DIR> <LIMIT> 4 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]
    <VAR> Beam 1 </VAR> [TIMES] <PARAM> 0.2 </PARAM>
    <VAR> Beam 2 </VAR> [TIMES] <PARAM> 0.1 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at least </CONST_DIR> <LIMIT> 3 </LIMIT>
    <OPERATOR> GREATER_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]
    <VAR> beam 1 </VAR> [TIMES] <PARAM> 0.6 </PARAM>
    <VAR> beam 2 </VAR> [TIMES] <PARAM> 0.4 </PARAM>
</DECLARATION>
"""


def _health() -> dict:
    t = HEALTH_TEXT
    entities = [
        _mark(t, "VAR", "Beam 1 and", "Beam 1"),
        _mark(t, "VAR", "and Beam 2", "Beam 2"),
        _mark(t, "VAR", "Beam 1 delivers", "Beam 1"),
        _mark(t, "PARAM", "0.3"),
        _mark(t, "PARAM", "and 0.2", "0.2"),
        _mark(t, "VAR", "Beam 2 delivers", "Beam 2"),
        _mark(t, "PARAM", "delivers 0.2", "0.2"),
        _mark(t, "PARAM", "0.1"),
        _mark(t, "VAR", "beam 1 delivers", "beam 1"),
        _mark(t, "PARAM", "0.6"),
        _mark(t, "VAR", "beam 2 delivers", "beam 2"),
        _mark(t, "PARAM", "0.4"),
        _mark(t, "CONST_DIR", "At most"),
        _mark(t, "LIMIT", " 4 units", "4"),
        _mark(t, "CONST_DIR", "at least"),
        _mark(t, "LIMIT", " 3 units", "3"),
        _mark(t, "OBJ_DIR", "minimize"),
        _mark(t, "OBJ_NAME", "total radiation received by the pancreas"),
    ]
    canonical = {
        "variables": ["Beam 1", "Beam 2"],
        "direction": "minimize",
        "objective_name": "total radiation received by the pancreas",
        "objective": [0.3, 0.2],
        "constraints": [
            {"coefficients": [0.2, 0.1], "rhs": 4,
             "type": "LINEAR_CONSTRAINT", "const_dir": "At most"},
            # A >= row negates through canonicalization, so the rhs is -3
            # even though the unsigned 3 is the number quoted in prose.
            {"coefficients": [-0.6, -0.4], "rhs": -3,
             "type": "LINEAR_CONSTRAINT", "const_dir": "at least"},
        ],
    }
    return {
        "id": "health",
        "domain": "science",
        "description": t,
        "entities": entities,
        "gold_ir": HEALTH_IR,
        "gold_canonical": canonical,
        "note": "canonical rhs of the second constraint is -3: "
                "greater-or-equal rows negate when oriented to <=",
    }


HOTEL_TEXT = (
    "A hotel employs cleaners and receptionists. Cleaners earn $500 per "
    "week and receptionists earn $350 per week. The hotel requires a "
    "minimum of 100 workers of whom at least 20 must be receptionists. To "
    "keep the hotel clean and running smoothly, the number of receptionists "
    "should be at least a third of the number of cleaners. The hotel wants "
    "to keep the weekly wage bill below $30000. Formulate a LP to minimize "
    "the wage bill."
)

HOTEL_IR = """\
<DECLARATION>
    <OBJ_DIR> minimize </OBJ_DIR>
    <OBJ_NAME> wage bill </OBJ_NAME> [is]
    <VAR> Cleaners </VAR> [TIMES] <PARAM> 500 </PARAM>
    <VAR> receptionists </VAR> [TIMES] <PARAM> 350 </PARAM>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> minimum </CONST_DIR> <LIMIT> 100 </LIMIT>
    <OPERATOR> GREATER_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [SUM_CONSTRAINT] </CONST_TYPE>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at least </CONST_DIR> <LIMIT> 20 </LIMIT>
    <OPERATOR> GREATER_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LOWER_BOUND] </CONST_TYPE> [for]
    <VAR> receptionists </VAR>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> at least </CONST_DIR>
    <OPERATOR> GREATER_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [XBY_CONSTRAINT] </CONST_TYPE>
    <VAR> cleaners </VAR> [TIMES] <PARAM> a third </PARAM> [is] <VAR> receptionists </VAR>
</DECLARATION>
<DECLARATION>
    <CONST_DIR> below </CONST_DIR> <LIMIT> 30000 </LIMIT>
    <OPERATOR> LESS_OR_EQUAL </OPERATOR>
    <CONST_TYPE> [LINEAR_CONSTRAINT] </CONST_TYPE> [is]
    <VAR> Cleaners </VAR> [TIMES] <PARAM> 500 </PARAM>
    <VAR> receptionists </VAR> [TIMES] <PARAM> 350 </PARAM>
</DECLARATION>
"""


def _hotel() -> dict:
    t = HOTEL_TEXT
    entities = [
        _mark(t, "VAR", "employs cleaners", "cleaners"),
        _mark(t, "VAR", "and receptionists", "receptionists"),
        _mark(t, "VAR", "Cleaners earn", "Cleaners"),
        _mark(t, "PARAM", "$500", "500"),
        _mark(t, "VAR", "receptionists earn", "receptionists"),
        _mark(t, "PARAM", "$350", "350"),
        _mark(t, "CONST_DIR", "minimum"),
        _mark(t, "LIMIT", "100"),
        _mark(t, "CONST_DIR", "at least 20", "at least"),
        _mark(t, "LIMIT", "20 must", "20"),
        _mark(t, "VAR", "be receptionists", "receptionists"),
        _mark(t, "VAR", "of receptionists", "receptionists"),
        _mark(t, "CONST_DIR", "at least a third", "at least"),
        _mark(t, "PARAM", "a third"),
        _mark(t, "VAR", "of cleaners", "cleaners"),
        _mark(t, "CONST_DIR", "below"),
        _mark(t, "LIMIT", "30000"),
        _mark(t, "OBJ_DIR", "minimize"),
        _mark(t, "OBJ_NAME", "minimize the wage bill", "wage bill"),
    ]
    canonical = {
        "variables": ["Cleaners", "receptionists"],
        "direction": "minimize",
        "objective_name": "wage bill",
        "objective": [500, 350],
        "constraints": [
            {"coefficients": [-1, -1], "rhs": -100,
             "type": "SUM_CONSTRAINT", "const_dir": "minimum"},
            {"coefficients": [0, -1], "rhs": -20,
             "type": "LOWER_BOUND", "const_dir": "at least"},
            {"coefficients": [0.3333, -1], "rhs": 0,
             "type": "XBY_CONSTRAINT", "const_dir": "at least"},
            {"coefficients": [500, 350], "rhs": 30000,
             "type": "LINEAR_CONSTRAINT", "const_dir": "below"},
        ],
    }
    return {
        "id": "hotel",
        "domain": "production",
        "description": t,
        "entities": entities,
        "gold_ir": HOTEL_IR,
        "gold_canonical": canonical,
        "note": "no staffing plan satisfies all four constraints: "
                "the cheapest mix meeting the workforce floors costs 46250",
    }


def fixture_records() -> list[dict]:
    """Fresh copies of the seven bundled problem records."""
    return [
        _resource(),
        _investment(),
        _farming(),
        _mining(),
        _transport(),
        _health(),
        _hotel(),
    ]


def write_jsonl(path: str) -> int:
    records = fixture_records()
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    return len(records)


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "fixtures.jsonl"
    count = write_jsonl(out)
    print(f"wrote {count} records to {out}")
