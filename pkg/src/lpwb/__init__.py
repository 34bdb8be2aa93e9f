"""Model linear-programming word problems interactively.

The pipeline runs text -> tagged entities -> declaration suggestions ->
tagged formulation -> canonical inequality table -> simplex solve, with
a declaration-level evaluator, a corpus validator, an HTTP session
service, and a command line on top.
"""

from .canonical import CanonicalForm, canonicalize, normalize_variable
from .dataset import (
    CorpusReport,
    CorpusStats,
    ProblemRecord,
    bundled_corpus,
    load_corpus,
    stats,
    validate_annotations,
    write_corpus,
)
from .errors import (
    CanonicalizeError,
    DeclarationSyntaxError,
    EmptyCorpusError,
    LpwbError,
    MissingEntityError,
    NumberParseError,
    ProblemSyntaxError,
    SchemaError,
    VariableResolutionError,
)
from .evaluator import EvalReport, accuracy, evaluate_corpus, match_declarations
from .ir import (
    Constraint,
    ConstraintKind,
    Declaration,
    IrDocument,
    Objective,
    ObjectiveDirection,
    Operator,
    Term,
    describe,
    parse_declaration,
    parse_ir,
    print_ir,
)
from .numparse import format_number, normalize_number
from .solver import Solution, check_feasible, solve
from .suggest import (
    DeclarationPrompt,
    GeneratorContract,
    RuleBasedGenerator,
    SuggestionFailure,
    build_prompt,
    suggest_declarations,
)
from .tagging import EntitySpan, Lexicons, tag_entities

__version__ = "0.1.0"

__all__ = [
    "CanonicalForm",
    "CanonicalizeError",
    "Constraint",
    "ConstraintKind",
    "CorpusReport",
    "CorpusStats",
    "Declaration",
    "DeclarationPrompt",
    "DeclarationSyntaxError",
    "EmptyCorpusError",
    "EntitySpan",
    "EvalReport",
    "GeneratorContract",
    "IrDocument",
    "Lexicons",
    "LpwbError",
    "MissingEntityError",
    "NumberParseError",
    "Objective",
    "ObjectiveDirection",
    "Operator",
    "ProblemRecord",
    "ProblemSyntaxError",
    "RuleBasedGenerator",
    "SchemaError",
    "Solution",
    "SuggestionFailure",
    "Term",
    "VariableResolutionError",
    "accuracy",
    "build_prompt",
    "bundled_corpus",
    "canonicalize",
    "check_feasible",
    "describe",
    "evaluate_corpus",
    "format_number",
    "load_corpus",
    "match_declarations",
    "normalize_number",
    "normalize_variable",
    "parse_declaration",
    "parse_ir",
    "print_ir",
    "solve",
    "stats",
    "suggest_declarations",
    "tag_entities",
    "validate_annotations",
    "write_corpus",
]
