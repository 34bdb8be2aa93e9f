"""Exception taxonomy shared across the workbench.

Domain errors all derive from :class:`LpwbError` so callers (CLI, service)
can map them to exit code 1 / HTTP 4xx uniformly.
"""

from __future__ import annotations


class LpwbError(Exception):
    """Base class for all domain errors raised by this package."""


class NumberParseError(LpwbError):
    """A numeric token could not be normalized to a rational value."""


class ProblemSyntaxError(LpwbError):
    """The IR document as a whole is unusable.

    Raised for unbalanced DECLARATION tags, empty input, zero parseable
    declarations, duplicate objectives, or a well-formed document that
    declares no objective at all.
    """


class DeclarationSyntaxError(LpwbError):
    """A single DECLARATION block is malformed.

    Collected per block during parsing; does not abort the document.
    """

    def __init__(self, reason: str, index: int | None = None):
        self.reason = reason
        self.index = index
        super().__init__(reason if index is None else f"declaration {index}: {reason}")


class VariableResolutionError(LpwbError):
    """A constraint mentions a variable that cannot be resolved to a column."""


class CanonicalizeError(LpwbError):
    """A declaration cannot be expanded into a canonical row."""


class DimensionError(LpwbError):
    """Operands disagree on dimensions (solver rows, attention shapes)."""


class DegenerateMaskError(LpwbError):
    """Vocabulary masking removed all probability mass."""


class EmptyCorpusError(LpwbError):
    """An aggregate was requested over zero gold declarations."""


class SchemaError(LpwbError):
    """A corpus line does not conform to the record schema."""

    def __init__(self, reason: str, line: int | None = None, field: str | None = None):
        self.reason = reason
        self.line = line
        self.field = field
        where = f" (line {line}" + (f", field {field!r})" if field else ")") if line is not None else ""
        super().__init__(reason + where)


class MissingEntityError(LpwbError):
    """A prompt cannot be built because a required entity label is absent."""

    def __init__(self, label: str, detail: str = ""):
        self.label = label
        super().__init__(f"no {label} entity tagged" + (f": {detail}" if detail else ""))
