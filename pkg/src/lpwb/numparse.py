"""Numeric token normalization.

Every quantity in the workbench is an exact :class:`fractions.Fraction`.
Tokens arrive as free text copied out of problem descriptions: plain
numerals ("35"), thousands-grouped numerals ("60,000"), decimals ("0.3"),
percents ("15%"), number words ("three", "ONE"), and fraction words
("a third", "half"). Normalization is context sensitive: in ratio context
a bare number in (1, 100] is read as a percentage, because ratio limits
are stated as percents in source text but stored as fractions of a total.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .errors import NumberParseError

# Contexts: "param" for coefficients/multipliers, "limit" for right-hand
# sides, "ratio" for proportion-of-total limits.
CONTEXTS = ("param", "limit", "ratio")

_CURRENCY = "$€£"

_NUMERAL_RE = re.compile(
    r"""^
    (?P<sign>[+-])?
    (?P<int>\d{1,3}(?:,\d{3})+|\d+)      # 60,000 or 60000
    (?:\.(?P<frac>\d+))?                  # optional decimal part
    (?P<pct>\s?%)?                        # optional percent sign
    $""",
    re.VERBOSE,
)

_RATIONAL_RE = re.compile(r"^(?P<sign>[+-])?(?P<num>\d+)\s*/\s*(?P<den>\d+)$")


def _parse_value(line: str) -> Fraction:
    line = line.strip()
    m = _RATIONAL_RE.match(line)
    if m:
        return Fraction(int(m.group("num")), int(m.group("den"))) * (
            -1 if m.group("sign") == "-" else 1
        )
    return Fraction(line)


@lru_cache(maxsize=None)
def default_number_words() -> dict[str, Fraction]:
    """Number-word lexicon bundled with the package.

    Lines are ``phrase<TAB>value`` with ``#`` comments; values may be
    integers, decimals, or ``a/b`` rationals. Phrases are matched after
    casefolding and whitespace collapsing.
    """
    text = resources.files("lpwb.lexicons").joinpath("number_words.txt").read_text("utf-8")
    return parse_number_words(text)


def parse_number_words(text: str) -> dict[str, Fraction]:
    words: dict[str, Fraction] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        phrase, _, value = line.partition("\t")
        if not value:
            raise NumberParseError(f"bad number-word line: {raw!r}")
        key = " ".join(phrase.casefold().split())
        words[key] = _parse_value(value)
    return words


def normalize_number(
    token: str,
    context: str = "param",
    words: dict[str, Fraction] | None = None,
) -> Fraction:
    """Normalize a numeric surface token to an exact rational.

    ``context`` selects the percent convention: explicit ``%`` always
    divides by 100; in ``ratio`` context a bare value in (1, 100] is also
    divided by 100 (ratio limits are percents in source text).
    """
    if context not in CONTEXTS:
        raise ValueError(f"unknown context {context!r}")
    text = token.strip()
    if not text:
        raise NumberParseError("empty numeric token")
    if text[0] in _CURRENCY:
        text = text[1:].strip()

    if words is None:
        words = default_number_words()
    key = " ".join(text.casefold().split())
    percent = False
    if key.endswith("%"):
        stripped = key[:-1].strip()
        if stripped in words:
            key, percent = stripped, True
    if key in words:
        value = words[key]
    else:
        m = _RATIONAL_RE.match(text)
        if m:
            value = Fraction(int(m.group("num")), int(m.group("den")))
            if m.group("sign") == "-":
                value = -value
            return _contextualize(value, percent=False, context=context)
        m = _NUMERAL_RE.match(text)
        if m is None:
            raise NumberParseError(f"cannot parse numeric token {token!r}")
        digits = m.group("int").replace(",", "")
        value = Fraction(digits)
        if m.group("frac"):
            value += Fraction(int(m.group("frac")), 10 ** len(m.group("frac")))
        if m.group("sign") == "-":
            value = -value
        percent = m.group("pct") is not None
    return _contextualize(value, percent=percent, context=context)


def _contextualize(value: Fraction, percent: bool, context: str) -> Fraction:
    if percent:
        return value / 100
    if context == "ratio" and 1 < value <= 100:
        return value / 100
    return value


def is_numeric_token(token: str, words: dict[str, Fraction] | None = None) -> bool:
    """True when :func:`normalize_number` would accept the token."""
    try:
        normalize_number(token, "param", words)
        return True
    except NumberParseError:
        return False


def format_number(value: Fraction) -> str:
    """Compact exact rendering: integer, finite decimal, or ``a/b``."""
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den == 1:  # finite decimal expansion
        places = max(twos, fives)
        scaled = value * 10**places
        text = f"{scaled.numerator}".rjust(places + 1, "0")
        sign = "-" if value < 0 else ""
        text = text.lstrip("-")
        whole, frac = text[:-places] or "0", text[-places:]
        return f"{sign}{whole}.{frac}"
    return f"{value.numerator}/{value.denominator}"


def display_number(value: Fraction | float, places: int = 4) -> str:
    """Rendering for tables and JSON export: at most ``places`` decimals."""
    rounded = round(float(value), places)
    if rounded == int(rounded):
        return str(int(rounded))
    return f"{rounded:.{places}f}".rstrip("0").rstrip(".")


def export_number(value: Fraction | float, places: int = 4) -> float | int:
    """JSON export value: rounded float, collapsed to int when integral."""
    rounded = round(float(value), places)
    if rounded == int(rounded):
        return int(rounded)
    return rounded
