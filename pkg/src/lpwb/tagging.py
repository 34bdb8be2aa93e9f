"""Rule-based entity tagging over problem descriptions.

Six labels are produced: VAR (decision variables), PARAM (rate
coefficients), LIMIT (right-hand sides), CONST_DIR (constraint cues like
"at least"), OBJ_DIR ("maximize"/"minimize") and OBJ_NAME (what is being
optimized). Cues and directions come from shippable lexicon files;
variables come from structural signals, chiefly the coordination that
introduces the choices ("turnips and pumpkins", "by either truck or
car"); numbers split into LIMIT or PARAM by adjacency to a cue.

Everything is deterministic: same text and lexicons, same spans.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import LpwbError
from .ir import Operator
from .numparse import default_number_words, parse_number_words

LABELS = ("VAR", "PARAM", "LIMIT", "CONST_DIR", "OBJ_DIR", "OBJ_NAME")

STOPWORDS = {
    "a", "an", "the", "of", "in", "on", "at", "by", "for", "with", "to",
    "from", "per", "as", "than", "into", "over", "about", "up", "out",
    "and", "or", "but", "while", "if", "that", "which", "who", "whom",
    "whose", "such", "so", "because", "due", "via", "whom",
    "is", "are", "was", "were", "be", "been", "being", "am",
    "can", "could", "should", "would", "must", "may", "might", "will",
    "shall", "do", "does", "did", "done",
    "has", "have", "had", "having",
    "need", "needs", "needed", "make", "makes", "made", "making",
    "use", "uses", "used", "using", "get", "gets", "got",
    "want", "wants", "wanted", "keep", "keeps", "kept",
    "there", "here", "it", "its", "they", "them", "their", "he", "she",
    "his", "her", "we", "our", "you", "your", "i", "my",
    "this", "these", "those", "each", "every", "all", "both", "either",
    "neither", "some", "any", "more", "most", "many", "much", "few",
    "fewer", "less", "least", "no", "not", "none", "only", "own", "same",
    "other", "another", "also", "too", "very", "just", "then", "when",
    "where", "how", "what", "why", "been", "being",
    "new", "one", "ones", "way", "well",
}

# Frequency adverbs and measure-generic nouns never name a variable and
# carry no pairing signal.
TEMPORAL = {"daily", "weekly", "monthly", "yearly", "annually", "hourly"}
GENERIC = {
    "total", "overall", "number", "numbers", "amount", "amounts",
    "proportion", "quantity", "quantities", "sum", "term", "terms",
    "unit", "units", "rate", "rates", "technique", "techniques",
    "method", "methods", "type", "types", "kind", "kinds", "way", "ways",
}

_NUMERAL_TOKEN_RE = re.compile(r"\d+(?:,\d{3})*(?:\.\d+)?%?")
_TOKEN_RE = re.compile(r"[A-Za-z]+(?:'[a-z]+)?|\d+(?:,\d{3})*(?:\.\d+)?%?|[^\sA-Za-z\d]")


def stem(word: str) -> str:
    """Light suffix stripping for cross-mention comparisons."""
    w = word.casefold()
    if len(w) > 2 and w.endswith("s") and not w.endswith("ss"):
        w = w[:-1]
    for suffix in ("ing", "ed", "ly"):
        if len(w) >= 6 and w.endswith(suffix):
            w = w[: -len(suffix)]
            break
    return w


@dataclass(frozen=True)
class Token:
    text: str
    start: int
    end: int
    index: int
    sentence: int

    @property
    def lower(self) -> str:
        return self.text.casefold()

    @property
    def is_word(self) -> bool:
        return self.text[0].isalpha()

    @property
    def is_number(self) -> bool:
        return self.text[0].isdigit()


@dataclass(frozen=True)
class EntitySpan:
    start: int
    end: int
    label: str
    text: str

    def to_json_dict(self) -> dict:
        return {"start": self.start, "end": self.end, "label": self.label, "text": self.text}

    @classmethod
    def from_json_dict(cls, data: dict) -> "EntitySpan":
        try:
            span = cls(int(data["start"]), int(data["end"]), str(data["label"]), str(data["text"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise LpwbError(f"bad entity span: {exc}") from exc
        if span.label not in LABELS:
            raise LpwbError(f"unknown entity label {span.label!r}")
        return span


def sentence_ranges(text: str) -> list[tuple[int, int]]:
    """Split on sentence punctuation followed by whitespace and an
    uppercase letter (or end of text)."""
    bounds = []
    start = 0
    i = 0
    n = len(text)
    while i < n:
        if text[i] in ".?!":
            j = i + 1
            while j < n and text[j].isspace():
                j += 1
            if j >= n or (text[j].isupper() and j > i + 1):
                bounds.append((start, i + 1))
                start = j
                i = j
                continue
        i += 1
    if start < n and text[start:].strip():
        bounds.append((start, n))
    return bounds


def tokenize(text: str) -> list[Token]:
    ranges = sentence_ranges(text) or [(0, len(text))]
    tokens: list[Token] = []
    sid = 0
    for m in _TOKEN_RE.finditer(text):
        while sid + 1 < len(ranges) and m.start() >= ranges[sid][1]:
            sid += 1
        tokens.append(Token(m.group(0), m.start(), m.end(), len(tokens), sid))
    return tokens


@dataclass
class Lexicons:
    """Cue, direction and number-word tables, loadable from files."""

    const_dir: list[tuple[tuple[str, ...], Operator, str]]
    obj_dir: dict[str, str]
    number_words: dict[str, Fraction]

    @classmethod
    def bundled(cls) -> "Lexicons":
        root = resources.files("lpwb.lexicons")
        return cls(
            const_dir=_parse_const_dir(root.joinpath("const_dir.txt").read_text("utf-8")),
            obj_dir=_parse_obj_dir(root.joinpath("obj_dir.txt").read_text("utf-8")),
            number_words=default_number_words(),
        )

    @classmethod
    def from_dir(cls, path: str | Path) -> "Lexicons":
        """Load from a directory holding the three lexicon files; any
        missing file falls back to the bundled table."""
        path = Path(path)
        bundled = cls.bundled()
        const_dir = bundled.const_dir
        obj_dir = bundled.obj_dir
        numbers = bundled.number_words
        cd = path / "const_dir.txt"
        if cd.exists():
            const_dir = _parse_const_dir(cd.read_text("utf-8"))
        od = path / "obj_dir.txt"
        if od.exists():
            obj_dir = _parse_obj_dir(od.read_text("utf-8"))
        nw = path / "number_words.txt"
        if nw.exists():
            numbers = parse_number_words(nw.read_text("utf-8"))
        return cls(const_dir=const_dir, obj_dir=obj_dir, number_words=numbers)


def _parse_const_dir(text: str) -> list[tuple[tuple[str, ...], Operator, str]]:
    entries = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 3 or parts[1] not in ("GEQ", "LEQ") or parts[2] not in ("strong", "weak"):
            raise LpwbError(f"bad cue lexicon line: {raw!r}")
        op = Operator.GREATER_OR_EQUAL if parts[1] == "GEQ" else Operator.LESS_OR_EQUAL
        entries.append((tuple(parts[0].casefold().split()), op, parts[2]))
    return entries


def _parse_obj_dir(text: str) -> dict[str, str]:
    table = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2 or parts[1] not in ("MAX", "MIN"):
            raise LpwbError(f"bad direction lexicon line: {raw!r}")
        table[parts[0].casefold()] = parts[1]
    return table


@dataclass
class CueMatch:
    first: int          # token index
    last: int
    phrase: tuple[str, ...]
    operator: Operator
    tier: str
    sentence: int


@dataclass
class Analysis:
    """Shared token-level view of a description used by the tagger and
    the suggester."""

    text: str
    tokens: list[Token]
    cues: list[CueMatch] = field(default_factory=list)
    unit_words: set[str] = field(default_factory=set)
    blocked_stems: set[str] = field(default_factory=set)
    obj_tokens: set[int] = field(default_factory=set)
    cue_tokens: set[int] = field(default_factory=set)


def match_phrases(
    tokens: list[Token],
    phrases: set[tuple[str, ...]],
    skip: set[int] | None = None,
) -> list[tuple[int, int, tuple[str, ...]]]:
    """Longest-first, left-to-right, non-overlapping phrase matches.

    Returns ``(first_token, last_token, phrase)`` triples."""
    skip = skip or set()
    by_len = sorted(phrases, key=len, reverse=True)
    taken: set[int] = set()
    out = []
    i = 0
    while i < len(tokens):
        if i in skip or i in taken:
            i += 1
            continue
        hit = None
        for phrase in by_len:
            k = len(phrase)
            window = tokens[i:i + k]
            if len(window) < k:
                continue
            if any(t.index in skip or t.index in taken for t in window):
                continue
            if tuple(t.lower for t in window) == phrase:
                hit = (i, i + k - 1, phrase)
                break
        if hit:
            taken.update(range(hit[0], hit[1] + 1))
            out.append(hit)
            i = hit[1] + 1
        else:
            i += 1
    return out


def analyze(text: str, lexicons: Lexicons | None = None) -> Analysis:
    """Token-level analysis: cues, unit words, blocked stems."""
    lex = lexicons or Lexicons.bundled()
    tokens = tokenize(text)
    analysis = Analysis(text=text, tokens=tokens)

    # Cue matching, longest first, then weak-cue suppression per sentence.
    cue_table = {phrase: (op, tier) for phrase, op, tier in lex.const_dir}
    raw = match_phrases(tokens, set(cue_table))
    cues = []
    for first, last, phrase in raw:
        op, tier = cue_table[phrase]
        cues.append(CueMatch(first, last, phrase, op, tier, tokens[first].sentence))
    strong_sentences = {c.sentence for c in cues if c.tier == "strong"}
    cues = [c for c in cues if c.tier == "strong" or c.sentence not in strong_sentences]
    analysis.cues = cues
    analysis.cue_tokens = {
        i for c in cues for i in range(c.first, c.last + 1)
    }

    # Unit words: tokens right after numerals (two distinct values seen),
    # the head measured in "<n> units of <head>", or words after "per".
    followers: dict[str, set[str]] = {}
    for t in tokens:
        if t.is_number and t.index + 1 < len(tokens):
            nxt = tokens[t.index + 1]
            if nxt.is_word and stem(nxt.text) not in STOPWORDS:
                followers.setdefault(stem(nxt.text), set()).add(t.text)
            if nxt.lower in ("unit", "units") and t.index + 3 < len(tokens):
                of, head = tokens[t.index + 2], tokens[t.index + 3]
                if of.lower == "of" and head.is_word:
                    followers.setdefault(stem(head.text), set()).add(t.text)
        if t.lower == "per":
            for j in (t.index + 1, t.index + 2):
                if j < len(tokens) and tokens[j].is_word and tokens[j].lower not in STOPWORDS:
                    analysis.unit_words.add(stem(tokens[j].text))
    analysis.unit_words |= {w for w, values in followers.items() if len(values) >= 2}
    analysis.unit_words |= {"unit"}

    # Partitive heads: the first plain noun after "<number> of [det]",
    # as in "30% of all the trips" -- a share of some whole, not a
    # variable.
    for t in tokens:
        if not (t.is_number or t.lower in lex.number_words):
            continue
        j = t.index + 1
        if j < len(tokens) and tokens[j].lower == "of":
            j += 1
            hops = 0
            while j < len(tokens) and hops < 2 and tokens[j].lower in (
                "the", "all", "a", "an", "her", "his", "their", "its", "total"
            ):
                j += 1
                hops += 1
            if j < len(tokens) and tokens[j].is_word:
                analysis.blocked_stems.add(stem(tokens[j].text))
    return analysis


def _content_ok(token: Token, analysis: Analysis, obj_stems: set[str]) -> bool:
    if not token.is_word:
        return False
    s = stem(token.text)
    if token.lower in STOPWORDS or s in STOPWORDS:
        return False
    if s in TEMPORAL or s in GENERIC or token.lower in TEMPORAL or token.lower in GENERIC:
        return False
    if s in analysis.unit_words or s in analysis.blocked_stems or s in obj_stems:
        return False
    if token.index in analysis.cue_tokens or token.index in analysis.obj_tokens:
        return False
    return True


def _phrase_counts(tokens: list[Token], ok) -> dict[tuple[str, ...], int]:
    """Occurrence counts of contiguous 1..3-gram stem sequences."""
    counts: dict[tuple[str, ...], int] = {}
    n = len(tokens)
    for i in range(n):
        if not ok(tokens[i]):
            continue
        run: list[str] = []
        for j in range(i, min(i + 3, n)):
            t = tokens[j]
            if ok(t):
                run.append(stem(t.text))
            elif t.is_number and run and len(t.text) <= 2 and "," not in t.text:
                run.append(t.lower)  # trailing index digits: "beam 1"
                counts[tuple(run)] = counts.get(tuple(run), 0) + 1
                break
            else:
                break
            counts[tuple(run)] = counts.get(tuple(run), 0) + 1
    return counts


def _collect_forward(tokens, start, ok, limit=3):
    run = []
    j = start
    while j < len(tokens) and len(run) < limit:
        t = tokens[j]
        if ok(t):
            run.append(t)
        elif t.is_number and run and len(t.text) <= 2 and "," not in t.text:
            run.append(t)
            break
        else:
            break
        j += 1
    return run


def _collect_backward(tokens, end, ok, limit=3):
    run = []
    j = end
    while j >= 0 and len(run) < limit:
        t = tokens[j]
        if ok(t):
            run.append(t)
        elif t.is_number and not run and len(t.text) <= 2 and "," not in t.text:
            run.append(t)  # digit tail, e.g. the "1" of "Beam 1"
        else:
            break
        j -= 1
    return list(reversed(run))


def _stems(run: list[Token]) -> tuple[str, ...]:
    return tuple(t.lower if t.is_number else stem(t.text) for t in run)


def _find_variables(analysis: Analysis, obj_stems: set[str]) -> list[tuple[str, ...]]:
    """Choose the decision-variable phrases (as stem tuples)."""
    tokens = analysis.tokens

    def ok(t: Token) -> bool:
        return _content_ok(t, analysis, obj_stems)

    counts = _phrase_counts(tokens, ok)

    def occurrences(stems_seq: tuple[str, ...]) -> int:
        return counts.get(stems_seq, 0)

    def trim_suffix(run: list[Token]) -> list[Token]:
        for k in range(len(run)):
            if occurrences(_stems(run[k:])) >= 2:
                return run[k:]
        return []

    def trim_prefix(run: list[Token]) -> list[Token]:
        for k in range(len(run), 0, -1):
            if occurrences(_stems(run[:k])) >= 2:
                return run[:k]
        return []

    skippable = {"a", "an", "the", "either", "in", "on", "at", "to", "by"}
    candidates: list[tuple[int, tuple[str, ...], tuple[str, ...]]] = []
    for t in tokens:
        if t.lower not in ("and", "or"):
            continue
        j = t.index + 1
        skipped_prep = None
        hops = 0
        while j < len(tokens) and hops < 3 and tokens[j].lower in skippable:
            if tokens[j].lower in ("in", "on", "at", "to", "by"):
                skipped_prep = tokens[j].lower
            j += 1
            hops += 1
        b_run = trim_prefix(_collect_forward(tokens, j, ok))
        a_run = trim_suffix(_collect_backward(tokens, t.index - 1, ok))
        if not a_run and skipped_prep:
            # parallel "in a trust ... or in a savings account"
            for p in range(t.index - 1, -1, -1):
                tok = tokens[p]
                if tok.sentence != t.sentence:
                    break
                if tok.lower == skipped_prep:
                    q = p + 1
                    hops2 = 0
                    while q < len(tokens) and hops2 < 2 and tokens[q].lower in ("a", "an", "the"):
                        q += 1
                        hops2 += 1
                    a_run = trim_prefix(_collect_forward(tokens, q, ok))
                    break
        if not a_run or not b_run:
            continue
        a, b = _stems(a_run), _stems(b_run)
        if a == b:
            continue
        score = occurrences(a) + occurrences(b)
        lead = range(max(0, a_run[0].index - 5), a_run[0].index)
        if any(tokens[k].lower in ("two", "both", "either") for k in lead):
            score += 2
        candidates.append((score, a, b))

    chosen: list[tuple[str, ...]] = []
    if candidates:
        _, a, b = max(candidates, key=lambda c: c[0])
        chosen = [a, b]
    else:
        # Fallback: most repeated content phrases that share a sentence
        # with a number, longest preferred.
        scored = []
        for phrase, cnt in counts.items():
            if cnt < 2:
                continue
            with_num = _sentences_with_number(analysis, phrase)
            if not with_num:
                continue
            scored.append((cnt + with_num + len(phrase), phrase))
        scored.sort(key=lambda item: (-item[0], item[1]))
        for _, phrase in scored:
            if any(_subsumes(p, phrase) or _subsumes(phrase, p) for p in chosen):
                continue
            chosen.append(phrase)
            if len(chosen) == 2:
                break

    # Extend one-word variables to a dominant superphrase: "youth" ->
    # "youth doses" when the longer form repeats.
    extended = []
    for phrase in chosen:
        best = phrase
        for other, cnt in counts.items():
            if len(other) > len(best) and other[: len(phrase)] == phrase and cnt >= 2:
                best = other
        extended.append(best)
    return extended


def _subsumes(longer: tuple[str, ...], shorter: tuple[str, ...]) -> bool:
    if len(shorter) > len(longer):
        return False
    return any(
        longer[i:i + len(shorter)] == shorter
        for i in range(len(longer) - len(shorter) + 1)
    )


def _sentences_with_number(analysis: Analysis, phrase: tuple[str, ...]) -> int:
    sent_with_phrase = set()
    tokens = analysis.tokens
    k = len(phrase)
    for i in range(len(tokens) - k + 1):
        if tuple(stem(t.text) if t.is_word else t.lower for t in tokens[i:i + k]) == phrase:
            sent_with_phrase.add(tokens[i].sentence)
    numbered = {t.sentence for t in tokens if t.is_number}
    return len(sent_with_phrase & numbered)


def _var_mentions(analysis: Analysis, variables: list[tuple[str, ...]]) -> list[tuple[int, int]]:
    """All token runs matching a variable phrase (stem-wise), longest
    phrase first, non-overlapping."""
    tokens = analysis.tokens
    taken: set[int] = set()
    mentions: list[tuple[int, int]] = []
    for phrase in sorted(variables, key=len, reverse=True):
        k = len(phrase)
        for i in range(len(tokens) - k + 1):
            window = tokens[i:i + k]
            if any(t.index in taken or t.index in analysis.cue_tokens
                   or t.index in analysis.obj_tokens for t in window):
                continue
            if tuple(t.lower if t.is_number else stem(t.text) for t in window) == phrase:
                mentions.append((i, i + k - 1))
                taken.update(range(i, i + k))
    return sorted(mentions)


def tag_entities(text: str, lexicons: Lexicons | None = None) -> list[EntitySpan]:
    """Tag a description with the six entity labels."""
    lex = lexicons or Lexicons.bundled()
    analysis = analyze(text, lex)
    tokens = analysis.tokens
    spans: list[EntitySpan] = []

    def add(first: int, last: int, label: str) -> None:
        start, end = tokens[first].start, tokens[last].end
        spans.append(EntitySpan(start, end, label, text[start:end]))

    # Objective direction and name.
    obj_stems: set[str] = set()
    obj_matches = match_phrases(
        tokens, {(w,) for w in lex.obj_dir}, skip=analysis.cue_tokens
    )
    for first, last, _ in obj_matches:
        add(first, last, "OBJ_DIR")
        analysis.obj_tokens.update(range(first, last + 1))
    if obj_matches:
        first, last, _ = obj_matches[0]
        name_run = _objective_name_run(tokens, last + 1)
        if name_run:
            add(name_run[0].index, name_run[-1].index, "OBJ_NAME")
            analysis.obj_tokens.update(t.index for t in name_run)
            obj_stems = {stem(t.text) for t in name_run if t.is_word}
            obj_stems -= STOPWORDS | GENERIC

    # Constraint cues.
    for cue in analysis.cues:
        add(cue.first, cue.last, "CONST_DIR")

    # Decision variables and their mentions.
    variables = _find_variables(analysis, obj_stems)
    mentions = _var_mentions(analysis, variables)
    mention_tokens = {i for first, last in mentions for i in range(first, last + 1)}
    for first, last in mentions:
        add(first, last, "VAR")

    # Numbers: numerals plus number-word phrases.
    number_runs = [
        (t.index, t.index) for t in tokens
        if t.is_number and t.index not in mention_tokens
    ]
    word_numbers = match_phrases(
        tokens,
        {tuple(p.split()) for p in lex.number_words},
        skip=analysis.cue_tokens | analysis.obj_tokens | mention_tokens,
    )
    number_runs += [(f, last) for f, last, _ in word_numbers]
    number_runs.sort()

    multipliers = set()
    for first, last in number_runs:
        if _is_multiplier(tokens, first, last, mention_tokens):
            multipliers.add((first, last))

    claimed: set[tuple[int, int]] = set()
    for cue in analysis.cues:
        best = None
        for run in number_runs:
            if run in claimed or run in multipliers:
                continue
            if tokens[run[0]].sentence != cue.sentence:
                continue
            if run[0] > cue.last:
                distance = run[0] - cue.last
                side = 0  # prefer the number after the cue on ties
            else:
                distance = cue.first - run[1]
                side = 1
            if best is None or (distance, side) < best[0]:
                best = ((distance, side), run)
        if best:
            claimed.add(best[1])
            add(best[1][0], best[1][1], "LIMIT")

    for run in number_runs:
        if run not in claimed:
            add(run[0], run[1], "PARAM")

    spans.sort(key=lambda s: (s.start, s.end))
    return spans


def _objective_name_run(tokens: list[Token], start: int) -> list[Token]:
    lead_skip = {"the", "a", "an", "his", "her", "their", "its", "this"}
    stops = {"on", "so", "than", "while", "when", "if", "per", "that", "which"}
    j = start
    while j < len(tokens) and tokens[j].lower in lead_skip:
        j += 1
    run: list[Token] = []
    while j < len(tokens):
        t = tokens[j]
        if not (t.is_word or t.is_number) or t.lower in stops:
            break
        if t.lower in ("to",) and run:
            break
        run.append(t)
        j += 1
    while run:
        last = run[-1].lower
        if last in ("the", "a", "an", "of", "and", "or", "to", "is", "be"):
            run.pop()
        elif len(run) > 1 and len(last) >= 6 and last.endswith(("ed", "ing")):
            run.pop()  # trailing participle: "gas consumed" names the gas
        else:
            break
    return run


def _is_multiplier(tokens: list[Token], first: int, last: int, mention_tokens: set[int]) -> bool:
    """Multipliers scale another variable: "three times as many", or a
    fraction followed by "of ... <variable>"."""
    nxt = last + 1
    if nxt < len(tokens) and tokens[nxt].lower in ("times", "time"):
        return True
    if nxt < len(tokens) and tokens[nxt].lower == "of":
        for j in range(nxt + 1, min(nxt + 7, len(tokens))):
            if tokens[j].index in mention_tokens:
                return True
    return False
