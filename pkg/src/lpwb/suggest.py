"""Declaration suggestion: entity-derived prompts plus a generator seam.

A prompt names one declaration to produce: the objective (direction and
name texts) or the k-th constraint (the k-th cue text, in document
order). A generator maps ``(description, prompt, entities)`` to one
tagged declaration string; anything callable with that shape plugs in.
The bundled :class:`RuleBasedGenerator` reads the description around the
tagged spans and assembles the declaration directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Protocol, Sequence, runtime_checkable

from .errors import LpwbError, MissingEntityError, NumberParseError
from .ir import (
    Constraint,
    ConstraintKind,
    Declaration,
    Objective,
    ObjectiveDirection,
    Operator,
    Term,
    parse_declaration,
    print_ir,
)
from .numparse import normalize_number
from .tagging import (
    GENERIC,
    STOPWORDS,
    TEMPORAL,
    EntitySpan,
    Lexicons,
    Token,
    _is_multiplier,
    analyze,
    stem,
)
from .canonical import normalize_variable

# Clause separators: a number or cue reaches at most this far.
SPLITTERS = {"and", "or", "but", "while", "whereas", ",", ";"}

# A mention this close to a limit reads as a direct bound on it.
BOUND_WINDOW = 3

_DIRECTIONS = {
    "MAX": ObjectiveDirection.MAXIMIZE,
    "MIN": ObjectiveDirection.MINIMIZE,
}


def _clean(text: str) -> str:
    return " ".join(text.split())


@dataclass(frozen=True)
class DeclarationPrompt:
    """What to generate: ``kind`` is "objective" or "constraint"; the
    tokens are the entity texts that name the target; ``index`` is 0 for
    the objective and the 1-based cue position for constraints."""

    kind: str
    tokens: tuple[str, ...]
    index: int = 0


@dataclass(frozen=True)
class SuggestionFailure:
    """One prompt that produced no usable declaration."""

    index: int
    reason: str


@runtime_checkable
class GeneratorContract(Protocol):
    def __call__(
        self,
        description: str,
        prompt: DeclarationPrompt,
        entities: Sequence[EntitySpan],
    ) -> str:
        ...


def build_prompt(
    entities: Sequence[EntitySpan], target: str | int
) -> DeclarationPrompt:
    """Prompt for ``target``: "objective" (or 0), or a 1-based cue index.

    Raises MissingEntityError when the spans needed are not tagged."""
    spans = sorted(entities, key=lambda s: (s.start, s.end))
    if target in ("objective", 0):
        dirs = [s for s in spans if s.label == "OBJ_DIR"]
        if not dirs:
            raise MissingEntityError("OBJ_DIR")
        names = [s for s in spans if s.label == "OBJ_NAME"]
        if not names:
            raise MissingEntityError("OBJ_NAME")
        tokens = (_clean(dirs[0].text), _clean(names[0].text))
        return DeclarationPrompt("objective", tokens, 0)
    k = int(target)
    cues = [s for s in spans if s.label == "CONST_DIR"]
    if k < 1 or k > len(cues):
        raise MissingEntityError("CONST_DIR")
    return DeclarationPrompt("constraint", (_clean(cues[k - 1].text),), k)


def suggest_declarations(
    description: str,
    entities: Sequence[EntitySpan],
    generator: GeneratorContract | None = None,
    lexicons: Lexicons | None = None,
) -> list[Declaration | SuggestionFailure]:
    """One suggestion per declaration the entities call for.

    The objective is attempted when an OBJ_DIR span is present, then one
    constraint per CONST_DIR span in document order. A prompt that cannot
    be built, a generator error, or unparseable output becomes a
    SuggestionFailure for that slot; the rest of the batch still runs.
    """
    spans = sorted(entities, key=lambda s: (s.start, s.end))
    targets: list[str | int] = []
    if any(s.label == "OBJ_DIR" for s in spans):
        targets.append("objective")
    cue_count = sum(1 for s in spans if s.label == "CONST_DIR")
    targets.extend(range(1, cue_count + 1))
    if not targets:
        raise MissingEntityError("CONST_DIR")

    gen = generator if generator is not None else RuleBasedGenerator(lexicons)
    results: list[Declaration | SuggestionFailure] = []
    for target in targets:
        index = 0 if target == "objective" else int(target)
        try:
            prompt = build_prompt(spans, target)
            raw = gen(description, prompt, spans)
            decl = parse_declaration(raw)
        except LpwbError as exc:
            results.append(SuggestionFailure(index, str(exc)))
            continue
        wanted = Objective if prompt.kind == "objective" else Constraint
        if not isinstance(decl, wanted):
            results.append(
                SuggestionFailure(index, "generated declaration has the wrong type")
            )
            continue
        results.append(decl)
    return results


class RuleBasedGenerator:
    """Assembles declarations from the description and its entity spans."""

    def __init__(self, lexicons: Lexicons | None = None):
        self.lexicons = lexicons or Lexicons.bundled()
        self._cached: tuple[tuple, "_DocModel"] | None = None

    def __call__(
        self,
        description: str,
        prompt: DeclarationPrompt,
        entities: Sequence[EntitySpan],
    ) -> str:
        key = (description, tuple(entities))
        if self._cached is None or self._cached[0] != key:
            self._cached = (key, _DocModel(description, entities, self.lexicons))
        model = self._cached[1]
        if prompt.kind == "objective":
            return print_ir(model.objective())
        return print_ir(model.constraint(prompt.index))


@dataclass
class _Mention:
    key: str
    first: int
    last: int
    text: str
    sentence: int


@dataclass
class _Number:
    label: str
    first: int
    last: int
    text: str
    sentence: int
    owner: _Mention | None = None
    multiplier: bool = False
    index: int = 0


class _DocModel:
    """Token-level view of one description with its entity spans."""

    def __init__(
        self, text: str, entities: Sequence[EntitySpan], lexicons: Lexicons
    ):
        self.text = text
        self.lex = lexicons
        self.analysis = analyze(text, lexicons)
        self.tokens: list[Token] = self.analysis.tokens
        self._scopes: dict[int, dict[str, int]] = {}
        self._objective: Objective | None = None
        self._objective_params: set[int] = set()

        # Token bounds per sentence.
        self.sentence_span: dict[int, tuple[int, int]] = {}
        for t in self.tokens:
            first, _ = self.sentence_span.get(t.sentence, (t.index, t.index))
            self.sentence_span[t.sentence] = (first, t.index)

        cue_table = {phrase: op for phrase, op, _tier in lexicons.const_dir}

        self.obj_dirs: list[tuple[int, int, str]] = []
        self.obj_names: list[tuple[int, int, str]] = []
        self.cues: list[dict] = []
        self.mentions: list[_Mention] = []
        self.numbers: list[_Number] = []
        var_first: dict[str, int] = {}

        for span in sorted(entities, key=lambda s: (s.start, s.end)):
            first, last = self._token_range(span)
            if span.label == "OBJ_DIR":
                self.obj_dirs.append((first, last, span.text))
            elif span.label == "OBJ_NAME":
                self.obj_names.append((first, last, span.text))
            elif span.label == "CONST_DIR":
                phrase = tuple(_clean(span.text).casefold().split())
                self.cues.append({
                    "first": first,
                    "last": last,
                    "text": span.text,
                    "operator": cue_table.get(phrase),
                    "sentence": self.tokens[first].sentence,
                })
            elif span.label == "VAR":
                key = normalize_variable(span.text)
                var_first.setdefault(key, first)
                self.mentions.append(
                    _Mention(key, first, last, span.text, self.tokens[first].sentence)
                )
            elif span.label in ("PARAM", "LIMIT"):
                self.numbers.append(
                    _Number(span.label, first, last, span.text,
                            self.tokens[first].sentence)
                )

        self.var_order = [k for k, _ in sorted(var_first.items(), key=lambda kv: kv[1])]
        self.mentions.sort(key=lambda m: m.first)
        self.numbers.sort(key=lambda n: n.first)
        mention_tokens = {
            i for m in self.mentions for i in range(m.first, m.last + 1)
        }
        for idx, number in enumerate(self.numbers):
            number.index = idx
            number.multiplier = _is_multiplier(
                self.tokens, number.first, number.last, mention_tokens
            )
            before = [
                m for m in self.mentions
                if m.sentence == number.sentence and m.last < number.first
            ]
            number.owner = max(before, key=lambda m: m.last) if before else None

        # Tokens that never count as shared context.
        self._masked = set(mention_tokens)
        for first, last, _text in self.obj_dirs + self.obj_names:
            self._masked.update(range(first, last + 1))
        for cue in self.cues:
            self._masked.update(range(cue["first"], cue["last"] + 1))
        for number in self.numbers:
            self._masked.update(range(number.first, number.last + 1))

        self.nucleus = tuple(
            stem(t.text)
            for first, last, _text in self.obj_names[:1]
            for t in self.tokens[first:last + 1]
            if t.is_word and t.lower not in STOPWORDS
            and stem(t.text) not in STOPWORDS | GENERIC | TEMPORAL
        )

    # -- token helpers -------------------------------------------------

    def _token_range(self, span: EntitySpan) -> tuple[int, int]:
        hit = [
            t.index for t in self.tokens
            if t.start < span.end and t.end > span.start
        ]
        if not hit:
            raise LpwbError(f"entity span {span.text!r} does not align with the text")
        return hit[0], hit[-1]

    def _is_content(self, token: Token) -> bool:
        if not token.is_word or token.index in self._masked:
            return False
        s = stem(token.text)
        if token.lower in STOPWORDS or s in STOPWORDS:
            return False
        if s in TEMPORAL or s in GENERIC:
            return False
        if s in self.analysis.unit_words or s in self.analysis.blocked_stems:
            return False
        return True

    def _splitter_positions(self, first: int, last: int) -> list[int]:
        return [
            i for i in range(first, last + 1)
            if 0 <= i < len(self.tokens) and self.tokens[i].lower in SPLITTERS
        ]

    # -- number scopes -------------------------------------------------

    def _scope(self, number: _Number) -> dict[str, int]:
        """Content stems in the number's clause, at their least distance.

        The clause runs to the previous/next tagged number in the same
        sentence, cut back to the last/first splitter in the gap (the
        midpoint when the gap has none), else to the sentence edge."""
        cached = self._scopes.get(number.index)
        if cached is not None:
            return cached
        s_first, s_last = self.sentence_span[number.sentence]
        same = [n for n in self.numbers if n.sentence == number.sentence]
        prev = max(
            (n for n in same if n.first < number.first),
            key=lambda n: n.first,
            default=None,
        )
        nxt = min(
            (n for n in same if n.first > number.first),
            key=lambda n: n.first,
            default=None,
        )
        left = s_first
        if prev is not None:
            gap = self._splitter_positions(prev.last + 1, number.first - 1)
            if gap:
                left = gap[-1] + 1
            else:
                span = number.first - prev.last - 1
                left = prev.last + 1 + (span + 1) // 2
        right = s_last
        if nxt is not None:
            gap = self._splitter_positions(number.last + 1, nxt.first - 1)
            if gap:
                right = gap[0] - 1
            else:
                span = nxt.first - number.last - 1
                right = number.last + (span + 1) // 2
        scope: dict[str, int] = {}
        for i in range(left, right + 1):
            token = self.tokens[i]
            if not self._is_content(token):
                continue
            if i < number.first:
                distance = number.first - i
            else:
                distance = i - number.last
            s = stem(token.text)
            if distance < scope.get(s, distance + 1):
                scope[s] = distance
        self._scopes[number.index] = scope
        return scope

    # -- cue regions ---------------------------------------------------

    def _region(self, cue_idx: int) -> tuple[int, int]:
        """Sentence segment owned by one cue. Same-sentence cues split at
        the last splitter between them, else at the midpoint."""
        cue = self.cues[cue_idx]
        s_first, s_last = self.sentence_span[cue["sentence"]]
        neighbours = [
            c for c in self.cues
            if c is not cue and c["sentence"] == cue["sentence"]
        ]
        left = s_first
        lefts = [c for c in neighbours if c["first"] < cue["first"]]
        if lefts:
            other = max(lefts, key=lambda c: c["first"])
            gap = self._splitter_positions(other["last"] + 1, cue["first"] - 1)
            if gap:
                left = gap[-1] + 1
            else:
                span = cue["first"] - other["last"] - 1
                left = other["last"] + 1 + (span + 1) // 2
        right = s_last
        rights = [c for c in neighbours if c["first"] > cue["first"]]
        if rights:
            other = min(rights, key=lambda c: c["first"])
            gap = self._splitter_positions(cue["last"] + 1, other["first"] - 1)
            if gap:
                right = gap[-1] - 1
            else:
                span = other["first"] - cue["last"] - 1
                right = cue["last"] + (span + 1) // 2
        return left, right

    def _limit_for(self, cue: dict, region: tuple[int, int]) -> _Number | None:
        first, last = region
        best: tuple[tuple[int, int], _Number] | None = None
        for number in self.numbers:
            if number.label != "LIMIT" or number.multiplier:
                continue
            if not (first <= number.first <= last):
                continue
            if number.first > cue["last"]:
                rank = (number.first - cue["last"], 0)
            else:
                rank = (cue["first"] - number.last, 1)
            if best is None or rank < best[0]:
                best = (rank, number)
        return best[1] if best else None

    def _vars_in(self, first: int, last: int) -> list[tuple[str, list[_Mention]]]:
        found: dict[str, list[_Mention]] = {}
        for m in self.mentions:
            if m.first >= first and m.last <= last:
                found.setdefault(m.key, []).append(m)
        return [(k, found[k]) for k in self.var_order if k in found]

    # -- objective -----------------------------------------------------

    def objective(self) -> Objective:
        if self._objective is not None:
            return self._objective
        if not self.obj_dirs:
            raise LpwbError("no OBJ_DIR entity to anchor an objective")
        if not self.obj_names:
            raise LpwbError("no OBJ_NAME entity to name the objective")
        dir_text = _clean(self.obj_dirs[0][2])
        tag = self.lex.obj_dir.get(dir_text.casefold())
        if tag is None:
            raise LpwbError(f"unknown objective direction {dir_text!r}")
        name = _clean(self.obj_names[0][2])
        nucleus = set(self.nucleus)

        pool = [
            n for n in self.numbers
            if n.label == "PARAM" and n.owner is not None and not n.multiplier
        ]
        used: set[int] = set()
        chosen: dict[str, _Number] = {}

        # First: parameters sitting in the objective's own sentence.
        obj_sentences = {
            self.tokens[first].sentence for first, _last, _text in self.obj_dirs
        }
        for key in self.var_order:
            candidates = [
                n for n in pool
                if n.index not in used and n.owner.key == key
                and n.sentence in obj_sentences
            ]
            if candidates:
                pick = min(candidates, key=lambda n: n.first - n.owner.last)
                chosen[key] = pick
                used.add(pick.index)

        # Then: parameters whose clause mentions the objective name.
        for key in self.var_order:
            if key in chosen:
                continue
            best: tuple[float, int, _Number] | None = None
            for n in pool:
                if n.index in used or n.owner.key != key:
                    continue
                scope = self._scope(n)
                score = sum(
                    Fraction(1, d) for s, d in scope.items() if s in nucleus
                )
                if score > 0 and (best is None or (-score, n.first) < best[:2]):
                    best = (-score, n.first, n)
            if best is not None:
                chosen[key] = best[2]
                used.add(best[2].index)

        # Last resort: the parameter nearest each variable's mention.
        for key in self.var_order:
            if key in chosen:
                continue
            candidates = [
                n for n in pool if n.index not in used and n.owner.key == key
            ]
            if candidates:
                pick = min(candidates, key=lambda n: n.first - n.owner.last)
                chosen[key] = pick
                used.add(pick.index)

        terms = [
            self._term(chosen[key])
            for key in sorted(chosen, key=lambda k: chosen[k].first)
        ]
        if not terms:
            raise LpwbError("cannot infer objective terms from the description")
        self._objective_params = {n.index for n in chosen.values()}
        self._objective = Objective(_DIRECTIONS[tag], name, terms)
        return self._objective

    def _term(self, number: _Number) -> Term:
        return Term(
            variable=_clean(number.owner.text),
            coefficient=normalize_number(number.text, "param", self.lex.number_words),
            coefficient_text=_clean(number.text),
        )

    # -- constraints ---------------------------------------------------

    def constraint(self, k: int) -> Constraint:
        if not 1 <= k <= len(self.cues):
            raise LpwbError(f"no cue at position {k}")
        cue = self.cues[k - 1]
        operator = cue["operator"]
        if operator is None:
            raise LpwbError(f"unknown constraint direction {cue['text']!r}")
        dir_text = _clean(cue["text"])
        region = self._region(k - 1)
        region_vars = self._vars_in(*region)
        limit = self._limit_for(cue, region)

        # One variable held against a multiple of another.
        multiplier = next(
            (
                n for n in self.numbers
                if n.multiplier and region[0] <= n.first <= region[1]
            ),
            None,
        )
        if multiplier is not None and len(self.var_order) >= 2:
            roles = self._comparison_roles(multiplier, cue)
            if roles is not None:
                base, compared = roles
                return Constraint(
                    kind=ConstraintKind.XBY,
                    const_dir_text=dir_text,
                    operator=operator,
                    base=_clean(base.text),
                    compared=_clean(compared.text),
                    multiplier=normalize_number(
                        multiplier.text, "param", self.lex.number_words
                    ),
                    multiplier_text=_clean(multiplier.text),
                )

        if limit is not None:
            # A fractional limit over a single variable reads as a share
            # of the total.
            if len(region_vars) == 1 and self._fractionish(limit):
                key, mentions = region_vars[0]
                mention = min(mentions, key=lambda m: self._gap(m, limit))
                return Constraint(
                    kind=ConstraintKind.RATIO,
                    const_dir_text=dir_text,
                    operator=operator,
                    limit=normalize_number(limit.text, "ratio", self.lex.number_words),
                    limit_text=_clean(limit.text),
                    variable=_clean(mention.text),
                )

            # A limit right next to the only variable in the clause is a
            # direct bound on it. The cue phrase often sits between the
            # two ("x must be at most 5"), so its tokens do not count.
            if len(region_vars) == 1:
                key, mentions = region_vars[0]
                mention = min(
                    mentions, key=lambda m: self._bound_gap(m, limit, cue)
                )
                if self._bound_gap(mention, limit, cue) <= BOUND_WINDOW:
                    kind = (
                        ConstraintKind.UPPER_BOUND
                        if operator is Operator.LESS_OR_EQUAL
                        else ConstraintKind.LOWER_BOUND
                    )
                    return Constraint(
                        kind=kind,
                        const_dir_text=dir_text,
                        operator=operator,
                        limit=normalize_number(
                            limit.text, "limit", self.lex.number_words
                        ),
                        limit_text=_clean(limit.text),
                        variable=_clean(mention.text),
                    )

            # The cue's sentence restating the objective name bounds the
            # objective expression itself.
            if self.nucleus and self._nucleus_in_sentence(cue["sentence"]):
                try:
                    terms = [
                        Term(t.variable, t.coefficient, t.coefficient_text)
                        for t in self.objective().terms
                    ]
                except LpwbError:
                    terms = []
                if terms:
                    return Constraint(
                        kind=ConstraintKind.LINEAR,
                        const_dir_text=dir_text,
                        operator=operator,
                        limit=normalize_number(
                            limit.text, "limit", self.lex.number_words
                        ),
                        limit_text=_clean(limit.text),
                        terms=terms,
                    )

            terms = self._linear_terms(limit)
            if terms:
                return Constraint(
                    kind=ConstraintKind.LINEAR,
                    const_dir_text=dir_text,
                    operator=operator,
                    limit=normalize_number(limit.text, "limit", self.lex.number_words),
                    limit_text=_clean(limit.text),
                    terms=terms,
                )

            nearby = {
                m.key for m in self.mentions
                if abs(m.sentence - cue["sentence"]) <= 1
            }
            if len(nearby) >= 2:
                return Constraint(
                    kind=ConstraintKind.SUM,
                    const_dir_text=dir_text,
                    operator=operator,
                    limit=normalize_number(limit.text, "limit", self.lex.number_words),
                    limit_text=_clean(limit.text),
                )

        raise LpwbError(f"cannot derive a constraint for cue {dir_text!r}")

    def _taken_by_objective(self) -> set[int]:
        try:
            self.objective()
        except LpwbError:
            return set()
        return self._objective_params

    def _gap(self, mention: _Mention, number: _Number) -> int:
        if mention.first > number.last:
            return mention.first - number.last
        if mention.last < number.first:
            return number.first - mention.last
        return 0

    def _bound_gap(
        self, mention: _Mention, number: _Number, cue: dict
    ) -> int:
        """Mention-to-limit distance with the cue's own tokens discounted."""
        gap = self._gap(mention, number)
        if gap == 0:
            return 0
        lo = min(mention.last, number.last) + 1
        hi = max(mention.first, number.first) - 1
        between = sum(
            1 for i in range(cue["first"], cue["last"] + 1) if lo <= i <= hi
        )
        return gap - between

    def _fractionish(self, limit: _Number) -> bool:
        text = _clean(limit.text)
        if text.endswith("%"):
            return True
        try:
            value = normalize_number(text, "param", self.lex.number_words)
        except NumberParseError:
            return False
        return 0 < value < 1

    def _comparison_roles(
        self, multiplier: _Number, cue: dict
    ) -> tuple[_Mention, _Mention] | None:
        """Base and compared variables for "k times X" / "a k of X"."""
        in_sentence = [m for m in self.mentions if m.sentence == multiplier.sentence]
        nxt = (
            self.tokens[multiplier.last + 1]
            if multiplier.last + 1 < len(self.tokens)
            else None
        )
        base = compared = None
        if nxt is not None and nxt.lower in ("times", "time"):
            # "three times as many X ... than the Y": X compared, Y base.
            after = [m for m in in_sentence if m.first > multiplier.last]
            if after:
                compared = after[0]
                rest = [m for m in after[1:] if m.key != compared.key]
                if rest:
                    base = rest[0]
                else:
                    before = [
                        m for m in in_sentence
                        if m.last < cue["first"] and m.key != compared.key
                    ]
                    base = before[-1] if before else None
        else:
            # "at least a third of the X": X base, the earlier variable
            # in the clause compared.
            after = [m for m in in_sentence if m.first > multiplier.last]
            base = after[0] if after else None
            if base is not None:
                before = [m for m in in_sentence if m.last < multiplier.first]
                if before:
                    compared = before[-1]
                else:
                    others = [m for m in self.mentions if m.key != base.key]
                    compared = others[0] if others else None
        if base is None or compared is None or base.key == compared.key:
            return None
        return base, compared

    def _nucleus_in_sentence(self, sentence: int) -> bool:
        first, last = self.sentence_span[sentence]
        stems = [
            stem(t.text) for t in self.tokens[first:last + 1] if t.is_word
        ]
        n = len(self.nucleus)
        return any(
            tuple(stems[i:i + n]) == self.nucleus
            for i in range(len(stems) - n + 1)
        )

    def _linear_terms(self, limit: _Number) -> list[Term]:
        """Pair each variable with the parameter sharing the most context
        with the limit, weighting shared stems by both distances.

        Parameters the objective consumed are off the table: a resource
        row never prices by the objective rates (restatements of the
        objective expression are handled before this rule runs)."""
        limit_scope = self._scope(limit)
        nucleus = set(self.nucleus)
        taken = self._taken_by_objective()
        pool = [
            n for n in self.numbers
            if n.label == "PARAM" and n.owner is not None and not n.multiplier
            and n.index not in taken
        ]
        used: set[int] = set()
        matched: dict[str, _Number] = {}
        for key in self.var_order:
            best: tuple[Fraction, int, _Number] | None = None
            for n in pool:
                if n.index in used or n.owner.key != key:
                    continue
                scope = self._scope(n)
                score = Fraction(0)
                for s, d_param in scope.items():
                    d_limit = limit_scope.get(s)
                    if d_limit is None or s in nucleus:
                        continue
                    score += Fraction(1, d_limit * d_param)
                if score > 0 and (
                    best is None or (-score, n.first) < (-best[0], best[1])
                ):
                    best = (score, n.first, n)
            if best is not None:
                matched[key] = best[2]
                used.add(best[2].index)
        if not matched:
            return []
        # Unmatched variables take their parameter from a matched clause's
        # sentence: parallel wording rarely repeats the shared noun.
        anchors = {n.sentence for n in matched.values()}
        for key in self.var_order:
            if key in matched:
                continue
            candidates = [
                n for n in pool
                if n.index not in used and n.owner.key == key
                and n.sentence in anchors
            ]
            if candidates:
                pick = min(candidates, key=lambda n: n.first - n.owner.last)
                matched[key] = pick
                used.add(pick.index)
        ordered = sorted(matched.values(), key=lambda n: n.first)
        return [self._term(n) for n in ordered]
