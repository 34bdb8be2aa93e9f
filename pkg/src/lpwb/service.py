"""Session HTTP API for the interactive modeling loop.

A client describes a problem, reviews machine-suggested declarations
one at a time, accepts, rejects, edits, or retypes them, and finally
solves the accepted model. Session state changes flow through a single
``apply_action`` function and every applied action is recorded, so
replaying a session's action log rebuilds its model byte for byte.

Sessions live in memory; configure a persistence directory to also
append each session's actions to a JSON-lines file that is replayed on
startup. Actions on one session are serialized by a per-session lock;
different sessions proceed independently.

Error responses carry a machine-readable ``code`` next to the human
``message``.
"""

from __future__ import annotations

import copy
import json
import os
import re
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse

from .canonical import (
    CanonicalForm,
    canonicalize,
    constraint_row,
    normalize_variable,
    resolve_variables,
)
from .errors import (
    DeclarationSyntaxError,
    LpwbError,
    NumberParseError,
)
from .evaluator import evaluate_corpus
from .ir import (
    Constraint,
    ConstraintKind,
    Declaration,
    IrDocument,
    Objective,
    Operator,
    Term,
    describe,
    parse_declaration,
    print_ir,
)
from .numparse import export_number, normalize_number
from .solver import STATUS_INFEASIBLE, solve
from .suggest import GeneratorContract, SuggestionFailure, suggest_declarations
from .tagging import EntitySpan, Lexicons, sentence_ranges, tag_entities

MAX_DESCRIPTION_BYTES = 64 * 1024

STATUS_SUGGESTED = "suggested"
STATUS_ACCEPTED = "accepted"
STATUS_REJECTED = "rejected"
STATUS_EDITED = "edited"

_PATCH_FIELDS = {"limit", "operator", "const_dir", "obj_dir", "obj_name"}


@dataclass
class ServiceConfig:
    """Deployment knobs; flags override the LPWB_* environment."""

    persist_dir: str | None = None
    cors_origin: str | None = None
    lexicon_dir: str | None = None

    @classmethod
    def from_env(cls) -> "ServiceConfig":
        return cls(
            persist_dir=os.environ.get("LPWB_PERSIST_DIR") or None,
            cors_origin=os.environ.get("LPWB_CORS_ORIGIN") or None,
            lexicon_dir=os.environ.get("LPWB_LEXICON_DIR") or None,
        )


@dataclass
class DeclarationSlot:
    """One suggestion slot and its review status."""

    index: int
    status: str
    ir: str | None
    source_text: str
    error: str | None = None

    def parsed(self) -> Declaration | None:
        if not self.ir:
            return None
        return parse_declaration(self.ir)

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "status": self.status,
            "declaration_ir": self.ir,
            "source_text": self.source_text,
            "error": self.error,
        }


@dataclass
class Session:
    id: str
    description: str
    entities: list[EntitySpan]
    source_texts: list[str]
    slots: list[DeclarationSlot] = field(default_factory=list)
    cursor: int = 0
    actions: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    # Suggestion cache; derived from description + entities, never replayed.
    pending: list[Declaration | SuggestionFailure] | None = None

    @property
    def prompt_count(self) -> int:
        return len(self.source_texts)

    def model_dict(self) -> dict:
        return {
            "session_id": self.id,
            "description": self.description,
            "entities": [e.to_json_dict() for e in self.entities],
            "cursor": self.cursor,
            "declarations": [s.to_json_dict() for s in self.slots],
        }

    def model_json(self) -> str:
        return json.dumps(self.model_dict(), sort_keys=True)


def _source_texts(description: str, entities: list[EntitySpan]) -> list[str]:
    """Sentence of origin for each prompt: the objective's OBJ_DIR
    sentence (when one is tagged), then each CONST_DIR sentence."""
    ranges = sentence_ranges(description)

    def sentence_of(pos: int) -> str:
        for a, b in ranges:
            if a <= pos < b:
                return description[a:b].strip()
        return description.strip()

    texts: list[str] = []
    obj = next((e for e in entities if e.label == "OBJ_DIR"), None)
    if obj is not None:
        texts.append(sentence_of(obj.start))
    for span in entities:
        if span.label == "CONST_DIR":
            texts.append(sentence_of(span.start))
    return texts


def new_session(
    session_id: str,
    description: str,
    entities: list[EntitySpan] | None = None,
    lexicons: Lexicons | None = None,
) -> Session:
    """Create a session: tag entities (unless supplied) and derive the
    per-prompt source sentences. No suggestions are generated yet."""
    if entities is None:
        entities = tag_entities(description, lexicons)
    entities = sorted(entities, key=lambda e: (e.start, e.end))
    return Session(
        id=session_id,
        description=description,
        entities=entities,
        source_texts=_source_texts(description, entities),
    )


def apply_action(session: Session, action: dict) -> DeclarationSlot:
    """The single code path that mutates session state.

    Endpoints validate, build an action, apply it, then log it; replay
    feeds logged actions straight back through here.
    """
    kind = action["action"]
    if kind == "suggest":
        index = action["index"]
        if index != session.cursor or index != len(session.slots):
            raise LpwbError(f"suggest action out of order at index {index}")
        slot = DeclarationSlot(
            index=index,
            status=STATUS_SUGGESTED,
            ir=action.get("ir"),
            source_text=action.get("source_text", ""),
            error=action.get("error"),
        )
        session.slots.append(slot)
        session.cursor += 1
        return slot
    index = action["index"]
    if not 0 <= index < len(session.slots):
        raise LpwbError(f"no declaration at index {index}")
    slot = session.slots[index]
    if kind == "accept":
        slot.status = STATUS_ACCEPTED
    elif kind == "reject":
        slot.status = STATUS_REJECTED
    elif kind in ("edit", "retype"):
        slot.ir = action["ir"]
        slot.error = None
        slot.status = STATUS_EDITED
    else:
        raise LpwbError(f"unknown action {kind!r}")
    return slot


def replay_session(actions: list[dict], lexicons: Lexicons | None = None) -> Session:
    """Rebuild a session from its recorded action log."""
    if not actions or actions[0].get("action") != "create":
        raise LpwbError("action log must start with a create action")
    head = actions[0]
    entities = head.get("entities")
    spans = [EntitySpan.from_json_dict(e) for e in entities] if entities is not None else None
    session = new_session(head["session_id"], head["description"], spans, lexicons)
    session.actions.append(head)
    for action in actions[1:]:
        apply_action(session, action)
        session.actions.append(action)
    return session


def replay_log(path: str | Path, lexicons: Lexicons | None = None) -> Session:
    with open(path, "r", encoding="utf-8") as fh:
        actions = [json.loads(line) for line in fh if line.strip()]
    return replay_session(actions, lexicons)


class SessionStore:
    """In-memory sessions with optional append-only JSONL persistence."""

    def __init__(self, config: ServiceConfig, lexicons: Lexicons):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        self._counter = 0
        self._lexicons = lexicons
        self._persist = Path(config.persist_dir) if config.persist_dir else None
        if self._persist is not None:
            self._persist.mkdir(parents=True, exist_ok=True)
            self._recover()

    def _recover(self) -> None:
        for path in sorted(self._persist.glob("*.jsonl")):
            session = replay_log(path, self._lexicons)
            self._sessions[session.id] = session
            m = re.fullmatch(r"s-(\d+)", session.id)
            if m:
                self._counter = max(self._counter, int(m.group(1)))

    def create(self, description: str, entities: list[EntitySpan] | None) -> Session:
        with self._lock:
            self._counter += 1
            session_id = f"s-{self._counter}"
        session = new_session(session_id, description, entities, self._lexicons)
        action: dict = {"action": "create", "session_id": session_id,
                        "description": description}
        if entities is not None:
            action["entities"] = [e.to_json_dict() for e in session.entities]
        self.log(session, action)
        with self._lock:
            self._sessions[session_id] = session
        return session

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            return self._sessions.get(session_id)

    def log(self, session: Session, action: dict) -> None:
        session.actions.append(action)
        if self._persist is not None:
            path = self._persist / f"{session.id}.jsonl"
            with open(path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(action, sort_keys=True) + "\n")


def _tag_in(message: str) -> str | None:
    m = re.search(r"</?([A-Z_]+)>", message)
    return m.group(1) if m else None


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    payload = {"code": code, "message": message}
    payload.update(extra)
    return JSONResponse(status_code=status, content=payload)


def _slot_payload(session: Session, slot: DeclarationSlot) -> dict:
    data = slot.to_json_dict()
    if slot.ir:
        decl = slot.parsed()
        data["rendered"] = describe(decl)
        if isinstance(decl, Constraint):
            data["canonical_row"] = _canonical_preview(session, decl)
    return data


def _canonical_preview(session: Session, decl: Constraint) -> dict | None:
    """The declaration's canonical row against the session's current
    variable universe (non-rejected declarations plus this one)."""
    declarations: list[Declaration] = []
    for slot in session.slots:
        if slot.status != STATUS_REJECTED and slot.ir:
            try:
                declarations.append(slot.parsed())
            except LpwbError:
                continue
    names = resolve_variables(IrDocument(declarations=declarations))
    index = {normalize_variable(n): j for j, n in enumerate(names)}
    for name in _constraint_variables(decl):
        key = normalize_variable(name)
        if key not in index:
            index[key] = len(names)
            names.append(name)
    try:
        row = constraint_row(decl, index, len(names))
    except LpwbError:
        return None
    return {
        "variables": names,
        "coefficients": [export_number(c) for c in row.coefficients],
        "rhs": export_number(row.rhs),
    }


def _constraint_variables(decl: Constraint) -> list[str]:
    names = [t.variable for t in decl.terms]
    for name in (decl.variable, decl.base, decl.compared):
        if name is not None:
            names.append(name)
    seen: set[str] = set()
    ordered = []
    for name in names:
        key = normalize_variable(name)
        if key not in seen:
            seen.add(key)
            ordered.append(name)
    return ordered


def _objective_conflict(session: Session, index: int, decl: Declaration) -> bool:
    """Would making slot ``index`` this declaration leave two live objectives?"""
    if not isinstance(decl, Objective):
        return False
    for slot in session.slots:
        if slot.index == index or slot.status == STATUS_REJECTED or not slot.ir:
            continue
        if isinstance(slot.parsed(), Objective):
            return True
    return False


def _apply_patch(decl: Declaration, patch: dict, lexicons: Lexicons) -> Declaration:
    """Field-level edit; raises DeclarationSyntaxError on a bad patch."""
    decl = copy.deepcopy(decl)
    for key, value in patch.items():
        if key not in _PATCH_FIELDS:
            raise DeclarationSyntaxError(f"cannot patch field {key!r}")
        if not isinstance(value, str) or not value.strip():
            raise DeclarationSyntaxError(f"field {key!r} needs a string value")
        value = value.strip()
        if isinstance(decl, Objective):
            if key == "obj_name":
                decl.name = value
            elif key == "obj_dir":
                probe = parse_declaration(
                    f"<DECLARATION> <OBJ_DIR> {value} </OBJ_DIR> "
                    f"<OBJ_NAME> x </OBJ_NAME> [is] "
                    f"<VAR> x </VAR> [TIMES] <PARAM> 1 </PARAM> </DECLARATION>"
                )
                decl.direction = probe.direction
            else:
                raise DeclarationSyntaxError(f"an objective has no {key!r}")
            continue
        if key == "limit":
            context = "ratio" if decl.kind is ConstraintKind.RATIO else "limit"
            try:
                decl.limit = normalize_number(value, context, lexicons.number_words)
            except NumberParseError as exc:
                raise DeclarationSyntaxError(str(exc)) from exc
            decl.limit_text = value
        elif key == "operator":
            try:
                decl.operator = Operator(value)
            except ValueError:
                raise DeclarationSyntaxError(f"unknown operator {value!r}") from None
        elif key == "const_dir":
            decl.const_dir_text = value
        else:
            raise DeclarationSyntaxError(f"a constraint has no {key!r}")
    return decl


def _retype(
    decl: Constraint,
    target: ConstraintKind,
    session: Session,
    slot: DeclarationSlot,
    lexicons: Lexicons,
    xy_alias: bool = False,
) -> tuple[Constraint | None, list[str]]:
    """Re-express ``decl`` under ``target``, filling required roles from
    the declaration itself and then from entity spans in its source
    sentence. Returns (constraint, missing_roles)."""
    sentence_spans = _sentence_spans(session, slot)
    own_vars = _constraint_variables(decl)
    extra_vars = []
    seen = {normalize_variable(v) for v in own_vars}
    for span in sentence_spans:
        if span.label == "VAR" and normalize_variable(span.text) not in seen:
            seen.add(normalize_variable(span.text))
            extra_vars.append(span.text)
    variables = own_vars + extra_vars

    def derived_limit(context: str) -> tuple[Fraction | None, str | None]:
        if decl.limit_text is not None:
            try:
                return normalize_number(
                    decl.limit_text, context, lexicons.number_words
                ), decl.limit_text
            except NumberParseError:
                pass
        if decl.limit is not None:
            return decl.limit, decl.limit_text
        for span in sentence_spans:
            if span.label == "LIMIT":
                try:
                    value = normalize_number(
                        span.text, context, lexicons.number_words
                    )
                except NumberParseError:
                    continue
                return value, span.text
        return None, None

    missing: list[str] = []
    out = Constraint(
        kind=target,
        const_dir_text=decl.const_dir_text,
        operator=decl.operator,
    )
    if target is ConstraintKind.LINEAR:
        if decl.terms:
            out.terms = list(decl.terms)
            out.limit, out.limit_text = decl.limit, decl.limit_text
        elif decl.kind is ConstraintKind.XBY:
            # compared OP k x base reads as compared - k x base OP 0
            out.terms = [
                Term(decl.compared, Fraction(1), "1"),
                Term(decl.base, -decl.multiplier, f"-{decl.multiplier}"),
            ]
            out.limit, out.limit_text = Fraction(0), "0"
        else:
            if not variables:
                missing.append("variables")
            out.terms = [Term(v, Fraction(1), "1") for v in variables]
            out.limit, out.limit_text = derived_limit("limit")
            if out.limit is None:
                missing.append("limit")
    elif target is ConstraintKind.SUM:
        out.limit, out.limit_text = derived_limit("limit")
        if out.limit is None:
            missing.append("limit")
    elif target in (ConstraintKind.UPPER_BOUND, ConstraintKind.LOWER_BOUND,
                    ConstraintKind.RATIO):
        out.variable = _principal_variable(decl, variables)
        if out.variable is None:
            missing.append("variable")
        context = "ratio" if target is ConstraintKind.RATIO else "limit"
        out.limit, out.limit_text = derived_limit(context)
        if out.limit is None:
            missing.append("limit")
        elif target is ConstraintKind.RATIO and not 0 < out.limit <= 1:
            missing.append("fractional limit")
    else:  # XBY
        if len(variables) >= 2:
            out.compared, out.base = variables[0], variables[1]
        else:
            missing.append("second variable" if variables else "two variables")
        multiplier, multiplier_text = decl.multiplier, decl.multiplier_text
        if xy_alias:
            multiplier, multiplier_text = Fraction(1), None
        elif multiplier is None:
            for span in sentence_spans:
                if span.label == "PARAM":
                    try:
                        multiplier = normalize_number(
                            span.text, "param", lexicons.number_words
                        )
                        multiplier_text = span.text
                        break
                    except NumberParseError:
                        continue
        if multiplier is None:
            missing.append("multiplier")
        out.multiplier, out.multiplier_text = multiplier, multiplier_text
    if missing:
        return None, missing
    return out, []


def _principal_variable(decl: Constraint, variables: list[str]) -> str | None:
    """The variable a single-variable kind keeps: the largest
    |coefficient| for linear rows, the compared side for comparisons,
    otherwise the first one available."""
    if decl.terms:
        best = max(decl.terms, key=lambda t: (abs(t.coefficient),))
        return best.variable
    if decl.compared is not None:
        return decl.compared
    return variables[0] if variables else None


def _sentence_spans(session: Session, slot: DeclarationSlot) -> list[EntitySpan]:
    if not slot.source_text:
        return list(session.entities)
    base = session.description.find(slot.source_text)
    if base < 0:
        return list(session.entities)
    end = base + len(slot.source_text)
    return [e for e in session.entities if base <= e.start < end]


def create_app(
    config: ServiceConfig | None = None,
    generator: GeneratorContract | None = None,
) -> FastAPI:
    """Build the application; pass a generator to replace the rule-based
    suggestion engine (the HTTP contract does not change)."""
    config = config or ServiceConfig.from_env()
    lexicons = (
        Lexicons.from_dir(config.lexicon_dir)
        if config.lexicon_dir
        else Lexicons.bundled()
    )
    store = SessionStore(config, lexicons)
    app = FastAPI(title="lpwb service")
    if config.cors_origin:
        from fastapi.middleware.cors import CORSMiddleware

        app.add_middleware(
            CORSMiddleware,
            allow_origins=[config.cors_origin],
            allow_methods=["*"],
            allow_headers=["*"],
        )

    def suggestions_for(session: Session) -> list[Declaration | SuggestionFailure]:
        if session.pending is None:
            session.pending = suggest_declarations(
                session.description,
                session.entities,
                generator=generator,
                lexicons=lexicons,
            )
        return session.pending

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        try:
            payload = await request.json()
        except Exception:
            payload = None
        if not isinstance(payload, dict):
            return _error(400, "empty_description",
                          "send a JSON body with a description")
        description = payload.get("description")
        if not isinstance(description, str) or not description.strip():
            return _error(400, "empty_description",
                          "description must be a non-empty string")
        if len(description.encode("utf-8")) > MAX_DESCRIPTION_BYTES:
            return _error(400, "description_too_large",
                          f"description exceeds {MAX_DESCRIPTION_BYTES} bytes")
        entities = None
        if payload.get("entities") is not None:
            try:
                entities = [
                    EntitySpan.from_json_dict(e) for e in payload["entities"]
                ]
            except (LpwbError, TypeError) as exc:
                return _error(400, "bad_entities", str(exc))
        session = store.create(description, entities)
        return {
            "session_id": session.id,
            "entities": [e.to_json_dict() for e in session.entities],
        }

    @app.get("/sessions/{sid}")
    def get_session(sid: str):
        session = store.get(sid)
        if session is None:
            return _error(404, "unknown_session", f"no session {sid!r}")
        with session.lock:
            return session.model_dict()

    @app.get("/sessions/{sid}/suggestions/next")
    def next_suggestion(sid: str):
        session = store.get(sid)
        if session is None:
            return _error(404, "unknown_session", f"no session {sid!r}")
        with session.lock:
            position = session.cursor
            if position >= session.prompt_count:
                return Response(status_code=204)
            item = suggestions_for(session)[position]
            action: dict = {
                "action": "suggest",
                "index": position,
                "source_text": session.source_texts[position],
            }
            if isinstance(item, SuggestionFailure):
                action["error"] = item.reason
            else:
                action["ir"] = print_ir(item)
            slot = apply_action(session, action)
            store.log(session, action)
            if slot.error is not None:
                return {
                    "index": slot.index,
                    "error": {"code": "suggestion_failed", "message": slot.error},
                    "source_text": slot.source_text,
                }
            return _slot_payload(session, slot)

    def _review(sid: str, i: int, verb: str):
        session = store.get(sid)
        if session is None:
            return _error(404, "unknown_session", f"no session {sid!r}")
        with session.lock:
            if not 0 <= i < len(session.slots):
                return _error(404, "unknown_declaration", f"no declaration {i}")
            slot = session.slots[i]
            if verb == "accept":
                if not slot.ir:
                    return _error(409, "empty_declaration",
                                  "edit this slot before accepting it")
                if _objective_conflict(session, i, slot.parsed()):
                    return _error(409, "duplicate_objective",
                                  "another live declaration is already the objective")
            action = {"action": verb, "index": i}
            slot = apply_action(session, action)
            store.log(session, action)
            return _slot_payload(session, slot)

    @app.post("/sessions/{sid}/declarations/{i}/accept")
    def accept_declaration(sid: str, i: int):
        return _review(sid, i, "accept")

    @app.post("/sessions/{sid}/declarations/{i}/reject")
    def reject_declaration(sid: str, i: int):
        return _review(sid, i, "reject")

    @app.post("/sessions/{sid}/declarations/{i}/edit")
    async def edit_declaration(sid: str, i: int, request: Request):
        session = store.get(sid)
        if session is None:
            return _error(404, "unknown_session", f"no session {sid!r}")
        try:
            payload = await request.json()
        except Exception:
            payload = None
        if not isinstance(payload, dict) or not payload:
            return _error(422, "bad_edit",
                          "send an ir fragment or a field patch")
        with session.lock:
            if not 0 <= i < len(session.slots):
                return _error(404, "unknown_declaration", f"no declaration {i}")
            slot = session.slots[i]
            if "ir" in payload:
                text = payload["ir"]
                if not isinstance(text, str):
                    return _error(422, "bad_edit", "ir must be a string")
                try:
                    decl = parse_declaration(text)
                except LpwbError as exc:
                    tag = _tag_in(str(exc))
                    return _error(422, "bad_ir", str(exc),
                                  **({"tag": tag} if tag else {}))
            else:
                current = None
                if slot.ir:
                    current = slot.parsed()
                if current is None:
                    return _error(422, "empty_declaration",
                                  "this slot has no declaration; send an ir fragment")
                try:
                    decl = _apply_patch(current, payload, lexicons)
                    decl = parse_declaration(print_ir(decl))  # round-trip check
                except LpwbError as exc:
                    tag = _tag_in(str(exc))
                    return _error(422, "bad_patch", str(exc),
                                  **({"tag": tag} if tag else {}))
            if _objective_conflict(session, i, decl):
                return _error(409, "duplicate_objective",
                              "another live declaration is already the objective")
            action = {"action": "edit", "index": i, "ir": print_ir(decl)}
            slot = apply_action(session, action)
            store.log(session, action)
            return _slot_payload(session, slot)

    @app.post("/sessions/{sid}/declarations/{i}/retype")
    async def retype_declaration(sid: str, i: int, request: Request):
        session = store.get(sid)
        if session is None:
            return _error(404, "unknown_session", f"no session {sid!r}")
        try:
            payload = await request.json()
        except Exception:
            payload = None
        raw_kind = payload.get("const_type") if isinstance(payload, dict) else None
        if not isinstance(raw_kind, str):
            return _error(422, "bad_retype", "send {\"const_type\": ...}")
        try:
            target = (
                ConstraintKind.XBY
                if raw_kind == "XY_CONSTRAINT"
                else ConstraintKind(raw_kind)
            )
        except ValueError:
            return _error(422, "unknown_constraint_type",
                          f"unknown constraint type {raw_kind!r}")
        with session.lock:
            if not 0 <= i < len(session.slots):
                return _error(404, "unknown_declaration", f"no declaration {i}")
            slot = session.slots[i]
            decl = slot.parsed() if slot.ir else None
            if not isinstance(decl, Constraint):
                return _error(409, "not_a_constraint",
                              "only constraints can be retyped")
            if decl.kind is target:
                return _slot_payload(session, slot)  # no-op
            new_decl, missing = _retype(
                decl, target, session, slot, lexicons,
                xy_alias=raw_kind == "XY_CONSTRAINT",
            )
            if missing:
                return _error(
                    409, "missing_roles",
                    f"cannot express this as {target.value}",
                    missing=missing,
                )
            action = {
                "action": "retype",
                "index": i,
                "const_type": raw_kind,
                "ir": print_ir(new_decl),
            }
            slot = apply_action(session, action)
            store.log(session, action)
            return _slot_payload(session, slot)

    @app.post("/sessions/{sid}/solve")
    def solve_session(sid: str):
        session = store.get(sid)
        if session is None:
            return _error(404, "unknown_session", f"no session {sid!r}")
        with session.lock:
            accepted: list[tuple[DeclarationSlot, Declaration]] = []
            for slot in session.slots:
                if slot.status == STATUS_ACCEPTED and slot.ir:
                    accepted.append((slot, slot.parsed()))
            if not any(isinstance(d, Objective) for _, d in accepted):
                return _error(409, "no_objective",
                              "accept an objective before solving")
            doc = IrDocument(declarations=[d for _, d in accepted])
            try:
                form = canonicalize(doc)
            except LpwbError as exc:
                return _error(409, "cannot_canonicalize", str(exc))
            solution = solve(form)
            payload = solution.to_json_dict(form)
            payload["direction"] = form.direction.value
            payload["objective_name"] = form.objective_name
            payload["variables"] = list(form.variables)
            if solution.status == STATUS_INFEASIBLE:
                rows = [s for s, d in accepted if isinstance(d, Constraint)]
                payload["conflicts"] = [
                    {
                        "row": r,
                        "declaration_index": rows[r].index,
                        "source_text": rows[r].source_text,
                        "rendered": describe(rows[r].parsed()),
                    }
                    for r in solution.infeasible_rows
                    if 0 <= r < len(rows)
                ]
            return payload

    @app.post("/evaluate")
    async def evaluate(request: Request):
        try:
            payload = await request.json()
        except Exception:
            payload = None
        if not isinstance(payload, dict):
            return _error(400, "bad_request", "send pred_corpus and gold_corpus")
        pred = payload.get("pred_corpus")
        gold = payload.get("gold_corpus")
        if not isinstance(pred, list) or not isinstance(gold, list):
            return _error(400, "bad_request",
                          "pred_corpus and gold_corpus must be lists")
        try:
            pairs, ids = _corpus_pairs(pred, gold)
        except LpwbError as exc:
            return _error(400, "bad_request", str(exc))
        try:
            report = evaluate_corpus(pairs, ids)
        except LpwbError as exc:
            return _error(400, "bad_gold", str(exc))
        return report.to_json_dict()

    return app


def _corpus_pairs(
    pred: list, gold: list
) -> tuple[list[tuple[str, str]], list[str]]:
    """Pair prediction and gold IR texts: parallel string lists, or
    record dicts with ``id`` and ``ir`` matched by id (a gold id with
    no prediction scores an empty prediction)."""
    if all(isinstance(g, str) for g in gold) and all(isinstance(p, str) for p in pred):
        if len(pred) != len(gold):
            raise LpwbError("pred_corpus and gold_corpus lengths differ")
        return list(zip(pred, gold)), [str(k) for k in range(len(gold))]
    by_id: dict[str, str] = {}
    for item in pred:
        if not isinstance(item, dict) or "id" not in item or "ir" not in item:
            raise LpwbError("corpus items need id and ir fields")
        by_id[str(item["id"])] = str(item["ir"])
    pairs: list[tuple[str, str]] = []
    ids: list[str] = []
    for item in gold:
        if not isinstance(item, dict) or "id" not in item or "ir" not in item:
            raise LpwbError("corpus items need id and ir fields")
        gid = str(item["id"])
        pairs.append((by_id.get(gid, ""), str(item["ir"])))
        ids.append(gid)
    return pairs, ids


def run(
    config: ServiceConfig | None = None,
    host: str = "127.0.0.1",
    port: int = 8000,
) -> None:
    """Serve the application with uvicorn (blocks)."""
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port)
