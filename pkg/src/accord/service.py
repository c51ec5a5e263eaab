"""HTTP session service for the interactive correction loop.

A session is created from a treebank and a profile; the loop runs until it
either converges or stops on a question for the user.  Answers resume the
loop, update the profile, and the full session state can be re-read at any
time.  Session state is deterministic: it is recomputed by replaying the
recorded answers against the initial profile, so a replayed session always
reproduces byte-identical trees and profiles.

Endpoints (JSON bodies, errors as ``{code, message, detail}``):

  POST /v1/sessions                create a session, run to first question
  GET  /v1/sessions/{id}           full session state
  POST /v1/sessions/{id}/answers   answer the pending question
  POST /v1/check                   stateless auto-mode check of a treebank
  GET  /v1/profiles/{id}           read a stored profile
  PUT  /v1/profiles/{id}           store a profile (422 on invariants)
"""

from __future__ import annotations

import itertools
import threading
import uuid
from dataclasses import dataclass, field
from typing import Any

from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .corrector import (
    CorrectionReport,
    Question,
    auto_answers,
    correct_tree,
)
from .deptree import DepTree, TreebankFormatError, parse_treebank
from .lexicon import Lexicon
from .profile import Profile, ProfileError, default_profile
from .serialize import (
    profile_from_json,
    profile_json,
    question_json,
    report_json,
)

DEFAULT_PROFILE_ID = "default"


def _error(status: int, code: str, message: str, detail: Any = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "detail": detail},
    )


@dataclass
class Session:
    id: str
    lexicon: Lexicon
    treebank_text: str
    trees: list[DepTree]
    initial_profile: Profile
    profile_id: str | None
    answers: list[tuple[str, str]] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    # Derived state, refreshed after every answer.
    reports: list[CorrectionReport] = field(default_factory=list)
    pending: Question | None = None
    profile_after: Profile | None = None

    def run(self) -> None:
        """Recompute the session state by replaying all recorded answers."""
        question_ids = (f"q{i}" for i in itertools.count(1))
        queue = list(self.answers)
        profile = self.initial_profile
        reports: list[CorrectionReport] = []
        pending: Question | None = None

        def source(question: Question, decision) -> str | None:
            if not queue:
                return None
            qid, value = queue[0]
            if qid != question.id:
                return None
            queue.pop(0)
            return value

        for tree in self.trees:
            report = correct_tree(
                tree, self.lexicon, profile, source, question_ids=question_ids
            )
            reports.append(report)
            profile = report.profile_after
            if report.pending is not None:
                pending = report.pending
                break
        self.reports = reports
        self.pending = pending
        self.profile_after = profile


def session_json(session: Session) -> dict[str, Any]:
    converged = session.pending is None and all(r.converged for r in session.reports)
    return {
        "id": session.id,
        "profile_id": session.profile_id,
        "converged": converged,
        "pending_question": question_json(session.pending),
        "answers": [{"question_id": q, "value": v} for q, v in session.answers],
        "reports": [report_json(r) for r in session.reports],
        "profile": profile_json(session.profile_after),
    }


def create_app(lexicon: Lexicon, profiles: dict[str, Profile] | None = None) -> FastAPI:
    app = FastAPI(title="accord", docs_url=None, redoc_url=None)
    # The web client is served statically from another origin.
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store_lock = threading.Lock()
    sessions: dict[str, Session] = {}
    profile_store: dict[str, Profile] = {DEFAULT_PROFILE_ID: default_profile()}
    if profiles:
        profile_store.update(profiles)

    def resolve_profile(payload: dict) -> tuple[Profile, str | None]:
        if "profile" in payload and payload["profile"] is not None:
            return profile_from_json(payload["profile"]), None
        profile_id = payload.get("profile_id") or DEFAULT_PROFILE_ID
        with store_lock:
            if profile_id not in profile_store:
                raise ProfileError(f"unknown profile id {profile_id!r}")
            return profile_store[profile_id], profile_id

    @app.post("/v1/sessions")
    def create_session(payload: dict = Body(...)):
        treebank = payload.get("treebank")
        if not isinstance(treebank, str) or not treebank.strip():
            return _error(400, "bad_request", "missing 'treebank' text")
        try:
            trees = parse_treebank(treebank)
        except TreebankFormatError as exc:
            return _error(400, "parse_error", str(exc))
        if not trees:
            return _error(400, "parse_error", "treebank contains no sentences")
        try:
            profile, profile_id = resolve_profile(payload)
        except ProfileError as exc:
            return _error(400, "bad_profile", str(exc))
        session = Session(
            id=uuid.uuid4().hex,
            lexicon=lexicon,
            treebank_text=treebank,
            trees=trees,
            initial_profile=profile,
            profile_id=profile_id,
        )
        with session.lock:
            session.run()
        with store_lock:
            sessions[session.id] = session
        return {"session": session_json(session)}

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        session = sessions.get(session_id)
        if session is None:
            return _error(404, "not_found", f"unknown session {session_id!r}")
        with session.lock:
            return {"session": session_json(session)}

    @app.post("/v1/sessions/{session_id}/answers")
    def post_answer(session_id: str, payload: dict = Body(...)):
        session = sessions.get(session_id)
        if session is None:
            return _error(404, "not_found", f"unknown session {session_id!r}")
        question_id = payload.get("question_id")
        value = payload.get("value")
        with session.lock:
            if session.pending is None:
                return _error(409, "no_pending_question", "nothing to answer")
            if question_id != session.pending.id:
                return _error(
                    409,
                    "stale_question",
                    f"pending question is {session.pending.id!r}, got {question_id!r}",
                )
            allowed = [o.value for o in session.pending.options]
            if value not in allowed:
                return _error(
                    400, "bad_answer", f"value must be one of {allowed}, got {value!r}"
                )
            before = session.profile_after
            session.answers.append((question_id, value))
            session.run()
            after = session.profile_after
            if session.profile_id is not None:
                with store_lock:
                    profile_store[session.profile_id] = after
            deltas = {
                name: {
                    "before": getattr(before, name),
                    "after": getattr(after, name),
                }
                for name in ("k_majority", "k_phonetics", "k_omission", "k_governor", "t")
            }
            body = session_json(session)
            body["answer_effect"] = deltas
            return {"session": body}

    @app.post("/v1/check")
    def batch_check(payload: dict = Body(...)):
        treebank = payload.get("treebank")
        if not isinstance(treebank, str) or not treebank.strip():
            return _error(400, "bad_request", "missing 'treebank' text")
        try:
            trees = parse_treebank(treebank)
        except TreebankFormatError as exc:
            return _error(400, "parse_error", str(exc))
        try:
            profile, _ = resolve_profile(payload)
        except ProfileError as exc:
            return _error(400, "bad_profile", str(exc))
        reports = [
            report_json(correct_tree(tree, lexicon, profile, auto_answers))
            for tree in trees
        ]
        return {"reports": reports}

    @app.get("/v1/profiles/{profile_id}")
    def get_profile(profile_id: str):
        with store_lock:
            profile = profile_store.get(profile_id)
        if profile is None:
            return _error(404, "not_found", f"unknown profile {profile_id!r}")
        return {"id": profile_id, "profile": profile_json(profile)}

    @app.put("/v1/profiles/{profile_id}")
    def put_profile(profile_id: str, payload: dict = Body(...)):
        try:
            profile = profile_from_json(payload.get("profile", payload))
        except ProfileError as exc:
            return _error(422, "invalid_profile", str(exc))
        with store_lock:
            profile_store[profile_id] = profile
        return {"id": profile_id, "profile": profile_json(profile)}

    return app
