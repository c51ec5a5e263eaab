#!/usr/bin/env python3
"""Record real service request/response pairs for the frontend contract tests.

Walks two complete sessions over the main example sentence (one answered
plural, one singular) plus the error cases, and dumps every exchange to
fixtures/fig1_session.json.  Rerun after any service schema change.
"""

import json
import pathlib
import sys

from fastapi.testclient import TestClient

from accord.deptree import serialize_treebank
from accord.fixtures import fixture_lexicon, fixture_trees
from accord.service import create_app

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures" / "fig1_session.json"


def main() -> int:
    client = TestClient(create_app(fixture_lexicon()))
    trees = fixture_trees()
    fig1 = serialize_treebank([trees["fig1"]])
    clean = serialize_treebank([trees["fig1_correct"]])
    exchanges = []

    def call(label, method, path, body=None):
        if method == "GET":
            response = client.get(path)
        elif method == "POST":
            response = client.post(path, json=body)
        else:
            raise ValueError(method)
        exchanges.append(
            {
                "label": label,
                "request": {"method": method, "path": path, "body": body},
                "response": {"status": response.status_code, "body": response.json()},
            }
        )
        return response.json()

    # Session answered "plural".
    created = call("create_plu", "POST", "/v1/sessions", {"treebank": fig1})
    sid = created["session"]["id"]
    qid = created["session"]["pending_question"]["id"]
    call(
        "answer_plu",
        "POST",
        f"/v1/sessions/{sid}/answers",
        {"question_id": qid, "value": "plu"},
    )
    call("get_after_plu", "GET", f"/v1/sessions/{sid}")

    # Session answered "singular", isolated on a fresh inline profile so the
    # recorded weights do not depend on the first session.  The inline body
    # also keeps this create request distinct from the first one (the replay
    # stub keys exchanges by method, path, and body).
    from accord.profile import default_profile
    from accord.serialize import profile_json

    created = call(
        "create_sin",
        "POST",
        "/v1/sessions",
        {"treebank": fig1, "profile": profile_json(default_profile())},
    )
    sid = created["session"]["id"]
    qid = created["session"]["pending_question"]["id"]
    call(
        "answer_sin",
        "POST",
        f"/v1/sessions/{sid}/answers",
        {"question_id": qid, "value": "sin"},
    )

    # Clean sentence: immediate convergence.
    call("create_clean", "POST", "/v1/sessions", {"treebank": clean})

    # Error shapes.
    call("create_bad", "POST", "/v1/sessions", {"treebank": "1\tbroken\n"})
    call("get_unknown", "GET", "/v1/sessions/nope")
    created = call(
        "create_stale",
        "POST",
        "/v1/sessions",
        {"treebank": fig1, "profile_id": "default"},
    )
    sid = created["session"]["id"]
    call(
        "answer_stale",
        "POST",
        f"/v1/sessions/{sid}/answers",
        {"question_id": "q999", "value": "plu"},
    )

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(
        json.dumps({"exchanges": exchanges}, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {OUT} ({len(exchanges)} exchanges)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
