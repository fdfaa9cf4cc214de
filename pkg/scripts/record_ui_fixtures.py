#!/usr/bin/env python3
"""Record service request/response fixtures for the web client's contract tests.

Drives the demo session (answers: negative, negative, positive) against an
in-process service app and writes every exchange to
frontend/fixtures/demo_session.json, so the client tests can replay the wire
protocol without a live engine.
"""

import json
import sys
from pathlib import Path

from fastapi.testclient import TestClient

from mbdiag.service import create_app

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "frontend" / "fixtures" / "demo_session.json"


def main() -> int:
    dpi_doc = json.loads((ROOT / "data" / "demo_dpi.json").read_text())
    client = TestClient(create_app())
    steps = []

    def record(method: str, path: str, body=None):
        response = client.request(method, path, json=body) if body is not None \
            else client.request(method, path)
        doc = response.json() if response.status_code != 204 else None
        steps.append({"method": method, "path": path, "body": body,
                      "status": response.status_code, "response": doc})
        return doc

    created = record("POST", "/sessions",
                     {"dpi": dpi_doc, "ld": 5, "engine": "dynamichs", "heuristic": "ent",
                      "script": ["A -> C", "A -> !B", "A -> !C"]})
    sid = created["sessionId"]
    record("GET", f"/sessions/{sid}/stats")
    for outcome in ("negative", "negative", "positive"):
        record("POST", f"/sessions/{sid}/answer", {"outcome": outcome})
        record("GET", f"/sessions/{sid}/stats")
    # a reconnect: resume by session id
    record("GET", f"/sessions/{sid}")
    record("GET", f"/sessions/{sid}/stats")

    # the recorded ids must be stable for replay: rewrite them to a fixed token
    text = json.dumps(steps, indent=2).replace(sid, "SESSION")
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(text)
    final = steps[-2]["response"]["final"]
    print(f"recorded {len(steps)} exchanges -> {OUT} (final diagnosis: {'+'.join(final)})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
