"""Local HTTP session API for interactive walkthroughs and checking.

Endpoints (JSON unless noted):

* ``POST /api/session`` — create a session; body may set ``slot_mode``,
  ``name_words`` or a full ``script``; returns the first pending choice.
* ``POST /api/session/{id}/choose`` — body ``{"value": 2}`` (named values
  like ``"southerner"`` or ``"male"`` also work); advances to the next
  choice or completion.
* ``GET /api/session/{id}`` — current state.
* ``POST /api/check`` — body ``{"formula": "AG p", "trick"?: script text}``;
  verdict plus evidence trace.
* ``GET /api/trick`` — canonical script text of the built-in routine.

Sessions live in memory for the process lifetime. Each session's state is
only touched under its own lock, so concurrent sessions are independent and
requests within one session serialize. Binds to loopback by default; this is
a local tool with no auth.
"""

from __future__ import annotations

import json
import threading
import uuid
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import ctl
from .deck import render_deck
from .model import (
    GENDER_ALIASES,
    NATIVE_ALIASES,
    BindingError,
    ChoiceKind,
    ProgramError,
    SlotMode,
    TrickRun,
    builtin_shousuigongcishi,
)
from .script import ParseError, parse, pretty_print

_ALIASES = {**NATIVE_ALIASES, **GENDER_ALIASES}


class ApiError(Exception):
    def __init__(self, status: int, message: str, **extra):
        super().__init__(message)
        self.status = status
        self.payload = {"error": message, **extra}


def _resolve_value(raw, kind: ChoiceKind) -> int:
    if isinstance(raw, bool) or raw is None:
        raise ApiError(422, f"cannot read choice value {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        token = raw.strip().lower()
        if token in _ALIASES and kind in (ChoiceKind.NATIVE_PLACE,
                                          ChoiceKind.GENDER):
            return _ALIASES[token]
        try:
            return int(token)
        except ValueError:
            pass
    raise ApiError(422, f"cannot read choice value {raw!r}")


def _program_from_body(body: dict):
    if "script" in body:
        try:
            return parse(body["script"])
        except (ParseError, ProgramError) as exc:
            raise ApiError(422, f"script error: {exc}")
    name_words = body.get("name_words")
    if name_words is not None:
        try:
            return builtin_shousuigongcishi(tuple(int(w) for w in name_words))
        except (TypeError, ValueError, ProgramError) as exc:
            raise ApiError(422, f"bad name_words: {exc}")
    return builtin_shousuigongcishi()


def _slot_mode_from_body(body: dict) -> SlotMode:
    raw = body.get("slot_mode", SlotMode.INTERNAL_GAPS.value)
    try:
        return SlotMode(raw)
    except ValueError:
        raise ApiError(422, f"unknown slot_mode {raw!r}")


class Session:
    def __init__(self, body: dict):
        self.id = uuid.uuid4().hex
        self.lock = threading.Lock()
        self.program = _program_from_body(body)
        self.run = TrickRun(self.program, _slot_mode_from_body(body))
        self.accepted: list[dict] = []
        self.run.advance()

    def choose(self, raw) -> None:
        if self.run.done:
            raise ApiError(409, "session already completed")
        request = self.run.pending
        value = _resolve_value(raw, request.kind)
        if value not in request.domain:
            raise ApiError(422, f"value {value} is not available here",
                           domain=list(request.domain))
        self.run.choose(value)
        self.accepted.append({"name": request.name, "value": value})

    def state(self) -> dict:
        run = self.run
        pending = None
        if run.pending is not None:
            pending = {
                "name": run.pending.name,
                "kind": run.pending.kind.value,
                "prompt": run.pending.prompt,
                "domain": list(run.pending.domain),
            }
        record = run.record().to_json() if run.done else None
        return {
            "session_id": self.id,
            "deck": render_deck(run.deck),
            "done": run.done,
            "hidden_taken": run.hidden is not None,
            "pending": pending,
            "accepted": list(self.accepted),
            "checkpoints": [c.to_json() for c in run.checkpoints],
            "record": record,
            "reveal": (None if record is None
                       else "match" if record["final"] == "yes" else "mismatch"),
        }


class SessionStore:
    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def create(self, body: dict) -> Session:
        session = Session(body)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise ApiError(404, f"unknown session {session_id!r}")
        return session


def check_payload(body: dict) -> dict:
    """Shared by POST /api/check; verdict plus evidence for a formula."""
    if "formula" not in body:
        raise ApiError(422, "body needs a 'formula'")
    try:
        formula = ctl.parse_formula(body["formula"])
    except ctl.FormulaError as exc:
        raise ApiError(422, f"formula error: {exc}")
    program = _program_from_body(body)
    mode = _slot_mode_from_body(body)
    tree = ctl.build_tree(program, slot_mode=mode)
    try:
        verdict = ctl.eval_formula(tree, formula)
    except ctl.EvalError as exc:
        raise ApiError(422, str(exc))
    return {
        "formula": body["formula"],
        "verdict": verdict.value,
        "m": tree.branch_count(),
        "slot_mode": mode.value,
        "evidence": (ctl.explain(verdict)
                     if verdict.evidence is not None else None),
    }


class Handler(BaseHTTPRequestHandler):
    server_version = "trickcheck"
    store: SessionStore  # set on the server class
    static_dir: Path | None = None

    def log_message(self, format, *args):  # quiet by default
        pass

    # -- plumbing ------------------------------------------------------

    def _send_json(self, status: int, payload: dict) -> None:
        data = json.dumps(payload, indent=2).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _send_text(self, status: int, text: str,
                   content_type="text/plain; charset=utf-8") -> None:
        data = text.encode()
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(data)

    def _body(self) -> dict:
        length = int(self.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        try:
            body = json.loads(self.rfile.read(length))
        except json.JSONDecodeError:
            raise ApiError(400, "request body is not valid JSON")
        if not isinstance(body, dict):
            raise ApiError(400, "request body must be a JSON object")
        return body

    def _route(self, method: str) -> None:
        try:
            self._dispatch(method)
        except ApiError as exc:
            self._send_json(exc.status, exc.payload)
        except Exception as exc:  # keep the server alive on bugs
            self._send_json(500, {"error": f"internal error: {exc}"})

    def do_GET(self):
        self._route("GET")

    def do_POST(self):
        self._route("POST")

    # -- routes ----------------------------------------------------------

    def _dispatch(self, method: str) -> None:
        store = type(self).store
        parts = [p for p in self.path.split("?")[0].split("/") if p]

        if parts[:1] == ["api"]:
            if method == "POST" and parts == ["api", "session"]:
                session = store.create(self._body())
                with session.lock:
                    return self._send_json(200, session.state())
            if len(parts) == 3 and parts[:2] == ["api", "session"]:
                session = store.get(parts[2])
                if method == "GET":
                    with session.lock:
                        return self._send_json(200, session.state())
            if (method == "POST" and len(parts) == 4
                    and parts[:2] == ["api", "session"] and parts[3] == "choose"):
                session = store.get(parts[2])
                body = self._body()
                with session.lock:
                    session.choose(body.get("value"))
                    return self._send_json(200, session.state())
            if method == "POST" and parts == ["api", "check"]:
                return self._send_json(200, check_payload(self._body()))
            if method == "GET" and parts == ["api", "trick"]:
                text = pretty_print(builtin_shousuigongcishi()).text
                return self._send_text(200, text)
            raise ApiError(404, f"no such endpoint: {method} {self.path}")

        if method == "GET":
            return self._static(parts)
        raise ApiError(404, f"no such endpoint: {method} {self.path}")

    def _static(self, parts: list[str]) -> None:
        root = type(self).static_dir
        if root is None:
            raise ApiError(404, "no static files served; use the /api endpoints")
        target = (root / "/".join(parts or ["index.html"])).resolve()
        if root.resolve() not in target.parents and target != root.resolve():
            raise ApiError(404, "not found")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            raise ApiError(404, "not found")
        content_type = {
            ".html": "text/html; charset=utf-8",
            ".js": "text/javascript; charset=utf-8",
            ".css": "text/css; charset=utf-8",
            ".json": "application/json",
        }.get(target.suffix, "application/octet-stream")
        self._send_text(200, target.read_text(encoding="utf-8"), content_type)


def serve(host: str = "127.0.0.1", port: int = 8765,
          static_dir: Path | str | None = None) -> ThreadingHTTPServer:
    """Build the server (not yet serving); call ``serve_forever`` on it.

    ``static_dir`` optionally points at a directory with the browser
    walkthrough; when omitted, a ``frontend/`` directory next to the current
    working directory is used if it exists.
    """
    if static_dir is None:
        candidate = Path.cwd() / "frontend"
        static_dir = candidate if candidate.is_dir() else None
    handler = type("BoundHandler", (Handler,), {
        "store": SessionStore(),
        "static_dir": Path(static_dir) if static_dir else None,
    })
    return ThreadingHTTPServer((host, port), handler)
