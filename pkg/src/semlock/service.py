"""JSON-over-HTTP facade: layout, enrollment, verification, telemetry.

A thin lab-tool service; errors use the body shape
`{"error": code, "detail": text}`.  The data directory (credential store
and event log) comes from the config file and can be overridden with the
SEMLOCK_DATA environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import corpus, model
from .credentials import (
    DEFAULT_LOCKOUT_SECONDS,
    DEFAULT_MAX_FAILURES,
    DEFAULT_MIN_MOVES,
    CredentialStore,
)
from .engine import DEFAULT_SNAP_RADIUS
from .errors import DuplicateUser, PolicyViolation, SemlockError, UnknownUser
from .model import GridSpec, IconId


@dataclass(frozen=True)
class SessionToken:
    """Opaque 128-bit attempt correlation id handed out with the layout."""

    token: str
    issued_at: float
    technique: str = "SEMANTIC"

    @classmethod
    def fresh(cls) -> "SessionToken":
        return cls(token=secrets.token_hex(16), issued_at=time.time())


@dataclass
class ServiceConfig:
    grid: GridSpec = field(default_factory=model.default_grid)
    snap_radius: float = DEFAULT_SNAP_RADIUS
    min_moves: int = DEFAULT_MIN_MOVES
    max_failures: int = DEFAULT_MAX_FAILURES
    lockout_seconds: float = DEFAULT_LOCKOUT_SECONDS
    data_dir: Path = Path("semlock-data")
    static_dir: Path | None = None


def _grid_from_config(obj: dict) -> GridSpec:
    icons = []
    placement = {}
    for i, entry in enumerate(obj["icons"]):
        icons.append(IconId(entry["id"], int(entry.get("ordinal", i))))
        placement[entry["id"]] = (int(entry["col"]), int(entry["row"]))
    return GridSpec(cols=int(obj["cols"]), rows=int(obj["rows"]),
                    icons=tuple(icons), placement=placement)


def load_config(path: str | Path | None = None,
                data_dir: str | Path | None = None) -> ServiceConfig:
    """Config from a JSON (or, on Python 3.11+, TOML) file plus overrides."""
    cfg = ServiceConfig()
    if path is not None:
        path = Path(path)
        if path.suffix == ".toml":
            try:
                import tomllib
            except ImportError as exc:
                raise ValueError(
                    "TOML config needs Python 3.11+; use a JSON config here"
                ) from exc
            obj = tomllib.loads(path.read_text(encoding="utf-8"))
        else:
            obj = json.loads(path.read_text(encoding="utf-8"))
        if "grid" in obj:
            cfg.grid = _grid_from_config(obj["grid"])
        cfg.snap_radius = float(obj.get("snap_radius", cfg.snap_radius))
        cfg.min_moves = int(obj.get("min_moves", cfg.min_moves))
        cfg.max_failures = int(obj.get("max_failures", cfg.max_failures))
        cfg.lockout_seconds = float(obj.get("lockout_seconds", cfg.lockout_seconds))
        if "data_dir" in obj:
            cfg.data_dir = Path(obj["data_dir"])
        if "static_dir" in obj:
            cfg.static_dir = Path(obj["static_dir"])
    if data_dir is not None:
        cfg.data_dir = Path(data_dir)
    env_dir = os.environ.get("SEMLOCK_DATA")
    if env_dir:
        cfg.data_dir = Path(env_dir)
    return cfg


def _error(status: int, code: str, detail: str, **extra) -> JSONResponse:
    return JSONResponse({"error": code, "detail": detail, **extra}, status_code=status)


def layout_manifest(config: ServiceConfig) -> dict:
    return {
        "grid": {"cols": config.grid.cols, "rows": config.grid.rows},
        "icons": [
            {
                "id": icon.id,
                "ordinal": icon.ordinal,
                "col": config.grid.placement[icon.id][0],
                "row": config.grid.placement[icon.id][1],
            }
            for icon in config.grid.icons
        ],
        "snap": {"radius": config.snap_radius,
                 "tie_break": ["distance", "anchor_ordinal", "side_order"]},
        "policy": {
            "min_moves": config.min_moves,
            "max_failures": config.max_failures,
            "lockout_seconds": config.lockout_seconds,
        },
    }


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    config.data_dir.mkdir(parents=True, exist_ok=True)
    store = CredentialStore(
        path=config.data_dir / "credentials.jsonl",
        min_moves=config.min_moves,
        max_failures=config.max_failures,
        lockout_seconds=config.lockout_seconds,
    )
    events_path = config.data_dir / "events.jsonl"
    events_lock = threading.Lock()
    seen_event_ids: set[str] = set()
    if events_path.exists():
        records, _ = corpus.load_corpus(events_path, "events")
        seen_event_ids.update(r.event_id for r in records if r.event_id is not None)

    app = FastAPI(title="semlock", docs_url=None, redoc_url=None)
    app.state.config = config
    app.state.store = store

    async def _json_body(request: Request) -> dict | None:
        try:
            body = await request.json()
        except Exception:
            return None
        return body if isinstance(body, dict) else None

    @app.get("/api/layout")
    def layout():
        manifest = layout_manifest(config)
        token = SessionToken.fresh()
        manifest["token"] = {"token": token.token, "issued_at": token.issued_at,
                             "technique": token.technique}
        return manifest

    @app.post("/api/enroll")
    async def enroll(request: Request):
        body = await _json_body(request)
        if body is None or "user" not in body or "canonical" not in body:
            return _error(400, "bad_request", "body must be JSON with user and canonical")
        try:
            password = model.parse_canonical(str(body["canonical"]), config.grid.icons)
        except SemlockError as exc:
            return _error(400, "parse_error", str(exc))
        try:
            store.enroll(str(body["user"]), password)
        except PolicyViolation as exc:
            return _error(400, "policy_violation", str(exc))
        except DuplicateUser as exc:
            return _error(409, "duplicate_user", str(exc))
        return {"ok": True}

    @app.post("/api/verify")
    async def verify(request: Request):
        body = await _json_body(request)
        if body is None or "user" not in body or "canonical" not in body:
            return _error(400, "bad_request", "body must be JSON with user and canonical")
        try:
            attempt = model.parse_canonical(str(body["canonical"]), config.grid.icons)
        except SemlockError as exc:
            return _error(400, "parse_error", str(exc))
        try:
            result = store.verify(str(body["user"]), attempt)
        except UnknownUser as exc:
            return _error(404, "unknown_user", str(exc))
        if result.status == "locked":
            return _error(423, "locked", "too many failed attempts",
                          retry_after=result.retry_after,
                          ok=False, locked=True, remaining=0)
        return {"ok": result.accepted, "locked": False, "remaining": result.remaining}

    @app.post("/api/events")
    async def events(request: Request):
        body = await _json_body(request)
        if body is None or not isinstance(body.get("records"), list):
            return _error(400, "bad_request", "body must be JSON with a records list")
        accepted = 0
        rejected = []
        to_store = []
        with events_lock:
            for i, obj in enumerate(body["records"]):
                if not isinstance(obj, dict):
                    rejected.append({"index": i, "reason": "record is not a JSON object"})
                    continue
                try:
                    event = corpus.parse_event(obj)
                except (ValueError, SemlockError) as exc:
                    rejected.append({"index": i, "reason": str(exc)})
                    continue
                accepted += 1
                if event.event_id is not None:
                    if event.event_id in seen_event_ids:
                        continue  # idempotent resubmission, stored once
                    seen_event_ids.add(event.event_id)
                to_store.append(event)
            if to_store:
                with events_path.open("a", encoding="utf-8") as fh:
                    for event in to_store:
                        fh.write(json.dumps(event.to_dict(), sort_keys=True) + "\n")
        return {"accepted": accepted, "rejected": rejected}

    if config.static_dir is not None and config.static_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="semlock-service",
                                     description="Run the semlock authentication service")
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8470)
    parser.add_argument("--data-dir", help="override the data directory")
    parser.add_argument("--static", help="serve a static UI bundle from this directory")
    args = parser.parse_args(argv)

    config = load_config(args.config, data_dir=args.data_dir)
    if args.static:
        config.static_dir = Path(args.static)

    import uvicorn

    uvicorn.run(create_app(config), host=args.host, port=args.port, log_level="warning")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
