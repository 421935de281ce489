"""Operator entry point: serve the demo model, emit bindings, or run one-shot
commands against an in-process model.

``call`` prints exactly the JSON document the HTTP service would return for
the same path and body; exit status is the only success/failure channel
(0 ok, 1 command error, 2 usage error).
"""

from __future__ import annotations

import argparse
import os
import sys
import threading
from typing import Mapping, Optional, Sequence

from .demo_model import build_demo_registry
from .http_service import ServiceConfig, serve
from .tsgen import emit, plan_from_registry
from .value import serialize

__all__ = ["main", "resolve_port"]

DEFAULT_PORT = 8080


def resolve_port(cli_port: Optional[int], env: Mapping[str, str]) -> int:
    """--port wins; otherwise FATGATE_PORT overrides the default."""
    if cli_port is not None:
        return cli_port
    raw = env.get("FATGATE_PORT")
    if raw is None:
        return DEFAULT_PORT
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"invalid FATGATE_PORT value: {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fatgate", description="fat-API gateway over the demo model"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP service until interrupted")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=None)

    p_emit = sub.add_parser("emit-ts", help="write generated TypeScript bindings")
    p_emit.add_argument("--out", required=True, metavar="FILE")

    p_call = sub.add_parser("call", help="execute one endpoint command in-process")
    p_call.add_argument("path")
    p_call.add_argument("body", nargs="?", default=None, help="JSON body text")

    p_intro = sub.add_parser("introspect", help="query a meta endpoint")
    p_intro.add_argument("path")
    p_intro.add_argument("meta", choices=["list", "type", "signature"])

    return parser


def _cmd_serve(host: str, port: Optional[int]) -> int:
    registry, _ = build_demo_registry()
    config = ServiceConfig(host=host, port=resolve_port(port, os.environ))
    handle = serve(config, registry)
    print(f"serving demo model on {handle.base_url}", flush=True)
    try:
        threading.Event().wait()
    except KeyboardInterrupt:
        pass
    finally:
        handle.shutdown()
    return 0


def _cmd_emit_ts(out: str) -> int:
    registry, _ = build_demo_registry()
    text = emit(plan_from_registry(registry))
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"cannot write {out}: {exc}", file=sys.stderr)
        return 1
    return 0


def _cmd_call(path: str, body: Optional[str]) -> int:
    registry, _ = build_demo_registry()
    response = registry.process_text(path, body)
    print(serialize(response.to_value()))
    return 0 if response.ok else 1


def _cmd_introspect(path: str, meta: str) -> int:
    registry, _ = build_demo_registry()
    op = {
        "list": registry.list,
        "type": registry.type_of,
        "signature": registry.signature_of,
    }[meta]
    response = op(path)
    print(serialize(response.to_value()))
    return 0 if response.ok else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args.host, args.port)
    if args.command == "emit-ts":
        return _cmd_emit_ts(args.out)
    if args.command == "call":
        return _cmd_call(args.path, args.body)
    return _cmd_introspect(args.path, args.meta)
