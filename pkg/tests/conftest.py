from __future__ import annotations

import http.client
import socket

import pytest

from fatgate.demo_model import build_demo_registry
from fatgate.http_service import ServiceConfig, serve


@pytest.fixture
def demo():
    """Fresh registry + model pair."""
    return build_demo_registry()


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def raw_request(port: int, method: str, path: str, body: str | None = None):
    """One HTTP exchange; returns (status, body_text). Unlike most clients
    this will happily attach a body to GET, which the verb-equivalence
    contract needs."""
    conn = http.client.HTTPConnection("127.0.0.1", port, timeout=15)
    try:
        conn.request(method, path, body=body)
        reply = conn.getresponse()
        return reply.status, reply.read().decode("utf-8")
    finally:
        conn.close()


@pytest.fixture
def service():
    """Live demo service on an ephemeral port; shut down after the test."""
    registry, model = build_demo_registry()
    handle = serve(ServiceConfig(host="127.0.0.1", port=free_port()), registry)
    try:
        yield handle, registry, model
    finally:
        handle.shutdown()
