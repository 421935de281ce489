"""REST front end over a registry.

GET, PUT and POST are deliberately interchangeable: the decision between
read and update/call semantics is carried by the presence or absence of a
request body, never by the verb. Other verbs get 405. Query strings are
ignored; everything travels in the path and the JSON body.

Connections are handled concurrently, but commands execute one at a time,
in arrival order, on a single worker thread; a response is written whenever
its command completes, so a long-running command never stalls request
acceptance. Protocol-level refusals (oversize body, bad UTF-8, unsupported
verb) are reported with the MalformedInput code so every response body stays
inside the closed error vocabulary.

Limitations: bodies are read via Content-Length (no chunked uploads).
"""

from __future__ import annotations

import logging
import queue
import threading
from concurrent.futures import Future
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import urlsplit

from .registry import Registry, Response
from .value import Value, serialize

__all__ = ["ServiceConfig", "ServiceHandle", "serve", "shutdown"]

log = logging.getLogger(__name__)

_STATUS = {
    "NotFound": 404,
    "MalformedInput": 400,
    "NoMatch": 400,
    "Ambiguous": 400,
    "BadIndex": 400,
    "Internal": 500,
}


@dataclass(frozen=True)
class ServiceConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    max_body_bytes: int = 1_048_576

    def __post_init__(self):
        if not 1 <= self.port <= 65535:
            raise ValueError(f"port out of range: {self.port}")
        if self.max_body_bytes <= 0:
            raise ValueError("max_body_bytes must be positive")


class _SerialExecutor:
    """Single worker running submitted commands in arrival order."""

    def __init__(self):
        self._queue: queue.SimpleQueue = queue.SimpleQueue()
        self._closed = False
        self._thread = threading.Thread(
            target=self._run, name="fatgate-commands", daemon=True
        )
        self._thread.start()

    def submit(self, fn) -> Future:
        fut: Future = Future()
        if self._closed:
            fut.set_exception(RuntimeError("service is shutting down"))
            return fut
        self._queue.put((fn, fut))
        return fut

    def _run(self):
        while True:
            item = self._queue.get()
            if item is None:
                break
            fn, fut = item
            if not fut.set_running_or_notify_cancel():
                continue
            try:
                fut.set_result(fn())
            except BaseException as exc:
                fut.set_exception(exc)
        # resolve anything that raced past the sentinel
        while True:
            try:
                item = self._queue.get_nowait()
            except queue.Empty:
                return
            if item is not None:
                item[1].set_exception(RuntimeError("service is shutting down"))

    def stop(self):
        """Drain queued commands, then stop the worker."""
        self._closed = True
        self._queue.put(None)
        self._thread.join()


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    block_on_close = False  # idle keep-alive sockets must not stall shutdown
    allow_reuse_address = True


def _make_handler(registry: Registry, executor: _SerialExecutor, max_body: int):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"
        server_version = "fatgate"
        timeout = 60  # a stalled upload must not pin its connection thread

        def log_message(self, fmt, *args):
            log.debug("%s %s", self.address_string(), fmt % args)

        def _write(self, status: int, payload: Value):
            data = serialize(payload).encode("utf-8")
            try:
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)
            except (ConnectionError, BrokenPipeError):
                self.close_connection = True

        def _refuse(self, status: int, message: str):
            # protocol-level refusal; the body may be unread, so the stream
            # cannot be trusted for another request
            self.close_connection = True
            self._write(status, Response.failure("MalformedInput", message).to_value())

        def _handle(self):
            try:
                length = int(self.headers.get("Content-Length") or 0)
            except ValueError:
                self._refuse(400, "invalid Content-Length header")
                return
            if length > max_body:
                self._refuse(413, f"request body exceeds {max_body} bytes")
                return
            raw = self.rfile.read(length) if length > 0 else b""
            try:
                body_text = raw.decode("utf-8") if raw else None
            except UnicodeDecodeError:
                self._refuse(400, "request body is not valid UTF-8")
                return
            path = urlsplit(self.path).path
            future = executor.submit(lambda: registry.process_text(path, body_text))
            try:
                response: Response = future.result()
            except RuntimeError as exc:
                self._refuse(500, str(exc))
                return
            status = 200 if response.ok else _STATUS.get(response.code, 500)
            self._write(status, response.to_value())

        do_GET = _handle
        do_PUT = _handle
        do_POST = _handle

        def _not_allowed(self):
            self._refuse(405, f"method {self.command} not allowed; use GET, PUT or POST")

        do_DELETE = _not_allowed
        do_PATCH = _not_allowed
        do_HEAD = _not_allowed
        do_OPTIONS = _not_allowed

    return Handler


class ServiceHandle:
    """Running service; shut down exactly once, extra calls are no-ops."""

    def __init__(self, server: _Server, server_thread: threading.Thread,
                 executor: _SerialExecutor, config: ServiceConfig):
        self._server = server
        self._server_thread = server_thread
        self._executor = executor
        self._config = config
        self._stopped = False
        self._stop_lock = threading.Lock()

    @property
    def host(self) -> str:
        return self._config.host

    @property
    def port(self) -> int:
        return self._server.server_address[1]

    @property
    def base_url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def shutdown(self):
        """Stop accepting requests, let in-flight commands complete, exit."""
        with self._stop_lock:
            if self._stopped:
                return
            self._stopped = True
        self._server.shutdown()
        self._server.server_close()
        self._server_thread.join()
        self._executor.stop()


def serve(config: ServiceConfig, registry: Registry) -> ServiceHandle:
    """Start serving ``registry`` per ``config``; raises OSError on bind failure."""
    executor = _SerialExecutor()
    try:
        server = _Server(
            (config.host, config.port),
            _make_handler(registry, executor, config.max_body_bytes),
        )
    except OSError:
        executor.stop()
        raise
    thread = threading.Thread(
        target=server.serve_forever, name="fatgate-listener", daemon=True
    )
    thread.start()
    return ServiceHandle(server, thread, executor, config)


def shutdown(handle: ServiceHandle) -> None:
    handle.shutdown()
