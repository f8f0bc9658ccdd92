"""Single-route HTTP transport: ``POST /`` with an OpRequest body."""

import json
import logging
import signal
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..cryptomath import errors
from .service import CryptoMath, canonical_json, error_envelope

log = logging.getLogger(__name__)

MAX_BODY = 16 * 1024 * 1024


def parse_bind(bind: str) -> tuple[str, int]:
    host, sep, port = bind.rpartition(":")
    if not sep or not host or not port.isdigit() or not 0 <= int(port) <= 65535:
        raise ValueError(f"invalid bind address {bind!r}; expected HOST:PORT")
    return host, int(port)


class _Handler(BaseHTTPRequestHandler):
    server_version = "cryptomath"
    protocol_version = "HTTP/1.1"

    def _send(self, status: int, body: str):
        data = body.encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_POST(self):
        length = int(self.headers.get("Content-Length") or 0)
        if length > MAX_BODY:
            self._send(413, canonical_json(error_envelope(errors.BAD_ARGS, "request body too large")))
            return
        raw = self.rfile.read(length)
        try:
            body = self.server.service.handle_text(raw.decode("utf-8"))
        except (UnicodeDecodeError, ValueError) as exc:
            self._send(400, canonical_json(error_envelope(errors.BAD_ARGS, f"body is not JSON: {exc}")))
            return
        self._send(200, body)

    def do_GET(self):
        self._send(405, canonical_json(error_envelope(errors.BAD_ARGS, "use POST / with a JSON body")))

    def log_message(self, fmt, *args):
        log.debug("%s - %s", self.address_string(), fmt % args)


class CryptoMathServer(ThreadingHTTPServer):
    daemon_threads = False  # in-flight requests finish on shutdown
    block_on_close = True
    request_queue_size = 256  # the stdlib default of 5 resets bursts of clients

    def __init__(self, address, service: CryptoMath | None = None):
        super().__init__(address, _Handler)
        self.service = service or CryptoMath()


def make_server(bind: str, service: CryptoMath | None = None) -> CryptoMathServer:
    return CryptoMathServer(parse_bind(bind), service)


def serve(bind: str, service: CryptoMath | None = None, ready=None):
    """Run until SIGTERM/SIGINT, then stop accepting and drain in-flight requests."""
    server = make_server(bind, service)

    def _stop(signum, frame):
        threading.Thread(target=server.shutdown, daemon=True).start()

    if threading.current_thread() is threading.main_thread():
        signal.signal(signal.SIGTERM, _stop)
        signal.signal(signal.SIGINT, _stop)
    host, port = server.server_address[:2]
    log.info("cryptomath listening on %s:%s", host, port)
    if ready is not None:
        ready(server)
    try:
        server.serve_forever()
    finally:
        server.server_close()
