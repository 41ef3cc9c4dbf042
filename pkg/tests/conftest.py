import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

import pytest

from g2g.endpoint import results_to_json
from g2g.rdf import load_turtle
from g2g.sparql import parse_select, run_select

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


class MockEndpoint:
    """A SPARQL endpoint served from an in-memory store on localhost."""

    def __init__(self, store):
        self.store = store
        self.requests = []          # (method, query) pairs
        self.status = 200
        self.raw_body = None        # overrides the JSON results when set
        self.delay = 0.0
        endpoint = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _answer(self, method, query):
                endpoint.requests.append((method, query))
                if endpoint.delay:
                    threading.Event().wait(endpoint.delay)
                if endpoint.status != 200:
                    self.send_response(endpoint.status)
                    self.end_headers()
                    self.wfile.write(b"boom")
                    return
                if endpoint.raw_body is not None:
                    body = endpoint.raw_body
                else:
                    parsed = parse_select(query)
                    rows = run_select(parsed, endpoint.store)
                    body = json.dumps(results_to_json(parsed.projection, rows)).encode()
                self.send_response(200)
                self.send_header("Content-Type", "application/sparql-results+json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_GET(self):
                params = parse_qs(urlparse(self.path).query)
                self._answer("GET", params["query"][0])

            def do_POST(self):
                length = int(self.headers.get("Content-Length", 0))
                form = parse_qs(self.rfile.read(length).decode())
                self._answer("POST", form["query"][0])

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, args=(0.02,), daemon=True)

    @property
    def url(self):
        host, port = self.server.server_address
        return f"http://{host}:{port}/sparql"

    def __enter__(self):
        self.thread.start()
        return self

    def __exit__(self, *exc):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def mock_endpoint():
    """Factory: ``with mock_endpoint(store) as ep: ...``."""
    return MockEndpoint


@pytest.fixture
def emails_store():
    return load_turtle(fixture_text("emails.ttl"))


def pytest_terminal_summary(terminalreporter):
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
