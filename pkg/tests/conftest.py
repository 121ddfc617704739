import json
import sys
from pathlib import Path

import pytest

TESTS = Path(__file__).parent
sys.path.insert(0, str(TESTS))

from scratchlint.project import parse_project  # noqa: E402


@pytest.fixture
def level_demo_text():
    return (TESTS / "fixtures" / "comparing_literals.json").read_text(encoding="utf-8")


@pytest.fixture
def level_demo_json(level_demo_text):
    return json.loads(level_demo_text)


@pytest.fixture
def level_demo(level_demo_text):
    return parse_project(level_demo_text, name="comparing_literals")


class FakeScratch:
    """Tiny stand-in for the project API and the project host."""

    def __init__(self, projects):
        import threading
        from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
        from urllib.parse import parse_qs, urlparse

        self.projects = projects
        self.requests = []
        self.failures = {}
        fake = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_GET(self):
                url = urlparse(self.path)
                fake.requests.append((url.path, self.headers.get("User-Agent")))
                parts = url.path.strip("/").split("/")
                pending = fake.failures.get(url.path, 0)
                if pending:
                    fake.failures[url.path] = pending - 1
                    return self._send(503, b"busy")
                if len(parts) == 2 and parts[1] in fake.projects:
                    pid = parts[1]
                    if parts[0] == "api":
                        return self._send(200, json.dumps({"project_token": f"tok{pid}"}).encode())
                    token = parse_qs(url.query).get("token", [""])[0]
                    if parts[0] == "projects" and token == f"tok{pid}":
                        return self._send(200, fake.projects[pid])
                self._send(404, b"not found")

            def _send(self, code, body):
                self.send_response(code)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()
        base = f"http://127.0.0.1:{self.server.server_port}"
        self.api_url = base + "/api/{id}"
        self.projects_url = base + "/projects/{id}?token={token}"

    def close(self):
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture
def fake_scratch(level_demo_text):
    fake = FakeScratch({"101": level_demo_text.encode("utf-8")})
    yield fake
    fake.close()


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
