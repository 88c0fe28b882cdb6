import json
from datetime import datetime, timedelta, timezone
from pathlib import Path
from urllib.parse import urlencode

import httpx
import pytest

from ossbench.model import Period

DATA = Path(__file__).parent / "data"
SCENARIOS = DATA / "scenarios"
RECORDED = DATA / "recorded"

BASE = datetime(2022, 7, 1, tzinfo=timezone.utc)

# (criterion, PASS/FAIL/SKIP, detail) rows filled in by test_acceptance.py
ACCEPTANCE_LOG: list[tuple[str, str, str]] = []


def day(n: float) -> datetime:
    """Timestamp ``n`` days after 2022-07-01T00:00Z."""
    return BASE + timedelta(days=n)


@pytest.fixture
def paper_period():
    return Period(datetime(2022, 7, 1, tzinfo=timezone.utc), datetime(2022, 12, 1, tzinfo=timezone.utc))


def request_key(request: httpx.Request) -> str:
    params = sorted(request.url.params.multi_items())
    return request.url.path + "?" + urlencode(params)


class Replay:
    """httpx transport serving recorded responses and counting requests."""

    def __init__(self, recording: Path):
        doc = json.loads(recording.read_text())
        self.responses = doc["responses"]
        self.calls: list[str] = []
        self.offline = False

    def handler(self, request: httpx.Request) -> httpx.Response:
        if self.offline:
            raise httpx.ConnectError("network disabled", request=request)
        key = request_key(request)
        self.calls.append(key)
        if key not in self.responses:
            return httpx.Response(404, json={"message": "Not Found"})
        rec = self.responses[key]
        return httpx.Response(rec["status"], headers=rec.get("headers", {}), json=rec["json"])

    def client(self) -> httpx.Client:
        return httpx.Client(base_url="https://api.github.com", transport=httpx.MockTransport(self.handler))


@pytest.fixture
def replay():
    return Replay(RECORDED / "acme_widgets.json")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in ACCEPTANCE_LOG:
        terminalreporter.write_line(f"{status}  {name}  {detail}")
