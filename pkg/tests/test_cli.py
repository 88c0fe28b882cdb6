import io
import json

import pytest

from ossbench import cli, github
from ossbench.fixtures import save_fixture
from ossbench.model import CommitEvent, Issue, Release, RepositorySnapshot

from conftest import DATA, SCENARIOS, day


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def cadence_fixture(tmp_path):
    # publication gaps of 2.81 and 9.37 days: mean 6.09, population sd 3.28
    releases = [
        Release("1", "v1", day(-1), day(1)),
        Release("2", "v2", day(3), day(3.81)),
        Release("3", "v3", day(12), day(13.18)),
    ]
    issues = [
        Issue(1, day(2), labels=frozenset({"bug"}), linked_commits=(CommitEvent("aa", day(2.5)),)),
        Issue(2, day(4), labels=frozenset({"docs"})),
    ]
    path = tmp_path / "cadence.json"
    save_fixture(RepositorySnapshot("demo/cadence", day(200), tuple(releases), tuple(issues)), path)
    return path


def test_markdown_report(cadence_fixture):
    code, out, err = run(
        "--repo", "demo/cadence", "--from", "2022-07-01", "--to", "2022-12-01",
        "--offline", str(cadence_fixture), "--format", "markdown",
    )
    assert code == 0, err
    assert "| Release Frequency | 6.09 days | 3.28 days | Medium |" in out
    assert "| Bug Issues Rate | 50.00 % | - | Low |" in out


def test_json_report_carries_everything(cadence_fixture):
    code, out, _ = run(
        "--repo", "demo/cadence", "--from", "2022-07-01T00:00:00Z", "--to", "2022-12-01",
        "--offline", str(cadence_fixture), "--format", "json", "--bug-label", "docs",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["bug_labels"] == ["docs"]
    assert doc["config"]["include_prereleases"] is False
    kinds = {m["kind"]: m for m in doc["metrics"]}
    assert kinds["ReleaseFrequency"]["sample_count"] == 2
    assert kinds["TimeToRepairCode"]["status"] == "NoData"
    assert kinds["TimeToRepairCode"]["level"] is None


def test_csv_report(cadence_fixture):
    code, out, _ = run(
        "--repo", "demo/cadence", "--from", "2022-07-01", "--to", "2022-12-01",
        "--offline", str(cadence_fixture), "--format", "csv",
    )
    assert code == 0
    assert out.splitlines()[1].startswith("ReleaseFrequency,Computed,6.09,3.28,days,2,Medium")


@pytest.mark.parametrize(
    "argv",
    [
        ["--repo", "a/b", "--from", "2022-07-01"],
        ["--repo", "a/b", "--from", "2022-12-01", "--to", "2022-07-01"],
        ["--repo", "a/b", "--from", "nonsense", "--to", "2022-07-01"],
        ["--repo", "a/b", "--from", "2022-07-01", "--to", "2022-12-01", "--format", "xml"],
        ["--repo", "a/b", "--from", "2022-07-01", "--to", "2022-12-01", "--offline", "x.json", "--refresh"],
        ["--repo", "nope", "--from", "2022-07-01", "--to", "2022-12-01"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _, _ = run(*argv)
    assert code == 2


def test_fixture_errors(tmp_path, cadence_fixture):
    code, _, err = run("--repo", "a/b", "--from", "2022-07-01", "--to", "2022-12-01", "--offline", str(tmp_path / "missing.json"))
    assert code == 4 and err.count("\n") == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"repo": "a/b"}')
    code, _, err = run("--repo", "a/b", "--from", "2022-07-01", "--to", "2022-12-01", "--offline", str(bad))
    assert code == 4 and "document.fetched_at" in err
    code, _, err = run("--repo", "a/b", "--from", "2022-07-01", "--to", "2022-12-01", "--offline", str(cadence_fixture))
    assert code == 4 and "demo/cadence" in err


def test_ingestion_error_exit_code(monkeypatch, tmp_path):
    def boom(self):
        raise github.RateLimited(day(1))

    monkeypatch.setattr(github.GitHubFetcher, "fetch_snapshot", boom)
    code, _, err = run("--repo", "a/b", "--from", "2022-07-01", "--to", "2022-12-01", "--cache-dir", str(tmp_path))
    assert code == 3
    assert "rate limited, resume after 2022-07-02T00:00:00Z" in err


def test_live_path_uses_cache_and_refresh(monkeypatch, tmp_path, replay):
    # route the CLI's fetcher through the recorded responses
    original_init = github.GitHubFetcher.__init__

    def init(self, plan, client=None, **kw):
        original_init(self, plan, client=replay.client(), clock=lambda: 1672531200.0)

    monkeypatch.setattr(github.GitHubFetcher, "__init__", init)
    saved = tmp_path / "snap.json"
    args = ["--repo", "acme/widgets", "--from", "2022-07-01", "--to", "2022-12-01",
            "--cache-dir", str(tmp_path / "cache"), "--format", "json", "--save-fixture", str(saved)]
    code, first, err = run(*args)
    assert code == 0, err
    assert saved.read_text() == (DATA / "golden_acme_widgets.json").read_text()
    assert len(replay.calls) == 7

    code, second, _ = run(*args)
    assert second == first and len(replay.calls) == 7

    code, third, _ = run(*args, "--refresh")
    assert third == first and len(replay.calls) == 14


def test_scenario_fixture_replays_through_cli():
    code, out, _ = run("--repo", "scenarios/window_bounds", "--from", "2022-07-01", "--to", "2022-12-01",
                       "--offline", str(SCENARIOS / "window_bounds.json"), "--format", "json")
    assert code == 0
    rf = json.loads(out)["metrics"][0]
    assert rf["sample_count"] == 1
