"""Build repository snapshots from the GitHub REST API.

Every response page is written once to an on-disk cache and served from
there on later runs, so a warm cache rebuilds the snapshot without touching
the network. Requests are metered by a sliding one-hour budget on top of
GitHub's own rate-limit headers.
"""

from __future__ import annotations

import collections
import hashlib
import json
import logging
import os
import shutil
import time
from dataclasses import dataclass
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable, Iterator, Optional
from urllib.parse import urlencode

import httpx

from ossbench.model import (
    CommitEvent,
    Issue,
    Period,
    Release,
    RepositorySnapshot,
    format_timestamp,
    parse_timestamp,
)

logger = logging.getLogger(__name__)

API_URL = "https://api.github.com"
PER_PAGE = 100
HOURLY_CEILING = 5000
DEFAULT_LOOKBACK_DAYS = 365.0


class IngestionError(Exception):
    pass


class Unauthorized(IngestionError):
    def __init__(self) -> None:
        super().__init__("unauthorized")


class UnknownRepository(IngestionError):
    def __init__(self, repo: str) -> None:
        super().__init__(f"unknown repository {repo}")


class RateLimited(IngestionError):
    def __init__(self, resume_at: datetime) -> None:
        self.resume_at = resume_at
        super().__init__(f"rate limited, resume after {format_timestamp(resume_at)}")


@dataclass(frozen=True)
class FetchPlan:
    repo: str
    period: Period
    cache_dir: Path
    auth_token: Optional[str] = None
    max_requests_per_hour: int = HOURLY_CEILING
    lookback_days: float = DEFAULT_LOOKBACK_DAYS
    wait_on_rate_limit: bool = False

    def __post_init__(self) -> None:
        owner, sep, name = self.repo.partition("/")
        if not sep or not owner or not name or "/" in name:
            raise ValueError(f"repository must look like owner/name, got {self.repo!r}")
        if self.max_requests_per_hour <= 0:
            raise ValueError("max_requests_per_hour must be positive")
        if self.auth_token and self.max_requests_per_hour > HOURLY_CEILING:
            raise ValueError(f"authenticated budget cannot exceed {HOURLY_CEILING} requests/hour")
        object.__setattr__(self, "cache_dir", Path(self.cache_dir))

    @property
    def issues_since(self) -> datetime:
        return self.period.start - timedelta(days=self.lookback_days)


class RequestBudget:
    """At most ``limit`` requests inside any sliding hour."""

    def __init__(self, limit: int, clock: Callable[[], float] = time.time) -> None:
        self.limit = limit
        self.clock = clock
        self._stamps: collections.deque[float] = collections.deque()

    def acquire(self) -> None:
        now = self.clock()
        while self._stamps and self._stamps[0] <= now - 3600:
            self._stamps.popleft()
        if len(self._stamps) >= self.limit:
            resume = self._stamps[0] + 3600
            raise RateLimited(datetime.fromtimestamp(resume, timezone.utc))
        self._stamps.append(now)


class PageCache:
    """Write-once store of raw response bodies.

    Layout: ``<root>/<owner>__<name>/<endpoint-hash>/<page>.raw`` plus a
    ``manifest.json`` listing every entry with its fetch time.
    """

    def __init__(self, root: Path, repo: str) -> None:
        self.dir = Path(root) / repo.replace("/", "__")
        self.manifest_path = self.dir / "manifest.json"
        self._manifest: dict[str, dict] = {}
        if self.manifest_path.exists():
            for entry in json.loads(self.manifest_path.read_text(encoding="utf-8"))["entries"]:
                self._manifest[entry["path"]] = entry

    @staticmethod
    def endpoint_hash(endpoint: str) -> str:
        return hashlib.sha256(endpoint.encode("utf-8")).hexdigest()[:16]

    def _relpath(self, endpoint: str, page: int) -> str:
        return f"{self.endpoint_hash(endpoint)}/{page}.raw"

    def get(self, endpoint: str, page: int) -> Optional[tuple[str, str]]:
        """Return ``(body, fetched_at)`` or None."""
        rel = self._relpath(endpoint, page)
        entry = self._manifest.get(rel)
        path = self.dir / rel
        if entry is None or not path.exists():
            return None
        return path.read_text(encoding="utf-8"), entry["fetched_at"]

    def put(self, endpoint: str, page: int, body: str, fetched_at: str) -> None:
        rel = self._relpath(endpoint, page)
        if rel in self._manifest:
            return
        path = self.dir / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(body, encoding="utf-8")
        tmp.replace(path)
        self._manifest[rel] = {
            "endpoint": endpoint,
            "page": page,
            "fetched_at": fetched_at,
            "path": rel,
        }
        self._write_manifest()

    def _write_manifest(self) -> None:
        entries = sorted(self._manifest.values(), key=lambda e: (e["endpoint"], e["page"]))
        tmp = self.manifest_path.with_suffix(".tmp")
        tmp.write_text(json.dumps({"entries": entries}, indent=2, sort_keys=True) + "\n")
        tmp.replace(self.manifest_path)

    def purge(self) -> None:
        if self.dir.exists():
            shutil.rmtree(self.dir)
        self._manifest.clear()


class GitHubFetcher:
    def __init__(
        self,
        plan: FetchPlan,
        client: Optional[httpx.Client] = None,
        clock: Callable[[], float] = time.time,
        sleep: Callable[[float], None] = time.sleep,
    ) -> None:
        self.plan = plan
        self.clock = clock
        self.sleep = sleep
        self.cache = PageCache(plan.cache_dir, plan.repo)
        self.budget = RequestBudget(plan.max_requests_per_hour, clock)
        self.request_count = 0
        self._client = client
        self._provider_reset: Optional[float] = None
        self._latest_fetch: Optional[str] = None

    @property
    def client(self) -> httpx.Client:
        if self._client is None:
            headers = {
                "Accept": "application/vnd.github+json",
                "X-GitHub-Api-Version": "2022-11-28",
            }
            if self.plan.auth_token:
                headers["Authorization"] = f"Bearer {self.plan.auth_token}"
            self._client = httpx.Client(base_url=API_URL, headers=headers, timeout=30.0)
        return self._client

    # -- transport ----------------------------------------------------------

    def _wait_for_provider(self) -> None:
        if self._provider_reset is None:
            return
        delay = self._provider_reset - self.clock()
        if delay <= 0:
            self._provider_reset = None
            return
        if not self.plan.wait_on_rate_limit:
            raise RateLimited(datetime.fromtimestamp(self._provider_reset, timezone.utc))
        logger.warning("GitHub rate limit exhausted, sleeping %.0f seconds", delay)
        self.sleep(delay)
        self._provider_reset = None

    def _request(self, path: str, params: dict) -> Optional[httpx.Response]:
        while True:
            self._wait_for_provider()
            self.budget.acquire()
            self.request_count += 1
            try:
                response = self.client.get(path, params=params)
            except httpx.HTTPError as exc:
                raise IngestionError(f"network error: {exc}") from None
            remaining = response.headers.get("X-RateLimit-Remaining")
            if remaining == "0":
                self._provider_reset = float(response.headers.get("X-RateLimit-Reset", self.clock()))
                if response.status_code in (403, 429):
                    continue
            if response.status_code == 401:
                raise Unauthorized()
            if response.status_code in (404, 410):
                return None
            if response.status_code != 200:
                raise IngestionError(
                    f"GitHub returned HTTP {response.status_code} for {path}"
                )
            return response

    def pages(self, path: str, params: Optional[dict] = None) -> Iterator[list]:
        """Yield the JSON list of each page, cache first.

        Raises ``_Missing`` when the endpoint does not exist.
        """
        query = dict(params or {})
        query["per_page"] = PER_PAGE
        endpoint = path + "?" + urlencode(sorted(query.items()))
        page = 1
        while True:
            cached = self.cache.get(endpoint, page)
            if cached is not None:
                body, fetched_at = cached
            else:
                response = self._request(path, {**query, "page": page})
                if response is None:
                    if page == 1:
                        raise _Missing(path)
                    return
                body = response.text
                fetched_at = format_timestamp(datetime.fromtimestamp(self.clock(), timezone.utc))
                self.cache.put(endpoint, page, body, fetched_at)
            if self._latest_fetch is None or fetched_at > self._latest_fetch:
                self._latest_fetch = fetched_at
            items = json.loads(body)
            if not isinstance(items, list):
                raise IngestionError(f"unexpected payload for {path}")
            yield items
            if len(items) < PER_PAGE:
                return
            page += 1

    def collect(self, path: str, params: Optional[dict] = None) -> list:
        out: list = []
        for items in self.pages(path, params):
            out.extend(items)
        return out

    # -- normalization ------------------------------------------------------

    def _releases(self) -> list[Release]:
        try:
            raw = self.collect(f"/repos/{self.plan.repo}/releases")
        except _Missing:
            raise UnknownRepository(self.plan.repo) from None
        releases = []
        for item in raw:
            if item.get("draft") or not item.get("published_at"):
                continue
            releases.append(
                Release(
                    identifier=str(item["id"]),
                    tag=item.get("tag_name") or "",
                    created_at=parse_timestamp(item["created_at"]),
                    published_at=parse_timestamp(item["published_at"]),
                    is_prerelease=bool(item.get("prerelease")),
                )
            )
        return releases

    def _pull_commits(self, number: int) -> list[CommitEvent]:
        try:
            raw = self.collect(f"/repos/{self.plan.repo}/pulls/{number}/commits")
        except _Missing:
            return []
        commits = []
        for item in raw:
            meta = item.get("commit") or {}
            stamp = (meta.get("committer") or {}).get("date") or (meta.get("author") or {}).get("date")
            if item.get("sha") and stamp:
                commits.append(CommitEvent(item["sha"], parse_timestamp(stamp)))
        return commits

    def _linked_commits(self, number: int) -> list[CommitEvent]:
        try:
            events = self.collect(f"/repos/{self.plan.repo}/issues/{number}/timeline")
        except _Missing:
            return []
        repo_marker = f"/repos/{self.plan.repo}/".lower()
        direct: dict[str, CommitEvent] = {}
        pulls: list[int] = []
        for ev in events:
            kind = ev.get("event")
            if kind in ("referenced", "closed") and ev.get("commit_id"):
                url = (ev.get("commit_url") or "").lower()
                if url and repo_marker not in url:
                    continue
                sha = ev["commit_id"]
                if sha not in direct and ev.get("created_at"):
                    direct[sha] = CommitEvent(sha, parse_timestamp(ev["created_at"]))
            elif kind == "cross-referenced":
                source = (ev.get("source") or {}).get("issue") or {}
                pr = source.get("pull_request")
                if not pr or not source.get("number"):
                    continue
                full_name = (source.get("repository") or {}).get("full_name")
                if full_name and full_name.lower() != self.plan.repo.lower():
                    continue
                if "merged_at" in pr and not pr["merged_at"]:
                    continue
                pulls.append(int(source["number"]))
        if direct:
            return list(direct.values())
        # one hop: issue -> referencing pull request -> its commits
        linked: dict[str, CommitEvent] = {}
        for pr_number in sorted(set(pulls)):
            for commit in self._pull_commits(pr_number):
                linked.setdefault(commit.sha, commit)
        return list(linked.values())

    def _issues(self) -> list[Issue]:
        since = self.plan.issues_since
        try:
            raw = self.collect(
                f"/repos/{self.plan.repo}/issues",
                {"state": "all", "since": format_timestamp(since)},
            )
        except _Missing:
            raise UnknownRepository(self.plan.repo) from None
        seen: set[int] = set()
        issues = []
        for item in raw:
            number = int(item["number"])
            if number in seen:
                continue
            seen.add(number)
            opened = parse_timestamp(item["created_at"])
            is_pr = "pull_request" in item
            commits = [] if is_pr else self._linked_commits(number)
            if opened < since and not commits:
                continue
            closed = item.get("closed_at")
            issues.append(
                Issue(
                    number=number,
                    opened_at=opened,
                    closed_at=parse_timestamp(closed) if closed else None,
                    labels=frozenset(
                        lbl["name"] if isinstance(lbl, dict) else str(lbl)
                        for lbl in item.get("labels") or ()
                    ),
                    is_pull_request=is_pr,
                    linked_commits=tuple(commits),
                )
            )
        return issues

    def fetch_snapshot(self) -> RepositorySnapshot:
        releases = self._releases()
        issues = self._issues()
        fetched = self._latest_fetch or format_timestamp(
            datetime.fromtimestamp(self.clock(), timezone.utc)
        )
        return RepositorySnapshot(
            repo=self.plan.repo,
            fetched_at=parse_timestamp(fetched),
            releases=tuple(releases),
            issues=tuple(issues),
        )


class _Missing(Exception):
    pass


def fetch_snapshot(
    plan: FetchPlan,
    client: Optional[httpx.Client] = None,
    clock: Callable[[], float] = time.time,
) -> RepositorySnapshot:
    return GitHubFetcher(plan, client=client, clock=clock).fetch_snapshot()


def token_from_env() -> Optional[str]:
    return os.environ.get("GITHUB_TOKEN") or None
