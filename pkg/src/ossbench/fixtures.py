"""Canonical JSON fixture format for repository snapshots.

A fixture is one JSON object::

    {"schema_version": 1, "repo": "owner/name", "fetched_at": "...Z",
     "releases": [{"id", "tag_name", "created_at", "published_at", "prerelease"}],
     "issues": [{"number", "opened_at", "closed_at", "labels", "is_pull_request",
                 "commits": [{"sha", "committed_at"}]}]}

``schema_version`` may be omitted when reading. Saved fixtures are
canonical: sorted keys, sorted event lists, two-space indent.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from ossbench.model import (
    CommitEvent,
    Issue,
    Release,
    RepositorySnapshot,
    format_timestamp,
    parse_timestamp,
)

SCHEMA_VERSION = 1


class FixtureError(ValueError):
    """A fixture document could not be turned into a snapshot."""


def _field(obj: Any, key: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise FixtureError(f"{where}: expected an object")
    if key not in obj:
        raise FixtureError(f"{where}.{key}: missing field")
    return obj[key]


def _timestamp(obj: Any, key: str, where: str):
    value = _field(obj, key, where)
    try:
        return parse_timestamp(value)
    except ValueError as exc:
        raise FixtureError(f"{where}.{key}: {exc}") from None


def _typed(obj: Any, key: str, where: str, kind: type | tuple[type, ...]):
    value = _field(obj, key, where)
    # bool is an int subclass; keep them apart
    if isinstance(value, bool) and kind is not bool:
        raise FixtureError(f"{where}.{key}: unexpected boolean")
    if not isinstance(value, kind):
        raise FixtureError(f"{where}.{key}: expected {getattr(kind, '__name__', kind)}")
    return value


def snapshot_from_dict(doc: Any) -> RepositorySnapshot:
    if not isinstance(doc, dict):
        raise FixtureError("document: expected an object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise FixtureError(
            f"schema_version: unsupported version {version!r} (expected {SCHEMA_VERSION})"
        )
    repo = _typed(doc, "repo", "document", str)
    fetched_at = _timestamp(doc, "fetched_at", "document")

    releases = []
    for n, raw in enumerate(_typed(doc, "releases", "document", list)):
        where = f"releases[{n}]"
        ident = _typed(raw, "id", where, (str, int))
        releases.append(
            Release(
                identifier=str(ident),
                tag=_typed(raw, "tag_name", where, str),
                created_at=_timestamp(raw, "created_at", where),
                published_at=_timestamp(raw, "published_at", where),
                is_prerelease=_typed(raw, "prerelease", where, bool),
            )
        )

    issues = []
    for n, raw in enumerate(_typed(doc, "issues", "document", list)):
        where = f"issues[{n}]"
        number = _typed(raw, "number", where, int)
        opened = _timestamp(raw, "opened_at", where)
        closed = None
        if _field(raw, "closed_at", where) is not None:
            closed = _timestamp(raw, "closed_at", where)
            if closed < opened:
                raise FixtureError(f"{where}.closed_at: precedes opened_at")
        labels = _typed(raw, "labels", where, list)
        if not all(isinstance(label, str) for label in labels):
            raise FixtureError(f"{where}.labels: expected strings")
        commits = []
        for m, craw in enumerate(_typed(raw, "commits", where, list)):
            cwhere = f"{where}.commits[{m}]"
            sha = _typed(craw, "sha", cwhere, str)
            if not sha:
                raise FixtureError(f"{cwhere}.sha: empty")
            commits.append(CommitEvent(sha, _timestamp(craw, "committed_at", cwhere)))
        try:
            issues.append(
                Issue(
                    number=number,
                    opened_at=opened,
                    closed_at=closed,
                    labels=frozenset(labels),
                    is_pull_request=_typed(raw, "is_pull_request", where, bool),
                    linked_commits=tuple(commits),
                )
            )
        except ValueError as exc:
            raise FixtureError(f"{where}: {exc}") from None
    try:
        return RepositorySnapshot(repo, fetched_at, tuple(releases), tuple(issues))
    except ValueError as exc:
        raise FixtureError(f"document: {exc}") from None


def snapshot_to_dict(snapshot: RepositorySnapshot) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "repo": snapshot.repo,
        "fetched_at": format_timestamp(snapshot.fetched_at),
        "releases": [
            {
                "id": r.identifier,
                "tag_name": r.tag,
                "created_at": format_timestamp(r.created_at),
                "published_at": format_timestamp(r.published_at),
                "prerelease": r.is_prerelease,
            }
            for r in snapshot.releases
        ],
        "issues": [
            {
                "number": i.number,
                "opened_at": format_timestamp(i.opened_at),
                "closed_at": None if i.closed_at is None else format_timestamp(i.closed_at),
                "labels": sorted(i.labels),
                "is_pull_request": i.is_pull_request,
                "commits": [
                    {"sha": c.sha, "committed_at": format_timestamp(c.committed_at)}
                    for c in i.linked_commits
                ],
            }
            for i in snapshot.issues
        ],
    }


def dumps_snapshot(snapshot: RepositorySnapshot) -> str:
    return json.dumps(snapshot_to_dict(snapshot), indent=2, sort_keys=True) + "\n"


def loads_snapshot(text: str) -> RepositorySnapshot:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FixtureError(f"document: not valid JSON ({exc})") from None
    return snapshot_from_dict(doc)


def load_fixture(path: str | Path) -> RepositorySnapshot:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FixtureError(f"cannot read fixture {path}: {exc.strerror or exc}") from None
    return loads_snapshot(text)


def save_fixture(snapshot: RepositorySnapshot, path: str | Path) -> None:
    Path(path).write_text(dumps_snapshot(snapshot), encoding="utf-8")
