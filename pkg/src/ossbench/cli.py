"""``bench`` command line entry point.

Exit codes: 0 success, 2 usage error, 3 ingestion error, 4 fixture error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from ossbench import github
from ossbench.classify import load_band_overrides
from ossbench.fixtures import FixtureError, load_fixture, save_fixture
from ossbench.metrics import DEFAULT_BUG_LABELS, EngineConfig
from ossbench.model import Period, parse_timestamp
from ossbench.report import FORMATS, build_report, render

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INGESTION = 3
EXIT_FIXTURE = 4


def _timestamp(text: str):
    try:
        return parse_timestamp(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="Compute release/issue delivery metrics for a repository and rate them.",
    )
    parser.add_argument("--repo", required=True, metavar="OWNER/NAME")
    parser.add_argument("--from", dest="start", required=True, type=_timestamp, metavar="ISO")
    parser.add_argument("--to", dest="end", required=True, type=_timestamp, metavar="ISO")
    parser.add_argument("--offline", type=Path, metavar="PATH", help="read a snapshot fixture instead of GitHub")
    parser.add_argument("--cache-dir", type=Path, default=Path(".bench-cache"), metavar="PATH")
    parser.add_argument(
        "--bug-label",
        dest="bug_labels",
        action="append",
        metavar="L",
        help=f"label marking a bug (repeatable; default: {', '.join(DEFAULT_BUG_LABELS)})",
    )
    parser.add_argument("--include-prereleases", action="store_true")
    parser.add_argument(
        "--include-pull-requests",
        action="store_true",
        help="count pull requests as issues",
    )
    parser.add_argument("--format", choices=FORMATS, default="markdown")
    parser.add_argument("--refresh", action="store_true", help="purge the cache before fetching")
    parser.add_argument("--bands", type=Path, metavar="PATH", help="JSON file overriding level thresholds")
    parser.add_argument("--lookback-days", type=float, default=github.DEFAULT_LOOKBACK_DAYS)
    parser.add_argument("--max-requests-per-hour", type=int, default=github.HOURLY_CEILING)
    parser.add_argument("--wait-on-rate-limit", action="store_true")
    parser.add_argument("--save-fixture", type=Path, metavar="PATH", help="also write the snapshot fixture")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, stream=err)

    def usage(msg: str) -> int:
        print(f"bench: error: {msg}", file=err)
        return EXIT_USAGE

    if not args.start < args.end:
        return usage("--from must be earlier than --to")
    if args.offline and args.refresh:
        return usage("--refresh cannot be combined with --offline")
    period = Period(args.start, args.end)
    try:
        config = EngineConfig(
            bug_labels=frozenset(args.bug_labels or DEFAULT_BUG_LABELS),
            include_prereleases=args.include_prereleases,
            exclude_pull_requests=not args.include_pull_requests,
        )
    except ValueError as exc:
        return usage(str(exc))

    bands = None
    if args.bands:
        try:
            bands = load_band_overrides(args.bands)
        except (OSError, ValueError) as exc:
            return usage(f"bad --bands file: {exc}")

    if args.offline:
        try:
            snapshot = load_fixture(args.offline)
        except FixtureError as exc:
            print(f"bench: fixture error: {exc}", file=err)
            return EXIT_FIXTURE
        if snapshot.repo != args.repo:
            print(f"bench: fixture error: fixture holds {snapshot.repo}, not {args.repo}", file=err)
            return EXIT_FIXTURE
    else:
        try:
            plan = github.FetchPlan(
                repo=args.repo,
                period=period,
                cache_dir=args.cache_dir,
                auth_token=github.token_from_env(),
                max_requests_per_hour=args.max_requests_per_hour,
                lookback_days=args.lookback_days,
                wait_on_rate_limit=args.wait_on_rate_limit,
            )
        except ValueError as exc:
            return usage(str(exc))
        fetcher = github.GitHubFetcher(plan)
        if args.refresh:
            fetcher.cache.purge()
        try:
            snapshot = fetcher.fetch_snapshot()
        except github.IngestionError as exc:
            print(f"bench: ingestion error: {exc}", file=err)
            return EXIT_INGESTION

    if args.save_fixture:
        save_fixture(snapshot, args.save_fixture)

    report = build_report(snapshot, period, config, bands)
    out.write(render(report, args.format))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
