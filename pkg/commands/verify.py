from __future__ import annotations

import argparse
import logging
from pathlib import Path

from commands.common import FIXTURE_DIR, emit, load, status
from commands.schemas import RunConfig
from ic_engine.errors import InvariantViolationError
from services.documents import load_instance_file
from services.exports import read_code_file
from services.reports import render
from services.verification import VerificationSummary, verify_loaded, verify_random

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--instance", help="Verify one instance document (default: every bundled fixture).")
    parser.add_argument("--code", action="append", help="Extra code table to check (repeatable).")
    parser.add_argument("--random", type=int, help="Also run N seeded random small cases.")
    parser.add_argument("--seed", type=int, help="Seed for the random cases.")
    parser.add_argument("--out", help="Write the summary here instead of stdout.")


def bundled_fixtures() -> list[Path]:
    return sorted(path for path in FIXTURE_DIR.iterdir() if path.suffix in (".json", ".toml"))


def _verify_document(config: RunConfig, path: Path | None) -> VerificationSummary:
    loaded = load(config) if path is None else load_instance_file(path)
    paths = list(loaded.codes) + (list(config.codes) if path is None else [])
    codes = [(Path(p).name, read_code_file(p, loaded.instance)) for p in paths]
    return verify_loaded(loaded, codes)


def run(config: RunConfig) -> int:
    summary = VerificationSummary()
    if config.instance is not None:
        summary.extend(_verify_document(config, None))
    elif not config.random:
        for path in bundled_fixtures():
            logger.info("verifying %s", path.name)
            summary.extend(_verify_document(config, path))
    if config.random:
        summary.extend(verify_random(config.random, config.seed))

    emit(config, render(summary.to_payload()))
    status(f"{len(summary.checks) - len(summary.failures)}/{len(summary.checks)} checks passed")
    if not summary.passed:
        names = ", ".join(check.name for check in summary.failures[:5])
        raise InvariantViolationError(f"{len(summary.failures)} verification check(s) failed: {names}")
    return 0
