"""Shared flag parsing, instance loading and output helpers for command modules."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from commands.schemas import RunConfig
from ic_engine.bits import KnownRate, evaluate_rate_expression
from ic_engine.errors import InstanceValidationError
from ic_engine.model.instance import AdversarySpec, GuessBudget
from services.documents import LoadedInstance, load_instance_file
from services.exports import write_text

logger = logging.getLogger(__name__)

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"


def parse_int_list(text: str | None) -> list[int] | None:
    """"1,2,3" -> [1, 2, 3]; "" or "-" -> []."""
    if text is None:
        return None
    text = text.strip()
    if text in ("", "-"):
        return []
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InstanceValidationError(f"expected a comma-separated list of integers, got {text!r}") from None


def parse_capability(text: str | None) -> int | dict[str, int] | None:
    """An integer, or the path of a JSON table {"t": c(t)}."""
    if text is None:
        return None
    if text.strip().isdigit():
        return int(text)
    try:
        table = json.loads(Path(text).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InstanceValidationError(f"capability table {text} is not valid JSON: {exc}") from exc
    if not isinstance(table, dict):
        raise InstanceValidationError(f"capability table {text} must be a JSON object")
    return {str(key): value for key, value in table.items()}


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--instance", help="Instance document (.json or .toml).")
    parser.add_argument("--t", type=int, default=1, help="Sequence length t.")
    parser.add_argument("--t-max", dest="t_max", type=int, default=1, help="Largest t for per-t tables.")
    parser.add_argument("--subset", help="Induced subproblem S as a comma list (default: all messages).")
    parser.add_argument("--adversary-known", dest="adversary_known", help="Override P, the messages the adversary knows.")
    parser.add_argument("--capability", help="Guessing capability c(t): an integer or a JSON table path.")
    parser.add_argument("--out", help="Write the output here instead of stdout.")
    parser.add_argument("--format", choices=("dot", "csv", "report"), help="Output format.")
    parser.add_argument("--strict", action="store_true", help="Fail when c(t) exceeds α(Γ_t(Q)) instead of clamping.")
    parser.add_argument("--vertex-cap", dest="vertex_cap", type=int, help="Largest graph to materialize.")
    parser.add_argument("--node-budget", dest="node_budget", type=int, help="Solver node budget.")


def build_config(command: str, args: argparse.Namespace) -> RunConfig:
    values = {
        "command": command,
        "instance": getattr(args, "instance", None),
        "t": getattr(args, "t", 1),
        "t_max": getattr(args, "t_max", 1),
        "subset": parse_int_list(getattr(args, "subset", None)),
        "adversary_known": parse_int_list(getattr(args, "adversary_known", None)),
        "capability": parse_capability(getattr(args, "capability", None)),
        "codes": getattr(args, "code", None) or [],
        "search": getattr(args, "search", False),
        "simulate": getattr(args, "simulate", False),
        "samples": getattr(args, "samples", None),
        "seed": getattr(args, "seed", None),
        "shards": getattr(args, "shards", None),
        "random": getattr(args, "random", None),
        "out": getattr(args, "out", None),
        "format": getattr(args, "format", None),
        "known_rate": getattr(args, "known_rate", None),
        "citation": getattr(args, "citation", None),
        "strict": getattr(args, "strict", False),
        "vertex_cap": getattr(args, "vertex_cap", None),
        "node_budget": getattr(args, "node_budget", None),
        "search_budget": getattr(args, "search_budget", None),
        "extra_colors": getattr(args, "extra_colors", None),
    }
    try:
        return RunConfig(**{key: value for key, value in values.items() if value is not None})
    except ValidationError as exc:
        raise InstanceValidationError(f"invalid run configuration: {exc}") from exc


def load(config: RunConfig) -> LoadedInstance:
    """The instance document, with CLI overrides for P, c(t) and the known R(Q) applied."""
    if config.instance is None:
        raise InstanceValidationError(f"the {config.command} command needs --instance PATH")
    loaded = load_instance_file(config.instance)
    adversary = loaded.adversary
    if config.adversary_known is not None or config.capability is not None:
        capability = adversary.capability
        if config.capability is not None:
            raw = config.capability
            capability = GuessBudget.of({int(k): v for k, v in raw.items()} if isinstance(raw, dict) else raw)
        known = adversary.known if config.adversary_known is None else config.adversary_known
        adversary = AdversarySpec.build(loaded.instance.n, known, capability)
    known_rate = loaded.known_rate
    if config.known_rate is not None:
        evaluate_rate_expression(config.known_rate)
        known_rate = KnownRate(config.known_rate, config.citation)
    return LoadedInstance(
        loaded.instance, loaded.distribution, adversary, loaded.name, known_rate, loaded.codes, loaded.source
    )


def emit(config: RunConfig, text: str) -> None:
    if config.out is not None:
        write_text(config.out, text)
    else:
        sys.stdout.write(text)


def status(message: str) -> None:
    """Human-readable side channel; stdout stays reserved for the artifact."""
    print(message, file=sys.stderr)
