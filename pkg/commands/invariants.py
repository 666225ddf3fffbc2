from __future__ import annotations

import argparse
import logging

from commands.common import add_common_arguments, emit, load, status
from commands.schemas import RunConfig
from ic_engine.graphs.invariants import rate_bracket
from services.exports import surrogate_csv
from services.reports import instance_header, render

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_common_arguments(parser)
    parser.add_argument("--known-rate", dest="known_rate", help="Externally known R(S), e.g. '3 - 0.75*log2(3)'.")
    parser.add_argument("--citation", help="Where the known rate comes from.")


def run(config: RunConfig) -> int:
    loaded = load(config)
    bracket = rate_bracket(
        loaded.instance,
        config.subset,
        config.t_max,
        loaded.known_rate,
        vertex_cap=config.vertex_cap,
        budget=config.node_budget,
    )
    status(f"ρ(S={list(bracket.subset)}) in [{bracket.certified_lower}, {bracket.certified_upper}]")
    if config.format == "csv":
        emit(config, surrogate_csv(bracket.rows))
        return 0
    payload = instance_header(loaded.instance, name=loaded.name)
    payload["rate_bracket"] = bracket.to_payload()
    emit(config, render(payload))
    return 0
