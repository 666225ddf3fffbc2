from __future__ import annotations

import argparse
import logging

from commands.common import add_common_arguments, emit, load, status
from commands.schemas import RunConfig
from ic_engine.bits import KnownRate
from ic_engine.graphs.invariants import RateBracket, rate_bracket
from ic_engine.leakage.bounds import uniform_surrogate_report, leakage_rate_bounds
from services.reports import instance_header, render

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_common_arguments(parser)
    parser.add_argument("--known-rate", dest="known_rate", help="Externally known R(Q), e.g. '3 - 0.75*log2(3)'.")
    parser.add_argument("--citation", help="Where the known rate comes from.")


def run(config: RunConfig) -> int:
    loaded = load(config)
    instance, dist, adversary = loaded.instance, loaded.distribution, loaded.adversary

    def bracket(subset: tuple[int, ...], known: KnownRate | None = None) -> RateBracket:
        return rate_bracket(instance, subset, config.t_max, known, vertex_cap=config.vertex_cap, budget=config.node_budget)

    bracket_q = bracket(adversary.target, loaded.known_rate)
    bracket_full = bracket_p = None
    if adversary.known:
        bracket_full = bracket(instance.messages)
        bracket_p = bracket(adversary.known_sorted)
    report = leakage_rate_bounds(instance, dist, adversary, bracket_q, bracket_full=bracket_full, bracket_p=bracket_p)
    status(f"leakage rate lower bound {report.vanishing_lower.low}, zero-error upper bound {report.zero_error_upper.high}")

    payload = instance_header(instance, adversary, loaded.name)
    payload["rate_bracket_target"] = bracket_q.to_payload()
    payload["bounds"] = report.to_payload()
    if dist.is_uniform():
        payload["uniform"] = uniform_surrogate_report(
            instance, dist, adversary, config.t_max, budget=config.search_budget, vertex_cap=config.vertex_cap
        ).to_payload()
    else:
        logger.info("distribution is not uniform; skipping the uniform-message report")
    emit(config, render(payload))
    return 0
