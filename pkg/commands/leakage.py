from __future__ import annotations

import argparse
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any

from commands.common import add_common_arguments, emit, load, status
from commands.schemas import RunConfig
from ic_engine.coding.codes import Code, DeterministicCode
from ic_engine.coding.decoding import error_probability
from ic_engine.errors import InstanceValidationError
from ic_engine.graphs.invariants import rate_bracket
from ic_engine.leakage.bounds import converse_inequality_check, leakage_rate_bounds
from ic_engine.leakage.guessing import leakage, posterior_guesses
from ic_engine.leakage.montecarlo import estimate_ps
from ic_engine.leakage.search import SearchResult, optimal_zero_error_leakage
from services.documents import LoadedInstance
from services.exports import leakage_csv, read_code_file, write_code_table
from services.reports import guesses_payload, instance_header, render, search_payload, validity_payload

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_common_arguments(parser)
    parser.add_argument("--code", action="append", help="Code table file (repeatable; default: the instance's codes).")
    parser.add_argument("--search", action="store_true", help="Search for the least-leaking zero-error code.")
    parser.add_argument("--extra-colors", dest="extra_colors", type=int, help="Codebook sizes above χ to search.")
    parser.add_argument("--search-budget", dest="search_budget", type=int, help="Search node budget.")
    parser.add_argument("--simulate", action="store_true", help="Add Monte Carlo estimates next to the exact values.")
    parser.add_argument("--samples", type=int, help="Monte Carlo sample count.")
    parser.add_argument("--seed", type=int, help="Monte Carlo seed.")
    parser.add_argument("--shards", type=int, help="Monte Carlo shards (worker threads).")


# ---------------------------
# Pieces
# ---------------------------
def _code_section(config: RunConfig, loaded: LoadedInstance, path: Path, code: DeterministicCode) -> dict[str, Any]:
    instance, dist, adversary = loaded.instance, loaded.distribution, loaded.adversary
    report = leakage(
        code, instance, dist, adversary, strict=config.strict, code_label=path.name, vertex_cap=config.vertex_cap
    )
    section: dict[str, Any] = {"leakage": report.to_payload()}
    section["validity"] = validity_payload(error_probability(code, instance, dist))
    section["guesses"] = guesses_payload(code, adversary, posterior_guesses(code, dist, adversary, report.c_used))
    section["converse"] = converse_inequality_check(code, instance, dist, adversary, vertex_cap=config.vertex_cap).to_payload()
    if config.simulate:
        section["monte_carlo"] = _simulate(config, code, loaded, report.c_used, report.ps_prior, report.ps_posterior)
    status(f"{path.name}: L = {report.bits} bits")
    return section


def _simulate(
    config: RunConfig, code: Code, loaded: LoadedInstance, c: int, prior: Fraction, posterior: Fraction
) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for name, exact, flag in (("prior", prior, False), ("posterior", posterior, True)):
        estimate = estimate_ps(
            code, loaded.distribution, loaded.adversary, config.samples, config.seed, c=c, shards=config.shards, posterior=flag
        )
        payload = estimate.to_payload()
        payload["exact_inside_interval"] = estimate.contains(exact)
        out[name] = payload
    return out


def _search_section(config: RunConfig, loaded: LoadedInstance, t: int) -> tuple[dict[str, Any], SearchResult]:
    result = optimal_zero_error_leakage(
        loaded.instance,
        loaded.distribution,
        loaded.adversary,
        t,
        extra=config.extra_colors,
        budget=config.search_budget,
        strict=config.strict,
        vertex_cap=config.vertex_cap,
    )
    section = {
        "leakage": result.report.to_payload(),
        "search": search_payload(result),
        "code_table": write_code_table(result.code).splitlines(),
    }
    status(f"t={t}: L* = {result.report.bits} bits with M = {result.code.size}")
    return section, result


def _search_csv(config: RunConfig, loaded: LoadedInstance) -> str:
    bracket = rate_bracket(
        loaded.instance, loaded.adversary.target, config.t_max, loaded.known_rate, vertex_cap=config.vertex_cap
    )
    bounds = leakage_rate_bounds(loaded.instance, loaded.distribution, loaded.adversary, bracket)
    lower = bounds.zero_error_lower.low.value if bounds.zero_error_lower.low is not None else None
    upper = bounds.zero_error_upper.high.value if bounds.zero_error_upper.high is not None else None
    rows = []
    for t in range(1, config.t_max + 1):
        _, result = _search_section(config, loaded, t)
        rows.append((t, result.report.per_symbol.value, lower, upper))
    return leakage_csv(rows)


# ---------------------------
# Command
# ---------------------------
def run(config: RunConfig) -> int:
    loaded = load(config)
    paths = list(config.codes) or list(loaded.codes)
    if not config.search and not paths:
        raise InstanceValidationError("leakage needs --code PATH, codes listed in the instance, or --search")

    if config.format == "csv":
        if not config.search:
            raise InstanceValidationError("csv output lists L*/t per t and needs --search")
        emit(config, _search_csv(config, loaded))
        return 0

    payload = instance_header(loaded.instance, loaded.adversary, loaded.name)
    if config.codes or not config.search:
        payload["codes"] = {
            path.name: _code_section(config, loaded, path, read_code_file(path, loaded.instance, config.t))
            for path in map(Path, paths)
        }
    if config.search:
        section, result = _search_section(config, loaded, config.t)
        if config.simulate:
            section["monte_carlo"] = _simulate(
                config, result.code, loaded, result.report.c_used, result.report.ps_prior, result.report.ps_posterior
            )
        payload["optimal"] = section
    emit(config, render(payload))
    return 0
