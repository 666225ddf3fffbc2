"""JSON report assembly; byte-stable for identical inputs."""

from __future__ import annotations

import json
from typing import Any

from ic_engine.bits import format_fraction
from ic_engine.coding.codes import Code
from ic_engine.coding.decoding import ValidityReport
from ic_engine.graphs.confusion import BitsetGraph
from ic_engine.leakage.search import SearchResult
from ic_engine.model.instance import AdversarySpec, Instance


def render(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def instance_header(instance: Instance, adversary: AdversarySpec | None = None, name: str = "") -> dict[str, Any]:
    header: dict[str, Any] = {
        "name": name,
        "n": instance.n,
        "q": instance.q,
        "side_info": instance.describe(),
    }
    if adversary is not None:
        header["adversary"] = {
            "known": list(adversary.known_sorted),
            "target": list(adversary.target),
            "capability": adversary.capability.to_payload(),
        }
    return header


def graph_summary(graph: BitsetGraph, subset: tuple[int, ...], t: int) -> dict[str, Any]:
    return {"subset": list(subset), "t": t, "vertices": graph.order, "edges": graph.edge_count()}


def validity_payload(report: ValidityReport) -> dict[str, Any]:
    return {
        "p_error": format_fraction(report.p_error),
        "zero_error": report.zero_error,
        "error_count": report.error_count,
        "error_set": list(report.error_set),
    }


def guesses_payload(
    code: Code, adversary: AdversarySpec, guesses: dict[tuple[int, tuple[int, ...]], tuple[tuple[int, ...], ...]]
) -> list[dict[str, Any]]:
    known_index = code.index.sub_index(adversary.known_sorted)
    target_index = code.index.sub_index(adversary.target)
    return [
        {
            "codeword": y,
            "known": known_index.label(x_p),
            "guesses": [target_index.label(x_q) for x_q in ranked],
        }
        for (y, x_p), ranked in guesses.items()
    ]


def search_payload(result: SearchResult) -> dict[str, Any]:
    return {
        "chromatic_number": result.chromatic,
        "codebook_sizes_searched": list(result.sizes_searched),
        "larger_codebook_helped": result.larger_size_helped,
        "codebooks_visited": result.codebooks_visited,
        "nodes": result.nodes,
        "minimum_posterior_by_size": {str(k): format_fraction(v) for k, v in sorted(result.per_size.items())},
        "scope": result.scope_note,
    }
