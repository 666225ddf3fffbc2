from __future__ import annotations

import argparse
import logging

from commands.common import add_common_arguments, emit, load, status
from commands.schemas import RunConfig
from ic_engine.graphs.confusion import build_confusion_graph, check_vertex_transitive
from services.exports import adjacency_csv, graph_to_dot
from services.reports import graph_summary, instance_header, render

logger = logging.getLogger(__name__)


def add_arguments(parser: argparse.ArgumentParser) -> None:
    add_common_arguments(parser)


def run(config: RunConfig) -> int:
    loaded = load(config)
    graph = build_confusion_graph(loaded.instance, config.subset, config.t, cap=config.vertex_cap)
    status(f"|V| = {graph.order}, |E| = {graph.edge_count()}")

    fmt = config.format or "dot"
    if fmt == "dot":
        title = f"{loaded.name or 'instance'}: Γ_{config.t}(S={','.join(map(str, graph.subset))})"
        emit(config, graph_to_dot(graph, title))
    elif fmt == "csv":
        emit(config, adjacency_csv(graph))
    else:
        payload = instance_header(loaded.instance, name=loaded.name)
        payload["graph"] = graph_summary(graph, graph.subset, config.t)
        payload["graph"]["vertex_transitive"] = check_vertex_transitive(graph)
        emit(config, render(payload))
    return 0
