"""Text exports: DOT graphs, CSV tables and code tables."""

from __future__ import annotations

import csv
import io
import logging
import re
from collections.abc import Iterable, Sequence
from pathlib import Path

from ic_engine.bits import format_float, format_fraction
from ic_engine.coding.codes import DeterministicCode
from ic_engine.errors import InstanceValidationError
from ic_engine.graphs.confusion import BitsetGraph
from ic_engine.graphs.invariants import SurrogateRow
from ic_engine.model.instance import Instance

logger = logging.getLogger(__name__)

CLAIM_HEADER = "# claim: zero-error"
_PAIR = re.compile(r"^\(\s*(\d+)\s*,\s*(\d+)\s*\)$")
_HEADER = re.compile(r"^#\s*(size|parts)\s*:\s*(.+)$")


def graph_to_dot(graph: BitsetGraph, title: str = "") -> str:
    lines = ["graph confusion {"]
    if title:
        lines.append(f"  // {title}")
    for v in range(graph.order):
        lines.append(f'  "{graph.label(v)}";')
    for u, v in graph.edges():
        lines.append(f'  "{graph.label(u)}" -- "{graph.label(v)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def adjacency_csv(graph: BitsetGraph) -> str:
    labels = [graph.label(v) for v in range(graph.order)]
    rows = ([labels[u]] + [1 if graph.adjacent(u, v) else 0 for v in range(graph.order)] for u in range(graph.order))
    return _csv_text(["vertex"] + labels, rows)


def surrogate_csv(rows: Iterable[SurrogateRow]) -> str:
    header = ["t", "vertices", "alpha", "chi", "chi_f", "log_chi_per_t", "log_chi_f_per_t"]
    body = (
        [
            row.t,
            row.vertices,
            row.alpha,
            row.chi,
            format_fraction(row.chi_f),
            format_float(row.log_chi.value),
            format_float(row.log_chi_f.value),
        ]
        for row in rows
    )
    return _csv_text(header, body)


def leakage_csv(rows: Iterable[tuple[int, float, float | None, float | None]]) -> str:
    """(t, L*, lower bound, upper bound) rows for plotting."""
    body = (
        [t, format_float(value), "" if lower is None else format_float(lower), "" if upper is None else format_float(upper)]
        for t, value, lower, upper in rows
    )
    return _csv_text(["t", "optimal_leakage", "lower_bound", "upper_bound"], body)


# ---------------------------
# Code tables
# ---------------------------
def write_code_table(code: DeterministicCode) -> str:
    lines = []
    if code.claims_zero_error:
        lines.append(CLAIM_HEADER)
    lines.append(f"# size: {code.size}")
    if code.parts is not None:
        lines.append(f"# parts: {code.parts[0]}x{code.parts[1]}")
    for v, x in enumerate(code.index.tuples()):
        y = code.table[v]
        value = "({},{})".format(*code.pair(y)) if code.parts is not None else str(y)
        lines.append(f"{code.index.label(x)} -> {value}")
    return "\n".join(lines) + "\n"


def read_code_table(text: str, instance: Instance, t: int = 1) -> DeterministicCode:
    """Parse `tuple -> codeword` lines (or `tuple -> (y1,y2)` for composite codes)."""
    index = instance.tuple_index(None, t)
    claims = False
    size: int | None = None
    parts: tuple[int, int] | None = None
    entries: dict[int, int | tuple[int, int]] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.lower().replace(" ", "") == CLAIM_HEADER.replace(" ", ""):
                claims = True
            header = _HEADER.match(line)
            if header and header.group(1) == "size":
                size = int(header.group(2))
            elif header:
                m1, _, m2 = header.group(2).partition("x")
                parts = (int(m1), int(m2))
            continue
        label, arrow, value = line.partition("->")
        if not arrow:
            raise InstanceValidationError(f"code table line {number}: expected 'tuple -> codeword', got {raw!r}")
        v = index.index_of_tuple(index.parse_label(label.strip()))
        if v in entries:
            raise InstanceValidationError(f"code table line {number}: tuple {label.strip()!r} listed twice")
        value = value.strip()
        pair = _PAIR.match(value)
        if pair:
            entries[v] = (int(pair.group(1)), int(pair.group(2)))
        elif value.isdigit():
            entries[v] = int(value)
        else:
            raise InstanceValidationError(f"code table line {number}: bad codeword {value!r}")
    if len(entries) != index.size:
        raise InstanceValidationError(f"code table covers {len(entries)} of {index.size} tuples")

    pairs = [value for value in entries.values() if isinstance(value, tuple)]
    if pairs:
        if len(pairs) != len(entries):
            raise InstanceValidationError("code table mixes plain and (y1,y2) codewords")
        if parts is None:
            parts = (max(y1 for y1, _ in pairs), max(y2 for _, y2 in pairs))
        for y1, y2 in pairs:
            if not (1 <= y1 <= parts[0] and 1 <= y2 <= parts[1]):
                raise InstanceValidationError(f"codeword pair ({y1},{y2}) outside {parts[0]}x{parts[1]}")
        table = tuple((entries[v][0] - 1) * parts[1] + entries[v][1] for v in range(index.size))  # type: ignore[index]
        size = parts[0] * parts[1]
    else:
        table = tuple(entries[v] for v in range(index.size))  # type: ignore[misc]
        size = max(table) if size is None else size
        parts = None
    return DeterministicCode(index, table, size, parts=parts, claims_zero_error=claims)


def read_code_file(path: str | Path, instance: Instance, t: int = 1) -> DeterministicCode:
    return read_code_table(Path(path).read_text(encoding="utf-8"), instance, t)


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("wrote %s", path)
    return path
