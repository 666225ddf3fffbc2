"""Exact branch-and-bound solvers on bitset graphs.

All searches are iterative (explicit stacks) and count nodes against a budget;
hitting the budget raises BudgetExceededError instead of returning a guess.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from collections.abc import Iterator

import config
from ic_engine.errors import BudgetExceededError
from ic_engine.graphs.confusion import BitsetGraph, iter_bits

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VertexSetResult:
    value: int
    witness: tuple[int, ...]
    nodes: int = 0


@dataclass(frozen=True)
class ColoringResult:
    value: int
    coloring: tuple[int, ...]
    nodes: int = 0
    clique_bound: int = 0

    def classes(self) -> list[tuple[int, ...]]:
        buckets: list[list[int]] = [[] for _ in range(self.value)]
        for vertex, color in enumerate(self.coloring):
            buckets[color].append(vertex)
        return [tuple(bucket) for bucket in buckets]


class _NodeCounter:
    def __init__(self, budget: int, what: str) -> None:
        self.budget = budget
        self.what = what
        self.count = 0

    def tick(self) -> None:
        self.count += 1
        if self.count > self.budget:
            raise BudgetExceededError(f"{self.what} exceeded the node budget of {self.budget}", budget=self.budget)


def _degree_order(graph: BitsetGraph) -> list[int]:
    """Descending degree, ties by vertex index."""
    return sorted(range(graph.order), key=lambda v: (-graph.degree(v), v))


def _color_sort(rows: list[int], candidates: int) -> list[tuple[int, int]]:
    """Greedy sequential colouring of `candidates`; (vertex, colour) by increasing colour."""
    out: list[tuple[int, int]] = []
    color = 0
    uncolored = candidates
    while uncolored:
        color += 1
        available = uncolored
        while available:
            low = available & -available
            v = low.bit_length() - 1
            available &= ~rows[v] & ~low
            uncolored &= ~low
            out.append((v, color))
    return out


def clique_number(graph: BitsetGraph, *, budget: int | None = None) -> VertexSetResult:
    """ω(G) with a witness clique, by greedy-colouring bounded branch and bound."""
    budget = config.NODE_BUDGET if budget is None else budget
    if graph.order == 0:
        return VertexSetResult(0, ())
    order = _degree_order(graph)
    position = {v: p for p, v in enumerate(order)}
    rows = [0] * graph.order
    for p, v in enumerate(order):
        for w in iter_bits(graph.rows[v]):
            rows[p] |= 1 << position[w]

    counter = _NodeCounter(budget, "clique search")
    best: list[int] = []
    current: list[int] = []
    root = (1 << graph.order) - 1
    colored = _color_sort(rows, root)
    frames: list[list] = [[root, colored, len(colored)]]
    while frames:
        frame = frames[-1]
        candidates, colored, pos = frame
        if pos == 0 or len(current) + colored[pos - 1][1] <= len(best):
            frames.pop()
            if frames:
                current.pop()
            continue
        pos -= 1
        v = colored[pos][0]
        frame[0] = candidates & ~(1 << v)
        frame[2] = pos
        counter.tick()
        child = candidates & rows[v]
        current.append(v)
        if child:
            child_colored = _color_sort(rows, child)
            frames.append([child, child_colored, len(child_colored)])
        else:
            if len(current) > len(best):
                best = list(current)
            current.pop()
    logger.debug("clique search: %s nodes, ω = %s", counter.count, len(best))
    witness = tuple(sorted(order[p] for p in best))
    return VertexSetResult(len(best), witness, counter.count)


def independence_number(graph: BitsetGraph, *, budget: int | None = None) -> VertexSetResult:
    """α(G) with one maximum independent set as witness (max clique of the complement)."""
    result = clique_number(graph.complement(), budget=budget)
    return VertexSetResult(result.value, result.witness, result.nodes)


# ---------------------------
# Colouring
# ---------------------------
def _select_dsatur(
    neighbours: list[list[int]],
    colors: list[int],
    saturation: list[int],
) -> int:
    best_vertex = -1
    best_key: tuple[int, int] | None = None
    for v, color in enumerate(colors):
        if color >= 0:
            continue
        key = (saturation[v], sum(1 for w in neighbours[v] if colors[w] < 0))
        if best_key is None or key > best_key:
            best_vertex, best_key = v, key
    return best_vertex


def greedy_dsatur(graph: BitsetGraph) -> ColoringResult:
    """DSATUR heuristic; an upper bound on χ, never a final answer on its own."""
    neighbours = [graph.neighbours(v) for v in range(graph.order)]
    colors = [-1] * graph.order
    seen = [0] * graph.order
    saturation = [0] * graph.order
    used = 0
    for _ in range(graph.order):
        v = _select_dsatur(neighbours, colors, saturation)
        color = 0
        while seen[v] >> color & 1:
            color += 1
        colors[v] = color
        used = max(used, color + 1)
        for w in neighbours[v]:
            if not seen[w] >> color & 1:
                seen[w] |= 1 << color
                saturation[w] += 1
    return ColoringResult(used, tuple(colors))


def _k_coloring(graph: BitsetGraph, k: int, counter: _NodeCounter) -> tuple[int, ...] | None:
    """Exact DSATUR backtracking: a proper k-colouring or None."""
    n = graph.order
    neighbours = [graph.neighbours(v) for v in range(n)]
    colors = [-1] * n
    counts = [[0] * k for _ in range(n)]
    saturation = [0] * n

    def assign(v: int, color: int) -> None:
        colors[v] = color
        for w in neighbours[v]:
            counts[w][color] += 1
            if counts[w][color] == 1:
                saturation[w] += 1

    def unassign(v: int) -> None:
        color = colors[v]
        colors[v] = -1
        for w in neighbours[v]:
            counts[w][color] -= 1
            if counts[w][color] == 0:
                saturation[w] -= 1

    # frame: [vertex, options, next option, colours in use before this vertex]
    stack: list[list] = []
    used = 0
    colored = 0
    advance = True
    while True:
        if advance:
            if colored == n:
                return tuple(colors)
            v = _select_dsatur(neighbours, colors, saturation)
            options = [c for c in range(min(used + 1, k)) if counts[v][c] == 0]
            stack.append([v, options, 0, used])
        if not stack:
            return None
        frame = stack[-1]
        v, options, pointer, used_before = frame
        if colors[v] >= 0:
            unassign(v)
            colored -= 1
        if pointer >= len(options):
            stack.pop()
            used = used_before
            advance = False
            if not stack:
                return None
            continue
        color = options[pointer]
        frame[2] = pointer + 1
        counter.tick()
        assign(v, color)
        colored += 1
        used = max(used_before, color + 1)
        advance = True


def chromatic_number(graph: BitsetGraph, *, budget: int | None = None) -> ColoringResult:
    """χ(G) with a witness colouring: clique lower bound, DSATUR upper bound, exact deepening."""
    budget = config.NODE_BUDGET if budget is None else budget
    if graph.order == 0:
        return ColoringResult(0, ())
    lower = clique_number(graph, budget=budget).value
    upper = greedy_dsatur(graph)
    counter = _NodeCounter(budget, "colouring search")
    for k in range(lower, upper.value):
        found = _k_coloring(graph, k, counter)
        logger.debug("k-colouring with k=%s: %s after %s nodes", k, found is not None, counter.count)
        if found is not None:
            return ColoringResult(k, found, counter.count, lower)
    return ColoringResult(upper.value, upper.coloring, counter.count, lower)


def maximal_independent_sets(graph: BitsetGraph, *, budget: int | None = None) -> list[tuple[int, ...]]:
    """All maximal independent sets (Bron-Kerbosch with pivoting on the complement), sorted."""
    budget = config.NODE_BUDGET if budget is None else budget
    counter = _NodeCounter(budget, "maximal independent set enumeration")
    full = graph.all_vertices
    others = [full & ~row & ~(1 << v) for v, row in enumerate(graph.rows)]
    found: list[tuple[int, ...]] = []
    stack: list[tuple[tuple[int, ...], int, int]] = [((), full, 0)]
    while stack:
        chosen, pool, excluded = stack.pop()
        counter.tick()
        if not pool and not excluded:
            found.append(tuple(sorted(chosen)))
            continue
        pivot = max(iter_bits(pool | excluded), key=lambda u: (pool & others[u]).bit_count())
        for v in iter_bits(pool & ~others[pivot]):
            stack.append((chosen + (v,), pool & others[v], excluded & others[v]))
            pool &= ~(1 << v)
            excluded |= 1 << v
    return sorted(found)


def iter_independent_sets(graph: BitsetGraph) -> Iterator[tuple[int, ...]]:
    """Every independent set (including the empty one); only for tiny fixture graphs."""
    for mask in range(1 << graph.order):
        members = tuple(iter_bits(mask))
        if graph.is_independent(members):
            yield members
