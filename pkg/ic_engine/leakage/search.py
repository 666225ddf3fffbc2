"""Exhaustive search for the least-leaking zero-error deterministic code at fixed t.

Leakage depends only on the partition of X^t into codeword classes, so codes
are enumerated as restricted-growth colourings (colour of the first tuple in a
class is the smallest unused one).  The running posterior only grows as tuples
are assigned, which makes it a valid pruning bound.
"""

from __future__ import annotations

import heapq
import logging
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction

import config
from ic_engine.coding.codes import DeterministicCode
from ic_engine.coding.decoding import extend_to
from ic_engine.errors import BudgetExceededError, InstanceValidationError
from ic_engine.graphs.confusion import ConfusionGraph, build_confusion_graph
from ic_engine.graphs.solvers import chromatic_number
from ic_engine.leakage.guessing import LeakageReport, leakage_notions, ps_prior, resolve_capability
from ic_engine.model.distribution import AnyDistribution
from ic_engine.model.instance import AdversarySpec, Instance

logger = logging.getLogger(__name__)

Visitor = Callable[[DeterministicCode, Fraction], None]


@dataclass(frozen=True)
class SearchResult:
    report: LeakageReport
    code: DeterministicCode
    chromatic: int
    sizes_searched: tuple[int, ...]
    larger_size_helped: bool
    codebooks_visited: int
    nodes: int
    per_size: dict[int, Fraction] = field(default_factory=dict)
    scope_note: str = "deterministic encoders only; stochastic encoders are not searched"


class _PartitionSearch:
    def __init__(
        self,
        graph: ConfusionGraph,
        dist: AnyDistribution,
        adversary: AdversarySpec,
        c: int,
        budget: int,
        visitor: Visitor | None,
    ) -> None:
        self.graph = graph
        index = graph.index
        dist = extend_to(dist, index.t)
        self.probs = [p for _, p in dist.items()]
        self.observations = [index.project(x, adversary.known_sorted) for x in index.tuples()]
        self.c = c
        self.budget = budget
        self.visitor = visitor
        self.nodes = 0
        self.visited = 0

    def _top(self, cell: list[Fraction]) -> Fraction:
        return sum(heapq.nlargest(self.c, cell), Fraction(0))

    def run(self, k: int, bound: Fraction | None, prune: bool) -> tuple[Fraction, tuple[int, ...]] | None:
        """Smallest posterior among surjective proper k-colourings beating `bound`."""
        n = self.graph.order
        rows = self.graph.rows
        if k > n:
            return None
        colors = [-1] * n
        class_masks = [0] * k
        cells: dict[tuple[int, tuple[int, ...]], list[Fraction]] = {}
        total = Fraction(0)
        best: tuple[Fraction, tuple[int, ...]] | None = None
        # frame: [options, next option, colours used before, posterior delta of the current choice]
        stack: list[list] = []
        used = 0
        advance = True
        while True:
            depth = len(stack)
            if advance:
                if depth == n:
                    if used == k:
                        self._leaf(colors, k, total)
                        if best is None or total < best[0]:
                            if bound is None or total < bound:
                                best = (total, tuple(colors))
                                if prune:
                                    bound = total
                    advance = False
                    continue
                v = depth
                options = [
                    color
                    for color in range(min(used + 1, k))
                    if not rows[v] & class_masks[color] and max(used, color + 1) + (n - v - 1) >= k
                ]
                stack.append([options, 0, used, Fraction(0)])
            if not stack:
                return best
            frame = stack[-1]
            v = len(stack) - 1
            options, pointer, used_before, delta = frame
            if colors[v] >= 0:
                key = (colors[v], self.observations[v])
                cells[key].pop()
                class_masks[colors[v]] &= ~(1 << v)
                total -= delta
                colors[v] = -1
            if pointer >= len(options):
                stack.pop()
                used = used_before
                advance = False
                if not stack:
                    return best
                continue
            color = options[pointer]
            frame[1] = pointer + 1
            self.nodes += 1
            if self.nodes > self.budget:
                raise BudgetExceededError(
                    f"optimal-leakage search exceeded the budget of {self.budget} nodes", budget=self.budget
                )
            key = (color, self.observations[v])
            cell = cells.setdefault(key, [])
            before = self._top(cell)
            cell.append(self.probs[v])
            delta = self._top(cell) - before
            frame[3] = delta
            total += delta
            colors[v] = color
            class_masks[color] |= 1 << v
            used = max(used_before, color + 1)
            if prune and bound is not None and total >= bound:
                advance = False
                continue
            advance = True

    def _leaf(self, colors: list[int], k: int, total: Fraction) -> None:
        self.visited += 1
        if self.visitor is not None:
            code = DeterministicCode(self.graph.index, tuple(color + 1 for color in colors), k)
            self.visitor(code, total)


def optimal_zero_error_leakage(
    instance: Instance,
    dist: AnyDistribution,
    adversary: AdversarySpec,
    t: int = 1,
    *,
    extra: int | None = None,
    budget: int | None = None,
    prune: bool = True,
    visitor: Visitor | None = None,
    strict: bool = False,
    vertex_cap: int | None = None,
) -> SearchResult:
    """min L over deterministic zero-error codes with M in χ(Γ_t) .. χ(Γ_t) + extra."""
    extra = config.SEARCH_EXTRA_COLORS if extra is None else extra
    budget = config.SEARCH_BUDGET if budget is None else budget
    if extra < 0:
        raise InstanceValidationError(f"extra codebook sizes must be non-negative, got {extra}")
    graph = build_confusion_graph(instance, None, t, cap=vertex_cap)
    chi = chromatic_number(graph).value
    c, _ = resolve_capability(instance, adversary, t, strict=strict, vertex_cap=vertex_cap)
    prior = ps_prior(dist, adversary, t, c)
    search = _PartitionSearch(graph, dist, adversary, c, budget, visitor)

    per_size: dict[int, Fraction] = {}
    found = search.run(chi, None, prune)
    if found is None:
        raise InstanceValidationError(f"no proper {chi}-colouring found for Γ_{t}; chromatic number is inconsistent")
    best_posterior, best_table = found
    best_size = chi
    per_size[chi] = best_posterior
    helped = False
    sizes = [chi]
    for k in range(chi + 1, min(chi + extra, graph.order) + 1):
        sizes.append(k)
        candidate = search.run(k, None if not prune else best_posterior, prune)
        if candidate is None:
            continue
        if not prune:
            per_size[k] = candidate[0]
        if candidate[0] < best_posterior:
            helped = True
            best_posterior, best_table, best_size = candidate[0], candidate[1], k
    if helped:
        logger.warning("a codebook larger than χ(Γ_%s) = %s strictly reduced the leakage", t, chi)

    code = DeterministicCode(graph.index, tuple(color + 1 for color in best_table), best_size)
    report = LeakageReport(
        ps_prior=prior,
        ps_posterior=best_posterior,
        t=t,
        c_used=c,
        code_size=best_size,
        known=adversary.known_sorted,
        target=adversary.target,
        notions=leakage_notions(c, dist),
        code_label="optimal zero-error code",
    )
    logger.info("search visited %s codebooks in %s nodes; L* = %s bits", search.visited, search.nodes, report.bits.value)
    return SearchResult(
        report=report,
        code=code,
        chromatic=chi,
        sizes_searched=tuple(sizes),
        larger_size_helped=helped,
        codebooks_visited=search.visited,
        nodes=search.nodes,
        per_size=per_size,
    )
