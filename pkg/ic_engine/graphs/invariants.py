"""Graph invariants and certified broadcast-rate brackets for induced subproblems."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

import config
from ic_engine.bits import Bits, KnownRate, format_fraction
from ic_engine.errors import BudgetExceededError, InstanceValidationError, InvariantViolationError
from ic_engine.graphs.confusion import BitsetGraph, build_confusion_graph, check_vertex_transitive
from ic_engine.graphs.exact_lp import maximize
from ic_engine.graphs.solvers import chromatic_number, independence_number, maximal_independent_sets
from ic_engine.model.instance import Instance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FractionalResult:
    value: Fraction
    method: str
    alpha: int | None = None
    weights: tuple[Fraction, ...] = ()
    cover: tuple[tuple[tuple[int, ...], Fraction], ...] = ()


def fractional_chromatic_number(
    graph: BitsetGraph,
    *,
    alpha: int | None = None,
    transitivity_cap: int | None = None,
    lp_cap: int | None = None,
    budget: int | None = None,
) -> FractionalResult:
    """χ_f(G): |V|/α on vertex-transitive graphs, otherwise the exact LP.

    The LP maximizes a fractional clique (sum of vertex weights, at most 1 on
    every maximal independent set); its dual is the fractional colouring.
    """
    transitivity_cap = config.TRANSITIVITY_CAP if transitivity_cap is None else transitivity_cap
    lp_cap = config.LP_CAP if lp_cap is None else lp_cap
    if graph.order == 0:
        return FractionalResult(Fraction(0), "empty")
    transitive = graph.order <= transitivity_cap and check_vertex_transitive(graph, cap=transitivity_cap)
    if transitive:
        alpha = independence_number(graph, budget=budget).value if alpha is None else alpha
        return FractionalResult(Fraction(graph.order, alpha), "vertex-transitive", alpha)
    if graph.order > lp_cap:
        raise BudgetExceededError(
            f"χ_f needs the LP fallback on {graph.order} vertices, above the LP cap {lp_cap}", budget=lp_cap
        )
    logger.warning("graph on %s vertices is not known to be vertex-transitive; using the exact LP for χ_f", graph.order)
    sets = maximal_independent_sets(graph, budget=budget)
    rows = [[1 if v in members else 0 for v in range(graph.order)] for members in map(set, sets)]
    solution = maximize([1] * graph.order, rows, [1] * len(rows), budget=budget)
    cover = tuple((members, weight) for members, weight in zip(sets, solution.dual) if weight > 0)
    return FractionalResult(solution.value, "lp", alpha, solution.primal, cover)


@dataclass(frozen=True)
class MaisResult:
    size: int
    witness: tuple[int, ...]
    bound: Bits


def _is_acyclic(instance: Instance, members: tuple[int, ...]) -> bool:
    inside = set(members)
    arcs = {i: instance.side(i) & inside for i in members}
    indegree = {i: 0 for i in members}
    for targets in arcs.values():
        for j in targets:
            indegree[j] += 1
    ready = [i for i in members if indegree[i] == 0]
    seen = 0
    while ready:
        i = ready.pop()
        seen += 1
        for j in arcs[i]:
            indegree[j] -= 1
            if indegree[j] == 0:
                ready.append(j)
    return seen == len(members)


def mais_lower_bound(instance: Instance, subset: Iterable[int] | None = None, *, cap: int | None = None) -> MaisResult:
    """Maximum acyclic induced subgraph of the side-information digraph on S, times log2 q.

    Arc i -> j whenever j ∈ A_i ∩ S.  Sizes are tried from |S| down, subsets in
    lexicographic order, so the witness is deterministic.
    """
    cap = config.MAIS_CAP if cap is None else cap
    members = instance.subset(subset)
    if len(members) > cap:
        raise BudgetExceededError(f"MAIS search over |S| = {len(members)} exceeds the cap {cap}", budget=cap)
    for size in range(len(members), 0, -1):
        for chosen in itertools.combinations(members, size):
            if _is_acyclic(instance, chosen):
                return MaisResult(size, chosen, Bits.log2(instance.q**size))
    return MaisResult(0, (), Bits.zero())


# ---------------------------
# Rate brackets
# ---------------------------
@dataclass(frozen=True)
class SurrogateRow:
    t: int
    vertices: int
    edges: int
    alpha: int
    omega: int
    chi: int
    chi_f: Fraction
    chi_f_method: str

    @property
    def log_chi(self) -> Bits:
        return Bits.log2(self.chi, Fraction(1, self.t))

    @property
    def log_chi_f(self) -> Bits:
        return Bits.log2(self.chi_f, Fraction(1, self.t))

    def to_payload(self) -> dict:
        return {
            "t": self.t,
            "vertices": self.vertices,
            "edges": self.edges,
            "alpha": self.alpha,
            "omega": self.omega,
            "chi": self.chi,
            "chi_f": format_fraction(self.chi_f),
            "chi_f_method": self.chi_f_method,
            "log_chi_per_t": self.log_chi.to_payload(),
            "log_chi_f_per_t": self.log_chi_f.to_payload(),
        }


@dataclass(frozen=True)
class RateBracket:
    """Certified [lower, upper] for ρ(S), plus the per-t surrogates behind it."""

    subset: tuple[int, ...]
    rows: tuple[SurrogateRow, ...]
    certified_lower: Bits
    certified_upper: Bits
    lower_witness: tuple[int, ...] = ()
    known: KnownRate | None = None

    def __post_init__(self) -> None:
        if self.certified_upper < self.certified_lower:
            raise InvariantViolationError(
                f"rate bracket for S={self.subset} is inverted: {self.certified_lower} > {self.certified_upper}"
            )
        if self.rows and not self.certified_upper == min((row.log_chi for row in self.rows)):
            raise InvariantViolationError("certified upper bound must be the smallest log χ / t surrogate")

    @property
    def pinned(self) -> bool:
        return self.certified_lower == self.certified_upper

    @property
    def certified(self) -> Bits | None:
        return self.certified_upper if self.pinned else None

    def row(self, t: int) -> SurrogateRow:
        for row in self.rows:
            if row.t == t:
                return row
        raise KeyError(t)

    def to_payload(self) -> dict:
        return {
            "subset": list(self.subset),
            "certified_lower": self.certified_lower.to_payload(),
            "certified_upper": self.certified_upper.to_payload(),
            "pinned": self.pinned,
            "mais_witness": list(self.lower_witness),
            "known_value": self.known.to_payload() if self.known else None,
            "surrogates": [row.to_payload() for row in self.rows],
        }


def surrogate_row(
    graph: BitsetGraph,
    t: int,
    *,
    budget: int | None = None,
    transitivity_cap: int | None = None,
    lp_cap: int | None = None,
) -> SurrogateRow:
    """α, ω, χ and χ_f of one graph, with ω <= χ_f <= χ and α·χ_f = |V| (transitive case) checked."""
    alpha = independence_number(graph, budget=budget).value
    coloring = chromatic_number(graph, budget=budget)
    fractional = fractional_chromatic_number(
        graph, alpha=alpha, transitivity_cap=transitivity_cap, lp_cap=lp_cap, budget=budget
    )
    if not coloring.clique_bound <= fractional.value <= coloring.value:
        raise InvariantViolationError(
            f"ω = {coloring.clique_bound} <= χ_f = {fractional.value} <= χ = {coloring.value} does not hold"
        )
    if fractional.method == "vertex-transitive" and alpha * fractional.value != graph.order:
        raise InvariantViolationError(f"α·χ_f = {alpha * fractional.value} differs from |V| = {graph.order}")
    return SurrogateRow(
        t=t,
        vertices=graph.order,
        edges=graph.edge_count(),
        alpha=alpha,
        omega=coloring.clique_bound,
        chi=coloring.value,
        chi_f=fractional.value,
        chi_f_method=fractional.method,
    )


def rate_bracket(
    instance: Instance,
    subset: Iterable[int] | None = None,
    t_max: int = 1,
    known: KnownRate | None = None,
    *,
    vertex_cap: int | None = None,
    budget: int | None = None,
    transitivity_cap: int | None = None,
    lp_cap: int | None = None,
    mais_cap: int | None = None,
) -> RateBracket:
    """Surrogates for t = 1..t_max, upper = min_t log2 χ(Γ_t(S)) / t, lower = MAIS bound."""
    if t_max < 1:
        raise InstanceValidationError(f"t_max must be at least 1, got {t_max}")
    members = instance.subset(subset)
    rows = []
    for t in range(1, t_max + 1):
        graph = build_confusion_graph(instance, members, t, cap=vertex_cap)
        rows.append(surrogate_row(graph, t, budget=budget, transitivity_cap=transitivity_cap, lp_cap=lp_cap))
        logger.info("S=%s t=%s: α=%s χ=%s χ_f=%s", members, t, rows[-1].alpha, rows[-1].chi, rows[-1].chi_f)
    upper = min((row.log_chi for row in rows))
    mais = mais_lower_bound(instance, members, cap=mais_cap)
    return RateBracket(
        subset=members,
        rows=tuple(rows),
        certified_lower=mais.bound,
        certified_upper=upper,
        lower_witness=mais.witness,
        known=known,
    )
