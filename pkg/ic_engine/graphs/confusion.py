"""Confusion graphs Γ_t(S) stored as bitset adjacency rows."""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator, Sequence

import config
from ic_engine.errors import BudgetExceededError, InstanceValidationError
from ic_engine.model.instance import Instance, TupleIndex

logger = logging.getLogger(__name__)


def iter_bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of `mask`, lowest first."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for vertex in vertices:
        mask |= 1 << vertex
    return mask


class BitsetGraph:
    """Simple undirected graph on 0..order-1; rows[v] is the neighbour bitset of v."""

    __slots__ = ("rows", "_labels")

    def __init__(self, rows: Sequence[int], labels: Sequence[str] | None = None, *, validate: bool = True) -> None:
        self.rows = tuple(rows)
        self._labels = tuple(labels) if labels is not None else None
        if validate:
            self._validate()

    def _validate(self) -> None:
        for v, row in enumerate(self.rows):
            if row >> v & 1:
                raise InstanceValidationError(f"self-loop at vertex {v}")
            if row >> len(self.rows):
                raise InstanceValidationError(f"vertex {v} has a neighbour outside the graph")
            for w in iter_bits(row):
                if not self.rows[w] >> v & 1:
                    raise InstanceValidationError(f"adjacency is not symmetric between {v} and {w}")

    @classmethod
    def from_edges(cls, order: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> BitsetGraph:
        rows = [0] * order
        for u, v in edges:
            if u == v:
                raise InstanceValidationError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(rows, labels)

    @classmethod
    def complete(cls, order: int) -> BitsetGraph:
        full = (1 << order) - 1
        return cls([full & ~(1 << v) for v in range(order)])

    @classmethod
    def empty(cls, order: int) -> BitsetGraph:
        return cls([0] * order)

    @classmethod
    def cycle(cls, order: int) -> BitsetGraph:
        return cls.from_edges(order, ((v, (v + 1) % order) for v in range(order)))

    @classmethod
    def path(cls, order: int) -> BitsetGraph:
        return cls.from_edges(order, ((v, v + 1) for v in range(order - 1)))

    @property
    def order(self) -> int:
        return len(self.rows)

    @property
    def all_vertices(self) -> int:
        return (1 << self.order) - 1

    def label(self, v: int) -> str:
        return self._labels[v] if self._labels is not None else str(v)

    def adjacent(self, u: int, v: int) -> bool:
        return bool(self.rows[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def neighbours(self, v: int) -> list[int]:
        return list(iter_bits(self.rows[v]))

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.rows):
            for v in iter_bits(row >> (u + 1)):
                yield u, u + 1 + v

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.rows) // 2

    def complement(self) -> BitsetGraph:
        full = self.all_vertices
        return BitsetGraph([full & ~row & ~(1 << v) for v, row in enumerate(self.rows)], self._labels)

    def is_independent(self, vertices: Iterable[int]) -> bool:
        chosen = mask_of(vertices)
        return all(not (self.rows[v] & chosen) for v in iter_bits(chosen))

    def is_clique(self, vertices: Iterable[int]) -> bool:
        chosen = mask_of(vertices)
        return all((self.rows[v] | 1 << v) & chosen == chosen for v in iter_bits(chosen))

    def is_proper_coloring(self, colors: Sequence[int]) -> bool:
        return len(colors) == self.order and all(colors[u] != colors[v] for u, v in self.edges())


class ConfusionGraph(BitsetGraph):
    """Γ_t(S): vertices are the tuples of X_S^t numbered by `index`."""

    __slots__ = ("instance", "index")

    def __init__(self, rows: Sequence[int], instance: Instance, index: TupleIndex) -> None:
        # Symmetric and loop-free by construction.
        super().__init__(rows, validate=False)
        self.instance = instance
        self.index = index

    @property
    def subset(self) -> tuple[int, ...]:
        return self.index.scope

    @property
    def t(self) -> int:
        return self.index.t

    def label(self, v: int) -> str:
        return self.index.label(self.index.tuple_of_index(v))

    def vertex(self, x: tuple[int, ...]) -> int:
        return self.index.index_of_tuple(x)

    def tuple_at(self, v: int) -> tuple[int, ...]:
        return self.index.tuple_of_index(v)


def confusable(
    x: tuple[int, ...],
    z: tuple[int, ...],
    instance: Instance,
    subset: Iterable[int] | None = None,
    t: int = 1,
) -> bool:
    """True iff some receiver i in S sees x_i != z_i while x and z agree on A_i ∩ S."""
    index = instance.tuple_index(subset, t)
    index.index_of_tuple(x)
    index.index_of_tuple(z)
    if x == z:
        return False
    for i in index.scope:
        side = instance.side(i, index.scope)
        if index.sequence(x, i) != index.sequence(z, i) and index.project(x, side) == index.project(z, side):
            return True
    return False


def build_confusion_graph(
    instance: Instance,
    subset: Iterable[int] | None = None,
    t: int = 1,
    *,
    cap: int | None = None,
) -> ConfusionGraph:
    """Γ_t(S) straight from the confusability predicate, grouped per receiver.

    For receiver i, tuples sharing x_{A_i ∩ S} form a group; inside a group,
    tuples with different x_i are exactly the pairs receiver i confuses.
    """
    cap = config.VERTEX_CAP if cap is None else cap
    index = instance.tuple_index(subset, t)
    if index.size > cap:
        raise BudgetExceededError(f"Γ_{t}(S) would have {index.size} vertices, above the cap {cap}", budget=cap)
    rows = [0] * index.size
    for i in index.scope:
        side = tuple(sorted(instance.side(i, index.scope)))
        groups: dict[tuple[int, ...], dict[tuple[int, ...], int]] = defaultdict(lambda: defaultdict(int))
        for v, x in enumerate(index.tuples()):
            groups[index.project(x, side)][index.sequence(x, i)] |= 1 << v
        for subgroups in groups.values():
            whole = 0
            for members in subgroups.values():
                whole |= members
            for members in subgroups.values():
                others = whole & ~members
                for v in iter_bits(members):
                    rows[v] |= others
    graph = ConfusionGraph(rows, instance, index)
    logger.debug("built Γ_%s(%s): %s vertices, %s edges", t, index.scope, graph.order, graph.edge_count())
    return graph


def translate(index: TupleIndex, x: tuple[int, ...], d: tuple[int, ...]) -> tuple[int, ...]:
    """Symbol-wise x + d (mod q)."""
    return tuple((a + b) % index.q for a, b in zip(x, d, strict=True))


# ---------------------------
# Vertex transitivity
# ---------------------------
def _translate_mask(mask: int, digit_masks: Sequence[int], weight: int, q: int) -> int:
    out = 0
    for digit, digits in enumerate(digit_masks):
        part = mask & digits
        if digit < q - 1:
            out |= part << weight
        else:
            out |= part >> ((q - 1) * weight)
    return out


def _translations_are_automorphisms(graph: ConfusionGraph) -> bool:
    index = graph.index
    q = index.q
    for position in range(index.width):
        weight = q ** (index.width - 1 - position)
        digit_masks = [0] * q
        for v in range(graph.order):
            digit_masks[(v // weight) % q] |= 1 << v
        for v, row in enumerate(graph.rows):
            image = v + weight if (v // weight) % q < q - 1 else v - (q - 1) * weight
            if graph.rows[image] != _translate_mask(row, digit_masks, weight, q):
                return False
    return True


def _extend_automorphism(graph: BitsetGraph, mapping: list[int], used: int) -> list[int] | None:
    v = len(mapping)
    if v == graph.order:
        return mapping
    for candidate in range(graph.order):
        if used >> candidate & 1 or graph.degree(candidate) != graph.degree(v):
            continue
        if all(graph.adjacent(u, v) == graph.adjacent(mapping[u], candidate) for u in range(v)):
            found = _extend_automorphism(graph, mapping + [candidate], used | 1 << candidate)
            if found is not None:
                return found
    return None


def _generic_transitive(graph: BitsetGraph) -> bool:
    orbit = {0}
    generators: list[list[int]] = []
    for target in range(1, graph.order):
        if target in orbit:
            continue
        sigma = None
        if graph.degree(target) == graph.degree(0):
            sigma = _extend_automorphism(graph, [target], 1 << target)
        if sigma is None:
            return False
        generators.append(sigma)
        frontier = list(orbit)
        while frontier:
            vertex = frontier.pop()
            for generator in generators:
                image = generator[vertex]
                if image not in orbit:
                    orbit.add(image)
                    frontier.append(image)
    return True


def check_vertex_transitive(graph: BitsetGraph, *, cap: int | None = None, automorphism_cap: int | None = None) -> bool:
    """Vertex transitivity via unit translations (confusion graphs) or automorphism search.

    Unit translations x -> x + e_k generate every translation, and translations
    act transitively on X_S^t, so for a confusion graph it is enough to check
    that each of them preserves adjacency.
    """
    cap = config.TRANSITIVITY_CAP if cap is None else cap
    automorphism_cap = config.AUTOMORPHISM_CAP if automorphism_cap is None else automorphism_cap
    if graph.order > cap:
        raise BudgetExceededError(
            f"transitivity check on {graph.order} vertices exceeds the cap {cap}", budget=cap
        )
    if graph.order <= 1:
        return True
    if isinstance(graph, ConfusionGraph):
        return _translations_are_automorphisms(graph)
    degree = graph.degree(0)
    if any(graph.degree(v) != degree for v in range(graph.order)):
        return False
    if graph.order > automorphism_cap:
        logger.warning("regular graph on %s vertices is above the automorphism search cap; treating as non-transitive", graph.order)
        return False
    return _generic_transitive(graph)
