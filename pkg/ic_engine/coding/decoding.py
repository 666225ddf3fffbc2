"""ML decoder synthesis, zero-error validity, exact error probability and determinization."""

from __future__ import annotations

import logging
from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction

import config
from ic_engine.coding.codes import Code, DeterministicCode
from ic_engine.errors import BudgetExceededError, InstanceValidationError, InvariantViolationError
from ic_engine.graphs.confusion import BitsetGraph, ConfusionGraph, iter_bits, mask_of
from ic_engine.model.distribution import AnyDistribution, Distribution, product_extend
from ic_engine.model.instance import Instance, TupleIndex

logger = logging.getLogger(__name__)

JointCell = tuple[tuple[int, ...], int, Fraction]


def extend_to(dist: AnyDistribution, t: int) -> AnyDistribution:
    """`dist` at sequence length t (single-letter input is product-extended)."""
    if dist.index.t == t:
        return dist
    if isinstance(dist, Distribution) and dist.t == 1:
        return product_extend(dist, t)
    raise InstanceValidationError(f"distribution is over length {dist.index.t}, code needs {t}")


def iter_joint(code: Code, dist: AnyDistribution, *, cap: int | None = None) -> Iterator[JointCell]:
    """(x, y, P(x, y)) for every cell with positive probability, in (x, y) order."""
    cap = config.JOINT_CAP if cap is None else cap
    dist = extend_to(dist, code.t)
    if dist.scope != code.scope:
        raise InstanceValidationError(f"code scope {code.scope} and distribution scope {dist.scope} differ")
    cells = code.index.size * (1 if isinstance(code, DeterministicCode) else code.size)
    if cells > cap:
        raise BudgetExceededError(
            f"joint (tuple, codeword) space has up to {cells} cells, above the cap {cap}; use the Monte Carlo path",
            budget=cap,
        )
    for v, (x, p) in enumerate(dist.items()):
        for y, weight in code.transitions_at(v):
            yield x, y, p * weight


def _check_code(code: Code, instance: Instance) -> None:
    if code.scope != instance.messages:
        raise InstanceValidationError(f"code must encode all messages {instance.messages}, got scope {code.scope}")
    if code.index.q != instance.q:
        raise InstanceValidationError(f"code alphabet {code.index.q} differs from instance alphabet {instance.q}")


@dataclass(frozen=True)
class DecoderSet:
    """g_i(y, x_{A_i}^t) -> x̂_i^t for every receiver, on positive-probability inputs."""

    instance: Instance
    index: TupleIndex
    sides: tuple[tuple[int, ...], ...]
    tables: tuple[dict[tuple[int, tuple[int, ...]], tuple[int, ...]], ...]

    @property
    def t(self) -> int:
        return self.index.t

    def decode(self, i: int, y: int, side: tuple[int, ...]) -> tuple[int, ...]:
        try:
            return self.tables[i - 1][(y, side)]
        except KeyError:
            raise InstanceValidationError(f"receiver {i} never sees codeword {y} with side information {side}") from None

    def estimates(self, x: tuple[int, ...], y: int) -> tuple[tuple[int, ...], ...]:
        return tuple(self.decode(i, y, self.index.project(x, self.sides[i - 1])) for i in self.instance.messages)

    def correct(self, x: tuple[int, ...], y: int) -> bool:
        for i in self.instance.messages:
            if self.decode(i, y, self.index.project(x, self.sides[i - 1])) != self.index.sequence(x, i):
                return False
        return True


def synthesize_decoders(code: Code, instance: Instance, dist: AnyDistribution, *, cap: int | None = None) -> DecoderSet:
    """Maximum-likelihood decoders; ties go to the smallest x_i^t."""
    _check_code(code, instance)
    index = code.index
    sides = tuple(tuple(sorted(instance.side(i))) for i in instance.messages)
    scores: list[dict[tuple[int, tuple[int, ...]], dict[tuple[int, ...], Fraction]]] = [
        defaultdict(lambda: defaultdict(Fraction)) for _ in instance.messages
    ]
    for x, y, p in iter_joint(code, dist, cap=cap):
        for i in instance.messages:
            key = (y, index.project(x, sides[i - 1]))
            scores[i - 1][key][index.sequence(x, i)] += p
    tables = []
    for receiver_scores in scores:
        table = {}
        for key, candidates in receiver_scores.items():
            best, best_p = None, Fraction(-1)
            for estimate in sorted(candidates):
                if candidates[estimate] > best_p:
                    best, best_p = estimate, candidates[estimate]
            table[key] = best
        tables.append(table)
    return DecoderSet(instance, index, sides, tuple(tables))


def is_zero_error_valid(code: Code, graph: BitsetGraph) -> bool:
    """Every codeword's preimage (support, for stochastic codes) is independent in Γ_t."""
    if isinstance(graph, ConfusionGraph) and graph.index != code.index:
        raise InstanceValidationError(
            f"graph over {graph.index.scope} at t={graph.t} does not match code over {code.scope} at t={code.t}"
        )
    if graph.order != code.index.size:
        raise InstanceValidationError(f"graph has {graph.order} vertices, code covers {code.index.size} tuples")
    classes: dict[int, int] = defaultdict(int)
    for v in range(code.index.size):
        for y, _ in code.transitions_at(v):
            classes[y] |= 1 << v
    for members in classes.values():
        for v in iter_bits(members):
            if graph.rows[v] & members:
                return False
    return True


def conflicting_classes(code: DeterministicCode, graph: BitsetGraph) -> list[int]:
    """Codewords whose preimage contains an edge of Γ_t."""
    out = []
    for y in code.used_codewords():
        members = mask_of(code.preimage(y))
        if any(graph.rows[v] & members for v in iter_bits(members)):
            out.append(y)
    return out


@dataclass(frozen=True)
class ValidityReport:
    p_error: Fraction
    zero_error: bool
    error_set: tuple[str, ...] = ()
    error_count: int = 0

    def __post_init__(self) -> None:
        if self.zero_error != (self.p_error == 0):
            raise InvariantViolationError(f"zero_error={self.zero_error} contradicts P_e = {self.p_error}")


def error_probability(
    code: Code,
    instance: Instance,
    dist: AnyDistribution,
    *,
    decoders: DecoderSet | None = None,
    cap: int | None = None,
    limit: int | None = None,
) -> ValidityReport:
    """Exact P_e = P(some receiver decodes wrongly) under ML decoders."""
    limit = config.ERROR_SET_LIMIT if limit is None else limit
    decoders = synthesize_decoders(code, instance, dist, cap=cap) if decoders is None else decoders
    p_error = Fraction(0)
    offenders: list[str] = []
    seen: set[tuple[int, ...]] = set()
    for x, y, p in iter_joint(code, dist, cap=cap):
        if not decoders.correct(x, y):
            p_error += p
            if x not in seen:
                seen.add(x)
                if len(offenders) < limit:
                    offenders.append(code.index.label(x))
    return ValidityReport(p_error, p_error == 0, tuple(offenders), len(seen))


def determinize_with_decoders(
    code: Code, instance: Instance, dist: AnyDistribution, *, cap: int | None = None
) -> tuple[DeterministicCode, DecoderSet]:
    """Pick, per tuple, a positive-probability codeword that the code's ML decoders get right.

    Without such a codeword the smallest one is kept.  The decoders are returned
    with the table: under them each tuple's error can only fall, so P_e does not
    go up.  Fresh ML decoders for the table carry no such guarantee, since
    per-receiver ML does not minimize the union error.
    """
    decoders = synthesize_decoders(code, instance, dist, cap=cap)
    if isinstance(code, DeterministicCode):
        return code, decoders
    table = []
    for v, x in enumerate(code.index.tuples()):
        choices = [y for y, _ in code.transitions_at(v)]
        good = [y for y in choices if decoders.correct(x, y)]
        table.append(min(good) if good else min(choices))
    return DeterministicCode(code.index, tuple(table), code.size), decoders


def determinize(code: Code, instance: Instance, dist: AnyDistribution, *, cap: int | None = None) -> DeterministicCode:
    """Deterministic table of `determinize_with_decoders`; M is unchanged."""
    if isinstance(code, DeterministicCode):
        return code
    return determinize_with_decoders(code, instance, dist, cap=cap)[0]


def good_sets(
    code: Code,
    instance: Instance,
    dist: AnyDistribution,
    known: Iterable[int],
    *,
    decoders: DecoderSet | None = None,
    cap: int | None = None,
) -> dict[tuple[int, tuple[int, ...]], frozenset[tuple[int, ...]]]:
    """G(y, x_P): the x_Q with positive probability at (y, x_P) that every receiver decodes correctly."""
    decoders = synthesize_decoders(code, instance, dist, cap=cap) if decoders is None else decoders
    index = code.index
    members = tuple(sorted(known))
    target = tuple(i for i in index.scope if i not in members)
    out: dict[tuple[int, tuple[int, ...]], set[tuple[int, ...]]] = defaultdict(set)
    for x, y, _ in iter_joint(code, dist, cap=cap):
        key = (y, index.project(x, members))
        bucket = out[key]
        if decoders.correct(x, y):
            bucket.add(index.project(x, target))
    return {key: frozenset(value) for key, value in out.items()}


def good_set(
    code: Code,
    y: int,
    x_p: tuple[int, ...],
    instance: Instance,
    dist: AnyDistribution,
    known: Iterable[int],
    *,
    decoders: DecoderSet | None = None,
) -> frozenset[tuple[int, ...]]:
    return good_sets(code, instance, dist, known, decoders=decoders).get((y, tuple(x_p)), frozenset())
