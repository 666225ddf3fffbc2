"""Index-coding instances, adversaries and the canonical tuple numbering."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from ic_engine.errors import InstanceValidationError, InvariantViolationError

logger = logging.getLogger(__name__)

EMPTY_LABEL = "-"


def normalize_subset(subset: Iterable[int], n: int) -> tuple[int, ...]:
    """Sorted, de-duplicated 1-based message indices, all within [n]."""
    members = tuple(sorted({int(item) for item in subset}))
    for item in members:
        if item < 1 or item > n:
            raise InstanceValidationError(f"message index {item} is outside [1, {n}]")
    return members


# --------------------------------------------------
# TUPLE NUMBERING
# --------------------------------------------------
@dataclass(frozen=True)
class TupleIndex:
    """Bijection between X_S^t and {0, ..., q^(t|S|) - 1}.

    Tuples are flat: the t symbols of the first message of `scope`, then the t
    symbols of the second, and so on.  The first digit is the most significant,
    so lexicographic tuple order and index order agree.
    """

    scope: tuple[int, ...]
    q: int
    t: int = 1

    def __post_init__(self) -> None:
        if self.q < 2:
            raise InstanceValidationError(f"alphabet size must be at least 2, got {self.q}")
        if self.t < 1:
            raise InstanceValidationError(f"sequence length must be positive, got {self.t}")
        if tuple(sorted(set(self.scope))) != tuple(self.scope):
            raise InstanceValidationError(f"scope must be sorted and duplicate-free: {self.scope}")

    @property
    def width(self) -> int:
        return len(self.scope) * self.t

    @property
    def size(self) -> int:
        return self.q**self.width

    def index_of_tuple(self, x: tuple[int, ...]) -> int:
        if len(x) != self.width:
            raise InstanceValidationError(f"tuple {x} has {len(x)} symbols, expected {self.width}")
        index = 0
        for symbol in x:
            if symbol < 0 or symbol >= self.q:
                raise InstanceValidationError(f"symbol {symbol} outside alphabet of size {self.q}")
            index = index * self.q + symbol
        return index

    def tuple_of_index(self, index: int) -> tuple[int, ...]:
        if index < 0 or index >= self.size:
            raise InstanceValidationError(f"index {index} outside [0, {self.size})")
        digits = [0] * self.width
        for position in range(self.width - 1, -1, -1):
            index, digits[position] = divmod(index, self.q)
        return tuple(digits)

    def tuples(self) -> Iterator[tuple[int, ...]]:
        """All tuples in index order."""
        return itertools.product(range(self.q), repeat=self.width)

    def rank(self, message: int) -> int:
        try:
            return self.scope.index(message)
        except ValueError:
            raise InstanceValidationError(f"message {message} is not in scope {self.scope}") from None

    def sequence(self, x: tuple[int, ...], message: int) -> tuple[int, ...]:
        start = self.rank(message) * self.t
        return x[start : start + self.t]

    def project(self, x: tuple[int, ...], subset: Iterable[int]) -> tuple[int, ...]:
        """x restricted to `subset` (taken in sorted order), as a flat tuple."""
        out: list[int] = []
        for message in sorted(subset):
            out.extend(self.sequence(x, message))
        return tuple(out)

    def symbol_slice(self, x: tuple[int, ...], j: int) -> tuple[int, ...]:
        """x_{S,j}: the j-th symbol (0-based) of every message in scope."""
        return tuple(x[k * self.t + j] for k in range(len(self.scope)))

    def from_symbol_slices(self, slices: Iterable[tuple[int, ...]]) -> tuple[int, ...]:
        """Inverse of `symbol_slice` over j = 0..t-1."""
        columns = list(slices)
        if len(columns) != self.t:
            raise InstanceValidationError(f"expected {self.t} symbol slices, got {len(columns)}")
        return tuple(columns[j][k] for k in range(len(self.scope)) for j in range(self.t))

    def split_time(self, x: tuple[int, ...], t1: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Split x into its first t1 symbols and the remaining t - t1, per message."""
        if not 0 < t1 < self.t:
            raise InstanceValidationError(f"time split {t1} must lie strictly inside (0, {self.t})")
        head: list[int] = []
        tail: list[int] = []
        for k in range(len(self.scope)):
            sequence = x[k * self.t : (k + 1) * self.t]
            head.extend(sequence[:t1])
            tail.extend(sequence[t1:])
        return tuple(head), tuple(tail)

    def join_time(self, head: tuple[int, ...], tail: tuple[int, ...], t1: int) -> tuple[int, ...]:
        """Inverse of `split_time`."""
        t2 = self.t - t1
        out: list[int] = []
        for k in range(len(self.scope)):
            out.extend(head[k * t1 : (k + 1) * t1])
            out.extend(tail[k * t2 : (k + 1) * t2])
        return tuple(out)

    def sub_index(self, subset: Iterable[int]) -> TupleIndex:
        return TupleIndex(tuple(sorted(subset)), self.q, self.t)

    def label(self, x: tuple[int, ...]) -> str:
        if not x:
            return EMPTY_LABEL
        glue = "," if self.q > 10 else ""
        if self.t == 1:
            return glue.join(str(symbol) for symbol in x)
        chunks = [x[k * self.t : (k + 1) * self.t] for k in range(len(self.scope))]
        return "|".join(glue.join(str(symbol) for symbol in chunk) for chunk in chunks)

    def parse_label(self, label: str) -> tuple[int, ...]:
        text = (label or "").strip()
        if text == EMPTY_LABEL and self.width == 0:
            return ()
        # t = 1 labels carry no message separator: one chunk of |S| symbols
        if self.t > 1:
            chunks, per_chunk = text.split("|"), self.t
            if len(chunks) != len(self.scope):
                raise InstanceValidationError(f"tuple string {label!r} does not have {len(self.scope)} message parts")
        else:
            chunks, per_chunk = [text], self.width
        symbols: list[int] = []
        for chunk in chunks:
            parts = chunk.split(",") if self.q > 10 else list(chunk)
            if len(parts) != per_chunk:
                raise InstanceValidationError(f"tuple string {label!r} does not have {per_chunk} symbols per part")
            try:
                symbols.extend(int(part) for part in parts)
            except ValueError:
                raise InstanceValidationError(f"tuple string {label!r} contains a non-numeric symbol") from None
        x = tuple(symbols)
        self.index_of_tuple(x)
        return x


# --------------------------------------------------
# INSTANCE
# --------------------------------------------------
@dataclass(frozen=True)
class Instance:
    """n receivers, common alphabet of size q, side-information sets A_i (1-based)."""

    n: int
    q: int
    side_info: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InstanceValidationError(f"n must be positive, got {self.n}")
        if self.q < 2:
            raise InstanceValidationError(f"q must be at least 2, got {self.q}")
        if len(self.side_info) != self.n:
            raise InstanceValidationError(f"expected {self.n} side-information sets, got {len(self.side_info)}")
        for i, known in enumerate(self.side_info, start=1):
            if i in known:
                raise InstanceValidationError(f"receiver {i} lists its own message in A_{i}")
            for j in known:
                if j < 1 or j > self.n:
                    raise InstanceValidationError(f"A_{i} contains {j}, which is outside [1, {self.n}]")

    @classmethod
    def from_lists(cls, n: int, q: int, side_info: Iterable[Iterable[int]]) -> Instance:
        return cls(n=int(n), q=int(q), side_info=tuple(frozenset(int(j) for j in row) for row in side_info))

    @property
    def messages(self) -> tuple[int, ...]:
        return tuple(range(1, self.n + 1))

    def side(self, i: int, within: Iterable[int] | None = None) -> frozenset[int]:
        """A_i, or A_i ∩ S when `within` is given."""
        known = self.side_info[i - 1]
        return known if within is None else known & frozenset(within)

    def subset(self, subset: Iterable[int] | None) -> tuple[int, ...]:
        return self.messages if subset is None else normalize_subset(subset, self.n)

    def tuple_index(self, subset: Iterable[int] | None = None, t: int = 1) -> TupleIndex:
        return TupleIndex(self.subset(subset), self.q, t)

    def describe(self, subset: Iterable[int] | None = None) -> str:
        """The (i|A_i ∩ S) sequence, e.g. "(1|-),(2|3),(3|2)"."""
        members = self.subset(subset)
        parts = []
        for i in members:
            known = sorted(self.side(i, members))
            parts.append(f"({i}|{','.join(str(j) for j in known) if known else '-'})")
        return ",".join(parts)


# --------------------------------------------------
# ADVERSARY
# --------------------------------------------------
@dataclass(frozen=True)
class GuessBudget:
    """c(t): how many guesses the adversary makes per observation.

    Either a constant or a table {t: c(t)}; a table is extended to the right as
    a step function (c(t) = value at the largest listed t' <= t).
    """

    constant: int | None = 1
    table: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if (self.constant is None) == (not self.table):
            raise InstanceValidationError("guessing capability must be exactly one of a constant or a table")
        if self.constant is not None and self.constant < 1:
            raise InstanceValidationError(f"guessing capability must be positive, got {self.constant}")
        previous = 0
        for t, value in self.table:
            if t < 1 or value < 1:
                raise InstanceValidationError(f"capability table entries must be positive, got ({t}, {value})")
            if value < previous:
                raise InstanceValidationError("guessing capability c(t) must be non-decreasing in t")
            previous = value
        if self.table and [t for t, _ in self.table] != sorted({t for t, _ in self.table}):
            raise InstanceValidationError("capability table must list each t once, in increasing order")

    @classmethod
    def of(cls, spec: int | Mapping[int, int] | None) -> GuessBudget:
        if spec is None:
            return cls()
        if isinstance(spec, Mapping):
            return cls(constant=None, table=tuple(sorted((int(t), int(c)) for t, c in spec.items())))
        return cls(constant=int(spec))

    @property
    def form(self) -> str:
        return "constant" if self.constant is not None else "table"

    def at(self, t: int) -> int:
        if self.constant is not None:
            return self.constant
        applicable = [value for key, value in self.table if key <= t]
        if not applicable:
            raise InstanceValidationError(f"capability table has no entry at or below t={t}")
        return applicable[-1]

    def resolve(self, t: int, alpha: int | None = None, *, strict: bool = False) -> int:
        """c(t), checked against α(Γ_t(Q)) when α is known.

        A violation is an error in strict mode; otherwise c(t) is clamped to α.
        """
        value = self.at(t)
        if alpha is None or value <= alpha:
            return value
        if strict:
            raise InvariantViolationError(f"c({t}) = {value} exceeds α(Γ_{t}(Q)) = {alpha}")
        logger.warning("c(%s) = %s exceeds α(Γ_t(Q)) = %s; clamping to α (guessing becomes trivial)", t, value, alpha)
        return alpha

    def to_payload(self) -> int | dict[str, int]:
        if self.constant is not None:
            return self.constant
        return {str(t): value for t, value in self.table}


@dataclass(frozen=True)
class AdversarySpec:
    """Knows X_P, guesses X_Q with Q = [n] \\ P."""

    n: int
    known: frozenset[int] = field(default_factory=frozenset)
    capability: GuessBudget = field(default_factory=GuessBudget)

    def __post_init__(self) -> None:
        normalize_subset(self.known, self.n)
        if len(self.known) >= self.n:
            raise InstanceValidationError("the adversary must have at least one message left to guess (Q is empty)")

    @classmethod
    def build(
        cls,
        n: int,
        known: Iterable[int] = (),
        capability: int | Mapping[int, int] | GuessBudget | None = None,
    ) -> AdversarySpec:
        budget = capability if isinstance(capability, GuessBudget) else GuessBudget.of(capability)
        return cls(n=n, known=frozenset(normalize_subset(known, n)), capability=budget)

    @property
    def target(self) -> tuple[int, ...]:
        return tuple(i for i in range(1, self.n + 1) if i not in self.known)

    @property
    def known_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.known))
