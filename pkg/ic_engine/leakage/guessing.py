"""Guessing success before and after the broadcast, and the leakage L between them."""

from __future__ import annotations

import heapq
import logging
from collections import defaultdict
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction

from ic_engine.bits import Bits, format_fraction
from ic_engine.coding.codes import Code
from ic_engine.coding.decoding import extend_to, iter_joint
from ic_engine.errors import InstanceValidationError, InvariantViolationError
from ic_engine.graphs.confusion import build_confusion_graph
from ic_engine.graphs.solvers import independence_number
from ic_engine.model.distribution import AnyDistribution, Distribution
from ic_engine.model.instance import AdversarySpec, Instance

logger = logging.getLogger(__name__)

Slices = dict[tuple, dict[tuple[int, ...], Fraction]]


def top_c_mass(values: Distribution | Iterable[Fraction], c: int) -> Fraction:
    """Sum of the c largest probabilities (all of them when c exceeds the support)."""
    if c < 1:
        raise InstanceValidationError(f"number of guesses must be positive, got {c}")
    probs = values.probs if isinstance(values, Distribution) else list(values)
    return sum(heapq.nlargest(c, probs), Fraction(0))


def resolve_capability(
    instance: Instance,
    adversary: AdversarySpec,
    t: int,
    *,
    strict: bool = False,
    alpha: int | None = None,
    vertex_cap: int | None = None,
    budget: int | None = None,
) -> tuple[int, int | None]:
    """c(t) checked against α(Γ_t(Q)); α is only computed when c(t) > 1."""
    c = adversary.capability.at(t)
    if c > 1 and alpha is None:
        graph = build_confusion_graph(instance, adversary.target, t, cap=vertex_cap)
        alpha = independence_number(graph, budget=budget).value
    return adversary.capability.resolve(t, alpha, strict=strict), alpha


def _check_adversary(instance: Instance, adversary: AdversarySpec) -> None:
    if adversary.n != instance.n:
        raise InstanceValidationError(f"adversary is defined for n={adversary.n}, instance has n={instance.n}")


def prior_slices(dist: AnyDistribution, adversary: AdversarySpec, t: int) -> Slices:
    """x_P -> {x_Q: P(x_P, x_Q)} over sequences of length t."""
    dist = extend_to(dist, t)
    index = dist.index
    known, target = adversary.known_sorted, adversary.target
    out: Slices = defaultdict(dict)
    for x, p in dist.items():
        out[index.project(x, known)][index.project(x, target)] = p
    return out


def posterior_slices(code: Code, dist: AnyDistribution, adversary: AdversarySpec, *, cap: int | None = None) -> Slices:
    """(y, x_P) -> {x_Q: P(y, x_P, x_Q)}."""
    index = code.index
    known, target = adversary.known_sorted, adversary.target
    out: Slices = defaultdict(lambda: defaultdict(Fraction))
    for x, y, p in iter_joint(code, dist, cap=cap):
        out[(y, index.project(x, known))][index.project(x, target)] += p
    return out


def ps_prior(dist: AnyDistribution, adversary: AdversarySpec, t: int, c: int | None = None) -> Fraction:
    """P_s(X_P^t) = Σ_{x_P} P(x_P) · top-c mass of P(· | x_P)."""
    c = adversary.capability.at(t) if c is None else c
    return sum((top_c_mass(cell.values(), c) for cell in prior_slices(dist, adversary, t).values()), Fraction(0))


def ps_posterior(
    code: Code, dist: AnyDistribution, adversary: AdversarySpec, c: int | None = None, *, cap: int | None = None
) -> Fraction:
    """P_s(X_P^t, Y) = Σ_{y, x_P} P(y, x_P) · top-c mass of P(· | y, x_P)."""
    c = adversary.capability.at(code.t) if c is None else c
    slices = posterior_slices(code, dist, adversary, cap=cap)
    return sum((top_c_mass(cell.values(), c) for cell in slices.values()), Fraction(0))


def posterior_guesses(
    code: Code, dist: AnyDistribution, adversary: AdversarySpec, c: int | None = None, *, cap: int | None = None
) -> dict[tuple[int, tuple[int, ...]], tuple[tuple[int, ...], ...]]:
    """The adversary's c best guesses of x_Q for every observation (y, x_P); ties by tuple order."""
    c = adversary.capability.at(code.t) if c is None else c
    out = {}
    for key, cell in sorted(posterior_slices(code, dist, adversary, cap=cap).items()):
        ranked = sorted(cell.items(), key=lambda item: (-item[1], item[0]))
        out[key] = tuple(x_q for x_q, _ in ranked[:c])
    return out


@dataclass(frozen=True)
class LeakageReport:
    ps_prior: Fraction
    ps_posterior: Fraction
    t: int
    c_used: int
    code_size: int
    known: tuple[int, ...] = ()
    target: tuple[int, ...] = ()
    notions: tuple[str, ...] = ()
    code_label: str = ""

    def __post_init__(self) -> None:
        if not 0 < self.ps_prior <= self.ps_posterior <= 1:
            raise InvariantViolationError(
                f"expected 0 < ps_prior <= ps_posterior <= 1, got {self.ps_prior} and {self.ps_posterior}"
            )

    @property
    def ratio(self) -> Fraction:
        return self.ps_posterior / self.ps_prior

    @property
    def bits(self) -> Bits:
        return Bits.log2(self.ratio)

    @property
    def per_symbol(self) -> Bits:
        return self.bits.scale(Fraction(1, self.t))

    def to_payload(self) -> dict:
        return {
            "code": self.code_label,
            "t": self.t,
            "known": list(self.known),
            "target": list(self.target),
            "c_used": self.c_used,
            "codebook_size": self.code_size,
            "ps_prior": format_fraction(self.ps_prior),
            "ps_posterior": format_fraction(self.ps_posterior),
            "ratio": format_fraction(self.ratio),
            "leakage": self.bits.to_payload(),
            "leakage_per_symbol": self.per_symbol.to_payload(),
            "coincides_with": list(self.notions),
        }


def leakage_notions(c: int, dist: AnyDistribution) -> tuple[str, ...]:
    if c != 1:
        return ()
    if dist.is_uniform():
        return ("min-entropy leakage", "maximal leakage")
    return ("min-entropy leakage",)


def leakage(
    code: Code,
    instance: Instance,
    dist: AnyDistribution,
    adversary: AdversarySpec,
    *,
    strict: bool = False,
    code_label: str = "",
    cap: int | None = None,
    vertex_cap: int | None = None,
    budget: int | None = None,
) -> LeakageReport:
    """L = log2(ps_posterior / ps_prior), exact ratio retained."""
    _check_adversary(instance, adversary)
    t = code.t
    c, _ = resolve_capability(instance, adversary, t, strict=strict, vertex_cap=vertex_cap, budget=budget)
    prior = ps_prior(dist, adversary, t, c)
    posterior = ps_posterior(code, dist, adversary, c, cap=cap)
    report = LeakageReport(
        ps_prior=prior,
        ps_posterior=posterior,
        t=t,
        c_used=c,
        code_size=code.size,
        known=adversary.known_sorted,
        target=adversary.target,
        notions=leakage_notions(c, dist),
        code_label=code_label,
    )
    logger.info("leakage of %s at t=%s, c=%s: %s bits", code_label or "code", t, c, report.bits.value)
    return report
