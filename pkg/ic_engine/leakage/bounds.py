"""Leakage-rate bounds from broadcast rates, and the exact identities behind them."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from ic_engine.bits import Bits, KnownRate, format_fraction
from ic_engine.coding.codes import Code, DeterministicCode
from ic_engine.coding.decoding import error_probability, good_sets, synthesize_decoders
from ic_engine.errors import InstanceValidationError, InvariantViolationError
from ic_engine.graphs.confusion import build_confusion_graph
from ic_engine.graphs.invariants import RateBracket, rate_bracket
from ic_engine.graphs.solvers import independence_number
from ic_engine.leakage.guessing import posterior_slices, prior_slices, ps_prior, resolve_capability, top_c_mass
from ic_engine.leakage.search import optimal_zero_error_leakage
from ic_engine.model.distribution import AnyDistribution, marginal, product_extend
from ic_engine.model.instance import AdversarySpec, Instance

logger = logging.getLogger(__name__)

# Float tolerance, only for comparisons that involve an externally supplied rate.
KNOWN_RATE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Interval:
    """[low, high] in bits; a missing end is unbounded on that side."""

    low: Bits | KnownRate | None
    high: Bits | KnownRate | None
    provenance: str = ""

    @property
    def pinned(self) -> bool:
        if self.low is None or self.high is None:
            return False
        if isinstance(self.low, KnownRate) or isinstance(self.high, KnownRate):
            return self.low is self.high
        return self.low == self.high

    def to_payload(self) -> dict:
        return {
            "low": self.low.to_payload() if self.low is not None else None,
            "high": self.high.to_payload() if self.high is not None else None,
            "pinned": self.pinned,
            "provenance": self.provenance,
        }


def not_above(a: Bits | KnownRate, b: Bits | KnownRate) -> bool:
    """a <= b, exact for Bits and within KNOWN_RATE_TOLERANCE once a supplied rate is involved."""
    if isinstance(a, Bits) and isinstance(b, Bits):
        return not b < a
    return a.value <= b.value + KNOWN_RATE_TOLERANCE


def best_guess_mass(dist: AnyDistribution, adversary: AdversarySpec) -> Fraction:
    """Σ_{x_P} max_{x_Q} P(x_P, x_Q) on single letters."""
    return sum((max(cell.values()) for cell in prior_slices(dist, adversary, 1).values()), Fraction(0))


@dataclass(frozen=True)
class BoundReport:
    known: tuple[int, ...]
    target: tuple[int, ...]
    best_guess_mass: Fraction
    correction: Bits
    unit_term: Bits
    vanishing_lower: Interval
    vanishing_upper: Interval
    zero_error_lower: Interval
    zero_error_upper: Interval
    notes: tuple[str, ...] = ()
    composite_rate_split: dict | None = None

    def to_payload(self) -> dict:
        return {
            "known": list(self.known),
            "target": list(self.target),
            "best_guess_mass": format_fraction(self.best_guess_mass),
            "correction_term": self.correction.to_payload(),
            "target_size_term": self.unit_term.to_payload(),
            "vanishing_error": {"lower": self.vanishing_lower.to_payload(), "upper": self.vanishing_upper.to_payload()},
            "zero_error": {"lower": self.zero_error_lower.to_payload(), "upper": self.zero_error_upper.to_payload()},
            "composite_rate_split": self.composite_rate_split,
            "notes": list(self.notes),
        }


def leakage_rate_bounds(
    instance: Instance,
    dist: AnyDistribution,
    adversary: AdversarySpec,
    bracket_q: RateBracket,
    *,
    bracket_full: RateBracket | None = None,
    bracket_p: RateBracket | None = None,
) -> BoundReport:
    """ρ(Q) - |Q|·log2 q + log2(1 / Σ_{x_P} max_{x_Q} P) <= rate <= R(Q) (vanishing error) or ρ(Q) (zero error)."""
    if bracket_q.subset != adversary.target:
        raise InstanceValidationError(f"rate bracket is for S={bracket_q.subset}, adversary targets Q={adversary.target}")
    notes: list[str] = []
    mass = best_guess_mass(dist, adversary)
    correction = Bits.log2(1 / mass)
    unit_term = Bits.log2(instance.q ** len(adversary.target))
    if instance.q > 2:
        notes.append(f"|Q| is taken as |Q|·log2 q = {unit_term} bits; the symbol-count reading differs for q > 2")
        logger.warning("q = %s > 2: reading |Q| in the lower bound as |Q|·log2 q bits", instance.q)

    shift = correction - unit_term
    lower = Interval(
        bracket_q.certified_lower + shift,
        bracket_q.certified_upper + shift,
        "ρ(Q) pinned" if bracket_q.pinned else "ρ(Q) only bracketed; endpoints follow the bracket",
    )
    rho_q = Interval(
        bracket_q.certified_lower,
        bracket_q.certified_upper,
        "certified: MAIS bound = coloring bound" if bracket_q.pinned else "MAIS lower, min_t log2 χ(Γ_t(Q))/t upper",
    )
    if bracket_q.known is not None:
        vanishing_upper = Interval(
            bracket_q.known,
            bracket_q.known,
            f"R(Q) supplied externally{': ' + bracket_q.known.citation if bracket_q.known.citation else ''}",
        )
    else:
        vanishing_upper = Interval(None, bracket_q.certified_upper, "R(Q) not supplied; R(Q) <= ρ(Q) <= certified upper")
        notes.append("R(Q) unknown: vanishing-error upper bound reported as the ρ(Q) upper end")

    if lower.low is not None and vanishing_upper.high is not None and not not_above(lower.low, vanishing_upper.high):
        raise InvariantViolationError(f"vanishing-error bounds are inverted: {lower.low} > {vanishing_upper.high}")
    if not not_above(lower.low, rho_q.high):
        raise InvariantViolationError(f"zero-error bounds are inverted: {lower.low} > {rho_q.high}")

    split = None
    if bracket_full is not None and bracket_p is not None:
        pinned = bracket_full.pinned and bracket_p.pinned and bracket_q.pinned
        split = {
            "pinned": pinned,
            "rho_full": bracket_full.certified_upper.to_payload(),
            "rho_known": bracket_p.certified_upper.to_payload(),
            "rho_target": bracket_q.certified_upper.to_payload(),
            "holds": bool(
                pinned and bracket_full.certified_upper == bracket_p.certified_upper + bracket_q.certified_upper
            ),
        }
        if split["holds"]:
            notes.append("ρ = ρ(P) + ρ(Q): the composite code achieves both the broadcast rate and the leakage bound")
    return BoundReport(
        known=adversary.known_sorted,
        target=adversary.target,
        best_guess_mass=mass,
        correction=correction,
        unit_term=unit_term,
        vanishing_lower=lower,
        vanishing_upper=vanishing_upper,
        zero_error_lower=lower,
        zero_error_upper=rho_q,
        notes=tuple(notes),
        composite_rate_split=split,
    )


# ---------------------------
# Uniform messages
# ---------------------------
@dataclass(frozen=True)
class SurrogateComparison:
    t: int
    optimal_leakage: Bits
    per_symbol: Bits
    log_chi_per_symbol: Bits

    @property
    def agrees(self) -> bool:
        return self.per_symbol == self.log_chi_per_symbol

    def to_payload(self) -> dict:
        return {
            "t": self.t,
            "optimal_leakage": self.optimal_leakage.to_payload(),
            "optimal_leakage_per_symbol": self.per_symbol.to_payload(),
            "log_chi_target_per_symbol": self.log_chi_per_symbol.to_payload(),
            "agrees": self.agrees,
        }


@dataclass(frozen=True)
class UniformReport:
    correction: Bits
    bracket: RateBracket
    rows: tuple[SurrogateComparison, ...] = field(default_factory=tuple)

    def to_payload(self) -> dict:
        return {
            "correction_term": self.correction.to_payload(),
            "rho_target": self.bracket.to_payload(),
            "leakage_surrogates": [row.to_payload() for row in self.rows],
        }


def uniform_surrogate_report(
    instance: Instance,
    dist: AnyDistribution,
    adversary: AdversarySpec,
    t_max: int = 1,
    *,
    budget: int | None = None,
    vertex_cap: int | None = None,
) -> UniformReport:
    """Uniform messages: the correction cancels |Q|·log2 q, and L*/t is set against log2 χ(Γ_t(Q))/t."""
    if not dist.is_uniform():
        raise InstanceValidationError("the uniform-message report needs a uniform distribution")
    mass = best_guess_mass(dist, adversary)
    correction = Bits.log2(1 / mass)
    if not correction == Bits.log2(instance.q ** len(adversary.target)):
        raise InvariantViolationError(f"uniform correction {correction} differs from |Q|·log2 q")
    bracket = rate_bracket(instance, adversary.target, t_max, vertex_cap=vertex_cap)
    rows = []
    for t in range(1, t_max + 1):
        result = optimal_zero_error_leakage(instance, dist, adversary, t, budget=budget, vertex_cap=vertex_cap)
        rows.append(
            SurrogateComparison(
                t=t,
                optimal_leakage=result.report.bits,
                per_symbol=result.report.per_symbol,
                log_chi_per_symbol=bracket.row(t).log_chi,
            )
        )
    return UniformReport(correction, bracket, tuple(rows))


# ---------------------------
# Exact identities and inequalities
# ---------------------------
@dataclass(frozen=True)
class ProductIdentity:
    lhs: Fraction
    rhs: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs


def product_identity_check(
    dist: AnyDistribution, first: tuple[int, ...] | list[int], second: tuple[int, ...] | list[int], t: int
) -> ProductIdentity:
    """Σ_{x_A^t} max_{x_B^t} P^t(x_A^t, x_B^t) against (Σ_{x_A} max_{x_B} P(x_A, x_B))^t."""
    a, b = tuple(sorted(set(first))), tuple(sorted(set(second)))
    if set(a) & set(b):
        raise InstanceValidationError(f"A={a} and B={b} overlap")
    joint = marginal(dist, a + b)

    def split_mass(table: AnyDistribution) -> Fraction:
        best: dict[tuple[int, ...], Fraction] = {}
        index = table.index
        for x, p in table.items():
            key = index.project(x, a)
            if p > best.get(key, Fraction(0)):
                best[key] = p
        return sum(best.values(), Fraction(0))

    lhs = split_mass(product_extend(joint, t, materialize=True))  # type: ignore[arg-type]
    rhs = split_mass(joint) ** t
    return ProductIdentity(lhs, rhs)


@dataclass(frozen=True)
class ConverseReport:
    t: int
    c: int
    alpha: int
    p_error: Fraction
    ps_posterior: Fraction
    ps_prior: Fraction
    good_mass: Fraction
    largest_good_set: int
    violating_observations: tuple[str, ...] = ()
    composite_target_size: int | None = None

    @property
    def success_bound(self) -> Fraction:
        return self.c * (1 - self.p_error) / self.alpha

    @property
    def success_bound_holds(self) -> bool:
        return self.ps_posterior >= self.success_bound

    @property
    def good_mass_holds(self) -> bool:
        return self.good_mass == 1 - self.p_error

    @property
    def good_set_holds(self) -> bool:
        return self.largest_good_set <= self.alpha and not self.violating_observations

    @property
    def composite_bound_holds(self) -> bool | None:
        if self.composite_target_size is None:
            return None
        return self.ps_posterior <= self.composite_target_size * self.ps_prior

    @property
    def holds(self) -> bool:
        return (
            self.success_bound_holds
            and self.good_mass_holds
            and self.good_set_holds
            and self.composite_bound_holds is not False
        )

    def to_payload(self) -> dict:
        return {
            "t": self.t,
            "c": self.c,
            "alpha_target": self.alpha,
            "p_error": format_fraction(self.p_error),
            "ps_posterior": format_fraction(self.ps_posterior),
            "success_bound": format_fraction(self.success_bound),
            "success_bound_holds": self.success_bound_holds,
            "good_mass": format_fraction(self.good_mass),
            "good_mass_holds": self.good_mass_holds,
            "largest_good_set": self.largest_good_set,
            "good_set_holds": self.good_set_holds,
            "violating_observations": list(self.violating_observations),
            "composite_bound_holds": self.composite_bound_holds,
        }


def converse_inequality_check(
    code: Code,
    instance: Instance,
    dist: AnyDistribution,
    adversary: AdversarySpec,
    *,
    claims_zero_error: bool | None = None,
    alpha: int | None = None,
    vertex_cap: int | None = None,
) -> ConverseReport:
    """Checks, for one code: the good-set mass equals 1 - P_e, every good set fits in α(Γ_t(Q)),
    ps_posterior >= c(1 - P_e)/α, and L <= log2 M2 for composite codes.

    For a code that claims zero error, every observation slice {x_Q : P(y, x_P, x_Q) > 0}
    must also fit in α(Γ_t(Q)).
    """
    t = code.t
    if alpha is None:
        alpha = independence_number(build_confusion_graph(instance, adversary.target, t, cap=vertex_cap)).value
    c, _ = resolve_capability(instance, adversary, t, alpha=alpha)
    decoders = synthesize_decoders(code, instance, dist)
    validity = error_probability(code, instance, dist, decoders=decoders)
    slices = posterior_slices(code, dist, adversary)
    goods = good_sets(code, instance, dist, adversary.known, decoders=decoders)
    good_mass = sum(
        (cell[x_q] for key, cell in slices.items() for x_q in goods.get(key, ())),
        Fraction(0),
    )
    posterior = sum((top_c_mass(cell.values(), c) for cell in slices.values()), Fraction(0))
    if claims_zero_error is None:
        claims_zero_error = isinstance(code, DeterministicCode) and code.claims_zero_error
    violations: list[str] = []
    if claims_zero_error:
        index = code.index
        known_index = index.sub_index(adversary.known_sorted)
        for (y, x_p), cell in sorted(slices.items()):
            if len(cell) > alpha:
                violations.append(f"y={y}, x_P={known_index.label(x_p)}: {len(cell)} tuples > α = {alpha}")
    parts = code.parts if isinstance(code, DeterministicCode) else None
    return ConverseReport(
        t=t,
        c=c,
        alpha=alpha,
        p_error=validity.p_error,
        ps_posterior=posterior,
        ps_prior=ps_prior(dist, adversary, t, c),
        good_mass=good_mass,
        largest_good_set=max((len(members) for members in goods.values()), default=0),
        violating_observations=tuple(violations),
        composite_target_size=parts[1] if parts is not None else None,
    )
