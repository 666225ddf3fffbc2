"""End-to-end verification suite: oracle cross-checks and exact identities."""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ic_engine.bits import Bits, KnownRate
from ic_engine.coding.codes import DeterministicCode, StochasticCode, coloring_code, identity_code, refine_code
from ic_engine.coding.decoding import determinize_with_decoders, error_probability, is_zero_error_valid
from ic_engine.errors import IndexCodingError
from ic_engine.graphs.confusion import build_confusion_graph, check_vertex_transitive, confusable
from ic_engine.graphs.invariants import rate_bracket
from ic_engine.graphs.solvers import chromatic_number, independence_number
from ic_engine.leakage.bounds import converse_inequality_check, leakage_rate_bounds, not_above, product_identity_check
from ic_engine.leakage.guessing import leakage, ps_posterior
from ic_engine.leakage.search import optimal_zero_error_leakage
from ic_engine.model.distribution import Distribution
from ic_engine.model.instance import AdversarySpec, Instance
from ic_engine.model.random_cases import (
    disjoint_splits,
    random_adversary,
    random_code,
    random_distribution,
    random_instance,
    random_stochastic_code,
)
from services.documents import LoadedInstance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationSummary:
    checks: list[CheckResult] = field(default_factory=list)

    def record(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(CheckResult(name, bool(passed), detail))
        if not passed:
            logger.warning("check failed: %s %s", name, detail)

    def run(self, name: str, check: Callable[[], tuple[bool, str] | bool]) -> None:
        """Run one check; engine errors count as failures, not crashes."""
        try:
            outcome = check()
        except IndexCodingError as exc:
            self.record(name, False, f"{type(exc).__name__}: {exc.detail}")
            return
        passed, detail = outcome if isinstance(outcome, tuple) else (outcome, "")
        self.record(name, passed, detail)

    def extend(self, other: VerificationSummary) -> None:
        self.checks.extend(other.checks)

    @property
    def failures(self) -> list[CheckResult]:
        return [check for check in self.checks if not check.passed]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_payload(self) -> dict:
        return {
            "passed": self.passed,
            "total": len(self.checks),
            "failed": len(self.failures),
            "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in self.checks],
        }


# ---------------------------
# Individual checks
# ---------------------------
def graph_matches_predicate(instance: Instance, t: int = 1) -> tuple[bool, str]:
    graph = build_confusion_graph(instance, None, t)
    index = graph.index
    tuples = list(index.tuples())
    for u, v in itertools.combinations(range(graph.order), 2):
        if graph.adjacent(u, v) != confusable(tuples[u], tuples[v], instance, None, t):
            return False, f"edge mismatch at {index.label(tuples[u])} -- {index.label(tuples[v])}"
    return True, f"{graph.order} vertices, {graph.edge_count()} edges"


def code_checks(
    summary: VerificationSummary,
    label: str,
    code: DeterministicCode,
    instance: Instance,
    dist: Distribution,
    adversary: AdversarySpec,
    alpha: int | None = None,
) -> None:
    """Good-set mass, good-set size, success bound, composite bound and claimed validity for one code."""
    try:
        report = converse_inequality_check(code, instance, dist, adversary, alpha=alpha)
    except IndexCodingError as exc:
        summary.record(f"converse checks [{label}]", False, exc.detail)
        return
    summary.record(
        f"good-set mass equals 1 - P_e [{label}]",
        report.good_mass_holds,
        f"mass {report.good_mass}, 1 - P_e = {1 - report.p_error}",
    )
    summary.record(
        f"good sets fit in α(Γ_t(Q)) [{label}]",
        report.good_set_holds,
        "; ".join(report.violating_observations) or f"largest {report.largest_good_set} <= α = {report.alpha}",
    )
    summary.record(
        f"posterior success >= c(1 - P_e)/α [{label}]",
        report.success_bound_holds,
        f"{report.ps_posterior} vs {report.success_bound}",
    )
    if report.composite_bound_holds is not None:
        summary.record(f"composite leakage <= log2 M2 [{label}]", report.composite_bound_holds)
    if code.claims_zero_error and code.t == 1:
        graph = build_confusion_graph(instance, None, code.t)
        summary.record(f"claimed zero-error code is a proper colouring [{label}]", is_zero_error_valid(code, graph))
    summary.run(f"leakage is non-negative [{label}]", lambda: leakage(code, instance, dist, adversary).bits >= Bits.zero())


def search_checks(summary: VerificationSummary, label: str, instance: Instance, dist: Distribution) -> None:
    """Uniform messages, nothing known, one guess: every enumerated code obeys the converse chain and L* = log2 χ."""
    adversary = AdversarySpec.build(instance.n, ())
    alpha = independence_number(build_confusion_graph(instance, adversary.target, 1)).value
    violations: list[str] = []

    def visit(code: DeterministicCode, _posterior: Fraction) -> None:
        report = converse_inequality_check(code, instance, dist, adversary, alpha=alpha)
        if not report.holds:
            violations.append(" ".join(str(y) for y in code.table))

    try:
        result = optimal_zero_error_leakage(instance, dist, adversary, 1, prune=False, visitor=visit)
    except IndexCodingError as exc:
        summary.record(f"optimal zero-error search [{label}]", False, exc.detail)
        return
    summary.record(
        f"converse chain holds on every enumerated code [{label}]",
        not violations,
        f"{result.codebooks_visited} codes" if not violations else f"violations: {violations[:5]}",
    )
    summary.record(
        f"optimal zero-error leakage equals log2 χ(Γ_1) [{label}]",
        result.report.bits == Bits.log2(result.chromatic),
        f"L* = {result.report.bits}, χ = {result.chromatic}",
    )


def product_identity_checks(summary: VerificationSummary, label: str, dist: Distribution, t_values: Sequence[int]) -> None:
    failures = []
    for a, b in disjoint_splits(dist.scope):
        for t in t_values:
            check = product_identity_check(dist, a, b, t)
            if not check.holds:
                failures.append(f"A={a} B={b} t={t}: {check.lhs} != {check.rhs}")
    summary.record(f"split-mass product identity [{label}]", not failures, "; ".join(failures[:5]))


def bounds_consistency(
    instance: Instance, dist: Distribution, adversary: AdversarySpec, known_rate: KnownRate | None = None
) -> tuple[bool, str]:
    """Relations every bound report must satisfy; a supplied R(Q) may not exceed the zero-error upper bound."""
    bracket = rate_bracket(instance, adversary.target, 1, known_rate)
    report = leakage_rate_bounds(instance, dist, adversary, bracket)
    failures = []
    if not not_above(report.vanishing_lower.low, report.zero_error_upper.high):
        failures.append(f"lower {report.vanishing_lower.low} > zero-error upper {report.zero_error_upper.high}")
    if bracket.certified_upper < bracket.certified_lower:
        failures.append(f"MAIS bound {bracket.certified_lower} > certified upper {bracket.certified_upper}")
    for name, interval in (("vanishing lower", report.vanishing_lower), ("zero-error upper", report.zero_error_upper)):
        if interval.pinned != bracket.pinned:
            failures.append(f"{name} pinned={interval.pinned} but ρ(Q) bracket pinned={bracket.pinned}")
    if known_rate is not None and not not_above(report.vanishing_upper.high, report.zero_error_upper.high):
        failures.append(f"R(Q) = {known_rate} exceeds the zero-error upper {report.zero_error_upper.high}")
    if failures:
        return False, "; ".join(failures)
    return True, f"lower {report.vanishing_lower.low}, zero-error upper {report.zero_error_upper.high}"


def determinize_check(
    summary: VerificationSummary, label: str, code: StochasticCode, instance: Instance, dist: Distribution
) -> None:
    def check() -> tuple[bool, str]:
        stochastic = error_probability(code, instance, dist).p_error
        deterministic, decoders = determinize_with_decoders(code, instance, dist)
        det_error = error_probability(deterministic, instance, dist, decoders=decoders).p_error
        return det_error <= stochastic and deterministic.size == code.size, f"{det_error} <= {stochastic}"

    summary.run(f"determinization never increases P_e [{label}]", check)


# ---------------------------
# Suites
# ---------------------------
def verify_loaded(loaded: LoadedInstance, codes: Sequence[tuple[str, DeterministicCode]] = ()) -> VerificationSummary:
    summary = VerificationSummary()
    instance, dist, adversary = loaded.instance, loaded.distribution, loaded.adversary
    label = loaded.name or (loaded.source.stem if loaded.source else "instance")

    summary.run(f"confusion graph matches the predicate [{label}]", lambda: graph_matches_predicate(instance))
    graph = build_confusion_graph(instance)
    summary.run(f"value translations are automorphisms [{label}]", lambda: check_vertex_transitive(graph))

    summary.run(
        f"rate brackets and leakage bounds are consistent [{label}]",
        lambda: bounds_consistency(instance, dist, adversary, loaded.known_rate),
    )
    alpha = independence_number(build_confusion_graph(instance, adversary.target, 1)).value
    for name, code in codes:
        code_checks(summary, f"{label}/{name}", code, instance, dist, adversary, alpha if code.t == 1 else None)
    product_identity_checks(summary, label, dist, (1, 2))

    coloring = chromatic_number(graph)
    mixed = StochasticCode.mixture([coloring_code(graph.index, coloring.coloring), identity_code(instance)], ["1/2", "1/2"])
    determinize_check(summary, f"{label}/colouring+identity mixture", mixed, instance, dist)
    if dist.is_uniform() and instance.n <= 3:
        search_checks(summary, label, instance, dist)
    return summary


def verify_random(count: int, seed: int) -> VerificationSummary:
    summary = VerificationSummary()
    rng = np.random.default_rng(seed)
    for case in range(count):
        instance = random_instance(rng)
        dist = random_distribution(rng, instance.messages, instance.q)
        adversary = random_adversary(rng, instance.n)
        label = f"random #{case} {instance.describe()} P={list(adversary.known_sorted)}"
        index = instance.tuple_index()
        product_identity_checks(summary, label, dist, (1, 2, 3))
        determinize_check(summary, label, random_stochastic_code(rng, index), instance, dist)

        code = random_code(rng, index)
        code_checks(summary, label, code, instance, dist, adversary)
        graph = build_confusion_graph(instance)
        summary.run(
            f"zero-error validity matches P_e = 0 [{label}]",
            lambda: is_zero_error_valid(code, graph) == (error_probability(code, instance, dist).p_error == 0),
        )

        def refinement() -> tuple[bool, str]:
            splittable = [y for y in code.used_codewords() if len(code.preimage(y)) > 1]
            if not splittable:
                return True, "no class to split"
            finer = refine_code(code, splittable[0])
            before = ps_posterior(code, dist, adversary, 1)
            after = ps_posterior(finer, dist, adversary, 1)
            return after >= before, f"{after} >= {before}"

        summary.run(f"refining a code never lowers the posterior [{label}]", refinement)
        search_checks(summary, label, instance, Distribution.uniform(instance.messages, instance.q))
    return summary
