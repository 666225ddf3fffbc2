import unittest
from fractions import Fraction

from ic_engine.bits import Bits, KnownRate
from ic_engine.coding.codes import DeterministicCode, coloring_code, composite_code, constant_code, identity_code
from ic_engine.errors import InstanceValidationError
from ic_engine.graphs.confusion import build_confusion_graph
from ic_engine.graphs.invariants import rate_bracket
from ic_engine.graphs.solvers import chromatic_number
from ic_engine.leakage.bounds import (
    best_guess_mass,
    converse_inequality_check,
    uniform_surrogate_report,
    product_identity_check,
    leakage_rate_bounds,
)
from ic_engine.leakage.guessing import leakage, ps_posterior
from ic_engine.model.distribution import Distribution
from ic_engine.model.instance import AdversarySpec, Instance

KNOWN_R_Q = "3 - 0.75*log2(3)"


def biased_four() -> tuple[Instance, Distribution, AdversarySpec]:
    instance = Instance.from_lists(4, 2, [[4], [3], [2], [1]])
    dist = Distribution.product((1, 2, 3, 4), 2, [["1/4", "3/4"], ["1/2", "1/2"], ["1/2", "1/2"], ["1/2", "1/2"]])
    return instance, dist, AdversarySpec.build(4, [4])


def correlated_pair() -> tuple[Instance, Distribution]:
    instance = Instance.from_lists(2, 2, [[2], [1]])
    dist = Distribution.joint((1, 2), 2, {"00": "1/10", "01": "1/5", "10": "3/10", "11": "2/5"})
    return instance, dist


class LeakageRateBoundTests(unittest.TestCase):
    def test_biased_first_message(self):
        instance, dist, adversary = biased_four()
        self.assertEqual(best_guess_mass(dist, adversary), Fraction(3, 16))
        bracket = rate_bracket(instance, adversary.target, 1, KnownRate(KNOWN_R_Q, "reference"))
        report = leakage_rate_bounds(instance, dist, adversary, bracket)
        self.assertEqual(report.correction, Bits.log2(Fraction(16, 3)))
        self.assertEqual(report.vanishing_lower.low, Bits.log2(Fraction(8, 3)))
        self.assertAlmostEqual(report.vanishing_lower.low.value, 1.415037499278844, places=12)
        self.assertEqual(report.zero_error_upper.high, Bits.constant(2))
        self.assertTrue(report.zero_error_upper.pinned)
        self.assertAlmostEqual(report.vanishing_upper.high.value, 1.811278124459133, places=12)
        self.assertEqual(report.notes, ())

    def test_unknown_rate_falls_back_to_the_zero_error_bracket(self):
        instance, dist, adversary = biased_four()
        bracket = rate_bracket(instance, adversary.target)
        report = leakage_rate_bounds(instance, dist, adversary, bracket)
        self.assertIsNone(report.vanishing_upper.low)
        self.assertEqual(report.vanishing_upper.high, Bits.constant(2))
        self.assertTrue(any("R(Q) unknown" in note for note in report.notes))

    def test_rate_split_across_known_and_target(self):
        instance, dist, adversary = biased_four()
        report = leakage_rate_bounds(
            instance,
            dist,
            adversary,
            rate_bracket(instance, adversary.target),
            bracket_full=rate_bracket(instance),
            bracket_p=rate_bracket(instance, [4]),
        )
        # ρ = 2 but ρ(P) + ρ(Q) = 1 + 2
        self.assertTrue(report.composite_rate_split["pinned"])
        self.assertFalse(report.composite_rate_split["holds"])

    def test_bracket_must_match_the_target(self):
        instance, dist, adversary = biased_four()
        with self.assertRaises(InstanceValidationError):
            leakage_rate_bounds(instance, dist, adversary, rate_bracket(instance, [1, 2]))

    def test_large_alphabet_note(self):
        instance = Instance.from_lists(2, 3, [[2], [1]])
        dist = Distribution.uniform((1, 2), 3)
        adversary = AdversarySpec.build(2, [2])
        with self.assertLogs("ic_engine.leakage.bounds", level="WARNING"):
            report = leakage_rate_bounds(instance, dist, adversary, rate_bracket(instance, [1]))
        self.assertTrue(any("q > 2" in note for note in report.notes))
        self.assertEqual(report.unit_term, Bits.log2(3))


class UniformReportTests(unittest.TestCase):
    def test_three_receivers_uniform(self):
        instance = Instance.from_lists(3, 2, [[], [3], [2]])
        dist = Distribution.uniform((1, 2, 3), 2)
        report = uniform_surrogate_report(instance, dist, AdversarySpec.build(3))
        self.assertEqual(report.correction, Bits.constant(3))
        row = report.rows[0]
        self.assertEqual(row.optimal_leakage, Bits.constant(2))
        self.assertTrue(row.agrees)

    def test_needs_uniform_messages(self):
        instance, dist = correlated_pair()
        with self.assertRaises(InstanceValidationError):
            uniform_surrogate_report(instance, dist, AdversarySpec.build(2))


class IdentityTests(unittest.TestCase):
    def test_split_mass_factorizes_over_time(self):
        _, dist = correlated_pair()
        one = product_identity_check(dist, (1,), (2,), 1)
        self.assertEqual(one.lhs, Fraction(3, 5))
        self.assertTrue(one.holds)
        two = product_identity_check(dist, (1,), (2,), 2)
        self.assertEqual(two.lhs, Fraction(9, 25))
        self.assertTrue(two.holds)


class ConverseTests(unittest.TestCase):
    def test_zero_error_code_meets_every_inequality(self):
        instance = Instance.from_lists(3, 2, [[], [3], [2]])
        dist = Distribution.uniform((1, 2, 3), 2)
        graph = build_confusion_graph(instance)
        code = coloring_code(graph.index, chromatic_number(graph).coloring)
        report = converse_inequality_check(code, instance, dist, AdversarySpec.build(3), claims_zero_error=True)
        self.assertEqual(report.alpha, 2)
        self.assertEqual(report.success_bound, Fraction(1, 2))
        self.assertEqual(report.ps_posterior, Fraction(1, 2))
        self.assertTrue(report.holds)

    def test_posterior_success_matches_the_leakage_report_with_two_guesses(self):
        instance, dist = correlated_pair()
        adversary = AdversarySpec.build(2, capability=2)
        code = constant_code(instance)
        report = converse_inequality_check(code, instance, dist, adversary)
        self.assertEqual(report.c, 2)
        # one observation holding all four tuples: the two largest are 2/5 and 3/10
        self.assertEqual(report.ps_posterior, Fraction(7, 10))
        self.assertEqual(report.ps_posterior, ps_posterior(code, dist, adversary, 2))
        self.assertTrue(report.holds)

    def test_claimed_zero_error_with_a_large_class_is_flagged(self):
        instance = Instance.from_lists(3, 2, [[], [3], [2]])
        dist = Distribution.uniform((1, 2, 3), 2)
        code = DeterministicCode(instance.tuple_index(), (1, 1, 1, 2, 3, 3, 4, 4), 4, claims_zero_error=True)
        report = converse_inequality_check(code, instance, dist, AdversarySpec.build(3))
        self.assertFalse(report.good_set_holds)
        self.assertEqual(len(report.violating_observations), 1)
        self.assertGreater(report.p_error, 0)
        self.assertTrue(report.good_mass_holds)

    def test_composite_code_leaks_at_most_log_m2(self):
        instance, dist, adversary = biased_four()
        graph_q = build_confusion_graph(instance, adversary.target)
        code_q = coloring_code(graph_q.index, chromatic_number(graph_q).coloring)
        code = composite_code(identity_code(instance, [4]), code_q, instance)
        report = converse_inequality_check(code, instance, dist, adversary)
        self.assertTrue(report.composite_bound_holds)
        self.assertTrue(report.holds)
        self.assertLessEqual(leakage(code, instance, dist, adversary).bits, Bits.constant(2))


if __name__ == "__main__":
    unittest.main()
