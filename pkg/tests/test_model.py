import unittest
from fractions import Fraction

from ic_engine.bits import Bits, KnownRate, as_fraction, evaluate_rate_expression
from ic_engine.errors import BudgetExceededError, InstanceValidationError, InvariantViolationError
from ic_engine.model.distribution import (
    Distribution,
    LazyProductDistribution,
    conditional,
    marginal,
    product_extend,
)
from ic_engine.model.instance import AdversarySpec, GuessBudget, Instance, TupleIndex


def correlated_pair_distribution() -> Distribution:
    return Distribution.joint((1, 2), 2, {"00": "1/10", "01": "1/5", "10": "3/10", "11": "2/5"})


class InstanceTests(unittest.TestCase):
    def test_rejects_own_message_in_side_information(self):
        with self.assertRaises(InstanceValidationError):
            Instance.from_lists(2, 2, [[1], []])

    def test_rejects_side_information_outside_range(self):
        with self.assertRaises(InstanceValidationError):
            Instance.from_lists(2, 2, [[3], []])

    def test_rejects_small_alphabet(self):
        with self.assertRaises(InstanceValidationError):
            Instance.from_lists(2, 1, [[2], [1]])

    def test_describe_restricts_to_subset(self):
        instance = Instance.from_lists(3, 2, [[], [3], [2]])
        self.assertEqual(instance.describe(), "(1|-),(2|3),(3|2)")
        self.assertEqual(instance.describe([1, 2]), "(1|-),(2|-)")

    def test_subset_is_sorted_and_checked(self):
        instance = Instance.from_lists(3, 2, [[], [3], [2]])
        self.assertEqual(instance.subset([3, 1, 3]), (1, 3))
        with self.assertRaises(InstanceValidationError):
            instance.subset([4])


class TupleIndexTests(unittest.TestCase):
    def test_numbering_is_lexicographic(self):
        index = TupleIndex((1, 2, 3), 2)
        self.assertEqual(index.size, 8)
        self.assertEqual(index.index_of_tuple((1, 0, 1)), 5)
        self.assertEqual(index.tuple_of_index(6), (1, 1, 0))
        self.assertEqual(list(index.tuples())[3], (0, 1, 1))

    def test_message_major_layout_for_sequences(self):
        index = TupleIndex((1, 2), 2, 2)
        x = (0, 1, 1, 1)
        self.assertEqual(index.sequence(x, 1), (0, 1))
        self.assertEqual(index.symbol_slice(x, 0), (0, 1))
        self.assertEqual(index.symbol_slice(x, 1), (1, 1))
        self.assertEqual(index.from_symbol_slices([(0, 1), (1, 1)]), x)
        self.assertEqual(index.label(x), "01|11")
        self.assertEqual(index.parse_label("01|11"), x)

    def test_time_split_round_trip(self):
        index = TupleIndex((1, 2), 2, 3)
        x = (0, 1, 1, 1, 0, 0)
        head, tail = index.split_time(x, 1)
        self.assertEqual(head, (0, 1))
        self.assertEqual(tail, (1, 1, 0, 0))
        self.assertEqual(index.join_time(head, tail, 1), x)

    def test_large_alphabet_labels_use_commas(self):
        index = TupleIndex((1, 2), 11)
        self.assertEqual(index.label((10, 3)), "10,3")
        self.assertEqual(index.parse_label("10,3"), (10, 3))

    def test_empty_scope_label(self):
        index = TupleIndex((), 2)
        self.assertEqual(index.size, 1)
        self.assertEqual(index.label(()), "-")
        self.assertEqual(index.parse_label("-"), ())

    def test_bad_label_is_rejected(self):
        index = TupleIndex((1, 2), 2)
        with self.assertRaises(InstanceValidationError):
            index.parse_label("012")
        with self.assertRaises(InstanceValidationError):
            index.parse_label("0x")


class AdversaryTests(unittest.TestCase):
    def test_target_is_complement_of_known(self):
        adversary = AdversarySpec.build(4, [4])
        self.assertEqual(adversary.target, (1, 2, 3))
        self.assertEqual(adversary.known_sorted, (4,))

    def test_adversary_must_have_a_target(self):
        with self.assertRaises(InstanceValidationError):
            AdversarySpec.build(2, [1, 2])

    def test_capability_table_is_a_step_function(self):
        budget = GuessBudget.of({1: 1, 3: 2})
        self.assertEqual(budget.at(1), 1)
        self.assertEqual(budget.at(2), 1)
        self.assertEqual(budget.at(5), 2)
        self.assertEqual(budget.to_payload(), {"1": 1, "3": 2})

    def test_capability_must_not_decrease(self):
        with self.assertRaises(InstanceValidationError):
            GuessBudget.of({1: 3, 2: 1})

    def test_capability_above_alpha_clamps_or_fails(self):
        budget = GuessBudget.of(5)
        with self.assertLogs("ic_engine.model.instance", level="WARNING"):
            self.assertEqual(budget.resolve(1, 2), 2)
        with self.assertRaises(InvariantViolationError):
            budget.resolve(1, 2, strict=True)


class DistributionTests(unittest.TestCase):
    def test_full_support_is_enforced(self):
        with self.assertRaises(InstanceValidationError) as caught:
            Distribution.joint((1, 2), 2, {"00": "1/2", "01": "1/2", "10": 0, "11": 0})
        self.assertIn("full support", caught.exception.detail)

    def test_sum_must_be_one(self):
        with self.assertRaises(InstanceValidationError):
            Distribution.product((1,), 2, [["1/3", "1/3"]])

    def test_float_probabilities_are_rejected(self):
        with self.assertRaises(InstanceValidationError):
            as_fraction(0.5)

    def test_marginal_and_conditional(self):
        dist = correlated_pair_distribution()
        first = marginal(dist, [1])
        self.assertEqual(first.probs, (Fraction(3, 10), Fraction(7, 10)))
        given = conditional(dist, [1], (1,))
        self.assertEqual(given.probs, (Fraction(3, 7), Fraction(4, 7)))

    def test_product_extension_multiplies_symbol_slices(self):
        dist = correlated_pair_distribution()
        pair = product_extend(dist, 2)
        self.assertIsInstance(pair, Distribution)
        self.assertEqual(pair.prob((0, 1, 0, 1)), Fraction(1, 25))
        self.assertEqual(sum(pair.probs, Fraction(0)), 1)

    def test_product_extension_goes_lazy_above_cap(self):
        dist = correlated_pair_distribution()
        with self.assertLogs("ic_engine.model.distribution", level="WARNING"):
            lazy = product_extend(dist, 3, cap=16)
        self.assertIsInstance(lazy, LazyProductDistribution)
        self.assertEqual(lazy.prob((0, 0, 0, 1, 1, 1)), Fraction(1, 125))
        self.assertEqual(lazy.prob((1, 1, 1, 1, 1, 1)), Fraction(8, 125))
        with self.assertRaises(BudgetExceededError):
            product_extend(dist, 3, cap=16, materialize=True)

    def test_lazy_marginal_stays_lazy(self):
        lazy = LazyProductDistribution(correlated_pair_distribution(), 2)
        first = marginal(lazy, [1])
        self.assertIsInstance(first, LazyProductDistribution)
        self.assertEqual(first.prob((1, 1)), Fraction(49, 100))

    def test_uniform_detection(self):
        self.assertTrue(Distribution.uniform((1, 2, 3), 2).is_uniform())
        self.assertFalse(correlated_pair_distribution().is_uniform())


class BitsTests(unittest.TestCase):
    def test_exact_comparison(self):
        self.assertEqual(Bits.log2(4), Bits.constant(2))
        self.assertEqual(Bits.log2(3, 2), Bits.log2(9))
        self.assertLess(Bits.log2(3), Bits.log2(Fraction(16, 5)))
        self.assertEqual(Bits.log2(Fraction(16, 3)) - Bits.constant(1), Bits.log2(Fraction(8, 3)))

    def test_rendering(self):
        self.assertEqual(str(Bits.log2(Fraction(7, 4))), "log2(7/4)")
        self.assertEqual(str(Bits.zero()), "0")
        self.assertEqual(Bits.log2(8).to_payload()["bits"], "3.000000000000")

    def test_known_rate_expression(self):
        rate = KnownRate("3 - 0.75*log2(3)", "reference")
        self.assertAlmostEqual(rate.value, 3 - 0.75 * 1.584962500721156, places=12)
        with self.assertRaises(InstanceValidationError):
            evaluate_rate_expression("__import__('os')")


if __name__ == "__main__":
    unittest.main()
