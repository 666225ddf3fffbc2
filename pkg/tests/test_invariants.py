import unittest
from fractions import Fraction

from ic_engine.bits import Bits
from ic_engine.errors import BudgetExceededError, InstanceValidationError, InvariantViolationError
from ic_engine.graphs.confusion import BitsetGraph, build_confusion_graph
from ic_engine.graphs.exact_lp import maximize
from ic_engine.graphs.invariants import (
    RateBracket,
    fractional_chromatic_number,
    mais_lower_bound,
    rate_bracket,
    surrogate_row,
)
from ic_engine.graphs.solvers import (
    chromatic_number,
    clique_number,
    greedy_dsatur,
    independence_number,
    maximal_independent_sets,
)
from ic_engine.model.instance import Instance


def three_receivers() -> Instance:
    return Instance.from_lists(3, 2, [[], [3], [2]])


def biased_four() -> Instance:
    return Instance.from_lists(4, 2, [[4], [3], [2], [1]])


class SolverTests(unittest.TestCase):
    def test_cycle_invariants(self):
        c7 = BitsetGraph.cycle(7)
        self.assertEqual(clique_number(c7).value, 2)
        self.assertEqual(independence_number(c7).value, 3)
        coloring = chromatic_number(c7)
        self.assertEqual(coloring.value, 3)
        self.assertTrue(c7.is_proper_coloring(coloring.coloring))

    def test_witnesses_are_valid(self):
        graph = build_confusion_graph(three_receivers())
        alpha = independence_number(graph)
        omega = clique_number(graph)
        self.assertEqual(alpha.value, 2)
        self.assertTrue(graph.is_independent(alpha.witness))
        self.assertEqual(omega.value, 4)
        self.assertTrue(graph.is_clique(omega.witness))

    def test_chromatic_number_of_three_receivers(self):
        graph = build_confusion_graph(three_receivers())
        coloring = chromatic_number(graph)
        self.assertEqual(coloring.value, 4)
        self.assertEqual(len(coloring.classes()), 4)
        self.assertTrue(graph.is_proper_coloring(coloring.coloring))
        self.assertGreaterEqual(greedy_dsatur(graph).value, coloring.value)

    def test_empty_and_edgeless_graphs(self):
        self.assertEqual(chromatic_number(BitsetGraph.empty(0)).value, 0)
        self.assertEqual(chromatic_number(BitsetGraph.empty(3)).value, 1)
        self.assertEqual(independence_number(BitsetGraph.empty(3)).value, 3)

    def test_maximal_independent_sets_of_a_path(self):
        self.assertEqual(maximal_independent_sets(BitsetGraph.path(4)), [(0, 2), (0, 3), (1, 3)])

    def test_node_budget(self):
        with self.assertRaises(BudgetExceededError):
            chromatic_number(BitsetGraph.cycle(7), budget=1)


class FractionalTests(unittest.TestCase):
    def test_vertex_transitive_shortcut(self):
        result = fractional_chromatic_number(BitsetGraph.cycle(5))
        self.assertEqual(result.method, "vertex-transitive")
        self.assertEqual(result.value, Fraction(5, 2))

    def test_lp_fallback_matches_transitive_value(self):
        # C5 with a pendant vertex: not regular, still χ_f = 5/2
        graph = BitsetGraph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5)])
        with self.assertLogs("ic_engine.graphs.invariants", level="WARNING"):
            result = fractional_chromatic_number(graph)
        self.assertEqual(result.method, "lp")
        self.assertEqual(result.value, Fraction(5, 2))
        self.assertEqual(sum(weight for _, weight in result.cover), Fraction(5, 2))

    def test_lp_cap(self):
        graph = BitsetGraph.from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5)])
        with self.assertRaises(BudgetExceededError):
            fractional_chromatic_number(graph, lp_cap=4)

    def test_simplex_small_program(self):
        # max y1 + y2 with y1 + 2 y2 <= 4, 3 y1 + y2 <= 6
        solution = maximize([1, 1], [[1, 2], [3, 1]], [4, 6])
        self.assertEqual(solution.value, Fraction(14, 5))
        self.assertEqual(solution.primal, (Fraction(8, 5), Fraction(6, 5)))

    def test_simplex_rejects_negative_bounds(self):
        with self.assertRaises(InstanceValidationError):
            maximize([1], [[1]], [-1])

    def test_surrogate_row_ordering(self):
        row = surrogate_row(BitsetGraph.cycle(5), 1)
        self.assertLessEqual(row.omega, row.chi_f)
        self.assertLessEqual(row.chi_f, row.chi)
        self.assertEqual(row.alpha * row.chi_f, row.vertices)


class RateBracketTests(unittest.TestCase):
    def test_mais_witness_is_deterministic(self):
        mais = mais_lower_bound(biased_four(), [1, 2, 3])
        self.assertEqual(mais.witness, (1, 2))
        self.assertEqual(mais.bound, Bits.constant(2))

    def test_mais_of_a_clique_of_mutual_side_information(self):
        instance = Instance.from_lists(3, 2, [[2, 3], [1, 3], [1, 2]])
        self.assertEqual(mais_lower_bound(instance).size, 1)

    def test_three_receivers_rate_is_pinned(self):
        bracket = rate_bracket(three_receivers())
        self.assertTrue(bracket.pinned)
        self.assertEqual(bracket.certified, Bits.constant(2))
        row = bracket.row(1)
        self.assertEqual((row.alpha, row.chi, row.chi_f), (2, 4, Fraction(4)))
        self.assertEqual(row.chi_f_method, "vertex-transitive")

    def test_full_biased_four_graph(self):
        bracket = rate_bracket(biased_four())
        row = bracket.row(1)
        self.assertEqual((row.vertices, row.alpha, row.chi), (16, 4, 4))
        self.assertEqual(bracket.certified_upper, Bits.constant(2))

    def test_t_max_must_be_positive(self):
        with self.assertRaises(InstanceValidationError):
            rate_bracket(three_receivers(), None, 0)

    def test_inverted_bracket_is_rejected(self):
        with self.assertRaises(InvariantViolationError):
            RateBracket((1,), (), Bits.constant(2), Bits.constant(1))

    def test_payload_carries_known_rate(self):
        payload = rate_bracket(three_receivers()).to_payload()
        self.assertTrue(payload["pinned"])
        self.assertEqual(payload["mais_witness"], [1, 2])
        self.assertEqual(payload["surrogates"][0]["chi_f"], "4/1")


if __name__ == "__main__":
    unittest.main()
