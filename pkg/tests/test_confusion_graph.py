import itertools
import unittest
from pathlib import Path

from ic_engine.errors import BudgetExceededError, InstanceValidationError
from ic_engine.graphs.confusion import (
    BitsetGraph,
    build_confusion_graph,
    check_vertex_transitive,
    confusable,
    translate,
)
from ic_engine.model.instance import Instance
from services.exports import adjacency_csv, graph_to_dot

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def correlated_pair() -> Instance:
    return Instance.from_lists(2, 2, [[2], [1]])


def three_receivers() -> Instance:
    return Instance.from_lists(3, 2, [[], [3], [2]])


class ConfusionGraphTests(unittest.TestCase):
    def test_three_receivers_matches_golden_dot(self):
        graph = build_confusion_graph(three_receivers())
        expected = (GOLDEN_DIR / "three_receivers.dot").read_text(encoding="utf-8")
        self.assertEqual(graph_to_dot(graph), expected)
        self.assertEqual(graph.order, 8)
        self.assertEqual(graph.edge_count(), 24)
        self.assertEqual({graph.degree(v) for v in range(graph.order)}, {6})

    def test_correlated_pair_is_a_four_cycle(self):
        graph = build_confusion_graph(correlated_pair())
        self.assertEqual(sorted(graph.edges()), [(0, 1), (0, 2), (1, 3), (2, 3)])

    def test_edges_agree_with_the_predicate(self):
        for instance, t in ((Instance.from_lists(3, 3, [[2], [3], []]), 1), (three_receivers(), 2)):
            graph = build_confusion_graph(instance, None, t)
            tuples = list(graph.index.tuples())
            for u, v in itertools.combinations(range(graph.order), 2):
                self.assertEqual(graph.adjacent(u, v), confusable(tuples[u], tuples[v], instance, None, t))

    def test_subgraph_uses_side_information_inside_the_subset(self):
        instance = Instance.from_lists(3, 2, [[], [3], [2]])
        graph = build_confusion_graph(instance, [2])
        # receiver 2 loses X3 when S = {2}: two tuples, one edge
        self.assertEqual(graph.order, 2)
        self.assertEqual(graph.edge_count(), 1)
        self.assertEqual(graph.label(1), "1")

    def test_empty_subset_is_a_single_vertex(self):
        graph = build_confusion_graph(three_receivers(), [])
        self.assertEqual(graph.order, 1)
        self.assertEqual(graph.edge_count(), 0)

    def test_no_side_information_gives_a_complete_graph(self):
        graph = build_confusion_graph(Instance.from_lists(2, 2, [[], []]))
        self.assertEqual(graph.edge_count(), 6)

    def test_vertex_cap(self):
        with self.assertRaises(BudgetExceededError) as caught:
            build_confusion_graph(three_receivers(), None, 2, cap=32)
        self.assertEqual(caught.exception.budget, 32)
        self.assertEqual(caught.exception.exit_code, 3)

    def test_translations_are_automorphisms(self):
        for instance in (correlated_pair(), three_receivers(), Instance.from_lists(3, 3, [[2], [3], []])):
            graph = build_confusion_graph(instance)
            self.assertTrue(check_vertex_transitive(graph))
            x, z, d = (0,) * instance.n, (1,) * instance.n, (1,) + (0,) * (instance.n - 1)
            self.assertEqual(
                graph.adjacent(graph.vertex(x), graph.vertex(z)),
                graph.adjacent(graph.vertex(translate(graph.index, x, d)), graph.vertex(translate(graph.index, z, d))),
            )

    def test_generic_transitivity(self):
        self.assertTrue(check_vertex_transitive(BitsetGraph.cycle(5)))
        self.assertFalse(check_vertex_transitive(BitsetGraph.path(4)))
        # 2-regular, but a triangle vertex cannot map onto a hexagon vertex
        triangle_plus_hexagon = BitsetGraph.from_edges(
            9, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (3, 8)]
        )
        self.assertFalse(check_vertex_transitive(triangle_plus_hexagon))

    def test_transitivity_cap(self):
        with self.assertRaises(BudgetExceededError):
            check_vertex_transitive(build_confusion_graph(three_receivers()), cap=4)

    def test_bitset_graph_validation(self):
        with self.assertRaises(InstanceValidationError):
            BitsetGraph([0b10, 0b00])
        with self.assertRaises(InstanceValidationError):
            BitsetGraph.from_edges(2, [(1, 1)])

    def test_adjacency_csv(self):
        text = adjacency_csv(build_confusion_graph(correlated_pair()))
        self.assertEqual(text.splitlines()[0], "vertex,00,01,10,11")
        self.assertEqual(text.splitlines()[1], "00,0,1,1,0")


if __name__ == "__main__":
    unittest.main()
