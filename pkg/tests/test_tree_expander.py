"""Tests for trees and the TreeExpander service."""

import itertools
import os
import unittest
from unittest import mock

from models.polynomial import Polynomial
from models.tree import Leaf, Tree, Vertex
from services.corpus_generator import CorpusGenerator
from services.keller_checker import KellerChecker
from services.series_inverter import SeriesInverter
from services.tree_expander import TreeExpander
from utils.errors import ConditionalCheckError, GuardExceededError, PreconditionError


class TestTree(unittest.TestCase):
    """Test cases for the Tree model."""

    def setUp(self):
        self.tree = Tree(Vertex(1, (Leaf(2), Vertex(2, (Leaf(1), Leaf(2))))))

    def test_vertex_needs_two_children(self):
        """Test that a vertex of out-degree one is refused."""
        with self.assertRaises(PreconditionError):
            Vertex(1, (Leaf(2),))

    def test_edges_in_preorder(self):
        """Test edge positions, parents and depths."""
        edges = self.tree.edges
        self.assertEqual([edge.index for edge in edges], [1, 2, 2, 1, 2])
        self.assertEqual([edge.parent for edge in edges], [None, 0, 0, 2, 2])
        self.assertEqual([edge.depth for edge in edges], [1, 2, 2, 3, 3])
        self.assertEqual(list(self.tree.ancestors(3)), [2, 0])

    def test_counts_and_canonical_form(self):
        """Test r, N and the canonical string."""
        self.assertEqual(self.tree.vertex_count, 2)
        self.assertEqual(self.tree.leaf_count, 3)
        self.assertEqual(self.tree.leaf_indices(), [2, 1, 2])
        self.assertEqual(self.tree.canonical(), "V1[y2,V2[y1,y2]]")
        self.assertEqual(self.tree.to_dict()['leaves'], 3)

    def test_equality(self):
        """Test that trees compare by structure."""
        same = Tree(Vertex(1, (Leaf(2), Vertex(2, (Leaf(1), Leaf(2))))))
        swapped = Tree(Vertex(1, (Vertex(2, (Leaf(1), Leaf(2))), Leaf(2))))
        self.assertEqual(self.tree, same)
        self.assertNotEqual(self.tree, swapped)
        self.assertEqual(len({self.tree, same, swapped}), 2)


class TestTreeExpander(unittest.TestCase):
    """Test cases for TreeExpander service."""

    def setUp(self):
        self.maps = CorpusGenerator.documented_maps()
        self.y1 = Polynomial.variable(2, 1)
        self.y2 = Polynomial.variable(2, 2)

    def test_single_tree_of_shift_square(self):
        """Test the only order-2 tree of (x2^2, 0) and its value."""
        trees = list(TreeExpander.enumerate_trees(self.maps['shift_square'], 2))
        self.assertEqual(len(trees), 1)
        self.assertEqual(trees[0].canonical(), "V1[y2,y2]")
        self.assertEqual(TreeExpander.tree_value(trees[0], self.maps['shift_square']),
                         self.y2 * self.y2)
        self.assertEqual(TreeExpander.tree_length(trees[0]), 2)

    def test_order_one_trees(self):
        """Test that order 1 gives the n bare leaves."""
        trees = list(TreeExpander.enumerate_trees(self.maps['chain_cubic'], 1))
        self.assertEqual([tree.canonical() for tree in trees], ["y1", "y2", "y3"])
        self.assertEqual(TreeExpander.tree_length(trees[0]), 1)
        self.assertEqual(TreeExpander.tree_value(trees[0], self.maps['chain_cubic']),
                         Polynomial.variable(3, 1))

    def test_catalan_counts(self):
        """Test planar binary tree counts for V = x^2."""
        vertex = self.maps['catalan']
        counts = [len(list(TreeExpander.enumerate_trees(vertex, order))) for order in range(1, 7)]
        self.assertEqual(counts, SeriesInverter.catalan_numbers(6))

    def test_enumeration_is_duplicate_free(self):
        """Test that no tree is produced twice."""
        trees = list(TreeExpander.enumerate_trees(self.maps['sum_square'], 4))
        self.assertEqual(len(trees), len({tree.canonical() for tree in trees}))

    def test_tree_value_weights(self):
        """Test that each order-3 tree of a x^2 has value a^2 y^3."""
        a = 3
        vertex = type(self.maps['catalan'])([a * Polynomial.variable(1, 1) * Polynomial.variable(1, 1)])
        y = Polynomial.variable(1, 1)
        values = [TreeExpander.tree_value(tree, vertex) for tree in TreeExpander.enumerate_trees(vertex, 3)]
        self.assertEqual(values, [a * a * y * y * y] * 2)

    def test_linear_part_rejected(self):
        """Test that enumeration needs a vertex without linear part."""
        with self.assertRaises(PreconditionError):
            list(TreeExpander.enumerate_trees(self.maps['shift_with_linear'], 2))

    def test_tree_sum_examples(self):
        """Test tree sums against the known inverses."""
        self.assertEqual(TreeExpander.tree_sum(self.maps['shift_square'], 4),
                         [self.y1 + self.y2 * self.y2, self.y2])
        self.assertEqual(TreeExpander.tree_sum(self.maps['zero_map'], 3), [self.y1, self.y2])
        y = Polynomial.variable(1, 1)
        self.assertEqual(TreeExpander.tree_sum(self.maps['catalan'], 4),
                         [y + y * y + 2 * y * y * y + 5 * y * y * y * y])

    def test_tree_sum_matches_iteration(self):
        """Test tree sums equal the fixed-point inverse on the corpus."""
        for name, vertex in CorpusGenerator(0).fixtures():
            if vertex.has_linear_part or vertex.n > 3 or vertex.d > 3:
                continue
            if vertex.n == 3:
                cap = 5 if vertex.is_triangular() else 3
            else:
                cap = 6 if vertex.is_triangular() else 4
            summed = TreeExpander.tree_sum(vertex, cap)
            iterated = SeriesInverter.invert_truncated(vertex, cap).components
            self.assertEqual(tuple(summed), iterated, name)

    def test_edge_order(self):
        """Test tree order and around-the-tree order."""
        tree = Tree(Vertex(1, (Leaf(2), Vertex(2, (Leaf(1), Leaf(2))))))
        order = TreeExpander.edge_order(tree)
        self.assertTrue(order.tree_less(0, 3))
        self.assertTrue(order.tree_less(2, 4))
        self.assertFalse(order.comparable(1, 2))
        self.assertTrue(order.around_less(1, 2))
        self.assertTrue(order.extends_tree_order())

    def test_edge_order_extends_on_corpus_trees(self):
        """Test the around-the-tree order extends the tree order on every tree."""
        for tree in TreeExpander.enumerate_trees(self.maps['sum_square'], 4):
            self.assertTrue(TreeExpander.edge_order(tree).extends_tree_order())

    def test_alignment_examples(self):
        """Test the basic alignment cases."""
        single = Tree(Leaf(2))
        self.assertTrue(TreeExpander.alignment_filter(single, 2, 2).survives)

        chain = Tree(Vertex(2, (Leaf(2), Leaf(1))))
        verdict = TreeExpander.alignment_filter(chain, 2, 2)
        self.assertFalse(verdict.survives)
        self.assertEqual(verdict.witness, (0, 1))
        self.assertTrue(TreeExpander.alignment_filter(chain, 1, 2).survives)

        separated = Tree(Vertex(2, (Vertex(1, (Leaf(2), Leaf(2))), Leaf(1))))
        self.assertTrue(TreeExpander.alignment_filter(separated, 2, 2).survives)
        self.assertTrue(TreeExpander.alignment_filter(separated, 0, 2).survives)

    def test_alignment_ranking(self):
        """Test that a ranking changes which index counts as smaller."""
        separated = Tree(Vertex(2, (Vertex(1, (Leaf(2), Leaf(2))), Leaf(1))))
        self.assertFalse(TreeExpander.alignment_filter(separated, 1, 2, ranking=[2, 1]).survives)
        with self.assertRaises(PreconditionError):
            TreeExpander.alignment_filter(separated, 1, 2, ranking=[1, 1])

    def test_alignment_level_range(self):
        """Test that levels outside 0..n are refused."""
        with self.assertRaises(PreconditionError):
            TreeExpander.alignment_filter(Tree(Leaf(1)), 3, 2)

    def test_alignment_monotone_in_level(self):
        """Test that survivors at level k survive at every lower level."""
        vertex = self.maps['sum_square']
        for order in range(1, 5):
            for tree in TreeExpander.enumerate_trees(vertex, order):
                verdicts = [TreeExpander.alignment_filter(tree, k, 2).survives for k in range(3)]
                for k in range(1, 3):
                    if verdicts[k]:
                        self.assertTrue(verdicts[k - 1])

    def test_restricted_sums(self):
        """Test restricted sums on the documented maps."""
        vertex = self.maps['shift_square']
        self.assertEqual(TreeExpander.restricted_sum(vertex, 4, 2), [self.y1 + self.y2 * self.y2, self.y2])
        self.assertEqual(TreeExpander.restricted_sum(vertex, 4, 0), TreeExpander.tree_sum(vertex, 4))
        y = Polynomial.variable(1, 1)
        self.assertEqual(TreeExpander.restricted_sum(self.maps['catalan'], 4, 1), [y])

    def test_guards(self):
        """Test the enumeration guards and their environment overrides."""
        with self.assertRaises(GuardExceededError):
            TreeExpander.tree_sum(self.maps['catalan'], 9)
        with mock.patch.dict(os.environ, {"KELLER_TREE_MAX_LEAVES": "3"}):
            with self.assertRaises(GuardExceededError):
                TreeExpander.tree_sum(self.maps['catalan'], 4)
        with self.assertRaises(PreconditionError):
            TreeExpander.tree_sum(self.maps['catalan'], 0)

    def test_statistics(self):
        """Test counts, lengths and survivors for V = x^2."""
        stats = TreeExpander.tree_statistics(self.maps['catalan'], 4)
        self.assertEqual(stats['counts_per_order'], {'1': 1, '2': 1, '3': 2, '4': 5})
        self.assertEqual(stats['length_histogram'], {'1': 1, '2': 1, '3': 3, '4': 4})
        self.assertEqual(stats['survivors_per_level'], {'0': 9, '1': 1})

    def test_factorization_examples(self):
        """Test the factorization identity on the documented Keller maps."""
        report = TreeExpander.factorization_check(self.maps['shift_square'], 4)
        self.assertTrue(report.holds)
        self.assertEqual(report.details['max_surviving_length'], 2)
        self.assertTrue(report.details['length_bound_holds'])
        self.assertTrue(TreeExpander.factorization_check(self.maps['zero_map'], 3).holds)
        self.assertTrue(TreeExpander.factorization_check(self.maps['chain_cubic'], 5).holds)

    def test_factorization_refuses_non_keller(self):
        """Test that the conditional check refuses a non-Keller map."""
        with self.assertRaises(ConditionalCheckError):
            TreeExpander.factorization_check(self.maps['diagonal_square'], 3)

    def test_factorization_report_is_well_formed(self):
        """Test the report on a non-triangular Keller map."""
        report = TreeExpander.factorization_check(self.maps['sum_square'], 4)
        self.assertEqual(report.name, "factorization")
        self.assertEqual(report.details['length_bound'], 3)
        if not report.holds:
            self.assertIn("component", report.witness)

    def test_length_bounds_on_triangular_corpus(self):
        """Test length and degree-per-length bounds, and the identity, on triangular fixtures."""
        for name, vertex in CorpusGenerator(0).fixtures():
            if not vertex.is_triangular() or vertex.has_linear_part or vertex.n > 3 or vertex.d > 3:
                continue
            report = TreeExpander.factorization_check(vertex, 5)
            self.assertTrue(report.holds, name)
            self.assertTrue(report.details['length_bound_holds'], name)
            self.assertTrue(report.details['degree_per_length_holds'], name)

    def test_factorization_runs_on_small_keller_fixtures(self):
        """Test that the check completes with a well-formed report for n <= 2."""
        for name, vertex in CorpusGenerator(0).fixtures():
            if vertex.n > 2 or vertex.d > 3 or vertex.has_linear_part:
                continue
            if not KellerChecker.keller_check(vertex).is_keller:
                continue
            cap = 6 if vertex.d == 2 else 4
            report = TreeExpander.factorization_check(vertex, cap)
            self.assertEqual(report.details['cap'], cap, name)
            self.assertTrue(report.details['length_bound_holds'], name)
            if not report.holds:
                self.assertTrue(report.witness.startswith("component "), name)

    def test_survivor_length_and_degree(self):
        """Test that level-n survivors are short and their degree fits their length."""
        fixtures = [('sum_square', self.maps['sum_square'])] + [
            (name, vertex) for name, vertex in CorpusGenerator(0).fixtures()
            if name.startswith("conjugated_n2_d2")]
        for name, vertex in fixtures:
            for order in range(1, 6):
                for tree in TreeExpander.enumerate_trees(vertex, order):
                    length = TreeExpander.tree_length(tree)
                    self.assertLessEqual(tree.leaf_count, vertex.d ** (length - 1), name)
                    if TreeExpander.alignment_filter(tree, vertex.n, vertex.n).survives:
                        self.assertLessEqual(length, 2 ** vertex.n - 1, name)

    def test_survivor_length_and_degree_in_dimension_three(self):
        """Test the same bounds on the n = 3 conjugated fixtures through five leaves."""
        fixtures = [(name, vertex) for name, vertex in CorpusGenerator(0).fixtures()
                    if name.startswith("conjugated_n3")]
        self.assertEqual(len(fixtures), 8)
        for name, vertex in fixtures:
            for order in range(1, 6):
                for tree in TreeExpander.enumerate_trees(vertex, order):
                    length = TreeExpander.tree_length(tree)
                    self.assertLessEqual(tree.leaf_count, vertex.d ** (length - 1), name)
                    if TreeExpander.alignment_filter(tree, 3, 3).survives:
                        self.assertLessEqual(length, 7, name)

    def test_factorization_invariant_under_relabeling(self):
        """Test that permuting variables with the ranking keeps the verdict."""
        for name in ('shift_square', 'chain_cubic'):
            vertex = self.maps[name]
            expected = TreeExpander.factorization_check(vertex, 4).holds
            for perm in itertools.permutations(range(1, vertex.n + 1)):
                relabeled = vertex.relabel(perm)
                report = TreeExpander.factorization_check(relabeled, 4, ranking=list(perm))
                self.assertEqual(report.holds, expected, (name, perm))


if __name__ == '__main__':
    unittest.main()
