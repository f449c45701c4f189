from fractions import Fraction as F
import random

import pytest

from aivf import (
    ParseTree,
    TreeNode,
    expected_parse_length,
    occurrence_probs,
    tie,
    tie_last,
    transition_probs,
    validate_tree,
)
from aivf.parse_tree import conditional_word_prob, word_prob
from aivf.errors import FirstSymbolBelowTypeError, TypeMismatchError, UnknownSymbolError

from conftest import assert_conservation, build_tree, dyadic_source, random_tree


def rules(tree, src):
    return {v.rule for v in validate_tree(tree, src)}


class TestDictionary:
    def test_worked_type0_table(self, fig_source, fig_trees):
        t0, _ = fig_trees
        rows = [(e.index, e.word, e.target_type) for e in t0.dictionary]
        assert rows == [
            (1, (0,), 1),
            (2, (0, 0), 1),
            (3, (0, 0, 0), 1),
            (4, (0, 0, 0, 0), 0),
            (5, (1,), 1),
            (6, (1, 0), 0),
            (7, (2,), 0),
        ]

    def test_worked_type1_table(self, fig_source, fig_trees):
        _, t1 = fig_trees
        rows = [(e.index, e.word, e.target_type) for e in t1.dictionary]
        assert rows == [
            (1, (1, 0), 1),
            (2, (1, 0, 0), 1),
            (3, (1, 0, 0, 0), 0),
            (4, (1, 1), 0),
            (5, (1, 2), 0),
            (6, (2,), 1),
            (7, (2, 0), 0),
        ]

    def test_empty_word_is_numbered_last(self):
        tree = build_tree(0, 3, {0: {}})
        assert [(e.index, e.word) for e in tree.dictionary] == [(1, (0,)), (2, ())]
        assert tree.dictionary[-1].target_type == 1

    def test_entry_lookup_by_path(self, fig_trees):
        _, t1 = fig_trees
        assert t1.entry_for((2,)).index == 6
        assert t1.entry_for((1,)) is None  # complete node, no codeword
        assert t1.entry_for(()) is None  # complete root, no empty word
        assert t1.entry_for((0,)) is None  # no such path

    def test_shared_subtree_objects_do_not_alias_entries(self):
        # the same node object at two positions must yield two distinct entries
        leaf = TreeNode()
        root = TreeNode({0: TreeNode({0: leaf}), 1: leaf, 2: TreeNode()})
        tree = ParseTree(0, root, 3)
        words = [e.word for e in tree.dictionary]
        assert words == [(0,), (0, 0), (1,), (2,)]
        assert tree.entry_for((0, 0)).index == 2
        assert tree.entry_for((1,)).index == 3
        assert tree.node_count == 5


class TestProbabilities:
    def test_word_prob(self, fig_source):
        assert word_prob(fig_source, ()) == 1
        assert word_prob(fig_source, (1, 0)) == F(9, 50)
        with pytest.raises(UnknownSymbolError):
            word_prob(fig_source, (3,))

    def test_conditional_word_prob(self, fig_source):
        # node values printed in the worked type-1 tree
        assert conditional_word_prob(fig_source, 1, (1,)) == F(3, 4)
        assert conditional_word_prob(fig_source, 1, (1, 0)) == F(9, 20)
        assert conditional_word_prob(fig_source, 1, (2, 0)) == F(3, 20)
        assert conditional_word_prob(fig_source, 0, (1, 0)) == F(9, 50)
        assert conditional_word_prob(fig_source, 1, ()) == 1

    def test_conditional_rejects_word_below_type(self, fig_source):
        with pytest.raises(FirstSymbolBelowTypeError):
            conditional_word_prob(fig_source, 1, (0, 1))

    def test_worked_occurrence_tables(self, fig_source, fig_trees):
        t0, t1 = fig_trees
        p0 = [e.occurrence_prob for e in occurrence_probs(t0, fig_source)]
        assert p0 == [
            F(6, 25),
            F(18, 125),
            F(54, 625),
            F(81, 625),
            F(3, 25),
            F(9, 50),
            F(1, 10),
        ]
        p1 = [e.occurrence_prob for e in occurrence_probs(t1, fig_source)]
        assert p1 == [
            F(9, 50),
            F(27, 250),
            F(81, 500),
            F(9, 40),
            F(3, 40),
            F(1, 10),
            F(3, 20),
        ]

    def test_worked_expected_lengths(self, fig_source, fig_trees):
        t0, t1 = fig_trees
        assert expected_parse_length(t0, fig_source) == F(2357, 1250)
        assert expected_parse_length(t1, fig_source) == F(583, 250)

    def test_worked_transition_rows(self, fig_source, fig_trees):
        t0, t1 = fig_trees
        assert transition_probs(t0, fig_source) == (F(256, 625), F(369, 625))
        assert transition_probs(t1, fig_source) == (F(153, 250), F(97, 250))

    def test_conservation_on_worked_trees(self, fig_source, fig_trees):
        for tree in fig_trees:
            assert_conservation(tree, fig_source, 7)


class TestValidation:
    def test_worked_trees_are_valid(self, fig_source, fig_trees):
        for tree in fig_trees:
            assert validate_tree(tree, fig_source) == []

    def test_type_out_of_range(self, fig_source):
        assert rules(build_tree(2, 3, {2: {}}), fig_source) == {"type-range"}

    def test_bare_root_rejected(self, fig_source):
        assert rules(build_tree(0, 3, {}), fig_source) == {"root-range"}

    def test_root_with_too_many_children(self, fig_source):
        tree = build_tree(1, 3, {0: {}, 1: {}, 2: {}})
        assert rules(tree, fig_source) == {"root-range"}

    def test_root_labels_must_start_at_type(self, fig_source):
        assert rules(build_tree(1, 3, {0: {}}), fig_source) == {"root-labels"}
        assert rules(build_tree(0, 3, {1: {}, 2: {}}), fig_source) == {"root-labels"}

    def test_empty_word_may_not_point_past_last_tree(self, fig_source):
        # an incomplete root with n-i-1 children would transfer to tree n-1
        assert rules(build_tree(0, 3, {0: {}, 1: {}}), fig_source) == {
            "root-word-range"
        }
        four = dyadic_source(random.Random(5), 4)
        assert rules(build_tree(1, 4, {1: {}, 2: {}}), four) == {"root-word-range"}
        assert rules(build_tree(1, 4, {1: {}}), four) == set()

    def test_internal_node_may_not_have_n_minus_1_children(self, fig_source):
        tree = build_tree(0, 3, {0: {0: {}, 1: {}}, 1: {}, 2: {}})
        assert rules(tree, fig_source) == {"internal-range"}

    def test_internal_labels_start_at_zero(self, fig_source):
        tree = build_tree(0, 3, {0: {1: {}}, 1: {}, 2: {}})
        assert rules(tree, fig_source) == {"internal-labels"}

    def test_alphabet_mismatch(self, fig_source):
        two = build_tree(0, 2, {0: {}, 1: {}})
        assert rules(two, fig_source) == {"alphabet"}


class TestStructuralIdentity:
    def test_equality_is_structural(self, fig_trees):
        t0, _ = fig_trees
        again = build_tree(0, 3, {0: {0: {0: {0: {}}}}, 1: {0: {}}, 2: {}})
        assert t0 == again
        assert hash(t0) == hash(again)

    def test_type_distinguishes(self):
        a = build_tree(1, 3, {1: {}, 2: {}})
        b = ParseTree(1, build_tree(1, 3, {1: {}, 2: {}}).root, 3)
        assert a == b
        assert a != build_tree(0, 3, {0: {}, 1: {}, 2: {}})


class TestTieOperations:
    def test_tie_smallest_case(self, fig_source):
        t = tie(0, ParseTree.single_node(0, 3), ParseTree.single_node(1, 3))
        assert t.type_index == 0
        assert [(e.word, e.target_type) for e in t.dictionary] == [((0,), 0), ((), 1)]
        assert expected_parse_length(t, fig_source) == F(3, 5)
        assert transition_probs(t, fig_source) == (F(3, 5), F(2, 5))

    def test_tie_last_smallest_case(self, fig_source):
        t = tie_last(ParseTree.single_node(0, 3), ParseTree.single_node(0, 3))
        assert t.type_index == 1
        assert [(e.word, e.target_type) for e in t.dictionary] == [((1,), 0), ((2,), 0)]
        assert expected_parse_length(t, fig_source) == 1
        assert transition_probs(t, fig_source) == (F(1), F(0))

    def test_tie_type_checks(self):
        root0 = ParseTree.single_node(0, 3)
        root1 = ParseTree.single_node(1, 3)
        with pytest.raises(TypeMismatchError):
            tie(0, root1, root1)
        with pytest.raises(TypeMismatchError):
            tie(0, root0, root0)
        with pytest.raises(TypeMismatchError):
            tie(1, root0, root1)  # type 1 = n-2 belongs to tie_last
        with pytest.raises(TypeMismatchError):
            tie_last(root0, root1)
        with pytest.raises(TypeMismatchError):
            tie(0, root0, ParseTree.single_node(1, 4))

    def test_codeword_counts_add(self):
        left = tie(0, ParseTree.single_node(0, 3), ParseTree.single_node(1, 3))
        t = tie(0, left, ParseTree.single_node(1, 3))
        assert t.codeword_count == left.codeword_count + 1

    def test_tie_blends_length_and_transitions(self):
        # E and q of a tie are the source-ratio blend of its parts, shifted
        # by the one consumed symbol on the left branch
        rng = random.Random(11)
        for n in (3, 4):
            src = dyadic_source(rng, n)
            for _ in range(20):
                i = rng.randrange(0, n - 2)
                left = random_tree(rng, src, 0, rng.randrange(1, 5))
                right = random_tree(rng, src, i + 1, rng.randrange(1, 5))
                t = tie(i, left, right)
                a = src.cond_prob(i)
                e_left = expected_parse_length(left, src)
                e_right = expected_parse_length(right, src)
                assert expected_parse_length(t, src) == a * (1 + e_left) + (1 - a) * e_right
                ql = transition_probs(left, src)
                qr = transition_probs(right, src)
                assert transition_probs(t, src) == tuple(
                    a * x + (1 - a) * y for x, y in zip(ql, qr)
                )

    def test_tie_last_blends_length_and_transitions(self):
        rng = random.Random(12)
        for n in (3, 4):
            src = dyadic_source(rng, n)
            a = src.cond_prob(n - 2)
            for _ in range(20):
                left = random_tree(rng, src, 0, rng.randrange(1, 5))
                right = random_tree(rng, src, 0, rng.randrange(1, 5))
                t = tie_last(left, right)
                e = 1 + a * expected_parse_length(left, src) + (1 - a) * expected_parse_length(right, src)
                assert expected_parse_length(t, src) == e

    def test_composites_of_valid_parts_conserve(self):
        rng = random.Random(13)
        for n in (3, 4):
            src = dyadic_source(rng, n)
            for _ in range(30):
                size = rng.randrange(2, 7)
                i = rng.randrange(0, n - 1)
                tree = random_tree(rng, src, i, size)
                assert_conservation(tree, src, size)
