"""Shared fixtures: the worked three-symbol source, its hand-built trees,
random dyadic instances, and the exact conservation checks applied to every
tree the suite touches.
"""

from fractions import Fraction as F
import random

import pytest

from aivf import (
    ParseTree,
    SourceModel,
    TreeNode,
    expected_parse_length,
    occurrence_probs,
    tie,
    tie_last,
    transition_probs,
    validate_tree,
)


def build_tree(type_index: int, alphabet_size: int, shape: dict) -> ParseTree:
    """Build a tree from nested {symbol: subshape} dicts, independent of tie."""

    def node(sub: dict) -> TreeNode:
        return TreeNode({sym: node(child) for sym, child in sub.items()})

    return ParseTree(type_index, node(shape), alphabet_size)


@pytest.fixture
def fig_source() -> SourceModel:
    return SourceModel.from_probs([F(3, 5), F(3, 10), F(1, 10)], ["a0", "a1", "a2"])


@pytest.fixture
def fig_trees(fig_source):
    """The optimal two-tree system for the worked source at D=7, built by hand."""
    t0 = build_tree(0, 3, {0: {0: {0: {0: {}}}}, 1: {0: {}}, 2: {}})
    t1 = build_tree(1, 3, {1: {0: {0: {0: {}}}, 1: {}, 2: {}}, 2: {0: {}}})
    return t0, t1


def dyadic_source(rng: random.Random, n: int, bits: int = 8) -> SourceModel:
    """Random source with probabilities c/2^bits, c >= 1."""
    total = 1 << bits
    cuts = sorted(rng.sample(range(1, total), n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    return SourceModel.from_probs([F(p, total) for p in parts])


def random_tree(rng: random.Random, src: SourceModel, type_index: int, size: int):
    """Uniformly random member of the tie decomposition at the given size."""
    n = len(src)
    if size == 1:
        return ParseTree.single_node(type_index, n)
    split = rng.randrange(1, size)
    left = random_tree(rng, src, 0, split)
    if type_index == n - 2:
        return tie_last(left, random_tree(rng, src, 0, size - split))
    return tie(type_index, left, random_tree(rng, src, type_index + 1, size - split))


@pytest.fixture(scope="session")
def random_instances():
    """Twenty (source, dict size) pairs, |S| in {3,4}, D in 2..6, fixed seed.

    Sized so the brute-force oracle stays well inside its guards: the chain
    count at |S|=4, D=6 is 42^3 which dominates everything else, so D is
    capped at 5 there.
    """
    rng = random.Random(0xA1FF)
    out = []
    for _ in range(20):
        n = rng.choice([3, 4])
        d = rng.randrange(2, 7 if n == 3 else 6)
        out.append((dyadic_source(rng, n), d))
    return out


def assert_conservation(tree: ParseTree, src: SourceModel, dict_size: int):
    """The exact per-tree laws: probabilities conserve, the chain can always
    return to type 0, and the tree fits the size budget."""
    assert not validate_tree(tree, src)
    entries = occurrence_probs(tree, src)
    assert sum(e.occurrence_prob for e in entries) == 1
    assert all(e.occurrence_prob > 0 for e in entries)
    q = transition_probs(tree, src)
    assert sum(q) == 1
    assert q[0] > 0
    assert tree.node_count <= 2 * dict_size
    assert 0 <= expected_parse_length(tree, src) <= dict_size
