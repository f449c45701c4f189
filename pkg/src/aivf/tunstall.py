"""Classic Tunstall variable-to-fixed codes, as a baseline and special case.

Tunstall's greedy rule repeatedly replaces the most probable dictionary word
by all its single-symbol extensions. The resulting parse tree is complete
(every internal node branches on the whole alphabet), so it doubles as a
one-tree AIVF code system in which every word transfers back to tree 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction

from . import render
from .parse_tree import (
    DictEntry,
    ParseTree,
    TreeNode,
    expected_parse_length,
    occurrence_probs,
)
from .source_model import SourceModel


@dataclass(frozen=True)
class TunstallCode:
    """A built Tunstall code: the parse tree, its dictionary, and the trace.

    ``trace`` records the expanded word and its probability for each greedy
    step, in order; it is what the greedy invariant is checked against.
    """

    source: SourceModel
    tree: ParseTree
    entries: tuple[DictEntry, ...]
    dict_size: int
    expansions: int
    trace: tuple[tuple[tuple[int, ...], Fraction], ...]

    @property
    def expected_length(self) -> Fraction:
        return sum(
            (e.occurrence_prob * e.length for e in self.entries), Fraction(0)
        )


def build_tunstall(src: SourceModel, expansions: int) -> TunstallCode:
    """Run ``expansions`` greedy steps; dictionary size is n + (n-1)*expansions.

    Ties on the most probable leaf are broken toward the lexicographically
    smallest word, so the construction is deterministic.
    """
    if expansions < 0:
        raise ValueError(f"expansion count must be >= 0, got {expansions}")
    n = len(src)
    root = TreeNode({sym: TreeNode() for sym in range(n)})
    leaves: dict[tuple[int, ...], tuple[Fraction, TreeNode]] = {
        (sym,): (src.probs[sym], root.children[sym]) for sym in range(n)
    }
    trace = []
    for _ in range(expansions):
        word = min(leaves, key=lambda w: (-leaves[w][0], w))
        prob, node = leaves.pop(word)
        trace.append((word, prob))
        node.children = {sym: TreeNode() for sym in range(n)}
        for sym in range(n):
            leaves[word + (sym,)] = (prob * src.probs[sym], node.children[sym])
    tree = ParseTree(0, root, n)
    entries = occurrence_probs(tree, src)
    return TunstallCode(src, tree, entries, len(entries), expansions, tuple(trace))


@dataclass(frozen=True)
class Rate:
    """A coding rate log2(dict_size)/expected_length with its exact inputs."""

    dict_size: int
    expected_length: Fraction
    decimal: Decimal


def coding_rate(dict_size: int, expected_length: Fraction, digits: int = 12) -> Rate:
    """Bits of codeword per expected source symbol, correctly rounded."""
    if dict_size < 2:
        raise ValueError(f"dictionary size must be >= 2, got {dict_size}")
    return Rate(
        dict_size,
        expected_length,
        render.rate_decimal(dict_size, expected_length, digits),
    )


def tunstall_expected_length(src: SourceModel, expansions: int) -> Fraction:
    """Convenience: expected parse length of the greedy code."""
    return expected_parse_length(build_tunstall(src, expansions).tree, src)
