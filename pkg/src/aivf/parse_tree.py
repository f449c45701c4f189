"""Parse trees for almost-instantaneous variable-to-fixed (AIVF) coding.

An AIVF code for an alphabet of n symbols keeps one parse tree per type
i = 0..n-2. Edges are labeled with symbols; the root of a type-i tree may only
branch on symbols a_i, a_{i+1}, ... (the i most probable symbols are handled
by switching to a lower-typed tree beforehand). Codewords sit on every leaf
and on every incomplete internal node; an incomplete root additionally owns
the empty word, which consumes no input and merely hands the parse to the
tree named by its transfer type.

Structural rules enforced by :func:`validate_tree`:

* root of a type-i tree has j children labeled a_i..a_{i+j-1}, with either
  j = n-i (complete root, no empty word) or 1 <= j <= n-2-i (the empty word
  transfers to tree i+j, which must exist);
* internal non-root nodes have j children labeled a_0..a_{j-1} with
  1 <= j <= n-2 (incomplete, carries a codeword) or j = n (complete, none);
* leaves carry codewords and transfer to tree 0.

Codeword indices are assigned in depth-first preorder by ascending edge
label, with the root's empty word (if any) numbered last.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import (
    FirstSymbolBelowTypeError,
    TypeMismatchError,
    UnknownSymbolError,
)
from .source_model import SourceModel

Word = tuple[int, ...]


class TreeNode:
    """A tree node; ``children`` maps symbol index to child node.

    Nodes are treated as immutable once their tree is published, and may be
    shared between trees (the tie operations reuse whole subtrees).
    """

    __slots__ = ("children",)

    def __init__(self, children: dict[int, "TreeNode"] | None = None):
        self.children: dict[int, TreeNode] = dict(children) if children else {}

    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class DictEntry:
    """One dictionary word of a parse tree.

    ``index`` is the 1-based codeword number, ``word`` the symbol-index path
    from the root (empty for the root's own word), ``target_type`` the tree
    that parses the following word. ``occurrence_prob`` is filled in by
    :func:`occurrence_probs`.
    """

    index: int
    word: Word
    target_type: int
    occurrence_prob: Fraction | None = None

    @property
    def length(self) -> int:
        return len(self.word)


@dataclass(frozen=True)
class RuleViolation:
    rule: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.rule} at {self.path}: {self.message}"


class ParseTree:
    """A parse tree of a fixed type over a fixed alphabet size.

    The dictionary (codeword entries) is derived from the structure at
    construction time; occurrence probabilities are computed on demand
    against a source model.
    """

    __slots__ = ("type_index", "alphabet_size", "root", "dictionary", "_by_word", "_key")

    def __init__(self, type_index: int, root: TreeNode, alphabet_size: int):
        self.type_index = type_index
        self.alphabet_size = alphabet_size
        self.root = root
        self.dictionary, self._by_word = _derive_dictionary(self)
        self._key = None

    @classmethod
    def single_node(cls, type_index: int, alphabet_size: int) -> "ParseTree":
        """The one-codeword building block: a bare root owning the empty word.

        Not a valid final tree (the root must branch), but the base case of
        the size DP and of the tie decompositions.
        """
        return cls(type_index, TreeNode(), alphabet_size)

    @property
    def codeword_count(self) -> int:
        return len(self.dictionary)

    @property
    def node_count(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            count += 1
            stack.extend(node.children.values())
        return count

    def entry_for(self, word: Word) -> DictEntry | None:
        """The dictionary entry at root path ``word``, if that node carries one.

        Keyed by path rather than node object: subtrees may be shared
        between positions, so a node object does not identify a position.
        """
        return self._by_word.get(tuple(word))

    def key(self):
        """Hashable structural identity: (type, alphabet size, shape)."""
        if self._key is None:
            self._key = (self.type_index, self.alphabet_size, _node_key(self.root))
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, ParseTree) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return (
            f"ParseTree(type={self.type_index}, n={self.alphabet_size}, "
            f"codewords={self.codeword_count})"
        )


def _node_key(node: TreeNode):
    return tuple((sym, _node_key(node.children[sym])) for sym in sorted(node.children))


def _walk(tree: ParseTree) -> Iterator[tuple[TreeNode, Word]]:
    """Preorder traversal by ascending edge label, root first."""

    def visit(node: TreeNode, word: Word):
        yield node, word
        for sym in sorted(node.children):
            yield from visit(node.children[sym], word + (sym,))

    yield from visit(tree.root, ())


def _derive_dictionary(tree: ParseTree):
    n = tree.alphabet_size
    entries: list[DictEntry] = []
    by_word: dict[Word, DictEntry] = {}
    root_children = len(tree.root.children)
    for node, word in _walk(tree):
        if not word:
            continue
        j = len(node.children)
        if j == n:
            continue  # complete internal node, no codeword
        entry = DictEntry(len(entries) + 1, word, j)
        entries.append(entry)
        by_word[word] = entry
    if root_children < n - tree.type_index:
        # incomplete root: the empty word, numbered last
        entry = DictEntry(len(entries) + 1, (), tree.type_index + root_children)
        entries.append(entry)
        by_word[()] = entry
    return tuple(entries), by_word


def validate_tree(tree: ParseTree, src: SourceModel) -> list[RuleViolation]:
    """Check the structural rules; an empty list means the tree is valid."""
    n = len(src)
    out: list[RuleViolation] = []

    def path_of(word: Word) -> str:
        if not word:
            return "root"
        return "/".join(src.symbols[s] if s < n else f"#{s}" for s in word)

    if tree.alphabet_size != n:
        out.append(
            RuleViolation(
                "alphabet",
                "root",
                f"tree built for {tree.alphabet_size} symbols, source has {n}",
            )
        )
        return out
    i = tree.type_index
    if not 0 <= i <= n - 2:
        out.append(RuleViolation("type-range", "root", f"type {i} outside [0, {n - 2}]"))
        return out

    for node, word in _walk(tree):
        j = len(node.children)
        labels = sorted(node.children)
        if not word:
            if not 1 <= j <= n - i:
                out.append(
                    RuleViolation(
                        "root-range",
                        "root",
                        f"root of a type-{i} tree needs 1..{n - i} children, has {j}",
                    )
                )
            elif labels != list(range(i, i + j)):
                out.append(
                    RuleViolation(
                        "root-labels",
                        "root",
                        f"root edges must be a_{i}..a_{i + j - 1}, got "
                        + str([src.symbols[s] for s in labels]),
                    )
                )
            elif j < n - i and i + j > n - 2:
                out.append(
                    RuleViolation(
                        "root-word-range",
                        "root",
                        f"incomplete root would transfer its empty word to "
                        f"tree {i + j}, but only trees 0..{n - 2} exist",
                    )
                )
            continue
        if j == 0:
            continue
        if not (1 <= j <= n - 2 or j == n):
            out.append(
                RuleViolation(
                    "internal-range",
                    path_of(word),
                    f"internal node needs 1..{n - 2} or exactly {n} children, has {j}",
                )
            )
        elif labels != list(range(j)):
            out.append(
                RuleViolation(
                    "internal-labels",
                    path_of(word),
                    f"internal edges must be a_0..a_{j - 1}, got "
                    + str([src.symbols[s] if s < n else f"#{s}" for s in labels]),
                )
            )

    budget = 2 * tree.codeword_count
    if tree.node_count > budget:
        out.append(
            RuleViolation(
                "node-budget",
                "root",
                f"{tree.node_count} nodes exceed twice the {tree.codeword_count}-word dictionary",
            )
        )
    return out


def word_prob(src: SourceModel, word: Sequence[int]) -> Fraction:
    """Product of symbol probabilities; 1 for the empty word."""
    out = Fraction(1)
    n = len(src)
    for sym in word:
        if not 0 <= sym < n:
            raise UnknownSymbolError(f"symbol index {sym} outside alphabet of {n}")
        out *= src.probs[sym]
    return out


def conditional_word_prob(src: SourceModel, type_index: int, word: Sequence[int]) -> Fraction:
    """Word probability conditioned on the first symbol being a_i or later.

    The empty word has conditional probability 1; a nonempty word must start
    at symbol ``type_index`` or later.
    """
    if not 0 <= type_index <= len(src) - 2:
        raise IndexError(f"type index {type_index} outside [0, {len(src) - 2}]")
    if not word:
        return Fraction(1)
    if word[0] < type_index:
        raise FirstSymbolBelowTypeError(
            f"word starts with a_{word[0]} but is conditioned on type {type_index}"
        )
    return word_prob(src, word) / src.tail_sums[type_index]


def occurrence_probs(tree: ParseTree, src: SourceModel) -> tuple[DictEntry, ...]:
    """The dictionary with each entry's occurrence probability filled in.

    A word occurs when the parse stops at its node: its conditional
    probability minus that of every single-symbol extension still inside the
    tree. Probabilities are computed in one preorder pass and sum to 1.
    """
    i = tree.type_index
    tail = src.tail_sums[i]
    probs: list[Fraction] = []
    root_occ = None

    def visit(node: TreeNode, node_prob: Fraction, at_root: bool):
        nonlocal root_occ
        child_probs = {}
        for sym in sorted(node.children):
            ratio = src.probs[sym] / tail if at_root else src.probs[sym]
            child_probs[sym] = node_prob * ratio
        occurrence = node_prob - sum(child_probs.values())
        if at_root:
            root_occ = occurrence
        elif len(node.children) != tree.alphabet_size:
            probs.append(occurrence)
        for sym in sorted(node.children):
            visit(node.children[sym], child_probs[sym], False)

    visit(tree.root, Fraction(1), True)
    if len(tree.root.children) < tree.alphabet_size - i:
        probs.append(root_occ)
    if len(probs) != len(tree.dictionary):  # pragma: no cover - structural guarantee
        raise TypeMismatchError("dictionary and probability pass disagree")
    return tuple(
        replace(entry, occurrence_prob=p) for entry, p in zip(tree.dictionary, probs)
    )


def expected_parse_length(tree: ParseTree, src: SourceModel) -> Fraction:
    """Expected number of source symbols consumed per dictionary word."""
    return sum(
        (e.occurrence_prob * e.length for e in occurrence_probs(tree, src)),
        Fraction(0),
    )


def transition_probs(tree: ParseTree, src: SourceModel) -> tuple[Fraction, ...]:
    """Probability of handing the parse to each tree type, indexed 0..n-2."""
    out = [Fraction(0)] * (len(src) - 1)
    for entry in occurrence_probs(tree, src):
        out[entry.target_type] += entry.occurrence_prob
    return tuple(out)


def tie(i: int, left: ParseTree, right: ParseTree) -> ParseTree:
    """Graft a type-0 tree under a new edge a_i on a type-(i+1) tree's root.

    Produces a type-i tree whose dictionary is the disjoint union of the two
    inputs' dictionaries. Defined for 0 <= i <= n-3; the type-(n-2) case is
    :func:`tie_last`.
    """
    n = left.alphabet_size
    if right.alphabet_size != n:
        raise TypeMismatchError("tie inputs built for different alphabets")
    if not 0 <= i <= n - 3:
        raise TypeMismatchError(f"tie type {i} outside [0, {n - 3}]")
    if left.type_index != 0:
        raise TypeMismatchError(f"tie left input must be type 0, got {left.type_index}")
    if right.type_index != i + 1:
        raise TypeMismatchError(
            f"tie right input must be type {i + 1}, got {right.type_index}"
        )
    children = {i: left.root}
    children.update(right.root.children)
    return ParseTree(i, TreeNode(children), n)


def tie_last(left: ParseTree, right: ParseTree) -> ParseTree:
    """Join two type-0 trees under a fresh complete type-(n-2) root."""
    n = left.alphabet_size
    if right.alphabet_size != n:
        raise TypeMismatchError("tie inputs built for different alphabets")
    if left.type_index != 0 or right.type_index != 0:
        raise TypeMismatchError(
            f"tie_last inputs must be type 0, got {left.type_index} and {right.type_index}"
        )
    root = TreeNode({n - 2: left.root, n - 1: right.root})
    return ParseTree(n - 2, root, n)
