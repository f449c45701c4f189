"""Size-constrained optimal parse trees by dynamic programming.

Every type-i tree with d >= 2 codewords splits uniquely at its root: the
subtree under the lowest root edge is a type-0 tree with l codewords, and the
rest of the root is a type-(i+1) tree with d-l codewords (for the last type,
two type-0 trees under a fresh complete root). Conversely the tie operations
reassemble the pieces. Writing a_i for the branching ratio ``src.cond_prob(i)``,
the figure of merit

    cost(t, w) = E[parse length of t] + sum_j transitions[j] * w[j-1]

is affine under both splits, which yields the recursion

    OPT(i:d) = max_l  a_i * (1 + OPT(0:l)) + (1 - a_i) * OPT(i+1:d-l)
    OPT(n-2:d) = max_l  1 + a_{n-2} * OPT(0:l) + (1 - a_{n-2}) * OPT(0:d-l)

over 1 <= l <= d-1, with OPT(0:1) = 0 and OPT(k:1) = w[k-1] for k >= 1 (the
single-node building block consumes nothing and always transfers to tree k).

A restriction P (always containing type 0) forbids dictionary words that
transfer to types outside P. Since every occurrence probability is strictly
positive, that is exactly the set of trees whose transition vector vanishes
outside P, and it is enforced by a single change: the single-node base case
of type k >= 1 exists only for k in P. Minimal feasible sizes for the other
types (forced chains toward the next type in P, or the complete-root tree
when none exists) then emerge from the recursion; ``restricted_base_trees``
builds them directly as an independent cross-check.

Ties on the split index are broken toward the smallest l, so reconstructed
trees are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InfeasibleTypeError
from .parse_tree import ParseTree, expected_parse_length, tie, tie_last, transition_probs
from .source_model import SourceModel

Weights = tuple[Fraction, ...]


@dataclass(frozen=True)
class DpTables:
    """Filled DP tables; ``opt[i][d]``/``split[i][d]`` are None when infeasible."""

    dict_size: int
    weights: Weights
    restriction: frozenset[int]
    opt: tuple[tuple[Fraction | None, ...], ...]
    split: tuple[tuple[int | None, ...], ...]

    def is_feasible(self, type_index: int, size: int | None = None) -> bool:
        size = self.dict_size if size is None else size
        return self.opt[type_index][size] is not None

    def value(self, type_index: int, size: int | None = None) -> Fraction:
        size = self.dict_size if size is None else size
        out = self.opt[type_index][size]
        if out is None:
            raise InfeasibleTypeError(type_index, size, self.restriction)
        return out


def _check_inputs(src: SourceModel, weights: Sequence[Fraction], restriction):
    n = len(src)
    w = tuple(Fraction(x) for x in weights)
    if len(w) != n - 2:
        raise ValueError(f"need {n - 2} weights for {n} symbols, got {len(w)}")
    if restriction is None:
        p = frozenset(range(n - 1))
    else:
        p = frozenset(restriction)
        if 0 not in p:
            raise ValueError("the restriction must contain type 0")
        if not p <= set(range(n - 1)):
            raise ValueError(f"restriction {sorted(p)} outside types 0..{n - 2}")
    return w, p


def _fill(src: SourceModel, dict_size: int, weights: Weights, restriction: frozenset[int]):
    n = len(src)
    m = n - 1
    alphas = [src.cond_prob(i) for i in range(m)]
    comp = [1 - a for a in alphas]
    opt: list[list[Fraction | None]] = [[None] * (dict_size + 1) for _ in range(m)]
    split: list[list[int | None]] = [[None] * (dict_size + 1) for _ in range(m)]
    opt[0][1] = Fraction(0)
    for k in range(1, m):
        if k in restriction:
            opt[k][1] = weights[k - 1]

    # left[i][l] and right[i][r] cache the two affine pieces of the recursion
    # so the inner loop is one addition and one comparison.
    left: list[list[Fraction | None]] = [[None] * (dict_size + 1) for _ in range(m)]
    right: list[list[Fraction | None]] = [[None] * (dict_size + 1) for _ in range(m)]

    def extend_caches(d: int):
        base = opt[0][d]
        for i in range(m):
            if base is not None:
                left[i][d] = alphas[i] * (1 + base) if i < n - 2 else 1 + alphas[i] * base
            other = opt[i + 1][d] if i < n - 2 else base
            if other is not None:
                right[i][d] = comp[i] * other

    if dict_size >= 1:
        extend_caches(1)
    for d in range(2, dict_size + 1):
        for i in range(m):
            li = left[i]
            ri = right[i]
            best = None
            arg = None
            for l in range(1, d):
                a = li[l]
                if a is None:
                    continue
                b = ri[d - l]
                if b is None:
                    continue
                v = a + b
                if best is None or v > best:
                    best = v
                    arg = l
            opt[i][d] = best
            split[i][d] = arg
        extend_caches(d)
    return (
        tuple(tuple(row) for row in opt),
        tuple(tuple(row) for row in split),
    )


def dp_costs_only(
    src: SourceModel,
    dict_size: int,
    weights: Sequence[Fraction],
    restriction=None,
) -> DpTables:
    """Fill the tables without reconstructing any trees."""
    if dict_size < 1:
        raise ValueError(f"dictionary size must be >= 1, got {dict_size}")
    w, p = _check_inputs(src, weights, restriction)
    opt, split = _fill(src, dict_size, w, p)
    return DpTables(dict_size, w, p, opt, split)


def dp_optimize(
    src: SourceModel,
    dict_size: int,
    weights: Sequence[Fraction],
    restriction=None,
) -> tuple[DpTables, dict[int, ParseTree]]:
    """Fill the tables and rebuild one optimal tree per feasible type.

    The returned mapping holds, for every type i feasible at ``dict_size``,
    a tree attaining ``tables.value(i)``; infeasible types are absent (their
    value lookups raise :class:`InfeasibleTypeError`).
    """
    if dict_size < 2:
        raise ValueError(f"final trees need >= 2 codewords, got {dict_size}")
    tables = dp_costs_only(src, dict_size, weights, restriction)
    n = len(src)
    memo: dict[tuple[int, int], ParseTree] = {}

    def build(i: int, d: int) -> ParseTree:
        got = memo.get((i, d))
        if got is not None:
            return got
        if d == 1:
            t = ParseTree.single_node(i, n)
        else:
            l = tables.split[i][d]
            if i < n - 2:
                t = tie(i, build(0, l), build(i + 1, d - l))
            else:
                t = tie_last(build(0, l), build(0, d - l))
        memo[(i, d)] = t
        return t

    trees = {
        i: build(i, dict_size)
        for i in range(n - 1)
        if tables.is_feasible(i, dict_size)
    }
    return tables, trees


def tree_cost(tree: ParseTree, src: SourceModel, weights: Sequence[Fraction]) -> Fraction:
    """Expected parse length plus transition-weighted bonus, computed directly."""
    w, _ = _check_inputs(src, weights, None)
    q = transition_probs(tree, src)
    out = expected_parse_length(tree, src)
    for j in range(1, len(q)):
        out += q[j] * w[j - 1]
    return out


def restricted_base_trees(
    src: SourceModel, restriction=None
) -> dict[int, tuple[int, ParseTree]]:
    """Minimal feasible tree (and its size) per type under a restriction.

    Types in the restriction (and type 0) keep the single-node base. A type j
    outside it must climb to the smallest restricted type i > j: a chain of
    leaf edges a_j..a_{i-1} whose root word transfers to i, with i-j+1
    codewords. If the restriction has no type above j, the smallest feasible
    tree is the complete-root tree of size n-j.
    """
    _, p = _check_inputs(src, (Fraction(0),) * (len(src) - 2), restriction)
    n = len(src)
    out: dict[int, tuple[int, ParseTree]] = {}
    for j in range(n - 1):
        if j == 0 or j in p:
            out[j] = (1, ParseTree.single_node(j, n))
            continue
        above = [i for i in sorted(p) if i > j]
        if above:
            t = ParseTree.single_node(above[0], n)
            for k in range(above[0] - 1, j - 1, -1):
                t = tie(k, ParseTree.single_node(0, n), t)
        else:
            t = tie_last(ParseTree.single_node(0, n), ParseTree.single_node(0, n))
            for k in range(n - 3, j - 1, -1):
                t = tie(k, ParseTree.single_node(0, n), t)
        out[j] = (t.codeword_count, t)
    return out
