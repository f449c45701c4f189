"""Markov-chain view of an AIVF code system and its hyperplane geometry.

A chain of parse trees, one per type, induces a Markov chain on the types:
after a word of tree i, the parse moves to the word's transfer type. Since
every tree owns at least one leaf, type 0 is reachable from everywhere, so
the stationary distribution exists and is unique; the long-run expected
parse length is the stationary average of the per-tree expectations.

Maximizing that average is a concave minimization in disguise: each tree of
type k defines an affine function of a weight point x (one coordinate per
type 1..n-2),

    f(x) = (D - E[parse length]) + sum_j transitions[j] * x_j - [k > 0] x_k,

and a chain is optimal exactly when its n-1 hyperplanes meet in a single
multityped point whose height no tree of any type can undercut. The solvers
in :mod:`aivf.global_solver` search for that point; this module supplies the
hyperplanes, the exact intersection, and the stationary analytics.

All linear algebra is exact: systems are cleared to integers and eliminated
fraction-free (Bareiss), pivoting on magnitude only to keep intermediate
integers small.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import ConsistencyError, SingularSystemError, TypeMismatchError
from .parse_tree import ParseTree, expected_parse_length, transition_probs
from .source_model import SourceModel


def solve_linear(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> tuple[Fraction, ...]:
    """Solve a square exact system; raises SingularSystemError otherwise."""
    size = len(rows)
    if size == 0:
        return ()
    work: list[list[int]] = []
    for row, b in zip(rows, rhs):
        if len(row) != size:
            raise ValueError("matrix must be square")
        entries = [Fraction(v) for v in row] + [Fraction(b)]
        scale = lcm(*(v.denominator for v in entries))
        work.append([int(v * scale) for v in entries])

    prev = 1
    for col in range(size):
        pivot = max(range(col, size), key=lambda r: abs(work[r][col]))
        if work[pivot][col] == 0:
            raise SingularSystemError(f"no pivot in column {col}")
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
        lead = work[col][col]
        for r in range(col + 1, size):
            factor = work[r][col]
            row = work[r]
            upper = work[col]
            for c in range(col + 1, size + 1):
                row[c] = (row[c] * lead - factor * upper[c]) // prev
            row[col] = 0
        prev = lead

    out: list[Fraction] = [Fraction(0)] * size
    for r in range(size - 1, -1, -1):
        acc = Fraction(work[r][size])
        for c in range(r + 1, size):
            acc -= work[r][c] * out[c]
        out[r] = acc / work[r][r]
    return tuple(out)


@dataclass(frozen=True)
class Chain:
    """One parse tree per type, in type order."""

    trees: tuple[ParseTree, ...]

    def __post_init__(self):
        for k, tree in enumerate(self.trees):
            if tree.type_index != k:
                raise TypeMismatchError(
                    f"chain position {k} holds a type-{tree.type_index} tree"
                )

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def key(self):
        return tuple(t.key() for t in self.trees)


def transition_matrix(chain: Chain, src: SourceModel) -> tuple[tuple[Fraction, ...], ...]:
    """Row k holds tree k's transfer probabilities to each type."""
    return tuple(transition_probs(t, src) for t in chain)


def stationary(matrix: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    """Stationary distribution of a row-stochastic matrix, exactly.

    Solves the balance equations (dropping the redundant first one) together
    with normalization. Raises SingularSystemError when the distribution is
    not unique.
    """
    m = len(matrix)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for j in range(1, m):
        rows.append([matrix[i][j] - (1 if i == j else 0) for i in range(m)])
        rhs.append(Fraction(0))
    rows.append([Fraction(1)] * m)
    rhs.append(Fraction(1))
    pi = solve_linear(rows, rhs)
    if any(p < 0 for p in pi):
        raise SingularSystemError(f"stationary solution has negative mass: {pi}")
    return pi


def global_parse_length(chain: Chain, src: SourceModel) -> Fraction:
    """Long-run expected parse length: stationary average over the chain."""
    pi = stationary(transition_matrix(chain, src))
    return sum(
        (p * expected_parse_length(t, src) for p, t in zip(pi, chain)), Fraction(0)
    )


@dataclass(frozen=True)
class Hyperplane:
    """The affine function a type-k tree contributes to the search.

    ``cost`` is D minus the tree's expected parse length (so bigger parse
    length means a lower hyperplane), ``transitions`` its transfer vector.
    """

    state_type: int
    cost: Fraction
    transitions: tuple[Fraction, ...]

    def value_at(self, point: Sequence[Fraction]) -> Fraction:
        out = self.cost
        for j in range(1, len(self.transitions)):
            out += self.transitions[j] * point[j - 1]
        if self.state_type > 0:
            out -= point[self.state_type - 1]
        return out


def state_hyperplane(tree: ParseTree, src: SourceModel, dict_size: int) -> Hyperplane:
    """Build the hyperplane of a tree (for its own type) at a dictionary size."""
    e_len = expected_parse_length(tree, src)
    if e_len > dict_size:
        raise ConsistencyError(
            f"expected parse length {e_len} exceeds dictionary size {dict_size}"
        )
    return Hyperplane(tree.type_index, dict_size - e_len, transition_probs(tree, src))


@dataclass(frozen=True)
class IntersectionPoint:
    """The unique point where a chain's hyperplanes all meet."""

    point: tuple[Fraction, ...]
    height: Fraction


def multityped_intersection(
    chain: Chain, src: SourceModel, dict_size: int
) -> IntersectionPoint:
    """Meet point of the chain's n-1 hyperplanes, one per type.

    The system is square in (x_1..x_{n-2}, height); its solution's height
    equals the stationary average of the hyperplane costs, which is checked
    before returning (the two derivations must agree to the last bit).
    """
    m = len(chain)
    if m != len(src) - 1:
        raise TypeMismatchError(f"chain of {m} trees for an alphabet of {len(src)}")
    planes = [state_hyperplane(t, src, dict_size) for t in chain]
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for k, plane in enumerate(planes):
        row = [Fraction(0)] * m
        for j in range(1, m):
            row[j - 1] += plane.transitions[j]
        if k > 0:
            row[k - 1] -= 1
        row[m - 1] = Fraction(-1)  # the height unknown
        rows.append(row)
        rhs.append(-plane.cost)
    solution = solve_linear(rows, rhs)
    point = solution[: m - 1]
    height = solution[-1]

    pi = stationary([p.transitions for p in planes])
    direct = sum((p * plane.cost for p, plane in zip(pi, planes)), Fraction(0))
    if direct != height:
        raise ConsistencyError(
            f"intersection height {height} disagrees with stationary average {direct}"
        )
    return IntersectionPoint(point, height)
