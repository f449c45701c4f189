"""Certified solvers for the optimal AIVF chain at a fixed dictionary size.

The search space is finite (one tree per type, each with exactly D
codewords) but exponentially large; its structure is the lower envelope

    g_k(x) = min over type-k trees of the tree's hyperplane at x,

computable for all types at once by one DP sweep, because minimizing the
hyperplane is the same as maximizing the DP cost at the negated point. The
optimum is the unique point where all n-1 envelopes meet at the maximal
height h(x) = min_k g_k(x); a chain is certified optimal when each of its
hyperplanes passes through that point and equals its envelope there.

Three independent routes to the same exact answer:

* :func:`solve_iterative` - alternate "best chain at the current point" with
  "intersection point of the current chain"; heights are non-increasing and
  the loop stops at the first exact certificate.
* :func:`solve_cutting_plane` - Kelley's method over the bounding box with an
  exact rational simplex; DP sweeps separate, violated hyperplanes accumulate
  as cuts, and the relaxation closes exactly on the optimum.
* :func:`brute_force_optimum` - enumerate every chain (guarded) and take the
  exact maximum of the stationary average parse length.

All three return a :class:`SolverResult` whose certificate re-evaluates the
envelopes at the final point; equality must hold for every type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import simplex
from .errors import (
    ConsistencyError,
    CycleDetectedError,
    IterationCapError,
    TooLargeError,
)
from .local_dp import dp_optimize
from .markov import (
    Chain,
    Hyperplane,
    IntersectionPoint,
    multityped_intersection,
    state_hyperplane,
    stationary,
)
from .parse_tree import ParseTree, tie, tie_last
from .source_model import SourceModel

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class BoundingBox:
    """Hypercube [-radius, radius]^(n-2) guaranteed to contain the optimum."""

    dimension: int
    radius: Fraction

    def contains(self, point: Sequence[Fraction]) -> bool:
        return all(-self.radius <= v <= self.radius for v in point)


@dataclass(frozen=True)
class SolverResult:
    chain: Chain
    point: Point
    height: Fraction
    parse_length: Fraction
    certificate: tuple[tuple[Fraction, bool], ...]
    iterations: int
    trace: tuple[tuple[object, Fraction], ...]
    chains_examined: int | None = None

    @property
    def certified(self) -> bool:
        return all(ok for _, ok in self.certificate)


def bounding_box(src: SourceModel, dict_size: int) -> BoundingBox:
    """Radius D / p_min^D.

    Every tree's leaf mass is at least p_min^D, so beyond the radius a type's
    own hyperplane is forced below 0 (or above D on the other side) and the
    meet point cannot lie there.
    """
    radius = Fraction(dict_size) / (src.min_prob ** dict_size)
    return BoundingBox(len(src) - 2, radius)


def all_type_envelopes(
    src: SourceModel,
    dict_size: int,
    point: Sequence[Fraction],
    restriction=None,
) -> list[tuple[Fraction, ParseTree]]:
    """(envelope value, witness tree) for every type, via one DP sweep.

    A type-k tree's hyperplane at x is D - [k>0] x_k - cost(tree, -x), so the
    envelope minimum is attained by the DP maximum at the negated point.
    """
    weights = tuple(-Fraction(v) for v in point)
    tables, trees = dp_optimize(src, dict_size, weights, restriction)
    out = []
    for k in range(len(src) - 1):
        value = Fraction(dict_size) - tables.value(k)
        if k > 0:
            value -= point[k - 1]
        out.append((value, trees[k]))
    return out


def type_envelope(
    src: SourceModel,
    dict_size: int,
    state_type: int,
    point: Sequence[Fraction],
    restriction=None,
) -> tuple[Fraction, ParseTree]:
    """Envelope of one type (the DP sweep still prices every type)."""
    return all_type_envelopes(src, dict_size, point, restriction)[state_type]


def min_envelope(
    src: SourceModel,
    dict_size: int,
    point: Sequence[Fraction],
    restriction=None,
) -> Fraction:
    """h(x): the pointwise minimum of all type envelopes."""
    return min(v for v, _ in all_type_envelopes(src, dict_size, point, restriction))


def _certificate(
    src: SourceModel, dict_size: int, meet: IntersectionPoint
) -> tuple[list[tuple[Fraction, bool]], list[ParseTree]]:
    env = all_type_envelopes(src, dict_size, meet.point)
    cert = [(value, value == meet.height) for value, _ in env]
    return cert, [tree for _, tree in env]


def _result(
    chain: Chain,
    meet: IntersectionPoint,
    dict_size: int,
    certificate,
    iterations: int,
    trace,
    chains_examined=None,
) -> SolverResult:
    return SolverResult(
        chain=chain,
        point=meet.point,
        height=meet.height,
        parse_length=dict_size - meet.height,
        certificate=tuple(certificate),
        iterations=iterations,
        trace=tuple(trace),
        chains_examined=chains_examined,
    )


def _iterate(
    src: SourceModel,
    dict_size: int,
    chain: Chain,
    iteration_cap: int,
    trace: list,
    iterations: int = 0,
) -> SolverResult:
    """Shared refinement loop: intersect, certify, move to the witness chain."""
    seen = {chain.key()}
    while True:
        meet = multityped_intersection(chain, src, dict_size)
        trace.append((chain.key(), meet.height))
        certificate, witnesses = _certificate(src, dict_size, meet)
        if all(ok for _, ok in certificate):
            return _result(chain, meet, dict_size, certificate, iterations, trace)
        next_chain = Chain(tuple(witnesses))
        if next_chain.key() in seen:
            raise CycleDetectedError(trace)
        iterations += 1
        if iterations > iteration_cap:
            raise IterationCapError(iteration_cap, trace)
        seen.add(next_chain.key())
        chain = next_chain


def default_iteration_cap(src: SourceModel, dict_size: int) -> int:
    return 10 * (len(src) - 1) * dict_size


def solve_iterative(
    src: SourceModel, dict_size: int, iteration_cap: int | None = None
) -> SolverResult:
    """Fixed-point iteration from the all-zero point."""
    if dict_size < 2:
        raise ValueError(f"dictionary size must be >= 2, got {dict_size}")
    cap = default_iteration_cap(src, dict_size) if iteration_cap is None else iteration_cap
    m = len(src) - 1
    origin = (Fraction(0),) * (m - 1)
    start = Chain(tuple(tree for _, tree in all_type_envelopes(src, dict_size, origin)))
    if m == 1:
        # one tree, no free coordinates: the DP answer is the answer
        meet = multityped_intersection(start, src, dict_size)
        plane = state_hyperplane(start.trees[0], src, dict_size)
        certificate = ((plane.cost, plane.cost == meet.height),)
        return _result(start, meet, dict_size, certificate, 0, [(start.key(), meet.height)])
    return _iterate(src, dict_size, start, cap, [])


def _solve_relaxation(
    cuts: list[Hyperplane], box: BoundingBox, dict_size: int
) -> tuple[Point, Fraction]:
    """Maximize the height under the box and the accumulated cuts, exactly.

    Free coordinates are split into positive and negative parts so that the
    origin is the all-slack basic solution, which is feasible because every
    hyperplane's cost term is nonnegative.
    """
    dim = box.dimension
    nvars = 2 * dim + 1  # x+ parts, x- parts, height
    objective = [Fraction(0)] * (2 * dim) + [Fraction(1)]
    lhs: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for j in range(dim):
        row = [Fraction(0)] * nvars
        row[j] = Fraction(1)
        row[dim + j] = Fraction(-1)
        lhs.append(row)
        rhs.append(box.radius)
        lhs.append([-v for v in row])
        rhs.append(box.radius)
    top = [Fraction(0)] * nvars
    top[-1] = Fraction(1)
    lhs.append(top)
    rhs.append(Fraction(dict_size))
    for plane in cuts:
        row = [Fraction(0)] * nvars
        for j in range(1, dim + 1):
            coeff = -plane.transitions[j]
            if plane.state_type == j:
                coeff += 1
            row[j - 1] = coeff
            row[dim + j - 1] = -coeff
        row[-1] = Fraction(1)
        lhs.append(row)
        rhs.append(plane.cost)
    _, solution = simplex.maximize(objective, lhs, rhs)
    point = tuple(solution[j] - solution[dim + j] for j in range(dim))
    return point, solution[-1]


def solve_cutting_plane(
    src: SourceModel, dict_size: int, iteration_cap: int | None = None
) -> SolverResult:
    """Kelley's cutting-plane method over the bounding box.

    Starts at the box center with the trivial height bound D; each round
    prices all types at the current point, adds every violated hyperplane,
    and reoptimizes the relaxation. When no cut is violated the relaxed
    height is exactly optimal; the witness chain is then certified (in the
    degenerate case of a flat envelope top, by finishing with the iterative
    refinement, which cannot change the height).
    """
    if dict_size < 2:
        raise ValueError(f"dictionary size must be >= 2, got {dict_size}")
    cap = default_iteration_cap(src, dict_size) if iteration_cap is None else iteration_cap
    m = len(src) - 1
    box = bounding_box(src, dict_size)
    point: Point = (Fraction(0),) * (m - 1)
    bound = Fraction(dict_size)
    cuts: list[Hyperplane] = []
    cut_keys: set = set()
    trace: list = []
    rounds = 0
    while True:
        env = all_type_envelopes(src, dict_size, point)
        witnesses = Chain(tuple(tree for _, tree in env))
        trace.append((witnesses.key(), bound))
        violated = [(value, tree) for value, tree in env if value < bound]
        if not violated:
            if all(value == bound for value, _ in env):
                meet = multityped_intersection(witnesses, src, dict_size)
                if meet != IntersectionPoint(point, bound):
                    raise ConsistencyError("witness meet drifted from the relaxed optimum")
                certificate = tuple((value, True) for value, _ in env)
                return _result(witnesses, meet, dict_size, certificate, rounds, trace)
            return _iterate(src, dict_size, witnesses, cap, trace, rounds)
        for value, tree in violated:
            key = (tree.type_index, tree.key())
            if key in cut_keys:
                raise ConsistencyError("relaxation violated by an existing cut")
            cut_keys.add(key)
            cuts.append(state_hyperplane(tree, src, dict_size))
        rounds += 1
        if rounds > cap:
            raise IterationCapError(cap, trace)
        point, bound = _solve_relaxation(cuts, box, dict_size)


def count_trees(alphabet_size: int, type_index: int, size: int) -> int:
    """Number of type-``type_index`` trees with ``size`` codewords."""
    n = alphabet_size
    table: dict[tuple[int, int], int] = {}
    for d in range(1, size + 1):
        for i in range(n - 2, -1, -1):
            if d == 1:
                table[(i, d)] = 1
                continue
            other = (lambda l: table[(i + 1, l)]) if i < n - 2 else (lambda l: table[(0, l)])
            table[(i, d)] = sum(table[(0, l)] * other(d - l) for l in range(1, d))
    return table[(type_index, size)]


_ENUM_CACHE: dict[tuple[int, int, int], tuple[ParseTree, ...]] = {}


def enumerate_trees(src: SourceModel, type_index: int, size: int) -> tuple[ParseTree, ...]:
    """All type-``type_index`` trees with exactly ``size`` codewords.

    Generated through the unique root decompositions, so the list is free of
    duplicates; trees depend only on the alphabet size and are cached across
    calls. Size-1 results are the single-node building block, which is not a
    valid standalone tree.
    """
    return _enumerate(len(src), type_index, size)


def _enumerate(n: int, i: int, d: int) -> tuple[ParseTree, ...]:
    cached = _ENUM_CACHE.get((n, i, d))
    if cached is not None:
        return cached
    if d == 1:
        out: tuple[ParseTree, ...] = (ParseTree.single_node(i, n),)
    elif i < n - 2:
        out = tuple(
            tie(i, left, right)
            for l in range(1, d)
            for left in _enumerate(n, 0, l)
            for right in _enumerate(n, i + 1, d - l)
        )
    else:
        out = tuple(
            tie_last(left, right)
            for l in range(1, d)
            for left in _enumerate(n, 0, l)
            for right in _enumerate(n, 0, d - l)
        )
    _ENUM_CACHE[(n, i, d)] = out
    return out


def brute_force_optimum(
    src: SourceModel,
    dict_size: int,
    tree_guard: int = 10**5,
    chain_guard: int = 10**6,
) -> SolverResult:
    """Exact maximum over every chain, with enumeration guards.

    When several chains tie for the maximum their meet points differ, and
    only those meeting at the envelope apex reprice to the optimum (at least
    one always does: the apex's own witness chain is maximal). The result is
    the structurally smallest tied chain that certifies, so it is
    deterministic and carries the same proof as the other solvers.
    """
    if dict_size < 2:
        raise ValueError(f"dictionary size must be >= 2, got {dict_size}")
    n = len(src)
    m = n - 1
    total_chains = 1
    for i in range(m):
        count = count_trees(n, i, dict_size)
        if count > tree_guard:
            raise TooLargeError(
                f"{count} type-{i} trees exceed the per-type guard of {tree_guard}"
            )
        total_chains *= count
    if total_chains > chain_guard:
        raise TooLargeError(
            f"{total_chains} chains exceed the chain guard of {chain_guard}"
        )

    # structural sort makes the product loop visit chains in key order
    per_type = [
        sorted(enumerate_trees(src, i, dict_size), key=lambda t: t.key())
        for i in range(m)
    ]
    planes = [
        [state_hyperplane(t, src, dict_size) for t in trees] for trees in per_type
    ]

    def chain_lengths():
        for combo in itertools.product(*(range(len(ts)) for ts in per_type)):
            rows = [planes[i][c].transitions for i, c in enumerate(combo)]
            pi = stationary(rows)
            yield combo, Fraction(dict_size) - sum(
                (p * planes[i][c].cost for p, (i, c) in zip(pi, enumerate(combo))),
                Fraction(0),
            )

    best_len = max(length for _, length in chain_lengths())
    fallback = None
    for combo, length in chain_lengths():
        if length != best_len:
            continue
        chain = Chain(tuple(per_type[i][c] for i, c in enumerate(combo)))
        meet = multityped_intersection(chain, src, dict_size)
        if dict_size - meet.height != best_len:
            raise ConsistencyError(
                f"best chain length {best_len} disagrees with meet height {meet.height}"
            )
        certificate, _ = _certificate(src, dict_size, meet)
        result = _result(
            chain,
            meet,
            dict_size,
            certificate,
            0,
            [(chain.key(), meet.height)],
            chains_examined=total_chains,
        )
        if result.certified:
            return result
        if fallback is None:
            fallback = result
    return fallback  # pragma: no cover - some maximal chain always certifies
