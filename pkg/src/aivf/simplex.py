"""Dense exact-rational primal simplex (Bland's rule) for small LPs.

Solves  maximize c.z  subject to  A z <= b, z >= 0  with every b_i >= 0, so
the all-slack basis is feasible and no phase-1 is needed. That is all the
cutting-plane solver requires once free variables are split into positive
and negative parts. Bland's rule (smallest eligible index, for entering and
leaving alike) guarantees termination even on degenerate tableaus.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import LpUnboundedError


def maximize(
    objective: Sequence[Fraction],
    lhs: Sequence[Sequence[Fraction]],
    rhs: Sequence[Fraction],
) -> tuple[Fraction, tuple[Fraction, ...]]:
    """Return (optimal value, optimal z). Raises LpUnboundedError if unbounded."""
    n = len(objective)
    m = len(lhs)
    if any(b < 0 for b in rhs):
        raise ValueError("all right-hand sides must be nonnegative")
    # tableau rows: [A | I | b]; cost row holds reduced costs of the max problem
    rows = [
        [Fraction(v) for v in row]
        + [Fraction(1) if k == r else Fraction(0) for k in range(m)]
        + [Fraction(rhs[r])]
        for r, row in enumerate(lhs)
    ]
    cost = [Fraction(v) for v in objective] + [Fraction(0)] * (m + 1)
    basis = list(range(n, n + m))

    while True:
        entering = next((j for j in range(n + m) if cost[j] > 0), None)
        if entering is None:
            break
        leaving = None
        best_ratio = None
        for r in range(m):
            coeff = rows[r][entering]
            if coeff > 0:
                ratio = rows[r][-1] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = r
        if leaving is None:
            raise LpUnboundedError(f"objective unbounded along variable {entering}")
        pivot_row = rows[leaving]
        pivot = pivot_row[entering]
        rows[leaving] = [v / pivot for v in pivot_row]
        pivot_row = rows[leaving]
        for r in range(m):
            if r != leaving and rows[r][entering] != 0:
                f = rows[r][entering]
                rows[r] = [v - f * p for v, p in zip(rows[r], pivot_row)]
        f = cost[entering]
        cost = [v - f * p for v, p in zip(cost, pivot_row)]
        basis[leaving] = entering

    solution = [Fraction(0)] * n
    for r, var in enumerate(basis):
        if var < n:
            solution[var] = rows[r][-1]
    value = sum(
        (c * z for c, z in zip(objective, solution)), Fraction(0)
    )
    return value, tuple(solution)
