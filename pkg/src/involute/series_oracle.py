"""Order-by-order power-series check of the Hilbert function.

Every equation is differentiated up to a fixed order and all of the resulting
linear conditions on Taylor coefficients are reduced together. Columns are
ordered by derivative order, highest first, so the pivots found at order k
are exactly the coefficients of order k fixed by the system. The rest are
free data, and for a formally integrable system their count at order q+r is
the Hilbert function H(r).

This module only uses the linear-algebra kernel. It does not use the
character tables or the binomial formulas of the counting module.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

from .linalg import SparseEchelon
from .system import LinearEquation, PDESystem


@dataclass(frozen=True)
class TaylorLayer:
    order: int
    total: int
    principal: int

    @property
    def parametric(self) -> int:
        return self.total - self.principal


@dataclass(frozen=True)
class SeriesReduction:
    """All derivatives of ``system`` up to ``top``, jointly reduced."""

    system: PDESystem
    top: int
    columns: tuple[tuple[int, tuple[int, ...]], ...]
    rows: tuple[dict[int, object], ...]
    row_orders: tuple[int, ...]
    echelon: SparseEchelon

    def column_order(self, col: int) -> int:
        return sum(self.columns[col][1])

    def principal_by_order(self) -> Counter:
        return Counter(self.column_order(c) for c in self.echelon.pivots)

    def principal_set(self, order: int) -> frozenset:
        return frozenset(self.columns[c] for c in self.echelon.pivots if self.column_order(c) == order)


def _exponents(n: int, order: int) -> list[tuple[int, ...]]:
    out = []
    for word in combinations_with_replacement(range(n), order):
        counts = [0] * n
        for mu in word:
            counts[mu] += 1
        out.append(tuple(counts))
    return out


def _columns(n: int, m: int, top: int) -> list[tuple[int, tuple[int, ...]]]:
    # highest order first; inside an order the arrangement does not matter
    cols = []
    for order in range(top, -1, -1):
        for exps in _exponents(n, order):
            for field in range(1, m + 1):
                cols.append((field, exps))
    return cols


def _differentiate(eq: LinearEquation, exps: tuple[int, ...]) -> dict[tuple[int, tuple[int, ...]], object]:
    out = {}
    for coord, coeff in eq.terms:
        key = (coord.field_index, tuple(a + b for a, b in zip(coord.multi_index.entries, exps)))
        out[key] = coeff
    return out


@lru_cache(maxsize=8)
def reduce_series(S: PDESystem, top: int) -> SeriesReduction:
    # cached: the layer, solved-form and stability checks share reductions
    n, m = S.n, S.m
    columns = _columns(n, m, top)
    position = {c: i for i, c in enumerate(columns)}
    rows = []
    orders = []
    for eq in S.equations:
        for extra in range(0, top - eq.order + 1):
            for exps in _exponents(n, extra):
                rows.append({position[k]: v for k, v in _differentiate(eq, exps).items()})
                orders.append(eq.order + extra)
    echelon = SparseEchelon()
    for row in rows:
        echelon.insert(dict(row))
    return SeriesReduction(S, top, tuple(columns), tuple(rows), tuple(orders), echelon)


def classify_layers(S: PDESystem, R: int = 5) -> list[TaylorLayer]:
    """Principal and parametric counts at orders q .. q+R."""
    if R < 0:
        raise ValueError("R must be non-negative")
    q = S.q
    reduction = reduce_series(S, q + R)
    principal = reduction.principal_by_order()
    totals = Counter(reduction.column_order(c) for c in range(len(reduction.columns)))
    return [TaylorLayer(q + r, totals[q + r], principal[q + r]) for r in range(R + 1)]


def parametric_counts(S: PDESystem, R: int = 5) -> list[int]:
    return [layer.parametric for layer in classify_layers(S, R)]


@dataclass(frozen=True)
class SolvedFormReport:
    """For each order k: rank of the given equations of order <= k against joint pivots."""

    orders: tuple[int, ...]
    equation_ranks: tuple[int, ...]
    joint_pivots: tuple[int, ...]

    @property
    def passed(self) -> bool:
        return self.equation_ranks == self.joint_pivots

    def hidden_orders(self) -> list[int]:
        return [k for k, a, b in zip(self.orders, self.equation_ranks, self.joint_pivots) if a != b]


def solved_form_condition_check(S: PDESystem, R: int = 5) -> SolvedFormReport:
    """Check that no combination of higher-order equations drops to a lower order.

    When it holds, the principal coefficients at each order are already fixed
    by the equations of that order, so the parametric counts can be trusted as
    values of the Hilbert function. A failure points at hidden lower-order
    equations, which means the system has not been completed.
    """
    reduction = reduce_series(S, S.q + R)
    cumulative = Counter()
    for col in reduction.echelon.pivots:
        cumulative[reduction.column_order(col)] += 1
    orders = tuple(range(0, S.q + R + 1))
    by_order: dict[int, list[dict]] = {}
    for row, o in zip(reduction.rows, reduction.row_orders):
        by_order.setdefault(o, []).append(row)
    lower = SparseEchelon()
    ranks = []
    pivots = []
    running = 0
    for k in orders:
        running += cumulative[k]
        pivots.append(running)
        for row in by_order.get(k, ()):
            lower.insert(dict(row))
        ranks.append(lower.rank)
    return SolvedFormReport(orders, tuple(ranks), tuple(pivots))


def layers_stable(S: PDESystem, R: int = 5) -> bool:
    """True when going one order further leaves the principal sets up to q+R unchanged."""
    q = S.q
    lower = reduce_series(S, q + R)
    upper = reduce_series(S, q + R + 1)
    return all(lower.principal_set(k) == upper.principal_set(k) for k in range(0, q + R + 1))
