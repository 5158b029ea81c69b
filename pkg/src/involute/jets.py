"""Formal derivatives, prolongation, projection, symbols and characters."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .combinatorics import MultiIndex, class_of, class_size, multi_indices, order_count
from .linalg import RationalMatrix, echelon_of
from .system import (
    JetCoordinate,
    LinearEquation,
    PDESystem,
    column_positions,
    dim_R,
    equation_from_row,
    jet_columns,
    sparse_rows,
)


@dataclass(frozen=True)
class SymbolMatrix:
    base: RationalMatrix
    q: int

    @property
    def columns(self) -> tuple[JetCoordinate, ...]:
        return self.base.column_labels  # type: ignore[return-value]


@dataclass(frozen=True)
class Characters:
    q: int
    beta: tuple[int, ...]
    alpha: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.beta)


def formal_derivative(e: LinearEquation, mu: int) -> LinearEquation:
    """Total derivative along coordinate ``mu`` of a constant-coefficient equation."""
    return LinearEquation(tuple((c.derivative(mu), v) for c, v in e.terms))


def shift(e: LinearEquation, by: MultiIndex) -> LinearEquation:
    """Apply the derivatives recorded in ``by`` to every term of ``e``."""
    return LinearEquation(tuple((JetCoordinate(c.field_index, c.multi_index + by), v) for c, v in e.terms))


def prolong(S: PDESystem, r: int = 1) -> PDESystem:
    """Adjoin every formal derivative of total order 1..r of every equation."""
    if r < 1:
        raise ValueError("prolongation needs r >= 1")
    out = list(S.equations)
    for j in range(1, r + 1):
        for by in multi_indices(S.n, j):
            out.extend(shift(eq, by) for eq in S.equations)
    return S.with_equations(out)


def prolong_to(S: PDESystem, order: int) -> PDESystem:
    """Differentiate each equation until it reaches ``order``; keeps lower derivatives too."""
    out = []
    for eq in S.equations:
        out.append(eq)
        for j in range(1, order - eq.order + 1):
            out.extend(shift(eq, by) for by in multi_indices(S.n, j))
    return S.with_equations(out)


def project(S_prolonged: PDESystem, target_order: int) -> PDESystem:
    """Equations of order <= ``target_order`` implied by ``S_prolonged``.

    The coefficient matrix is reduced with columns sorted by order descending.
    A reduced row whose pivot sits at order <= ``target_order`` has no higher
    order terms, so those rows are exactly the lower-order consequences,
    integrability conditions included. Dependent rows reduce to zero and drop.
    """
    top = S_prolonged.q
    if target_order >= top:
        raise ValueError(f"target order {target_order} must be below the system order {top}")
    labels = jet_columns(S_prolonged.n, S_prolonged.m, top)
    positions = column_positions(S_prolonged.n, S_prolonged.m, top)
    echelon = echelon_of(sparse_rows(S_prolonged.equations, positions))
    kept = [row for col, row in sorted(echelon.pivot_rows.items()) if labels[col].order <= target_order]
    if not kept:
        raise ValueError("projection left no equations")
    low_labels = jet_columns(S_prolonged.n, S_prolonged.m, target_order)
    low_positions = column_positions(S_prolonged.n, S_prolonged.m, target_order)
    remapped = [{low_positions[labels[c]]: v for c, v in row.items()} for row in kept]
    reduced = echelon_of(remapped).reduced_rows()
    return S_prolonged.with_equations(equation_from_row(row, low_labels) for row in reduced)


def symbol(S: PDESystem) -> SymbolMatrix:
    """Coefficients of the order-q jet coordinates, columns in solved-form order."""
    q = S.q
    count = order_count(S.n, q, S.m)
    labels = jet_columns(S.n, S.m, q)[:count]
    positions = column_positions(S.n, S.m, q)
    rows = [{positions[c]: v for c, v in eq.terms if c.order == q} for eq in S.equations]
    return SymbolMatrix(RationalMatrix.from_sparse(rows, count, labels), q)


def _symbol_echelon(S: PDESystem):
    q = S.q
    positions = column_positions(S.n, S.m, q)
    rows = [{positions[c]: v for c, v in eq.terms if c.order == q} for eq in S.equations]
    return echelon_of(rows), jet_columns(S.n, S.m, q)


def symbol_rank(S: PDESystem) -> int:
    return _symbol_echelon(S)[0].rank


def dim_S(S: PDESystem) -> int:
    return order_count(S.n, S.q, S.m) - symbol_rank(S)


def characters_from_pivots(pivot_labels: Sequence[JetCoordinate], n: int, q: int, m: int) -> Characters:
    beta = [0] * n
    for label in pivot_labels:
        beta[class_of(label.multi_index) - 1] += 1
    alpha = tuple(class_size(k, n, q, m) - beta[k - 1] for k in range(1, n + 1))
    return Characters(q, tuple(beta), alpha)


def characters(S: PDESystem) -> Characters:
    """Pivot counts per class of the solved-form symbol, and their complements."""
    q = S.q
    if q == 0:
        raise ValueError("characters need a system of order at least 1")
    echelon, labels = _symbol_echelon(S)
    return characters_from_pivots([labels[c] for c in echelon.pivots], S.n, q, S.m)


def num_multiplicative(C: Characters) -> int:
    return sum(k * b for k, b in enumerate(C.beta, start=1))


def symbol_involutive(S: PDESystem) -> bool:
    return symbol_rank(prolong(S, 1)) == num_multiplicative(characters(S))


def integrability_gap(S: PDESystem) -> tuple[int, int]:
    """Return ``(dim R_{q+1} - dim S_{q+1}, dim R_q)`` for the one-step prolongation."""
    P = prolong(S, 1)
    return dim_R(P) - dim_S(P), dim_R(S)


def has_integrability_conditions(S: PDESystem) -> bool:
    projected, current = integrability_gap(S)
    return projected < current


def is_involutive(S: PDESystem) -> bool:
    return symbol_involutive(S) and not has_integrability_conditions(S)


def propagate_counts(values: Sequence[int], r: int) -> tuple[int, ...]:
    """Closed-form class counts of the r-th prolongation of an involutive symbol."""
    n = len(values)
    if r == 0:
        return tuple(values)
    if r < 0:
        raise ValueError("r must be non-negative")
    return tuple(
        sum(comb(r + i - k - 1, r - 1) * values[i - 1] for i in range(k, n + 1)) for k in range(1, n + 1)
    )


def propagate_characters(C: Characters, r: int) -> Characters:
    return Characters(C.q + r, propagate_counts(C.beta, r), propagate_counts(C.alpha, r))


def equation_to_text(eq: LinearEquation, S: PDESystem) -> str:
    """Readable form like ``2*A[1]_tt - A[2]_x``; used in traces."""
    parts = []
    for coord, coeff in eq.terms:
        name = S.field_names[coord.field_index - 1]
        suffix = "".join(S.coordinate_names[mu - 1] for mu in coord.multi_index.coordinates())
        label = f"{name}_{suffix}" if suffix else name
        mag = abs(coeff)
        sign = "-" if coeff < 0 else "+"
        body = label if mag == 1 else f"{_frac(mag)}*{label}"
        parts.append((sign, body))
    first_sign, first_body = parts[0]
    text = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
