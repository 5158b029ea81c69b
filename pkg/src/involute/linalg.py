"""Exact rational linear algebra.

Dense reduced row-echelon form with a recorded list of row operations, plus a
sparse incremental echelon used for the large prolonged systems. Both use the
same pivot rule (leftmost column first, topmost usable row), so they always
agree on pivot columns and rank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence, Union

Rational = Fraction
SparseRow = dict[int, Fraction]


class IncomparableSystemsError(ValueError):
    """Raised when two matrices with different column labels are compared."""


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[tuple[Fraction, ...], ...]
    ncols: int
    column_labels: tuple[Hashable, ...] | None = None

    def __post_init__(self) -> None:
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.rows)
        for row in rows:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")
        if self.column_labels is not None:
            labels = tuple(self.column_labels)
            if len(labels) != self.ncols:
                raise ValueError("column label count does not match column count")
            if len(set(labels)) != len(labels):
                raise ValueError("column labels must be distinct")
            object.__setattr__(self, "column_labels", labels)
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_lists(
        cls, rows: Sequence[Sequence], ncols: int | None = None, labels: Sequence[Hashable] | None = None
    ) -> "RationalMatrix":
        if ncols is None:
            if labels is not None:
                ncols = len(labels)
            elif rows:
                ncols = len(rows[0])
            else:
                ncols = 0
        return cls(tuple(tuple(r) for r in rows), ncols, None if labels is None else tuple(labels))

    @classmethod
    def from_sparse(
        cls, rows: Iterable[Mapping[int, Fraction]], ncols: int, labels: Sequence[Hashable] | None = None
    ) -> "RationalMatrix":
        dense = []
        for row in rows:
            line = [Fraction(0)] * ncols
            for col, value in row.items():
                line[col] = Fraction(value)
            dense.append(line)
        return cls.from_lists(dense, ncols, labels)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def transpose(self) -> "RationalMatrix":
        cols = tuple(tuple(self.rows[i][j] for i in range(self.nrows)) for j in range(self.ncols))
        return RationalMatrix(cols, self.nrows)

    def sparse_rows(self) -> list[SparseRow]:
        return [{j: x for j, x in enumerate(row) if x} for row in self.rows]

    def nonzero_rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(row for row in self.rows if any(row))

    def as_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.rows]


@dataclass(frozen=True)
class Swap:
    i: int
    j: int


@dataclass(frozen=True)
class Scale:
    i: int
    c: Fraction


@dataclass(frozen=True)
class Add:
    """Add ``c`` times row ``src`` to row ``dst``."""

    c: Fraction
    src: int
    dst: int


RowOp = Union[Swap, Scale, Add]


@dataclass(frozen=True)
class RrefResult:
    matrix: RationalMatrix
    ops: tuple[RowOp, ...]
    pivots: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rref(M: RationalMatrix) -> RrefResult:
    """Reduced row-echelon form of ``M`` with the operations that produce it.

    Columns are scanned left to right; in each column the topmost non-zero
    entry among the rows not yet holding a pivot becomes the pivot. Pivots are
    scaled to 1 and every other entry of the pivot column is cleared, which
    leaves the zero rows at the bottom.
    """
    a = M.as_lists()
    ops: list[RowOp] = []
    pivots: list[int] = []
    top = 0
    for col in range(M.ncols):
        if top == M.nrows:
            break
        src = next((i for i in range(top, M.nrows) if a[i][col]), None)
        if src is None:
            continue
        if src != top:
            a[top], a[src] = a[src], a[top]
            ops.append(Swap(top, src))
        lead = a[top][col]
        if lead != 1:
            inv = 1 / lead
            a[top] = [x * inv for x in a[top]]
            ops.append(Scale(top, inv))
        pivot_row = a[top]
        for i in range(M.nrows):
            if i != top and a[i][col]:
                c = -a[i][col]
                a[i] = [x + c * y for x, y in zip(a[i], pivot_row)]
                ops.append(Add(c, top, i))
        pivots.append(col)
        top += 1
    out = RationalMatrix(tuple(tuple(r) for r in a), M.ncols, M.column_labels)
    return RrefResult(out, tuple(ops), tuple(pivots))


def replay(M: RationalMatrix, ops: Iterable[RowOp]) -> RationalMatrix:
    """Apply recorded row operations to ``M``."""
    a = M.as_lists()
    for op in ops:
        if isinstance(op, Swap):
            a[op.i], a[op.j] = a[op.j], a[op.i]
        elif isinstance(op, Scale):
            if op.c == 0:
                raise ValueError("scaling by zero is not an elementary operation")
            a[op.i] = [x * op.c for x in a[op.i]]
        elif isinstance(op, Add):
            a[op.dst] = [x + op.c * y for x, y in zip(a[op.dst], a[op.src])]
        else:
            raise TypeError(f"unknown row operation {op!r}")
    return RationalMatrix(tuple(tuple(r) for r in a), M.ncols, M.column_labels)


def rank(M: RationalMatrix) -> int:
    echelon = SparseEchelon()
    for row in M.sparse_rows():
        echelon.insert(row)
    return echelon.rank


def row_space_equal(A: RationalMatrix, B: RationalMatrix) -> bool:
    """True when ``A`` and ``B`` span the same row space over the same columns."""
    if A.ncols != B.ncols or A.column_labels != B.column_labels:
        raise IncomparableSystemsError("incomparable systems")
    return rref(A).matrix.nonzero_rows() == rref(B).matrix.nonzero_rows()


@dataclass
class SparseEchelon:
    """Incrementally built row-echelon basis of a row space.

    Rows are dictionaries from column position to value. Column position is
    the elimination order: smaller positions are eliminated first. Each stored
    row has leading entry 1 at its pivot column.
    """

    pivot_rows: dict[int, SparseRow] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return len(self.pivot_rows)

    @property
    def pivots(self) -> list[int]:
        return sorted(self.pivot_rows)

    def reduce(self, row: Mapping[int, Fraction]) -> SparseRow:
        """Eliminate every pivot column from ``row`` that it touches in leading position."""
        work = {c: Fraction(v) for c, v in row.items() if v}
        while work:
            col = min(work)
            basis = self.pivot_rows.get(col)
            if basis is None:
                return work
            factor = work[col]
            for c, v in basis.items():
                new = work.get(c, 0) - factor * v
                if new:
                    work[c] = new
                else:
                    work.pop(c, None)
        return work

    def insert(self, row: Mapping[int, Fraction]) -> int | None:
        """Add ``row`` to the span; returns its new pivot column or None if dependent."""
        work = self.reduce(row)
        if not work:
            return None
        col = min(work)
        lead = work[col]
        if lead != 1:
            work = {c: v / lead for c, v in work.items()}
        self.pivot_rows[col] = work
        return col

    def contains(self, row: Mapping[int, Fraction]) -> bool:
        return not self.reduce(row)

    def reduced_rows(self) -> list[SparseRow]:
        """Rows of the reduced echelon form, ordered by pivot column."""
        order = self.pivots
        done: dict[int, SparseRow] = {}
        for col in reversed(order):
            row = dict(self.pivot_rows[col])
            for c in sorted(k for k in row if k != col):
                if c in done and c in row:
                    factor = row[c]
                    for k, v in done[c].items():
                        new = row.get(k, 0) - factor * v
                        if new:
                            row[k] = new
                        else:
                            row.pop(k, None)
            done[col] = row
        return [done[c] for c in order]


def echelon_of(rows: Iterable[Mapping[int, Fraction]]) -> SparseEchelon:
    echelon = SparseEchelon()
    for row in rows:
        echelon.insert(row)
    return echelon
