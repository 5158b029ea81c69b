"""Data model for linear homogeneous constant-coefficient PDE systems."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

from .combinatorics import MultiIndex, fiber_dim, multi_indices, solved_form_key
from .linalg import RationalMatrix, SparseRow, echelon_of


class InvalidSystemError(ValueError):
    """Raised when a system violates one of its structural invariants."""


@dataclass(frozen=True)
class JetCoordinate:
    field_index: int
    multi_index: MultiIndex

    @property
    def order(self) -> int:
        return self.multi_index.length

    def column_key(self) -> tuple:
        """Order descending, class descending, reverse-lex, then field index."""
        return (-self.order, solved_form_key(self.multi_index), self.field_index)

    def derivative(self, mu: int) -> "JetCoordinate":
        n = self.multi_index.n
        return JetCoordinate(self.field_index, self.multi_index + MultiIndex.unit(n, mu))


@dataclass(frozen=True)
class LinearEquation:
    """A homogeneous linear equation stored as sorted (coordinate, coefficient) pairs."""

    terms: tuple[tuple[JetCoordinate, Fraction], ...]

    def __post_init__(self) -> None:
        merged: dict[JetCoordinate, Fraction] = {}
        for coord, coeff in self.terms:
            merged[coord] = merged.get(coord, Fraction(0)) + Fraction(coeff)
        cleaned = tuple(
            sorted(((c, v) for c, v in merged.items() if v), key=lambda cv: cv[0].column_key())
        )
        if not cleaned:
            raise InvalidSystemError("an equation needs at least one non-zero term")
        dims = {c.multi_index.n for c, _ in cleaned}
        if len(dims) != 1:
            raise InvalidSystemError("terms of one equation use different numbers of coordinates")
        object.__setattr__(self, "terms", cleaned)

    @classmethod
    def from_mapping(cls, terms: Mapping[JetCoordinate, Fraction]) -> "LinearEquation":
        return cls(tuple(terms.items()))

    @property
    def order(self) -> int:
        return max(c.order for c, _ in self.terms)

    @property
    def n(self) -> int:
        return self.terms[0][0].multi_index.n

    def as_dict(self) -> dict[JetCoordinate, Fraction]:
        return dict(self.terms)

    def scaled(self, factor: Fraction) -> "LinearEquation":
        return LinearEquation(tuple((c, v * factor) for c, v in self.terms))


@dataclass(frozen=True)
class PDESystem:
    name: str
    coordinate_names: tuple[str, ...]
    field_names: tuple[str, ...]
    equations: tuple[LinearEquation, ...]
    gammas: tuple[int, ...] = ()
    params: tuple[tuple[str, Fraction], ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "coordinate_names", tuple(self.coordinate_names))
        object.__setattr__(self, "field_names", tuple(self.field_names))
        object.__setattr__(self, "equations", tuple(self.equations))
        object.__setattr__(self, "gammas", tuple(int(g) for g in self.gammas))
        object.__setattr__(
            self, "params", tuple((str(k), Fraction(v)) for k, v in dict(self.params).items())
        )
        if not self.coordinate_names:
            raise InvalidSystemError("a system needs at least one coordinate")
        if not self.field_names:
            raise InvalidSystemError("a system needs at least one field component")
        if len(set(self.coordinate_names)) != len(self.coordinate_names):
            raise InvalidSystemError("duplicate coordinate names")
        if len(set(self.field_names)) != len(self.field_names):
            raise InvalidSystemError("duplicate field names")
        if not self.equations:
            raise InvalidSystemError("a system needs at least one equation")
        for eq in self.equations:
            if eq.n != self.n:
                raise InvalidSystemError("equation dimension does not match the coordinates")
            for coord, _ in eq.terms:
                if not 1 <= coord.field_index <= self.m:
                    raise InvalidSystemError(f"field index {coord.field_index} outside 1..{self.m}")
        if any(g < 0 for g in self.gammas):
            raise InvalidSystemError("gauge counts must be non-negative")
        if self.gammas and self.gammas[-1] == 0:
            raise InvalidSystemError("the last gauge count must be positive")

    @property
    def n(self) -> int:
        return len(self.coordinate_names)

    @property
    def m(self) -> int:
        return len(self.field_names)

    @property
    def q(self) -> int:
        return max(eq.order for eq in self.equations)

    def with_equations(self, equations: Iterable[LinearEquation], name: str | None = None) -> "PDESystem":
        return PDESystem(
            name=self.name if name is None else name,
            coordinate_names=self.coordinate_names,
            field_names=self.field_names,
            equations=tuple(equations),
            gammas=self.gammas,
            params=self.params,
        )


@lru_cache(maxsize=None)
def jet_columns(n: int, m: int, max_order: int) -> tuple[JetCoordinate, ...]:
    """All jet coordinates up to ``max_order`` in column order."""
    cols = [
        JetCoordinate(a, mi)
        for order in range(max_order + 1)
        for mi in multi_indices(n, order)
        for a in range(1, m + 1)
    ]
    return tuple(sorted(cols, key=JetCoordinate.column_key))


@lru_cache(maxsize=None)
def column_positions(n: int, m: int, max_order: int) -> dict[JetCoordinate, int]:
    return {c: i for i, c in enumerate(jet_columns(n, m, max_order))}


def sparse_rows(
    equations: Iterable[LinearEquation], positions: Mapping[JetCoordinate, int]
) -> list[SparseRow]:
    return [{positions[c]: v for c, v in eq.terms} for eq in equations]


def coefficient_matrix(S: PDESystem, max_order: int | None = None) -> RationalMatrix:
    """One row per equation, one labelled column per jet coordinate of order <= ``max_order``."""
    top = S.q if max_order is None else max_order
    if top < S.q:
        raise ValueError(f"max_order {top} is below the system order {S.q}")
    labels = jet_columns(S.n, S.m, top)
    rows = sparse_rows(S.equations, column_positions(S.n, S.m, top))
    return RationalMatrix.from_sparse(rows, len(labels), labels)


def equation_rank(S: PDESystem, equations: Iterable[LinearEquation] | None = None) -> int:
    eqs = S.equations if equations is None else tuple(equations)
    top = max(eq.order for eq in eqs)
    return echelon_of(sparse_rows(eqs, column_positions(S.n, S.m, top))).rank


def independent_equation_count(S: PDESystem) -> int:
    return equation_rank(S)


def dim_R(S: PDESystem) -> int:
    return fiber_dim(S.n, S.q, S.m) - independent_equation_count(S)


def equation_from_row(row: Mapping[int, Fraction], labels: Sequence[JetCoordinate]) -> LinearEquation:
    return LinearEquation(tuple((labels[c], v) for c, v in row.items()))


# JSON interchange -----------------------------------------------------------

SCHEMA_VERSION = 1


def fraction_to_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def system_to_dict(S: PDESystem) -> dict[str, Any]:
    return {
        "schema": SCHEMA_VERSION,
        "name": S.name,
        "coordinates": list(S.coordinate_names),
        "fields": list(S.field_names),
        "params": {k: fraction_to_str(v) for k, v in S.params},
        "gammas": list(S.gammas),
        "equations": [
            [
                {"field": c.field_index, "index": list(c.multi_index.entries), "coeff": fraction_to_str(v)}
                for c, v in eq.terms
            ]
            for eq in S.equations
        ],
    }


def system_from_dict(data: Mapping[str, Any]) -> PDESystem:
    n = len(data["coordinates"])
    equations = []
    for raw in data["equations"]:
        terms = []
        for t in raw:
            index = MultiIndex(tuple(t["index"]))
            if index.n != n:
                raise InvalidSystemError("multi-index length does not match the coordinates")
            terms.append((JetCoordinate(int(t["field"]), index), Fraction(t["coeff"])))
        equations.append(LinearEquation(tuple(terms)))
    return PDESystem(
        name=data["name"],
        coordinate_names=tuple(data["coordinates"]),
        field_names=tuple(data["fields"]),
        equations=tuple(equations),
        gammas=tuple(data.get("gammas", ())),
        params=tuple((k, Fraction(v)) for k, v in data.get("params", {}).items()),
    )


def system_to_json(S: PDESystem) -> str:
    return json.dumps(system_to_dict(S), indent=2, sort_keys=True)


def system_from_json(text: str) -> PDESystem:
    return system_from_dict(json.loads(text))
