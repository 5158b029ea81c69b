"""Multi-indices, derivative classes and the closed-form counts built on them.

A multi-index ``(m_1, ..., m_n)`` records how many times each coordinate is
differentiated. Coordinates are numbered from 1 and the last one is the
time-like coordinate, so class ``n`` holds the pure time derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterator


class ClassUndefinedError(ValueError):
    """Raised when the class of the zero multi-index is requested."""


class DegreeError(ValueError):
    """Raised when an elementary symmetric polynomial degree is out of range."""


@dataclass(frozen=True, order=False)
class MultiIndex:
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise ValueError("a multi-index needs at least one coordinate")
        if any(e < 0 for e in entries):
            raise ValueError(f"negative entry in multi-index {entries}")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, mu: int) -> "MultiIndex":
        """The index of a single derivative along coordinate ``mu`` (1-based)."""
        if not 1 <= mu <= n:
            raise ValueError(f"coordinate {mu} outside 1..{n}")
        return cls(tuple(1 if i == mu - 1 else 0 for i in range(n)))

    @classmethod
    def from_coordinates(cls, n: int, mus: Iterator[int] | list[int] | tuple[int, ...]) -> "MultiIndex":
        counts = [0] * n
        for mu in mus:
            if not 1 <= mu <= n:
                raise ValueError(f"coordinate {mu} outside 1..{n}")
            counts[mu - 1] += 1
        return cls(tuple(counts))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def length(self) -> int:
        return sum(self.entries)

    @property
    def cls(self) -> int:
        return class_of(self)

    def coordinates(self) -> tuple[int, ...]:
        """Coordinates (1-based) listed with multiplicity, in increasing order."""
        return tuple(mu + 1 for mu, e in enumerate(self.entries) for _ in range(e))

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        if self.n != other.n:
            raise ValueError("multi-indices of different dimension")
        return MultiIndex(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        if self.n != other.n:
            raise ValueError("multi-indices of different dimension")
        diff = tuple(a - b for a, b in zip(self.entries, other.entries))
        if any(d < 0 for d in diff):
            raise ValueError(f"{self.entries} - {other.entries} leaves a negative entry")
        return MultiIndex(diff)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __repr__(self) -> str:
        return f"MultiIndex({list(self.entries)})"


def length(m: MultiIndex) -> int:
    return m.length


def class_of(m: MultiIndex) -> int:
    """Position (1-based) of the first non-zero entry."""
    for position, entry in enumerate(m.entries, start=1):
        if entry:
            return position
    raise ClassUndefinedError("class undefined for the zero multi-index")


def solved_form_key(m: MultiIndex) -> tuple:
    """Sort key placing higher classes first, then reverse-lexicographic order.

    Within a class the entries are compared from the last coordinate backwards
    and larger powers come first, so pure time derivatives lead.
    """
    cls = class_of(m) if m.length else 0
    return (-cls, tuple(-e for e in reversed(m.entries)))


@lru_cache(maxsize=None)
def multi_indices(n: int, order: int) -> tuple[MultiIndex, ...]:
    """All multi-indices of the given length, in solved-form order."""
    if n < 1 or order < 0:
        raise ValueError("need n >= 1 and order >= 0")
    found = [MultiIndex(entries) for entries in _compositions(order, n)]
    return tuple(sorted(found, key=solved_form_key))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def fiber_dim(n: int, q: int, m: int) -> int:
    """Number of jet coordinates of order at most ``q``."""
    _check_dims(n, q, m)
    return m * comb(n + q, q)


def order_count(n: int, q: int, m: int) -> int:
    """Number of jet coordinates of order exactly ``q``."""
    _check_dims(n, q, m)
    return m * comb(n - 1 + q, n - 1)


def class_size(k: int, n: int, q: int, m: int) -> int:
    """Number of order-``q`` jet coordinates whose multi-index has class ``k``."""
    _check_dims(n, q, m)
    if not 1 <= k <= n:
        raise ValueError(f"class {k} outside 1..{n}")
    if q == 0:
        return 0
    return m * comb(n + q - k - 1, n - k)


def modified_stirling(N: int, k: int, X: int) -> int:
    """Elementary symmetric polynomial of degree ``k`` in ``X+1, ..., X+N``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if k < 0:
        return 0
    if k > N:
        raise DegreeError("degree exceeds variable count")
    # coefficients of prod_i (1 + (X+i) t), truncated at degree k
    coeffs = [1] + [0] * k
    for i in range(1, N + 1):
        value = X + i
        for d in range(min(i, k), 0, -1):
            coeffs[d] += value * coeffs[d - 1]
    return coeffs[k]


def _check_dims(n: int, q: int, m: int) -> None:
    if n < 1 or q < 0 or m < 1:
        raise ValueError(f"invalid dimensions n={n}, q={q}, m={m}")
