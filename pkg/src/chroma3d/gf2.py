"""Bit-packed GF(2) linear algebra on Python integers.

Rows are arbitrary-precision ints; bit i is qubit i. Exact, tolerance-free.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def pack(support: Iterable[int]) -> int:
    m = 0
    for i in support:
        m |= 1 << i
    return m


def rank(rows: Iterable[int]) -> int:
    """GF(2) rank by elimination with a pivot per leading bit."""
    pivots: dict[int, int] = {}
    r = 0
    for row in rows:
        row = _reduce(row, pivots)
        if row:
            pivots[row.bit_length()] = row
            r += 1
    return r


def _reduce(row: int, pivots: dict[int, int]) -> int:
    while row:
        p = pivots.get(row.bit_length())
        if p is None:
            return row
        row ^= p
    return 0


def in_span(row: int, basis: Sequence[int]) -> bool:
    """Whether `row` lies in the GF(2) span of `basis`."""
    pivots: dict[int, int] = {}
    for b in basis:
        b = _reduce(b, pivots)
        if b:
            pivots[b.bit_length()] = b
    return _reduce(row, pivots) == 0


class SpanChecker:
    """Reusable membership oracle for the span of a fixed generating set."""

    def __init__(self, basis: Iterable[int]):
        self._pivots: dict[int, int] = {}
        for b in basis:
            b = _reduce(b, self._pivots)
            if b:
                self._pivots[b.bit_length()] = b

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def contains(self, row: int) -> bool:
        return _reduce(row, self._pivots) == 0
