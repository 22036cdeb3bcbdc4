"""Ferrers boards given by row multiplicities.

A board ``Psi_{a_n,...,a_1}`` has ``a_i`` left-justified rows of length ``i``.
Rows are numbered bottom to top and are nondecreasing in length, columns are
numbered left to right.  A square is a pair ``(column, row)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Tuple

Square = Tuple[int, int]


class BoardSpecError(ValueError):
    """Raised for a malformed board spec string."""


class HypothesisError(ValueError):
    """Board does not meet the vertex decomposability hypotheses."""


@dataclass(frozen=True)
class Board:
    """Left-justified board with ``multiplicities[i-1]`` rows of length ``i``."""

    multiplicities: Tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        mult = tuple(int(a) for a in self.multiplicities)
        if any(a < 0 for a in mult):
            raise ValueError(f"negative row multiplicity in {mult}")
        object.__setattr__(self, "multiplicities", mult)

    @property
    def n(self) -> int:
        return len(self.multiplicities)

    @property
    def p(self) -> int:
        return sum(self.multiplicities)

    @cached_property
    def row_lengths(self) -> Tuple[int, ...]:
        rows = []
        for length, count in enumerate(self.multiplicities, start=1):
            rows.extend([length] * count)
        return tuple(rows)

    def column_length(self, i: int) -> int:
        """Number of rows of length at least ``i`` (1-based column index)."""
        if not 1 <= i <= self.n:
            return 0
        return sum(self.multiplicities[i - 1:])

    @cached_property
    def column_lengths(self) -> Tuple[int, ...]:
        return tuple(self.column_length(i) for i in range(1, self.n + 1))

    def __contains__(self, square: Square) -> bool:
        i, j = square
        return 1 <= j <= self.p and 1 <= i <= self.row_lengths[j - 1]

    @cached_property
    def squares(self) -> Tuple[Square, ...]:
        """All squares in the canonical (column, row) lexicographic order."""
        out = []
        for i, length in enumerate(self.column_lengths, start=1):
            # the ``length`` longest rows are the top ones
            out.extend((i, j) for j in range(self.p - length + 1, self.p + 1))
        return tuple(out)

    @property
    def is_stirling(self) -> bool:
        return self.n >= 1 and all(a == 1 for a in self.multiplicities)

    def spec(self) -> str:
        """Board spec string with the longest rows first, ``psi:a_n,...,a_1``."""
        return "psi:" + ",".join(str(a) for a in reversed(self.multiplicities))

    def canonical(self) -> str:
        """Bit-exact serialization ``a_1,...,a_n`` used for cache keys."""
        return ",".join(str(a) for a in self.multiplicities)

    def __str__(self) -> str:
        if self.is_stirling:
            return f"stirling:{self.n}"
        return self.spec()


def make_board(multiplicities: Iterable[int]) -> Board:
    """Build a board from multiplicities listed longest rows first, ``a_n, ..., a_1``."""
    return Board(tuple(reversed(list(multiplicities))))


def stirling(n: int) -> Board:
    """The staircase board with one row of each length ``1..n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return Board((1,) * n)


def board_from_rows(row_lengths: Iterable[int]) -> Board:
    """Board with the given row lengths; zero-length rows are dropped."""
    rows = [r for r in row_lengths if r > 0]
    n = max(rows, default=0)
    mult = [0] * n
    for r in rows:
        mult[r - 1] += 1
    return Board(tuple(mult))


_SPEC_RE = re.compile(r"^(stirling):(\d+)$|^(psi):(\d+(?:,\d+)*)$")


def parse_board(spec: str) -> Board:
    """Parse ``stirling:<n>`` or ``psi:<a_n>,...,<a_1>``."""
    m = _SPEC_RE.match(spec.strip())
    if m is None:
        raise BoardSpecError(f"malformed board spec {spec!r}")
    if m.group(1):
        return stirling(int(m.group(2)))
    return make_board(int(tok) for tok in m.group(4).split(","))


def attacks(s: Square, t: Square) -> bool:
    """Two distinct squares attack each other iff they share a row or a column."""
    return s != t and (s[0] == t[0] or s[1] == t[1])


def durfee(b: Board) -> int:
    """Side of the largest square sub-board.

    Left justification puts a ``d x d`` block in columns ``1..d`` whenever
    column ``d`` has at least ``d`` rows.
    """
    for d in range(min(b.n, b.p), 0, -1):
        if b.column_length(d) >= d:
            return d
    return 0


def satisfies_vd_hypotheses(b: Board) -> bool:
    """``a_1 >= 1``, ``a_n >= n`` and ``a_i >= i - 1`` for ``1 < i < n``."""
    a = b.multiplicities
    n = b.n
    if n == 0:
        return False
    if a[0] < 1 or a[n - 1] < n:
        return False
    return all(a[i - 1] >= i - 1 for i in range(2, n))
