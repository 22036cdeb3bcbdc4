"""Set partitions, Stirling numbers and intertwined partitions.

Placements on the staircase board ``stirling(n)`` correspond to partitions of
``{1, ..., n+1}``: a rook on ``(i, j)`` puts ``i`` and ``j + 1`` in one block.
Maximal placements correspond to partitions whose blocks are pairwise
intertwined.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from itertools import combinations
from math import factorial
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple

from .board import Square, stirling
from .complex import Placement, RookComplex

Block = Tuple[int, ...]


@dataclass(frozen=True)
class SetPartition:
    """Partition of ``{1..m}``; blocks sorted, ordered by their minima."""

    m: int
    blocks: Tuple[Block, ...]

    def __post_init__(self) -> None:
        blocks = tuple(sorted((tuple(sorted(b)) for b in self.blocks), key=lambda b: b[0] if b else 0))
        seen = [x for b in blocks for x in b]
        if any(not b for b in blocks):
            raise ValueError("empty block")
        if sorted(seen) != list(range(1, self.m + 1)):
            raise ValueError(f"blocks {blocks} do not partition 1..{self.m}")
        object.__setattr__(self, "blocks", blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def as_lists(self) -> List[List[int]]:
        return [list(b) for b in self.blocks]


class StirlingTable:
    """Stirling numbers of the second kind, filled row by row on demand."""

    def __init__(self) -> None:
        self._rows: List[List[int]] = [[1]]
        self._lock = threading.Lock()

    def __call__(self, n: int, k: int) -> int:
        if n < 0 or k < 0:
            raise ValueError("S(n, k) needs n, k >= 0")
        if k > n:
            return 0
        if n >= len(self._rows):
            with self._lock:
                while len(self._rows) <= n:
                    prev = self._rows[-1]
                    m = len(prev)
                    row = [0] * (m + 1)
                    for j in range(1, m + 1):
                        row[j] = (prev[j - 1] if j - 1 < m else 0) + j * (prev[j] if j < m else 0)
                    self._rows.append(row)
        return self._rows[n][k]


stirling2 = StirlingTable()


def set_partitions(m: int, k: int | None = None) -> Iterator[SetPartition]:
    """All partitions of ``{1..m}`` (optionally with exactly ``k`` blocks).

    Generated through restricted growth strings, so each partition appears
    exactly once.
    """
    if m == 0:
        if k in (None, 0):
            yield SetPartition(0, ())
        return
    rgs = [0] * m

    def rec(pos: int, nblocks: int) -> Iterator[SetPartition]:
        if k is not None and nblocks + (m - pos) < k:
            return
        if pos == m:
            if k is None or nblocks == k:
                blocks: List[List[int]] = [[] for _ in range(nblocks)]
                for x, b in enumerate(rgs, start=1):
                    blocks[b].append(x)
                yield SetPartition(m, tuple(tuple(b) for b in blocks))
            return
        limit = nblocks + 1 if k is None else min(nblocks + 1, k)
        for b in range(limit):
            rgs[pos] = b
            yield from rec(pos + 1, max(nblocks, b + 1))

    rgs[0] = 0
    yield from rec(1, 1)


def rook_to_partition(n: int, placement: Iterable[Square]) -> SetPartition:
    """The map R: merge ``i`` with ``j + 1`` for every rook ``(i, j)``."""
    parent = list(range(n + 2))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in placement:
        if not 1 <= i <= j <= n:
            raise ValueError(f"square {(i, j)} is not on stirling({n})")
        a, b = find(i), find(j + 1)
        if a != b:
            parent[max(a, b)] = min(a, b)
    groups: Dict[int, List[int]] = {}
    for x in range(1, n + 2):
        groups.setdefault(find(x), []).append(x)
    return SetPartition(n + 1, tuple(tuple(g) for g in groups.values()))


def partition_to_rooks(partition: SetPartition) -> Placement:
    """Inverse of R: consecutive block elements ``b < b'`` give the rook ``(b, b' - 1)``."""
    rooks = []
    for block in partition.blocks:
        rooks.extend((a, b - 1) for a, b in zip(block, block[1:]))
    return tuple(sorted(rooks))


def _check_pair(B: Iterable[int], C: Iterable[int]) -> Tuple[frozenset, frozenset]:
    B, C = frozenset(B), frozenset(C)
    if not B or not C:
        raise ValueError("blocks must be nonempty")
    if B & C:
        raise ValueError("blocks must be disjoint")
    if min(C) < min(B):
        B, C = C, B
    return B, C


def is_intertwined_pair(B: Iterable[int], C: Iterable[int]) -> bool:
    """Blocks are intertwined when the block holding the overall minimum
    has its maximum above the other block's minimum."""
    B, C = _check_pair(B, C)
    return max(B) > min(C)


def intertwining_number(B: Iterable[int], C: Iterable[int]) -> int:
    """Number of pairs ``(b, c)`` with no element of ``B | C`` strictly between them."""
    B, C = _check_pair(B, C)
    # such pairs are exactly adjacent elements of the merged order lying in different blocks
    merged = sorted(B | C)
    return sum(1 for x, y in zip(merged, merged[1:]) if (x in B) != (y in B))


def is_intertwined_partition(partition: SetPartition) -> bool:
    return all(is_intertwined_pair(B, C) for B, C in combinations(partition.blocks, 2))


def intertwined_formula(n: int, k: int) -> int:
    """Closed form (k-1)! * sum_{i=k-1}^{n-k} S(i, k-1) S(n-i, k)."""
    if n < 1 or k < 1:
        raise ValueError("need n, k >= 1")
    total = sum(stirling2(i, k - 1) * stirling2(n - i, k) for i in range(k - 1, n - k + 1))
    return factorial(k - 1) * total


def count_intertwined(n: int, k: int) -> int:
    """Partitions of ``[n]`` into ``k`` pairwise intertwined blocks."""
    if k == 1:
        # a single block is vacuously intertwined
        return 1 if n >= 1 else 0
    return intertwined_formula(n, k)


def count_intertwined_bruteforce(n: int, k: int) -> int:
    return sum(1 for P in set_partitions(n, k) if is_intertwined_partition(P))


def facet_count(n: int, k: int) -> int:
    """Maximal placements of ``n - k`` rooks on ``stirling(n)``:
    k! * sum_{i=k}^{n-k} S(i, k) S(n+1-i, k+1)."""
    if n < 0 or k < 0:
        raise ValueError("need n, k >= 0")
    total = sum(stirling2(i, k) * stirling2(n + 1 - i, k + 1) for i in range(k, n - k + 1))
    return factorial(k) * total


def _series_mul(a: Sequence[int], b: Sequence[int], N: int) -> List[int]:
    out = [0] * (N + 1)
    for i, x in enumerate(a[: N + 1]):
        if x:
            for j, y in enumerate(b[: N + 1 - i]):
                out[i + j] += x * y
    return out


def _geometric(r: int, N: int) -> List[int]:
    """Coefficients of 1 / (1 - r x)."""
    return [r ** t for t in range(N + 1)]


def gf_coefficients(k: int, N: int) -> List[int]:
    """Coefficients of x^0..x^N in k! x^{2k} / ((prod_{i<=k} (1 - i x))^2 (1 - (k+1) x))."""
    if k < 0 or N < 0:
        raise ValueError("need k, N >= 0")
    series = [0] * (N + 1)
    if 2 * k <= N:
        series[2 * k] = factorial(k)
    for i in list(range(1, k + 1)) * 2 + [k + 1]:
        series = _series_mul(series, _geometric(i, N), N)
    return series


@dataclass
class BijectionReport:
    n: int
    # rooks -> (maximal placements, intertwined partitions of [n+1] into n+1-rooks blocks)
    sizes: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    counterexamples: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def bijection_check(n: int, max_n: int = 10) -> BijectionReport:
    """Check that R sends maximal k-rook placements onto intertwined partitions
    with ``n + 1 - k`` blocks, for every k."""
    if n > max_n:
        raise ValueError(f"n={n} exceeds the configured bound {max_n}")
    cx = RookComplex(stirling(n))
    report = BijectionReport(n)
    by_size: Dict[int, List[Placement]] = {}
    for facet in cx.facets():
        by_size.setdefault(len(facet), []).append(facet)
    for rooks in range(0, n + 1):
        placements = by_size.get(rooks, [])
        images = [rook_to_partition(n, x) for x in placements]
        target = {P for P in set_partitions(n + 1, n + 1 - rooks) if is_intertwined_partition(P)}
        if len(set(images)) != len(images):
            report.counterexamples.append(f"R not injective on {rooks}-rook facets")
        for x, P in zip(placements, images):
            if P not in target:
                report.counterexamples.append(f"R{x} = {P.as_lists()} is not intertwined")
        missed = target.difference(images)
        for P in sorted(missed, key=lambda P: P.blocks):
            report.counterexamples.append(f"{P.as_lists()} has no maximal preimage")
        if placements or target:
            report.sizes[rooks] = (len(placements), len(target))
    return report


def partition_counts(n: int, k: int, intertwined: bool = False) -> Dict[str, int]:
    if intertwined:
        return {
            "formula": intertwined_formula(n, k),
            "definition": count_intertwined(n, k),
            "brute": count_intertwined_bruteforce(n, k),
        }
    return {"formula": stirling2(n, k), "brute": sum(1 for _ in set_partitions(n, k))}

