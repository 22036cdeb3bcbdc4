"""Acyclic matching on the face poset of the Stirling complex.

The matching is assembled from two poset maps.  ``phi`` sends a placement to
the first diagonal square (in the chain ``Q1``) whose row and column carry
no off-diagonal rook; its fibers are matched by toggling that diagonal
square.  Placements with no such diagonal square form ``Gamma``; there
``psi`` picks the first off-diagonal square (in the chain ``Q2``) that
could be added between an occupied row and an occupied column, and each
``psi`` fiber is matched by toggling that square.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import ceil
from typing import Dict, Iterable, List, Optional, Tuple, Union

from .board import Board, Square, stirling
from .complex import Placement, RookComplex


class _Top:
    """Adjoined maximum of a chain."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "TOP"

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()
Label = Union[Square, _Top]


class MorseError(ValueError):
    pass


def diagonal_order(n: int) -> Tuple[List[int], List[int]]:
    """The two chains of the order on ``{2, ..., 2n}``, each listed bottom to top.

    Evens alternate from the outside in: ``2n < 2 < 2(n-1) < 4 < ...``.
    Odds start at ``2*ceil(n/2) + 1`` and move by ``(-1)^(n+i+1) * 2i``.
    """
    lo, hi = 1, n
    evens = []
    while lo <= hi:
        evens.append(2 * hi)
        if lo < hi:
            evens.append(2 * lo)
        lo, hi = lo + 1, hi - 1
    odds = []
    if n >= 2:
        k = 2 * ceil(n / 2) + 1
        odds.append(k)
        for i in range(1, n - 1):
            k += (-1) ** (n + i + 1) * 2 * i
            odds.append(k)
    return evens, odds


def q_order(n: int) -> List[Square]:
    """Squares of ``stirling(n)``: by ``j - i`` ascending, ties broken along the chains."""
    evens, odds = diagonal_order(n)
    rank = {v: r for r, v in enumerate(evens)}
    rank.update({v: r for r, v in enumerate(odds)})
    squares = [(i, j) for j in range(1, n + 1) for i in range(1, j + 1)]
    return sorted(squares, key=lambda s: (s[1] - s[0], rank[s[0] + s[1]]))


def q1_chain(n: int) -> List[Label]:
    return [s for s in q_order(n) if s[0] == s[1]] + [TOP]


def q2_chain(n: int) -> List[Label]:
    return [s for s in q_order(n) if s[0] != s[1]] + [TOP]


class _Masks:
    """Bit layout of ``stirling(n)`` shared by phi and psi."""

    def __init__(self, n: int, cx: Optional[RookComplex] = None):
        self.n = n
        self.cx = cx if cx is not None else RookComplex(stirling(n))
        bit = {s: 1 << k for s, k in self.cx.index.items()}
        self.bit = bit
        self.row = {j: sum(bit[(i, j)] for i in range(1, j + 1)) for j in range(1, n + 1)}
        self.col = {i: sum(bit[(i, j)] for j in range(i, n + 1)) for i in range(1, n + 1)}
        self.q1 = [s for s in q1_chain(n) if s is not TOP]
        self.q2 = [s for s in q2_chain(n) if s is not TOP]
        # off-diagonal squares in row i or column i
        self.block = {i: (self.row[i] | self.col[i]) & ~bit[(i, i)] for i in range(1, n + 1)}
        self.q1_pos = {s: k for k, s in enumerate(self.q1)}
        self.q2_pos = {s: k for k, s in enumerate(self.q2)}

    def phi(self, x: int) -> Label:
        for s in self.q1:
            if not x & self.block[s[0]]:
                return s
        return TOP

    def psi(self, x: int) -> Label:
        for s in self.q2:
            i, j = s
            if not (x & self.row[i] and x & self.col[j]):
                continue
            if x & self.bit[s] or not x & (self.col[i] | self.row[j]):
                return s
        return TOP


def _mask_of(masks: _Masks, x: Iterable[Square]) -> int:
    x = tuple(x)
    m = masks.cx.mask(x)
    if not masks.cx.is_face_mask(m):
        raise MorseError(f"{x} is not a face of stirling({masks.n})")
    return m


def phi(n: int, x: Iterable[Square]) -> Label:
    masks = _Masks(n)
    return masks.phi(_mask_of(masks, x))


def in_gamma(n: int, x: Iterable[Square]) -> bool:
    """Every index has an off-diagonal rook in its row or its column."""
    x = set(x)
    return all(any((i, j) in x or (j, i) in x for j in range(1, n + 1) if j != i) for i in range(1, n + 1))


def psi(n: int, x: Iterable[Square]) -> Label:
    masks = _Masks(n)
    m = _mask_of(masks, x)
    if masks.phi(m) is not TOP:
        raise MorseError("psi is only defined on Gamma")
    return masks.psi(m)


def leq(chain: List[Label], a: Label, b: Label) -> bool:
    return chain.index(a) <= chain.index(b)


@dataclass
class MorseMatching:
    """Partial matching on the face poset of ``complex``, faces as bitsets."""

    complex: RookComplex
    partner: Dict[int, int] = field(default_factory=dict)
    phi_label: Dict[int, Label] = field(default_factory=dict)
    psi_label: Dict[int, Label] = field(default_factory=dict)
    critical: List[int] = field(default_factory=list)

    @classmethod
    def from_pairs(cls, complex: RookComplex, pairs: Iterable[Tuple[int, int]]) -> "MorseMatching":
        m = cls(complex)
        for x, y in pairs:
            m.add_pair(x, y)
        matched = set(m.partner)
        m.critical = [f for f in complex.face_masks() if f not in matched]
        return m

    def add_pair(self, x: int, y: int) -> None:
        if x in self.partner or y in self.partner:
            raise MorseError("face matched twice")
        self.partner[x] = y
        self.partner[y] = x

    def pairs(self) -> List[Tuple[int, int]]:
        """Matched pairs as (lower, upper)."""
        return [(x, y) for x, y in self.partner.items() if bin(x).count("1") < bin(y).count("1")]

    def is_up(self, x: int) -> bool:
        """True when ``x`` is matched with a face above it."""
        y = self.partner.get(x)
        return y is not None and y & x == x and y != x

    def critical_placements(self) -> List[Placement]:
        return [self.complex.placement(m) for m in self.critical]

    def critical_counts(self) -> Dict[int, int]:
        """Critical cells per dimension (empty face has dimension -1)."""
        return dict(sorted(Counter(bin(m).count("1") - 1 for m in self.critical).items()))


def q1_matching(n: int, masks: Optional[_Masks] = None) -> MorseMatching:
    """Toggle ``phi(x)`` on every fiber below the top; Gamma stays unmatched."""
    masks = masks or _Masks(n)
    m = MorseMatching(masks.cx)
    for x in masks.cx.face_masks():
        label = masks.phi(x)
        m.phi_label[x] = label
        if label is TOP:
            m.critical.append(x)
            continue
        b = masks.bit[label]
        if not x & b:
            m.add_pair(x, x | b)
    return m


def gamma(n: int) -> List[Placement]:
    masks = _Masks(n)
    return [masks.cx.placement(x) for x in masks.cx.face_masks() if masks.phi(x) is TOP]


def full_matching(n: int) -> MorseMatching:
    """``q1_matching`` plus, inside Gamma, pairs ``(x, x + s)`` within the ``psi`` fiber of ``s``."""
    masks = _Masks(n)
    m = q1_matching(n, masks)
    gamma_faces = m.critical
    for x in gamma_faces:
        m.psi_label[x] = masks.psi(x)
    for x in gamma_faces:
        label = m.psi_label[x]
        if label is TOP or x in m.partner:
            continue
        b = masks.bit[label]
        if x & b:
            continue
        y = x | b
        # both ends must sit in the same fiber
        if m.psi_label.get(y) == label:
            m.add_pair(x, y)
    critical = [x for x in gamma_faces if x not in m.partner]
    m.critical = critical
    return m


def matching_errors(m: MorseMatching) -> List[str]:
    """Structural problems: pairs that are not covering relations of faces."""
    errors = []
    cx = m.complex
    for x, y in m.pairs():
        diff = x ^ y
        if y & x != x or diff & (diff - 1):
            errors.append(f"{cx.placement(x)} and {cx.placement(y)} do not differ by one square")
        elif not cx.is_face_mask(y):
            errors.append(f"{cx.placement(y)} is not a face")
    return errors


def verify_acyclic(m: MorseMatching) -> bool:
    """No directed cycle in the Hasse diagram with matched edges pointing up.

    Such cycles alternate between two adjacent ranks, so each pair of
    consecutive ranks is checked on its own with Kahn's algorithm.
    """
    cx = m.complex
    levels = [cx.face_masks(k) for k in range(cx.dim + 2)]
    for k in range(len(levels) - 1):
        lower, upper = levels[k], levels[k + 1]
        succ: Dict[int, List[int]] = {x: [] for x in lower}
        for y in upper:
            succ[y] = []
        indeg: Dict[int, int] = dict.fromkeys(succ, 0)
        for y in upper:
            rest = y
            while rest:
                low = rest & -rest
                rest ^= low
                x = y ^ low
                if m.partner.get(x) == y:
                    succ[x].append(y)
                    indeg[y] += 1
                else:
                    succ[y].append(x)
                    indeg[x] += 1
        stack = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for w in succ[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        if seen != len(succ):
            return False
    return True


@dataclass
class CriticalSummary:
    n: int
    counts: List[int]  # critical cells for dimensions 0..n-1
    acyclic: bool
    min_dim: Optional[int]
    min_dim_all_facets: bool
    wedge_spheres: Optional[Tuple[int, int]]  # (count, dimension) when the wedge conclusion applies
    critical: List[Placement]
    gamma_size: int


def critical_summary(n: int, matching: Optional[MorseMatching] = None) -> CriticalSummary:
    """Critical counts per dimension and the wedge conclusion they support.

    When every critical cell of the lowest critical dimension ``j`` is a
    facet, the complex is a wedge of that many ``j``-spheres with a complex
    built from the higher critical cells.
    """
    m = matching or full_matching(n)
    by_dim = m.critical_counts()
    counts = [by_dim.get(d, 0) for d in range(max(n, 1))]
    facets = set(m.complex.facet_masks())
    dims = [bin(x).count("1") - 1 for x in m.critical]
    min_dim = min(dims) if dims else None
    all_facets = min_dim is not None and all(
        x in facets for x, d in zip(m.critical, dims) if d == min_dim
    )
    wedge = (by_dim[min_dim], min_dim) if all_facets else None
    return CriticalSummary(
        n=n,
        counts=counts,
        acyclic=verify_acyclic(m) and not matching_errors(m),
        min_dim=min_dim,
        min_dim_all_facets=all_facets,
        wedge_spheres=wedge,
        critical=sorted(m.critical_placements(), key=lambda p: (len(p), p)),
        gamma_size=len(m.psi_label),
    )


def require_stirling(b: Board) -> int:
    if not b.is_stirling:
        raise MorseError(f"Morse construction requires a staircase board, got {b}")
    return b.n
