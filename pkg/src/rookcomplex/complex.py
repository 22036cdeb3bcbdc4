"""Rook complexes: faces are sets of pairwise non-attacking squares.

Faces are handled internally as integer bitsets over the square order of a
:class:`RookComplex` (the board's (column, row) lexicographic order, with
removed squares skipped).  Public helpers convert to sorted tuples of
squares.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import prod
from typing import Iterable, Iterator, List, Sequence, Tuple, Union

from .board import Board, Square, attacks

Placement = Tuple[Square, ...]


class NotAFaceError(ValueError):
    pass


@dataclass(frozen=True)
class FVector:
    """Face counts; ``counts[0]`` is f_{-1} (the empty face)."""

    counts: Tuple[int, ...]

    def f(self, d: int) -> int:
        k = d + 1
        return self.counts[k] if 0 <= k < len(self.counts) else 0

    @property
    def dim(self) -> int:
        return len(self.counts) - 2

    def reduced_euler(self) -> int:
        # (-1)^d f_d summed from d = -1
        return sum(c if k % 2 else -c for k, c in enumerate(self.counts))

    def as_list(self) -> List[int]:
        return list(self.counts)


class RookComplex:
    """Rook complex on an arbitrary subset of a board's squares.

    This is the "view" used for links and deletions: a board plus the squares
    still available.  Nothing is materialized until faces are requested.
    """

    def __init__(self, board: Board, squares: Iterable[Square] | None = None):
        self.board = board
        if squares is None:
            self.squares: Tuple[Square, ...] = board.squares
        else:
            keep = set(squares)
            missing = keep.difference(board.squares)
            if missing:
                raise ValueError(f"squares not on board {board}: {sorted(missing)}")
            self.squares = tuple(s for s in board.squares if s in keep)
        self.index = {s: k for k, s in enumerate(self.squares)}
        m = len(self.squares)
        self.full_mask = (1 << m) - 1
        free = []
        after = []
        for k, s in enumerate(self.squares):
            bits = 0
            for t_idx, t in enumerate(self.squares):
                if t_idx != k and not attacks(s, t):
                    bits |= 1 << t_idx
            free.append(bits)
            after.append(bits & ~((1 << (k + 1)) - 1))
        # free[k]: squares compatible with square k; after[k]: those with larger index
        self._free = free
        self._after = after

    def __repr__(self) -> str:
        return f"RookComplex({self.board}, {len(self.squares)} squares)"

    # conversions

    def mask(self, placement: Iterable[Square]) -> int:
        bits = 0
        for s in placement:
            try:
                bits |= 1 << self.index[s]
            except KeyError:
                raise NotAFaceError(f"square {s} is not a vertex of {self!r}") from None
        return bits

    def placement(self, mask: int) -> Placement:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.squares[low.bit_length() - 1])
            mask ^= low
        return tuple(out)

    def key(self) -> frozenset:
        """Hashable identity of the complex: its vertex set."""
        return frozenset(self.squares)

    # faces

    def is_face_mask(self, mask: int) -> bool:
        rest = mask
        while rest:
            low = rest & -rest
            k = low.bit_length() - 1
            rest ^= low
            if rest & ~self._free[k]:
                return False
        return True

    def is_face(self, squares: Iterable[Square]) -> bool:
        squares = list(squares)
        if any(s not in self.index for s in squares):
            return False
        if len(set(squares)) != len(squares):
            return False
        return self.is_face_mask(self.mask(squares))

    def free_mask(self, mask: int) -> int:
        """Squares that can be added to the face ``mask``."""
        free = self.full_mask
        while mask:
            low = mask & -mask
            free &= self._free[low.bit_length() - 1]
            mask ^= low
        return free

    @cached_property
    def _levels(self) -> List[List[Tuple[int, int, int]]]:
        # (mask, extension candidates above max index, all addable squares)
        level = [(0, self.full_mask, self.full_mask)]
        levels = []
        while level:
            levels.append(level)
            nxt = []
            for mask, cand, free in level:
                c = cand
                while c:
                    low = c & -c
                    k = low.bit_length() - 1
                    c ^= low
                    nxt.append((mask | low, cand & self._after[k], free & self._free[k]))
            level = nxt
        return levels

    def face_masks(self, rooks: int | None = None) -> List[int]:
        """Faces as bitsets, all of them grouped by cardinality, or those with ``rooks`` squares."""
        levels = self._levels
        if rooks is not None:
            if 0 <= rooks < len(levels):
                return [m for m, _, _ in levels[rooks]]
            return []
        return [m for level in levels for m, _, _ in level]

    def faces(self) -> Iterator[Placement]:
        for level in self._levels:
            for mask, _, _ in level:
                yield self.placement(mask)

    def facet_masks(self) -> List[int]:
        return [m for level in self._levels for m, _, free in level if free == 0]

    def facets(self) -> List[Placement]:
        return [self.placement(m) for m in self.facet_masks()]

    def f_vector(self) -> FVector:
        return FVector(tuple(len(level) for level in self._levels))

    @property
    def dim(self) -> int:
        return len(self._levels) - 2

    def is_pure(self) -> bool:
        return len({bin(m).count("1") for m in self.facet_masks()}) <= 1

    def is_simplex(self) -> bool:
        """True when every pair of vertices is compatible (one facet)."""
        return all((self.full_mask & ~(1 << k)) & ~f == 0 for k, f in enumerate(self._free))

    # sub-complexes

    def link(self, face: Iterable[Square]) -> "RookComplex":
        face = tuple(face)
        mask = self.mask(face)
        if not self.is_face_mask(mask):
            raise NotAFaceError(f"{face} is not a face of {self!r}")
        return RookComplex(self.board, self.placement(self.free_mask(mask)))

    def deletion(self, face: Iterable[Square]) -> "RookComplex":
        face = tuple(face)
        mask = self.mask(face)
        if not self.is_face_mask(mask):
            raise NotAFaceError(f"{face} is not a face of {self!r}")
        return RookComplex(self.board, self.placement(self.full_mask & ~mask))


ComplexLike = Union[Board, RookComplex]


def as_complex(c: ComplexLike) -> RookComplex:
    return c if isinstance(c, RookComplex) else RookComplex(c)


def is_face(b: ComplexLike, squares: Iterable[Square]) -> bool:
    return as_complex(b).is_face(squares)


def enumerate_faces(b: ComplexLike) -> Iterator[Placement]:
    """Every face once, by increasing cardinality, starting with the empty face."""
    return as_complex(b).faces()


def facets(b: ComplexLike) -> List[Placement]:
    return as_complex(b).facets()


def f_vector_enumerated(b: ComplexLike) -> FVector:
    return as_complex(b).f_vector()


def f_vector_formula(b: Board) -> FVector:
    """f-vector from column lengths alone.

    Choosing the occupied columns ``s_0 > s_1 > ... > s_i`` and filling them
    from the shortest column down, the ``j``-th rook has ``l(s_j) - j`` free
    squares.
    """
    ell = b.column_lengths
    counts = [1]
    for size in range(1, b.n + 1):
        total = 0
        for cols in combinations(range(b.n - 1, -1, -1), size):
            total += prod(ell[c] - j for j, c in enumerate(cols))
        if total == 0:
            break
        counts.append(total)
    return FVector(tuple(counts))


def reduced_euler(b: ComplexLike) -> int:
    if isinstance(b, Board):
        return f_vector_formula(b).reduced_euler()
    return b.f_vector().reduced_euler()


def link(b: ComplexLike, face: Sequence[Square]) -> RookComplex:
    return as_complex(b).link(face)


def deletion(b: ComplexLike, face: Sequence[Square]) -> RookComplex:
    return as_complex(b).deletion(face)
