"""Reduced integral homology of rook complexes.

Boundary matrices are reduced in two stages.  Sparse elimination on pivots
of absolute value one removes the bulk of the matrix without changing the
Smith normal form of what is left; the leftover block (typically tiny or
empty) goes through a dense Smith normal form over Python integers.
"""

from __future__ import annotations

import heapq
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .board import Board, HypothesisError, satisfies_vd_hypotheses
from .complex import RookComplex, f_vector_formula

log = logging.getLogger(__name__)

CACHE_ENV = "ROOKCOMPLEX_CACHE_DIR"
DEFAULT_MAX_FACES = 2_000_000
# St(8) has 21147 faces; anything bigger must be asked for explicitly
DESK_FACES = 25_000


class ResourceLimitError(RuntimeError):
    """The complex is larger than the configured face budget."""


Column = Dict[int, int]


@dataclass
class BoundaryMatrix:
    """Sparse column-major matrix of the boundary map C_k -> C_{k-1}."""

    k: int
    nrows: int
    ncols: int
    columns: List[Column]

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.ncols for _ in range(self.nrows)]
        for c, col in enumerate(self.columns):
            for r, v in col.items():
                dense[r][c] = v
        return dense

    def compose(self, other: "BoundaryMatrix") -> List[Column]:
        """Columns of ``self @ other``, zeros dropped."""
        out = []
        for col in other.columns:
            acc: Column = {}
            for mid, v in col.items():
                for r, w in self.columns[mid].items():
                    acc[r] = acc.get(r, 0) + v * w
            out.append({r: v for r, v in acc.items() if v})
        return out


def boundary_matrix(c: Board | RookComplex, k: int) -> BoundaryMatrix:
    """Signed boundary from faces with ``k+1`` rooks to faces with ``k`` rooks.

    ``k = 0`` is the augmentation onto the empty face.  The sign of dropping
    the ``t``-th square (in the complex's square order) is ``(-1)^t``.
    """
    cx = c if isinstance(c, RookComplex) else RookComplex(c)
    if k < 0:
        raise ValueError("k must be >= 0")
    rows = cx.face_masks(k)
    cols = cx.face_masks(k + 1)
    row_index = {m: i for i, m in enumerate(rows)}
    columns = []
    for mask in cols:
        col: Column = {}
        rest, t = mask, 0
        while rest:
            low = rest & -rest
            rest ^= low
            col[row_index[mask ^ low]] = -1 if t & 1 else 1
            t += 1
        columns.append(col)
    return BoundaryMatrix(k, len(rows), len(cols), columns)


@dataclass
class SNFResult:
    rank: int
    factors: List[int]  # nonzero invariant factors, each dividing the next

    @property
    def torsion(self) -> List[int]:
        return [d for d in self.factors if d > 1]


def eliminate_unit_pivots(columns: Sequence[Column]) -> Tuple[int, List[Column]]:
    """Pivot on +-1 entries until none is left.

    Returns the number of pivots and the columns of the remaining Schur
    complement, which has the same nontrivial invariant factors as the input.
    Pivots are picked Markowitz-style: shortest column first, then the
    shortest row among its unit entries.
    """
    cols: Dict[int, Column] = {c: dict(col) for c, col in enumerate(columns) if col}
    rows: Dict[int, set] = {}
    for c, col in cols.items():
        for r in col:
            rows.setdefault(r, set()).add(c)
    heap = [(len(col), c) for c, col in cols.items()]
    heapq.heapify(heap)
    pivots = 0
    while heap:
        length, c = heapq.heappop(heap)
        col = cols.get(c)
        if col is None or len(col) != length:
            continue
        best, best_len = None, 0
        for r, v in col.items():
            if v == 1 or v == -1:
                rl = len(rows[r])
                if best is None or rl < best_len:
                    best, best_len = r, rl
                    if rl == 1:
                        break
        if best is None:
            continue
        r = best
        sign = col[r]
        for c2 in list(rows[r]):
            if c2 == c:
                continue
            col2 = cols[c2]
            f = col2[r] * sign
            for rr, x in col.items():
                new = col2.get(rr, 0) - f * x
                if new:
                    if rr not in col2:
                        rows[rr].add(c2)
                    col2[rr] = new
                elif rr in col2:
                    del col2[rr]
                    rows[rr].discard(c2)
            if col2:
                heapq.heappush(heap, (len(col2), c2))
            else:
                del cols[c2]
        for rr in col:
            rows[rr].discard(c)
        del cols[c]
        pivots += 1
    return pivots, [cols[c] for c in sorted(cols)]


def _dense_factors(a: List[List[int]]) -> List[int]:
    """Nonzero invariant factors of a dense integer matrix (modified in place)."""
    m = len(a)
    n = len(a[0]) if m else 0
    factors: List[int] = []
    t = 0
    scale = 1
    while t < min(m, n):
        # pull out the content of the trailing block
        g = 0
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j]:
                    g = gcd(g, a[i][j])
        if g == 0:
            break
        if g > 1:
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    row[j] //= g
            scale *= g
        while True:
            # smallest nonzero entry becomes the pivot
            pi = pj = -1
            best = 0
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    v = row[j]
                    if v and (best == 0 or abs(v) < best):
                        best, pi, pj = abs(v), i, j
                        if best == 1:
                            break
                if best == 1:
                    break
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
            p = a[t][t]
            clean = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    ri, rt = a[i], a[t]
                    for j in range(t, n):
                        ri[j] -= q * rt[j]
                if a[i][t]:
                    clean = False
            rt = a[t]
            for j in range(t + 1, n):
                q = rt[j] // p
                if q:
                    for i in range(t, m):
                        a[i][j] -= q * a[i][t]
                if rt[j]:
                    clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is None:
                break
            ri, rt = a[bad], a[t]
            for j in range(t, n):
                rt[j] += ri[j]
        factors.append(abs(a[t][t]) * scale)
        t += 1
    return factors


def smith_normal_form(matrix: Sequence[Sequence[int]] | BoundaryMatrix) -> SNFResult:
    """Rank and nonzero invariant factors ``d_1 | d_2 | ...``."""
    if isinstance(matrix, BoundaryMatrix):
        columns = matrix.columns
    else:
        nrows = len(matrix)
        ncols = len(matrix[0]) if nrows else 0
        columns = [{r: matrix[r][c] for r in range(nrows) if matrix[r][c]} for c in range(ncols)]
    units, rest = eliminate_unit_pivots(columns)
    factors = [1] * units
    if rest:
        row_ids = sorted({r for col in rest for r in col})
        pos = {r: i for i, r in enumerate(row_ids)}
        dense = [[0] * len(rest) for _ in row_ids]
        for c, col in enumerate(rest):
            for r, v in col.items():
                dense[pos[r]][c] = v
        log.debug("dense SNF on %dx%d remainder", len(row_ids), len(rest))
        factors.extend(_dense_factors(dense))
    return SNFResult(len(factors), factors)


@dataclass
class BettiResult:
    board: str
    betti: List[int]  # reduced Betti numbers for dimensions 0..dim
    torsion: List[List[int]]  # torsion coefficients of H_d, same indexing
    empty_class: int = 0  # reduced H_{-1}, nonzero only for the complex {empty}
    f_vector: List[int] = field(default_factory=list)

    def reduced_euler(self) -> int:
        return -self.empty_class + sum((-1) ** d * b for d, b in enumerate(self.betti))

    @property
    def torsion_free(self) -> bool:
        return not any(self.torsion)

    def padded(self, length: int) -> List[int]:
        return (self.betti + [0] * length)[:max(length, len(self.betti))]


def _cache_path(board: Board, k: int) -> Optional[Path]:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    return Path(root) / f"board-{board.canonical()}.d{k}.snf"


def _read_cache(path: Optional[Path]) -> Optional[SNFResult]:
    if path is None or not path.exists():
        return None
    factors = [int(tok) for tok in path.read_text().split()]
    return SNFResult(len(factors), factors)


def _write_cache(path: Optional[Path], res: SNFResult) -> None:
    if path is None:
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text("".join(f"{d}\n" for d in res.factors))
    tmp.replace(path)


def _boundary_snf(board: Board, k: int) -> SNFResult:
    return smith_normal_form(boundary_matrix(RookComplex(board), k))


def check_size(c: Board | RookComplex, max_faces: int = DEFAULT_MAX_FACES, allow_large: bool = False) -> int:
    board = c if isinstance(c, Board) else c.board
    if isinstance(c, Board):
        total = sum(f_vector_formula(board).counts)
    else:
        total = sum(c.f_vector().counts)
    if total > max_faces:
        raise ResourceLimitError(f"{board} has {total} faces, above the limit of {max_faces}")
    if total > DESK_FACES and not allow_large:
        raise ResourceLimitError(
            f"{board} has {total} faces; pass allow_large to compute beyond {DESK_FACES} faces"
        )
    return total


def betti(
    c: Board | RookComplex,
    *,
    max_faces: int = DEFAULT_MAX_FACES,
    allow_large: bool = False,
    threads: int = 1,
) -> BettiResult:
    """Reduced Betti numbers and torsion, dimension by dimension."""
    check_size(c, max_faces, allow_large)
    cx = c if isinstance(c, RookComplex) else RookComplex(c)
    whole_board = isinstance(c, Board)
    fv = cx.f_vector()
    top = len(fv.counts) - 1  # largest number of rooks
    # boundary k maps (k+1)-rook faces to k-rook faces, k = 0..top-1
    results: Dict[int, SNFResult] = {}
    todo = []
    for k in range(top):
        cached = _read_cache(_cache_path(cx.board, k)) if whole_board else None
        if cached is not None:
            results[k] = cached
        else:
            todo.append(k)
    if threads > 1 and whole_board and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = {k: pool.submit(_boundary_snf, cx.board, k) for k in todo}
            for k, fut in futures.items():
                results[k] = fut.result()
    else:
        for k in todo:
            results[k] = smith_normal_form(boundary_matrix(cx, k))
    if whole_board:
        for k in todo:
            _write_cache(_cache_path(cx.board, k), results[k])

    def rank(k: int) -> int:
        return results[k].rank if k in results else 0

    empty_class = 1 - rank(0)
    bettis, torsion = [], []
    for d in range(top):
        # d-faces have d+1 rooks: incoming boundary k = d+1, outgoing k = d
        bettis.append(fv.counts[d + 1] - rank(d) - rank(d + 1))
        torsion.append(results[d + 1].torsion if (d + 1) in results else [])
    return BettiResult(str(cx.board) if whole_board else repr(cx), bettis, torsion, empty_class, list(fv.counts))


def wedge_count_vd(b: Board, **kwargs) -> int:
    """Number of top-dimensional spheres for a vertex decomposable board.

    Read off the reduced Euler characteristic and confirmed against the
    computed homology, which must sit entirely in dimension ``n - 1``.
    """
    if not satisfies_vd_hypotheses(b):
        raise HypothesisError(f"{b} does not satisfy a_1 >= 1, a_n >= n, a_i >= i - 1")
    count = abs(f_vector_formula(b).reduced_euler())
    res = betti(b, **kwargs)
    top = b.n - 1
    others = [x for d, x in enumerate(res.betti) if d != top]
    if any(others) or res.empty_class or not res.torsion_free or res.padded(b.n)[top] != count:
        raise AssertionError(f"homology of {b} is not a wedge of {count} spheres: {res.betti}")
    return count
