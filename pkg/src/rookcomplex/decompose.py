"""Purity and vertex decomposability of rook complexes.

Two independent routes: an exhaustive shedding-vertex search working on
facet lists of arbitrary complexes, and a constructive certificate for
boards with ``a_1 >= 1``, ``a_n >= n``, ``a_i >= i - 1``, which sheds the
first-column squares top to bottom and recurses into smaller Ferrers boards.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .board import Board, HypothesisError, Square, board_from_rows, parse_board, satisfies_vd_hypotheses
from .complex import RookComplex, as_complex

DEFAULT_VERTEX_BOUND = 16


class VertexBoundError(RuntimeError):
    pass


def is_pure(c: Board | RookComplex) -> bool:
    return as_complex(c).is_pure()


# -- exhaustive search on facet lists ----------------------------------------

Facets = FrozenSet[int]


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _deletion(facets: Facets, v: int) -> Facets:
    keep = [F for F in facets if not F & v]
    out = set(keep)
    for F in facets:
        if F & v:
            G = F & ~v
            if not any(G & H == G for H in keep):
                out.add(G)
    return frozenset(out)


def _link(facets: Facets, v: int) -> Facets:
    return frozenset(F & ~v for F in facets if F & v)


def _vd(facets: Facets, memo: Dict[Facets, bool]) -> bool:
    if len(facets) <= 1:
        return True
    hit = memo.get(facets)
    if hit is not None:
        return hit
    result = False
    if len({_popcount(F) for F in facets}) == 1:
        verts = 0
        for F in facets:
            verts |= F
        while verts and not result:
            v = verts & -verts
            verts ^= v
            result = _vd(_deletion(facets, v), memo) and _vd(_link(facets, v), memo)
    memo[facets] = result
    return result


def vd_facets(facets: Iterable[Iterable[int]], vertex_bound: int = DEFAULT_VERTEX_BOUND) -> bool:
    """Vertex decomposability of the complex generated by ``facets`` (vertex labels are ints >= 0).

    An empty facet list is the void complex; ``[[]]`` is ``{empty}``.
    """
    masks = set()
    for F in facets:
        m = 0
        for v in F:
            m |= 1 << v
        masks.add(m)
    top = frozenset(F for F in masks if not any(F != G and F & G == F for G in masks))
    nverts = _popcount(_or_all(top))
    if nverts > vertex_bound:
        raise VertexBoundError(f"{nverts} vertices exceeds the search bound {vertex_bound}")
    return _vd(top, {})


def _or_all(masks: Iterable[int]) -> int:
    out = 0
    for m in masks:
        out |= m
    return out


def vd_bruteforce(c: Board | RookComplex, vertex_bound: int = DEFAULT_VERTEX_BOUND) -> bool:
    cx = as_complex(c)
    if len(cx.squares) > vertex_bound:
        raise VertexBoundError(f"{len(cx.squares)} vertices exceeds the search bound {vertex_bound}")
    return _vd(frozenset(cx.facet_masks()), {})


# -- constructive certificate ------------------------------------------------


@dataclass
class CertNode:
    """Node of a shedding tree: ``Sigma(board)`` with the squares in ``deleted`` removed.

    ``rule`` records how the shedding vertex was chosen: ``"column"`` for the
    top-down first-column peel, ``"search"`` where that peel does not apply.
    """

    board: Board
    deleted: FrozenSet[Square] = frozenset()
    shed: Optional[Square] = None
    link: Optional["CertNode"] = None
    deletion: Optional["CertNode"] = None
    rule: str = "column"

    @property
    def is_leaf(self) -> bool:
        return self.shed is None

    def squares(self) -> FrozenSet[Square]:
        return frozenset(s for s in self.board.squares if s not in self.deleted)

    def size(self) -> int:
        if self.is_leaf:
            return 1
        return 1 + self.link.size() + self.deletion.size()

    def shedding_sequence(self) -> List[Square]:
        """Shedding vertices along the chain of deletions from this node."""
        out, node = [], self
        while not node.is_leaf and node.board == self.board:
            out.append(node.shed)
            node = node.deletion
        return out

    def to_dict(self) -> dict:
        out: dict = {"board": self.board.spec(), "deleted": sorted(list(s) for s in self.deleted)}
        if self.is_leaf:
            out["simplex"] = True
        else:
            out["rule"] = self.rule
            out["shed"] = list(self.shed)
            out["link"] = self.link.to_dict()
            out["deletion"] = self.deletion.to_dict()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "CertNode":
        board = parse_board(d["board"]) if d["board"] != "psi:" else Board()
        node = cls(board, frozenset(tuple(s) for s in d.get("deleted", [])))
        if "shed" in d:
            node.shed = tuple(d["shed"])
            node.rule = d.get("rule", "column")
            node.link = cls.from_dict(d["link"])
            node.deletion = cls.from_dict(d["deletion"])
        return node

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _rows_without(board: Board, row: Optional[int]) -> Board:
    """Board left after removing column 1 and (optionally) one row."""
    return board_from_rows(r - 1 for j, r in enumerate(board.row_lengths, start=1) if j != row)


def _is_simplex(squares: Iterable[Square]) -> bool:
    squares = list(squares)
    rows = [s[1] for s in squares]
    cols = [s[0] for s in squares]
    return len(set(rows)) == len(rows) and len(set(cols)) == len(cols)


def _top_of_column(board: Board, j: int) -> FrozenSet[Square]:
    """V_j: the top ``j`` squares of the first column."""
    p = board.p
    return frozenset((1, r) for r in range(p - j + 1, p + 1))


def _build(board: Board, removed: int = 0) -> CertNode:
    if removed == 0 and board.p and not satisfies_vd_hypotheses(board):
        node = _search(board, frozenset(), {})
        if node is None:
            raise HypothesisError(f"no shedding order found for {board}")
        return node
    node = CertNode(board, _top_of_column(board, removed))
    if _is_simplex(node.squares()):
        return node
    row = board.p - removed
    node.shed = (1, row)
    node.link = _build(_rows_without(board, row), 0)
    if removed + 1 < board.p:
        node.deletion = _build(board, removed + 1)
    else:
        # only (1, 1) was left in column 1 and it is gone now
        node.deletion = _build(_rows_without(board, None), 0)
    return node


def _search(board: Board, deleted: FrozenSet[Square], memo: dict) -> Optional[CertNode]:
    if deleted in memo:
        return memo[deleted]
    node: Optional[CertNode] = CertNode(board, deleted, rule="search")
    squares = node.squares()
    if not _is_simplex(squares):
        if not RookComplex(board, squares).is_pure():
            node = None
        else:
            for v in sorted(squares):
                attacked = {s for s in squares if s[0] == v[0] or s[1] == v[1]}
                lk = _search(board, deleted | attacked, memo)
                if lk is None:
                    continue
                dl = _search(board, deleted | {v}, memo)
                if dl is None:
                    continue
                node.shed, node.link, node.deletion = v, lk, dl
                break
            else:
                node = None
    memo[deleted] = node
    return node


def vd_certificate(b: Board) -> CertNode:
    """Shedding tree that peels the first column from the top down.

    Links are smaller Ferrers boards and recurse the same way.  A link that
    falls outside the hypotheses (a row of length 2 removed when ``a_2 = 1``
    leaves ``a_1 = 0``) gets its shedding vertices by search instead.
    """
    if not satisfies_vd_hypotheses(b):
        raise HypothesisError(f"{b} does not satisfy a_1 >= 1, a_n >= n, a_i >= i - 1")
    return _build(b, 0)


def _compress(squares: Iterable[Square]) -> FrozenSet[Square]:
    """Relabel occupied columns and rows by rank; rook complexes only see
    which squares share a line, so this preserves the complex."""
    squares = list(squares)
    cols = {c: k for k, c in enumerate(sorted({s[0] for s in squares}), start=1)}
    rows = {r: k for k, r in enumerate(sorted({s[1] for s in squares}), start=1)}
    return frozenset((cols[i], rows[j]) for i, j in squares)


@dataclass
class CertificateCheck:
    ok: bool
    path: str = ""
    reason: str = ""
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(cert: CertNode) -> CertificateCheck:
    """Re-check every node: purity, shedding vertex present, children equal
    (up to relabeling) to the actual link and deletion; leaves are simplices."""
    count = 0
    stack: List[Tuple[CertNode, str]] = [(cert, "root")]
    while stack:
        node, path = stack.pop()
        count += 1
        if not node.deleted <= frozenset(node.board.squares):
            return CertificateCheck(False, path, "deleted squares are not on the board", count)
        squares = node.squares()
        if node.is_leaf:
            if not _is_simplex(squares):
                return CertificateCheck(False, path, "leaf is not a simplex", count)
            continue
        if node.link is None or node.deletion is None:
            return CertificateCheck(False, path, "missing child", count)
        cx = RookComplex(node.board, squares)
        if not cx.is_pure():
            return CertificateCheck(False, path, "complex is not pure", count)
        v = tuple(node.shed)
        if v not in squares:
            return CertificateCheck(False, path, f"shedding square {v} is not a vertex", count)
        actual_link = squares - {s for s in squares if s[0] == v[0] or s[1] == v[1]}
        actual_del = squares - {v}
        if _compress(actual_link) != _compress(node.link.squares()):
            return CertificateCheck(False, path, "link child does not match", count)
        if _compress(actual_del) != _compress(node.deletion.squares()):
            return CertificateCheck(False, path, "deletion child does not match", count)
        stack.append((node.link, path + "/link"))
        stack.append((node.deletion, path + "/del"))
    return CertificateCheck(True, nodes=count)


def deletion_purity(b: Board) -> Dict[int, bool]:
    """Purity of the board's complex with the top ``j`` first-column squares removed, j < p."""
    out = {}
    for j in range(b.p):
        out[j] = RookComplex(b, CertNode(b, _top_of_column(b, j)).squares()).is_pure()
    return out
