from __future__ import annotations

import pytest

from rookcomplex.board import make_board, stirling
from rookcomplex.complex import RookComplex
from rookcomplex.morse import (
    TOP,
    MorseError,
    MorseMatching,
    _Masks,
    critical_summary,
    diagonal_order,
    full_matching,
    gamma,
    in_gamma,
    matching_errors,
    phi,
    psi,
    q1_chain,
    q2_chain,
    q_order,
    require_stirling,
    verify_acyclic,
)


def test_diagonal_order_five():
    assert diagonal_order(5) == ([10, 2, 8, 4, 6], [7, 5, 9, 3])


@pytest.mark.parametrize("n", range(1, 10))
def test_chains_cover_sums(n):
    evens, odds = diagonal_order(n)
    assert sorted(evens + odds) == list(range(2, 2 * n + 1))


def test_q_order_small():
    assert q1_chain(4)[:-1] == [(4, 4), (1, 1), (3, 3), (2, 2)]
    assert q2_chain(4)[:-1] == [(2, 3), (3, 4), (1, 2), (2, 4), (1, 3), (1, 4)]
    assert q1_chain(4)[-1] is TOP
    assert len(q_order(6)) == 21


def test_phi_examples():
    assert phi(5, [(1, 5)]) == (4, 4)
    assert phi(3, []) == q1_chain(3)[0]
    assert phi(2, [(1, 2)]) is TOP


def test_psi_examples():
    x = [(1, 3), (2, 4)]
    assert psi(4, x) == _psi_oracle(4, x)
    with pytest.raises(MorseError):
        psi(4, [])
    with pytest.raises(MorseError):
        phi(4, [(1, 3), (1, 4)])


def _psi_oracle(n, x):
    """Smallest (i, j) in Q2 with a rook in row i, one in column j, and x + (i, j) a face."""
    x = set(x)
    squares = set(stirling(n).squares)
    for i, j in q2_chain(n)[:-1]:
        in_row = any(s[1] == i for s in x)
        in_col = any(s[0] == j for s in x)
        y = x | {(i, j)}
        face = y <= squares and len({s[0] for s in y}) == len(y) == len({s[1] for s in y})
        if in_row and in_col and face:
            return (i, j)
    return TOP


def _phi_oracle(n, x):
    for i, _ in q1_chain(n)[:-1]:
        if not any(s != (i, i) and (i in s) for s in x):
            return (i, i)
    return TOP


@pytest.mark.parametrize("n", range(1, 7))
def test_maps_match_definitions(n):
    masks = _Masks(n)
    for m in masks.cx.face_masks():
        x = masks.cx.placement(m)
        assert masks.phi(m) == _phi_oracle(n, x)
        assert (masks.phi(m) is TOP) == in_gamma(n, x)
        if masks.phi(m) is TOP:
            assert masks.psi(m) == _psi_oracle(n, x)


def test_psi_is_not_order_reversing_at_six():
    # adding (2,4) occupies column 2 and rules out (2,3)
    x = [(1, 2), (3, 5), (4, 6)]
    y = x + [(2, 4)]
    assert in_gamma(6, x) and in_gamma(6, y)
    assert psi(6, x) == (2, 3) and psi(6, y) == (2, 4)
    chain = q2_chain(6)
    assert chain.index(psi(6, x)) < chain.index(psi(6, y))


@pytest.mark.parametrize("n", range(1, 9))
def test_matching_is_acyclic_and_local(n):
    m = full_matching(n)
    assert verify_acyclic(m)
    assert matching_errors(m) == []
    faces = set(m.complex.face_masks())
    assert set(m.partner) | set(m.critical) == faces
    assert not set(m.partner) & set(m.critical)


def test_cyclic_matching_detected():
    cx = RookComplex(stirling(3))
    d = [(1, 1), (2, 2), (3, 3)]
    pairs = [
        (cx.mask([d[0]]), cx.mask([d[0], d[1]])),
        (cx.mask([d[1]]), cx.mask([d[1], d[2]])),
        (cx.mask([d[2]]), cx.mask([d[0], d[2]])),
    ]
    m = MorseMatching.from_pairs(cx, pairs)
    assert not verify_acyclic(m)
    assert verify_acyclic(MorseMatching.from_pairs(cx, pairs[:2]))


def test_double_matching_rejected():
    cx = RookComplex(stirling(2))
    with pytest.raises(MorseError):
        MorseMatching.from_pairs(cx, [(0, 1), (0, 2)])


def test_non_cover_pair_reported():
    cx = RookComplex(stirling(3))
    m = MorseMatching.from_pairs(cx, [(0, cx.mask([(1, 1), (2, 2)]))])
    assert matching_errors(m)


@pytest.mark.parametrize("n,counts", [(1, [0]), (2, [1, 0]), (3, [0, 1, 0]), (4, [0, 2, 0, 0]),
                                      (5, [0, 0, 9, 0, 0]), (6, [0, 0, 6, 15, 0, 0])])
def test_counts_up_to_six(n, counts):
    s = critical_summary(n)
    assert s.counts == counts and s.acyclic


def test_four_critical_cells():
    s = critical_summary(4)
    assert s.critical == [((1, 3), (2, 4)), ((1, 4), (2, 3))]
    assert s.wedge_spheres == (2, 1)
    assert len(gamma(4)) == s.gamma_size


def test_require_stirling():
    assert require_stirling(stirling(5)) == 5
    with pytest.raises(MorseError, match="staircase"):
        require_stirling(make_board([3, 4, 2]))
