from __future__ import annotations

from itertools import combinations
from math import gcd

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from rookcomplex import homology
from rookcomplex.board import board_from_rows, make_board, stirling
from rookcomplex.complex import RookComplex, f_vector_formula
from rookcomplex.homology import (
    ResourceLimitError,
    betti,
    boundary_matrix,
    check_size,
    smith_normal_form,
    wedge_count_vd,
)
from rookcomplex.board import HypothesisError


def _determinantal_factors(a):
    """Invariant factors from gcds of k x k minors: d_k = D_k / D_{k-1}."""
    m, n = len(a), len(a[0]) if a else 0
    M = sympy.Matrix(a) if m and n else None
    out, prev = [], 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, int(M.extract(list(rows), list(cols)).det()))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


@given(matrices)
@settings(max_examples=150, deadline=None)
def test_snf_matches_minors(a):
    assert smith_normal_form(a).factors == _determinantal_factors(a)


def test_snf_known():
    assert smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).factors == [2, 6, 12]
    assert smith_normal_form([[0, 0], [0, 0]]).rank == 0
    assert smith_normal_form([[2, 0], [0, 3]]).factors == [1, 6]


rows_strategy = st.lists(st.integers(0, 5), max_size=5).filter(lambda r: sum(r) <= 14)


@given(rows_strategy)
@settings(max_examples=60, deadline=None)
def test_boundary_squares_to_zero(rows):
    cx = RookComplex(board_from_rows(rows))
    top = len(cx.f_vector().counts) - 1
    for k in range(1, top):
        assert not any(boundary_matrix(cx, k - 1).compose(boundary_matrix(cx, k)))


@given(rows_strategy)
@settings(max_examples=60, deadline=None)
def test_euler_characteristic(rows):
    b = board_from_rows(rows)
    assert betti(b).reduced_euler() == f_vector_formula(b).reduced_euler()


@pytest.mark.parametrize(
    "n,row",
    [(1, [0]), (2, [1]), (3, [0, 1]), (4, [0, 2]), (5, [0, 0, 9]), (6, [0, 0, 6, 15])],
)
def test_small_stirling(n, row):
    res = betti(stirling(n))
    assert (res.betti + [0] * n)[:n] == (row + [0] * n)[:n]
    assert res.torsion_free


def test_torus():
    res = betti(make_board([4, 0, 0]))
    assert res.betti == [0, 2, 1]
    assert res.reduced_euler() == -1


def test_empty_complex_class():
    res = betti(board_from_rows([]))
    assert res.empty_class == 1 and res.betti == []


def test_real_projective_plane_torsion():
    # 6-vertex RP^2 has H_1 = Z/2, exercising the dense stage
    tris = [(0, 1, 3), (1, 2, 3), (0, 2, 4), (2, 3, 4), (0, 3, 5), (3, 4, 5),
            (1, 4, 5), (0, 1, 4), (1, 2, 5), (0, 2, 5)]
    edges = sorted({e for t in tris for e in combinations(t, 2)})
    idx = {e: i for i, e in enumerate(edges)}
    d2 = [[0] * len(tris) for _ in edges]
    for c, (a, b, d) in enumerate(tris):
        d2[idx[(b, d)]][c] += 1
        d2[idx[(a, d)]][c] -= 1
        d2[idx[(a, b)]][c] += 1
    assert smith_normal_form(d2).torsion == [2]


def test_resource_limits():
    with pytest.raises(ResourceLimitError):
        check_size(stirling(9))
    with pytest.raises(ResourceLimitError):
        check_size(stirling(6), max_faces=100)
    assert check_size(stirling(5)) == 203  # Bell(6)


def test_cache_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv(homology.CACHE_ENV, str(tmp_path))
    first = betti(stirling(5))
    files = sorted(p.name for p in tmp_path.iterdir())
    assert files and all(name.startswith("board-1,1,1,1,1.d") for name in files)
    again = betti(stirling(5))
    assert again.betti == first.betti


def test_cache_is_read(tmp_path, monkeypatch):
    monkeypatch.setenv(homology.CACHE_ENV, str(tmp_path))
    betti(stirling(4))
    monkeypatch.setattr(homology, "smith_normal_form", lambda m: pytest.fail("cache not used"))
    assert betti(stirling(4)).betti[:2] == [0, 2]


def test_threads_do_not_change_result():
    assert betti(stirling(6), threads=2).betti == betti(stirling(6), threads=1).betti


def test_wedge_count():
    assert wedge_count_vd(make_board([3, 4, 2])) == abs(f_vector_formula(make_board([3, 4, 2])).reduced_euler())
    with pytest.raises(HypothesisError):
        wedge_count_vd(make_board([4, 0, 0]))
