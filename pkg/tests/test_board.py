from __future__ import annotations

import pytest
from hypothesis import given, strategies as st

from rookcomplex.board import (
    Board,
    BoardSpecError,
    attacks,
    board_from_rows,
    durfee,
    make_board,
    parse_board,
    satisfies_vd_hypotheses,
    stirling,
)

rows_strategy = st.lists(st.integers(0, 6), max_size=6)


def test_example_board_shape():
    b = make_board([3, 4, 2])  # two rows of length 1, four of length 2, three of length 3
    assert b.multiplicities == (2, 4, 3)
    assert b.row_lengths == (1, 1, 2, 2, 2, 2, 3, 3, 3)
    assert b.column_lengths == (9, 7, 3)
    assert len(b.squares) == 19
    assert (3, 7) in b and (3, 6) not in b


def test_parse_round_trip():
    assert parse_board("stirling:4") == stirling(4)
    assert str(parse_board("psi:1,1,1")) == "stirling:3"
    assert parse_board("psi:4,0,0").spec() == "psi:4,0,0"
    assert parse_board(" psi:2,1 ").canonical() == "1,2"


@pytest.mark.parametrize("bad", ["psi:", "stirling:", "psi:1,,2", "psi:-1", "rook:3", ""])
def test_parse_rejects(bad):
    with pytest.raises(BoardSpecError):
        parse_board(bad)


def test_attacks():
    assert attacks((1, 2), (1, 5))
    assert attacks((1, 2), (3, 2))
    assert not attacks((1, 2), (2, 3))
    assert not attacks((1, 2), (1, 2))


def _durfee_oracle(b: Board) -> int:
    best = 0
    squares = set(b.squares)
    for d in range(1, len(squares) + 1):
        for c0 in range(1, b.n + 1):
            for r0 in range(1, b.p + 1):
                if all((c0 + i, r0 + j) in squares for i in range(d) for j in range(d)):
                    best = d
    return best


@given(rows_strategy)
def test_durfee_matches_search(rows):
    b = board_from_rows(rows)
    assert durfee(b) == _durfee_oracle(b)


@pytest.mark.parametrize("n", range(1, 10))
def test_stirling_durfee(n):
    assert durfee(stirling(n)) == (n + 1) // 2


@given(rows_strategy)
def test_squares_are_left_justified(rows):
    b = board_from_rows(rows)
    lengths = sorted(r for r in rows if r)
    assert b.row_lengths == tuple(lengths)
    for j, length in enumerate(lengths, start=1):
        assert {s for s in b.squares if s[1] == j} == {(i, j) for i in range(1, length + 1)}


def test_hypotheses():
    assert satisfies_vd_hypotheses(make_board([3, 4, 2]))
    assert satisfies_vd_hypotheses(make_board([2, 1]))
    assert not satisfies_vd_hypotheses(make_board([4, 0, 0]))
    assert not satisfies_vd_hypotheses(stirling(3))
    assert not satisfies_vd_hypotheses(Board())
