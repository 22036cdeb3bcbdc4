"""Rook complexes of Ferrers boards: faces, homology, Morse matchings and shellings."""

from __future__ import annotations

from .board import Board, make_board, parse_board, stirling
from .complex import RookComplex, f_vector_enumerated, f_vector_formula

__version__ = "0.1.0"

__all__ = [
    "Board",
    "RookComplex",
    "f_vector_enumerated",
    "f_vector_formula",
    "make_board",
    "parse_board",
    "stirling",
]
