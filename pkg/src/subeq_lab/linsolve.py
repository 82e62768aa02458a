"""Exact Gaussian elimination over Q(w), one equation at a time.

Rows are kept in reduced echelon form, so every new equation is reduced
against the pivots seen so far and either adds a pivot, vanishes, or
exposes an inconsistency ``0 = c != 0``.  Pivots are chosen by smallest
coefficient height to keep the rationals short.
"""
from __future__ import annotations

from .cyclofield import ZERO, CycloNumber

__all__ = ["EchelonSystem", "height"]


def height(x: CycloNumber) -> int:
    """Total bit size of numerators and denominators of ``x``."""
    return (
        int(x._p.numerator).bit_length() + int(x._p.denominator).bit_length()
        + int(x._q.numerator).bit_length() + int(x._q.denominator).bit_length()
    )


class EchelonSystem:
    def __init__(self, nvars: int):
        self.nvars = nvars
        self.rows: dict[int, tuple[list, CycloNumber]] = {}  # pivot col -> row
        self.inconsistent = False

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, coeffs, rhs) -> bool:
        """Add ``sum coeffs[i]*x_i = rhs``; return False on inconsistency."""
        row = list(coeffs)
        b = rhs
        for col, (prow, pb) in self.rows.items():
            f = row[col]
            if f:
                for i in range(self.nvars):
                    if prow[i]:
                        row[i] = row[i] - f * prow[i]
                b = b - f * pb
        nz = [i for i in range(self.nvars) if row[i]]
        if not nz:
            if b:
                self.inconsistent = True
                return False
            return True
        col = min(nz, key=lambda i: height(row[i]))
        inv = row[col].inverse()
        row = [x * inv if x else ZERO for x in row]
        b = b * inv
        # keep the echelon form reduced
        for pcol, (prow, pb) in list(self.rows.items()):
            f = prow[col]
            if f:
                newrow = [prow[i] - f * row[i] if (prow[i] or row[i]) else ZERO
                          for i in range(self.nvars)]
                self.rows[pcol] = (newrow, pb - f * b)
        self.rows[col] = (row, b)
        return True

    def free_columns(self) -> list[int]:
        return [i for i in range(self.nvars) if i not in self.rows]

    def solution(self) -> list[CycloNumber] | None:
        """The unique solution, or None if inconsistent or underdetermined."""
        if self.inconsistent or self.rank < self.nvars:
            return None
        return [self.rows[i][1] for i in range(self.nvars)]
