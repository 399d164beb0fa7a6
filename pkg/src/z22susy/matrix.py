"""Square matrices over a graded algebra with degree-labelled rows and columns."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import Algebra, AlgebraError, GradedExpr, term_degree
from .grading import Degree


@dataclass(frozen=True, eq=False)
class GradedMatrix:
    alg: Algebra
    entries: tuple  # tuple of row tuples of GradedExpr
    row_degrees: tuple
    col_degrees: tuple

    def __post_init__(self):
        rows = tuple(tuple(self.alg.expr(e) for e in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if len(rows) != len(self.row_degrees) or any(len(r) != len(self.col_degrees) for r in rows):
            raise ValueError("entries do not match the degree labels")

    @classmethod
    def identity(cls, alg: Algebra, degrees: Sequence[Degree]) -> "GradedMatrix":
        n = len(degrees)
        rows = tuple(tuple(alg.one() if i == j else alg.zero() for j in range(n)) for i in range(n))
        return cls(alg, rows, tuple(degrees), tuple(degrees))

    @classmethod
    def from_rows(cls, alg: Algebra, rows, degrees: Sequence[Degree]) -> "GradedMatrix":
        return cls(alg, tuple(tuple(alg.expr(e) for e in r) for r in rows), tuple(degrees), tuple(degrees))

    @property
    def shape(self):
        return len(self.row_degrees), len(self.col_degrees)

    def __getitem__(self, ij) -> GradedExpr:
        i, j = ij
        return self.entries[i][j]

    def degree_violations(self) -> list:
        """Entries whose terms do not have degree deg_row + deg_col."""
        bad = []
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                want = self.row_degrees[i] + self.col_degrees[j]
                if any(term_degree(self.alg, k) != want for k in e.terms):
                    bad.append((i, j))
        return bad

    def is_degree_zero(self) -> bool:
        return not self.degree_violations()

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        if self.col_degrees != other.row_degrees:
            raise AlgebraError("inner degree labels do not agree")
        n, m = len(self.row_degrees), len(other.col_degrees)
        k = len(self.col_degrees)
        rows = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = self.alg.zero()
                for t in range(k):
                    acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc)
            rows.append(tuple(row))
        return GradedMatrix(self.alg, tuple(rows), self.row_degrees, other.col_degrees)

    def __add__(self, other: "GradedMatrix") -> "GradedMatrix":
        rows = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries))
        return GradedMatrix(self.alg, rows, self.row_degrees, self.col_degrees)

    def __sub__(self, other: "GradedMatrix") -> "GradedMatrix":
        rows = tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(self.entries, other.entries))
        return GradedMatrix(self.alg, rows, self.row_degrees, self.col_degrees)

    def __eq__(self, other):
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return (
            self.row_degrees == other.row_degrees
            and self.col_degrees == other.col_degrees
            and all(a == b for r1, r2 in zip(self.entries, other.entries) for a, b in zip(r1, r2))
        )

    __hash__ = object.__hash__

    def scale_left(self, c) -> "GradedMatrix":
        c = self.alg.expr(c)
        return GradedMatrix(
            self.alg, tuple(tuple(c * e for e in r) for r in self.entries), self.row_degrees, self.col_degrees
        )

    # block structure by total parity
    def even_rows(self) -> list[int]:
        return [i for i, d in enumerate(self.row_degrees) if d.parity == 0]

    def odd_rows(self) -> list[int]:
        return [i for i, d in enumerate(self.row_degrees) if d.parity == 1]

    def even_cols(self) -> list[int]:
        return [j for j, d in enumerate(self.col_degrees) if d.parity == 0]

    def odd_cols(self) -> list[int]:
        return [j for j, d in enumerate(self.col_degrees) if d.parity == 1]

    def block(self, rows: Sequence[int], cols: Sequence[int]) -> list[list[GradedExpr]]:
        return [[self.entries[i][j] for j in cols] for i in rows]

    def blocks(self):
        """(A, B, C, D) as nested lists: even/even, even/odd, odd/even, odd/odd."""
        er, orr, ec, oc = self.even_rows(), self.odd_rows(), self.even_cols(), self.odd_cols()
        return self.block(er, ec), self.block(er, oc), self.block(orr, ec), self.block(orr, oc)

    def __str__(self):
        from .serialize import matrix_text

        return matrix_text(self)
