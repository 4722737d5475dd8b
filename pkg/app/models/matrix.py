"""
Exact rational scalars and small dense matrices.

Every quantity in the workbench is a ``fractions.Fraction``; floats are
rejected at the boundary so that no value is ever rounded.
"""
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from app.core.exceptions import DomainError

Rational = Fraction
RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction, sympy rational or exact string like '8/9' to a Fraction"""
    if isinstance(value, bool):
        raise DomainError(f"Boolean is not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"Not an exact rational: {value!r}") from exc
    raise DomainError(f"Not an exact rational: {value!r}", details={"type": type(value).__name__})


def format_rational(value: RationalLike) -> str:
    """Canonical string form: '3', '-8/9'"""
    q = as_rational(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def is_integral(value: RationalLike) -> bool:
    return as_rational(value).denominator == 1


def to_sympy(value: RationalLike) -> sympy.Rational:
    q = as_rational(value)
    return sympy.Rational(q.numerator, q.denominator)


@dataclass(frozen=True)
class RationalMatrix:
    """Row-major matrix of Fractions"""
    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise DomainError("Matrix dimensions must be non-negative")
        if len(self.entries) != self.rows * self.cols:
            raise DomainError(
                f"Matrix needs {self.rows * self.cols} entries, got {len(self.entries)}",
                details={"rows": self.rows, "cols": self.cols},
            )
        object.__setattr__(self, "entries", tuple(as_rational(e) for e in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        n_cols = len(rows[0]) if rows else 0
        if any(len(r) != n_cols for r in rows):
            raise DomainError("Ragged matrix rows")
        return cls(len(rows), n_cols, tuple(e for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RationalLike]]) -> "RationalMatrix":
        return cls.from_rows(columns).transpose()

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def block_diagonal(cls, blocks: Iterable["RationalMatrix"]) -> "RationalMatrix":
        blocks = list(blocks)
        size = sum(b.rows for b in blocks)
        grid = [[Fraction(0)] * size for _ in range(size)]
        offset = 0
        for block in blocks:
            if not block.is_square:
                raise DomainError("Block diagonal needs square blocks")
            for i in range(block.rows):
                for j in range(block.cols):
                    grid[offset + i][offset + j] = block[i, j]
            offset += block.rows
        return cls.from_rows(grid)

    @classmethod
    def from_sympy(cls, matrix: sympy.Matrix) -> "RationalMatrix":
        return cls(matrix.rows, matrix.cols, tuple(as_rational(e) for e in matrix))

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i * self.cols + j]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def row(self, i: int) -> Tuple[Fraction, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Tuple[Fraction, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols)
        )

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.cols, self.rows, tuple(
            self[i, j] for j in range(self.cols) for i in range(self.rows)
        ))

    def submatrix(self, row_indices: Sequence[int], col_indices: Optional[Sequence[int]] = None) -> "RationalMatrix":
        col_indices = row_indices if col_indices is None else col_indices
        return RationalMatrix.from_rows([[self[i, j] for j in col_indices] for i in row_indices]) \
            if row_indices else RationalMatrix(0, len(col_indices), ())

    def apply(self, vector: Sequence[RationalLike]) -> Tuple[Fraction, ...]:
        """Matrix-vector product"""
        if len(vector) != self.cols:
            raise DomainError(f"Vector of length {len(vector)} does not fit {self.rows}x{self.cols}")
        vector = [as_rational(v) for v in vector]
        return tuple(sum((a * b for a, b in zip(self.row(i), vector)), Fraction(0)) for i in range(self.rows))

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise DomainError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        columns = [other.column(j) for j in range(other.cols)]
        return RationalMatrix.from_rows([
            [sum((a * b for a, b in zip(self.row(i), col)), Fraction(0)) for col in columns]
            for i in range(self.rows)
        ])

    def trace(self) -> Fraction:
        if not self.is_square:
            raise DomainError("Trace of a non-square matrix")
        return sum((self[i, i] for i in range(self.rows)), Fraction(0))

    def to_sympy(self) -> sympy.Matrix:
        return sympy.Matrix(self.rows, self.cols, [to_sympy(e) for e in self.entries])


@dataclass(frozen=True)
class AffineSolution:
    """Solution set of a linear system: empty, a point, or particular + span(null_basis)"""
    consistent: bool
    particular: Optional[Tuple[Fraction, ...]] = None
    null_basis: Tuple[Tuple[Fraction, ...], ...] = ()

    @property
    def is_unique(self) -> bool:
        return self.consistent and not self.null_basis

    @property
    def dimension(self) -> Optional[int]:
        return len(self.null_basis) if self.consistent else None

    @property
    def kind(self) -> str:
        if not self.consistent:
            return "inconsistent"
        return "unique" if self.is_unique else "family"
