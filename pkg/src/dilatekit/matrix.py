"""Dense matrices over exact rationals.

This is the oracle layer of the package: every closed-form construction
elsewhere is checked against plain Gauss-Jordan arithmetic done here.
Scalars are ``fractions.Fraction`` throughout; floats are rejected so that
every equality test in the repository is exact.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence, Union

Scalar = Union[int, Fraction, str]
Vec = tuple[Fraction, ...]


class MatrixError(ValueError):
    """Base class for matrix arithmetic errors."""


class DimensionMismatch(MatrixError):
    pass


class NonSquareMatrix(MatrixError):
    pass


class SingularMatrix(MatrixError):
    pass


def as_rat(value: Scalar) -> Fraction:
    """Coerce an exact scalar to Fraction. Floats are refused."""
    if type(value) is Fraction:
        return value
    if isinstance(value, bool):
        raise TypeError(f"not an exact scalar: {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact scalar: {value!r} (floats are not allowed)")


def vec(values: Iterable[Scalar]) -> Vec:
    return tuple(as_rat(v) for v in values)


def zero_vec(dim: int) -> Vec:
    return (Fraction(0),) * dim


def unit_vec(dim: int, i: int) -> Vec:
    if not 0 <= i < dim:
        raise IndexError(f"unit vector index {i} out of range for dimension {dim}")
    return tuple(Fraction(1 if j == i else 0) for j in range(dim))


def vec_add(a: Vec, b: Vec) -> Vec:
    if len(a) != len(b):
        raise DimensionMismatch(f"vector lengths differ: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def vec_scale(c: Scalar, a: Vec) -> Vec:
    f = as_rat(c)
    return tuple(f * x for x in a)


def vec_is_zero(a: Vec) -> bool:
    return all(x == 0 for x in a)


class Mat:
    """Immutable dense matrix of Fractions, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence[Scalar]]):
        grid = tuple(tuple(as_rat(v) for v in row) for row in entries)
        if not grid or not grid[0]:
            raise MatrixError("matrix must have at least one row and one column")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise MatrixError("ragged rows in matrix literal")
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "entries", grid)

    def __setattr__(self, name, value):
        raise AttributeError("Mat is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def _raw(cls, grid: tuple[tuple[Fraction, ...], ...]) -> Mat:
        # internal: trusts the grid to be a rectangular tuple of Fractions
        out = cls.__new__(cls)
        object.__setattr__(out, "rows", len(grid))
        object.__setattr__(out, "cols", len(grid[0]))
        object.__setattr__(out, "entries", grid)
        return out

    @classmethod
    def identity(cls, n: int) -> Mat:
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> Mat:
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Scalar]]) -> Mat:
        cols = [vec(c) for c in columns]
        if not cols:
            raise MatrixError("need at least one column")
        if any(len(c) != len(cols[0]) for c in cols):
            raise MatrixError("columns of unequal length")
        return cls([[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))])

    @classmethod
    def block(cls, grid: Sequence[Sequence[Mat]]) -> Mat:
        """Assemble a matrix from a grid of conforming blocks."""
        if not grid or not grid[0]:
            raise MatrixError("empty block grid")
        heights = [row[0].rows for row in grid]
        widths = [b.cols for b in grid[0]]
        for i, row in enumerate(grid):
            if len(row) != len(widths):
                raise DimensionMismatch("ragged block grid")
            for j, b in enumerate(row):
                if b.rows != heights[i] or b.cols != widths[j]:
                    raise DimensionMismatch(
                        f"block ({i},{j}) is {b.rows}x{b.cols}, expected {heights[i]}x{widths[j]}"
                    )
        out = []
        for i, row in enumerate(grid):
            for r in range(heights[i]):
                out.append(tuple(x for b in row for x in b.entries[r]))
        return cls._raw(tuple(out))

    # ------------------------------------------------------------------
    # basic queries

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self.entries[i][j]

    def row(self, i: int) -> Vec:
        return self.entries[i]

    def column(self, j: int) -> Vec:
        return tuple(self.entries[i][j] for i in range(self.rows))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(row) for row in self.entries]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self) -> int:
        return hash(self.entries)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.entries)
        return f"Mat[{body}]"

    # ------------------------------------------------------------------
    # arithmetic

    def __add__(self, other: Mat) -> Mat:
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch(
                f"cannot add {self.rows}x{self.cols} and {other.rows}x{other.cols}"
            )
        return Mat._raw(
            tuple(
                tuple(a + b for a, b in zip(ra, rb))
                for ra, rb in zip(self.entries, other.entries)
            )
        )

    def __sub__(self, other: Mat) -> Mat:
        return self + (-other)

    def __neg__(self) -> Mat:
        return Mat._raw(tuple(tuple(-x for x in row) for row in self.entries))

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.cols != other.rows:
                raise DimensionMismatch(
                    f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
                )
            bt = other.transpose().entries
            return Mat._raw(
                tuple(
                    tuple(sum(a * b for a, b in zip(row, col)) for col in bt)
                    for row in self.entries
                )
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c: Scalar) -> Mat:
        f = as_rat(c)
        return Mat._raw(tuple(tuple(f * x for x in row) for row in self.entries))

    def __pow__(self, n: int) -> Mat:
        if not self.is_square():
            raise NonSquareMatrix("matrix power requires a square matrix")
        if n < 0:
            return self.inverse() ** (-n)
        result = Mat.identity(self.rows)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def apply(self, x: Sequence[Scalar]) -> Vec:
        """Matrix-vector product, returning a plain coordinate tuple."""
        v = vec(x)
        if len(v) != self.cols:
            raise DimensionMismatch(
                f"cannot apply {self.rows}x{self.cols} to vector of length {len(v)}"
            )
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def transpose(self) -> Mat:
        return Mat._raw(
            tuple(tuple(self.entries[i][j] for i in range(self.rows)) for j in range(self.cols))
        )

    def trace(self) -> Fraction:
        if not self.is_square():
            raise NonSquareMatrix("trace requires a square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), Fraction(0))

    # ------------------------------------------------------------------
    # elimination

    def rref(self) -> tuple[Mat, tuple[int, ...]]:
        """Reduced row echelon form and pivot columns.

        Pivot choice: leftmost nonzero column, first nonzero row from the
        top, pivot normalized to 1. Fully deterministic.
        """
        m = [list(row) for row in self.entries]
        pivots: list[int] = []
        r = 0
        for c in range(self.cols):
            pivot_row = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if pivot_row is None:
                continue
            m[r], m[pivot_row] = m[pivot_row], m[r]
            pv = m[r][c]
            m[r] = [x / pv for x in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Mat._raw(tuple(tuple(row) for row in m)), tuple(pivots)

    def rank(self) -> int:
        return len(self.rref()[1])

    def inverse(self) -> Mat:
        """Exact inverse by Gauss-Jordan elimination on [A | I]."""
        if not self.is_square():
            raise NonSquareMatrix("inverse requires a square matrix")
        n = self.rows
        aug = Mat.block([[self, Mat.identity(n)]])
        reduced, pivots = aug.rref()
        left_rank = sum(1 for p in pivots if p < n)
        if left_rank < n:
            raise SingularMatrix(f"matrix has rank {left_rank} < {n}")
        return Mat._raw(tuple(row[n:] for row in reduced.entries))

    def column_space_basis(self) -> list[Vec]:
        """Canonical basis of the column space.

        Computed as the nonzero rows of rref(transpose), read back as
        columns, so equal column spaces always yield identical bases.
        """
        reduced, pivots = self.transpose().rref()
        return [reduced.entries[i] for i in range(len(pivots))]

    def kernel_basis(self) -> list[Vec]:
        """Canonical kernel basis from the rref free columns."""
        reduced, pivots = self.rref()
        pivot_set = set(pivots)
        basis: list[Vec] = []
        for free in range(self.cols):
            if free in pivot_set:
                continue
            v = [Fraction(0)] * self.cols
            v[free] = Fraction(1)
            for row_idx, p in enumerate(pivots):
                v[p] = -reduced.entries[row_idx][free]
            basis.append(tuple(v))
        return basis


def rref_image_kernel(a: Mat) -> tuple[list[Vec], list[Vec]]:
    """Exact bases of the image and kernel; dims sum to a.cols."""
    return a.column_space_basis(), a.kernel_basis()


def span_rank(columns: Sequence[Vec]) -> int:
    """Rank of the span of a (possibly empty) list of coordinate columns."""
    cols = list(columns)
    if not cols:
        return 0
    return Mat.from_columns(cols).rank()


def in_span(columns: Sequence[Vec], x: Vec) -> bool:
    """Exact membership of x in the span of the given columns."""
    if vec_is_zero(x):
        return True
    if not columns:
        return False
    return span_rank(list(columns) + [x]) == span_rank(columns)
