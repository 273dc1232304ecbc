"""Dense matrices of sparse polynomials."""

from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from models.polynomial import Polynomial, Scalar
from utils.errors import DimensionMismatchError, PreconditionError

ScalarMatrix = List[List[Fraction]]


class PolyMatrix:
    """Immutable rows x cols grid of polynomials sharing one ambient dimension."""

    __slots__ = ("rows", "cols", "dim", "_entries")

    def __init__(self, entries: Sequence[Sequence[Polynomial]], dim: Optional[int] = None):
        """Initialize from a row-major grid.

        Args:
            entries: Rows of polynomials, all rows of equal length
            dim: Ambient dimension; inferred from the first entry when omitted

        Raises:
            PreconditionError: If the grid is empty or ragged
            DimensionMismatchError: If entries disagree on dimension
        """
        rows = [tuple(row) for row in entries]
        if not rows or not rows[0]:
            raise PreconditionError("a matrix needs at least one row and one column")
        cols = len(rows[0])
        if any(len(row) != cols for row in rows):
            raise PreconditionError("matrix rows have different lengths")
        if dim is None:
            dim = rows[0][0].dim
        for row in rows:
            for entry in row:
                if entry.dim != dim:
                    raise DimensionMismatchError(
                        f"matrix entry in {entry.dim} variables, expected {dim}")
        self.rows = len(rows)
        self.cols = cols
        self.dim = dim
        self._entries: Tuple[Tuple[Polynomial, ...], ...] = tuple(rows)

    @classmethod
    def identity(cls, size: int, dim: int) -> "PolyMatrix":
        one = Polynomial.constant(dim, 1)
        zero = Polynomial.zero(dim)
        return cls([[one if i == j else zero for j in range(size)] for i in range(size)], dim)

    @classmethod
    def zero(cls, rows: int, cols: int, dim: int) -> "PolyMatrix":
        zero = Polynomial.zero(dim)
        return cls([[zero] * cols for _ in range(rows)], dim)

    @classmethod
    def from_scalars(cls, values: Sequence[Sequence[Scalar]], dim: int) -> "PolyMatrix":
        return cls([[Polynomial.constant(dim, v) for v in row] for row in values], dim)

    @property
    def entries(self) -> Tuple[Tuple[Polynomial, ...], ...]:
        return self._entries

    def entry(self, i: int, j: int) -> Polynomial:
        """Entry in row i, column j (both 1-based)."""
        if not (1 <= i <= self.rows and 1 <= j <= self.cols):
            raise DimensionMismatchError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return self._entries[i - 1][j - 1]

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(entry.is_zero() for row in self._entries for entry in row)

    def has_constant_entries(self) -> bool:
        """True when some entry has a nonzero constant term."""
        return any(entry.constant_term() for row in self._entries for entry in row)

    def map_entries(self, func: Callable[[Polynomial], Polynomial]) -> "PolyMatrix":
        mapped = [[func(entry) for entry in row] for row in self._entries]
        return PolyMatrix(mapped, mapped[0][0].dim)

    def truncate(self, cap: int) -> "PolyMatrix":
        return self.map_entries(lambda p: p.truncate(cap))

    def _check_shape(self, other: "PolyMatrix") -> None:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatchError(
                f"shapes {self.rows}x{self.cols} and {other.rows}x{other.cols} differ")
        if self.dim != other.dim:
            raise DimensionMismatchError("matrices live in different dimensions")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_shape(other)
        return PolyMatrix([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self._entries, other._entries)], self.dim)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_shape(other)
        return PolyMatrix([[a - b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self._entries, other._entries)], self.dim)

    def scale(self, factor: Scalar) -> "PolyMatrix":
        return self.map_entries(lambda p: p.scale(factor))

    def matmul(self, other: "PolyMatrix", cap: Optional[int] = None) -> "PolyMatrix":
        """Matrix product, each entry truncated at total degree ``cap``."""
        if self.cols != other.rows:
            raise DimensionMismatchError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if self.dim != other.dim:
            raise DimensionMismatchError("matrices live in different dimensions")
        result: List[List[Polynomial]] = []
        for row in self._entries:
            out_row = []
            for j in range(other.cols):
                acc = Polynomial.zero(self.dim)
                for k, left in enumerate(row):
                    right = other._entries[k][j]
                    if left.is_zero() or right.is_zero():
                        continue
                    acc = acc + left.mul_truncated(right, cap)
                out_row.append(acc)
            result.append(out_row)
        return PolyMatrix(result, self.dim)

    __matmul__ = matmul

    def power(self, exponent: int, cap: Optional[int] = None) -> "PolyMatrix":
        if not self.is_square():
            raise DimensionMismatchError("only square matrices have powers")
        result = PolyMatrix.identity(self.rows, self.dim)
        for _ in range(exponent):
            result = result.matmul(self, cap)
        return result

    def trace(self) -> Polynomial:
        if not self.is_square():
            raise DimensionMismatchError("trace of a non-square matrix")
        total = Polynomial.zero(self.dim)
        for i in range(self.rows):
            total = total + self._entries[i][i]
        return total

    def principal_restriction(self, indices: Iterable[int]) -> "PolyMatrix":
        """Zero every row and column whose 1-based index is not listed."""
        keep = set(indices)
        zero = Polynomial.zero(self.dim)
        return PolyMatrix([[entry if (i + 1) in keep and (j + 1) in keep else zero
                            for j, entry in enumerate(row)]
                           for i, row in enumerate(self._entries)], self.dim)

    def compose(self, subs: Sequence[Polynomial], cap: Optional[int] = None) -> "PolyMatrix":
        """Substitute polynomials for the variables in every entry."""
        composed = [[entry.compose(subs, cap) for entry in row] for row in self._entries]
        return PolyMatrix(composed, subs[0].dim if subs else 0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.dim == other.dim and self._entries == other._entries

    def __hash__(self) -> int:
        return hash((self.dim, self._entries))

    def to_dict(self, var: str = "x") -> Dict[str, Any]:
        return {
            'rows': self.rows,
            'cols': self.cols,
            'entries': [[entry.render(var) for entry in row] for row in self._entries],
        }

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(e.render() for e in row) + "]"
                               for row in self._entries) + "]"

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}, dim={self.dim})"


def scalar_matmul(left: Sequence[Sequence[Fraction]],
                  right: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    """Product of two rational matrices given as nested lists."""
    inner = len(right)
    cols = len(right[0]) if right else 0
    return [[sum((row[k] * right[k][j] for k in range(inner)), Fraction(0))
             for j in range(cols)] for row in left]


def scalar_identity(size: int) -> List[List[Fraction]]:
    return [[Fraction(1 if i == j else 0) for j in range(size)] for i in range(size)]


def scalar_to_strings(matrix: Sequence[Sequence[Fraction]]) -> List[List[str]]:
    return [[str(value) for value in row] for row in matrix]


def scalar_sup(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    return max((abs(v) for row in matrix for v in row), default=Fraction(0))


def is_zero_scalar(matrix: Sequence[Sequence[Fraction]]) -> bool:
    return all(v == 0 for row in matrix for v in row)

