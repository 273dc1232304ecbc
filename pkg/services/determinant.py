"""Exact determinants of polynomial matrices."""

import logging
from typing import Dict, List, Tuple

from models.poly_matrix import PolyMatrix
from models.polynomial import Polynomial
from utils.errors import DimensionMismatchError, PreconditionError

logger = logging.getLogger(__name__)


class DeterminantCalculator:
    """Cofactor expansion for small matrices, fraction-free elimination above."""

    COFACTOR_LIMIT = 5
    METHODS = ("auto", "cofactor", "bareiss")

    @staticmethod
    def determinant(matrix: PolyMatrix, method: str = "auto") -> Polynomial:
        """Compute det(M) exactly.

        Args:
            matrix: Square polynomial matrix
            method: "cofactor", "bareiss", or "auto" (cofactor up to size 5)

        Returns:
            The determinant polynomial

        Raises:
            DimensionMismatchError: If the matrix is not square
            PreconditionError: If the method name is unknown
        """
        if not matrix.is_square():
            raise DimensionMismatchError(
                f"determinant of a non-square {matrix.rows}x{matrix.cols} matrix")
        if method not in DeterminantCalculator.METHODS:
            raise PreconditionError(f"unknown determinant method {method!r}")
        if method == "auto":
            method = "cofactor" if matrix.rows <= DeterminantCalculator.COFACTOR_LIMIT else "bareiss"
        logger.debug("determinant of %dx%d matrix by %s", matrix.rows, matrix.rows, method)
        if method == "cofactor":
            return DeterminantCalculator.cofactor(matrix)
        return DeterminantCalculator.bareiss(matrix)

    @staticmethod
    def cofactor(matrix: PolyMatrix) -> Polynomial:
        """Laplace expansion along successive rows, memoized on column subsets."""
        size = matrix.rows
        entries = matrix.entries
        memo: Dict[Tuple[int, ...], Polynomial] = {}

        def minor(row: int, columns: Tuple[int, ...]) -> Polynomial:
            if row == size:
                return Polynomial.constant(matrix.dim, 1)
            cached = memo.get(columns)
            if cached is not None:
                return cached
            total = Polynomial.zero(matrix.dim)
            for position, col in enumerate(columns):
                entry = entries[row][col]
                if entry.is_zero():
                    continue
                rest = columns[:position] + columns[position + 1:]
                term = entry * minor(row + 1, rest)
                total = total - term if position % 2 else total + term
            memo[columns] = total
            return total

        return minor(0, tuple(range(size)))

    @staticmethod
    def bareiss(matrix: PolyMatrix) -> Polynomial:
        """Fraction-free Gaussian elimination with exact polynomial division."""
        size = matrix.rows
        grid: List[List[Polynomial]] = [list(row) for row in matrix.entries]
        sign = 1
        previous = Polynomial.constant(matrix.dim, 1)
        for k in range(size - 1):
            # Find a nonzero pivot, swapping rows if needed
            if grid[k][k].is_zero():
                for i in range(k + 1, size):
                    if not grid[i][k].is_zero():
                        grid[k], grid[i] = grid[i], grid[k]
                        sign = -sign
                        break
                else:
                    return Polynomial.zero(matrix.dim)  # whole column is zero
            pivot = grid[k][k]
            # Eliminate below the pivot; the previous pivot divides exactly
            for i in range(k + 1, size):
                for j in range(k + 1, size):
                    value = pivot * grid[i][j] - grid[i][k] * grid[k][j]
                    grid[i][j] = value.exact_divide(previous) if k else value
                grid[i][k] = Polynomial.zero(matrix.dim)
            previous = pivot
        result = grid[size - 1][size - 1]
        return result if sign > 0 else -result
