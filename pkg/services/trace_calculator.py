"""Trace-log series of V' and the min-index split of its traces."""

import logging
from fractions import Fraction
from math import factorial
from typing import Dict, List, Optional, Sequence

from models.poly_map import PolyMap
from models.poly_matrix import PolyMatrix
from models.polynomial import Polynomial
from models.reports import IdentityReport, MinIndexClass, TraceSeries
from services.determinant import DeterminantCalculator
from services.keller_checker import KellerChecker
from utils.config import Config
from utils.errors import DimensionMismatchError, PreconditionError

logger = logging.getLogger(__name__)


class TraceCalculator:
    """Exact truncations of -Tr ln(1 - M) = sum_q Tr(M^q) / q."""

    PARTITION_METHODS = ("auto", "words", "submatrix")

    @staticmethod
    def q_limit(matrix: PolyMatrix, cap: int) -> int:
        """Largest power q whose trace can reach degree <= cap.

        Without constant entries every factor raises the low degree, so q <= cap.
        A nilpotent constant part C allows at most n - 1 consecutive C factors
        around a cyclic word, so q <= (cap + 1) n.

        Raises:
            PreconditionError: If the constant part is not nilpotent
        """
        if not matrix.has_constant_entries():
            return cap
        constant = [[entry.constant_term() for entry in row] for row in matrix.entries]
        if not (KellerChecker.characteristic_witness(constant) - 1).is_zero():
            raise PreconditionError(
                "constant part of the matrix is not nilpotent; the trace-log series has no "
                "finite truncation")
        return (cap + 1) * matrix.rows

    @staticmethod
    def trace_log_series(matrix: PolyMatrix, cap: int, q_cap: Optional[int] = None) -> TraceSeries:
        """Sum Tr(M^q) / q over q <= q_cap, truncated at total degree ``cap``.

        Args:
            matrix: Square polynomial matrix M
            cap: Truncation degree
            q_cap: Largest power; required when M has constant entries

        Raises:
            DimensionMismatchError: If M is not square
            PreconditionError: If M has constant entries and no q_cap is given
        """
        if not matrix.is_square():
            raise DimensionMismatchError(f"trace of a {matrix.rows}x{matrix.cols} matrix")
        if cap < 1:
            raise PreconditionError(f"truncation cap must be at least 1, got {cap}")
        if q_cap is None:
            if matrix.has_constant_entries():
                raise PreconditionError(
                    "matrix has constant entries; supply an explicit q_cap")
            q_cap = cap
        total = Polynomial.zero(matrix.dim)
        power = PolyMatrix.identity(matrix.rows, matrix.dim)
        for q in range(1, q_cap + 1):
            power = power.matmul(matrix, cap)
            if power.is_zero():
                logger.debug("matrix powers vanish from q = %d", q)
                break
            total = total + power.trace().scale(Fraction(1, q))
        return TraceSeries(cap, total.truncate(cap))

    @staticmethod
    def _classes_by_words(matrix: PolyMatrix, power: int,
                          cap: Optional[int]) -> List[Polynomial]:
        n = matrix.rows
        entries = matrix.entries
        classes = [Polynomial.zero(matrix.dim) for _ in range(n)]

        def walk(start: int, current: int, length: int, lowest: int, product: Polynomial) -> None:
            if length == power:  # close the cycle back to its start
                closing = entries[current][start]
                if not closing.is_zero():
                    classes[lowest] = classes[lowest] + product.mul_truncated(closing, cap)
                return
            for following in range(n):
                step = entries[current][following]
                if step.is_zero():
                    continue
                extended = product.mul_truncated(step, cap)
                if extended.is_zero():
                    continue
                # the class is the smallest index visited so far
                walk(start, following, length + 1, min(lowest, following), extended)

        for start in range(n):
            walk(start, start, 1, start, Polynomial.constant(matrix.dim, 1))
        return classes

    @staticmethod
    def _classes_by_submatrix(matrix: PolyMatrix, power: int,
                              cap: Optional[int]) -> List[Polynomial]:
        n = matrix.rows
        traces = []
        for r in range(1, n + 2):
            restricted = matrix.principal_restriction(range(r, n + 1))
            traces.append(restricted.power(power, cap).trace())
        return [traces[r] - traces[r + 1] for r in range(n)]

    @staticmethod
    def min_index_partition(matrix: PolyMatrix, power: int, method: str = "auto",
                            cap: Optional[int] = None) -> List[MinIndexClass]:
        """Split Tr(M^Q) by the smallest index visited by each cyclic word.

        "words" walks every closed index word of length Q, pruning zero
        entries; "submatrix" uses Tr((M restricted to indices >= r)^Q) minus
        the same for r + 1. "auto" walks words while n^Q stays within the
        configured word limit.

        Raises:
            DimensionMismatchError: If M is not square
            PreconditionError: If Q < 1 or the method is unknown
        """
        if not matrix.is_square():
            raise DimensionMismatchError(f"trace of a {matrix.rows}x{matrix.cols} matrix")
        if power < 1:
            raise PreconditionError(f"power must be at least 1, got {power}")
        if method not in TraceCalculator.PARTITION_METHODS:
            raise PreconditionError(f"unknown partition method {method!r}")
        if method == "auto":
            method = "words" if matrix.rows ** power <= Config.word_limit() else "submatrix"
        if method == "words":
            values = TraceCalculator._classes_by_words(matrix, power, cap)
        else:
            values = TraceCalculator._classes_by_submatrix(matrix, power, cap)
        return [MinIndexClass(r, value) for r, value in enumerate(values, start=1)]

    @staticmethod
    def truncated_exp(series: Polynomial, cap: int) -> Polynomial:
        """exp(p) through total degree ``cap`` for p without constant term."""
        if series.constant_term():
            raise PreconditionError("exponential needs a series without constant term")
        result = Polynomial.constant(series.dim, 1)
        term = Polynomial.constant(series.dim, 1)
        for k in range(1, cap + 1):
            term = term.mul_truncated(series, cap)
            if term.is_zero():
                break
            result = result + term.scale(Fraction(1, factorial(k)))
        return result

    @staticmethod
    def truncated_reciprocal(series: Polynomial, cap: int) -> Polynomial:
        """1 / p through total degree ``cap``; p needs a nonzero constant term."""
        c0 = series.constant_term()
        if not c0:
            raise PreconditionError("reciprocal of a series with zero constant term")
        tail = (series - c0).scale(-1 / c0)
        result = Polynomial.constant(series.dim, 1)
        term = Polynomial.constant(series.dim, 1)
        for _ in range(cap):
            term = term.mul_truncated(tail, cap)
            if term.is_zero():
                break
            result = result + term
        return result.scale(1 / c0)

    @staticmethod
    def restricted_exp_product_check(vertex: PolyMap, cap: int,
                                     method: str = "auto") -> IdentityReport:
        """Check the restricted trace-log series of V' against the full one.

        Part (a): the class-r series summed over r equals the full series,
        unconditionally. Part (b): the full series vanishes through cap, so
        the product over r of the restricted exponentials is 1. On a
        non-Keller map (b) is run anyway and flagged as an expected failure.
        """
        matrix = KellerChecker.jacobian(vertex)
        keller = KellerChecker.keller_check(vertex)
        q_max = TraceCalculator.q_limit(matrix, cap)
        full = TraceCalculator.trace_log_series(matrix, cap, q_max).value

        # Class-r series: sum over q of (class r of Tr(M^q)) / q
        restricted: Dict[int, Polynomial] = {r: Polynomial.zero(vertex.n)
                                             for r in range(1, vertex.n + 1)}
        for q in range(1, q_max + 1):
            for cls in TraceCalculator.min_index_partition(matrix, q, method, cap):
                restricted[cls.r] = restricted[cls.r] + cls.value.scale(Fraction(1, q))
        restricted = {r: value.truncate(cap) for r, value in restricted.items()}

        # Part (a): the classes add up to the full series
        summed = Polynomial.zero(vertex.n)
        for value in restricted.values():
            summed = summed + value
        partition_holds = summed == full
        vanishing = full.is_zero()
        # Part (b): the restricted exponentials multiply to 1
        product = Polynomial.constant(vertex.n, 1)
        for value in restricted.values():
            product = product.mul_truncated(TraceCalculator.truncated_exp(value, cap), cap)
        product_is_one = product == 1

        details = {
            'cap': cap,
            'partition_holds': partition_holds,
            'vanishing_holds': vanishing,
            'product_is_one': product_is_one,
            'expected_failure': not keller.is_keller,
            'restricted_series': {str(r): value.render() for r, value in restricted.items()},
        }
        witness = None
        if not partition_holds:
            exps, coeff = (summed - full).lowest_term()
            witness = "partition: " + Polynomial(vertex.n, {exps: coeff}).render()
        elif not vanishing:
            exps, coeff = full.lowest_term()
            witness = Polynomial(vertex.n, {exps: coeff}).render()
        holds = partition_holds and vanishing and product_is_one
        logger.info("restricted exponential product check: %s", "holds" if holds else "fails")
        return IdentityReport("restricted_exp_product", holds, witness, details)

    @staticmethod
    def exp_det_consistency(vertex: PolyMap, cap: int) -> IdentityReport:
        """exp(-Tr ln(1 - V')) == 1 / det(I - V') through ``cap``.

        Holds for every vertex whose linear part is nilpotent, Keller or not.
        """
        matrix = KellerChecker.jacobian(vertex)
        q_max = TraceCalculator.q_limit(matrix, cap)
        series = TraceCalculator.trace_log_series(matrix, cap, q_max).value
        det = DeterminantCalculator.determinant(
            PolyMatrix.identity(vertex.n, vertex.n) - matrix)
        left = TraceCalculator.truncated_exp(series, cap)
        right = TraceCalculator.truncated_reciprocal(det, cap)
        difference = left - right
        if difference.is_zero():
            return IdentityReport("exp_det_consistency", True, details={'cap': cap})
        exps, coeff = difference.lowest_term()
        return IdentityReport("exp_det_consistency", False,
                              witness=Polynomial(vertex.n, {exps: coeff}).render(),
                              details={'cap': cap})

    @staticmethod
    def substituted_trace_check(vertex: PolyMap, inverse: Sequence[Polynomial],
                                cap: int) -> IdentityReport:
        """Trace-log series of V'(F(y)) vanishes through ``cap``."""
        if len(inverse) != vertex.n:
            raise DimensionMismatchError(
                f"{len(inverse)} inverse components for a map of dimension {vertex.n}")
        matrix = KellerChecker.jacobian(vertex).compose(list(inverse), cap)
        q_max = TraceCalculator.q_limit(matrix, cap)
        series = TraceCalculator.trace_log_series(matrix, cap, q_max).value
        if series.is_zero():
            return IdentityReport("substituted_trace_log", True, details={'cap': cap})
        exps, coeff = series.lowest_term()
        return IdentityReport("substituted_trace_log", False,
                              witness=Polynomial(vertex.n, {exps: coeff}).render("y"),
                              details={'cap': cap})
