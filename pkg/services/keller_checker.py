"""Jacobian hypothesis, norms, and removal of a nilpotent linear part."""

import logging
from fractions import Fraction
from typing import List

from models.poly_map import PolyMap
from models.poly_matrix import (
    PolyMatrix,
    ScalarMatrix,
    is_zero_scalar,
    scalar_identity,
    scalar_matmul,
    scalar_sup,
)
from models.polynomial import Polynomial
from models.reports import IdentityReport, KellerReport, LinearReduction, MapNorms
from services.determinant import DeterminantCalculator
from utils.errors import InternalInconsistencyError, PreconditionError

logger = logging.getLogger(__name__)


class KellerChecker:
    """Checks on the map y = x - V(x)."""

    @staticmethod
    def jacobian(vertex: PolyMap) -> PolyMatrix:
        """V'(x): entry (i, j) is dV_i/dx_j."""
        return PolyMatrix([[component.diff(j) for j in range(1, vertex.n + 1)]
                           for component in vertex.components], vertex.n)

    @staticmethod
    def keller_check(vertex: PolyMap) -> KellerReport:
        """Decide det(I - V'(x)) == 1 exactly.

        Returns:
            KellerReport whose witness is the lowest term of det - 1 when the
            hypothesis fails
        """
        system = PolyMatrix.identity(vertex.n, vertex.n) - KellerChecker.jacobian(vertex)
        det = DeterminantCalculator.determinant(system)
        deviation = det - 1
        if deviation.is_zero():
            logger.info("Jacobian hypothesis holds for %r", vertex)
            return KellerReport(det, True, None)
        exps, coeff = deviation.lowest_term()
        witness = Polynomial(vertex.n, {exps: coeff}).render()
        logger.info("Jacobian hypothesis fails for %r: det = %s", vertex, det.render())
        return KellerReport(det, False, witness)

    @staticmethod
    def map_norms(vertex: PolyMap) -> MapNorms:
        """Sup norm of the symmetric tensor and the radius 1 / ((2n)^d (1 + |V|))."""
        sup_norm = vertex.symmetric_view().sup_norm()
        radius = Fraction(1, (2 * vertex.n) ** vertex.d) / (1 + sup_norm)
        return MapNorms(sup_norm, radius)

    @staticmethod
    def characteristic_witness(linear_part: ScalarMatrix) -> Polynomial:
        """det(I - tL) as a polynomial in the single variable t."""
        size = len(linear_part)
        rows = []
        for i in range(size):
            row = []
            for j in range(size):
                terms = {(1,): -linear_part[i][j]}
                if i == j:
                    terms[(0,)] = Fraction(1)
                row.append(Polynomial(1, terms))
            rows.append(row)
        return DeterminantCalculator.determinant(PolyMatrix(rows, 1))

    @staticmethod
    def nilpotency_verdict(vertex: PolyMap) -> IdentityReport:
        """Report whether L = V'(0) is nilpotent, via det(I - tL) == 1."""
        linear_part = vertex.linear_part_matrix()
        char = KellerChecker.characteristic_witness(linear_part)
        deviation = char - 1
        if deviation.is_zero():
            return IdentityReport("linear_part_nilpotent", True,
                                  details={'has_linear_part': vertex.has_linear_part})
        exps, coeff = deviation.lowest_term()
        return IdentityReport("linear_part_nilpotent", False,
                              witness=Polynomial(1, {exps: coeff}).render("t", indexed=False),
                              details={'has_linear_part': vertex.has_linear_part,
                                       'det_I_minus_tL': char.render("t", indexed=False)})

    @staticmethod
    def linear_reduction(vertex: PolyMap) -> LinearReduction:
        """Trade a nilpotent linear part for the resolvent R = (I - L)^{-1}.

        Writing x - V(x) = (I - L)x - U(x) with U = V - V^[1], the equation
        y = x - V(x) becomes x = R y + W(x) with W = R U, so the inverse is
        F_W(R y).

        Raises:
            PreconditionError: If L is not nilpotent; the message names the
                first nonzero coefficient of det(I - tL) - 1
        """
        n = vertex.n
        verdict = KellerChecker.nilpotency_verdict(vertex)
        if not verdict.holds:
            raise PreconditionError(
                f"linear part is not nilpotent: det(I - tL) - 1 has term {verdict.witness}")
        linear_part = vertex.linear_part_matrix()
        power: ScalarMatrix = scalar_identity(n)
        resolvent: ScalarMatrix = scalar_identity(n)
        # Neumann sum R = I + L + ... + L^(k-1), stopping at the first L^k == 0
        nilpotency_index = None
        for k in range(1, n + 1):
            power = scalar_matmul(power, linear_part)
            if is_zero_scalar(power):
                nilpotency_index = k
                break
            resolvent = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(resolvent, power)]
        if nilpotency_index is None:
            raise InternalInconsistencyError("L^n != 0 although det(I - tL) == 1")

        remainder = vertex.without_linear_part()
        reduced: List[Polynomial] = []
        for row in resolvent:
            acc = Polynomial.zero(n)
            for coeff, component in zip(row, remainder):
                if coeff:
                    acc = acc + component.scale(coeff)
            reduced.append(acc)

        resolvent_bound = (n + 1) * max(Fraction(1), scalar_sup(linear_part)) ** n
        bound_holds = all(abs(v) <= resolvent_bound for row in resolvent for v in row)
        logger.debug("linear reduction: nilpotency index %d, resolvent bound %s",
                     nilpotency_index, resolvent_bound)
        return LinearReduction(linear_part, resolvent, PolyMap(reduced, vertex.d),
                               nilpotency_index, resolvent_bound, bound_holds)
