"""Fixed-point inversion of y = x - V(x) and its certification."""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from models.poly_map import PolyMap
from models.polynomial import Polynomial
from models.reports import (
    DegreeBoundReport,
    IdentityReport,
    InverseSeries,
    LinearReduction,
    PolynomialityCertificate,
)
from services.keller_checker import KellerChecker
from utils.errors import GuardExceededError, InternalInconsistencyError, PreconditionError

logger = logging.getLogger(__name__)


class SeriesInverter:
    """Truncated inverse series F(y) = y + V(F(y)) and the checks built on it."""

    MAX_BOUND_DIMENSION = 30

    @staticmethod
    def invert_truncated(vertex: PolyMap, cap: int,
                         allow_nilpotent_linear: bool = False) -> InverseSeries:
        """Iterate F^0 = y, F^{m+1} = y + V(F^m) until nothing changes below cap.

        Without a linear part the coefficients of order <= m+1 are final after
        m iterations, so at most ``cap`` iterations run. A nilpotent linear
        part is accepted only on request and needs up to n more iterations
        per order.

        Args:
            vertex: The vertex V
            cap: Truncation degree, at least 1
            allow_nilpotent_linear: Iterate directly on a nilpotent linear part

        Returns:
            The stabilized truncated series

        Raises:
            PreconditionError: If cap < 1 or V has a linear part that was not allowed
            InternalInconsistencyError: If the iteration fails to stabilize
        """
        if cap < 1:
            raise PreconditionError(f"truncation cap must be at least 1, got {cap}")
        n = vertex.n
        if vertex.has_linear_part:
            if not allow_nilpotent_linear:
                raise PreconditionError(
                    "map has a linear part; apply the linear reduction first")
            if not KellerChecker.nilpotency_verdict(vertex).holds:
                raise PreconditionError("direct iteration needs a nilpotent linear part")
            limit = (cap + 1) * (n + 1)
        else:
            limit = cap
        identity = [Polynomial.variable(n, i) for i in range(1, n + 1)]
        current = identity
        # F^{m+1} = y + V(F^m), every product truncated at the cap
        for iteration in range(1, limit + 1):
            image = vertex.apply(current, cap)
            following = [y + v for y, v in zip(identity, image)]
            if following == current:  # nothing moved below the cap
                logger.debug("inverse series stabilized at iteration %d (cap %d)",
                             iteration - 1, cap)
                return InverseSeries(n, cap, tuple(current), iteration - 1)
            current = following
        raise InternalInconsistencyError(
            f"fixed-point iteration did not stabilize within {limit} iterations")

    @staticmethod
    def invert_with_linear_part(vertex: PolyMap, cap: int) -> Tuple[InverseSeries, LinearReduction]:
        """Invert a map with nilpotent linear part as F_W(R y)."""
        reduction = KellerChecker.linear_reduction(vertex)
        inner = SeriesInverter.invert_truncated(reduction.reduced, cap)
        n = vertex.n
        variables = [Polynomial.variable(n, j) for j in range(1, n + 1)]
        rotated = []
        for row in reduction.resolvent:
            acc = Polynomial.zero(n)
            for coeff, var in zip(row, variables):
                if coeff:
                    acc = acc + var.scale(coeff)
            rotated.append(acc)
        components = tuple(component.compose(rotated, cap) for component in inner.components)
        series = InverseSeries(n, cap, components, inner.stabilized_at, reduction.resolvent)
        return series, reduction

    @staticmethod
    def degree_bound(n: int, d: int) -> int:
        """Claimed degree bound d^(2^n - 2) for the polynomial inverse.

        Raises:
            PreconditionError: If n < 1 or d < 2
            GuardExceededError: If n >= 30
        """
        SeriesInverter._check_bound_arguments(n, d)
        return d ** (2 ** n - 2)

    @staticmethod
    def linear_part_degree_bound(n: int, d: int) -> int:
        """Relaxed bound n^2 d^(2^n - 1) for maps with a nilpotent linear part."""
        SeriesInverter._check_bound_arguments(n, d)
        return n * n * d ** (2 ** n - 1)

    @staticmethod
    def bound_exceeds(n: int, d: int, value: int) -> bool:
        """True when d^(2^n - 2) > value, without expanding hopeless powers."""
        exponent = 2 ** n - 2
        # d^exponent >= 2^(exponent * (bits(d) - 1))
        if exponent * (d.bit_length() - 1) > value.bit_length():
            return True
        return d ** exponent > value

    @staticmethod
    def _check_bound_arguments(n: int, d: int) -> None:
        if n < 1:
            raise PreconditionError(f"dimension must be at least 1, got {n}")
        if d < 2:
            raise PreconditionError(f"degree must be at least 2, got {d}")
        if n >= SeriesInverter.MAX_BOUND_DIMENSION:
            raise GuardExceededError(
                f"degree bound for n={n} has 2^{n}-2 digits in the exponent; refusing n >= 30")

    @staticmethod
    def certify_polynomial(vertex: PolyMap, series: InverseSeries) -> PolynomialityCertificate:
        """Check F - V(F) - y == 0 and F(x - V(x)) - x == 0 through the cap.

        Raises:
            InternalInconsistencyError: If either residual has a term at or
                below the cap
        """
        cap = series.cap
        n = vertex.n
        variables = [Polynomial.variable(n, i) for i in range(1, n + 1)]
        image = vertex.apply(list(series.components), cap)
        for i, (f, v, y) in enumerate(zip(series.components, image, variables), start=1):
            residual = f - v - y
            if not residual.is_zero():
                raise InternalInconsistencyError(
                    f"fixed-point residual of component {i} is {residual.render('y')}")
        forward = [x - v for x, v in zip(variables, vertex.components)]
        for i, (f, x) in enumerate(zip(series.components, variables), start=1):
            residual = f.compose(forward, cap) - x
            if not residual.is_zero():
                raise InternalInconsistencyError(
                    f"composition residual of component {i} is {residual.render()}")
        highest = series.highest_order()
        lower_confidence = True
        if vertex.d >= 2 and vertex.n < SeriesInverter.MAX_BOUND_DIMENSION:
            lower_confidence = SeriesInverter.bound_exceeds(n, vertex.d, cap)
        return PolynomialityCertificate(cap, True, highest, highest < cap, lower_confidence)

    @staticmethod
    def degree_report(series: InverseSeries, d: int, rule: str = "homogeneous") -> DegreeBoundReport:
        """Compare the observed inverse degree with one of the claimed bounds."""
        if rule == "homogeneous":
            bound = SeriesInverter.degree_bound(series.n, d)
        elif rule == "linear_part":
            bound = SeriesInverter.linear_part_degree_bound(series.n, d)
        else:
            raise PreconditionError(f"unknown bound rule {rule!r}")
        observed = series.highest_order()
        return DegreeBoundReport(bound, observed, observed <= bound, rule, series.cap >= bound)

    @staticmethod
    def default_cap(vertex: PolyMap, guard: int, requested: Optional[int] = None) -> int:
        """The requested cap, or min(degree bound, guard) when none was requested.

        Raises:
            GuardExceededError: If the requested cap exceeds the guard
        """
        if requested is not None:
            if requested > guard:
                raise GuardExceededError(f"cap {requested} exceeds the safety cap {guard}")
            return requested
        if vertex.n >= SeriesInverter.MAX_BOUND_DIMENSION or vertex.d < 2:
            return guard
        if SeriesInverter.bound_exceeds(vertex.n, vertex.d, guard):
            return guard
        return max(1, min(guard, SeriesInverter.degree_bound(vertex.n, vertex.d)))

    @staticmethod
    def growth_check(vertex: PolyMap, series: InverseSeries) -> IdentityReport:
        """Per component and order N, coefficient mass <= ((2n)^d |V|)^(N-1)."""
        sup_norm = KellerChecker.map_norms(vertex).sup_norm
        base = (2 * vertex.n) ** vertex.d * sup_norm
        checked = 0
        for i, component in enumerate(series.components, start=1):
            for order in range(1, series.cap + 1):
                mass = component.order_mass(order)
                bound = base ** (order - 1)
                checked += 1
                if mass > bound:
                    return IdentityReport(
                        "coefficient_growth", False,
                        witness=f"component {i}, order {order}: mass {mass} > {bound}",
                        details={'component': i, 'order': order,
                                 'mass': str(mass), 'bound': str(bound)})
        return IdentityReport("coefficient_growth", True,
                              details={'orders_checked': checked, 'base': str(base)})

    @staticmethod
    def catalan_numbers(count: int) -> List[int]:
        """C_0, ..., C_{count-1} by the convolution recurrence."""
        values = [1]
        while len(values) < count:
            k = len(values) - 1
            values.append(sum(values[i] * values[k - i] for i in range(k + 1)))
        return values[:count]

    @staticmethod
    def coefficient_list(series: InverseSeries, component: int = 1) -> List[Fraction]:
        """Coefficients of y^1 .. y^cap of a one-dimensional series."""
        if series.n != 1:
            raise PreconditionError("coefficient lists are defined for n = 1 only")
        poly = series.components[component - 1]
        return [poly.coefficient((k,)) for k in range(1, series.cap + 1)]
