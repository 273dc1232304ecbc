"""Sparse multivariate polynomials with exact rational coefficients."""

from fractions import Fraction
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from utils.errors import (
    DimensionMismatchError,
    InternalInconsistencyError,
    PreconditionError,
)

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class Monomial:
    """Operations on exponent vectors.

    A monomial x_1^a_1 ... x_n^a_n is stored as the tuple (a_1, ..., a_n);
    the tuple length is the ambient dimension.
    """

    @staticmethod
    def one(dim: int) -> Exponents:
        return (0,) * dim

    @staticmethod
    def variable(dim: int, i: int) -> Exponents:
        """Exponent vector of x_i (1-based)."""
        if not 1 <= i <= dim:
            raise DimensionMismatchError(f"variable index {i} out of range 1..{dim}")
        exps = [0] * dim
        exps[i - 1] = 1
        return tuple(exps)

    @staticmethod
    def degree(exps: Exponents) -> int:
        return sum(exps)

    @staticmethod
    def multiply(a: Exponents, b: Exponents) -> Exponents:
        return tuple(x + y for x, y in zip(a, b))

    @staticmethod
    def divides(a: Exponents, b: Exponents) -> bool:
        """True when x^a divides x^b."""
        return all(x <= y for x, y in zip(a, b))

    @staticmethod
    def divide(a: Exponents, b: Exponents) -> Exponents:
        return tuple(x - y for x, y in zip(a, b))

    @staticmethod
    def grlex_key(exps: Exponents) -> Tuple[int, Exponents]:
        """Sort key for the graded lexicographic order (x_1 > x_2 > ...)."""
        return (sum(exps), exps)

    @staticmethod
    def from_indices(dim: int, indices: Sequence[int]) -> Exponents:
        """Exponent vector of x_{j_1} ... x_{j_Q} for 1-based indices."""
        exps = [0] * dim
        for j in indices:
            exps[j - 1] += 1
        return tuple(exps)

    @staticmethod
    def to_indices(exps: Exponents) -> Tuple[int, ...]:
        """Sorted 1-based index multiset of a monomial."""
        indices: List[int] = []
        for position, power in enumerate(exps, start=1):
            indices.extend([position] * power)
        return tuple(indices)

    @staticmethod
    def render(exps: Exponents, var: str = "x", indexed: bool = True) -> str:
        factors = []
        for position, power in enumerate(exps, start=1):
            name = f"{var}{position}" if indexed else var
            if power == 1:
                factors.append(name)
            elif power > 1:
                factors.append(f"{name}^{power}")
        return "*".join(factors)


class Polynomial:
    """Immutable sparse polynomial in ``dim`` variables over the rationals.

    No zero coefficient is ever stored, so two polynomials are equal exactly
    when their term dictionaries are equal.
    """

    __slots__ = ("dim", "_terms")

    def __init__(self, dim: int, terms: Optional[Mapping[Sequence[int], Scalar]] = None):
        """Build a polynomial from a monomial -> coefficient mapping.

        Args:
            dim: Ambient dimension n
            terms: Mapping from exponent vectors to rational coefficients

        Raises:
            DimensionMismatchError: If an exponent vector has the wrong length
            PreconditionError: If an exponent is negative
        """
        if dim < 0:
            raise PreconditionError(f"dimension must be non-negative, got {dim}")
        cleaned: Dict[Exponents, Fraction] = {}
        for raw_exps, raw_coeff in (terms or {}).items():
            exps = tuple(int(e) for e in raw_exps)
            if len(exps) != dim:
                raise DimensionMismatchError(
                    f"monomial {exps} has length {len(exps)}, expected {dim}")
            if any(e < 0 for e in exps):
                raise PreconditionError(f"negative exponent in {exps}")
            coeff = cleaned.get(exps, Fraction(0)) + Fraction(raw_coeff)
            if coeff:
                cleaned[exps] = coeff
            else:
                cleaned.pop(exps, None)
        self.dim = dim
        self._terms = cleaned

    @classmethod
    def _wrap(cls, dim: int, terms: Dict[Exponents, Fraction]) -> "Polynomial":
        # terms must already be canonical (no zeros, right length)
        poly = cls.__new__(cls)
        poly.dim = dim
        poly._terms = terms
        return poly

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls._wrap(dim, {})

    @classmethod
    def constant(cls, dim: int, value: Scalar) -> "Polynomial":
        value = Fraction(value)
        return cls._wrap(dim, {Monomial.one(dim): value} if value else {})

    @classmethod
    def variable(cls, dim: int, i: int) -> "Polynomial":
        """The coordinate polynomial x_i (1-based)."""
        return cls._wrap(dim, {Monomial.variable(dim, i): Fraction(1)})

    @classmethod
    def monomial(cls, dim: int, exps: Sequence[int], coeff: Scalar = 1) -> "Polynomial":
        return cls(dim, {tuple(exps): coeff})

    # -- inspection -------------------------------------------------------

    def items(self) -> Iterator[Tuple[Exponents, Fraction]]:
        return iter(self._terms.items())

    def sorted_terms(self, descending: bool = True) -> List[Tuple[Exponents, Fraction]]:
        """Terms in graded lexicographic order."""
        return sorted(self._terms.items(), key=lambda item: Monomial.grlex_key(item[0]),
                      reverse=descending)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(Monomial.one(self.dim), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(exps) for exps in self._terms), default=-1)

    def low_degree(self) -> Optional[int]:
        """Smallest total degree of a stored term, None for zero."""
        return min((sum(exps) for exps in self._terms), default=None)

    def leading_term(self) -> Tuple[Exponents, Fraction]:
        if not self._terms:
            raise PreconditionError("zero polynomial has no leading term")
        exps = max(self._terms, key=Monomial.grlex_key)
        return exps, self._terms[exps]

    def lowest_term(self) -> Tuple[Exponents, Fraction]:
        """Term of smallest total degree, ties to the lex-largest monomial (x1 before x2)."""
        if not self._terms:
            raise PreconditionError("zero polynomial has no lowest term")
        exps = min(self._terms, key=lambda e: (sum(e), tuple(-x for x in e)))
        return exps, self._terms[exps]

    def homogeneous_part(self, degree: int) -> "Polynomial":
        return Polynomial._wrap(self.dim, {e: c for e, c in self._terms.items()
                                           if sum(e) == degree})

    def truncate(self, cap: int) -> "Polynomial":
        """Drop every term of total degree above ``cap``."""
        return Polynomial._wrap(self.dim, {e: c for e, c in self._terms.items()
                                           if sum(e) <= cap})

    def order_mass(self, degree: int) -> Fraction:
        """Sum of absolute values of the coefficients of a given total degree."""
        return sum((abs(c) for e, c in self._terms.items() if sum(e) == degree), Fraction(0))

    def depends_only_on(self, variables: Sequence[int]) -> bool:
        """True when every term involves only the listed 1-based variables."""
        allowed = set(variables)
        return all(all(power == 0 or (pos + 1) in allowed for pos, power in enumerate(exps))
                   for exps in self._terms)

    # -- ring arithmetic --------------------------------------------------

    def _check_dim(self, other: "Polynomial") -> None:
        if self.dim != other.dim:
            raise DimensionMismatchError(
                f"polynomials in {self.dim} and {other.dim} variables cannot be combined")

    def _coerce(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check_dim(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.dim, other)
        return NotImplemented

    def __add__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for exps, coeff in other._terms.items():
            value = terms.get(exps, 0) + coeff
            if value:
                terms[exps] = value
            else:
                terms.pop(exps, None)
        return Polynomial._wrap(self.dim, terms)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._wrap(self.dim, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other: Union["Polynomial", Scalar]) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.mul_truncated(other, None)

    def __rmul__(self, other: Scalar) -> "Polynomial":
        return self.scale(other)

    def scale(self, factor: Scalar) -> "Polynomial":
        factor = Fraction(factor)
        if not factor:
            return Polynomial.zero(self.dim)
        return Polynomial._wrap(self.dim, {e: c * factor for e, c in self._terms.items()})

    def mul_truncated(self, other: "Polynomial", cap: Optional[int]) -> "Polynomial":
        """Product with every term above total degree ``cap`` discarded."""
        self._check_dim(other)
        if cap is not None and cap < 0:
            raise PreconditionError(f"truncation cap must be non-negative, got {cap}")
        right = [(e, c, sum(e)) for e, c in other._terms.items()]
        terms: Dict[Exponents, Fraction] = {}
        for e1, c1 in self._terms.items():
            d1 = sum(e1)
            for e2, c2, d2 in right:
                if cap is not None and d1 + d2 > cap:
                    continue
                exps = tuple(x + y for x, y in zip(e1, e2))
                value = terms.get(exps, 0) + c1 * c2
                if value:
                    terms[exps] = value
                else:
                    terms.pop(exps, None)
        return Polynomial._wrap(self.dim, terms)

    def pow(self, exponent: int, cap: Optional[int] = None) -> "Polynomial":
        """Power by repeated squaring, truncated at ``cap`` when given."""
        if exponent < 0:
            raise PreconditionError("negative powers are not polynomials")
        result = Polynomial.constant(self.dim, 1)
        base = self if cap is None else self.truncate(cap)
        while exponent:
            if exponent & 1:
                result = result.mul_truncated(base, cap)
            exponent >>= 1
            if exponent:
                base = base.mul_truncated(base, cap)
        return result

    def exact_divide(self, divisor: "Polynomial") -> "Polynomial":
        """Quotient of an exact division, by graded-lex leading terms.

        Raises:
            PreconditionError: If the divisor is zero
            InternalInconsistencyError: If the division leaves a remainder
        """
        self._check_dim(divisor)
        if divisor.is_zero():
            raise PreconditionError("division by the zero polynomial")
        lead_exps, lead_coeff = divisor.leading_term()
        remainder = dict(self._terms)
        quotient: Dict[Exponents, Fraction] = {}
        while remainder:
            exps = max(remainder, key=Monomial.grlex_key)
            if not Monomial.divides(lead_exps, exps):
                raise InternalInconsistencyError("polynomial division is not exact")
            q_exps = Monomial.divide(exps, lead_exps)
            q_coeff = remainder[exps] / lead_coeff
            quotient[q_exps] = q_coeff
            for d_exps, d_coeff in divisor._terms.items():
                target = Monomial.multiply(q_exps, d_exps)
                value = remainder.get(target, 0) - q_coeff * d_coeff
                if value:
                    remainder[target] = value
                else:
                    remainder.pop(target, None)
        return Polynomial._wrap(self.dim, quotient)

    # -- calculus and substitution ----------------------------------------

    def diff(self, i: int) -> "Polynomial":
        """Partial derivative with respect to x_i (1-based)."""
        if not 1 <= i <= self.dim:
            raise DimensionMismatchError(f"variable index {i} out of range 1..{self.dim}")
        slot = i - 1
        terms: Dict[Exponents, Fraction] = {}
        for exps, coeff in self._terms.items():
            power = exps[slot]
            if power:
                lowered = exps[:slot] + (power - 1,) + exps[slot + 1:]
                terms[lowered] = coeff * power
        return Polynomial._wrap(self.dim, terms)

    def compose(self, subs: Sequence["Polynomial"], cap: Optional[int] = None) -> "Polynomial":
        """Substitute ``subs[i-1]`` for x_i, discarding terms above ``cap``.

        Args:
            subs: One polynomial per variable, all in a common dimension
            cap: Total-degree bound of the result, or None for no truncation

        Returns:
            p(subs_1, ..., subs_n), exact below the cap
        """
        if len(subs) != self.dim:
            raise DimensionMismatchError(
                f"{len(subs)} substitutions given for {self.dim} variables")
        if cap is not None and cap < 0:
            raise PreconditionError(f"truncation cap must be non-negative, got {cap}")
        if not subs:
            return Polynomial.constant(0, self.constant_term())
        target_dim = subs[0].dim
        for sub in subs:
            if sub.dim != target_dim:
                raise DimensionMismatchError("substitutions live in different dimensions")
        lows = [sub.low_degree() for sub in subs]
        powers: List[Dict[int, Polynomial]] = [{} for _ in subs]

        def power_of(slot: int, k: int) -> Polynomial:
            cached = powers[slot].get(k)
            if cached is None:
                if k == 1:
                    cached = subs[slot] if cap is None else subs[slot].truncate(cap)
                else:
                    half = power_of(slot, k // 2)
                    cached = half.mul_truncated(half, cap)
                    if k % 2:
                        cached = cached.mul_truncated(power_of(slot, 1), cap)
                powers[slot][k] = cached
            return cached

        result: Dict[Exponents, Fraction] = {}
        for exps, coeff in self._terms.items():
            # Lowest degree this term can reach; skip it if already above the cap
            floor = 0
            for slot, k in enumerate(exps):
                if k:
                    if lows[slot] is None:
                        floor = None
                        break
                    floor += k * lows[slot]
            if floor is None or (cap is not None and floor > cap):
                continue
            # Multiply the cached powers of the substitutions
            product = Polynomial.constant(target_dim, coeff)
            for slot, k in enumerate(exps):
                if k:
                    product = product.mul_truncated(power_of(slot, k), cap)
            # Accumulate, dropping terms that cancel
            for p_exps, p_coeff in product._terms.items():
                value = result.get(p_exps, 0) + p_coeff
                if value:
                    result[p_exps] = value
                else:
                    result.pop(p_exps, None)
        return Polynomial._wrap(target_dim, result)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        """Exact value at a rational point."""
        if len(point) != self.dim:
            raise DimensionMismatchError(
                f"point has {len(point)} coordinates, polynomial has {self.dim} variables")
        values = [Fraction(v) for v in point]
        total = Fraction(0)
        for exps, coeff in self._terms.items():
            term = coeff
            for value, power in zip(values, exps):
                if power:
                    term *= value ** power
            total += term
        return total

    # -- value semantics ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._terms == Polynomial.constant(self.dim, other)._terms
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        # a constant hashes like the scalar it equals
        if self.degree() <= 0:
            return hash(self.constant_term())
        return hash((self.dim, frozenset(self._terms.items())))

    def render(self, var: str = "x", indexed: bool = True) -> str:
        """Human-readable form, terms in descending graded lexicographic order.

        ``indexed=False`` drops the variable subscript, for one-variable
        polynomials such as det(I - tL).
        """
        if not self._terms:
            return "0"
        pieces: List[str] = []
        for exps, coeff in self.sorted_terms():
            body = Monomial.render(exps, var, indexed)
            magnitude = abs(coeff)
            if not body:
                text = str(magnitude)
            elif magnitude == 1:
                text = body
            else:
                text = f"{magnitude}*{body}"
            sign = "-" if coeff < 0 else "+"
            if not pieces:
                pieces.append(text if sign == "+" else f"-{text}")
            else:
                pieces.append(f"{sign} {text}")
        return " ".join(pieces)

    def to_dict(self) -> List[Dict[str, Any]]:
        """Canonical term list, descending graded lexicographic order."""
        return [{'coeff': str(coeff), 'exps': list(exps)} for exps, coeff in self.sorted_terms()]

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"Polynomial(dim={self.dim}, {self.render()})"
