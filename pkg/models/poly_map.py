"""The vertex V of a polynomial map y = x - V(x)."""

import itertools
from fractions import Fraction
from math import factorial
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from models.polynomial import Exponents, Monomial, Polynomial
from utils.errors import DimensionMismatchError, PreconditionError
from utils.validators import IndexValidator

TensorKey = Tuple[int, Tuple[int, ...]]


class SymmetricVertexView:
    """Symmetric coefficient tensors V_{i;j_1...j_Q} of a vertex.

    For a coefficient c on x^a of degree Q every arrangement of the index
    multiset carries c * prod(a_k!) / Q!, so summing the entry over all
    arrangements gives back c. Entries are stored under sorted index tuples.
    """

    def __init__(self, components: Sequence[Polynomial]):
        self.n = len(components)
        self._entries: Dict[TensorKey, Fraction] = {}
        for i, component in enumerate(components, start=1):
            for exps, coeff in component.items():
                q = sum(exps)
                if q == 0:
                    continue
                weight = Fraction(1)
                for power in exps:
                    weight *= factorial(power)
                self._entries[(i, Monomial.to_indices(exps))] = coeff * weight / factorial(q)
        self._arrangements: Dict[Tuple[int, int], List[Tuple[Tuple[int, ...], Fraction]]] = {}

    def entry(self, i: int, indices: Sequence[int]) -> Fraction:
        """Tensor entry for incoming index i and outgoing indices in any order."""
        return self._entries.get((i, tuple(sorted(indices))), Fraction(0))

    def items(self) -> Iterator[Tuple[TensorKey, Fraction]]:
        return iter(sorted(self._entries.items()))

    def arrangement_count(self, indices: Sequence[int]) -> int:
        """Number of distinct orderings of an index multiset."""
        count = factorial(len(indices))
        for _, group in itertools.groupby(sorted(indices)):
            count //= factorial(len(list(group)))
        return count

    def reconstruct(self, i: int, indices: Sequence[int]) -> Fraction:
        """Polynomial coefficient recovered by summing over arrangements."""
        return self.entry(i, indices) * self.arrangement_count(indices)

    def arrangements(self, i: int, min_degree: int = 2) -> List[Tuple[Tuple[int, ...], Fraction]]:
        """Ordered outgoing index tuples with nonzero entry for incoming index i."""
        cached = self._arrangements.get((i, min_degree))
        if cached is None:
            cached = []
            for (incoming, indices), value in sorted(self._entries.items()):
                if incoming != i or len(indices) < min_degree:
                    continue
                for ordered in sorted(set(itertools.permutations(indices))):
                    cached.append((ordered, value))
            self._arrangements[(i, min_degree)] = cached
        return cached

    def sup_norm(self) -> Fraction:
        """Largest absolute tensor entry, 0 for the zero vertex."""
        return max((abs(v) for v in self._entries.values()), default=Fraction(0))

    def to_dict(self) -> Dict[str, str]:
        return {f"{i};{','.join(map(str, idx))}": str(v) for (i, idx), v in self.items()}


class PolyMap:
    """Vertex V: n polynomial components in n variables with V(0) = 0.

    The declared degree ``d`` bounds every component; when omitted it is the
    actual maximal degree (at least 2).
    """

    def __init__(self, components: Sequence[Polynomial], degree: Optional[int] = None):
        """Initialize a vertex.

        Args:
            components: V_1, ..., V_n, each a polynomial in n variables
            degree: Declared maximal degree d

        Raises:
            PreconditionError: If a component has a constant term or exceeds d
            DimensionMismatchError: If a component lives in the wrong dimension
        """
        n = len(components)
        if n < 1:
            raise PreconditionError("a map needs at least one component")
        for i, component in enumerate(components, start=1):
            if component.dim != n:
                raise DimensionMismatchError(
                    f"component {i} has {component.dim} variables, expected {n}")
            if component.constant_term():
                raise PreconditionError(f"component {i} has a nonzero constant term")
        actual = max(component.degree() for component in components)
        if degree is None:
            degree = max(actual, 2)
        if degree < 1:
            raise PreconditionError(f"declared degree must be positive, got {degree}")
        if actual > degree:
            raise PreconditionError(f"component degree {actual} exceeds declared degree {degree}")
        self.n = n
        self.d = degree
        self.components: Tuple[Polynomial, ...] = tuple(components)
        self._view: Optional[SymmetricVertexView] = None

    @classmethod
    def zero(cls, n: int, degree: int = 2) -> "PolyMap":
        return cls([Polynomial.zero(n)] * n, degree)

    @property
    def has_linear_part(self) -> bool:
        return any(not component.homogeneous_part(1).is_zero() for component in self.components)

    def component(self, i: int) -> Polynomial:
        """Component V_i (1-based)."""
        if not 1 <= i <= self.n:
            raise DimensionMismatchError(f"component index {i} out of range 1..{self.n}")
        return self.components[i - 1]

    def linear_part_matrix(self) -> List[List[Fraction]]:
        """L = V'(0): L[i][j] is the coefficient of x_{j+1} in V_{i+1}."""
        return [[component.coefficient(Monomial.variable(self.n, j + 1)) for j in range(self.n)]
                for component in self.components]

    def without_linear_part(self) -> Tuple[Polynomial, ...]:
        """Components of V - V^[1]."""
        return tuple(component - component.homogeneous_part(1) for component in self.components)

    def homogeneous_part(self, degree: int) -> Tuple[Polynomial, ...]:
        """Components of V^[Q]."""
        return tuple(component.homogeneous_part(degree) for component in self.components)

    def symmetric_view(self) -> SymmetricVertexView:
        if self._view is None:
            self._view = SymmetricVertexView(self.components)
        return self._view

    def apply(self, points: Sequence[Polynomial], cap: Optional[int] = None) -> List[Polynomial]:
        """V evaluated on polynomial arguments, truncated at ``cap``."""
        if len(points) != self.n:
            raise DimensionMismatchError(f"{len(points)} arguments given to a map of dimension {self.n}")
        return [component.compose(points, cap) for component in self.components]

    def is_zero(self) -> bool:
        return all(component.is_zero() for component in self.components)

    def is_triangular(self) -> bool:
        """True when V_i depends only on x_{i+1}, ..., x_n for every i."""
        return all(component.depends_only_on(range(i + 1, self.n + 1))
                   for i, component in enumerate(self.components, start=1))

    def relabel(self, perm: Sequence[int]) -> "PolyMap":
        """Conjugate by a permutation of the variables.

        New variable i plays the role of old variable ``perm[i-1]``, in both
        the component list and the arguments.
        """
        perm = IndexValidator.validate_permutation(perm, self.n)
        relabeled = []
        for i in range(1, self.n + 1):
            source = self.components[perm[i - 1] - 1]
            terms: Dict[Exponents, Fraction] = {}
            for exps, coeff in source.items():
                terms[tuple(exps[perm[j] - 1] for j in range(self.n))] = coeff
            relabeled.append(Polynomial(self.n, terms))
        return PolyMap(relabeled, self.d)

    def conjugate_linear(self, matrix: Sequence[Sequence[Fraction]],
                         inverse: Sequence[Sequence[Fraction]]) -> "PolyMap":
        """Vertex of A o (x - V) o A^{-1}, namely x -> A V(A^{-1} x)."""
        variables = [Polynomial.variable(self.n, j) for j in range(1, self.n + 1)]
        substituted = []
        for row in inverse:
            acc = Polynomial.zero(self.n)
            for coeff, var in zip(row, variables):
                acc = acc + var.scale(coeff)
            substituted.append(acc)
        image = self.apply(substituted)
        conjugated = []
        for row in matrix:
            acc = Polynomial.zero(self.n)
            for coeff, component in zip(row, image):
                acc = acc + component.scale(coeff)
            conjugated.append(acc)
        return PolyMap(conjugated, self.d)

    def compose(self, inner: "PolyMap") -> "PolyMap":
        """Vertex of (x - V) o (x - U) with U = ``inner``, namely U(x) + V(x - U(x)).

        Raises:
            DimensionMismatchError: If the two maps live in different dimensions
        """
        if inner.n != self.n:
            raise DimensionMismatchError(f"cannot compose maps of dimensions {self.n} and {inner.n}")
        variables = [Polynomial.variable(self.n, j) for j in range(1, self.n + 1)]
        shifted = [x - u for x, u in zip(variables, inner.components)]
        image = self.apply(shifted)
        return PolyMap([u + v for u, v in zip(inner.components, image)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.d == other.d and self.components == other.components

    def __hash__(self) -> int:
        return hash((self.d, self.components))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'd': self.d,
            'components': [component.to_dict() for component in self.components],
        }

    def __str__(self) -> str:
        return "(" + ", ".join(component.render() for component in self.components) + ")"

    def __repr__(self) -> str:
        return f"PolyMap(n={self.n}, d={self.d}, V={self})"
