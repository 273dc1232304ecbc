"""Result records produced by the checks."""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from models.poly_map import PolyMap
from models.polynomial import Polynomial


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of one machine-checked identity.

    ``witness`` names the first discrepancy when the identity fails;
    ``details`` carries check-specific data (counts, bounds, sub-verdicts).
    """

    name: str
    holds: bool
    witness: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'holds': self.holds,
            'witness': self.witness,
            'details': self.details,
        }


@dataclass(frozen=True)
class KellerReport:
    """det(I - V') and the Jacobian-hypothesis verdict."""

    det_polynomial: Polynomial
    is_keller: bool
    witness: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'det_polynomial': self.det_polynomial.render(),
            'is_keller': self.is_keller,
            'witness': self.witness,
        }


@dataclass(frozen=True)
class MapNorms:
    """Sup norm of the tensor entries and the analyticity radius bound."""

    sup_norm: Fraction
    radius: Fraction

    def to_dict(self) -> Dict[str, Any]:
        return {'sup_norm': str(self.sup_norm), 'radius': str(self.radius)}


@dataclass(frozen=True)
class LinearReduction:
    """Removal of a nilpotent linear part: x - V(x) = (I - L)x - U(x).

    ``reduced`` is W = R U with R = (I - L)^{-1}; the inverse of the original
    map is F_W(R y).
    """

    linear_part: List[List[Fraction]]
    resolvent: List[List[Fraction]]
    reduced: PolyMap
    nilpotency_index: int
    resolvent_bound: Fraction
    bound_holds: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'linear_part': [[str(v) for v in row] for row in self.linear_part],
            'resolvent': [[str(v) for v in row] for row in self.resolvent],
            'reduced': [component.render() for component in self.reduced.components],
            'nilpotency_index': self.nilpotency_index,
            'resolvent_bound': str(self.resolvent_bound),
            'bound_holds': self.bound_holds,
        }


@dataclass(frozen=True)
class InverseSeries:
    """Truncated formal inverse F of y = x - V(x).

    Without a linear part, component i starts with y_i; after the linear
    reduction the linear part is R y and ``resolvent`` records R.
    """

    n: int
    cap: int
    components: Tuple[Polynomial, ...]
    stabilized_at: int
    resolvent: Optional[List[List[Fraction]]] = None

    def highest_order(self) -> int:
        """Largest total degree with a surviving term."""
        return max(component.degree() for component in self.components)

    def inverse_vertex(self) -> PolyMap:
        """Vertex W = y - F(y), so that F is the map y -> y - W(y)."""
        identity = [Polynomial.variable(self.n, i) for i in range(1, self.n + 1)]
        vertex = [y - f for y, f in zip(identity, self.components)]
        return PolyMap(vertex, max(2, self.highest_order()))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'n': self.n,
            'cap': self.cap,
            'stabilized_at': self.stabilized_at,
            'components': [component.render("y") for component in self.components],
        }
        if self.resolvent is not None:
            data['resolvent'] = [[str(v) for v in row] for row in self.resolvent]
        return data


@dataclass(frozen=True)
class PolynomialityCertificate:
    """Residual certification of a truncated inverse."""

    verified_cap: int
    residual_norm_zero: bool
    highest_nonzero_order: int
    polynomial_so_far: bool
    lower_confidence: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            'verified_cap': self.verified_cap,
            'residual_norm_zero': self.residual_norm_zero,
            'highest_nonzero_order': self.highest_nonzero_order,
            'polynomial_so_far': self.polynomial_so_far,
            'lower_confidence': self.lower_confidence,
        }


@dataclass(frozen=True)
class DegreeBoundReport:
    """Observed inverse degree against a claimed bound.

    ``rule`` is "homogeneous" for d^(2^n - 2) and "linear_part" for the relaxed
    n^2 d^(2^n - 1); ``checkable`` is false when the series was truncated
    below the bound.
    """

    bound: int
    observed_degree: int
    within_bound: bool
    rule: str = "homogeneous"
    checkable: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {
            'rule': self.rule,
            'bound': str(self.bound),
            'observed_degree': self.observed_degree,
            'within_bound': self.within_bound,
            'checkable': self.checkable,
        }


@dataclass(frozen=True)
class AlignmentVerdict:
    """Whether a tree survives the alignment filter at level k.

    ``witness`` holds the preorder positions of an offending edge pair
    (ancestor first).
    """

    k: int
    survives: bool
    witness: Optional[Tuple[int, int]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'k': self.k,
            'survives': self.survives,
            'witness': list(self.witness) if self.witness else None,
        }


@dataclass(frozen=True)
class TraceSeries:
    """Truncation at ``cap`` of -Tr ln(1 - M) = sum_q Tr(M^q) / q."""

    cap: int
    value: Polynomial

    def to_dict(self) -> Dict[str, Any]:
        return {'cap': self.cap, 'value': self.value.render()}


@dataclass(frozen=True)
class MinIndexClass:
    """Part of Tr(M^Q) over cyclic words whose smallest index is r."""

    r: int
    value: Polynomial

    def to_dict(self) -> Dict[str, Any]:
        return {'r': self.r, 'value': self.value.render()}


@dataclass
class RunReport:
    """Result document of one command.

    ``timings`` are kept out of ``to_dict`` so the report is identical
    across runs with the same input and flags.
    """

    command: str
    input_digest: str
    checks: List[IdentityReport] = field(default_factory=list)
    payload: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    def add_check(self, report: IdentityReport) -> None:
        self.checks.append(report)

    @property
    def all_hold(self) -> bool:
        return all(check.holds for check in self.checks)

    @property
    def exit_code(self) -> int:
        """0 when every check holds, 1 when some identity fails."""
        return 0 if self.all_hold else 1

    def to_dict(self) -> Dict[str, Any]:
        return {
            'command': self.command,
            'input_digest': self.input_digest,
            'checks': [check.to_dict() for check in self.checks],
            'all_hold': self.all_hold,
            'payload': self.payload,
        }
