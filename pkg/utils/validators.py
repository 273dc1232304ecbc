"""Validation utilities for map files and index relabelings."""

import re
from fractions import Fraction
from typing import Any, List, Sequence

from utils.errors import MapParseError, PreconditionError

_RATIONAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class MapFileValidator:
    """Validation utilities for the fields of a map document.

    Errors are raised without a position; the reader annotates them with the
    line and column of the offending field.
    """

    @staticmethod
    def validate_dimension(n: Any) -> int:
        """Validate the dimension field.

        Args:
            n: Raw value of "n"

        Returns:
            The dimension as an int

        Raises:
            MapParseError: If n is not a positive integer
        """
        if isinstance(n, bool) or not isinstance(n, int):
            raise MapParseError(f"\"n\" must be an integer, got {n!r}")
        if n < 1:
            raise MapParseError(f"\"n\" must be positive, got {n}")
        return n

    @staticmethod
    def validate_degree(d: Any) -> int:
        if isinstance(d, bool) or not isinstance(d, int):
            raise MapParseError(f"\"d\" must be an integer, got {d!r}")
        if d < 1:
            raise MapParseError(f"\"d\" must be positive, got {d}")
        return d

    @staticmethod
    def validate_coefficient(raw: Any) -> Fraction:
        """Parse a coefficient written as "p/q", an integer string or a JSON integer.

        Raises:
            MapParseError: If the value is not an exact rational
        """
        if isinstance(raw, bool):
            raise MapParseError(f"coefficient must be a rational, got {raw!r}")
        if isinstance(raw, int):
            return Fraction(raw)
        if not isinstance(raw, str):
            raise MapParseError(f"coefficient must be a string \"p/q\" or integer, got {raw!r}")
        match = _RATIONAL.match(raw)
        if not match:
            raise MapParseError(f"coefficient {raw!r} is not of the form \"p/q\"")
        numerator, denominator = match.groups()
        if denominator is not None and int(denominator) == 0:
            raise MapParseError(f"coefficient {raw!r} has a zero denominator")
        return Fraction(int(numerator), int(denominator or 1))

    @staticmethod
    def validate_exponents(raw: Any, n: int) -> List[int]:
        """Validate an exponent vector of length n.

        Raises:
            MapParseError: If the vector has the wrong length, a negative or
                non-integer entry, or is all zero (constant term)
        """
        if not isinstance(raw, list):
            raise MapParseError(f"\"exps\" must be a list, got {raw!r}")
        if len(raw) != n:
            raise MapParseError(f"\"exps\" has length {len(raw)}, expected {n}")
        for value in raw:
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise MapParseError(f"exponent {value!r} is not a non-negative integer")
        if not any(raw):
            raise MapParseError("constant terms are not allowed; V(0) must be 0")
        return list(raw)

    @staticmethod
    def validate_term(raw: Any) -> None:
        if not isinstance(raw, dict):
            raise MapParseError(f"term must be an object with \"coeff\" and \"exps\", got {raw!r}")
        missing = [key for key in ("coeff", "exps") if key not in raw]
        if missing:
            raise MapParseError(f"term is missing {', '.join(missing)}")

    @staticmethod
    def validate_components(raw: Any, n: int) -> None:
        if not isinstance(raw, list):
            raise MapParseError("\"components\" must be a list of term lists")
        if len(raw) != n:
            raise MapParseError(f"\"components\" has {len(raw)} entries, expected n = {n}")
        for i, terms in enumerate(raw, start=1):
            if not isinstance(terms, list):
                raise MapParseError(f"component {i} must be a list of terms")


class IndexValidator:
    """Validation utilities for index relabelings."""

    @staticmethod
    def validate_permutation(perm: Sequence[int], n: int) -> List[int]:
        """Validate a permutation of 1..n.

        Raises:
            PreconditionError: If perm is not a permutation of 1..n
        """
        values = list(perm)
        if sorted(values) != list(range(1, n + 1)):
            raise PreconditionError(f"{values} is not a permutation of 1..{n}")
        return values
