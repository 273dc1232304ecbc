"""Hypothesis strategies for polynomials, matrices and maps."""

from hypothesis import strategies as st

from models.poly_map import PolyMap
from models.poly_matrix import PolyMatrix
from models.polynomial import Polynomial


def rationals():
    return st.fractions(min_value=-3, max_value=3, max_denominator=3)


def exponents(dim, max_degree, min_degree=0):
    return st.tuples(*[st.integers(0, max_degree)] * dim).filter(
        lambda exps: min_degree <= sum(exps) <= max_degree)


def polynomials(dim=2, max_degree=3, max_terms=4, min_degree=0):
    return st.dictionaries(exponents(dim, max_degree, min_degree), rationals(),
                           max_size=max_terms).map(lambda terms: Polynomial(dim, terms))


def poly_matrices(size, dim=2, max_degree=2, max_terms=2, min_degree=0):
    entries = polynomials(dim, max_degree, max_terms, min_degree)
    return st.lists(st.lists(entries, min_size=size, max_size=size),
                    min_size=size, max_size=size).map(lambda rows: PolyMatrix(rows, dim))


def square_matrices(max_size=3, dim=2):
    return st.integers(1, max_size).flatmap(lambda size: poly_matrices(size, dim))


def vertices(n=2, max_degree=2, max_terms=2):
    """Vertices without constant or linear terms."""
    return st.lists(polynomials(n, max_degree, max_terms, min_degree=2),
                    min_size=n, max_size=n).map(lambda parts: PolyMap(parts, max_degree))


def permutations(n):
    return st.permutations(list(range(1, n + 1)))
