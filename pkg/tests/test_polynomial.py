"""Tests for the polynomial model."""

import unittest
from fractions import Fraction

from hypothesis import given, settings

from models.polynomial import Monomial, Polynomial
from tests.strategies import polynomials
from utils.errors import DimensionMismatchError, InternalInconsistencyError, PreconditionError


class TestMonomial(unittest.TestCase):
    """Test cases for exponent-vector helpers."""

    def test_variable(self):
        """Test the exponent vector of a single variable."""
        self.assertEqual(Monomial.variable(3, 2), (0, 1, 0))
        with self.assertRaises(DimensionMismatchError):
            Monomial.variable(2, 3)

    def test_index_round_trip(self):
        """Test conversion between exponents and index multisets."""
        self.assertEqual(Monomial.to_indices((2, 0, 1)), (1, 1, 3))
        self.assertEqual(Monomial.from_indices(3, [3, 1, 1]), (2, 0, 1))

    def test_render(self):
        """Test monomial rendering."""
        self.assertEqual(Monomial.render((1, 2)), "x1*x2^2")
        self.assertEqual(Monomial.render((0, 0)), "")


class TestPolynomial(unittest.TestCase):
    """Test cases for Polynomial."""

    def setUp(self):
        self.x1 = Polynomial.variable(2, 1)
        self.x2 = Polynomial.variable(2, 2)

    def test_zero_coefficients_dropped(self):
        """Test that cancelling terms leave no zero entries."""
        p = Polynomial(2, {(1, 0): 1, (0, 1): 0})
        self.assertEqual(len(p), 1)
        self.assertTrue((self.x1 - self.x1).is_zero())

    def test_duplicate_terms_summed(self):
        """Test that the constructor sums repeated monomials."""
        p = Polynomial(2, {(1, 0): Fraction(1, 2)})
        self.assertEqual(p + p, self.x1)

    def test_wrong_length_rejected(self):
        """Test that an exponent vector of the wrong length is refused."""
        with self.assertRaises(DimensionMismatchError):
            Polynomial(2, {(1, 0, 0): 1})
        with self.assertRaises(PreconditionError):
            Polynomial(2, {(-1, 0): 1})

    def test_mixed_dimensions_rejected(self):
        """Test that polynomials in different dimensions cannot be added."""
        with self.assertRaises(DimensionMismatchError):
            self.x1 + Polynomial.variable(3, 1)

    def test_degree(self):
        """Test total and low degree."""
        p = self.x1 * self.x2 * self.x2 + self.x1
        self.assertEqual(p.degree(), 3)
        self.assertEqual(p.low_degree(), 1)
        self.assertEqual(Polynomial.zero(2).degree(), -1)
        self.assertIsNone(Polynomial.zero(2).low_degree())

    def test_scalar_arithmetic(self):
        """Test mixing polynomials with integers and fractions."""
        p = 1 - self.x1
        self.assertEqual(p.constant_term(), 1)
        self.assertEqual((p - 1), -self.x1)
        self.assertEqual(2 * self.x1, self.x1.scale(2))
        self.assertEqual(Polynomial.constant(2, 3), 3)

    def test_truncated_product(self):
        """Test that terms above the cap are discarded."""
        p = 1 + self.x1
        self.assertEqual(p.mul_truncated(p, 1), 1 + 2 * self.x1)
        self.assertEqual(p.pow(3, 2), 1 + 3 * self.x1 + 3 * self.x1 * self.x1)

    def test_pow(self):
        """Test untruncated powers."""
        s = self.x1 + self.x2
        self.assertEqual(s.pow(2), self.x1 * self.x1 + 2 * self.x1 * self.x2 + self.x2 * self.x2)
        self.assertEqual(s.pow(0), 1)

    def test_diff(self):
        """Test partial derivatives."""
        p = self.x1 * self.x1 * self.x2 + 3 * self.x2
        self.assertEqual(p.diff(1), 2 * self.x1 * self.x2)
        self.assertEqual(p.diff(2), self.x1 * self.x1 + 3)

    def test_compose(self):
        """Test substitution of polynomials for variables."""
        p = self.x1 * self.x2
        result = p.compose([self.x1 + self.x2, self.x2])
        self.assertEqual(result, self.x1 * self.x2 + self.x2 * self.x2)

    def test_compose_truncated(self):
        """Test that composition respects the cap."""
        p = self.x1 * self.x1
        result = p.compose([self.x1 + self.x2 * self.x2, self.x2], cap=3)
        self.assertEqual(result, self.x1 * self.x1 + 2 * self.x1 * self.x2 * self.x2)

    def test_exact_divide(self):
        """Test exact division and the inexact-division failure."""
        p = (self.x1 + self.x2) * (self.x1 - self.x2)
        self.assertEqual(p.exact_divide(self.x1 + self.x2), self.x1 - self.x2)
        with self.assertRaises(InternalInconsistencyError):
            (self.x1 + 1).exact_divide(self.x2)
        with self.assertRaises(PreconditionError):
            self.x1.exact_divide(Polynomial.zero(2))

    def test_evaluate(self):
        """Test evaluation at a rational point."""
        p = self.x1 * self.x1 - self.x2
        self.assertEqual(p.evaluate([Fraction(1, 2), 3]), Fraction(-11, 4))

    def test_render(self):
        """Test rendering order and signs."""
        p = 2 * self.x1 - self.x2 * self.x2
        self.assertEqual(p.render(), "-x2^2 + 2*x1")
        self.assertEqual(Polynomial.zero(2).render(), "0")
        self.assertEqual(Polynomial.constant(2, Fraction(-1, 2)).render(), "-1/2")
        self.assertEqual(self.x1.render("y"), "y1")

    def test_lowest_term(self):
        """Test that the lowest term is the one of smallest degree."""
        p = self.x1 * self.x1 - 2 * self.x2
        self.assertEqual(p.lowest_term(), ((0, 1), Fraction(-2)))

    def test_lowest_term_tie_break(self):
        """Test that among terms of equal degree x1 comes before x2."""
        p = 3 * self.x2 + 5 * self.x1 + self.x1 * self.x2
        self.assertEqual(p.lowest_term(), ((1, 0), Fraction(5)))
        q = self.x2 * self.x2 - self.x1 * self.x2
        self.assertEqual(q.lowest_term(), ((1, 1), Fraction(-1)))

    def test_constant_hashes_like_scalar(self):
        """Test that a constant equal to a scalar also hashes like it."""
        one = Polynomial.constant(2, 1)
        self.assertEqual(one, 1)
        self.assertEqual(hash(one), hash(1))
        self.assertEqual(hash(Polynomial.zero(3)), hash(0))
        half = Polynomial.constant(1, Fraction(1, 2))
        self.assertEqual(hash(half), hash(Fraction(1, 2)))
        self.assertIn(one, {1})
        self.assertEqual(len({Polynomial.constant(2, 1), Polynomial.constant(2, 1)}), 1)
        self.assertEqual(hash(self.x1), hash(Polynomial.variable(2, 1)))

    def test_homogeneous_part_and_truncate(self):
        """Test degree selection helpers."""
        p = self.x1 + self.x1 * self.x2 + self.x2 * self.x2 * self.x2
        self.assertEqual(p.homogeneous_part(2), self.x1 * self.x2)
        self.assertEqual(p.truncate(2), self.x1 + self.x1 * self.x2)
        self.assertEqual(p.order_mass(1), 1)

    def test_depends_only_on(self):
        """Test the variable-support check."""
        self.assertTrue((self.x2 * self.x2).depends_only_on([2]))
        self.assertFalse((self.x1 * self.x2).depends_only_on([2]))

    def test_to_dict(self):
        """Test canonical term list."""
        p = self.x2 * self.x2 + Fraction(1, 3) * self.x1
        self.assertEqual(p.to_dict(), [
            {'coeff': '1', 'exps': [0, 2]},
            {'coeff': '1/3', 'exps': [1, 0]},
        ])


class TestPolynomialProperties(unittest.TestCase):
    """Ring identities checked on random polynomials."""

    @settings(max_examples=50, deadline=None)
    @given(polynomials(), polynomials(), polynomials())
    def test_ring_axioms(self, p, q, r):
        """Test commutativity, associativity and distributivity."""
        self.assertEqual(p + q, q + p)
        self.assertEqual(p * q, q * p)
        self.assertEqual((p + q) + r, p + (q + r))
        self.assertEqual((p * q) * r, p * (q * r))
        self.assertEqual(p * (q + r), p * q + p * r)

    @settings(max_examples=50, deadline=None)
    @given(polynomials(), polynomials())
    def test_leibniz_rule(self, p, q):
        """Test the product rule for every variable."""
        for i in (1, 2):
            self.assertEqual((p * q).diff(i), p.diff(i) * q + p * q.diff(i))

    @settings(max_examples=40, deadline=None)
    @given(polynomials(), polynomials())
    def test_exact_divide_inverts_product(self, p, q):
        """Test that (p q) / q == p for nonzero q."""
        if q.is_zero():
            return
        self.assertEqual((p * q).exact_divide(q), p)

    @settings(max_examples=40, deadline=None)
    @given(polynomials())
    def test_compose_with_identity(self, p):
        """Test that substituting the variables themselves changes nothing."""
        identity = [Polynomial.variable(2, 1), Polynomial.variable(2, 2)]
        self.assertEqual(p.compose(identity), p)

    @settings(max_examples=40, deadline=None)
    @given(polynomials(), polynomials())
    def test_truncation_commutes_with_product(self, p, q):
        """Test that truncating the product equals the truncated product."""
        self.assertEqual((p * q).truncate(3), p.mul_truncated(q, 3))


if __name__ == '__main__':
    unittest.main()
