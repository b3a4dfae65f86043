#!/usr/bin/env python3
"""
Unit tests for root-of-unity arithmetic in neighsum.cyclotomic.
"""

import os
import sys
import unittest
from fractions import Fraction

# Add parent directory to path to import neighsum module
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from neighsum.cyclotomic import (
    CycloElement,
    EisensteinInt,
    IntPoly,
    Valuation,
    cosine_sum_equals,
    cyclotomic_poly,
    element_order,
    factorize,
    g,
    is_prime,
    lambda_element,
    lambda_value,
    legendre,
    norm_product,
    product_equals,
    totient,
    valuation_eta,
    valuation_omega,
)
from neighsum.errors import DomainError


class TestNumberTheory(unittest.TestCase):
    def test_factorize(self):
        self.assertEqual(factorize(360), {2: 3, 3: 2, 5: 1})
        self.assertEqual(factorize(97), {97: 1})
        self.assertEqual(factorize(1), {})

    def test_totient(self):
        self.assertEqual([totient(n) for n in range(1, 13)], [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4])

    def test_element_order(self):
        self.assertEqual(element_order(12, 2), 6)
        self.assertEqual(element_order(12, 3), 4)
        self.assertEqual(element_order(12, 0), 1)

    def test_legendre(self):
        self.assertEqual(legendre(3, 11), 1)
        self.assertEqual(legendre(3, 5), -1)
        self.assertEqual(legendre(7, 7), 0)
        with self.assertRaises(DomainError):
            legendre(3, 9)
        with self.assertRaises(DomainError):
            legendre(3, 2)


class TestCyclotomicPoly(unittest.TestCase):
    def test_small_cases(self):
        self.assertEqual(cyclotomic_poly(1).coeffs, (-1, 1))
        self.assertEqual(cyclotomic_poly(7).coeffs, (1,) * 7)
        self.assertEqual(cyclotomic_poly(12).coeffs, (1, 0, -1, 0, 1))
        self.assertEqual(str(cyclotomic_poly(12)), "x^4 - x^2 + 1")

    def test_degree_and_constant_term(self):
        for N in range(2, 121):
            poly = cyclotomic_poly(N)
            self.assertEqual(poly.degree, totient(N), N)
            self.assertEqual(abs(poly.coeffs[0]), 1, N)

    def test_rejects_zero(self):
        with self.assertRaises(DomainError):
            cyclotomic_poly(0)

    def test_poly_arithmetic(self):
        a = IntPoly((1, 1))
        b = IntPoly((-1, 1))
        self.assertEqual((a * b).coeffs, (-1, 0, 1))
        self.assertEqual((a - a).coeffs, ())
        self.assertEqual(a(EisensteinInt(0, 1)), EisensteinInt(1, 1))


class TestCycloElement(unittest.TestCase):
    def test_lambda_values(self):
        self.assertTrue(lambda_element(12, 2).equals_int(2))
        self.assertTrue(lambda_element(12, 3).equals_int(1))
        self.assertTrue(lambda_element(12, 4).equals_int(0))
        self.assertFalse(lambda_element(12, 1).is_constant())

    def test_lambda_range(self):
        with self.assertRaises(DomainError):
            lambda_element(12, 0)
        with self.assertRaises(DomainError):
            lambda_element(12, 12)

    def test_zeta_power_cycles(self):
        zeta = CycloElement.zeta_power(5, 1)
        acc = CycloElement.constant(5, 1)
        for _ in range(5):
            acc = acc * zeta
        self.assertTrue(acc.equals_int(1))

    def test_conductor_mismatch(self):
        with self.assertRaises(DomainError):
            CycloElement.constant(5, 1) + CycloElement.constant(7, 1)


class TestProductEquals(unittest.TestCase):
    def test_two_factor_solution(self):
        self.assertTrue(product_equals(12, (2, 3), 2))
        self.assertFalse(product_equals(12, (1, 1), 2))

    def test_three_factor_counterexample(self):
        self.assertTrue(product_equals(24, (1, 11, 10), 2))

    def test_rejects_bad_input(self):
        with self.assertRaises(DomainError):
            product_equals(12, (), 2)
        with self.assertRaises(DomainError):
            product_equals(12, (12,), 2)

    def test_rational_pairs_are_one_third_and_one_half(self):
        lambda_two = {Fraction(1, 6), Fraction(5, 6)}
        lambda_one = {Fraction(1, 4), Fraction(3, 4)}
        for N in range(2, 121):
            values = [lambda_value(N, p) for p in range(N)]
            for p in range(1, N):
                for q in range(1, N):
                    u, v = Fraction(p, N), Fraction(q, N)
                    expected = (u in lambda_two and v in lambda_one) or (u in lambda_one and v in lambda_two)
                    if abs(values[p] * values[q] - 2) > 1e-6:
                        # float product far from 2 rules the pair out
                        self.assertFalse(expected, (N, p, q))
                        continue
                    self.assertEqual(product_equals(N, (p, q), 2), expected, (N, p, q))

    def test_cosine_sum(self):
        self.assertTrue(cosine_sum_equals(12, (3, 2), 1))
        self.assertTrue(cosine_sum_equals(10, (1, 3), 1))
        self.assertTrue(cosine_sum_equals(6, (0, 0), 4))
        self.assertFalse(cosine_sum_equals(12, (1, 2), 1))


class TestValuations(unittest.TestCase):
    def test_eta(self):
        self.assertTrue(valuation_eta(3).is_infinite)
        self.assertEqual(valuation_eta(6).value, 1)
        self.assertEqual(valuation_eta(12).value, Fraction(1, 2))
        self.assertEqual(valuation_eta(24).value, Fraction(1, 4))
        self.assertEqual(valuation_eta(5).value, 0)
        self.assertEqual(valuation_eta(1).value, 0)

    def test_omega(self):
        self.assertTrue(valuation_omega(1).is_infinite)
        self.assertEqual(valuation_omega(2).value, 1)
        self.assertEqual(valuation_omega(4).value, Fraction(1, 2))
        self.assertEqual(valuation_omega(6).value, 0)

    def test_infinity_absorbs(self):
        self.assertTrue((Valuation.infinite() + Valuation.finite(1)).is_infinite)
        self.assertEqual(str(Valuation.infinite()), "inf")
        self.assertEqual(str(Valuation.finite(Fraction(1, 4))), "1/4")


class TestNorm(unittest.TestCase):
    def test_known_values(self):
        self.assertEqual(g(5), -1)
        self.assertEqual(g(13), 1)
        self.assertEqual(g(10), 1)
        self.assertEqual(g(6), 2)
        self.assertEqual(g(4), 1)
        self.assertEqual(g(12), -2)
        self.assertTrue(product_equals(12, (1, 5), -2))

    def test_rejects_small_m(self):
        with self.assertRaises(DomainError):
            g(3)

    def test_matches_legendre_symbol(self):
        for p in range(5, 200):
            if is_prime(p):
                self.assertEqual(g(p), legendre(3, p), p)
                if p % 12 == 5:
                    self.assertEqual(g(2 * p), 1, p)

    def test_matches_direct_product(self):
        for m in range(4, 121):
            self.assertEqual(g(m), norm_product(m), m)


if __name__ == "__main__":
    unittest.main()
