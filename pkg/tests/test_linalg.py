#!/usr/bin/env python3
"""
Unit tests for exact kernels in neighsum.linalg.
"""

import math
import os
import random
import sys
import unittest

# Add parent directory to path to import neighsum module
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from neighsum.errors import DomainError
from neighsum.grid import build_operator, devectorize, vectorize
from neighsum.linalg import apply, in_span, kernel_basis, rank, span_basis
from neighsum.models import BoardSpec, IntGrid, KernelBasis, SparseIntMatrix

K1_5 = [
    [1, 0, -1, 0, 1],
    [1, 0, -1, 0, 1],
    [0, 0, 0, 0, 0],
    [-1, 0, 1, 0, -1],
    [-1, 0, 1, 0, -1],
]


def _square(n):
    return build_operator(BoardSpec((n, n)))


class TestKernelBasis(unittest.TestCase):
    def test_identity_is_nonsingular(self):
        identity = SparseIntMatrix(4, tuple((i, i, 1) for i in range(4)))
        self.assertEqual(kernel_basis(identity).dim, 0)

    def test_two_by_two_board_is_nonsingular(self):
        self.assertEqual(kernel_basis(_square(2)).vectors, ())

    def test_five_by_five_is_two_dimensional(self):
        basis = kernel_basis(_square(5))
        self.assertEqual(basis.dim, 2)
        self.assertEqual(basis.size, 25)

    def test_basis_is_canonical(self):
        basis = kernel_basis(_square(5))
        pivots = []
        for v in basis.vectors:
            lead = next(i for i, x in enumerate(v) if x)
            self.assertGreater(v[lead], 0)
            self.assertEqual(math.gcd(*v), 1)
            pivots.append(lead)
        self.assertEqual(pivots, sorted(set(pivots)))

    def test_vectors_are_annihilated(self):
        for spec in [BoardSpec((5, 5)), BoardSpec((3, 5)), BoardSpec((4, 6), "periodic")]:
            op = build_operator(spec)
            for v in kernel_basis(op).vectors:
                self.assertFalse(any(apply(op, v)))

    def test_rank_nullity(self):
        for n in (3, 5, 6):
            op = _square(n)
            self.assertEqual(rank(op) + kernel_basis(op).dim, op.size)

    def test_dense_and_sparse_paths_agree(self):
        for spec in [BoardSpec((5, 5)), BoardSpec((4, 6), "periodic"), BoardSpec((5, 5), "flat", "neumann")]:
            op = build_operator(spec)
            self.assertEqual(kernel_basis(op, dense_limit=1000), kernel_basis(op, dense_limit=1))
            self.assertEqual(rank(op, dense_limit=1000), rank(op, dense_limit=1))

    def test_triplet_order_does_not_matter(self):
        op = _square(5)
        entries = list(op.entries)
        random.Random(3).shuffle(entries)
        shuffled = SparseIntMatrix(op.size, tuple(entries))
        self.assertEqual(shuffled, op)
        self.assertEqual(kernel_basis(shuffled), kernel_basis(op))

    def test_square_boards_follow_six_divides_n_plus_one(self):
        for n in range(3, 13):
            expected = 2 if (n + 1) % 6 == 0 else 0
            self.assertEqual(kernel_basis(_square(n)).dim, expected, n)

    def test_square_kernels_three_to_thirty(self):
        dims = {n: kernel_basis(_square(n)).dim for n in range(3, 31)}
        self.assertEqual({n for n, dim in dims.items() if dim}, {5, 11, 17, 23, 29})
        self.assertTrue(all(dim in (0, 2) for dim in dims.values()), dims)

    def test_transposed_boards_share_kernels(self):
        for m in range(2, 9):
            for n in range(2, 9):
                basis = kernel_basis(build_operator(BoardSpec((m, n))))
                flipped = kernel_basis(build_operator(BoardSpec((n, m))))
                self.assertEqual(basis.dim, flipped.dim, (m, n))
                for v in flipped.vectors:
                    board = devectorize(v, (n, m)).transpose()
                    self.assertTrue(in_span(basis, vectorize(board)), (m, n))

    def test_json_form(self):
        basis = kernel_basis(_square(5))
        data = basis.to_dict()
        self.assertEqual(data["dim"], 2)
        self.assertTrue(all(isinstance(x, str) for v in data["vectors"] for x in v))
        self.assertEqual(KernelBasis.from_dict(data), basis)

    def test_span_basis_is_canonical(self):
        basis = span_basis([[0, 2, 4], [3, 3, 3], [3, 5, 7]], 3)
        self.assertEqual(basis.vectors, ((1, 0, -1), (0, 1, 2)))
        self.assertEqual(span_basis([], 3), KernelBasis(3, ()))
        with self.assertRaises(DomainError):
            span_basis([[1, 2]], 3)

    def test_non_canonical_vectors_rejected(self):
        bad = [
            ((1, 0), (0, 0)),
            ((2, 0),),
            ((-1, 1),),
            ((0, 1), (1, 0)),
            ((1, 1), (0, 1)),
            ((1, 0, 0),),
        ]
        for vectors in bad:
            with self.assertRaises(DomainError, msg=vectors):
                KernelBasis(2, vectors)
        with self.assertRaises(DomainError):
            KernelBasis(0, ())
        with self.assertRaises(DomainError):
            KernelBasis.from_dict({"dim": 1, "vectors": [["2", "4"]]})
        self.assertEqual(KernelBasis(3, ((1, 0, -1), (0, 1, 2))).dim, 2)


class TestApply(unittest.TestCase):
    def test_zero_vector(self):
        self.assertEqual(apply(_square(3), [0] * 9), [0] * 9)

    def test_golden_board_in_kernel(self):
        self.assertFalse(any(apply(_square(5), vectorize(IntGrid.from_rows(K1_5)))))

    def test_all_ones_not_in_kernel(self):
        self.assertTrue(any(apply(_square(5), [1] * 25)))

    def test_length_mismatch(self):
        with self.assertRaises(DomainError):
            apply(_square(3), [1, 2])


class TestInSpan(unittest.TestCase):
    def setUp(self):
        self.basis = kernel_basis(_square(5))
        self.k1 = IntGrid.from_rows(K1_5)
        self.k2 = self.k1.transpose()

    def test_zero_vector(self):
        self.assertTrue(in_span(self.basis, [0] * 25))
        self.assertTrue(in_span(KernelBasis(25, ()), [0] * 25))

    def test_combination(self):
        combo = self.k1.scale(3) + self.k2.scale(2)
        self.assertTrue(in_span(self.basis, vectorize(combo)))

    def test_unit_vector(self):
        self.assertFalse(in_span(self.basis, [1] + [0] * 24))

    def test_length_mismatch(self):
        with self.assertRaises(DomainError):
            in_span(self.basis, [0] * 24)


if __name__ == "__main__":
    unittest.main()
