#!/usr/bin/env python3
"""
Unit tests for board geometry and operator construction in neighsum.grid.
"""

import os
import random
import sys
import unittest
from fractions import Fraction

# Add parent directory to path to import neighsum module
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from neighsum.errors import DomainError, UnsupportedSpecError
from neighsum.grid import (
    build_operator,
    devectorize,
    family_spec,
    hypercube_side,
    linear_index,
    multi_index,
    neighbors,
    operator_kronecker_form,
    vectorize,
    verify_board,
)
from neighsum.linalg import apply
from neighsum.models import BoardSpec, Boundary, IntGrid, Mode, Neighbourhood

K1_5 = [
    [1, 0, -1, 0, 1],
    [1, 0, -1, 0, 1],
    [0, 0, 0, 0, 0],
    [-1, 0, 1, 0, -1],
    [-1, 0, 1, 0, -1],
]

FLAT = Boundary.FLAT
PERIODIC = Boundary.PERIODIC


class TestBoardSpec(unittest.TestCase):
    def test_single_boundary_applies_to_every_axis(self):
        spec = BoardSpec((4, 6), PERIODIC)
        self.assertEqual(spec.boundary, (PERIODIC, PERIODIC))
        self.assertTrue(spec.is_periodic)

    def test_short_periodic_axis_rejected(self):
        with self.assertRaises(DomainError) as ctx:
            BoardSpec((2, 6), PERIODIC)
        self.assertEqual(len(ctx.exception.errors), 1)

    def test_average_needs_neumann_torus(self):
        with self.assertRaises(DomainError):
            BoardSpec((4, 4), PERIODIC, Neighbourhood.MOORE, Mode.AVERAGE)
        with self.assertRaises(DomainError):
            BoardSpec((4, 4), FLAT, Neighbourhood.NEUMANN, Mode.AVERAGE)
        BoardSpec((4, 4), PERIODIC, Neighbourhood.NEUMANN, Mode.AVERAGE)

    def test_dims_must_be_positive(self):
        with self.assertRaises(DomainError):
            BoardSpec((0, 3))
        with self.assertRaises(DomainError):
            BoardSpec(())


class TestNeighbors(unittest.TestCase):
    def test_moore_corner_edge_interior(self):
        spec = BoardSpec((3, 3))
        self.assertEqual(len(neighbors(spec, (0, 0))), 3)
        self.assertEqual(len(neighbors(spec, (0, 1))), 5)
        self.assertEqual(len(neighbors(spec, (1, 1))), 8)

    def test_moore_torus_is_eight_regular(self):
        spec = BoardSpec((4, 6), PERIODIC)
        for cell in [(0, 0), (3, 5), (2, 3)]:
            nbrs = neighbors(spec, cell)
            self.assertEqual(len(nbrs), 8)
            self.assertEqual(len(set(nbrs)), 8)
            self.assertNotIn(cell, nbrs)

    def test_neumann_interior(self):
        spec = BoardSpec((5, 5), FLAT, Neighbourhood.NEUMANN)
        self.assertEqual(sorted(neighbors(spec, (2, 2))), [(1, 2), (2, 1), (2, 3), (3, 2)])

    def test_strip(self):
        spec = BoardSpec((1, 4))
        self.assertEqual(sorted(neighbors(spec, (0, 1))), [(0, 0), (0, 2)])

    def test_out_of_range_cell(self):
        spec = BoardSpec((3, 3))
        with self.assertRaises(DomainError):
            neighbors(spec, (3, 0))
        with self.assertRaises(DomainError):
            neighbors(spec, (0,))


class TestIndexing(unittest.TestCase):
    def test_column_stacking(self):
        grid = IntGrid.from_rows([[1, 2], [3, 4]])
        self.assertEqual(vectorize(grid), [1, 3, 2, 4])

    def test_axis_zero_fastest(self):
        self.assertEqual(linear_index((3, 4), (1, 2)), 7)
        self.assertEqual(multi_index((3, 4), 7), (1, 2))
        self.assertEqual(linear_index((2, 3, 4), (1, 2, 3)), 1 + 2 * 2 + 6 * 3)

    def test_devectorize_inverts_vectorize(self):
        rng = random.Random(7)
        for dims in [(3, 4), (2, 3, 4), (5,)]:
            size = 1
            for n in dims:
                size *= n
            grid = IntGrid(dims, tuple(rng.randint(-50, 50) for _ in range(size)))
            self.assertEqual(devectorize(vectorize(grid), dims), grid)

    def test_devectorize_length_mismatch(self):
        with self.assertRaises(DomainError):
            devectorize([1, 2, 3], (2, 2))


class TestBuildOperator(unittest.TestCase):
    def test_two_by_two(self):
        dense = build_operator(BoardSpec((2, 2))).to_dense()
        self.assertEqual(dense, [[-1 if i == j else 1 for j in range(4)] for i in range(4)])

    def test_one_by_two(self):
        self.assertEqual(build_operator(BoardSpec((1, 2))).to_dense(), [[-1, 1], [1, -1]])

    def test_neumann_average_torus(self):
        op = build_operator(BoardSpec((3, 3), PERIODIC, Neighbourhood.NEUMANN, Mode.AVERAGE))
        for row in op.row_dicts():
            diagonal = [v for v in row.values() if v < 0]
            self.assertEqual(diagonal, [-4])
            self.assertEqual(sorted(row.values()), [-4, 1, 1, 1, 1])

    def test_symmetric(self):
        specs = [
            BoardSpec((5, 5)),
            BoardSpec((3, 7)),
            BoardSpec((4, 6), PERIODIC),
            BoardSpec((3, 5), (FLAT, PERIODIC)),
            BoardSpec((4, 5), FLAT, Neighbourhood.NEUMANN),
            BoardSpec((3, 4, 2)),
        ]
        for spec in specs:
            self.assertTrue(build_operator(spec).is_symmetric(), spec)

    def test_row_sums(self):
        flat = build_operator(BoardSpec((5, 5)))
        sums = flat.row_sums()
        for i in range(1, 4):
            for j in range(1, 4):
                self.assertEqual(sums[linear_index((5, 5), (i, j))], 7)
        self.assertTrue(all(s == 7 for s in build_operator(BoardSpec((4, 6), PERIODIC)).row_sums()))
        average = build_operator(BoardSpec((4, 5), PERIODIC, Neighbourhood.NEUMANN, Mode.AVERAGE))
        self.assertTrue(all(s == 0 for s in average.row_sums()))


class TestKroneckerForm(unittest.TestCase):
    def test_matches_geometry(self):
        specs = [
            BoardSpec((5, 5)),
            BoardSpec((3, 4)),
            BoardSpec((1, 5)),
            BoardSpec((7,)),
            BoardSpec((4, 6), PERIODIC),
            BoardSpec((6, 4), PERIODIC),
            BoardSpec((3, 5), (FLAT, PERIODIC)),
            BoardSpec((4, 5), FLAT, Neighbourhood.NEUMANN),
            BoardSpec((5, 3), PERIODIC, Neighbourhood.NEUMANN),
            BoardSpec((3, 4), PERIODIC, Neighbourhood.NEUMANN, Mode.AVERAGE),
            BoardSpec((2, 3, 4)),
            BoardSpec((3, 3, 4), (PERIODIC, FLAT, PERIODIC)),
        ]
        for spec in specs:
            self.assertEqual(operator_kronecker_form(spec), build_operator(spec), spec)

    def test_five_by_five_diagonal(self):
        op = operator_kronecker_form(BoardSpec((5, 5)))
        self.assertEqual(op.size, 25)
        self.assertTrue(all(v == -1 for r, c, v in op.entries if r == c))

    def test_neumann_needs_two_axes(self):
        with self.assertRaises(UnsupportedSpecError):
            operator_kronecker_form(BoardSpec((3, 3, 3), FLAT, Neighbourhood.NEUMANN))


class TestVerifyBoard(unittest.TestCase):
    def test_golden_board(self):
        self.assertEqual(verify_board(IntGrid.from_rows(K1_5), BoardSpec((5, 5))), [])

    def test_zero_board(self):
        for spec in [BoardSpec((4, 4)), BoardSpec((4, 6), PERIODIC), BoardSpec((2, 3, 2))]:
            self.assertEqual(verify_board(IntGrid.zeros(spec.dims), spec), [])

    def test_all_ones(self):
        violations = verify_board(IntGrid.from_rows([[1] * 3] * 3), BoardSpec((3, 3)))
        self.assertEqual(len(violations), 9)
        corner = violations[0]
        self.assertEqual(corner.cell, (0, 0))
        self.assertEqual(corner.expected, Fraction(3))
        self.assertEqual(corner.actual, 1)
        self.assertEqual(corner.to_dict(), {"cell": [0, 0], "expected": "3", "actual": "1"})

    def test_constants_are_harmonic(self):
        spec = BoardSpec((3, 5), PERIODIC, Neighbourhood.NEUMANN, Mode.AVERAGE)
        self.assertEqual(verify_board(IntGrid((3, 5), (7,) * 15), spec), [])

    def test_agrees_with_operator(self):
        rng = random.Random(11)
        spec = BoardSpec((5, 5))
        op = build_operator(spec)
        boards = [IntGrid.from_rows(K1_5), IntGrid.from_rows([[1] * 5] * 5)]
        boards += [IntGrid((5, 5), tuple(rng.randint(-2, 2) for _ in range(25))) for _ in range(5)]
        for grid in boards:
            clean = not verify_board(grid, spec)
            self.assertEqual(clean, not any(apply(op, vectorize(grid))))

    def test_dims_mismatch(self):
        with self.assertRaises(DomainError):
            verify_board(IntGrid.zeros((3, 3)), BoardSpec((4, 4)))


class TestFamilySpec(unittest.TestCase):
    def test_families(self):
        self.assertEqual(family_spec("square", [5]), BoardSpec((5, 5)))
        self.assertEqual(family_spec("square", [5, 5]), BoardSpec((5, 5)))
        self.assertEqual(family_spec("strip", [5]), BoardSpec((1, 5)))
        self.assertEqual(family_spec("torus", [4, 6]), BoardSpec((4, 6), PERIODIC))
        self.assertEqual(family_spec("cylinder", [3, 5]).boundary, (FLAT, PERIODIC))
        self.assertEqual(family_spec("neumann-square", [4]).neighbourhood, Neighbourhood.NEUMANN)
        self.assertEqual(family_spec("harmonic-torus", [3, 4]).mode, Mode.AVERAGE)
        self.assertEqual(family_spec("hypercube", [5], d=3).dims, (5, 5, 5))

    def test_overrides(self):
        spec = family_spec("square", [3], neighbourhood="neumann")
        self.assertEqual(spec.neighbourhood, Neighbourhood.NEUMANN)

    def test_hypercube_sides(self):
        self.assertEqual(family_spec("hypercube", [3, 3, 3]).dims, (3, 3, 3))
        self.assertEqual(family_spec("hypercube", [4, 4], d=2).dims, (4, 4))
        self.assertEqual(hypercube_side([5], 4), (5, 4))
        self.assertEqual(hypercube_side([5, 5, 5]), (5, 3))
        for dims, d in [([3, 4, 3], None), ([3, 3, 3], 4), ([], 3)]:
            with self.assertRaises(DomainError):
                hypercube_side(dims, d)

    def test_bad_requests(self):
        with self.assertRaises(DomainError):
            family_spec("hypercube", [5])
        with self.assertRaises(DomainError):
            family_spec("rect", [5])
        with self.assertRaises(DomainError):
            family_spec("hexagon", [5])


if __name__ == "__main__":
    unittest.main()
