"""
Explicit neighbour-sum boards.

Finite solutions are outer products of integer eigenvectors of the band factors:
  - U6 = (1, 1, 0, -1, -1, 0, ...) has eigenvalue 2 on a flat axis with 6 | len+1
  - W4 = (1, 0, -1, 0, ...) has eigenvalue 1 on a flat axis with 2 | len+1
  - C6 = (2, 1, -1, -2, -1, 1, ...) and C4 = (1, 0, -1, 0, ...) do the same on cycles
Zero borders let small flat solutions be tiled into larger ones and cut back out of them.
Infinite boards are filled cell by cell from the equation one step up and to the left.
"""

from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .errors import DomainError
from .existence import exists_neumann_square, exists_rect, exists_torus
from .grid import build_operator, devectorize, family_spec, neighbors
from .linalg import kernel_basis
from .models import BoardSpec, Boundary, Cell, CrossSpec, IntGrid, KernelBasis, Neighbourhood, SequencePair

U6 = (1, 1, 0, -1, -1, 0)
W4 = (1, 0, -1, 0)
C6 = (2, 1, -1, -2, -1, 1)
C4 = (1, 0, -1, 0)


def _pattern(period: Sequence[int], length: int) -> List[int]:
    return [period[i % len(period)] for i in range(length)]


def _outer(rows: Sequence[int], cols: Sequence[int]) -> IntGrid:
    return IntGrid.from_rows([[r * c for c in cols] for r in rows])


def standard_square_basis(n: int) -> Tuple[IntGrid, IntGrid]:
    """K1(i, j) = U6(i) * W4(j) and its transpose."""
    if n < 1 or (n + 1) % 6:
        raise DomainError(f"standard square boards need 6 | n+1, got n={n}")
    first = _outer(_pattern(U6, n), _pattern(W4, n))
    return first, first.transpose()


def rect_solution(m: int, n: int) -> IntGrid:
    """W4 along the axis with 2 | len+1, U6 along the one with 3 | len+1."""
    if not exists_rect(m, n).exists:
        raise DomainError(f"no neighbour-sum board of size {m}x{n}")
    if (m + 1) % 2 == 0 and (n + 1) % 3 == 0:
        return _outer(_pattern(W4, m), _pattern(U6, n))
    return _outer(_pattern(U6, m), _pattern(W4, n))


def torus_solution(m: int, n: int) -> IntGrid:
    if not exists_torus(m, n).exists:
        raise DomainError(f"no toroidal neighbour-sum board of size {m}x{n}")
    if m % 4 == 0 and n % 6 == 0:
        return _outer(_pattern(C4, m), _pattern(C6, n))
    return _outer(_pattern(C6, m), _pattern(C4, n))


def neumann_square_basis(n: int, dense_limit: Optional[int] = None) -> KernelBasis:
    """Exact kernel of the Neumann operator on the n x n board; empty when none exists."""
    if not exists_neumann_square(n).exists:
        return KernelBasis(n * n, ())
    return kernel_basis(build_operator(family_spec("neumann-square", (n,))), dense_limit)


def basis_boards(basis: KernelBasis, dims: Sequence[int]) -> List[IntGrid]:
    return [devectorize(v, dims) for v in basis.vectors]


# ----------------------------------------------------------------------------------------
# Phantom boundaries
# ----------------------------------------------------------------------------------------


def _check_2d(board: IntGrid) -> Tuple[int, int]:
    if board.ndim != 2:
        raise DomainError(f"expected a 2-D board, got dims {list(board.dims)}")
    return board.dims


def embed(board: IntGrid, dims: Sequence[int], origin: Sequence[int] = (0, 0)) -> IntGrid:
    """Zero board of size `dims` holding `board` with its top-left cell at `origin`."""
    rows, cols = _check_2d(board)
    m, n = dims
    r0, c0 = origin
    if r0 < 0 or c0 < 0 or r0 + rows > m or c0 + cols > n:
        raise DomainError(f"a {rows}x{cols} board at {tuple(origin)} does not fit in {m}x{n}")
    cells = [[0] * n for _ in range(m)]
    for i, row in enumerate(board.rows()):
        cells[r0 + i][c0 : c0 + cols] = row
    return IntGrid.from_rows(cells)


def with_phantom_boundary(board: IntGrid, width: int = 1) -> IntGrid:
    """`board` surrounded by `width` rings of zero cells."""
    if width < 0:
        raise DomainError(f"boundary width must be non-negative, got {width}")
    rows, cols = _check_2d(board)
    return embed(board, (rows + 2 * width, cols + 2 * width), (width, width))


def _mirror(board: IntGrid, flip_rows: bool, flip_cols: bool) -> IntGrid:
    rows = board.rows()
    if flip_rows:
        rows = rows[::-1]
    if flip_cols:
        rows = [row[::-1] for row in rows]
    return IntGrid.from_rows(rows)


def tile(unit: IntGrid, reps: Sequence[int]) -> IntGrid:
    """Repeat a flat solution over a reps[0] x reps[1] array of blocks, one zero line between blocks.

    Block (p, q) holds the unit mirrored vertically when p is odd and horizontally when q is odd,
    scaled by (-1)^(p+q). Neighbour sums across each zero line then cancel, so the result is a
    solution whenever the unit is. The 2x1 unit [[1], [1]] on 2k x 3k blocks gives the first
    standard board of side 6k - 1.
    """
    a, b = _check_2d(unit)
    p_reps, q_reps = reps
    if p_reps < 1 or q_reps < 1:
        raise DomainError(f"tile repetitions must be positive, got {tuple(reps)}")
    m, n = p_reps * (a + 1) - 1, q_reps * (b + 1) - 1
    cells = [[0] * n for _ in range(m)]
    for p in range(p_reps):
        for q in range(q_reps):
            block = _mirror(unit, p % 2 == 1, q % 2 == 1).scale((-1) ** (p + q))
            for i, row in enumerate(block.rows()):
                cells[p * (a + 1) + i][q * (b + 1) : q * (b + 1) + b] = row
    return IntGrid.from_rows(cells)


@dataclass(frozen=True)
class Region:
    """A connected non-zero part of a board, cropped to its bounding box."""

    origin: Cell
    board: IntGrid

    def to_dict(self) -> dict:
        return {
            "origin": list(self.origin),
            "dims": list(self.board.dims),
            "cells": [str(c) for c in self.board.cells],
        }


def disjoint_regions(grid: IntGrid, neighbourhood: Neighbourhood = Neighbourhood.MOORE) -> List[Region]:
    """Split a flat 2-D board into connected groups of non-zero cells, in row-major order of first cell.

    Cells of other groups inside a bounding box are zeroed. Embedding every region back at its
    origin and adding the results gives `grid`.
    """
    rows, cols = _check_2d(grid)
    spec = BoardSpec((rows, cols), Boundary.FLAT, neighbourhood)
    values = grid.rows()
    seen = set()
    regions = []
    for start in ((i, j) for i in range(rows) for j in range(cols)):
        if start in seen or values[start[0]][start[1]] == 0:
            continue
        seen.add(start)
        stack, members = [start], []
        while stack:
            cell = stack.pop()
            members.append(cell)
            for nb in neighbors(spec, cell):
                if nb not in seen and values[nb[0]][nb[1]] != 0:
                    seen.add(nb)
                    stack.append(nb)
        r0, c0 = min(r for r, _ in members), min(c for _, c in members)
        r1, c1 = max(r for r, _ in members), max(c for _, c in members)
        box = [[0] * (c1 - c0 + 1) for _ in range(r1 - r0 + 1)]
        for r, c in members:
            box[r - r0][c - c0] = values[r][c]
        regions.append(Region((r0, c0), IntGrid.from_rows(box)))
    return regions


# ----------------------------------------------------------------------------------------
# Recursive fills
# ----------------------------------------------------------------------------------------


def _default_order(rows: int, cols: int) -> List[Cell]:
    cells = [(i, j) for i in range(2, rows + 1) for j in range(2, cols + 1)]
    return sorted(cells, key=lambda cell: (cell[0] + cell[1], cell[0]))


def fill_quadrant(
    outer_row: Sequence[int],
    inner_row: Sequence[int],
    outer_col: Sequence[int],
    inner_col: Sequence[int],
    rows: int,
    cols: int,
    order: Optional[Iterable[Cell]] = None,
) -> IntGrid:
    """Fill a quadrant from its two given rows and columns.

    Coordinates run from the outer corner (0, 0): rows 0 and 1 are `outer_row` and `inner_row`
    (cols + 1 entries each), columns 0 and 1 are `outer_col` and `inner_col` (rows + 1 entries).
    Cell (i, j) with i, j >= 2 is fixed by the equation at (i-1, j-1), whose other seven
    neighbours are filled first. Returns rows 1..rows by columns 1..cols.
    """
    if rows < 1 or cols < 1:
        raise DomainError(f"window must be at least 1x1, got {rows}x{cols}")
    if len(outer_row) < cols + 1 or len(inner_row) < cols + 1:
        raise DomainError(f"row sequences need {cols + 1} entries")
    if len(outer_col) < rows + 1 or len(inner_col) < rows + 1:
        raise DomainError(f"column sequences need {rows + 1} entries")
    corners = (
        (outer_row[0], outer_col[0]),
        (outer_row[1], inner_col[0]),
        (inner_row[0], outer_col[1]),
        (inner_row[1], inner_col[1]),
    )
    errors = [f"corner {k}: row gives {x}, column gives {y}" for k, (x, y) in enumerate(corners) if x != y]
    if errors:
        raise DomainError("Inconsistent corners: " + "; ".join(errors), errors)

    x: List[List[Optional[int]]] = [[None] * (cols + 1) for _ in range(rows + 1)]
    for j in range(cols + 1):
        x[0][j] = int(outer_row[j])
        x[1][j] = int(inner_row[j])
    for i in range(rows + 1):
        x[i][0] = int(outer_col[i])
        x[i][1] = int(inner_col[i])

    targets = _default_order(rows, cols)
    order = targets if order is None else [tuple(cell) for cell in order]
    if sorted(order) != sorted(targets):
        raise DomainError(f"fill order must visit each cell of rows 2..{rows}, cols 2..{cols} exactly once")
    for i, j in order:
        r, c = i - 1, j - 1
        total = 0
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                if (dr, dc) in ((0, 0), (1, 1)):
                    continue
                value = x[r + dr][c + dc]
                if value is None:
                    raise DomainError(f"fill order reaches ({i}, {j}) before ({r + dr}, {c + dc})")
                total += value
        x[i][j] = x[r][c] - total

    return IntGrid.from_rows([row[1:] for row in x[1:]])


def fill_semi_infinite(
    seqs: SequencePair, rows: int, cols: int, order: Optional[Iterable[Cell]] = None
) -> IntGrid:
    """rows x cols window of the board whose first row and column are the given sequences.

    Cells outside the board act as a zero row and column feeding the edge equations. `order`
    lists 1-indexed cells (r, c), r, c >= 2, in fill order; any order that respects dependencies
    gives the same window.
    """
    if len(seqs.row_seq) < cols or len(seqs.col_seq) < rows:
        raise DomainError(f"sequences too short for a {rows}x{cols} window")
    return fill_quadrant(
        [0] * (cols + 1),
        [0] + list(seqs.row_seq[:cols]),
        [0] * (rows + 1),
        [0] + list(seqs.col_seq[:rows]),
        rows,
        cols,
        order,
    )


def cross_value(cross: CrossSpec, row: int, col: int) -> int:
    """Value of a cell on rows 0/1 (a, c) or columns 0/1 (d, b) of the infinite board."""
    if row in (0, 1):
        name = "a" if row == 0 else "c"
        return cross.value(name, col if col >= 1 else col - 1)
    if col in (0, 1):
        name = "d" if col == 0 else "b"
        return cross.value(name, 1 - row if row <= 0 else -row)
    raise DomainError(f"cell ({row}, {col}) is not on the cross")


# maps quadrant coordinates (i, j) to board coordinates
Reflection = Callable[[int, int], Tuple[int, int]]

QUADRANTS: Tuple[Tuple[str, Reflection], ...] = (
    ("bottom-right", lambda i, j: (i, j)),
    ("bottom-left", lambda i, j: (i, 1 - j)),
    ("top-right", lambda i, j: (1 - i, j)),
    ("top-left", lambda i, j: (1 - i, 1 - j)),
)


def fill_cross_quadrant(cross: CrossSpec, reflect: Reflection, rows: int, cols: int) -> IntGrid:
    """One quadrant of the infinite board, in quadrant coordinates."""
    return fill_quadrant(
        [cross_value(cross, *reflect(0, j)) for j in range(cols + 1)],
        [cross_value(cross, *reflect(1, j)) for j in range(cols + 1)],
        [cross_value(cross, *reflect(i, 0)) for i in range(rows + 1)],
        [cross_value(cross, *reflect(i, 1)) for i in range(rows + 1)],
        rows,
        cols,
    )


def fill_infinite(cross: CrossSpec, rows: int, cols: int) -> IntGrid:
    """Window rows 1-rows..rows by columns 1-cols..cols; grid cell (r, c) is board (r+1-rows, c+1-cols)."""
    if rows < 1 or cols < 1:
        raise DomainError(f"window must be at least 1x1, got {rows}x{cols}")
    cells = [[0] * (2 * cols) for _ in range(2 * rows)]
    for _, reflect in QUADRANTS:
        quadrant = fill_cross_quadrant(cross, reflect, rows, cols).rows()
        for i in range(1, rows + 1):
            for j in range(1, cols + 1):
                br, bc = reflect(i, j)
                cells[br + rows - 1][bc + cols - 1] = quadrant[i - 1][j - 1]
    return IntGrid.from_rows(cells)


@dataclass(frozen=True)
class Mismatch:
    cell: Cell
    displayed: int
    computed: int

    def to_dict(self) -> dict:
        return {"cell": list(self.cell), "displayed": str(self.displayed), "computed": str(self.computed)}


def compare_window(grid: IntGrid, golden: Sequence[Sequence[Optional[int]]]) -> List[Mismatch]:
    """Cells where `grid` differs from displayed values; None in `golden` means not displayed."""
    rows = grid.rows()
    if len(golden) > len(rows) or any(len(g) > len(rows[0]) for g in golden):
        raise DomainError("displayed window is larger than the computed one")
    out = []
    for i, golden_row in enumerate(golden):
        for j, displayed in enumerate(golden_row):
            if displayed is not None and rows[i][j] != displayed:
                out.append(Mismatch((i, j), displayed, rows[i][j]))
    return out
