"""
Board geometry, neighbour relations and the neighbour-sum operators.

Boards are vectorised by stacking columns: axis 0 runs fastest, so a 2-D board's linear
index is `row + rows * col`. `build_operator` walks the neighbour relation directly and is
the ground truth; `operator_kronecker_form` assembles the same matrix from band factors.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .errors import DomainError, UnsupportedSpecError
from .models import BoardSpec, Boundary, Cell, IntGrid, Mode, Neighbourhood, SparseIntMatrix

FAMILIES = (
    "square",
    "rect",
    "strip",
    "torus",
    "cylinder",
    "neumann-square",
    "harmonic-torus",
    "hypercube",
)

# constant subtracted after the Kronecker product / sum of band factors
MOORE_SHIFT = 2
NEUMANN_SUM_SHIFT = 3
NEUMANN_AVERAGE_SHIFT = 6


@functools.lru_cache(maxsize=None)
def _offsets(ndim: int, neighbourhood: Neighbourhood) -> Tuple[Cell, ...]:
    if neighbourhood == Neighbourhood.MOORE:
        return tuple(o for o in itertools.product((-1, 0, 1), repeat=ndim) if any(o))
    offsets = []
    for axis in range(ndim):
        for step in (-1, 1):
            offsets.append(tuple(step if k == axis else 0 for k in range(ndim)))
    return tuple(offsets)


def _check_cell(spec: BoardSpec, cell: Sequence[int]) -> Cell:
    cell = tuple(int(i) for i in cell)
    if len(cell) != spec.ndim or any(not 0 <= i < n for i, n in zip(cell, spec.dims)):
        raise DomainError(f"cell {cell} is outside dims {list(spec.dims)}")
    return cell


def neighbors(spec: BoardSpec, cell: Sequence[int]) -> List[Cell]:
    """Distinct neighbours of `cell`, wrapping on periodic axes."""
    cell = _check_cell(spec, cell)
    seen = {cell}
    out = []
    for offset in _offsets(spec.ndim, spec.neighbourhood):
        target = []
        for i, step, size, flag in zip(cell, offset, spec.dims, spec.boundary):
            j = i + step
            if flag == Boundary.PERIODIC:
                j %= size
            elif not 0 <= j < size:
                break
            target.append(j)
        else:
            target = tuple(target)
            if target not in seen:
                seen.add(target)
                out.append(target)
    return out


def linear_index(dims: Sequence[int], cell: Sequence[int]) -> int:
    """Position of `cell` in the column-stacked vector."""
    return int(np.ravel_multi_index(tuple(cell), tuple(dims), order="F"))


def multi_index(dims: Sequence[int], k: int) -> Cell:
    return tuple(int(i) for i in np.unravel_index(k, tuple(dims), order="F"))


def _stack_order(dims: Sequence[int]) -> np.ndarray:
    """Row-major cell offsets listed in column-stacking order."""
    size = int(np.prod(dims))
    return np.arange(size).reshape(tuple(dims)).ravel(order="F")


def vectorize(grid: IntGrid) -> List[int]:
    return [grid.cells[i] for i in _stack_order(grid.dims)]


def devectorize(v: Sequence[int], dims: Sequence[int]) -> IntGrid:
    order = _stack_order(dims)
    if len(v) != len(order):
        raise DomainError(f"vector of length {len(v)} does not fit dims {list(dims)}")
    cells = [0] * len(order)
    for k, i in enumerate(order):
        cells[i] = int(v[k])
    return IntGrid(tuple(dims), tuple(cells))


def build_operator(spec: BoardSpec) -> SparseIntMatrix:
    """T with T[i][j] = 1 for neighbours and diagonal -1 (sum) or -degree (average)."""
    entries = []
    for k in range(spec.size):
        cell = multi_index(spec.dims, k)
        nbrs = neighbors(spec, cell)
        diagonal = -len(nbrs) if spec.mode == Mode.AVERAGE else -1
        row = [(k, linear_index(spec.dims, nb), 1) for nb in nbrs]
        row.append((k, k, diagonal))
        entries.extend(sorted(row))
    return SparseIntMatrix(spec.size, tuple(entries))


def band_factor(size: int, periodic: bool = False) -> sp.csr_matrix:
    """B_n (tridiagonal, ones on three diagonals) or its circulant B°_n."""
    if size == 1:
        return sp.identity(1, dtype=np.int64, format="csr")
    band = sp.diags(
        [np.ones(size - 1), np.ones(size), np.ones(size - 1)], [-1, 0, 1], shape=(size, size), dtype=np.int64
    )
    if periodic:
        wrap = sp.coo_matrix((np.ones(2, dtype=np.int64), ([0, size - 1], [size - 1, 0])), shape=(size, size))
        band = band + wrap
    return band.tocsr()


def _to_sparse_int(matrix) -> SparseIntMatrix:
    matrix = sp.csr_matrix(matrix)
    matrix.sum_duplicates()
    matrix.eliminate_zeros()
    coo = matrix.tocoo()
    entries = tuple((int(r), int(c), int(v)) for r, c, v in zip(coo.row, coo.col, coo.data))
    return SparseIntMatrix(matrix.shape[0], entries)


def operator_kronecker_form(spec: BoardSpec) -> SparseIntMatrix:
    """The operator assembled from band factors: ⊗B - 2I (Moore), B ⊕ B - 3I (Neumann sum),
    B° ⊕ B° - 6I (Neumann average on a torus).

    The last axis is the outermost Kronecker factor, which matches column stacking.
    """
    factors = [band_factor(n, b == Boundary.PERIODIC) for n, b in zip(spec.dims, spec.boundary)]
    identity = sp.identity(spec.size, dtype=np.int64, format="csr")
    if spec.neighbourhood == Neighbourhood.MOORE:
        product = factors[-1]
        for factor in reversed(factors[:-1]):
            product = sp.kron(product, factor, format="csr")
        return _to_sparse_int(product - MOORE_SHIFT * identity)

    if spec.ndim != 2:
        raise UnsupportedSpecError(f"Kronecker form of the Neumann operator needs a 2-D board, got d={spec.ndim}")
    rows, cols = spec.dims
    kron_sum = sp.kron(factors[1], sp.identity(rows, dtype=np.int64)) + sp.kron(
        sp.identity(cols, dtype=np.int64), factors[0]
    )
    shift = NEUMANN_AVERAGE_SHIFT if spec.mode == Mode.AVERAGE else NEUMANN_SUM_SHIFT
    return _to_sparse_int(kron_sum - shift * identity)


@dataclass(frozen=True)
class Violation:
    cell: Cell
    expected: Fraction
    actual: int

    def to_dict(self) -> dict:
        return {"cell": list(self.cell), "expected": str(self.expected), "actual": str(self.actual)}


def verify_board(grid: IntGrid, spec: BoardSpec) -> List[Violation]:
    """Cells whose value differs from the sum (or average) of their neighbours.

    Walks the neighbour relation only; none of the matrix machinery is involved.
    """
    if grid.dims != spec.dims:
        raise DomainError(f"board dims {list(grid.dims)} do not match spec dims {list(spec.dims)}")
    violations = []
    for cell in itertools.product(*(range(n) for n in spec.dims)):
        nbrs = neighbors(spec, cell)
        total = sum(grid.at(nb) for nb in nbrs)
        expected = Fraction(total, len(nbrs)) if spec.mode == Mode.AVERAGE else Fraction(total)
        actual = grid.at(cell)
        if actual != expected:
            violations.append(Violation(cell, expected, actual))
    return violations


def hypercube_side(dims: Sequence[int], d: Optional[int] = None) -> Tuple[int, int]:
    """(side, d) from one side plus `d`, or from d equal sides; an explicit `d` must match."""
    dims = [int(x) for x in dims]
    if len(dims) == 1:
        if d is None or d < 1:
            raise DomainError("family 'hypercube' needs --d")
        return dims[0], d
    if not dims or len(set(dims)) != 1:
        raise DomainError(f"hypercube sides must all be equal, got {dims}")
    if d is not None and d != len(dims):
        raise DomainError(f"--d {d} does not match {len(dims)} sides")
    return dims[0], len(dims)


def family_spec(
    family: str,
    dims: Sequence[int],
    d: Optional[int] = None,
    neighbourhood: Optional[str] = None,
    mode: Optional[str] = None,
) -> BoardSpec:
    """BoardSpec for a named board family; `neighbourhood`/`mode` override the family default."""
    dims = [int(x) for x in dims]
    expected_dims = {
        "square": (1,),
        "rect": (2,),
        "strip": (1,),
        "torus": (2,),
        "cylinder": (2,),
        "neumann-square": (1,),
        "harmonic-torus": (2,),
        "hypercube": (1,),
    }
    if family not in expected_dims:
        raise DomainError(f"unknown family '{family}', expected one of {', '.join(FAMILIES)}")
    if family == "square" and len(dims) == 2 and dims[0] == dims[1]:
        dims = dims[:1]
    if family == "hypercube":
        side, d = hypercube_side(dims, d)
        dims = [side]
    if len(dims) not in expected_dims[family]:
        raise DomainError(f"family '{family}' takes {expected_dims[family][0]} dims, got {len(dims)}")

    boundary = Boundary.FLAT
    default_neighbourhood = Neighbourhood.MOORE
    default_mode = Mode.SUM
    if family in ("square", "neumann-square"):
        shape = (dims[0], dims[0])
        if family == "neumann-square":
            default_neighbourhood = Neighbourhood.NEUMANN
    elif family == "strip":
        shape = (1, dims[0])
    elif family == "hypercube":
        shape = (dims[0],) * d
    else:
        shape = tuple(dims)
        if family in ("torus", "harmonic-torus"):
            boundary = Boundary.PERIODIC
        elif family == "cylinder":
            boundary = (Boundary.FLAT, Boundary.PERIODIC)
        if family == "harmonic-torus":
            default_neighbourhood = Neighbourhood.NEUMANN
            default_mode = Mode.AVERAGE
    return BoardSpec(
        shape,
        boundary,
        Neighbourhood(neighbourhood) if neighbourhood else default_neighbourhood,
        Mode(mode) if mode else default_mode,
    )
