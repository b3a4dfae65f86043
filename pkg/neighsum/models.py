"""Data models for neighbour-sum boards, operators and results."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DomainError

Cell = Tuple[int, ...]
Triplet = Tuple[int, int, int]


class Boundary(str, Enum):
    FLAT = "flat"
    PERIODIC = "periodic"


class Neighbourhood(str, Enum):
    MOORE = "moore"
    NEUMANN = "neumann"


class Mode(str, Enum):
    SUM = "sum"
    AVERAGE = "average"


def _positive_dims(dims: Iterable[int]) -> Tuple[int, ...]:
    dims = tuple(dims)
    if not dims:
        raise DomainError("dims must contain at least one axis")
    for size in dims:
        if not isinstance(size, int) or isinstance(size, bool) or size < 1:
            raise DomainError(f"dims entries must be positive integers, got {list(dims)}")
    return dims


@dataclass(frozen=True)
class BoardSpec:
    """Geometry of a board.

    Attributes:
        dims: Cells per axis, axis 0 first (rows, then columns for 2-D boards)
        boundary: Per-axis flat or periodic flag (a single value applies to every axis)
        neighbourhood: Moore (shared edge or vertex) or Neumann (shared edge)
        mode: sum (cell equals the sum of its neighbours) or average (harmonic setting)
    """

    dims: Tuple[int, ...]
    boundary: Tuple[Boundary, ...] = (Boundary.FLAT,)
    neighbourhood: Neighbourhood = Neighbourhood.MOORE
    mode: Mode = Mode.SUM

    def __post_init__(self):
        dims = _positive_dims(self.dims)
        boundary = self.boundary
        if isinstance(boundary, (str, Boundary)):
            boundary = (boundary,)
        boundary = tuple(Boundary(b) for b in boundary)
        if len(boundary) == 1 and len(dims) > 1:
            boundary = boundary * len(dims)
        if len(boundary) != len(dims):
            raise DomainError(f"boundary has {len(boundary)} flags for {len(dims)} axes")
        neighbourhood = Neighbourhood(self.neighbourhood)
        mode = Mode(self.mode)

        errors = []
        for axis, (size, flag) in enumerate(zip(dims, boundary)):
            if flag == Boundary.PERIODIC and size < 3:
                errors.append(f"periodic axis {axis} has length {size}, needs at least 3")
        if mode == Mode.AVERAGE and (
            neighbourhood != Neighbourhood.NEUMANN or any(b != Boundary.PERIODIC for b in boundary)
        ):
            errors.append("average mode needs the Neumann neighbourhood on an all-periodic board")
        if errors:
            raise DomainError("Invalid board spec: " + "; ".join(errors), errors)

        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "boundary", boundary)
        object.__setattr__(self, "neighbourhood", neighbourhood)
        object.__setattr__(self, "mode", mode)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return math.prod(self.dims)

    @property
    def is_flat(self) -> bool:
        return all(b == Boundary.FLAT for b in self.boundary)

    @property
    def is_periodic(self) -> bool:
        return all(b == Boundary.PERIODIC for b in self.boundary)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "boundary": [b.value for b in self.boundary],
            "neighbourhood": self.neighbourhood.value,
            "mode": self.mode.value,
        }


@dataclass(frozen=True)
class IntGrid:
    """A finite board of arbitrary-precision integers, cells stored row-major."""

    dims: Tuple[int, ...]
    cells: Tuple[int, ...]

    def __post_init__(self):
        dims = _positive_dims(self.dims)
        cells = tuple(int(c) for c in self.cells)
        if len(cells) != math.prod(dims):
            raise DomainError(f"{len(cells)} cells do not fill a board of dims {list(dims)}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "cells", cells)

    @classmethod
    def zeros(cls, dims: Sequence[int]) -> IntGrid:
        return cls(tuple(dims), (0,) * math.prod(dims))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> IntGrid:
        widths = {len(row) for row in rows}
        if len(widths) != 1:
            raise DomainError("rows must all have the same length")
        return cls((len(rows), widths.pop()), tuple(c for row in rows for c in row))

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return len(self.cells)

    def offset(self, cell: Sequence[int]) -> int:
        """Row-major position of a multi-index in `cells`."""
        if len(cell) != len(self.dims) or any(not 0 <= i < n for i, n in zip(cell, self.dims)):
            raise DomainError(f"cell {tuple(cell)} is outside dims {list(self.dims)}")
        pos = 0
        for i, n in zip(cell, self.dims):
            pos = pos * n + i
        return pos

    def at(self, cell: Sequence[int]) -> int:
        return self.cells[self.offset(cell)]

    def rows(self) -> List[List[int]]:
        if self.ndim != 2:
            raise DomainError("rows() needs a 2-D board")
        m, n = self.dims
        return [list(self.cells[i * n : (i + 1) * n]) for i in range(m)]

    def transpose(self) -> IntGrid:
        rows = self.rows()
        return IntGrid.from_rows([list(col) for col in zip(*rows)])

    def __add__(self, other: IntGrid) -> IntGrid:
        if self.dims != other.dims:
            raise DomainError("cannot add boards of different dims")
        return IntGrid(self.dims, tuple(a + b for a, b in zip(self.cells, other.cells)))

    def scale(self, k: int) -> IntGrid:
        return IntGrid(self.dims, tuple(k * c for c in self.cells))

    def is_zero(self) -> bool:
        return not any(self.cells)


@dataclass(eq=False, frozen=True)
class SparseIntMatrix:
    """Square integer matrix in triplet form.

    Triplet order is kept as given; equality compares the canonical (sorted) entry set.
    """

    size: int
    entries: Tuple[Triplet, ...]

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise DomainError(f"matrix size must be a positive integer, got {self.size!r}")
        entries = tuple((int(r), int(c), int(v)) for r, c, v in self.entries)
        seen = set()
        for r, c, v in entries:
            if not (0 <= r < self.size and 0 <= c < self.size):
                raise DomainError(f"entry ({r}, {c}) outside a {self.size}x{self.size} matrix")
            if v == 0:
                raise DomainError(f"entry ({r}, {c}) stores an explicit zero")
            if (r, c) in seen:
                raise DomainError(f"duplicate entry ({r}, {c})")
            seen.add((r, c))
        object.__setattr__(self, "entries", entries)

    __hash__ = None

    def __eq__(self, other):
        if not isinstance(other, SparseIntMatrix):
            return NotImplemented
        return self.size == other.size and sorted(self.entries) == sorted(other.entries)

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> SparseIntMatrix:
        entries = [(i, j, v) for i, row in enumerate(rows) for j, v in enumerate(row) if v]
        return cls(len(rows), tuple(entries))

    def to_dense(self) -> List[List[int]]:
        dense = [[0] * self.size for _ in range(self.size)]
        for r, c, v in self.entries:
            dense[r][c] = v
        return dense

    def row_dicts(self) -> List[Dict[int, int]]:
        rows: List[Dict[int, int]] = [{} for _ in range(self.size)]
        for r, c, v in sorted(self.entries):
            rows[r][c] = v
        return rows

    def is_symmetric(self) -> bool:
        lookup = {(r, c): v for r, c, v in self.entries}
        return all(lookup.get((c, r)) == v for (r, c), v in lookup.items())

    def row_sums(self) -> List[int]:
        sums = [0] * self.size
        for r, _, v in self.entries:
            sums[r] += v
        return sums


@dataclass(frozen=True)
class KernelBasis:
    """Canonical primitive integer basis of a kernel.

    Attributes:
        size: Ambient dimension
        vectors: Rows of the reduced echelon form, each scaled to a primitive integer vector
            with positive leading entry
    """

    size: int
    vectors: Tuple[Tuple[int, ...], ...] = ()

    def __post_init__(self):
        if not isinstance(self.size, int) or isinstance(self.size, bool) or self.size < 1:
            raise DomainError(f"ambient size must be a positive integer, got {self.size!r}")
        vectors = tuple(tuple(int(x) for x in v) for v in self.vectors)
        errors = []
        pivots = []
        for k, v in enumerate(vectors):
            if len(v) != self.size:
                errors.append(f"vector {k} has length {len(v)}, expected {self.size}")
                continue
            pivot = next((i for i, x in enumerate(v) if x), None)
            if pivot is None:
                errors.append(f"vector {k} is zero")
                continue
            if v[pivot] < 0:
                errors.append(f"vector {k} has a negative leading entry")
            if math.gcd(*v) != 1:
                errors.append(f"vector {k} is not primitive")
            if pivots and pivot <= pivots[-1]:
                errors.append(f"vector {k} leads at column {pivot}, not after column {pivots[-1]}")
            pivots.append(pivot)
        if not errors:
            for k, v in enumerate(vectors):
                for j, col in enumerate(pivots):
                    if j != k and v[col]:
                        errors.append(f"vector {k} is non-zero in pivot column {col} of vector {j}")
        if errors:
            raise DomainError("Invalid kernel basis: " + "; ".join(errors), errors)
        object.__setattr__(self, "vectors", vectors)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def to_dict(self) -> dict:
        return {"dim": self.dim, "vectors": [[str(x) for x in v] for v in self.vectors]}

    @classmethod
    def from_dict(cls, data: dict, size: Optional[int] = None) -> KernelBasis:
        vectors = tuple(tuple(int(x) for x in v) for v in data.get("vectors", []))
        if size is None:
            if not vectors:
                raise DomainError("an empty kernel basis needs an explicit size")
            size = len(vectors[0])
        if any(len(v) != size for v in vectors):
            raise DomainError("kernel vectors must all have the ambient size")
        if int(data.get("dim", len(vectors))) != len(vectors):
            raise DomainError("'dim' does not match the number of vectors")
        return cls(size, vectors)


@dataclass(frozen=True)
class ExistenceVerdict:
    exists: bool
    rule: str
    certificate: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> dict:
        return {
            "exists": self.exists,
            "rule": self.rule,
            "certificate": list(self.certificate) if self.certificate is not None else None,
        }


@dataclass(frozen=True)
class CountRecord:
    n: int
    d: int
    count: int

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "count": self.count}


@dataclass(frozen=True)
class SequencePair:
    """First row and first column of a semi-infinite board, sharing the corner cell."""

    row_seq: Tuple[int, ...]
    col_seq: Tuple[int, ...]

    def __post_init__(self):
        row_seq = tuple(int(x) for x in self.row_seq)
        col_seq = tuple(int(x) for x in self.col_seq)
        if not row_seq or not col_seq:
            raise DomainError("row and column sequences must be non-empty")
        if row_seq[0] != col_seq[0]:
            raise DomainError(f"corner mismatch: row starts {row_seq[0]}, column starts {col_seq[0]}")
        object.__setattr__(self, "row_seq", row_seq)
        object.__setattr__(self, "col_seq", col_seq)


SignedSeq = Dict[int, int]


@dataclass(frozen=True)
class CrossSpec:
    """Four sequences indexed by non-zero integers laid along the two central rows (a, c)
    and the two central columns (d, b) of an infinite board."""

    a: SignedSeq = field(default_factory=dict)
    b: SignedSeq = field(default_factory=dict)
    c: SignedSeq = field(default_factory=dict)
    d: SignedSeq = field(default_factory=dict)

    def __post_init__(self):
        errors = []
        for name in ("a", "b", "c", "d"):
            seq = {int(k): int(v) for k, v in getattr(self, name).items()}
            if 0 in seq:
                errors.append(f"sequence {name} uses index 0")
            object.__setattr__(self, name, seq)
        for (s, i), (t, j) in ((("a", 1), ("b", 1)), (("a", -1), ("d", 1)), (("c", 1), ("b", -1)), (("c", -1), ("d", -1))):
            x, y = getattr(self, s).get(i), getattr(self, t).get(j)
            if x is None or y is None:
                errors.append(f"{s}_{i} and {t}_{j} must both be given")
            elif x != y:
                errors.append(f"{s}_{i} = {x} differs from {t}_{j} = {y}")
        if errors:
            raise DomainError("Invalid cross: " + "; ".join(errors), errors)

    def value(self, name: str, index: int) -> int:
        seq = getattr(self, name)
        if index not in seq:
            raise DomainError(f"sequence {name} has no entry at index {index}")
        return seq[index]

