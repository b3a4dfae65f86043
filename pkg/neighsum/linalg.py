"""
Exact kernels, ranks and span tests over the rationals.

Elimination never leaves the integers: small operators go through Bareiss on a dense copy,
larger ones through sparse row elimination that strips each row's content (gcd of its entries)
after every update. Kernel vectors come out of back substitution as Fractions and are put in
reduced echelon form before being scaled to primitive integer vectors, so equal kernels give
identical bases.
"""

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .config import DEFAULT_CONFIG
from .errors import DomainError, InvariantError
from .logs import _dbg
from .models import KernelBasis, SparseIntMatrix

Row = Dict[int, int]


def _content(row: Row) -> int:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            break
    return g


def _primitive(row: Row) -> Row:
    g = _content(row)
    if g > 1:
        row = {c: v // g for c, v in row.items()}
    return row


def _bareiss(dense: List[List[int]]) -> List[Tuple[int, Row]]:
    """Fraction-free echelon form; returns (pivot column, row) pairs in pivot order."""
    m = [list(r) for r in dense]
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    prev = 1
    piv_r = 0
    echelon = []
    for piv_c in range(n_cols):
        for i_row in range(piv_r, n_rows):
            if m[i_row][piv_c] != 0:
                break
        else:
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
        pivot_row = m[piv_r]
        fp = pivot_row[piv_c]
        for r in range(piv_r + 1, n_rows):
            row = m[r]
            fr = row[piv_c]
            for c in range(piv_c + 1, n_cols):
                q, rem = divmod(fp * row[c] - fr * pivot_row[c], prev)
                if rem:
                    raise InvariantError(f"Bareiss division left remainder {rem} at ({r}, {c})")
                row[c] = q
            row[piv_c] = 0
        echelon.append((piv_c, {c: v for c, v in enumerate(pivot_row) if v and c >= piv_c}))
        prev = fp
        piv_r += 1
        if piv_r == n_rows:
            break
    return echelon


def _sparse_echelon(rows: Sequence[Row]) -> List[Tuple[int, Row]]:
    """Incremental elimination keeping one primitive integer row per pivot column."""
    pivots: Dict[int, Row] = {}
    for row in rows:
        row = _primitive(dict(row))
        while row:
            lead = min(row)
            pivot = pivots.get(lead)
            if pivot is None:
                pivots[lead] = row
                break
            a, b = row[lead], pivot[lead]
            g = math.gcd(a, b)
            ka, kb = b // g, a // g
            merged = {c: ka * v for c, v in row.items()}
            for c, v in pivot.items():
                merged[c] = merged.get(c, 0) - kb * v
            row = _primitive({c: v for c, v in merged.items() if v})
    return sorted(pivots.items())


def _echelon(M: SparseIntMatrix, dense_limit: Optional[int] = None) -> List[Tuple[int, Row]]:
    dense_limit = DEFAULT_CONFIG["denseLimit"] if dense_limit is None else dense_limit
    if M.size <= dense_limit:
        _dbg(f"dense Bareiss elimination on a {M.size}x{M.size} operator")
        return _bareiss(M.to_dense())
    _dbg(f"sparse elimination on a {M.size}x{M.size} operator with {len(M.entries)} entries")
    return _sparse_echelon([r for r in M.row_dicts() if r])


def _rref(vectors: Sequence[Sequence[Fraction]], size: int) -> List[List[Fraction]]:
    """Reduced row echelon form of the row space, zero rows dropped."""
    rows = [list(v) for v in vectors]
    out: List[List[Fraction]] = []
    for col in range(size):
        for i, row in enumerate(rows):
            if row[col] != 0:
                break
        else:
            continue
        pivot = rows.pop(i)
        lead = pivot[col]
        pivot = [x / lead for x in pivot]
        for other in out + rows:
            f = other[col]
            if f:
                for c in range(col, size):
                    other[c] -= f * pivot[c]
        out.append(pivot)
        if not rows:
            break
    return out


def _to_primitive_ints(vector: Sequence[Fraction]) -> Tuple[int, ...]:
    denom = 1
    for x in vector:
        denom = math.lcm(denom, Fraction(x).denominator)
    ints = [int(Fraction(x) * denom) for x in vector]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints] if g > 1 else ints
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def kernel_basis(M: SparseIntMatrix, dense_limit: Optional[int] = None) -> KernelBasis:
    """Canonical primitive integer basis of {v : Mv = 0} over Q."""
    echelon = _echelon(M, dense_limit)
    pivot_cols = {c for c, _ in echelon}
    free_cols = [c for c in range(M.size) if c not in pivot_cols]
    if not free_cols:
        return KernelBasis(M.size, ())

    raw = []
    for free in free_cols:
        sol: List[Fraction] = [Fraction(0)] * M.size
        sol[free] = Fraction(1)
        for piv_c, row in reversed(echelon):
            s = sum((v * sol[c] for c, v in row.items() if c != piv_c), Fraction(0))
            sol[piv_c] = -s / row[piv_c]
        raw.append(sol)

    basis = span_basis(raw, M.size)
    for v in basis.vectors:
        if any(apply(M, v)):
            raise InvariantError("kernel vector is not annihilated by the operator")
    return basis


def span_basis(vectors: Sequence[Sequence[Union[int, Fraction]]], size: int) -> KernelBasis:
    """Canonical primitive integer basis of the rational span of `vectors`."""
    for v in vectors:
        if len(v) != size:
            raise DomainError(f"vector of length {len(v)} does not match ambient size {size}")
    reduced = _rref([[Fraction(x) for x in v] for v in vectors], size)
    return KernelBasis(size, tuple(_to_primitive_ints(v) for v in reduced))


def rank(M: SparseIntMatrix, dense_limit: Optional[int] = None) -> int:
    return len(_echelon(M, dense_limit))


def apply(M: SparseIntMatrix, v: Sequence[int]) -> List[int]:
    if len(v) != M.size:
        raise DomainError(f"vector of length {len(v)} does not match a {M.size}x{M.size} matrix")
    out = [0] * M.size
    for r, c, value in M.entries:
        out[r] += value * v[c]
    return out


def in_span(basis: KernelBasis, v: Sequence[int]) -> bool:
    """Whether `v` is a rational combination of the basis vectors."""
    if len(v) != basis.size:
        raise DomainError(f"vector of length {len(v)} does not match ambient size {basis.size}")
    if not any(v):
        return True
    reduced = _rref([[Fraction(x) for x in b] for b in basis.vectors], basis.size)
    w = [Fraction(x) for x in v]
    for row in reduced:
        col = next(i for i, x in enumerate(row) if x)
        f = w[col]
        if f:
            w = [a - f * b for a, b in zip(w, row)]
    return not any(w)
