"""
Existence of non-trivial neighbour-sum boards.

Three independent routes answer the same question:
  - rule verdicts: the divisibility conditions of each board family
  - spectral verdicts: exact search over eigenvalue index tuples of the operator
  - kernel verdicts: exact elimination on the operator itself

Eigenvalues of the band factor on an axis of length L are 1 + 2cos(p pi / (L + 1)), p = 1..L,
for a flat axis and 1 + 2cos(2 pi p / L), p = 0..L-1, for a periodic one. Each is
1 + z^e + z^-e for a root of unity z, so every equation below is confirmed in Z[X]/(Phi_N)
after a float prefilter.
"""

import bisect
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .config import DEFAULT_CONFIG
from .cyclotomic import (
    cosine_sum_equals,
    element_order,
    factorize,
    g,
    lambda_value,
    product_equals,
    product_of_lambdas,
    totient,
    valuation_eta,
)
from .errors import DomainError, InvariantError, UnsupportedSpecError
from .grid import build_operator, family_spec
from .linalg import kernel_basis
from .logs import _dbg, _log
from .models import BoardSpec, Boundary, CountRecord, ExistenceVerdict, KernelBasis, Mode, Neighbourhood

MOORE_TARGET = 2
# sum of the two 2cos terms: B + B - 3I gives 1, B° + B° - 6I gives 4
NEUMANN_SUM_TARGET = 1
NEUMANN_AVERAGE_TARGET = 4

# Neumann squares with a non-trivial kernel are claimed to have a two dimensional one
NEUMANN_CLAIMED_DIM = 2


def _require(condition: bool, message: str):
    if not condition:
        raise DomainError(message)


def _confirm(N: int, exps: Sequence[int], what: str):
    if not product_of_lambdas(N, exps).equals_int(MOORE_TARGET):
        raise InvariantError(f"{what} certificate {tuple(exps)} fails the exact product check")


# ----------------------------------------------------------------------------------------
# Rule verdicts
# ----------------------------------------------------------------------------------------


def exists_square(n: int) -> ExistenceVerdict:
    _require(n >= 3, f"square boards need n >= 3, got {n}")
    if (n + 1) % 6:
        return ExistenceVerdict(False, "square: 6 | n+1")
    cert = ((n + 1) // 3, (n + 1) // 2)
    _confirm(2 * (n + 1), cert, "square")
    return ExistenceVerdict(True, "square: 6 | n+1", cert)


def exists_rect(m: int, n: int) -> ExistenceVerdict:
    _require(m >= 2 and n >= 2, f"rectangles need m, n >= 2, got {m}x{n}")
    rule = "rect: 2 | m+1 and 3 | n+1, or vice versa"
    if (m + 1) % 2 == 0 and (n + 1) % 3 == 0:
        cert = ((m + 1) // 2, (n + 1) // 3)
    elif (m + 1) % 3 == 0 and (n + 1) % 2 == 0:
        cert = ((m + 1) // 3, (n + 1) // 2)
    else:
        return ExistenceVerdict(False, rule)
    N = math.lcm(2 * (m + 1), 2 * (n + 1))
    _confirm(N, (cert[0] * N // (2 * (m + 1)), cert[1] * N // (2 * (n + 1))), "rect")
    return ExistenceVerdict(True, rule, cert)


def exists_strip(m: int) -> ExistenceVerdict:
    """1 x m strip; the length-1 axis contributes the eigenvalue 1 at p = 1."""
    _require(m >= 2, f"strips need m >= 2, got {m}")
    rule = "strip: m = 2 (mod 3)"
    if m % 3 != 2:
        return ExistenceVerdict(False, rule)
    cert = (1, (m + 1) // 3)
    _confirm(2 * (m + 1), (cert[1],), "strip")
    return ExistenceVerdict(True, rule, cert)


def exists_torus(m: int, n: int) -> ExistenceVerdict:
    _require(m >= 3 and n >= 3, f"tori need m, n >= 3, got {m}x{n}")
    rule = "torus: 4 | m and 6 | n, or vice versa"
    if m % 4 == 0 and n % 6 == 0:
        cert = (m // 4, n // 6)
    elif m % 6 == 0 and n % 4 == 0:
        cert = (m // 6, n // 4)
    else:
        return ExistenceVerdict(False, rule)
    N = math.lcm(m, n)
    _confirm(N, (cert[0] * N // m, cert[1] * N // n), "torus")
    return ExistenceVerdict(True, rule, cert)


def exists_neumann_square(n: int) -> ExistenceVerdict:
    _require(n >= 3, f"Neumann squares need n >= 3, got {n}")
    rule = "neumann-square: 5 | n+1 or 6 | n+1"
    if (n + 1) % 6 == 0:
        k = (n + 1) // 6
        cert = (3 * k, 2 * k)
    elif (n + 1) % 5 == 0:
        k = (n + 1) // 5
        cert = (k, 3 * k)
    else:
        return ExistenceVerdict(False, rule)
    if not cosine_sum_equals(2 * (n + 1), cert, NEUMANN_SUM_TARGET):
        raise InvariantError(f"neumann-square certificate {cert} fails the exact cosine-sum check")
    return ExistenceVerdict(True, rule, cert)


def hypercube_necessary(n: int) -> bool:
    _require(n >= 2, f"hypercubes need n >= 2, got {n}")
    return (n + 1) % 3 == 0


def hypercube_d3_sufficient(n: int) -> ExistenceVerdict:
    """Certificate for n^3 boards when 6 | n+1 or 15 | n+1; exists=False means no certificate."""
    _require(n >= 2, f"hypercubes need n >= 2, got {n}")
    rule = "hypercube d=3: 6 | n+1 or 15 | n+1"
    if (n + 1) % 6 == 0:
        k = (n + 1) // 6
        cert = (2 * k, 3 * k, 3 * k)
    elif (n + 1) % 15 == 0:
        k = (n + 1) // 15
        cert = (5 * k, 3 * k, 9 * k)
    else:
        return ExistenceVerdict(False, rule)
    _confirm(2 * (n + 1), cert, "hypercube d=3")
    return ExistenceVerdict(True, rule, cert)


def _decomposition_factors(n: int) -> List[Tuple[int, int, int]]:
    """(modulus, length, step) for each prime factor p != 3 of n+1 with an odd-prime g factor.

    g(p) = 1 for p = +-1 (mod 12) and g(2p) = 1 for p = 5 (mod 12), so those come one at a time;
    g(q) = -1 for q = 7 (mod 12), so those come in pairs.
    """
    factors = []
    for p in factorize(n + 1):
        if p in (2, 3):
            continue
        length = (p - 1) // 2
        if p % 12 == 7:
            factors.append((p, length, 2))
        elif p % 12 == 5:
            factors.append((2 * p, length, 1))
        else:
            factors.append((p, length, 1))
    return factors


def sufficient_decomposition(n: int, d: int) -> Optional[List[int]]:
    """Moduli m_i with prod g(m_i) = 2, sum phi(m_i)/2 = d and every m_i | 2(n+1), or None."""
    _require(n >= 2 and d >= 2, f"decomposition needs n >= 2 and d >= 2, got n={n}, d={d}")
    if (n + 1) % 3:
        return None
    if (n + 1) % 2 == 0:
        moduli = [6] + [4] * (d - 1)
    else:
        factors = _decomposition_factors(n)
        counts = _solve_lengths(factors, d - 1)
        if counts is None:
            return None
        moduli = [6]
        for (modulus, _, _), count in zip(factors, counts):
            moduli.extend([modulus] * count)

    product = 1
    for m in moduli:
        product *= g(m)
    if product != MOORE_TARGET or sum(totient(m) // 2 for m in moduli) != d:
        raise InvariantError(f"decomposition {moduli} for n={n}, d={d} does not multiply out")
    if any((2 * (n + 1)) % m for m in moduli):
        raise InvariantError(f"decomposition {moduli} uses a modulus not dividing {2 * (n + 1)}")
    return moduli


def _solve_lengths(factors: Sequence[Tuple[int, int, int]], total: int) -> Optional[List[int]]:
    """Counts c_i (multiples of step_i) with sum c_i * length_i = total; first hit in DFS order."""
    if total == 0:
        return [0] * len(factors)
    if not factors:
        return None
    _, length, step = factors[0]
    for count in range(0, total // length + 1, step):
        rest = _solve_lengths(factors[1:], total - count * length)
        if rest is not None:
            return [count] + rest
    return None


def decomposition_certificate(n: int, moduli: Sequence[int]) -> Tuple[int, ...]:
    """Index tuple realising a decomposition: a * 2(n+1)/m for every a < m/2 coprime to m."""
    N = 2 * (n + 1)
    exps = []
    for m in moduli:
        if N % m:
            raise DomainError(f"modulus {m} does not divide {N}")
        step = N // m
        exps.extend(a * step for a in range(1, m) if 2 * a < m and math.gcd(a, m) == 1)
    exps = tuple(sorted(exps))
    if not product_equals(N, exps, MOORE_TARGET):
        raise InvariantError(f"decomposition certificate {exps} fails the exact product check")
    return exps


def hypercube_rule_verdict(n: int, d: int) -> ExistenceVerdict:
    if not hypercube_necessary(n):
        return ExistenceVerdict(False, "hypercube: 3 | n+1 necessary")
    if d == 3:
        verdict = hypercube_d3_sufficient(n)
        if verdict.exists:
            return verdict
    moduli = sufficient_decomposition(n, d)
    if moduli is not None:
        return ExistenceVerdict(True, f"hypercube: g-decomposition {moduli}", decomposition_certificate(n, moduli))
    raise UnsupportedSpecError(f"no rule decides n={n}, d={d}; use the spectral or kernel method")


# ----------------------------------------------------------------------------------------
# Spectral verdicts
# ----------------------------------------------------------------------------------------


@dataclass(frozen=True)
class _Axis:
    conductor: int
    indices: Tuple[int, ...]


def _axis(size: int, boundary: Boundary) -> _Axis:
    if boundary == Boundary.PERIODIC:
        return _Axis(size, tuple(range(size)))
    return _Axis(2 * (size + 1), tuple(range(1, size + 1)))


def _equation(spec: BoardSpec) -> Tuple[str, int]:
    if spec.neighbourhood == Neighbourhood.MOORE:
        return "product", MOORE_TARGET
    if spec.ndim != 2:
        raise UnsupportedSpecError(f"no spectral equation for the Neumann neighbourhood in d={spec.ndim}")
    if spec.mode == Mode.AVERAGE:
        return "cosine-sum", NEUMANN_AVERAGE_TARGET
    return "cosine-sum", NEUMANN_SUM_TARGET


def _is_exploratory(spec: BoardSpec) -> bool:
    mixed = not (spec.is_flat or spec.is_periodic)
    return mixed or (spec.neighbourhood == Neighbourhood.NEUMANN and spec.mode == Mode.SUM and not spec.is_flat)


def _is_hypercube(spec: BoardSpec) -> bool:
    return (
        spec.ndim > 2
        and spec.neighbourhood == Neighbourhood.MOORE
        and spec.is_flat
        and len(set(spec.dims)) == 1
        and spec.dims[0] >= 2
    )


def _spectral_tuples(spec: BoardSpec, tolerance: float) -> Iterator[Tuple[int, ...]]:
    """Every index tuple (axis order) whose eigenvalues satisfy the operator's kernel equation."""
    kind, target = _equation(spec)
    axes = [_axis(size, b) for size, b in zip(spec.dims, spec.boundary)]
    N = math.lcm(*(a.conductor for a in axes))
    scales = [N // a.conductor for a in axes]
    for idx in itertools.product(*(a.indices for a in axes)):
        exps = [p * s for p, s in zip(idx, scales)]
        values = [lambda_value(N, e) for e in exps]
        if kind == "product":
            if abs(math.prod(values) - target) >= tolerance:
                continue
            if product_of_lambdas(N, exps).equals_int(target):
                yield idx
        else:
            if abs(sum(v - 1 for v in values) - target) >= tolerance:
                continue
            if cosine_sum_equals(N, exps, target):
                yield idx


def spectral_search(spec: BoardSpec, tolerance: Optional[float] = None) -> ExistenceVerdict:
    """First index tuple (lexicographic) solving the eigenvalue equation, or non-existence."""
    tolerance = DEFAULT_CONFIG["prefilterTolerance"] if tolerance is None else tolerance
    rule = "spectral-exploratory" if _is_exploratory(spec) else "spectral"
    if _is_hypercube(spec):
        cert = next(_hypercube_multisets(spec.dims[0], spec.ndim, tolerance), None)
        return ExistenceVerdict(cert is not None, rule, cert[0] if cert else None)
    cert = next(_spectral_tuples(spec, tolerance), None)
    return ExistenceVerdict(cert is not None, rule, cert)


def kernel_dimension_via_spectra(spec: BoardSpec, tolerance: Optional[float] = None, threads: int = 1) -> int:
    tolerance = DEFAULT_CONFIG["prefilterTolerance"] if tolerance is None else tolerance
    if _is_hypercube(spec):
        return count_hypercube(spec.dims[0], spec.ndim, threads=threads, tolerance=tolerance).count
    return sum(1 for _ in _spectral_tuples(spec, tolerance))


def kernel_verdict(spec: BoardSpec, dense_limit: Optional[int] = None) -> ExistenceVerdict:
    basis = kernel_basis(build_operator(spec), dense_limit)
    return ExistenceVerdict(basis.dim > 0, f"kernel: dim {basis.dim}")


# ----------------------------------------------------------------------------------------
# Hypercube counting
# ----------------------------------------------------------------------------------------


def _multinomial(indices: Sequence[int]) -> int:
    total = math.factorial(len(indices))
    for _, group in itertools.groupby(indices):
        total //= math.factorial(len(list(group)))
    return total


def _hypercube_multisets(
    n: int, d: int, tolerance: float, first: Optional[int] = None
) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Non-decreasing index tuples of [1, n]^d with prod lambda = 2, with their orderings count.

    Float partial products prune the search; the last index is found by bisection over the sorted
    eigenvalues and every hit is confirmed exactly.
    """
    N = 2 * (n + 1)
    # 3p = 2(n+1) gives the eigenvalue 0, which can never be a factor of 2
    indices = [p for p in range(1, n + 1) if 3 * p != N]
    values = {p: lambda_value(N, p) for p in indices}
    by_value = sorted((values[p], p) for p in indices)
    keys = [v for v, _ in by_value]

    def last_level(prefix: Tuple[int, ...], partial: float):
        want = MOORE_TARGET / partial
        window = tolerance / abs(partial)
        lo = bisect.bisect_left(keys, want - window)
        hi = bisect.bisect_right(keys, want + window)
        for value, p in by_value[lo:hi]:
            if prefix and p < prefix[-1]:
                continue
            if abs(partial * value - MOORE_TARGET) >= tolerance:
                continue
            cand = prefix + (p,)
            if product_of_lambdas(N, cand).equals_int(MOORE_TARGET):
                yield cand, _multinomial(cand)

    def walk(prefix: Tuple[int, ...], partial: float, start: int):
        remaining = d - len(prefix)
        if remaining == 1:
            yield from last_level(prefix, partial)
            return
        for p in indices:
            if p < start:
                continue
            nxt = partial * values[p]
            if abs(nxt) * 3.0 ** (remaining - 1) < MOORE_TARGET - tolerance:
                continue
            yield from walk(prefix + (p,), nxt, p)

    if first is None:
        yield from walk((), 1.0, 1)
    elif first in values:
        yield from walk((first,), values[first], first)


def _count_from_first(n: int, d: int, first: int, tolerance: float) -> int:
    return sum(weight for _, weight in _hypercube_multisets(n, d, tolerance, first))


def count_hypercube(n: int, d: int, threads: int = 1, tolerance: Optional[float] = None) -> CountRecord:
    """Ordered index tuples of [1, n]^d whose eigenvalues multiply to 2, i.e. dim ker of the n^d operator."""
    _require(n >= 2 and d >= 2, f"count needs n >= 2 and d >= 2, got n={n}, d={d}")
    tolerance = DEFAULT_CONFIG["prefilterTolerance"] if tolerance is None else tolerance
    if not hypercube_necessary(n):
        return CountRecord(n, d, 0)
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = pool.map(
                _count_from_first,
                itertools.repeat(n),
                itertools.repeat(d),
                range(1, n + 1),
                itertools.repeat(tolerance),
            )
            count = sum(parts)
    else:
        count = sum(weight for _, weight in _hypercube_multisets(n, d, tolerance))
    _dbg(f"count_hypercube(n={n}, d={d}) = {count}")
    return CountRecord(n, d, count)


def count_sequence(
    d: int, n_lo: int, n_hi: int, threads: int = 1, progress: bool = False
) -> List[CountRecord]:
    _require(2 <= n_lo <= n_hi, f"bad range {n_lo}:{n_hi}")
    records = []
    for n in tqdm(range(n_lo, n_hi + 1), desc=f"d={d}", disable=not progress, leave=False):
        records.append(count_hypercube(n, d, threads=threads))
    return records


def d3_converse_scan(n_max: int, threads: int = 1) -> List[Dict[str, object]]:
    """Per n: whether n^3 boards have solutions and whether 6 | n+1 or 15 | n+1 predicts it."""
    _require(n_max >= 2, f"scan needs n_max >= 2, got {n_max}")
    rows = []
    for record in count_sequence(3, 2, n_max, threads=threads):
        predicted = (record.n + 1) % 6 == 0 or (record.n + 1) % 15 == 0
        rows.append(
            {
                "n": record.n,
                "count": record.count,
                "predicted": predicted,
                "agrees": predicted == (record.count > 0),
            }
        )
    disagreements = [row["n"] for row in rows if not row["agrees"]]
    if disagreements:
        _log(f"d=3 converse fails at n = {disagreements}")
    return rows


# ----------------------------------------------------------------------------------------
# Harmonic tori, rational angle scan and reports
# ----------------------------------------------------------------------------------------


def harmonic_torus_kernel(m: int, n: int, dense_limit: Optional[int] = None) -> KernelBasis:
    _require(m >= 3 and n >= 3, f"harmonic tori need m, n >= 3, got {m}x{n}")
    return kernel_basis(build_operator(family_spec("harmonic-torus", (m, n))), dense_limit)


def rational_solutions_scan(n_max: int, tolerance: Optional[float] = None) -> List[Tuple[int, int, int]]:
    """(N, p, q) with (1 + 2cos(2 pi p/N))(1 + 2cos(2 pi q/N)) = 2 for 6 <= N <= n_max, 1 <= p, q <= N/2."""
    tolerance = DEFAULT_CONFIG["prefilterTolerance"] if tolerance is None else tolerance
    out = []
    for N in range(6, n_max + 1):
        values = 1.0 + 2.0 * np.cos(2.0 * np.pi * np.arange(1, N // 2 + 1) / N)
        hits = np.argwhere(np.abs(np.outer(values, values) - MOORE_TARGET) < tolerance)
        for i, j in hits:
            p, q = int(i) + 1, int(j) + 1
            if product_equals(N, (p, q), MOORE_TARGET):
                out.append((N, p, q))
    return out


def valuation_check(N: int, p: int, q: int) -> bool:
    """v(lambda_p) + v(lambda_q) = 1 at the prime over 2, from the orders of zeta^p and zeta^q."""
    total = valuation_eta(element_order(N, p)) + valuation_eta(element_order(N, q))
    return not total.is_infinite and total.value == 1


def neumann_square_report(n: int, with_kernel: bool = False, dense_limit: Optional[int] = None) -> Dict[str, object]:
    """Computed Neumann-square kernel dimension next to the claimed two dimensions."""
    spec = family_spec("neumann-square", (n,))
    spectral_dim = kernel_dimension_via_spectra(spec)
    report: Dict[str, object] = {
        "n": n,
        "spectralDim": spectral_dim,
        "claimedDim": NEUMANN_CLAIMED_DIM if spectral_dim else 0,
    }
    if with_kernel:
        report["kernelDim"] = kernel_basis(build_operator(spec), dense_limit).dim
    report["agrees"] = spectral_dim == report["claimedDim"]
    return report


def rule_verdict(family: str, dims: Sequence[int], d: Optional[int] = None) -> ExistenceVerdict:
    dims = list(dims)
    if family == "square":
        return exists_square(dims[0])
    if family == "rect":
        return exists_rect(*dims)
    if family == "strip":
        return exists_strip(dims[0])
    if family == "torus":
        return exists_torus(*dims)
    if family == "neumann-square":
        return exists_neumann_square(dims[0])
    if family == "harmonic-torus":
        # constant functions; p = q = 0 on both cycles
        return ExistenceVerdict(True, "harmonic-torus: constants", (0, 0))
    if family == "hypercube":
        if d is None:
            raise DomainError("family 'hypercube' needs --d")
        return hypercube_rule_verdict(dims[0], d)
    raise UnsupportedSpecError(f"no existence rule for family '{family}'")
