"""
Exact arithmetic with roots of unity.

Polynomials are dense coefficient tuples, constant term first. Elements of Z[X]/(Phi_N)
are residues of length phi(N), so two elements are equal iff their coefficient tuples are.
No floating point is used anywhere in this module except `lambda_value`, which only feeds
prefilters whose survivors are confirmed exactly.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .errors import DomainError, InvariantError

# ----------------------------------------------------------------------------------------
# Elementary number theory
# ----------------------------------------------------------------------------------------


def factorize(n: int) -> Dict[int, int]:
    """Prime factorisation by trial division, primes ascending."""
    if n < 1:
        raise DomainError(f"cannot factorize {n}")
    factors: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            factors[p] = factors.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


def totient(n: int) -> int:
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def divisors(n: int) -> list:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def element_order(N: int, p: int) -> int:
    """Multiplicative order of zeta_N^p."""
    return N // math.gcd(N, p % N) if p % N else 1


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) via Euler's criterion."""
    if p < 3 or not is_prime(p):
        raise DomainError(f"Legendre symbol needs an odd prime, got {p}")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


# ----------------------------------------------------------------------------------------
# Integer polynomials
# ----------------------------------------------------------------------------------------


def _trim(coeffs: Iterable[int]) -> Tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class IntPoly:
    """Polynomial over Z, lowest degree first. The zero polynomial has no coefficients."""

    coeffs: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __add__(self, other: IntPoly) -> IntPoly:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> IntPoly:
        return IntPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: IntPoly) -> IntPoly:
        return self + (-other)

    def __mul__(self, other: IntPoly) -> IntPoly:
        if not self.coeffs or not other.coeffs:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(tuple(out))

    def divmod_monic(self, divisor: IntPoly) -> Tuple[IntPoly, IntPoly]:
        if not divisor.is_monic():
            raise DomainError("divisor must be monic")
        quotient, remainder = _divmod_monic(self.coeffs, divisor.coeffs)
        return IntPoly(quotient), IntPoly(remainder)

    def __call__(self, x):
        """Horner evaluation at anything supporting + and * with ints."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            term = "" if i == 0 else "x" if i == 1 else f"x^{i}"
            body = str(mag) if (mag != 1 or i == 0) else ""
            parts.append((sign, body + term))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


def _divmod_monic(a: Sequence[int], b: Sequence[int]) -> Tuple[list, list]:
    db = len(b) - 1
    rem = list(a)
    if len(rem) <= db:
        return [], rem
    quotient = [0] * (len(rem) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        coef = rem[i]
        if coef:
            quotient[i - db] = coef
            for j in range(db + 1):
                rem[i - db + j] -= coef * b[j]
    return quotient, rem[:db]


@functools.lru_cache(maxsize=None)
def cyclotomic_poly(N: int) -> IntPoly:
    """Phi_N, by exact division of X^N - 1 by Phi_d over the proper divisors d of N."""
    if not isinstance(N, int) or N < 1:
        raise DomainError(f"cyclotomic polynomial needs N >= 1, got {N!r}")
    poly = IntPoly((-1,) + (0,) * (N - 1) + (1,))
    for d in divisors(N)[:-1]:
        quotient, remainder = poly.divmod_monic(cyclotomic_poly(d))
        if remainder.coeffs:
            raise InvariantError(f"Phi_{d} does not divide X^{N} - 1 residue")
        poly = quotient
    return poly


# ----------------------------------------------------------------------------------------
# Z[X]/(Phi_N)
# ----------------------------------------------------------------------------------------


def _reduce(N: int, coeffs: Sequence[int]) -> Tuple[int, ...]:
    modulus = cyclotomic_poly(N).coeffs
    width = len(modulus) - 1
    _, rem = _divmod_monic(coeffs, modulus)
    return tuple(rem) + (0,) * (width - len(rem))


@dataclass(frozen=True)
class CycloElement:
    """Residue class in Z[X]/(Phi_N); X stands for zeta_N = exp(2 pi i / N)."""

    conductor: int
    coeffs: Tuple[int, ...]

    @classmethod
    def from_poly(cls, N: int, coeffs: Sequence[int]) -> CycloElement:
        return cls(N, _reduce(N, coeffs))

    @classmethod
    def constant(cls, N: int, k: int) -> CycloElement:
        return cls.from_poly(N, (k,))

    @classmethod
    def zeta_power(cls, N: int, e: int) -> CycloElement:
        e %= N
        return cls.from_poly(N, (0,) * e + (1,))

    def _check(self, other: CycloElement):
        if self.conductor != other.conductor:
            raise DomainError(f"conductor mismatch: {self.conductor} vs {other.conductor}")

    def __add__(self, other: CycloElement) -> CycloElement:
        self._check(other)
        return CycloElement(self.conductor, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> CycloElement:
        return CycloElement(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other: CycloElement) -> CycloElement:
        return self + (-other)

    def __mul__(self, other: CycloElement) -> CycloElement:
        self._check(other)
        product = [0] * max(1, 2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        product[i + j] += a * b
        return CycloElement.from_poly(self.conductor, product)

    def is_constant(self) -> bool:
        return not any(self.coeffs[1:])

    def equals_int(self, k: int) -> bool:
        return self.coeffs[0] == k and self.is_constant()


def _lambda(N: int, e: int) -> CycloElement:
    """1 + zeta^e + zeta^-e for any integer e; e = 0 (mod N) gives 3."""
    e %= N
    return CycloElement.from_poly(N, _monomials([0, e, (N - e) % N]))


def _monomials(powers: Sequence[int]) -> list:
    """Coefficient list of the sum of X^k over `powers`, repeats counted."""
    out = [0] * (max(powers) + 1)
    for power in powers:
        out[power] += 1
    return out


def lambda_element(N: int, p: int) -> CycloElement:
    """1 + zeta_N^p + zeta_N^-p, i.e. 1 + 2 cos(2 pi p / N)."""
    if not isinstance(N, int) or N < 2 or not 1 <= p < N:
        raise DomainError(f"lambda_element needs 1 <= p < N, got N={N}, p={p}")
    return _lambda(N, p)


def lambda_value(N: int, e: int) -> float:
    return 1.0 + 2.0 * math.cos(2.0 * math.pi * e / N)


def product_of_lambdas(N: int, exps: Iterable[int]) -> CycloElement:
    acc = CycloElement.constant(N, 1)
    for e in exps:
        acc = acc * _lambda(N, e)
    return acc


def product_equals(N: int, exps: Sequence[int], target: int) -> bool:
    """Whether prod(1 + zeta^p + zeta^-p) over `exps` is exactly the integer `target`."""
    if not exps:
        raise DomainError("product_equals needs at least one exponent")
    for p in exps:
        if not 1 <= p <= N - 1:
            raise DomainError(f"exponent {p} outside [1, {N - 1}]")
    return product_of_lambdas(N, exps).equals_int(target)


def cosine_sum_equals(N: int, exps: Sequence[int], target: int) -> bool:
    """Whether sum(zeta^e + zeta^-e) over `exps` is exactly `target` (sum of 2 cos terms)."""
    if not exps:
        raise DomainError("cosine_sum_equals needs at least one exponent")
    acc = CycloElement.constant(N, -target)
    for e in exps:
        e %= N
        acc = acc + CycloElement.from_poly(N, _monomials([e, (N - e) % N]))
    return acc.equals_int(0)


# ----------------------------------------------------------------------------------------
# 2-adic valuations of the closed-form lemma
# ----------------------------------------------------------------------------------------


@dataclass(frozen=True)
class Valuation:
    """A valuation value: a non-negative rational, or infinity when `value` is None."""

    value: Optional[Fraction] = None

    @classmethod
    def infinite(cls) -> Valuation:
        return cls(None)

    @classmethod
    def finite(cls, q) -> Valuation:
        q = Fraction(q)
        if q < 0:
            raise DomainError(f"valuation values are non-negative, got {q}")
        return cls(q)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other: Valuation) -> Valuation:
        if self.is_infinite or other.is_infinite:
            return Valuation.infinite()
        return Valuation(self.value + other.value)

    def __str__(self):
        if self.is_infinite:
            return "inf"
        return str(self.value)


def _power_of_two_exponent(n: int) -> Optional[int]:
    """k if n == 2^k (k >= 0), else None."""
    if n < 1 or n & (n - 1):
        return None
    return n.bit_length() - 1


def valuation_eta(m: int) -> Valuation:
    """v(eta + 1 + eta^-1) for eta a primitive m-th root of unity."""
    if m < 1:
        raise DomainError(f"valuation_eta needs m >= 1, got {m}")
    if m == 3:
        return Valuation.infinite()
    if m % 3 == 0:
        j = _power_of_two_exponent(m // 3)
        if j is not None and j >= 1:
            return Valuation.finite(Fraction(1, 2 ** (j - 1)))
    return Valuation.finite(0)


def valuation_omega(l: int) -> Valuation:  # noqa: E741
    """v(omega - 1) for omega a primitive l-th root of unity."""
    if l < 1:
        raise DomainError(f"valuation_omega needs l >= 1, got {l}")
    if l == 1:
        return Valuation.infinite()
    j = _power_of_two_exponent(l)
    if j is not None and j >= 1:
        return Valuation.finite(Fraction(1, 2 ** (j - 1)))
    return Valuation.finite(0)


# ----------------------------------------------------------------------------------------
# Eisenstein integers and g(m)
# ----------------------------------------------------------------------------------------


@dataclass(frozen=True)
class EisensteinInt:
    """a + b*w with w a primitive cube root of unity (w^2 = -1 - w)."""

    a: int
    b: int = 0

    def __add__(self, other):
        other = _as_eisenstein(other)
        return EisensteinInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __mul__(self, other):
        other = _as_eisenstein(other)
        a, b, c, d = self.a, self.b, other.a, other.b
        return EisensteinInt(a * c - b * d, a * d + b * c - b * d)

    __rmul__ = __mul__

    def __neg__(self):
        return EisensteinInt(-self.a, -self.b)

    @classmethod
    def omega_power(cls, k: int) -> EisensteinInt:
        return (cls(1, 0), cls(0, 1), cls(-1, -1))[k % 3]


def _as_eisenstein(x) -> EisensteinInt:
    return x if isinstance(x, EisensteinInt) else EisensteinInt(int(x), 0)


def g(m: int) -> int:
    """Norm of 1 + 2cos(2 pi / m): Phi_m(w) * w^(-phi(m)/2) * (-1)^(phi(m)/2)."""
    if not isinstance(m, int) or m < 4:
        raise DomainError(f"g(m) is defined here for m >= 4, got {m!r}")
    half = totient(m) // 2
    value = cyclotomic_poly(m)(EisensteinInt(0, 1)) * EisensteinInt.omega_power(-half)
    if half % 2:
        value = -value
    if value.b != 0:
        raise InvariantError(f"g({m}) evaluated to non-integer {value.a} + {value.b}w")
    return value.a


def norm_product(m: int) -> int:
    """g(m) straight from its definition, as an exact product in Z[X]/(Phi_m)."""
    if not isinstance(m, int) or m < 4:
        raise DomainError(f"norm_product is defined here for m >= 4, got {m!r}")
    exps = [a for a in range(1, (m + 1) // 2) if 2 * a < m and math.gcd(a, m) == 1]
    element = product_of_lambdas(m, exps)
    if not element.is_constant():
        raise InvariantError(f"norm product for m={m} is not an integer")
    return element.coeffs[0]
