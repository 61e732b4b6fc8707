"""Exact integer and 2x2 matrix arithmetic.

Everything here works on Python integers, so entries and operands can be as
large as needed.  Rational values are carried as :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

import numpy as np

RationalExact = Fraction


@dataclass(frozen=True, slots=True)
class Mat2:
    """Integer matrix ``[[a, b], [c, d]]`` of determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")

    @classmethod
    def _relaxed(cls, a, b, c, d):
        # Used for the det -1 continued-fraction generators only.
        m = object.__new__(cls)
        object.__setattr__(m, "a", a)
        object.__setattr__(m, "b", b)
        object.__setattr__(m, "c", c)
        object.__setattr__(m, "d", d)
        return m

    @classmethod
    def identity(cls) -> Mat2:
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows) -> Mat2:
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries())

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d

    def transpose(self) -> Mat2:
        return Mat2._relaxed(self.a, self.c, self.b, self.d)

    def inverse(self) -> Mat2:
        det = self.det
        if det not in (1, -1):
            raise ValueError("matrix is not unimodular")
        return Mat2._relaxed(det * self.d, -det * self.b, -det * self.c, det * self.a)

    def __neg__(self) -> Mat2:
        return Mat2._relaxed(-self.a, -self.b, -self.c, -self.d)

    def __matmul__(self, other: Mat2) -> Mat2:
        return mat_mul(self, other)


def mat_mul(x: Mat2, y: Mat2) -> Mat2:
    return Mat2._relaxed(
        x.a * y.a + x.b * y.c,
        x.a * y.b + x.b * y.d,
        x.c * y.a + x.d * y.c,
        x.c * y.b + x.d * y.d,
    )


def gram(g: Mat2) -> Mat2:
    """Return ``transpose(g) @ g``."""
    a, b, c, d = g.a, g.b, g.c, g.d
    off = a * b + c * d
    return Mat2._relaxed(a * a + c * c, off, off, b * b + d * d)


def frob2(g: Mat2) -> int:
    """Squared Frobenius norm ``a^2 + b^2 + c^2 + d^2``."""
    return g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d


# --------------------------------------------------------------------------
# primality and factorization

_SMALL_LIMIT = 1000
# Deterministic Miller-Rabin witness set, valid below 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_DETERMINISTIC_BOUND = 3317044064679887385961981


def primes_below(n: int) -> list[int]:
    if n <= 2:
        return []
    sieve = np.ones(n, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve).tolist()


_SMALL_PRIMES = primes_below(_SMALL_LIMIT)


def _strong_probable_prime(n, base):
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a, n):
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n):
    # Selfridge parameters: first D in 5, -7, 9, -11, ... with (D/n) = -1.
    if math.isqrt(n) ** 2 == n:
        return False
    D = 5
    while _jacobi(D, n) != -1:
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    inv2 = (n + 1) // 2

    # binary ladder for U_d, V_d
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V, Qk = U * V % n, (V * V - 2 * Qk) % n, Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_prime(n: int) -> bool:
    """Deterministic primality test.

    Exact below 3.3e24 (fixed Miller-Rabin witnesses); above that the
    Baillie-PSW combination is used, which has no known counterexample.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _SMALL_LIMIT * _SMALL_LIMIT:
        return True
    if n < _MR_DETERMINISTIC_BOUND:
        return all(_strong_probable_prime(n, b) for b in _MR_BASES)
    return _strong_probable_prime(n, 2) and _strong_lucas_probable_prime(n)


def _brent_rho(n):
    # Deterministic: walks c = 1, 2, ... until a proper factor appears.
    if n % 2 == 0:
        return 2
    for c in range(1, 1000):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


@dataclass(frozen=True, slots=True)
class FactorMultiset:
    """Prime factorization as ``((p1, e1), (p2, e2), ...)`` with p1 < p2 < ..."""

    pairs: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.pairs)

    def merge(self, other: FactorMultiset) -> FactorMultiset:
        exps: dict[int, int] = dict(self.pairs)
        for p, e in other.pairs:
            exps[p] = exps.get(p, 0) + e
        return FactorMultiset(tuple(sorted(exps.items())))

    def __str__(self):
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.pairs) or "1"


def _factor_into(n, exps):
    if n == 1:
        return
    if is_prime(n):
        exps[n] = exps.get(n, 0) + 1
        return
    d = _brent_rho(n)
    _factor_into(d, exps)
    _factor_into(n // d, exps)


def factorize(n: int) -> FactorMultiset:
    """Complete prime factorization of a positive integer."""
    if n <= 0:
        raise ValueError(f"cannot factor non-positive integer {n}")
    exps: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        while n % p == 0:
            n //= p
            exps[p] = exps.get(p, 0) + 1
    if n > 1:
        if n < _SMALL_LIMIT * _SMALL_LIMIT:
            exps[n] = exps.get(n, 0) + 1
        else:
            _factor_into(n, exps)
    return FactorMultiset(tuple(sorted(exps.items())))


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    return factorize(abs(n)).is_squarefree()


def is_squarefree_disc(t: int) -> bool:
    """Whether ``t^2 - 4`` is squarefree, for ``t >= 3``."""
    if t < 3:
        raise ValueError("t must be at least 3")
    if t % 2 == 0:
        return False
    # t odd: t-2 and t+2 are odd and differ by 4, hence coprime.
    return is_squarefree(t - 2) and is_squarefree(t + 2)


def disc_factorization(t: int) -> FactorMultiset:
    """Factorization of ``t^2 - 4`` assembled from ``t - 2`` and ``t + 2``."""
    if t < 3:
        raise ValueError("t must be at least 3")
    return factorize(t - 2).merge(factorize(t + 2))


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_fundamental_disc(D: int) -> bool:
    if D <= 0 or is_square(D):
        raise ValueError(f"{D} is not a positive non-square discriminant")
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def is_squarefree_modulus(q: int) -> bool:
    return q >= 1 and (q == 1 or is_squarefree(q))


def squarefree_upto(limit: int) -> list[int]:
    """Squarefree integers ``1 <= q <= limit``."""
    flags = np.ones(limit + 1, dtype=bool)
    flags[0] = False
    for p in range(2, math.isqrt(limit) + 1):
        flags[p * p :: p * p] = False
    return np.flatnonzero(flags).tolist()


def prime_divisors(q: int) -> list[int]:
    return factorize(q).primes() if q > 1 else []


@lru_cache(maxsize=8)
def smallest_prime_factors(limit: int) -> np.ndarray:
    """Table ``spf[n]`` of least prime factors for ``n < limit``."""
    spf = np.zeros(limit, dtype=np.int64)
    for p in range(2, limit):
        if spf[p] == 0:
            spf[p] = p
            if p * p < limit:
                block = spf[p * p :: p]
                block[block == 0] = p
    return spf


def factor_with_table(n: int, spf: np.ndarray) -> list[tuple[int, int]]:
    if n >= len(spf):
        return list(factorize(n).pairs)
    out: list[tuple[int, int]] = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def divisors_from_pairs(pairs) -> list[int]:
    divs = [1]
    for p, e in pairs:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return divs


def divisors(n: int, spf: np.ndarray | None = None) -> list[int]:
    if n <= 0:
        raise ValueError("n must be positive")
    pairs = factor_with_table(n, spf) if spf is not None else factorize(n).pairs
    return sorted(divisors_from_pairs(pairs))
