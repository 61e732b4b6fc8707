"""Exact local computations in SL2(Z/q) for squarefree q.

Group elements for prime moduli are enumerated in full (numpy arrays of
entries), and every density is an exact :class:`fractions.Fraction` built
from integer counts.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import factorize, is_prime, is_squarefree_modulus, primes_below

ENUM_LIMIT = 60
CORRELATION_LIMIT = 40


@dataclass(frozen=True, slots=True)
class SL2Mod:
    q: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if (self.a * self.d - self.b * self.c - 1) % self.q:
            raise ValueError(f"({self.a},{self.b},{self.c},{self.d}) is not in SL2(Z/{self.q})")

    @classmethod
    def make(cls, q, a, b, c, d) -> SL2Mod:
        return cls(q, a % q, b % q, c % q, d % q)

    @classmethod
    def identity(cls, q) -> SL2Mod:
        return cls(q, 1 % q, 0, 0, 1 % q)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __matmul__(self, o: SL2Mod) -> SL2Mod:
        if o.q != self.q:
            raise ValueError("moduli differ")
        return SL2Mod.make(
            self.q,
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> SL2Mod:
        return SL2Mod.make(self.q, self.d, -self.b, -self.c, self.a)

    def transpose(self) -> SL2Mod:
        return SL2Mod(self.q, self.a, self.c, self.b, self.d)


@dataclass(frozen=True, slots=True)
class DensityValue:
    value: Fraction
    modulus: int
    tag: str

    def __float__(self):
        return float(self.value)


def _prime_factors_sqfree(q: int) -> list[int]:
    if not is_squarefree_modulus(q):
        raise ValueError(f"modulus {q} is not squarefree")
    return factorize(q).primes() if q > 1 else []


def _require_prime(p: int, limit: int | None = None, odd: bool = False):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if odd and p == 2:
        raise ValueError("p must be odd")
    if limit is not None and p > limit:
        raise ValueError(f"p = {p} exceeds the exhaustive limit {limit}")


# --------------------------------------------------------------------------
# the group


def sl2_size(q: int) -> int:
    """``|SL2(Z/q)|`` for squarefree ``q``."""
    out = 1
    for p in _prime_factors_sqfree(q):
        out *= p * (p * p - 1)
    return out


@lru_cache(maxsize=64)
def sl2_arrays(p: int) -> np.ndarray:
    """All of SL2(F_p) as an ``(n, 4)`` int64 array, rows sorted lexicographically."""
    _require_prime(p, ENUM_LIMIT)
    r = np.arange(p, dtype=np.int64)
    inv = np.array([0] + [pow(int(x), -1, p) for x in range(1, p)], dtype=np.int64)
    # a != 0: b, c free, d = (1 + b c) / a
    A, B, C = np.meshgrid(r[1:], r, r, indexing="ij")
    A, B, C = A.ravel(), B.ravel(), C.ravel()
    D = (1 + B * C) % p * inv[A] % p
    part1 = np.stack([A, B, C, D], axis=1)
    # a = 0: b != 0, c = -1/b, d free
    B0, D0 = np.meshgrid(r[1:], r, indexing="ij")
    B0, D0 = B0.ravel(), D0.ravel()
    C0 = (-inv[B0]) % p
    part0 = np.stack([np.zeros_like(B0), B0, C0, D0], axis=1)
    out = np.concatenate([part0, part1])
    order = np.lexsort(out.T[::-1])
    out = out[order]
    out.setflags(write=False)
    return out


def sl2_enumerate(p: int) -> list[SL2Mod]:
    return [SL2Mod(p, *map(int, row)) for row in sl2_arrays(p)]


def _frob_of_products(G: np.ndarray, w: SL2Mod, p: int) -> np.ndarray:
    """``frob2(g w) mod p`` for every row ``g`` of ``G``."""
    a, b, c, d = G[:, 0], G[:, 1], G[:, 2], G[:, 3]
    pa = a * w.a + b * w.c
    pb = a * w.b + b * w.d
    pc = c * w.a + d * w.c
    pd = c * w.b + d * w.d
    return (pa * pa + pb * pb + pc * pc + pd * pd) % p


# --------------------------------------------------------------------------
# densities


def count_x2y2(p: int, l: int) -> int:
    """``#{(x, y) in F_p^2 : x^2 + y^2 = l}``."""
    _require_prime(p, odd=True)
    sq = np.bincount(np.arange(p, dtype=np.int64) ** 2 % p, minlength=p)
    # x^2 = s and y^2 = l - s
    s = np.arange(p)
    return int(np.sum(sq[s] * sq[(l - s) % p]))


def _rho_prime(p: int) -> Fraction:
    if p == 2:
        return Fraction(1, 3)
    if p % 4 == 1:
        return Fraction(2 * p - 1, p * (p + 1))
    return Fraction(1, p * (p - 1))


def rho(q: int) -> DensityValue:
    """Share of SL2(Z/q) with ``frob2 = 2 eps``; independent of the sign."""
    v = Fraction(1)
    for p in _prime_factors_sqfree(q):
        v *= _rho_prime(p)
    return DensityValue(v, q, "rho")


def _check_eps(eps):
    if eps not in (1, -1):
        raise ValueError(f"eps must be +1 or -1, got {eps!r}")


def rho_bruteforce(p: int, eps: int) -> DensityValue:
    _check_eps(eps)
    G = sl2_arrays(p)
    f = (G * G).sum(axis=1) % p
    hits = int(np.count_nonzero(f == (2 * eps) % p))
    return DensityValue(Fraction(hits, len(G)), p, "rho")


def xi(q: int, n: int) -> DensityValue:
    """``prod_{p | q} (1[p | n] - rho(p))``."""
    v = Fraction(1)
    for p in _prime_factors_sqfree(q):
        v *= (1 if n % p == 0 else 0) - _rho_prime(p)
    return DensityValue(v, q, "xi")


def xi_mean(p: int, omega: SL2Mod, eps: int) -> DensityValue:
    """Average of ``Xi(p; frob2(g omega) - 2 eps)`` over all ``g`` in SL2(p)."""
    _check_eps(eps)
    G = sl2_arrays(p)
    hits = int(np.count_nonzero(_frob_of_products(G, omega, p) == (2 * eps) % p))
    return DensityValue(Fraction(hits, len(G)) - _rho_prime(p), p, "xi_mean")


def beta(q: int) -> DensityValue:
    """Local sieve density; ``2 rho(p)`` at odd primes and ``rho(2)`` at 2."""
    v = Fraction(1)
    for p in _prime_factors_sqfree(q):
        v *= _rho_prime(p) * (1 if p == 2 else 2)
    return DensityValue(v, q, "beta")


def sieve_product(w: float, z: float) -> tuple[float, float]:
    """``prod_{w <= p < z} (1 - beta(p))^-1`` and its ratio to ``(log z / log w)^2``."""
    if not 2 <= w < z:
        raise ValueError("need 2 <= w < z")
    prod = Fraction(1)
    for p in primes_below(math.ceil(z)):
        if w <= p < z:
            prod /= 1 - beta(p).value
    value = float(prod)
    return value, value / (math.log(z) / math.log(w)) ** 2


# --------------------------------------------------------------------------
# PO2 and the correlation sum


@lru_cache(maxsize=64)
def _po2_arrays(p: int) -> np.ndarray:
    _require_prime(p, ENUM_LIMIT, odd=True)
    G = sl2_arrays(p)
    a, b, c, d = G[:, 0], G[:, 1], G[:, 2], G[:, 3]
    # k^T k = [[a^2 + c^2, ab + cd], [ab + cd, b^2 + d^2]]
    u, v, w = (a * a + c * c) % p, (a * b + c * d) % p, (b * b + d * d) % p
    keep = (v == 0) & (u == w) & ((u == 1) | (u == p - 1))
    return G[keep]


def po2(p: int) -> list[SL2Mod]:
    """``{k in SL2(p) : k^T k = +-I}``."""
    return [SL2Mod(p, *map(int, row)) for row in _po2_arrays(p)]


def in_po2(k: SL2Mod) -> bool:
    a, b, c, d = k.entries()
    p = k.q
    u, v, w = (a * a + c * c) % p, (a * b + c * d) % p, (b * b + d * d) % p
    return v == 0 and u == w and u in (1, p - 1)


def key_correlation(p: int, omega: SL2Mod, omega2: SL2Mod, eps: int, eps2: int) -> DensityValue:
    """Mean over SL2(p) of ``Xi(p; frob2(g w) - 2e) Xi(p; frob2(g w') - 2e')``."""
    _require_prime(p, CORRELATION_LIMIT, odd=True)
    _check_eps(eps)
    _check_eps(eps2)
    G = sl2_arrays(p)
    n = len(G)
    hit1 = _frob_of_products(G, omega, p) == (2 * eps) % p
    hit2 = _frob_of_products(G, omega2, p) == (2 * eps2) % p
    r = _rho_prime(p)
    n1, n2 = int(hit1.sum()), int(hit2.sum())
    n12 = int((hit1 & hit2).sum())
    # E[(1_A - r)(1_B - r)] = |AB|/n - r(|A| + |B|)/n + r^2
    value = Fraction(n12, n) - r * Fraction(n1 + n2, n) + r * r
    return DensityValue(value, p, "correlation")


def correlation_bound(p: int, omega: SL2Mod, omega2: SL2Mod) -> Fraction:
    """``3/p`` on a shared PO2 coset, ``10/p^2`` otherwise."""
    if in_po2(omega.inverse() @ omega2):
        return Fraction(3, p)
    return Fraction(10, p * p)


def random_element(p: int, rng: random.Random) -> SL2Mod:
    G = sl2_arrays(p)
    return SL2Mod(p, *map(int, G[rng.randrange(len(G))]))


def sample_correlations(p: int, samples: int, seed: int = 0, coset_share: float = 0.5) -> list[dict]:
    """Sampled ``(w, w', e, e')`` with their correlation and bound.

    About ``coset_share`` of the pairs are drawn on a common PO2 coset, since
    uniform pairs almost never land there.
    """
    rng = random.Random(seed * 1_000_003 + p)
    ks = po2(p)
    rows = []
    for _ in range(samples):
        w = random_element(p, rng)
        if rng.random() < coset_share:
            w2 = w @ ks[rng.randrange(len(ks))]
        else:
            w2 = random_element(p, rng)
        e, e2 = rng.choice((1, -1)), rng.choice((1, -1))
        val = key_correlation(p, w, w2, e, e2).value
        bound = correlation_bound(p, w, w2)
        rows.append({
            "p": p,
            "omega": w.entries(),
            "omega2": w2.entries(),
            "eps": e,
            "eps2": e2,
            "same_coset": bound == Fraction(3, p),
            "value": val,
            "bound": bound,
            "pass": abs(val) <= bound,
        })
    return rows


# --------------------------------------------------------------------------
# verification report


def local_density_report(p_lo: int, p_hi: int, seed: int = 0, xi_samples: int = 20) -> list[dict]:
    """Rows ``(p, statement, expected, computed, pass)`` over primes in a range."""
    rng = random.Random(seed)
    rows = []

    def add(p, statement, expected, computed):
        rows.append({"p": p, "statement": statement, "expected": str(expected),
                     "computed": str(computed), "pass": expected == computed})

    for p in primes_below(p_hi + 1):
        if p < p_lo:
            continue
        add(p, "group_order", p * (p * p - 1), len(sl2_arrays(p)))
        for eps in (1, -1):
            add(p, f"rho_eps{eps:+d}", rho(p).value, rho_bruteforce(p, eps).value)
        if p > 2:
            zero = 2 * p - 1 if p % 4 == 1 else 1
            nonzero = p - 1 if p % 4 == 1 else p + 1
            add(p, "sumsq_0", zero, count_x2y2(p, 0))
            add(p, "sumsq_nonzero", [nonzero], sorted({count_x2y2(p, l) for l in range(1, p)}))
            add(p, "sumsq_total", p * p, sum(count_x2y2(p, l) for l in range(p)))
        for _ in range(xi_samples):
            w, eps = random_element(p, rng), rng.choice((1, -1))
            add(p, f"xi_mean{w.entries()}{eps:+d}", Fraction(0), xi_mean(p, w, eps).value)
    return rows
