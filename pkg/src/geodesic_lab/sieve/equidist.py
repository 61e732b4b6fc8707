"""Empirical equidistribution of semigroup slices and SL2(Z) balls modulo q."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from ..arith import divisors, is_squarefree_modulus, smallest_prime_factors
from ..modp import sl2_size
from ..semigroup import BallSlice

ALEPH_MODULUS_LIMIT = 30
BALL_MODULUS_LIMIT = 12
BALL_RADIUS_LIMIT = 300


@dataclass(frozen=True)
class Discrepancy:
    q: int
    size: int
    cosets_hit: int
    group_order: int
    max_normalized: float

    @property
    def surjective(self) -> bool:
        return self.cosets_hit == self.group_order


def coset_discrepancy(entries, q: int) -> Discrepancy:
    """Max over SL2(q) of ``|count - mean| / mean`` for integer matrices reduced mod q."""
    if not is_squarefree_modulus(q) or q < 2:
        raise ValueError(f"modulus {q} must be squarefree and >= 2")
    counts = Counter(tuple(x % q for x in e) for e in entries)
    n = sum(counts.values())
    order = sl2_size(q)
    mean = n / order
    if n == 0:
        raise ValueError("no matrices")
    worst = max(abs(c - mean) for c in counts.values())
    if len(counts) < order:
        worst = max(worst, mean)  # a missed coset has count 0
    return Discrepancy(q, n, len(counts), order, worst / mean)


def aleph_discrepancy(aleph: BallSlice, q: int) -> Discrepancy:
    if q > ALEPH_MODULUS_LIMIT:
        raise ValueError(f"q = {q} exceeds {ALEPH_MODULUS_LIMIT}")
    return coset_discrepancy((m.entries() for _, m in aleph), q)


def sl2z_ball(X: int) -> list[tuple[int, int, int, int]]:
    """All of SL2(Z) with ``a^2 + b^2 + c^2 + d^2 < X^2``."""
    bound = X * X
    spf = smallest_prime_factors(bound // 2 + 2)
    out = []
    r = math.isqrt(bound - 1)
    for a in range(-r, r + 1):
        rd = math.isqrt(max(bound - 1 - a * a, 0))
        for d in range(-rd, rd + 1):
            rest = bound - a * a - d * d  # need b^2 + c^2 < rest
            m = a * d - 1
            if m == 0:
                lim = math.isqrt(rest - 1)
                out.append((a, 0, 0, d))
                for x in range(1, lim + 1):
                    out.extend([(a, x, 0, d), (a, -x, 0, d), (a, 0, x, d), (a, 0, -x, d)])
                continue
            for b in divisors(abs(m), spf):
                c = m // b
                if b * b + c * c < rest:
                    out.append((a, b, c, d))
                    out.append((a, -b, -c, d))
    return out


def ball_discrepancy(X: int, q: int) -> Discrepancy:
    if q > BALL_MODULUS_LIMIT:
        raise ValueError(f"q = {q} exceeds {BALL_MODULUS_LIMIT}")
    if X > BALL_RADIUS_LIMIT:
        raise ValueError(f"X = {X} exceeds {BALL_RADIUS_LIMIT}")
    return coset_discrepancy(sl2z_ball(X), q)


# --------------------------------------------------------------------------
# multiplicity of frob2 values


def trace_multiplicity(t: int) -> int:
    """``#{g in SL2(Z) : a^2 + b^2 + c^2 + d^2 = t}``.

    Uses ``(a + d)^2 + (b - c)^2 = t + 2`` and ``(a - d)^2 + (b + c)^2 = t - 2``.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if t < 2:
        return 0
    count = 0
    r = math.isqrt(t)
    for a in range(-r, r + 1):
        for d in range(-r, r + 1):
            s = t - a * a - d * d
            if s < 0:
                continue
            m = a * d - 1
            u, v = s + 2 * m, s - 2 * m  # (b + c)^2, (b - c)^2
            if u < 0 or v < 0:
                continue
            su, sv = math.isqrt(u), math.isqrt(v)
            if su * su != u or sv * sv != v or (su + sv) % 2:
                continue
            count += (2 if su else 1) * (2 if sv else 1)
    return count


def multiplicity_scan(t_max: int) -> np.ndarray:
    """``mult[t]`` for ``t <= t_max`` from one ball enumeration."""
    X = math.isqrt(t_max) + 1
    while X * X <= t_max:
        X += 1
    f = np.array([a * a + b * b + c * c + d * d for a, b, c, d in sl2z_ball(X)], dtype=np.int64)
    return np.bincount(f[f <= t_max], minlength=t_max + 1)


def multiplicity_growth(t_max: int, exponent: float = 0.2, t_min: int = 10) -> dict:
    """Running maximum of the multiplicity against ``t^exponent``."""
    mult = multiplicity_scan(t_max)
    ts = np.arange(len(mult))
    sel = ts >= t_min
    ratio = mult[sel] / ts[sel].astype(float) ** exponent
    return {
        "t_max": t_max,
        "max_multiplicity": int(mult.max()),
        "argmax": int(mult.argmax()),
        "exponent": exponent,
        "max_ratio": float(ratio.max()),
        "argmax_ratio": int(ts[sel][ratio.argmax()]),
    }
