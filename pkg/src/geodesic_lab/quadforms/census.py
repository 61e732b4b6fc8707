"""Counting primitive hyperbolic classes of PSL2(Z) by trace.

Three independent routes:

* form side: proper class numbers of every content stratum of ``t^2 - 4``,
  minus the classes that are proper powers;
* reciprocal classes through their symmetric representatives (a class is
  reciprocal exactly when it contains a symmetric matrix);
* matrix side: brute-force enumeration of SL2(Z) elements, canonicalized by
  reduction cycle, with primitivity decided by explicit root extraction.
"""

from __future__ import annotations

import math

import numpy as np

from ..arith import Mat2, disc_factorization, divisors, divisors_from_pairs, smallest_prime_factors
from .._shard import shard_map
from .forms import CycleCache, classes_of_disc, count_cycles


def power_traces(t0: int, limit: int) -> list[int]:
    """Traces of ``g^k`` for ``k >= 2`` below ``limit``, given ``trace(g) = t0``."""
    out = []
    prev, cur = t0, t0 * t0 - 2
    while cur < limit:
        out.append(cur)
        prev, cur = cur, t0 * cur - prev
    return out


def _strata(t: int) -> list[int]:
    """Discriminants ``(t^2 - 4) / g^2`` over the admissible contents ``g``."""
    D = t * t - 4
    square_part = [(p, e // 2) for p, e in disc_factorization(t) if e >= 2]
    out = []
    for g in divisors_from_pairs(square_part):
        Dg = D // (g * g)
        if Dg % 4 in (0, 1):
            out.append(Dg)
    return sorted(out)


def classes_of_trace(t: int, spf=None) -> int:
    """All hyperbolic classes of trace ``t`` (primitive or not), form side."""
    return sum(count_cycles(Dg, primitive_only=True, spf=spf) for Dg in _strata(t))


def _spf_for(X):
    return smallest_prime_factors(max(16, (X * X) // 4 + 2))


def _class_chunk(args):
    ts, X = args
    spf = _spf_for(X)
    return [classes_of_trace(t, spf) for t in ts]


def _chunks(X, shards):
    ts = list(range(3, X))
    k = max(1, shards)
    # interleave so shards carry similar load; merged back by trace
    return [ts[i::k] for i in range(k)]


def _merge(chunks, parts):
    out = {}
    for ts, vals in zip(chunks, parts):
        out.update(zip(ts, vals))
    return dict(sorted(out.items()))


def remove_powers(totals: dict[int, int]) -> dict[int, int]:
    """Primitive counts from totals: peel off ``k``-th powers of primitive classes.

    A primitive class of trace ``t0`` contributes exactly one class at each
    trace ``V_k(t0)``, ``k >= 2`` (roots are unique in PSL2(Z)).
    """
    prim = dict(totals)
    limit = max(prim) + 1 if prim else 0
    for t0 in sorted(prim):
        for t in power_traces(t0, limit):
            if t in prim:
                prim[t] -= prim[t0]
    return prim


def primitive_counts_all(X: int, shards: int = 1) -> dict[int, int]:
    chunks = [c for c in _chunks(X, shards) if c]
    parts = shard_map(_class_chunk, [(c, X) for c in chunks], shards)
    return remove_powers(_merge(chunks, parts))


def census_all(X: int, shards: int = 1) -> int:
    """Primitive hyperbolic classes (closed geodesics) with trace in ``[3, X)``."""
    if X < 4:
        raise ValueError("X must be at least 4")
    return sum(primitive_counts_all(X, shards).values())


# --------------------------------------------------------------------------
# reciprocal classes


def symmetric_matrices(t: int) -> list[tuple[int, int, int]]:
    """``(a, b, d)`` with ``[[a, b], [b, d]]`` in SL2(Z) and trace ``t``."""
    a = np.arange(1, t, dtype=np.int64)
    m = a * (t - a) - 1
    r = np.rint(np.sqrt(np.maximum(m, 0).astype(np.float64))).astype(np.int64)
    # correct float rounding at the edges
    r = np.where(r * r > m, r - 1, r)
    r = np.where((r + 1) * (r + 1) <= m, r + 1, r)
    hit = (r * r == m) & (m >= 0)
    out = []
    for av, bv in zip(a[hit].tolist(), r[hit].tolist()):
        out.append((av, bv, t - av))
        if bv:
            out.append((av, -bv, t - av))
    return out


def reciprocal_classes_of_trace(t: int) -> int:
    """All reciprocal classes of trace ``t``, counted by their symmetric members."""
    cache = CycleCache(t * t - 4)
    keys = {cache.key((b, d - a, -b)) for a, b, d in symmetric_matrices(t)}
    return len(keys)


def _recip_chunk(args):
    ts, _ = args
    return [reciprocal_classes_of_trace(t) for t in ts]


def primitive_counts_reciprocal(X: int, shards: int = 1) -> dict[int, int]:
    chunks = [c for c in _chunks(X, shards) if c]
    parts = shard_map(_recip_chunk, [(c, X) for c in chunks], shards)
    # Roots of a reciprocal class are reciprocal, so the same peeling applies.
    return remove_powers(_merge(chunks, parts))


def census_reciprocal(X: int, shards: int = 1) -> int:
    """Primitive reciprocal classes with trace in ``[3, X)``."""
    if X < 4:
        raise ValueError("X must be at least 4")
    return sum(primitive_counts_reciprocal(X, shards).values())


def reciprocal_classes_form_side(t: int, spf=None) -> int:
    """Reciprocal classes of trace ``t`` by testing every cycle for ``f ~ -f``."""
    count = 0
    for Dg in _strata(t):
        g = math.isqrt((t * t - 4) // Dg)
        cache = CycleCache(t * t - 4)
        for c in classes_of_disc(Dg, primitive_only=True, spf=spf):
            k = cache.key(tuple(g * x for x in c.key.astuple()))
            count += cache.is_reciprocal_key(k)
    return count


# --------------------------------------------------------------------------
# matrix side


def _chebyshev_u(t0, k):
    # U_{k-1}(t0), U_{k-2}(t0) for g^k = U_{k-1} g - U_{k-2} I
    u_prev, u = 0, 1
    for _ in range(k - 1):
        u_prev, u = u, t0 * u - u_prev
    return u, u_prev


def _lucas_v(t0, k):
    prev, cur = 2, t0
    for _ in range(k - 1):
        prev, cur = cur, t0 * cur - prev
    return cur


def proper_root(g: Mat2) -> tuple[Mat2, int] | None:
    """A pair ``(h, k)`` with ``h^k = +-g`` and ``k >= 2``, if one exists."""
    a, b, c, d = g.entries()
    t = a + d
    if t < 0:
        a, b, c, d, t = -a, -b, -c, -d, -t
    k = 2
    while _lucas_v(3, k) <= t:
        t0 = 3
        while (v := _lucas_v(t0, k)) <= t:
            if v == t:
                u1, u0 = _chebyshev_u(t0, k)
                ea, ed = a + u0, d + u0
                if ea % u1 == b % u1 == c % u1 == ed % u1 == 0:
                    h = (ea // u1, b // u1, c // u1, ed // u1)
                    if h[0] * h[3] - h[1] * h[2] == 1:
                        return Mat2(*h), k
            t0 += 1
        k += 1
    return None


def sl2z_with_trace(t: int, bound: int, spf=None) -> list[tuple[int, int, int, int]]:
    """All ``(a, b, c, d)`` in SL2(Z) with ``a + d = t`` and ``frob2 < bound``."""
    out = []
    r = math.isqrt(bound)
    for a in range(-r, r + 1):
        d = t - a
        rest = bound - a * a - d * d
        if rest <= 0:
            continue
        m = a * d - 1
        if m == 0:
            lim = math.isqrt(rest - 1) if rest > 0 else -1
            for x in range(-lim, lim + 1):
                out.append((a, 0, x, d))
                if x:
                    out.append((a, x, 0, d))
            continue
        am = abs(m)
        for b in divisors(am, spf):
            c = m // b
            if b * b + c * c < rest:
                out.append((a, b, c, d))
                out.append((a, -b, -c, d))
    return sorted(out)


def _matrix_chunk(args):
    ts, bound = args
    spf = smallest_prime_factors(bound // 2 + 2)
    out = []
    for t in ts:
        cache = CycleCache(t * t - 4)
        primitive: dict = {}
        for a, b, c, d in sl2z_with_trace(t, bound, spf):
            k = cache.key((c, d - a, -b))
            if k not in primitive:
                primitive[k] = proper_root(Mat2(a, b, c, d)) is None
        prim_keys = [k for k, ok in primitive.items() if ok]
        recip = sum(cache.is_reciprocal_key(k) for k in prim_keys)
        out.append((len(prim_keys), recip))
    return out


def matrix_side_counts(X: int, shards: int = 1) -> dict[int, tuple[int, int]]:
    """Per trace ``t < X``: (primitive classes, primitive reciprocal classes).

    Every class of trace ``t`` has a reduced representative with
    ``frob2 < 3 t^2``, so enumerating SL2(Z) below ``3 (X - 1)^2`` sees all of
    them.
    """
    bound = 3 * (X - 1) ** 2
    chunks = [c for c in _chunks(X, shards) if c]
    parts = shard_map(_matrix_chunk, [(c, bound) for c in chunks], shards)
    return _merge(chunks, parts)


def census_table(X: int, shards: int = 1) -> list[dict]:
    """Per-trace rows of the form-side and symmetric-matrix counts."""
    all_counts = primitive_counts_all(X, shards)
    rec_counts = primitive_counts_reciprocal(X, shards)
    rows = []
    for t in range(3, X):
        rows.append({"trace": t, "disc": t * t - 4, "primitive": all_counts[t], "reciprocal": rec_counts[t]})
    return rows


def census_summary(X: int, shards: int = 1) -> dict:
    rec = census_reciprocal(X, shards)
    out = {"X": X, "reciprocal": rec, "reciprocal_ratio": rec / X}
    out["reciprocal_deviation"] = abs(rec / X - 3 / 8) / (3 / 8)
    return out


def prime_geodesic_ratio(X: int, count: int) -> float:
    """``count * 2 log X / X^2``; tends to 1 by the prime geodesic theorem."""
    return count * 2 * math.log(X) / X**2
