"""The continued-fraction semigroup of even words in ``[[a, 1], [1, 0]]``.

Elements are named by their digit words.  A word ``(a1, ..., ak)`` stands for
the product ``g(a1) g(a2) ... g(ak)`` with ``g(a) = [[a, 1], [1, 0]]``; even
length puts the product in SL2(Z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Sequence

import numpy as np

from .arith import Mat2
from ._shard import shard_map

Word = tuple[int, ...]


def generator(a: int) -> Mat2:
    return Mat2._relaxed(a, 1, 1, 0)


def validate_word(w: Sequence[int], alphabet: int | None = None) -> Word:
    w = tuple(int(x) for x in w)
    if len(w) < 2 or len(w) % 2:
        raise ValueError(f"word {w} must have even length >= 2")
    if any(x < 1 for x in w) or (alphabet is not None and any(x > alphabet for x in w)):
        raise ValueError(f"word {w} has digits outside [1, {alphabet}]")
    return w


def _word_entries(w):
    a, b, c, d = 1, 0, 0, 1
    for g in w:
        a, b, c, d = g * a + b, a, g * c + d, c
    return a, b, c, d


def word_to_matrix(w: Sequence[int], alphabet: int | None = None) -> Mat2:
    """Product of the generators along ``w``; the result has determinant 1."""
    w = validate_word(w, alphabet)
    return Mat2(*_word_entries(w))


def bound_from_norm(N) -> int:
    """Smallest integer ``B`` with ``f < N^2  <=>  f < B`` for integers ``f``."""
    return math.ceil(Fraction(N) ** 2)


def _resolve_bound(N, norm_sq):
    if norm_sq is None:
        if N is None:
            raise TypeError("give N or norm_sq")
        norm_sq = bound_from_norm(N)
    return int(norm_sq)


# --------------------------------------------------------------------------
# ball enumeration


def _prefix_tasks(alphabet, shards):
    # Fixed-length prefixes, so shard boundaries are a pure function of
    # (alphabet, shards) and merging in task order stays lexicographic.
    length = 1 if shards <= alphabet else 2
    return [p for p in product(range(1, alphabet + 1), repeat=length)]


def _ball_subtree(args):
    """Records ``(word, (a, b, c, d), f)`` of all even words with the given prefix."""
    alphabet, bound, prefix = args
    out = []
    a, b, c, d = _word_entries(prefix)
    if a * a + b * b + c * c + d * d >= bound:
        return out
    # Pre-order DFS with children pushed in reverse: pops come out in
    # lexicographic order.
    stack = [(tuple(prefix), a, b, c, d)]
    while stack:
        w, a, b, c, d = stack.pop()
        if len(w) % 2 == 0:
            out.append((w, (a, b, c, d), a * a + b * b + c * c + d * d))
        children = []
        for g in range(1, alphabet + 1):
            na, nc = g * a + b, g * c + d
            if na * na + a * a + nc * nc + c * c >= bound:
                # entries grow with g, so no larger digit fits either
                break
            children.append((w + (g,), na, a, nc, c))
        stack.extend(reversed(children))
    return out


def ball_records(alphabet: int, N=None, *, norm_sq=None, shards: int = 1) -> list:
    """Raw records ``(word, entries, f)`` of the ball, lexicographically sorted."""
    if alphabet < 1:
        raise ValueError("alphabet bound must be >= 1")
    bound = _resolve_bound(N, norm_sq)
    tasks = [(alphabet, bound, p) for p in _prefix_tasks(alphabet, shards)]
    out = []
    for part in shard_map(_ball_subtree, tasks, shards):
        out.extend(part)
    return out


def enumerate_ball(alphabet: int, N=None, *, norm_sq=None, shards: int = 1) -> Iterator[tuple[Word, Mat2]]:
    """Even words whose matrix has ``frob2 < N^2``, in lexicographic order.

    Depth-first search; a branch is cut as soon as ``frob2`` reaches the
    bound, which is safe because right-multiplying a nonnegative matrix by a
    generator never decreases ``frob2``.
    """
    for w, ent, _ in ball_records(alphabet, N, norm_sq=norm_sq, shards=shards):
        yield w, Mat2._relaxed(*ent)


def ball_frob_values(alphabet: int, N=None, *, norm_sq=None) -> np.ndarray:
    """Sorted ``frob2`` values over the ball (counting needs nothing else)."""
    bound = _resolve_bound(N, norm_sq)
    out = []
    stack = [(1, 0, 0, 1, 0)]
    while stack:
        a, b, c, d, ln = stack.pop()
        odd = ln % 2 == 1
        for g in range(1, alphabet + 1):
            na, nc = g * a + b, g * c + d
            f = na * na + a * a + nc * nc + c * c
            if f >= bound:
                break
            if odd:
                out.append(f)
            stack.append((na, a, nc, c, ln + 1))
    arr = np.array(out, dtype=object if bound >= 2**62 else np.int64)
    arr.sort()
    return arr


def ball_count(alphabet: int, N=None, *, norm_sq=None) -> int:
    return len(ball_frob_values(alphabet, N, norm_sq=norm_sq))


def format_ball_record(word, entries, f) -> str:
    return "\t".join([",".join(map(str, word)), ",".join(map(str, entries)), str(f)])


# --------------------------------------------------------------------------
# slices and the product set


@dataclass(frozen=True)
class BallSlice:
    alphabet: int
    norm_sq: int
    length: int
    members: tuple[tuple[Word, Mat2], ...] = field(repr=False)

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def words(self) -> list[Word]:
        return [w for w, _ in self.members]

    def entry_array(self) -> np.ndarray:
        """``(len, 4)`` array of matrix entries (object dtype if huge)."""
        big = self.norm_sq >= 2**62
        return np.array([m.entries() for _, m in self.members], dtype=object if big else np.int64).reshape(-1, 4)


def pigeonhole_slice(alphabet: int, N=None, *, norm_sq=None) -> BallSlice:
    """The most populated single-wordlength layer of the ball.

    Ties go to the shorter length.
    """
    bound = _resolve_bound(N, norm_sq)
    by_len: dict[int, list] = {}
    for w, ent, _ in ball_records(alphabet, norm_sq=bound):
        by_len.setdefault(len(w), []).append((w, Mat2._relaxed(*ent)))
    if not by_len:
        raise ValueError(f"ball of alphabet {alphabet} and bound {bound} is empty")
    best = max(sorted(by_len), key=lambda ln: (len(by_len[ln]), -ln))
    return BallSlice(alphabet, bound, best, tuple(by_len[best]))


@dataclass(frozen=True)
class PiSet:
    """Product set ``left * middle * right`` of three fixed-length slices."""

    left: BallSlice
    middle: BallSlice
    right: BallSlice

    def __len__(self):
        return len(self.left) * len(self.middle) * len(self.right)

    @property
    def norm_sq(self) -> int:
        return self.left.norm_sq * self.middle.norm_sq * self.right.norm_sq

    @property
    def alphabet(self) -> int:
        return max(self.left.alphabet, self.middle.alphabet, self.right.alphabet)

    @property
    def word_length(self) -> int:
        return self.left.length + self.middle.length + self.right.length

    def __iter__(self) -> Iterator[tuple[Word, Mat2]]:
        for wx, mx in self.left:
            for wy, my in self.middle:
                mxy = mx @ my
                for wz, mz in self.right:
                    yield wx + wy + wz, mxy @ mz

    def decode(self, word: Word) -> tuple[Word, Word, Word]:
        i, j = self.left.length, self.left.length + self.middle.length
        return word[:i], word[i:j], word[j:]

    def frob_values(self, shards: int = 1) -> np.ndarray:
        """``frob2`` of every member, in iteration order."""
        n_left = len(self.left)
        step = -(-n_left // shards)
        tasks = [(self, lo, min(lo + step, n_left)) for lo in range(0, n_left, step)]
        return np.concatenate(shard_map(_pi_frob_chunk, tasks, shards))


def _pi_frob_chunk(args):
    pi, lo, hi = args
    rz = pi.right.entry_array()
    big = pi.norm_sq >= 2**62 or rz.dtype == object
    if big:
        rz = rz.astype(object)
    za, zb, zc, zd = rz[:, 0], rz[:, 1], rz[:, 2], rz[:, 3]
    parts = []
    for _, mx in pi.left.members[lo:hi]:
        for _, my in pi.middle:
            m = mx @ my
            e = [m.a, m.b, m.c, m.d]
            if not big:
                e = [np.int64(x) for x in e]
            pa = e[0] * za + e[1] * zc
            pb = e[0] * zb + e[1] * zd
            pc = e[2] * za + e[3] * zc
            pd = e[2] * zb + e[3] * zd
            parts.append(pa * pa + pb * pb + pc * pc + pd * pd)
    if not parts:
        return np.zeros(0, dtype=object if big else np.int64)
    return np.concatenate(parts)


def build_pi(alphabet: int, X=None, Y=None, Z=None, *, x_sq=None, y_sq=None, z_sq=None) -> PiSet:
    """Build ``Omega_X * aleph * Omega_Z``.

    The outer factors are the pigeonhole slices of the alphabet-``alphabet``
    semigroup; the middle factor is always taken from the alphabet-2
    semigroup.
    """
    left = pigeonhole_slice(alphabet, X, norm_sq=x_sq)
    middle = pigeonhole_slice(2, Y, norm_sq=y_sq)
    right = pigeonhole_slice(alphabet, Z, norm_sq=z_sq)
    return PiSet(left, middle, right)


# --------------------------------------------------------------------------
# dimension estimates


def estimate_dimension_counting(alphabet: int, N_list: Iterable) -> float:
    """Half the least-squares slope of ``log #(ball)`` against ``log N``."""
    Ns = [float(N) for N in N_list]
    if len(Ns) < 3 or any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("need at least three increasing N values")
    values = ball_frob_values(alphabet, norm_sq=bound_from_norm(max(Ns)))
    counts = np.array([np.searchsorted(values, bound_from_norm(N), side="left") for N in Ns], dtype=float)
    if counts.min() == counts.max():
        raise ValueError("counts are constant; slope undefined")
    if counts.min() == 0:
        raise ValueError("empty ball at the smallest N")
    slope = np.polyfit(np.log(Ns), np.log(counts), 1)[0]
    return float(slope / 2)


def _level_sum_factory(alphabet, depth):
    # Denominators q_k, q_{k-1} of all digit words of the given length.
    qk = np.ones(1)
    qk1 = np.zeros(1)
    digits = np.arange(1, alphabet + 1, dtype=float)
    for _ in range(depth):
        qk, qk1 = (digits[None, :] * qk[:, None] + qk1[:, None]).ravel(), np.repeat(qk, alphabet)
    log_len = np.log(qk) + np.log(qk + qk1)

    # One more digit, summed digit by digit to keep memory at alphabet**depth.
    next_logs = [np.log(g * qk + qk1) + np.log((g + 1) * qk + qk1) for g in range(1, alphabet + 1)]

    def level(s):
        return np.exp(-s * log_len).sum()

    def next_level(s):
        return sum(np.exp(-s * nl).sum() for nl in next_logs)

    return level, next_level


def estimate_dimension_pressure(alphabet: int, depth: int, tol: float = 1e-9) -> float:
    """Dimension of the bounded-digit Cantor set from cylinder lengths.

    The cylinder of a digit word ``w`` has length ``1 / (q_k (q_k + q_{k-1}))``
    with ``q`` the continuant denominators.  The estimate is the ``s`` where
    the ``s``-power sums of cylinder lengths at depths ``k`` and ``k + 1``
    coincide (zero of the finite-depth pressure), found by bisection.
    """
    if depth < 2:
        raise ValueError("depth must be >= 2")
    if alphabet < 1:
        raise ValueError("alphabet bound must be >= 1")
    if alphabet == 1:
        return 0.0
    level, next_level = _level_sum_factory(alphabet, depth)
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if next_level(mid) > level(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def dimension_defect_ratio(alphabet: int, delta: float) -> float:
    """``(1 - delta) * pi^2 * alphabet / 6``; tends to 1 for large alphabets."""
    return (1 - delta) * math.pi**2 * alphabet / 6
