"""Indefinite binary quadratic forms, Gauss reduction and reduction cycles.

A hyperbolic matrix ``[[a, b], [c, d]]`` with positive trace corresponds to
the form ``(c, d - a, -b)`` of discriminant ``trace^2 - 4``; conjugacy in
PSL2(Z) is proper equivalence of forms, and each proper class is one cycle of
reduced forms under the reduction operator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from ..arith import Mat2, divisors, is_square

Form = tuple[int, int, int]


@dataclass(frozen=True, slots=True, order=True)
class QForm:
    A: int
    B: int
    C: int

    def __post_init__(self):
        D = self.B * self.B - 4 * self.A * self.C
        if D <= 0 or is_square(D):
            raise ValueError(f"{self.astuple()} is not indefinite with non-square discriminant")

    @property
    def disc(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def astuple(self) -> Form:
        return (self.A, self.B, self.C)

    @property
    def content(self) -> int:
        return math.gcd(math.gcd(self.A, self.B), self.C)

    def __neg__(self) -> QForm:
        return QForm(-self.A, -self.B, -self.C)

    def __str__(self):
        return f"{self.A},{self.B},{self.C}"


# --------------------------------------------------------------------------
# raw-tuple kernels; the public functions below wrap these


def _is_reduced(A, B, C, D):
    if B <= 0 or B * B >= D:
        return False
    two_a = 2 * abs(A)
    if (two_a + B) ** 2 <= D:
        return False
    return two_a - B <= 0 or (two_a - B) ** 2 < D


def _rho(A, B, C, D, s):
    """One reduction step ``(A, B, C) -> (C, B', (B'^2 - D) / 4C)``."""
    m = 2 * abs(C)
    if C * C < D:
        # B' = -B mod 2|C| inside (sqrt(D) - 2|C|, sqrt(D))
        nb = s - (s + B) % m
    else:
        nb = (-B) % m
        if nb > abs(C):
            nb -= m
    return (C, nb, (nb * nb - D) // (4 * C))


def _reduce(f, D, s):
    A, B, C = f
    # Reduction of an indefinite form terminates; the guard only catches
    # malformed input.
    for _ in range(10_000 + 4 * D.bit_length() ** 2):
        if _is_reduced(A, B, C, D):
            return (A, B, C)
        A, B, C = _rho(A, B, C, D, s)
    raise RuntimeError(f"reduction of {f} did not terminate")


def _cycle_raw(f, D, s) -> list[Form]:
    start = _reduce(f, D, s)
    out = [start]
    cur = _rho(*start, D, s)
    while cur != start:
        out.append(cur)
        cur = _rho(*cur, D, s)
    k = out.index(min(out))
    return out[k:] + out[:k]


class CycleCache:
    """Maps reduced forms of one discriminant to their canonical cycle key."""

    def __init__(self, D: int):
        self.D = D
        self.s = math.isqrt(D)
        self.key_of: dict[Form, Form] = {}
        self.members: dict[Form, tuple[Form, ...]] = {}

    def key(self, f: Form) -> Form:
        r = _reduce(f, self.D, self.s)
        k = self.key_of.get(r)
        if k is None:
            cyc = _cycle_raw(r, self.D, self.s)
            k = cyc[0]
            self.members[k] = tuple(cyc)
            for g in cyc:
                self.key_of[g] = k
        return k

    def is_reciprocal_key(self, k: Form) -> bool:
        # The class of -f is read off the cycle of f: (A,B,C) -> (-C,B,-A)
        # maps reduced forms to reduced forms.
        A, B, C = k
        return self.key_of.get((-C, B, -A)) == k


# --------------------------------------------------------------------------
# public API


def form_of(g: Mat2) -> QForm:
    """Fixed-point form of a hyperbolic matrix, taken with positive trace."""
    a, b, c, d = g.a, g.b, g.c, g.d
    t = a + d
    if abs(t) <= 2:
        raise ValueError(f"matrix with trace {t} is not hyperbolic")
    if t < 0:
        a, b, c, d = -a, -b, -c, -d
    return QForm(c, d - a, -b)


def matrix_of_form(f: QForm, trace: int | None = None) -> Mat2:
    """Inverse of :func:`form_of` for a form whose content divides suitably."""
    D = f.disc
    if trace is None:
        trace = math.isqrt(D + 4)
        if trace * trace != D + 4:
            raise ValueError(f"disc {D} is not trace^2 - 4")
    A, B, C = f.astuple()
    return Mat2((trace - B) // 2, -C, A, (trace + B) // 2)


def is_reduced(f: QForm) -> bool:
    return _is_reduced(f.A, f.B, f.C, f.disc)


def reduce(f: QForm) -> QForm:
    """A reduced form properly equivalent to ``f``."""
    D = f.disc
    return QForm(*_reduce(f.astuple(), D, math.isqrt(D)))


def rho_step(f: QForm) -> QForm:
    D = f.disc
    return QForm(*_rho(f.A, f.B, f.C, D, math.isqrt(D)))


@dataclass(frozen=True, slots=True)
class Cycle:
    """Reduction cycle, rotated so the lexicographically least form is first."""

    forms: tuple[QForm, ...]

    @property
    def key(self) -> QForm:
        return self.forms[0]

    @property
    def disc(self) -> int:
        return self.forms[0].disc

    def __len__(self):
        return len(self.forms)

    def __iter__(self) -> Iterator[QForm]:
        return iter(self.forms)

    def __contains__(self, f) -> bool:
        return f in self.forms

    @property
    def ident(self) -> str:
        return str(self.key)


def cycle(f: QForm) -> Cycle:
    D = f.disc
    return Cycle(tuple(QForm(*g) for g in _cycle_raw(f.astuple(), D, math.isqrt(D))))


def _reduced_forms(D: int, spf=None) -> list[Form]:
    s = math.isqrt(D)
    out = []
    for B in range(2 - D % 2, s + 1, 2):
        n = (D - B * B) // 4
        for A in divisors(n, spf):
            two_a = 2 * A
            if (two_a + B) ** 2 <= D:
                continue
            if two_a - B > 0 and (two_a - B) ** 2 >= D:
                break
            out.append((A, B, -n // A))
            out.append((-A, B, n // A))
    return out


def classes_of_disc(D: int, *, primitive_only: bool = False, spf=None) -> list[Cycle]:
    """All proper classes of forms of discriminant ``D`` as cycles.

    Forms of every content are included unless ``primitive_only``.
    """
    if D <= 0 or is_square(D) or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a positive non-square discriminant")
    s = math.isqrt(D)
    seen: set[Form] = set()
    cycles = []
    for f in sorted(_reduced_forms(D, spf)):
        if f in seen:
            continue
        if primitive_only and math.gcd(math.gcd(f[0], f[1]), f[2]) != 1:
            continue
        cyc = _cycle_raw(f, D, s)
        seen.update(cyc)
        cycles.append(Cycle(tuple(QForm(*g) for g in cyc)))
    return cycles


def count_cycles(D: int, *, primitive_only: bool = False, spf=None) -> int:
    """Number of proper classes, without building :class:`Cycle` objects."""
    if D <= 0 or is_square(D) or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a positive non-square discriminant")
    s = math.isqrt(D)
    remaining = set(_reduced_forms(D, spf))
    if primitive_only:
        remaining = {f for f in remaining if math.gcd(math.gcd(f[0], f[1]), f[2]) == 1}
    count = 0
    while remaining:
        f = remaining.pop()
        cur = _rho(*f, D, s)
        while cur != f:
            remaining.discard(cur)
            cur = _rho(*cur, D, s)
        count += 1
    return count


def is_reciprocal(g: Mat2) -> bool:
    """Whether ``g`` is conjugate to its inverse in PSL2(Z)."""
    return cycle(form_of(g)).key == cycle(form_of(g.inverse())).key


def invert_cycle(c: Cycle) -> Cycle:
    """Cycle of the inverse class, built member-wise as ``(-C, B, -A)``."""
    return cycle(QForm(-c.key.C, c.key.B, -c.key.A))


# --------------------------------------------------------------------------
# words


def minimal_period(w: Sequence) -> int:
    n = len(w)
    w = tuple(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[p:] + w[:p] == w:
            return p
    return n


def is_primitive(w: Sequence[int]) -> bool:
    """Whether the even word is not a proper power as a matrix in PSL2(Z).

    Odd periods count double: a word ``u u`` with ``u`` of odd length is the
    square of a determinant -1 matrix only, hence primitive in SL2(Z).
    """
    p = minimal_period(w)
    return len(w) == (p if p % 2 == 0 else 2 * p)


def canonical_rotation(w: Sequence[int]) -> tuple[int, ...]:
    w = tuple(w)
    return min(w[k:] + w[:k] for k in range(len(w)))


def gram_word(w: Sequence[int]) -> tuple[int, ...]:
    """Word of ``transpose(g) g``; every generator is symmetric."""
    return tuple(reversed(w)) + tuple(w)


def low_lying_period(w: Sequence[int], alphabet: int) -> tuple[bool, tuple[int, ...]]:
    """Continued-fraction period of the geodesic of ``w`` and the digit-bound flag."""
    w = tuple(int(x) for x in w)
    if len(w) < 2 or len(w) % 2 or min(w) < 1:
        raise ValueError(f"invalid word {w}")
    return max(w) <= alphabet, w


def attracting_cf_period(g: Mat2) -> tuple[int, ...]:
    """Minimal period of the continued fraction of the attracting fixed point.

    Computed from the quadratic irrational ``((a - d) + sqrt(D)) / (2c)``
    alone, for matrices with positive entries (purely periodic expansion).
    """
    a, b, c, d = g.entries()
    if min(a, b, c, d) < 0 or c == 0 or a + d <= 2:
        raise ValueError("expected a hyperbolic matrix with nonnegative entries")
    D = (a + d) ** 2 - 4
    s = math.isqrt(D)
    P, Q = a - d, 2 * c
    seen: dict[tuple[int, int], int] = {}
    digits = []
    while (P, Q) not in seen:
        seen[(P, Q)] = len(digits)
        q = (P + s) // Q if Q > 0 else -((P + s) // -Q) - 1
        digits.append(q)
        P = q * Q - P
        Q = (D - P * P) // Q
    start = seen[(P, Q)]
    if start != 0:
        raise ValueError("expansion is not purely periodic")
    return tuple(digits)
