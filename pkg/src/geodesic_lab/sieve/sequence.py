"""The sifting sequence ``n = frob2(phi)^2 - 4`` over the product set.

Only ``frob2`` values are stored; every congruence question about ``n``
reduces to a question about ``frob2`` modulo the same number.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..arith import divisors, is_squarefree_modulus, primes_below, squarefree_upto
from ..modp import beta, rho, xi
from ..semigroup import PiSet


@dataclass(frozen=True)
class SiftHistogram:
    """Distinct ``frob2`` values with multiplicities; ``n = f^2 - 4``."""

    frob: np.ndarray
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def as_dict(self) -> dict[int, int]:
        """``{n: a(n)}``."""
        return {int(f) ** 2 - 4: int(c) for f, c in zip(self.frob, self.counts)}

    def residue_counts(self, m: int) -> np.ndarray:
        """Entry ``r`` is the mass of ``frob2 = r (mod m)``."""
        res = (self.frob % m).astype(np.int64)
        out = np.zeros(m, dtype=np.int64)
        np.add.at(out, res, self.counts)
        return out


def histogram_from_values(values) -> SiftHistogram:
    values = np.asarray(values)
    frob, counts = np.unique(values, return_counts=True)
    return SiftHistogram(frob, counts.astype(np.int64))


def sift_sequence(pi: PiSet, shards: int = 1) -> SiftHistogram:
    """Histogram of the sequence over every member of ``pi``."""
    return histogram_from_values(pi.frob_values(shards))


def _check_modulus(q):
    if not is_squarefree_modulus(q):
        raise ValueError(f"modulus {q} is not squarefree")


def square_roots_of_4(q: int) -> list[int]:
    return [t for t in range(q) if (t * t - 4) % q == 0]


def a_q(hist: SiftHistogram, q: int) -> int:
    """Mass of the sequence on multiples of ``q``."""
    _check_modulus(q)
    res = hist.residue_counts(q)
    return int(sum(res[t] for t in square_roots_of_4(q)))


def remainder(hist: SiftHistogram, q: int, size: int | None = None) -> Fraction:
    """``a_q - beta(q) * |Pi|`` exactly."""
    size = hist.total if size is None else size
    return a_q(hist, q) - beta(q).value * size


@dataclass(frozen=True)
class DispersionSplit:
    modulus: int
    Q0: int
    main: Fraction
    rest: Fraction
    direct: int

    @property
    def exact(self) -> bool:
        return self.main + self.rest == self.direct


def dispersion_split(hist: SiftHistogram, modulus: int, Q0: int) -> DispersionSplit:
    """Split ``|A_q|`` by the divisors ``d`` of the modulus: ``d <= Q0`` is main.

    Each stratum is ``sum_tau sum_phi Xi(d; f(phi) - tau) rho(q/d)``; both
    parts are summed independently and compared with the direct count.
    """
    _check_modulus(modulus)
    if Q0 < 1:
        raise ValueError("Q0 must be >= 1")
    res = hist.residue_counts(modulus)
    taus = square_roots_of_4(modulus)
    main = rest = Fraction(0)
    for d in divisors(modulus):
        xs = [xi(d, r).value for r in range(d)]
        s = Fraction(0)
        for tau in taus:
            for r in range(modulus):
                if res[r]:
                    s += int(res[r]) * xs[(r - tau) % d]
        term = s * rho(modulus // d).value
        if d <= Q0:
            main += term
        else:
            rest += term
    return DispersionSplit(modulus, Q0, main, rest, a_q(hist, modulus))


def remainder_sum(hist: SiftHistogram, Q: int) -> Fraction:
    """``sum |r(q)|`` over squarefree ``q <= Q``."""
    if Q < 2:
        raise ValueError("Q must be >= 2")
    size = hist.total
    return sum((abs(remainder(hist, q, size)) for q in squarefree_upto(Q)), Fraction(0))


def remainder_trend(pis: list[PiSet], Q: int, shards: int = 1) -> list[dict]:
    rows = []
    for pi in pis:
        hist = sift_sequence(pi, shards)
        s = remainder_sum(hist, Q)
        rows.append({"norm_sq": pi.norm_sq, "size": hist.total, "sum_abs_r": s, "ratio": float(s / hist.total)})
    return rows


# --------------------------------------------------------------------------
# small-prime sifting


def sift_small_primes(hist: SiftHistogram, z: int) -> int:
    """Mass on ``n`` with no prime factor ``p <= z``."""
    if z < 2:
        raise ValueError("z must be >= 2")
    keep = np.ones(len(hist.frob), dtype=bool)
    for p in primes_below(z + 1):
        r = (hist.frob % p).astype(np.int64)
        keep &= (r != 2 % p) & (r != (-2) % p)
    return int(hist.counts[keep].sum())


def sift_trial_division(hist: SiftHistogram, z: int) -> int:
    """Same count as :func:`sift_small_primes`, dividing each ``n`` directly."""
    ps = primes_below(z + 1)
    total = 0
    for f, c in zip(hist.frob.tolist(), hist.counts.tolist()):
        n = f * f - 4
        if all(n % p for p in ps):
            total += c
    return total


def sift_legendre(hist: SiftHistogram, z: int) -> int:
    """Inclusion-exclusion ``sum_{d | P(z)} mu(d) |A_d|``."""
    ps = primes_below(z + 1)
    total = 0
    for k in range(len(ps) + 1):
        for combo in combinations(ps, k):
            d = int(np.prod(combo)) if combo else 1
            total += (-1) ** k * a_q(hist, d)
    return total


# --------------------------------------------------------------------------
# report


@dataclass
class SieveReport:
    params: dict
    rows: list[dict] = field(default_factory=list)
    sum_abs_r: Fraction = Fraction(0)
    sifted: int = 0

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["q", "a_q", "beta_num", "beta_den", "r"])
            for row in self.rows:
                w.writerow([row["q"], row["a_q"], row["beta_num"], row["beta_den"], str(row["r"])])

    def summary(self) -> dict:
        return {
            "params": self.params,
            "moduli": len(self.rows),
            "sum_abs_r": str(self.sum_abs_r),
            "sum_abs_r_over_size": float(self.sum_abs_r / self.params["size"]) if self.params["size"] else 0.0,
            "sifted": self.sifted,
        }


def sieve_report(pi: PiSet, Q: int, z: int, shards: int = 1) -> SieveReport:
    hist = sift_sequence(pi, shards)
    size = hist.total
    params = {
        "alphabet": pi.left.alphabet,
        "x_sq": pi.left.norm_sq,
        "y_sq": pi.middle.norm_sq,
        "z_sq": pi.right.norm_sq,
        "norm_sq": pi.norm_sq,
        "slice_lengths": [pi.left.length, pi.middle.length, pi.right.length],
        "slice_sizes": [len(pi.left), len(pi.middle), len(pi.right)],
        "size": size,
        "Q": Q,
        "z": z,
    }
    rep = SieveReport(params)
    for q in squarefree_upto(Q):
        aq = a_q(hist, q)
        b = beta(q).value
        r = aq - b * size
        rep.rows.append({"q": q, "a_q": aq, "beta_num": b.numerator, "beta_den": b.denominator, "r": r})
        rep.sum_abs_r += abs(r)
    rep.sifted = sift_small_primes(hist, z)
    return rep
