"""Certified low-lying, fundamental, reciprocal geodesics.

For ``g`` in the alphabet-``A`` semigroup, ``S = transpose(g) g`` is
symmetric, hence conjugate to its inverse, and its geodesic has the
continued-fraction period ``rev(w) w``.  Whenever ``frob2(g)^2 - 4`` is
squarefree that geodesic is also fundamental.  Each certificate stores enough
to be re-derived from ``(alphabet, word)`` and checked by separate code paths.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Iterable, Iterator

from ..arith import Mat2, disc_factorization, factorize, gram, is_fundamental_disc, is_squarefree_disc
from .._shard import shard_map
from ..semigroup import _ball_subtree, _prefix_tasks, _resolve_bound, ball_frob_values, validate_word, word_to_matrix
from .forms import (
    attracting_cf_period,
    canonical_rotation,
    cycle,
    form_of,
    gram_word,
    is_primitive,
    is_reciprocal,
    low_lying_period,
)


@dataclass(frozen=True)
class Certificate:
    alphabet: int
    word: tuple[int, ...]
    gamma: tuple[int, int, int, int]
    S: tuple[int, int, int, int]
    trace: int
    disc: int
    factorization: str
    reciprocal: bool
    fundamental: bool
    primitive: bool
    low_lying: bool
    cycle_id: str

    def to_json(self) -> str:
        d = asdict(self)
        d["word"] = list(self.word)
        d["gamma"] = list(self.gamma)
        d["S"] = list(self.S)
        return json.dumps(d, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> Certificate:
        d = json.loads(line)
        for k in ("word", "gamma", "S"):
            d[k] = tuple(d[k])
        return cls(**d)


def build_certificate(alphabet: int, word) -> Certificate:
    """Derive every field from the word; flags are computed, not assumed."""
    w = validate_word(word)
    g = word_to_matrix(w)
    S = gram(g)
    t = S.trace
    D = t * t - 4
    Sm = Mat2(*S.entries())
    return Certificate(
        alphabet=alphabet,
        word=w,
        gamma=g.entries(),
        S=S.entries(),
        trace=t,
        disc=D,
        factorization=str(disc_factorization(t)),
        reciprocal=is_reciprocal(Sm),
        fundamental=is_fundamental_disc(D),
        primitive=is_primitive(gram_word(w)),
        low_lying=low_lying_period(gram_word(w), alphabet)[0],
        cycle_id=cycle(form_of(Sm)).ident,
    )


def _candidate_chunk(args):
    alphabet, bound, prefix = args
    out = []
    for w, _, f in _ball_subtree((alphabet, bound, prefix)):
        gw = gram_word(w)
        if is_squarefree_disc(f) and is_primitive(gw):
            out.append((w, canonical_rotation(gw)))
    return out


def find_certificates(alphabet: int, N=None, max_count: int | None = None, *, norm_sq=None, shards: int = 1) -> Iterator[Certificate]:
    """Certificates from the ball, one per cyclic class of ``rev(w) w``.

    Words are scanned in lexicographic order and the first word of each class
    wins, so the output does not depend on ``shards``.
    """
    if alphabet < 2:
        raise ValueError("alphabet bound must be >= 2")
    bound = _resolve_bound(N, norm_sq)
    tasks = [(alphabet, bound, p) for p in _prefix_tasks(alphabet, shards)]
    seen = set()
    emitted = 0
    for part in shard_map(_candidate_chunk, tasks, shards):
        for w, key in part:
            if key in seen:
                continue
            seen.add(key)
            yield build_certificate(alphabet, w)
            emitted += 1
            if max_count is not None and emitted >= max_count:
                return


def squarefree_fraction(alphabet: int, N=None, *, norm_sq=None) -> float:
    """Share of ball elements ``g`` with ``frob2(g)^2 - 4`` squarefree."""
    fs = ball_frob_values(alphabet, N, norm_sq=norm_sq)
    if len(fs) == 0:
        raise ValueError("empty ball")
    return sum(is_squarefree_disc(int(f)) for f in fs) / len(fs)


def write_certificates(certs: Iterable[Certificate], path) -> int:
    n = 0
    with open(path, "w") as fh:
        for c in certs:
            fh.write(c.to_json() + "\n")
            n += 1
    return n


# --------------------------------------------------------------------------
# verification


def _cyclic_match(period: tuple[int, ...], word: tuple[int, ...]) -> bool:
    # word must be a repetition of some rotation of period
    if len(word) % len(period):
        return False
    reps = len(word) // len(period)
    return canonical_rotation(period * reps) == canonical_rotation(word)


def check_certificate(cert: Certificate) -> list[str]:
    """Problems found with one certificate; empty when it is sound."""
    problems = []
    try:
        fresh = build_certificate(cert.alphabet, cert.word)
    except (ValueError, TypeError) as exc:
        return [f"cannot rebuild: {exc}"]
    for name in Certificate.__dataclass_fields__:
        if getattr(fresh, name) != getattr(cert, name):
            problems.append(f"{name}: stored {getattr(cert, name)!r}, derived {getattr(fresh, name)!r}")
    for flag in ("reciprocal", "fundamental", "primitive", "low_lying"):
        if not getattr(cert, flag):
            problems.append(f"{flag} flag is false")

    # second opinions that do not go through build_certificate
    a, b, c, d = cert.S
    if b != c:
        problems.append("S is not symmetric")
    try:
        S = Mat2(a, b, c, d)
    except ValueError:
        return problems + ["S does not have determinant 1"]
    if S.trace != cert.trace or cert.trace**2 - 4 != cert.disc:
        problems.append("trace and discriminant disagree with S")
    if cert.disc > 0 and not factorize(cert.disc).is_squarefree():
        problems.append("discriminant is not squarefree")
    try:
        inv = cycle(form_of(Mat2(d, -b, -c, a)))
        if inv.key != cycle(form_of(S)).key:
            problems.append("class of S differs from class of its inverse")
        period = attracting_cf_period(S)
    except ValueError as exc:
        return problems + [f"S is not a positive hyperbolic matrix ({exc})"]
    if max(period) > cert.alphabet:
        problems.append(f"continued-fraction digit {max(period)} exceeds alphabet {cert.alphabet}")
    if not _cyclic_match(period, gram_word(cert.word)):
        problems.append("continued-fraction period does not match rev(w) w")
    return problems


def verify_certificates(path) -> tuple[int, list[str]]:
    """Check every line of a certificate file.

    Returns the number of records read and a line-numbered report of
    failures.
    """
    report = []
    n = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            n += 1
            try:
                cert = Certificate.from_json(line)
            except (ValueError, TypeError, KeyError) as exc:
                report.append(f"line {lineno}: unreadable record ({exc})")
                continue
            report.extend(f"line {lineno}: {p}" for p in check_certificate(cert))
    return n, report
