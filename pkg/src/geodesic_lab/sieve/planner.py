"""Exponent bookkeeping for the level-of-distribution argument.

With ``Q0 = N^a0``, ``Q = N^alpha``, ``X = N^x``, ``Y = N^y``, ``Z = N^z``
the argument needs

    (y)   C a0 < Theta y
    (x)   4 alpha + (1 - delta)(x + z) < x / 4
    (a0)  (1 - delta)(x + z) < a0 / 2
    (z)   alpha / 2 + (1 - delta)(x + z) < z / 4

and the canonical choice below together with a lower bound on delta.
Arithmetic is exact on the decimal values given.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _exact(v) -> Fraction:
    if isinstance(v, (int, Fraction)):
        return Fraction(v)
    return Fraction(str(v))


@dataclass(frozen=True)
class ExponentPlan:
    delta: Fraction
    Theta: Fraction
    C: Fraction
    eta: Fraction
    alpha: Fraction
    x: Fraction
    z: Fraction
    y: Fraction
    alpha0: Fraction
    delta_min: Fraction
    checks: dict

    @property
    def feasible(self) -> bool:
        return all(self.checks.values())

    @property
    def violated(self) -> list[str]:
        return [k for k, ok in self.checks.items() if not ok]

    @property
    def level_exponent(self) -> Fraction:
        """Exponent of ``T ~ N^4`` reached by ``Q = N^alpha``."""
        return self.alpha / 4

    def to_dict(self) -> dict:
        out = {}
        for k in ("delta", "Theta", "C", "eta", "alpha", "x", "z", "y", "alpha0", "delta_min", "level_exponent"):
            v = getattr(self, k)
            out[k] = float(v)
            out[k + "_exact"] = str(v)
        out["checks"] = dict(self.checks)
        out["feasible"] = self.feasible
        out["violated"] = self.violated
        return out


def exponent_plan(delta, Theta, C, eta) -> ExponentPlan:
    delta, Theta, C, eta = map(_exact, (delta, Theta, C, eta))
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if Theta <= 0 or C <= 0:
        raise ValueError("Theta and C must be positive")
    if not 0 < eta < Fraction(1, 36):
        raise ValueError("eta must lie in (0, 1/36)")
    alpha = Fraction(1, 18) - eta
    x = Fraction(8, 9) - eta
    z = Fraction(1, 9) - eta
    y = 2 * eta
    alpha0 = Theta * eta / C
    defect = (1 - delta) * (x + z)
    delta_min = 1 - Theta * eta / (2 * C) / (1 - 2 * eta)
    checks = {
        "y": C * alpha0 < Theta * y,
        "x": 4 * alpha + defect < x / 4,
        "alpha0": defect < alpha0 / 2,
        "z": alpha / 2 + defect < z / 4,
        "delta": delta > delta_min,
    }
    return ExponentPlan(delta, Theta, C, eta, alpha, x, z, y, alpha0, delta_min, checks)
