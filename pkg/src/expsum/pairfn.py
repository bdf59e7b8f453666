"""Pair functions and the closed forms of their characteristic points.

A pair function is ``c_p * t_p**k - c_m * t_m**k`` with positive
coefficients and bases in (0, 1). It is *high* (HPF) when the positive
term has the larger base and *low* (LPF) otherwise. Every pair function
has exactly one zero, one extremum and one inflection point, and more
generally one zero of each derivative, located at

    k_j = [ln(c_m / c_p) + j ln(ln t_m / ln t_p)] / ln(t_p / t_m)

with ``k_0 < k_1 < k_2 < ...``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .core import ExpSum, ExpTerm
from .errors import DomainError, PairConstructionError

__all__ = [
    "PairKind",
    "PairFunction",
    "CharacteristicPoints",
    "make_pair",
    "zero_point",
    "extremum_point",
    "inflection_point",
    "characteristic_point",
    "characteristic_points",
    "derivative_pair",
    "MAX_ORDER",
]

MAX_ORDER = 64
MIN_LOG_SEPARATION = 1e-12


class PairKind(str, enum.Enum):
    HPF = "HPF"
    LPF = "LPF"

    def opposite(self):
        return PairKind.LPF if self is PairKind.HPF else PairKind.HPF


@dataclass(frozen=True)
class PairFunction:
    c_p: float
    t_p: float
    c_m: float
    t_m: float

    def __post_init__(self):
        for name in ("c_p", "t_p", "c_m", "t_m"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise PairConstructionError(f"{name} must be finite, got {value!r}", name)
            object.__setattr__(self, name, value)
        if not self.c_p > 0.0:
            raise PairConstructionError(f"c_p must be positive, got {self.c_p!r}", "c_p")
        if not self.c_m > 0.0:
            raise PairConstructionError(f"c_m must be positive, got {self.c_m!r}", "c_m")
        if not 0.0 < self.t_p < 1.0:
            raise PairConstructionError(f"t_p must lie in (0, 1), got {self.t_p!r}", "t_p")
        if not 0.0 < self.t_m < 1.0:
            raise PairConstructionError(f"t_m must lie in (0, 1), got {self.t_m!r}", "t_m")
        if abs(math.log(self.t_p / self.t_m)) < MIN_LOG_SEPARATION:
            raise PairConstructionError("t_p and t_m are too close to separate", "t_m")

    @property
    def kind(self) -> PairKind:
        return PairKind.HPF if self.t_p > self.t_m else PairKind.LPF

    def as_expsum(self) -> ExpSum:
        return ExpSum((ExpTerm(self.c_p, self.t_p), ExpTerm(-self.c_m, self.t_m)))

    def __call__(self, k):
        return self.c_p * self.t_p ** k - self.c_m * self.t_m ** k

    def term_magnitude(self, k) -> float:
        """Larger of the two term magnitudes at ``k``; they cancel at a zero."""
        return max(self.c_p * self.t_p ** k, self.c_m * self.t_m ** k)


@dataclass(frozen=True)
class CharacteristicPoints:
    zero: float
    extremum: float
    inflection: float


def make_pair(c_p, t_p, c_m, t_m) -> PairFunction:
    return PairFunction(c_p, t_p, c_m, t_m)


def characteristic_point(pf: PairFunction, j: int) -> float:
    """Abscissa where the ``j``-th derivative of the pair vanishes."""
    if int(j) != j or j < 0:
        raise DomainError(f"derivative order must be a nonnegative integer, got {j!r}")
    if j > MAX_ORDER:
        raise DomainError(f"derivative order is capped at {MAX_ORDER}, got {j!r}")
    num = math.log(pf.c_m / pf.c_p)
    if j:
        num += j * math.log(math.log(pf.t_m) / math.log(pf.t_p))
    return num / math.log(pf.t_p / pf.t_m)


def zero_point(pf: PairFunction) -> float:
    return math.log(pf.c_m / pf.c_p) / math.log(pf.t_p / pf.t_m)


def extremum_point(pf: PairFunction) -> float:
    """Maximum of an HPF, minimum of an LPF."""
    ratio = (pf.c_m * math.log(pf.t_m)) / (pf.c_p * math.log(pf.t_p))
    return math.log(ratio) / math.log(pf.t_p / pf.t_m)


def inflection_point(pf: PairFunction) -> float:
    ratio = (pf.c_m * math.log(pf.t_m) ** 2) / (pf.c_p * math.log(pf.t_p) ** 2)
    return math.log(ratio) / math.log(pf.t_p / pf.t_m)


def characteristic_points(pf: PairFunction) -> CharacteristicPoints:
    return CharacteristicPoints(zero_point(pf), extremum_point(pf), inflection_point(pf))


def derivative_pair(pf: PairFunction) -> PairFunction:
    """First derivative rewritten as a pair with positive coefficients.

    Both logarithms are negative, so the positive and negative roles swap
    bases and the result is a pair of the opposite kind.
    """
    return PairFunction(
        pf.c_m * -math.log(pf.t_m), pf.t_m,
        pf.c_p * -math.log(pf.t_p), pf.t_p,
    )
