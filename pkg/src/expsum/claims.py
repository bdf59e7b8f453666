"""Empirical checks of root, extremum and inflection counts.

The checker measures counts on concrete instances and compares them to
fixed bounds. It only reports; nothing here raises because a bound is
exceeded.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .core import ExpSum, ExpTerm, evaluate
from .errors import DomainError, ExpSumError
from .roots import Asymptote, analyze, asymptotes, intersections, solve_level

__all__ = [
    "SeriesReport",
    "ClaimConfig",
    "ClaimReport",
    "CLAIM_BOUNDS",
    "series_scan",
    "random_instance",
    "check_instance",
    "claim_check",
]

CLAIM_BOUNDS: Dict[str, int] = {
    "Theorem": 2,
    "Corollary3": 3,
    "Corollary5": 2,
    "Corollary6": 2,
    "Corollary7": 2,
    "SeriesConjecture": 1,
}


@dataclass(frozen=True)
class SeriesReport:
    start: int
    k_max: int
    sign_changes: int
    minus_to_plus: int
    extrema: int
    converging: bool


def _signs(values):
    return [1 if v > 0 else -1 for v in values if v != 0.0]


def series_scan(s: ExpSum, k_max: int, start: int = 0) -> SeriesReport:
    """Scan ``S_k`` at the integers ``start..k_max``.

    Counts strict sign alternations (zeros skipped), the minus-to-plus
    subset of them and discrete local extrema. The series is flagged
    converging when ``|S_k|`` does not increase over the last quarter of
    the range.
    """
    if int(k_max) != k_max or k_max < 1:
        raise DomainError(f"k_max must be a positive integer, got {k_max!r}")
    if int(start) != start or not 0 <= start < k_max:
        raise DomainError(f"start must be an integer in [0, k_max), got {start!r}")
    if not s.terms:
        raise DomainError("cannot scan an empty sum")
    if any(not 0.0 < t.base < 1.0 for t in s.terms):
        raise DomainError("series scan needs every base in (0, 1)")
    if not s.terms[0].coefficient > 0:
        raise DomainError("series scan needs a positive leading coefficient")
    values = [evaluate(s, k) for k in range(int(start), int(k_max) + 1)]
    signs = _signs(values)
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    up = sum(1 for a, b in zip(signs, signs[1:]) if a < 0 < b)
    slopes = _signs([b - a for a, b in zip(values, values[1:])])
    extrema = sum(1 for a, b in zip(slopes, slopes[1:]) if a != b)
    tail = [abs(v) for v in values[-max(2, len(values) // 4):]]
    converging = all(b <= a for a, b in zip(tail, tail[1:]))
    return SeriesReport(int(start), int(k_max), changes, up, extrema, converging)


@dataclass(frozen=True)
class ClaimConfig:
    trials: int = 20
    seed: int = 0
    max_terms: int = 5
    coefficient_range: Tuple[float, float] = (1e-2, 1e2)
    base_range: Tuple[float, float] = (0.05, 0.95)
    min_separation: float = 1e-3
    window: Optional[Tuple[float, float]] = None
    k_max: int = 200
    tol: float = 1e-10
    instances: Tuple[ExpSum, ...] = ()


@dataclass(frozen=True)
class ClaimReport:
    instance: ExpSum
    claim: str
    measured: Dict[str, int]
    bound: int
    violated: bool
    note: str = ""


def random_instance(rng: random.Random, n_terms: int, config: ClaimConfig = ClaimConfig()) -> ExpSum:
    """Sum with log-uniform magnitudes, random signs and well separated bases."""
    lo_c, hi_c = config.coefficient_range
    lo_t, hi_t = config.base_range
    bases: List[float] = []
    while len(bases) < n_terms:
        t = rng.uniform(lo_t, hi_t)
        if all(abs(t - b) >= config.min_separation for b in bases):
            bases.append(t)
    terms = []
    for t in bases:
        mag = math.exp(rng.uniform(math.log(lo_c), math.log(hi_c)))
        sign = 1.0 if rng.random() < 0.5 else -1.0
        terms.append(ExpTerm(sign * mag, t))
    return ExpSum(tuple(terms))


def _report(instance, claim, measured, note=""):
    bound = CLAIM_BOUNDS[claim]
    return ClaimReport(instance, claim, measured, bound, any(v > bound for v in measured.values()), note)


def _finite_limits(s: ExpSum) -> List[float]:
    out = []
    for label, term in zip(asymptotes(s), (s.terms[-1], s.terms[0])):
        if label is Asymptote.CONSTANT:
            out.append(term.coefficient)
        elif label in (Asymptote.TO_ZERO_ABOVE, Asymptote.TO_ZERO_BELOW):
            out.append(0.0)
    return out


def _level_counts(s: ExpSum, extremum_values: Sequence[float], window, tol) -> int:
    # Level-set counts only change at extremum values and at finite limits,
    # so probing zero and the midpoints between those values is enough.
    ordered = sorted(set(extremum_values) | set(_finite_limits(s)))
    levels = [0.0] + [0.5 * (a + b) for a, b in zip(ordered, ordered[1:])]
    best = 0
    for level in levels:
        try:
            best = max(best, len(solve_level(s, level, window, tol)))
        except ExpSumError:
            continue
    return best


def check_instance(s: ExpSum, partner: ExpSum, config: ClaimConfig = ClaimConfig()) -> List[ClaimReport]:
    """All applicable claim reports for one instance, in a fixed order."""
    window, tol = config.window, config.tol
    out = []
    rep = analyze(s, window, tol)
    out.append(_report(s, "Theorem", {
        "roots": len(rep.roots), "extrema": len(rep.extrema), "inflections": len(rep.inflections),
    }))
    values = []
    for x in rep.extrema:
        try:
            values.append(evaluate(s, x))
        except ExpSumError:
            pass
    out.append(_report(s, "Corollary3", {"max_level_solutions": _level_counts(s, values, window, tol)}))
    out.append(_report(s, "Corollary5", {"roots": len(rep.roots)}))
    try:
        crossings = len(intersections(s, partner, window, tol))
        out.append(_report(s, "Corollary6", {"intersections": crossings}))
    except ExpSumError as exc:
        out.append(ClaimReport(s, "Corollary6", {}, CLAIM_BOUNDS["Corollary6"], False, f"skipped: {exc}"))
    if all(0.0 < t.base < 1.0 for t in s.terms):
        oriented = s if s.terms[0].coefficient > 0 else -s
        note = "" if oriented is s else "instance negated to make the leading coefficient positive"
        series = series_scan(oriented, config.k_max)
        out.append(_report(s, "Corollary7", {"extrema": series.extrema}, note))
        tail = series_scan(oriented, config.k_max, start=1)
        out.append(_report(s, "SeriesConjecture", {"minus_to_plus": tail.minus_to_plus}, note))
    else:
        skip = "skipped: a base is not in (0, 1)"
        out.append(ClaimReport(s, "Corollary7", {}, CLAIM_BOUNDS["Corollary7"], False, skip))
        out.append(ClaimReport(s, "SeriesConjecture", {}, CLAIM_BOUNDS["SeriesConjecture"], False, skip))
    return out


def claim_check(config: ClaimConfig = ClaimConfig()) -> List[ClaimReport]:
    """Measure every claim on supplied instances, or on ``trials`` random ones.

    Instances and their intersection partners are drawn from one
    ``random.Random(seed)`` stream, so a fixed seed reproduces the output.
    """
    if config.trials < 1 and not config.instances:
        raise DomainError("trials must be at least 1")
    if config.max_terms < 1:
        raise DomainError("max_terms must be at least 1")
    rng = random.Random(config.seed)
    reports: List[ClaimReport] = []
    if config.instances:
        sources = list(config.instances)
    else:
        sources = [random_instance(rng, rng.randint(1, config.max_terms), config) for _ in range(config.trials)]
    for s in sources:
        partner = random_instance(rng, rng.randint(1, config.max_terms), config)
        reports.extend(check_instance(s, partner, config))
    return reports
