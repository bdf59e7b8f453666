"""Internal rate of return for schedules with several cash flows.

The ending value satisfies ``E = sum_j C_j (1 + R)**T_j`` where ``T_j`` is
the time remaining until the end of the period and the beginning value
is a flow at the full horizon. Substituting ``x = ln(1 + R)`` turns the
right-hand side into an exponential sum in ``x`` with bases ``e**T_j``,
so all rates are found by real root isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .core import ExpSum, ExpTerm
from .errors import DomainError, RangeError
from .roots import DEFAULT_TOL, find_roots, sign_change_bound

__all__ = [
    "CashFlow",
    "CashFlowSchedule",
    "IrrSolution",
    "DEFAULT_RATE_WINDOW",
    "schedule_to_expsum",
    "irr_evaluate",
    "irr_solve",
    "taylor_coefficients",
    "sign_sequence",
]

DEFAULT_RATE_WINDOW = (-0.999999, 10.0)


def _finite(name, value) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class CashFlow:
    amount: float
    time_remaining: float

    def __post_init__(self):
        object.__setattr__(self, "amount", _finite("amount", self.amount))
        t = _finite("time_remaining", self.time_remaining)
        if t < 0.0:
            raise DomainError(f"time_remaining must be nonnegative, got {t!r}")
        object.__setattr__(self, "time_remaining", t)


@dataclass(frozen=True)
class CashFlowSchedule:
    """Beginning value, ending value and intermediate flows.

    ``horizon`` is the length of the period; it defaults to the latest
    flow time and must not be shorter than any flow's time remaining.
    """

    begin_value: float
    end_value: float
    flows: Tuple[CashFlow, ...] = ()
    horizon: Optional[float] = None

    def __post_init__(self):
        b = _finite("begin_value", self.begin_value)
        e = _finite("end_value", self.end_value)
        if b < 0.0:
            raise DomainError(f"begin_value must be nonnegative, got {b!r}")
        if e < 0.0:
            raise DomainError(f"end_value cannot be negative, got {e!r}")
        flows = tuple(f if isinstance(f, CashFlow) else CashFlow(*f) for f in self.flows)
        latest = max((f.time_remaining for f in flows), default=None)
        if self.horizon is None:
            if latest is None:
                raise DomainError("a schedule without flows needs an explicit horizon")
            horizon = latest
        else:
            horizon = _finite("horizon", self.horizon)
            if horizon < 0.0:
                raise DomainError(f"horizon must be nonnegative, got {horizon!r}")
            if latest is not None and latest > horizon:
                raise DomainError(f"flow time {latest!r} exceeds the horizon {horizon!r}")
        object.__setattr__(self, "begin_value", b)
        object.__setattr__(self, "end_value", e)
        object.__setattr__(self, "flows", flows)
        object.__setattr__(self, "horizon", horizon)

    def folded(self) -> List[CashFlow]:
        """Flows with the beginning value included at the horizon."""
        out = [CashFlow(self.begin_value, self.horizon)] if self.begin_value else []
        return out + list(self.flows)

    def scale(self) -> float:
        return self.begin_value + math.fsum(abs(f.amount) for f in self.flows) + self.end_value


@dataclass(frozen=True)
class IrrSolution:
    rates: Tuple[float, ...]
    residuals: Tuple[float, ...]
    sign_change_bound: int
    multiplicity_note: str
    conventional: Optional[float] = None


def schedule_to_expsum(s: CashFlowSchedule) -> ExpSum:
    terms = [ExpTerm(f.amount, math.exp(f.time_remaining)) for f in s.folded()]
    if s.end_value:
        terms.append(ExpTerm(-s.end_value, 1.0))
    return ExpSum(tuple(terms))


def irr_evaluate(s: CashFlowSchedule, rate: float) -> float:
    """Ending value produced by ``rate``; ``rate`` must exceed -1."""
    rate = float(rate)
    if not rate > -1.0:
        raise DomainError(f"rate must exceed -1, got {rate!r}")
    x = math.log1p(rate)
    parts = []
    for f in s.folded():
        try:
            parts.append(f.amount * math.exp(f.time_remaining * x))
        except OverflowError:
            raise RangeError(f"flow at time {f.time_remaining!r} overflows at rate {rate!r}") from None
    total = math.fsum(parts)
    if math.isinf(total):
        raise RangeError(f"ending value overflows at rate {rate!r}")
    return total


def irr_solve(s: CashFlowSchedule, window: Tuple[float, float] = DEFAULT_RATE_WINDOW,
              tol: float = DEFAULT_TOL) -> IrrSolution:
    """All rates in ``window`` that reproduce the ending value.

    With three rates the middle one is reported as ``conventional``; none
    is discarded.
    """
    lo, hi = (float(v) for v in window)
    if not (lo > -1.0 and hi > lo and math.isfinite(hi)):
        raise DomainError(f"rate window must satisfy -1 < lo < hi < inf, got {window!r}")
    s_x = schedule_to_expsum(s)
    xs = find_roots(s_x, (math.log1p(lo), math.log1p(hi)), tol)
    rates = tuple(math.expm1(x) for x in xs)
    residuals = tuple(abs(irr_evaluate(s, r) - s.end_value) for r in rates)
    bound = sign_change_bound(s_x)
    note = f"{len(rates)} rate(s) found; sign-change bound {bound}"
    if bound > 3:
        note += "; coefficient signs alternate more than three times"
    middle = rates[1] if len(rates) == 3 else None
    return IrrSolution(rates, residuals, bound, note, middle)


def _power_terms(s: CashFlowSchedule):
    return [(f.amount, f.time_remaining) for f in s.folded()]


def taylor_coefficients(s: CashFlowSchedule, k_max: int) -> List[float]:
    """``a_k = sum_j C_j T_j**k / k!`` for ``k = 0..k_max``; ``a_0`` is exact."""
    if int(k_max) != k_max or k_max < 0:
        raise DomainError(f"k_max must be a nonnegative integer, got {k_max!r}")
    flows = _power_terms(s)
    out = [math.fsum(c for c, _ in flows)]
    for k in range(1, int(k_max) + 1):
        log_fact = math.lgamma(k + 1)
        parts = []
        for c, t in flows:
            if t == 0.0:
                continue
            try:
                parts.append(c * math.exp(k * math.log(t) - log_fact))
            except OverflowError:
                raise RangeError(f"coefficient a_{k} overflows") from None
        out.append(math.fsum(parts))
    return out


def _sign_of_power_sum(flows: Sequence[Tuple[float, float]], k: int) -> int:
    # Sign of sum C_j T_j**k computed relative to the largest term, so it
    # survives values far outside the double range.
    logs = [(c, k * math.log(t)) for c, t in flows if t > 0.0 and c]
    if not logs:
        return 0
    top = max(v for _, v in logs)
    total = math.fsum(c * math.exp(v - top) for c, v in logs)
    return (total > 0) - (total < 0)


def sign_sequence(s: CashFlowSchedule, k_max: int) -> Tuple[List[int], int]:
    """Signs of ``-E + sum C_j``, ``sum C_j T_j``, ..., ``sum C_j T_j**k_max``.

    Zeros are kept in the returned sequence but skipped when counting
    strict sign changes.
    """
    if int(k_max) != k_max or k_max < 1:
        raise DomainError(f"k_max must be a positive integer, got {k_max!r}")
    flows = _power_terms(s)
    first = math.fsum([-s.end_value] + [c for c, _ in flows])
    signs = [(first > 0) - (first < 0)]
    signs += [_sign_of_power_sum(flows, k) for k in range(1, int(k_max) + 1)]
    nonzero = [v for v in signs if v]
    changes = sum(1 for a, b in zip(nonzero, nonzero[1:]) if a != b)
    return signs, changes
