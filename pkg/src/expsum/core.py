"""Finite sums of exponential functions.

An :class:`ExpSum` is the carrier used everywhere else in the package: a
list of terms ``C * T**k`` with signed coefficients and positive bases,
kept in canonical form (strictly descending bases, no repeated base, no
zero coefficient).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

from .errors import DomainError, RangeError

__all__ = [
    "ExpTerm",
    "ExpSum",
    "ShiftedTerm",
    "evaluate",
    "derivative",
    "normalize_bases",
    "collapse_shifts",
    "collapse_log_sum",
    "merge_terms",
    "term_scale",
]


def _check_real(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class ExpTerm:
    """A single term ``coefficient * base**k``."""

    coefficient: float
    base: float

    def __post_init__(self):
        c = _check_real("coefficient", self.coefficient)
        t = _check_real("base", self.base)
        if t <= 0.0:
            raise DomainError(f"base must be strictly positive, got {t!r}")
        object.__setattr__(self, "coefficient", c)
        object.__setattr__(self, "base", t)

    def __call__(self, k):
        return self.coefficient * self.base ** k

    def __neg__(self):
        return ExpTerm(-self.coefficient, self.base)


TermLike = Union[ExpTerm, Tuple[float, float]]


def _as_term(item: TermLike) -> ExpTerm:
    if isinstance(item, ExpTerm):
        return item
    c, t = item
    return ExpTerm(c, t)


def _canonical(items: Iterable[TermLike]) -> Tuple[ExpTerm, ...]:
    groups: dict = {}
    for item in items:
        term = _as_term(item)
        groups.setdefault(term.base, []).append(term.coefficient)
    merged = []
    for base in sorted(groups, reverse=True):
        c = math.fsum(groups[base])
        if c != 0.0:
            merged.append(ExpTerm(c, base))
    return tuple(merged)


@dataclass(frozen=True)
class ExpSum:
    """Canonical sum ``sum_j C_j * T_j**k``.

    Construction always canonicalizes: equal bases (compared exactly) are
    merged, zero coefficients are dropped and terms are sorted by strictly
    descending base. The empty sum is the zero function.
    """

    terms: Tuple[ExpTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "terms", _canonical(self.terms))

    @classmethod
    def of(cls, *pairs: TermLike) -> "ExpSum":
        """Build a sum from ``(coefficient, base)`` tuples or terms."""
        return cls(tuple(pairs))

    @property
    def coefficients(self) -> Tuple[float, ...]:
        return tuple(t.coefficient for t in self.terms)

    @property
    def bases(self) -> Tuple[float, ...]:
        return tuple(t.base for t in self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __call__(self, k):
        return evaluate(self, k)

    def __neg__(self):
        return ExpSum(tuple(-t for t in self.terms))

    def __add__(self, other):
        if not isinstance(other, ExpSum):
            return NotImplemented
        return ExpSum(self.terms + other.terms)

    def __sub__(self, other):
        if not isinstance(other, ExpSum):
            return NotImplemented
        return ExpSum(self.terms + tuple(-t for t in other.terms))

    def scaled(self, factor: float) -> "ExpSum":
        return ExpSum(tuple(ExpTerm(factor * t.coefficient, t.base) for t in self.terms))

    def as_pairs(self):
        return [(t.coefficient, t.base) for t in self.terms]


@dataclass(frozen=True)
class ShiftedTerm:
    """Term ``coefficient * base**(k - shift)``."""

    coefficient: float
    base: float
    shift: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coefficient", _check_real("coefficient", self.coefficient))
        t = _check_real("base", self.base)
        if t <= 0.0:
            raise DomainError(f"base must be strictly positive, got {t!r}")
        object.__setattr__(self, "base", t)
        object.__setattr__(self, "shift", _check_real("shift", self.shift))


def _term_value(index, c, t, k):
    try:
        p = t ** k
    except OverflowError:
        raise RangeError(f"term {index} (base {t!r}) overflows at k={k!r}", index) from None
    v = c * p
    if math.isinf(v):
        raise RangeError(f"term {index} (base {t!r}) overflows at k={k!r}", index)
    return v


def evaluate(s: ExpSum, k: float) -> float:
    """Value of ``s`` at abscissa ``k``.

    Terms are visited in descending-base order and accumulated with
    ``math.fsum`` so that the heavy cancellation found near common zeros of
    synchronized sets does not destroy the result. Overflow of any single
    term raises :class:`RangeError` carrying the index of that term.
    """
    k = float(k)
    values = [_term_value(i, t.coefficient, t.base, k) for i, t in enumerate(s.terms)]
    total = math.fsum(values)
    if math.isinf(total):
        raise RangeError(f"sum overflows at k={k!r}")
    return total


def term_scale(s: ExpSum, k: float) -> float:
    """``sum_j |C_j| * T_j**k``, the magnitude against which cancellation is judged."""
    k = float(k)
    return math.fsum(abs(_term_value(i, t.coefficient, t.base, k)) for i, t in enumerate(s.terms))


def derivative(s: ExpSum, order: int = 1) -> ExpSum:
    """Derivative of the given order with respect to ``k``.

    Each coefficient is multiplied by ``ln T`` once per order, in sequence,
    so that ``derivative(derivative(s, m), n)`` and ``derivative(s, m + n)``
    agree bit for bit. Base 1 terms vanish for ``order >= 1``.
    """
    if int(order) != order or order < 0:
        raise DomainError(f"order must be a nonnegative integer, got {order!r}")
    order = int(order)
    if order == 0:
        return s
    out = []
    for t in s.terms:
        log_t = math.log(t.base)
        c = t.coefficient
        for _ in range(order):
            c *= log_t
        out.append(ExpTerm(c, t.base))
    return ExpSum(tuple(out))


def normalize_bases(s: ExpSum, delta: float = None):
    """Divide every base by ``t0 + delta`` so that all bases fall below one.

    Returns ``(divisor, normalized)`` with
    ``s(k) == divisor**k * normalized(k)``. When the largest base ``t0`` is
    already below one the sum is returned unchanged with divisor 1.
    ``delta`` defaults to ``0.01 * t0``.
    """
    if not s.terms:
        raise DomainError("cannot normalize an empty sum")
    t0 = s.terms[0].base
    if delta is None:
        delta = 0.01 * t0
    delta = float(delta)
    if not delta > 0.0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    if t0 < 1.0:
        return 1.0, s
    divisor = t0 + delta
    return divisor, ExpSum(tuple(ExpTerm(t.coefficient, t.base / divisor) for t in s.terms))


def collapse_shifts(terms: Iterable[ShiftedTerm]) -> ExpSum:
    """Rewrite shifted terms ``C t**(k - a)`` as ``(C t**-a) t**k`` and merge."""
    out = []
    for i, st in enumerate(terms):
        if not isinstance(st, ShiftedTerm):
            st = ShiftedTerm(*st)
        out.append(ExpTerm(st.coefficient * _term_value(i, 1.0, st.base, -st.shift), st.base))
    return ExpSum(tuple(out))


def collapse_log_sum(coefficients: Sequence[float], bases: Sequence[float]) -> float:
    """Coefficient ``C0`` such that ``sum_j C_j log_{a_j} x == C0 ln x``."""
    if len(coefficients) != len(bases):
        raise DomainError("coefficients and bases must have the same length")
    parts = []
    for c, a in zip(coefficients, bases):
        a = float(a)
        if not a > 0.0:
            raise DomainError(f"logarithm base must be positive, got {a!r}")
        if a == 1.0:
            raise DomainError("logarithm base 1 is undefined")
        parts.append(float(c) / math.log(a))
    return math.fsum(parts)


def merge_terms(s: Union[ExpSum, Iterable[TermLike]]) -> ExpSum:
    """Canonical form of an arbitrary collection of terms."""
    if isinstance(s, ExpSum):
        return ExpSum(s.terms)
    return ExpSum(tuple(s))
