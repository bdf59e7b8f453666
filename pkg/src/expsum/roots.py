"""Real roots, extrema and inflection points of exponential sums.

Isolation works by deflation. Multiplying ``S(k)`` by ``T_w**-k`` (``T_w``
the weakest base) keeps its zeros and turns the weakest term into a
constant, which the derivative then removes::

    d/dk [S(k) T_w**-k] = sum_{j != w} C_j ln(T_j / T_w) (T_j / T_w)**k

That derivative has one term fewer, so its zeros are found recursively.
They cut the window into pieces on which ``S(k) T_w**-k`` is monotone, so
each piece holds at most one root, found by bisection. A critical point
where the function touches zero without changing sign is reported once,
flagged tangential. The same recursion is why the number of roots never
exceeds the number of sign alternations of the coefficients.

All sign decisions use the scaled value ``S(k) / sum_j |C_j| T_j**k``,
computed in log space so that nothing overflows inside the window. When
that value is too small for its sign to be trusted, the sign of the sum
itself is recomputed in 60-digit decimal arithmetic, which keeps close
pairs of roots apart.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Sequence, Tuple

from .core import ExpSum, ExpTerm, derivative
from .errors import DomainError, IdenticallyZeroError

__all__ = [
    "Root",
    "Asymptote",
    "RootReport",
    "scaled_value",
    "isolate_roots",
    "find_roots",
    "sign_change_bound",
    "default_window",
    "analyze",
    "intersections",
    "solve_level",
    "polynomial_lift",
    "asymptotes",
]

DEFAULT_TOL = 1e-10
_EPS = 2.0 ** -52
EXACT_DIGITS = 60
MAX_BISECTIONS = 200
WINDOW_PAD = 10.0


@dataclass(frozen=True)
class Root:
    x: float
    tangential: bool = False


class Asymptote(str, enum.Enum):
    TO_ZERO_ABOVE = "ToZeroAbove"
    TO_ZERO_BELOW = "ToZeroBelow"
    TO_PLUS_INFINITY = "ToPlusInfinity"
    TO_MINUS_INFINITY = "ToMinusInfinity"
    CONSTANT = "Constant"


@dataclass(frozen=True)
class RootReport:
    roots: Tuple[float, ...]
    extrema: Tuple[float, ...]
    inflections: Tuple[float, ...]
    sign_change_bound: int
    window: Tuple[float, float]
    left_asymptote: Asymptote
    right_asymptote: Asymptote
    tangential_roots: Tuple[float, ...] = ()
    extremum_kinds: Tuple[str, ...] = field(default=())


def _exact_terms(s: ExpSum):
    # Coefficients and base logarithms for the decimal sign check. Both are
    # exact conversions of the stored floats, rounded only by the ln.
    with localcontext() as ctx:
        ctx.prec = EXACT_DIGITS
        return [(Decimal(t.coefficient), Decimal(t.base).ln()) for t in s.terms]


class _Scaled:
    """``S(k) / sum |C_j| T_j**k`` from log-coefficients and log-bases."""

    __slots__ = ("lc", "sg", "lb", "exact")

    def __init__(self, lc, sg, lb, exact=None):
        self.lc = lc
        self.sg = sg
        self.lb = lb
        self.exact = exact

    @classmethod
    def from_sum(cls, s: ExpSum):
        return cls(
            [math.log(abs(t.coefficient)) for t in s.terms],
            [1.0 if t.coefficient > 0 else -1.0 for t in s.terms],
            [math.log(t.base) for t in s.terms],
            _exact_terms(s),
        )

    def __call__(self, k):
        e = [c + b * k for c, b in zip(self.lc, self.lb)]
        m = max(e)
        w = [math.exp(x - m) for x in e]
        return math.fsum(s * x for s, x in zip(self.sg, w)) / math.fsum(w)

    def noise(self, k):
        """Rounding-level bound on ``|self(k)|``; smaller values carry no sign."""
        spread = max(abs(c) for c in self.lc) + abs(k) * max(abs(b) for b in self.lb)
        return 32 * _EPS * (len(self.lc) + spread)

    def sign(self, k, v):
        """Sign of the function at ``k`` given its scaled value ``v``."""
        if abs(v) > self.noise(k) or self.exact is None:
            return _sign(v)
        with localcontext() as ctx:
            ctx.prec = EXACT_DIGITS
            dk = Decimal(k)
            total = sum(c * (lt * dk).exp() for c, lt in self.exact)
        return (total > 0) - (total < 0)

    def deflated(self):
        """Scaled form of ``d/dk [S(k) T_w**-k]``."""
        lw = min(self.lb)
        lc, sg, lb = [], [], []
        for c, s, b in zip(self.lc, self.sg, self.lb):
            if b == lw:
                continue
            lc.append(c + math.log(b - lw))
            sg.append(s)
            lb.append(b - lw)
        return _Scaled(lc, sg, lb)


def scaled_value(s: ExpSum, k: float) -> float:
    """Value of ``s`` at ``k`` divided by its term scale; lies in [-1, 1]."""
    if not s.terms:
        return 0.0
    return _Scaled.from_sum(s)(float(k))


def _sign(v):
    return (v > 0) - (v < 0)


def _bisect(g, a, b, sa):
    for _ in range(MAX_BISECTIONS):
        m = 0.5 * (a + b)
        # Resolution is relative to max(1, |k|); nothing is gained by
        # chasing a root at 0 down to subnormal widths.
        if m <= a or m >= b or b - a <= 4 * _EPS * max(1.0, abs(a), abs(b)):
            break
        sm = g.sign(m, g(m))
        if sm == 0:
            return m
        if sm == sa:
            a = m
        else:
            b = m
    return a if abs(g(a)) <= abs(g(b)) else b


def _isolate(g: _Scaled, lo, hi, tol) -> List[Root]:
    if len(g.lc) <= 1:
        return []
    crit = [r.x for r in _isolate(g.deflated(), lo, hi, tol)]
    points = [lo] + sorted({c for c in crit if lo < c < hi}) + [hi]
    vals = [g(p) for p in points]
    signs = [g.sign(p, v) for p, v in zip(points, vals)]
    zero = [sg == 0 for sg in signs]
    found = []
    for i, p in enumerate(points):
        if zero[i]:
            interior = 0 < i < len(points) - 1
            found.append(Root(p, interior and signs[i - 1] == signs[i + 1] != 0))
        elif 0 < i < len(points) - 1:
            # A dip toward zero that does not cross it counts as a touching root.
            if signs[i - 1] == signs[i] == signs[i + 1] and abs(vals[i]) <= tol:
                zero[i] = True
                found.append(Root(p, True))
    for i in range(len(points) - 1):
        if zero[i] or zero[i + 1]:
            continue
        if signs[i] * signs[i + 1] < 0:
            found.append(Root(_bisect(g, points[i], points[i + 1], signs[i])))
    found.sort(key=lambda r: r.x)
    return found


def _check_window(window):
    lo, hi = (float(w) for w in window)
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi:
        raise DomainError(f"window must satisfy lo < hi with finite ends, got {window!r}")
    return lo, hi


def isolate_roots(s: ExpSum, window=None, tol: float = DEFAULT_TOL) -> List[Root]:
    """Roots of ``s`` inside ``window`` with tangential flags."""
    if not s.terms:
        raise IdenticallyZeroError("the sum is identically zero")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    lo, hi = _check_window(default_window(s) if window is None else window)
    return _isolate(_Scaled.from_sum(s), lo, hi, tol)


def find_roots(s: ExpSum, window=None, tol: float = DEFAULT_TOL) -> List[float]:
    """Sorted real roots of ``s`` in ``window``.

    ``tol`` bounds ``|s(r)| / sum |C_j| T_j**r`` for a critical point ``r``
    to be accepted as a touching root; roots with a sign change are refined
    to full double precision.
    """
    return [r.x for r in isolate_roots(s, window, tol)]


def sign_change_bound(s: ExpSum) -> int:
    """Number of sign alternations of the coefficients in base order.

    This bounds the number of real roots counted with multiplicity.
    """
    signs = [_sign(t.coefficient) for t in s.terms if t.coefficient != 0.0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _dominance_bounds(s: ExpSum):
    # Beyond these abscissae one term outweighs all others combined.
    terms = s.terms
    n = len(terms)
    if n < 2:
        return None
    strong, weak = terms[0], terms[-1]
    right = max(
        math.log((n - 1) * abs(t.coefficient) / abs(strong.coefficient)) / math.log(strong.base / t.base)
        for t in terms[1:]
    )
    left = min(
        math.log((n - 1) * abs(t.coefficient) / abs(weak.coefficient)) / math.log(weak.base / t.base)
        for t in terms[:-1]
    )
    return left, right


def _crossovers(s: ExpSum):
    terms = s.terms
    out = []
    for i in range(len(terms)):
        for j in range(i + 1, len(terms)):
            a, b = terms[i], terms[j]
            out.append(math.log(abs(b.coefficient) / abs(a.coefficient)) / math.log(a.base / b.base))
    return out


def default_window(s: ExpSum) -> Tuple[float, float]:
    """Window holding every sign change of ``s`` and of its first two derivatives.

    It is the span of pairwise term crossovers padded by 10 units, widened
    if needed to the abscissae beyond which a single term dominates.
    """
    lo, hi = math.inf, -math.inf
    for d in (s, derivative(s, 1), derivative(s, 2)):
        cross = _crossovers(d)
        if cross:
            lo = min(lo, min(cross) - WINDOW_PAD)
            hi = max(hi, max(cross) + WINDOW_PAD)
        bounds = _dominance_bounds(d)
        if bounds:
            lo = min(lo, bounds[0] - 1.0)
            hi = max(hi, bounds[1] + 1.0)
    if not lo < hi:
        return (-WINDOW_PAD, WINDOW_PAD)
    return (lo, hi)


def _limit_label(term: ExpTerm, toward_plus: bool) -> Asymptote:
    if term.base == 1.0:
        return Asymptote.CONSTANT
    grows = (term.base > 1.0) == toward_plus
    if grows:
        return Asymptote.TO_PLUS_INFINITY if term.coefficient > 0 else Asymptote.TO_MINUS_INFINITY
    return Asymptote.TO_ZERO_ABOVE if term.coefficient > 0 else Asymptote.TO_ZERO_BELOW


def asymptotes(s: ExpSum) -> Tuple[Asymptote, Asymptote]:
    """Behaviour as ``k -> -inf`` (weakest term) and ``k -> +inf`` (strongest term)."""
    if not s.terms:
        return Asymptote.CONSTANT, Asymptote.CONSTANT
    return _limit_label(s.terms[-1], False), _limit_label(s.terms[0], True)


def _extremum_kind(s: ExpSum, x, neighbour_gap):
    ds = derivative(s, 1)
    if not ds:
        return "flat"
    d1 = _Scaled.from_sum(ds)
    left, right = d1(x - neighbour_gap), d1(x + neighbour_gap)
    if left > 0 > right:
        return "max"
    if left < 0 < right:
        return "min"
    return "stationary"


def _roots_or_empty(s, window, tol):
    if not s.terms:
        return []
    return isolate_roots(s, window, tol)


def analyze(s: ExpSum, window=None, tol: float = DEFAULT_TOL) -> RootReport:
    """Roots, extrema, inflections, sign bound and asymptotes of ``s``."""
    if not s.terms:
        raise IdenticallyZeroError("the sum is identically zero")
    window = _check_window(default_window(s) if window is None else window)
    roots = isolate_roots(s, window, tol)
    d1, d2 = derivative(s, 1), derivative(s, 2)
    extrema = [r.x for r in _roots_or_empty(d1, window, tol)]
    inflections = [r.x for r in _roots_or_empty(d2, window, tol)]
    kinds = []
    for i, x in enumerate(extrema):
        gaps = [1e-3 * (1.0 + abs(x))]
        if i > 0:
            gaps.append(0.5 * (x - extrema[i - 1]))
        if i + 1 < len(extrema):
            gaps.append(0.5 * (extrema[i + 1] - x))
        kinds.append(_extremum_kind(s, x, min(gaps)))
    left, right = asymptotes(s)
    return RootReport(
        roots=tuple(r.x for r in roots),
        extrema=tuple(extrema),
        inflections=tuple(inflections),
        sign_change_bound=sign_change_bound(s),
        window=window,
        left_asymptote=left,
        right_asymptote=right,
        tangential_roots=tuple(r.x for r in roots if r.tangential),
        extremum_kinds=tuple(kinds),
    )


def intersections(s1: ExpSum, s2: ExpSum, window=None, tol: float = DEFAULT_TOL) -> List[float]:
    """Abscissae where the curves ``s1`` and ``s2`` meet.

    Raises :class:`IdenticallyZeroError` when the curves coincide everywhere.
    """
    diff = s1 - s2
    if not diff.terms:
        raise IdenticallyZeroError("the curves coincide everywhere")
    return find_roots(diff, window, tol)


def solve_level(s: ExpSum, level: float, window=None, tol: float = DEFAULT_TOL) -> List[float]:
    """Solutions of ``s(k) == level``."""
    shifted = s + ExpSum.of((-float(level), 1.0))
    if not shifted.terms:
        raise IdenticallyZeroError(f"the sum equals {level!r} everywhere")
    return find_roots(shifted, window, tol)


def polynomial_lift(positive_roots: Sequence[float], scale: float = 1.0) -> ExpSum:
    """Sum whose real roots are exactly ``ln r`` for the given positive ``r``.

    ``scale * prod(t - r_i)`` is expanded with exact rational arithmetic and
    ``t**n`` is read as ``(e**n)**k`` under ``t = e**k``.
    """
    roots = [float(r) for r in positive_roots]
    if any(not (r > 0 and math.isfinite(r)) for r in roots):
        raise DomainError("lift roots must be positive and finite")
    if len(set(roots)) != len(roots):
        raise DomainError("lift roots must be distinct")
    poly = [Fraction(1)]  # ascending powers
    for r in roots:
        fr = Fraction(r)
        nxt = [Fraction(0)] * (len(poly) + 1)
        for i, a in enumerate(poly):
            nxt[i + 1] += a
            nxt[i] -= fr * a
        poly = nxt
    fs = Fraction(float(scale))
    return ExpSum(tuple(ExpTerm(float(fs * a), math.exp(n)) for n, a in enumerate(poly)))
