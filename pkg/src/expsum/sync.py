"""Synchronization of pair functions.

Two procedures are provided.

*Residual-producing* synchronization (:func:`sync_at_point`) replaces one
coefficient of every pair so that all pairs share a characteristic point;
the difference between the old and the new coefficient is carried as a
residual single term, so the total is unchanged.

*Residual-free* synchronization (:func:`split_shared_mi`,
:func:`add_strong_terms`) distributes a single term among several pairs
in shares chosen so that every member ends up with the same
characteristic point. The common point is the root of a one-dimensional
share equation ``sum_i share_i(k) == total``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .core import ExpSum, ExpTerm, derivative, evaluate
from .errors import (
    DomainError,
    InfeasibleAdditionError,
    NoSolutionError,
    PairConstructionError,
    RangeError,
    SyncInfeasibleError,
)
from .pairfn import PairFunction, PairKind, characteristic_point, make_pair
from .roots import find_roots, scaled_value

__all__ = [
    "PointKind",
    "Side",
    "SyncResult",
    "SplitResult",
    "proportional_split",
    "sync_at_point",
    "pick_sync_point",
    "pairs_from_sum",
    "synchronize_sum",
    "split_shared_mi",
    "split_sum",
    "add_strong_terms",
]

MAX_EXPANSIONS = 20
MAX_BISECTIONS = 200
SHARE_RTOL = 1e-12
_SAME = 8 * 2.0 ** -52


@dataclass(frozen=True)
class PointKind:
    """Order of the derivative whose zero is the characteristic point."""

    order: int

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 0:
            raise DomainError(f"point order must be a nonnegative integer, got {self.order!r}")
        object.__setattr__(self, "order", int(self.order))

    @classmethod
    def derivative_zero(cls, j: int) -> "PointKind":
        return cls(j)

    @classmethod
    def parse(cls, text) -> "PointKind":
        if isinstance(text, PointKind):
            return text
        if isinstance(text, int):
            return cls(text)
        name = str(text).strip().lower()
        named = {"zero": 0, "extremum": 1, "inflection": 2}
        if name in named:
            return cls(named[name])
        if name.startswith("d") and name[1:].isdigit():
            return cls(int(name[1:]))
        raise DomainError(f"unknown point kind {text!r}")

    @property
    def name(self) -> str:
        return {0: "zero", 1: "extremum", 2: "inflection"}.get(self.order, f"d{self.order}")

    def __str__(self):
        return self.name


PointKind.ZERO = PointKind(0)
PointKind.EXTREMUM = PointKind(1)
PointKind.INFLECTION = PointKind(2)


class Side(str, enum.Enum):
    PI = "pi"
    MI = "mi"


@dataclass(frozen=True)
class SyncResult:
    synchronized: Tuple[PairFunction, ...]
    residuals: Tuple[ExpTerm, ...]
    sync_point: float
    point_kind: PointKind
    original: Tuple[PairFunction, ...] = ()

    def to_expsum(self) -> ExpSum:
        terms = [t for p in self.synchronized for t in p.as_expsum().terms]
        return ExpSum(tuple(terms) + tuple(self.residuals))


@dataclass(frozen=True)
class SplitResult:
    """Pairs sharing one characteristic point, with no residual terms.

    ``shares[i]`` holds the portions of strong terms attached to pair ``i``
    by :func:`add_strong_terms`; it is empty right after a split.
    """

    pairs: Tuple[PairFunction, ...]
    common_point: float
    point_kind: PointKind
    shares: Tuple[Tuple[ExpTerm, ...], ...] = ()
    history: Tuple[float, ...] = ()
    alternatives: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        if not self.shares:
            object.__setattr__(self, "shares", tuple(() for _ in self.pairs))

    def members(self) -> List[ExpSum]:
        return [ExpSum(p.as_expsum().terms + tuple(sh)) for p, sh in zip(self.pairs, self.shares)]

    def to_expsum(self) -> ExpSum:
        return ExpSum(tuple(t for m in self.members() for t in m.terms))


def proportional_split(c_p: float, mi_coefficients: Sequence[float], d: float = 0.0) -> List[float]:
    """Shares of a positive coefficient matched to several negative ones.

    ``share_n = (min(c_p, sum C_m) - d) * C_mn / sum C_m``, so the shares sum
    to ``min(c_p, sum C_m) - d`` and follow the proportions of the
    negative coefficients.
    """
    c_p = float(c_p)
    mi = [float(c) for c in mi_coefficients]
    if not c_p > 0 or not mi or any(not c > 0 for c in mi):
        raise DomainError("coefficients must be positive and the negative list nonempty")
    total = math.fsum(mi)
    cap = min(c_p, total)
    d = float(d)
    if not 0.0 <= d < cap:
        raise DomainError(f"d must satisfy 0 <= d < {cap!r}, got {d!r}")
    return [(cap - d) * c / total for c in mi]


def _homogeneous_kind(pairs: Sequence[PairFunction]) -> PairKind:
    if not pairs:
        raise DomainError("at least one pair function is required")
    kinds = {p.kind for p in pairs}
    if len(kinds) != 1:
        raise DomainError("pairs must all be HPFs or all LPFs")
    return kinds.pop()


def _log_factor(t: float, order: int) -> float:
    # |ln t|**order; both bases of a pair share the sign of ln t, so the sign cancels.
    return abs(math.log(t)) ** order


def sync_at_point(pairs: Sequence[PairFunction], kind, k0: float, adjust: Side = Side.PI) -> SyncResult:
    """Move every pair's characteristic point of ``kind`` to ``k0``.

    With ``adjust=Side.PI`` the positive coefficient becomes
    ``c_m (|ln t_m| / |ln t_p|)**j (t_m / t_p)**k0`` and the residual
    ``(c_p - c_p') t_p**k`` is emitted; ``Side.MI`` is the mirror image
    with residual ``(c_m' - c_m) t_m**k``. Residual signs follow from where
    ``k0`` lies relative to each pair's own point.
    """
    pk = PointKind.parse(kind)
    _homogeneous_kind(pairs)
    adjust = Side(adjust)
    k0 = float(k0)
    j = pk.order
    synced, residuals = [], []
    for i, p in enumerate(pairs):
        lp, lm = _log_factor(p.t_p, j), _log_factor(p.t_m, j)
        try:
            if adjust is Side.PI:
                new = p.c_m * (lm / lp) * (p.t_m / p.t_p) ** k0
                old = p.c_p
            else:
                new = p.c_p * (lp / lm) * (p.t_p / p.t_m) ** k0
                old = p.c_m
        except OverflowError:
            new = math.inf
        if not (new > 0.0 and math.isfinite(new)):
            raise SyncInfeasibleError(
                f"pair {i}: adjusted {adjust.value}-coefficient {new!r} is not a positive finite number", i
            )
        if characteristic_point(p, j) == k0 or abs(new - old) <= _SAME * max(new, old):
            new = old
        try:
            if adjust is Side.PI:
                q = make_pair(new, p.t_p, p.c_m, p.t_m)
                residual = ExpTerm(old - new, p.t_p)
            else:
                q = make_pair(p.c_p, p.t_p, new, p.t_m)
                residual = ExpTerm(new - old, p.t_m)
        except PairConstructionError as exc:
            raise SyncInfeasibleError(f"pair {i}: {exc}", i) from None
        synced.append(q)
        if residual.coefficient != 0.0:
            residuals.append(residual)
    return SyncResult(tuple(synced), tuple(residuals), k0, pk, tuple(pairs))


def pick_sync_point(pairs: Sequence[PairFunction], kind, residual_side: Side = Side.PI) -> float:
    """Synchronization point that makes every residual land on ``residual_side``.

    HPF sets take the largest individual point for positive residuals and
    the smallest for negative ones; LPF sets the reverse.
    """
    pk = PointKind.parse(kind)
    pair_kind = _homogeneous_kind(pairs)
    residual_side = Side(residual_side)
    points = [characteristic_point(p, pk.order) for p in pairs]
    take_max = (pair_kind is PairKind.HPF) == (residual_side is Side.PI)
    return max(points) if take_max else min(points)


def pairs_from_sum(s: ExpSum, d: float = 0.0):
    """Split the strongest term of ``s`` across the opposite-signed terms.

    If the strongest term is positive, it is shared among all negative
    terms in proportion to their magnitudes, producing HPFs; if it is
    negative, it is shared among the positive terms, producing LPFs.
    Returns ``(pairs, leftover)`` where ``leftover`` holds the terms that
    were not paired, so that pairs plus leftover reproduce ``s``.
    """
    if not s.terms:
        raise DomainError("cannot build pairs from an empty sum")
    if any(not 0.0 < t.base < 1.0 for t in s.terms):
        raise DomainError("pair functions need every base in (0, 1); normalize the sum first")
    strong = s.terms[0]
    sign = 1.0 if strong.coefficient > 0 else -1.0
    others = [t for t in s.terms[1:] if t.coefficient * sign < 0]
    same = [t for t in s.terms[1:] if t.coefficient * sign > 0]
    if not others:
        raise DomainError("the strongest term has no opposite-signed partner")
    mags = [abs(t.coefficient) for t in others]
    shares = proportional_split(abs(strong.coefficient), mags, d)
    if sign > 0:
        pairs = [make_pair(c, strong.base, m, t.base) for c, m, t in zip(shares, mags, others)]
    else:
        pairs = [make_pair(m, t.base, c, strong.base) for c, m, t in zip(shares, mags, others)]
    leftover = list(same)
    rest = abs(strong.coefficient) - math.fsum(shares)
    if rest != 0.0:
        leftover.insert(0, ExpTerm(sign * rest, strong.base))
    return pairs, leftover


def synchronize_sum(s: ExpSum, kind, k0: Optional[float] = None, adjust: Side = Side.PI,
                    residual_side: Side = Side.PI, d: float = 0.0) -> SyncResult:
    """Pair up ``s`` with :func:`pairs_from_sum` and synchronize the pairs.

    When ``k0`` is omitted it is chosen by :func:`pick_sync_point`. Unpaired
    terms are appended to the residuals so the result still sums to ``s``.
    """
    pairs, leftover = pairs_from_sum(s, d)
    if k0 is None:
        k0 = pick_sync_point(pairs, kind, residual_side)
    res = sync_at_point(pairs, kind, k0, adjust)
    return SyncResult(res.synchronized, res.residuals + tuple(leftover), res.sync_point,
                      res.point_kind, res.original)


def _logsumexp(xs):
    m = max(xs)
    return m + math.log(math.fsum(math.exp(x - m) for x in xs))


def split_shared_mi(pi_terms: Sequence, mi_term, kind) -> SplitResult:
    """Share one negative term among positive terms with no residual.

    Pair ``i`` receives ``C_mi(k) = C_pi (ln T_pi / ln T_m)**j (T_pi / T_m)**k``
    and the common point ``k0`` solves ``sum_i C_mi(k0) = C_m``. Every
    ``C_mi`` is monotone in ``k`` in the same direction, so the solution is
    unique; it is bracketed by widening a window around the mean of the
    individual points and then bisected.
    """
    pk = PointKind.parse(kind)
    pis = [t if isinstance(t, ExpTerm) else ExpTerm(*t) for t in pi_terms]
    mi = mi_term if isinstance(mi_term, ExpTerm) else ExpTerm(*mi_term)
    if not pis:
        raise DomainError("at least one positive term is required")
    if any(not t.coefficient > 0 for t in pis):
        raise DomainError("positive terms must have positive coefficients")
    c_m = abs(mi.coefficient)
    if c_m == 0.0:
        raise DomainError("the shared negative term has a zero coefficient")
    t_m = mi.base
    if not 0.0 < t_m < 1.0 or any(not 0.0 < t.base < 1.0 for t in pis):
        raise DomainError("bases must lie in (0, 1)")
    if any(t.base == t_m for t in pis):
        raise DomainError("positive bases must differ from the negative base")
    above = [t.base > t_m for t in pis]
    if any(above) and not all(above):
        raise DomainError("positive bases must be all above or all below the negative base")
    j = pk.order

    if len(pis) == 1:
        p = make_pair(pis[0].coefficient, pis[0].base, c_m, t_m)
        k0 = characteristic_point(p, j)
        return SplitResult((p,), k0, pk, history=(k0,))

    log_a = [math.log(t.coefficient) + j * math.log(math.log(t.base) / math.log(t_m)) for t in pis]
    rates = [math.log(t.base / t_m) for t in pis]
    target = math.log(c_m)

    def excess(k):
        return _logsumexp([a + r * k for a, r in zip(log_a, rates)]) - target

    increasing = rates[0] > 0
    points = [characteristic_point(make_pair(t.coefficient, t.base, c_m, t_m), j) for t in pis]
    centre = math.fsum(points) / len(points)
    bracket = None
    for e in range(MAX_EXPANSIONS + 1):
        w = 2.0 ** e
        lo, hi = centre - w, centre + w
        flo, fhi = excess(lo), excess(hi)
        if flo == 0.0:
            bracket = (lo, lo)
            break
        if fhi == 0.0:
            bracket = (hi, hi)
            break
        if (flo < 0) != (fhi < 0):
            bracket = (lo, hi)
            break
    if bracket is None:
        raise NoSolutionError(f"no bracket for the share equation within +-2**{MAX_EXPANSIONS} of {centre!r}")
    lo, hi = bracket
    k0 = lo
    if lo != hi:
        # Orient so that excess(lo) < 0 < excess(hi).
        if not increasing:
            lo, hi = hi, lo
        for _ in range(MAX_BISECTIONS):
            k0 = 0.5 * (lo + hi)
            f = excess(k0)
            if f == 0.0 or k0 == lo or k0 == hi:
                break
            if f < 0:
                lo = k0
            else:
                hi = k0
    if abs(math.expm1(excess(k0))) > SHARE_RTOL:
        raise NoSolutionError(f"share equation did not converge at k0={k0!r}")
    pairs = []
    for i, (t, a, r) in enumerate(zip(pis, log_a, rates)):
        try:
            pairs.append(make_pair(t.coefficient, t.base, math.exp(a + r * k0), t_m))
        except (PairConstructionError, OverflowError) as exc:
            raise NoSolutionError(f"share {i} is not representable at k0={k0!r}: {exc}") from None
    return SplitResult(tuple(pairs), k0, pk, history=(k0,))


def split_sum(s: ExpSum, kind) -> Tuple[SplitResult, List[ExpTerm]]:
    """Split the single negative term of ``s`` among its positive terms.

    Positive terms with bases on the more populated side of the negative
    base are split; the remaining positive terms are returned alongside.
    """
    neg = [t for t in s.terms if t.coefficient < 0]
    pos = [t for t in s.terms if t.coefficient > 0]
    if len(neg) != 1 or not pos:
        raise DomainError("splitting needs exactly one negative term and at least one positive term")
    mi = neg[0]
    above = [t for t in pos if t.base > mi.base]
    below = [t for t in pos if t.base < mi.base]
    chosen, rest = (above, below) if len(above) >= len(below) else (below, above)
    return split_shared_mi(chosen, mi, kind), rest


def _share_curves(members: Sequence[ExpSum], order: int, strong: ExpTerm) -> List[ExpSum]:
    # share_i(k) solves D_i(k) + sign * share * ln^j(T_q) T_q**k = 0 for the
    # j-th derivative D_i of member i; as a function of k it is itself a sum
    # of exponentials with bases T_t / T_q.
    sign = 1.0 if strong.coefficient > 0 else -1.0
    lq = 1.0
    log_q = math.log(strong.base)
    for _ in range(order):
        lq *= log_q
    if lq == 0.0:
        raise DomainError("a base-1 strong term has no influence on derivatives")
    curves = []
    for m in members:
        dm = derivative(m, order)
        curves.append(ExpSum(tuple(ExpTerm(-t.coefficient / (sign * lq), t.base / strong.base) for t in dm.terms)))
    return curves


def add_strong_terms(split: SplitResult, strong_terms: Sequence, kind=None) -> SplitResult:
    """Distribute strong terms over a synchronized split, one at a time.

    For each strong term (added in ascending base order) every member gets
    the share that puts the zero of its ``kind``-th derivative at a new
    common point, and the shares must sum to the term's magnitude. The
    share-sum equation is solved over windows widening around the previous
    common point; among feasible roots (all shares positive) the leftmost
    is taken and the others are kept in ``alternatives``.
    """
    pk = PointKind.parse(split.point_kind if kind is None else kind)
    terms = [t if isinstance(t, ExpTerm) else ExpTerm(*t) for t in strong_terms]
    if not terms:
        return split
    orientation = _homogeneous_kind(split.pairs)
    if orientation is PairKind.HPF:
        floor = max(p.t_m for p in split.pairs)
        for t in terms:
            if not t.coefficient > 0:
                raise DomainError(f"strong terms added to HPFs must be positive, got {t!r}")
            if not t.base > floor:
                raise DomainError(f"strong term base {t.base!r} must exceed every negative base ({floor!r})")
    else:
        floor = max(p.t_p for p in split.pairs)
        for t in terms:
            if not t.coefficient < 0:
                raise DomainError(f"strong terms added to LPFs must be negative, got {t!r}")
            if not t.base > floor:
                raise DomainError(f"strong term base {t.base!r} must exceed every positive base ({floor!r})")

    shares = [list(sh) for sh in split.shares]
    point = split.common_point
    history = list(split.history) or [point]
    alternatives: Tuple[float, ...] = ()
    for term in sorted(terms, key=lambda t: t.base):
        members = [ExpSum(p.as_expsum().terms + tuple(sh)) for p, sh in zip(split.pairs, shares)]
        curves = _share_curves(members, pk.order, term)
        target = abs(term.coefficient)
        equation = ExpSum(tuple(t for c in curves for t in c.terms) + (ExpTerm(-target, 1.0),))
        chosen = None
        for e in range(MAX_EXPANSIONS + 1):
            w = 2.0 ** e
            try:
                roots = find_roots(equation, (point - w, point + w)) if equation.terms else []
            except DomainError:
                roots = []
            feasible = []
            for r in roots:
                if all(scaled_value(c, r) > 0 for c in curves):
                    try:
                        values = [evaluate(c, r) for c in curves]
                    except RangeError:
                        continue
                    if all(v > 0 for v in values):
                        feasible.append((r, values))
            if feasible:
                chosen = feasible[0]
                alternatives = tuple(r for r, _ in feasible[1:])
                break
        if chosen is None:
            raise InfeasibleAdditionError(
                f"strong term (coefficient {term.coefficient!r}, base {term.base!r}) "
                "cannot be shared with positive portions", term
            )
        point, values = chosen
        sign = 1.0 if term.coefficient > 0 else -1.0
        for sh, v in zip(shares, values):
            sh.append(ExpTerm(sign * v, term.base))
        history.append(point)
    return SplitResult(split.pairs, point, pk, tuple(tuple(sh) for sh in shares), tuple(history), alternatives)
