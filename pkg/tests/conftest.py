import math
import random

import numpy as np
import pytest

from expsum import ExpSum, ExpTerm


def scaled_grid(s: ExpSum, xs: np.ndarray) -> np.ndarray:
    """S(x) / sum |C| T**x on a grid, computed in log space with numpy."""
    c = np.array(s.coefficients)
    lb = np.log(np.array(s.bases))
    expo = np.outer(xs, lb) + np.log(np.abs(c))
    top = expo.max(axis=1, keepdims=True)
    w = np.exp(expo - top)
    return (w * np.sign(c)).sum(axis=1) / w.sum(axis=1)


def dense_sign_changes(s: ExpSum, lo: float, hi: float, n: int = 200_001):
    """Locations of sign changes of ``s`` on a uniform grid (bracket midpoints)."""
    xs = np.linspace(lo, hi, n)
    g = scaled_grid(s, xs)
    keep = g != 0.0
    xs, sg = xs[keep], np.sign(g[keep])
    idx = np.nonzero(sg[:-1] != sg[1:])[0]
    return [0.5 * (xs[i] + xs[i + 1]) for i in idx]


def random_sum(rng: random.Random, n: int, lo=0.05, hi=0.95) -> ExpSum:
    bases = []
    while len(bases) < n:
        t = rng.uniform(lo, hi)
        if all(abs(t - b) >= 1e-3 for b in bases):
            bases.append(t)
    terms = []
    for t in bases:
        mag = math.exp(rng.uniform(math.log(1e-2), math.log(1e2)))
        terms.append(ExpTerm(mag if rng.random() < 0.5 else -mag, t))
    return ExpSum(tuple(terms))


def separated_roots(rng: random.Random, n: int, lo=0.5, hi=10.0, min_gap=0.05):
    roots = []
    while len(roots) < n:
        r = rng.uniform(lo, hi)
        if all(abs(math.log(r) - math.log(q)) >= min_gap for q in roots):
            roots.append(r)
    return sorted(roots)


@pytest.fixture
def rng():
    return random.Random(20240601)


REFERENCE_FOUR = ExpSum.of((8, 0.9), (-6, 0.8), (-4, 0.6), (-3, 0.5))
REFERENCE_FIVE = ExpSum.of((1, 0.9), (-3, 0.8), (-4, 0.6), (-3, 0.5), (11, 0.01))
LIFT_THREE = ExpSum.of((1, math.exp(3)), (-6, math.exp(2)), (11, math.exp(1)), (-6, 1.0))
