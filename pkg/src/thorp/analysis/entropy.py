"""Relative entropy, total variation and the pairwise ``d`` divergence.

All logarithms are natural.  Total variation follows the unhalved
convention ``||p - q|| = sum |p - q|``; :func:`tv_distance` is the halved
variant.  ``0 log 0`` is defined as 0 by branching on zero entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, log, sqrt

import numpy as np

from .. import kernels
from ..errors import DomainError, UndefinedRatioError
from .distribution import PermDistribution

TOL = 1e-12


def _vec(p) -> np.ndarray:
    if isinstance(p, PermDistribution):
        return p.probs
    return np.asarray(p, dtype=np.float64)


def xlogx(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def l1_distance(p, q) -> float:
    """Unhalved total variation: sum of absolute differences, in [0, 2]."""
    if isinstance(p, PermDistribution) and isinstance(q, PermDistribution):
        if p.d != q.d:
            raise DomainError(f"decks differ: d={p.d} vs d={q.d}")
    a, b = _vec(p), _vec(q)
    if a.shape != b.shape:
        raise DomainError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(np.abs(a - b).sum())


def tv_distance(p, q) -> float:
    """Halved total variation, in [0, 1]."""
    return 0.5 * l1_distance(p, q)


def relative_entropy(p) -> float:
    """ENT(p) = sum p_i log(|V| p_i): KL divergence from uniform."""
    v = _vec(p)
    pos = v > 0
    terms = v[pos] * np.log(v.shape[0] * v[pos])
    # rounding can leave a negative residue of order 1e-17 near uniform
    return max(float(terms.sum()), 0.0)


def shannon_entropy(p) -> float:
    return float(-xlogx(_vec(p)).sum())


def uniform_like(p) -> np.ndarray:
    v = _vec(p)
    return np.full(v.shape[0], 1.0 / v.shape[0])


@dataclass(frozen=True)
class PinskerCheck:
    lhs: float
    rhs: float
    ok: bool


def pinsker_check(p, halved: bool = False) -> PinskerCheck:
    """Check ``||p - U|| <= sqrt(ENT(p) / 2)``.

    With ``halved=False`` the left side is the unhalved L1 distance, which is
    the convention used for mixing times throughout this package.  In that
    convention the bound asks for half of what Pinsker's inequality provides
    and fails for typical non-uniform p; ``halved=True`` gives the classical
    form.
    """
    dist = l1_distance(_vec(p), uniform_like(p))
    lhs = 0.5 * dist if halved else dist
    rhs = sqrt(0.5 * relative_entropy(p))
    return PinskerCheck(lhs, rhs, lhs <= rhs + TOL)


def d_scalar(p: float, q: float) -> float:
    """``p log p / 2 + q log q / 2 - m log m`` with m the midpoint of p and q."""
    if p < 0 or q < 0:
        raise DomainError(f"d(p, q) needs p, q >= 0, got ({p}, {q})")
    m = 0.5 * (p + q)

    def f(x):
        return x * log(x) if x > 0 else 0.0

    return 0.5 * f(p) + 0.5 * f(q) - f(m)


def d_distance(p, q) -> float:
    """Coordinatewise sum of :func:`d_scalar` over two probability vectors."""
    a, b = _vec(p), _vec(q)
    if a.shape != b.shape:
        raise DomainError(f"length mismatch: {a.shape} vs {b.shape}")
    if np.any(a < 0) or np.any(b < 0):
        raise DomainError("d(p, q) needs nonnegative vectors")
    return float((0.5 * xlogx(a) + 0.5 * xlogx(b) - xlogx(0.5 * (a + b))).sum())


@dataclass(frozen=True)
class EntropyDecomposition:
    """Chain-rule split of ENT(pi) at location ``cut``.

    ``per_location[i]`` is E ENT(pi, cut + i): the conditional relative
    entropy of the card at location ``cut + i`` given the cards above it.
    """

    cut: int
    residual: float
    per_location: np.ndarray

    @property
    def total(self) -> float:
        return self.residual + float(self.per_location.sum())


def _group_mass(keys: np.ndarray, probs: np.ndarray) -> np.ndarray:
    """For every row, the total probability of the rows sharing its key."""
    _, inverse = np.unique(keys, return_inverse=True)
    inverse = inverse.ravel()
    return np.bincount(inverse, weights=probs)[inverse]


def chain_rule_decompose(mu: PermDistribution, cut: int) -> EntropyDecomposition:
    n = mu.n
    if not 0 <= cut <= n - 1:
        raise DomainError(f"cut must lie in [0, {n - 1}], got {cut}")
    rows = mu.support()
    p = mu.probs[rows]
    # occupant[r, x] = card at location x
    occupant = np.argsort(kernels.all_perms(n)[rows], axis=1)
    weights = n ** np.arange(n, dtype=np.int64)

    def mass_above(k):
        # P(cards at locations k .. n-1) evaluated on every row
        if k >= n:
            return np.ones_like(p)
        return _group_mass(occupant[:, k:] @ weights[: n - k], p)

    masses = [mass_above(k) for k in range(cut, n + 1)]
    per_location = np.array([
        float(np.dot(p, np.log((k + 1) * masses[k - cut] / masses[k - cut + 1])))
        for k in range(cut, n)
    ])
    residual = float(np.dot(p, np.log(factorial(cut) * p / masses[0])))
    return EntropyDecomposition(cut, residual, per_location)


@dataclass(frozen=True)
class ProjectionCheck:
    dpq: float
    dPQ: float
    ok: bool


def pushforward(p, g, size: int | None = None) -> np.ndarray:
    v = _vec(p)
    if callable(g):
        g = np.array([g(i) for i in range(v.shape[0])], dtype=np.int64)
    g = np.asarray(g, dtype=np.int64)
    if g.shape != v.shape or np.any(g < 0):
        raise DomainError("g must map every point of V to a nonnegative label")
    return np.bincount(g, weights=v, minlength=size or 0)


def projection_check(p, q, g) -> ProjectionCheck:
    """Compare d(p, q) with d(g_* p, g_* q) for a map ``g`` on indices."""
    a, b = _vec(p), _vec(q)
    if callable(g):
        g = np.array([g(i) for i in range(a.shape[0])], dtype=np.int64)
    size = int(np.max(g)) + 1
    dpq = d_distance(a, b)
    dPQ = d_distance(pushforward(a, g, size), pushforward(b, g, size))
    return ProjectionCheck(dpq, dPQ, dpq >= dPQ - TOL)


def dent_ratio(mu) -> float:
    """``d(mu, U) log|V| / ENT(mu)``; bounded below by a universal constant."""
    v = _vec(mu)
    ent = relative_entropy(v)
    if ent <= 0:
        raise UndefinedRatioError("ENT(mu) = 0: mu is uniform, ratio undefined")
    return d_distance(v, uniform_like(v)) * log(v.shape[0]) / ent


def convexity_check(p: float, q1: float, q2: float, lam: float) -> bool:
    """Whether d(p, .) is convex along the segment [q1, q2] at weight lam."""
    if min(p, q1, q2) < 0 or not 0 <= lam <= 1:
        raise DomainError("need p, q1, q2 >= 0 and lam in [0, 1]")
    mid = d_scalar(p, lam * q1 + (1 - lam) * q2)
    return mid <= lam * d_scalar(p, q1) + (1 - lam) * d_scalar(p, q2) + TOL
