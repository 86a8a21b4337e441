"""Randomised property suites for the entropy inequalities.

Every trial draws from its own generator seeded with ``(seed, suite, i)`` so
results do not depend on how trials are batched or ordered.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .distribution import PermDistribution
from .entropy import (
    TOL,
    chain_rule_decompose,
    convexity_check,
    d_distance,
    d_scalar,
    dent_ratio,
    pinsker_check,
    projection_check,
    relative_entropy,
)

SUITES = ("projection", "convexity", "pinsker", "mixture_identity", "chain_rule")


@dataclass(frozen=True)
class SuiteResult:
    name: str
    trials: int
    violations: int
    worst: float  # largest observed excess over the bound (<= tol when passing)

    @property
    def ok(self) -> bool:
        return self.violations == 0


def trial_rng(seed: int, suite: str, i: int) -> np.random.Generator:
    return np.random.default_rng([seed, SUITES.index(suite) if suite in SUITES
                                  else len(SUITES), i])


def random_simplex(rng: np.random.Generator, size: int) -> np.ndarray:
    """A probability vector from a mixed family: dense, peaked, sparse or a point."""
    kind = rng.integers(4)
    if kind == 3:
        p = np.zeros(size)
        p[rng.integers(size)] = 1.0
        return p
    alpha = (0.1, 1.0, 10.0)[kind]
    p = rng.dirichlet(np.full(size, alpha))
    if rng.random() < 0.3:
        p[rng.random(size) < 0.5] = 0.0
        if p.sum() == 0:
            p[rng.integers(size)] = 1.0
        p /= p.sum()
    return p


def projection_suite(trials: int, seed: int, size: int = 24,
                     image: int = 5) -> SuiteResult:
    bad, worst = 0, -np.inf
    for i in range(trials):
        rng = trial_rng(seed, "projection", i)
        p, q = random_simplex(rng, size), random_simplex(rng, size)
        g = rng.integers(image, size=size)
        res = projection_check(p, q, g)
        worst = max(worst, res.dPQ - res.dpq)
        bad += not res.ok
    return SuiteResult("projection", trials, bad, float(worst))


def convexity_suite(trials: int, seed: int) -> SuiteResult:
    bad, worst = 0, -np.inf
    for i in range(trials):
        rng = trial_rng(seed, "convexity", i)
        p, q1, q2 = rng.random(3) * rng.choice([1.0, 10.0])
        if rng.random() < 0.1:
            q1 = 0.0
        lam = float(rng.random())
        mid = d_scalar(p, lam * q1 + (1 - lam) * q2)
        worst = max(worst, mid - lam * d_scalar(p, q1) - (1 - lam) * d_scalar(p, q2))
        bad += not convexity_check(p, q1, q2, lam)
    return SuiteResult("convexity", trials, bad, float(worst))


def pinsker_suite(trials: int, seed: int, size: int = 24,
                  halved: bool = False) -> SuiteResult:
    bad, worst = 0, -np.inf
    for i in range(trials):
        rng = trial_rng(seed, "pinsker", i)
        res = pinsker_check(random_simplex(rng, size), halved=halved)
        worst = max(worst, res.lhs - res.rhs)
        bad += not res.ok
    name = "pinsker_halved" if halved else "pinsker"
    return SuiteResult(name, trials, bad, float(worst))


def mixture_identity_suite(trials: int, seed: int, size: int = 24) -> SuiteResult:
    """d(p, q) against the mean entropy minus the entropy of the mixture."""
    bad, worst = 0, 0.0
    for i in range(trials):
        rng = trial_rng(seed, "mixture_identity", i)
        p, q = random_simplex(rng, size), random_simplex(rng, size)
        rhs = (0.5 * relative_entropy(p) + 0.5 * relative_entropy(q)
               - relative_entropy(0.5 * (p + q)))
        err = abs(d_distance(p, q) - rhs)
        worst = max(worst, err)
        bad += err > TOL
    return SuiteResult("mixture_identity", trials, bad, float(worst))


def chain_rule_suite(trials: int, seed: int, d: int = 2,
                     tol: float = 1e-9) -> SuiteResult:
    size = factorial(1 << d)
    bad, worst = 0, 0.0
    for i in range(trials):
        rng = trial_rng(seed, "chain_rule", i)
        mu = PermDistribution(d, random_simplex(rng, size))
        cut = int(rng.integers(1 << d))
        dec = chain_rule_decompose(mu, cut)
        err = abs(relative_entropy(mu) - dec.total)
        worst = max(worst, err)
        bad += err > tol
    return SuiteResult("chain_rule", trials, bad, float(worst))


@dataclass(frozen=True)
class DentSweep:
    size: int
    trials: int
    min_ratio: float


def dent_sweep(trials: int, seed: int, size: int,
               min_entropy: float = 1e-6) -> DentSweep:
    """Empirical minimum of d(mu, U) log|V| / ENT(mu) over random mu."""
    rng = np.random.default_rng([seed, size])
    lo = np.inf
    done = 0
    while done < trials:
        mu = random_simplex(rng, size)
        if rng.random() < 0.25:
            # pull towards uniform to probe the small-entropy regime
            eps = 10 ** -rng.uniform(0, 3)
            mu = (1 - eps) / size + eps * mu
        if relative_entropy(mu) < min_entropy:
            continue
        lo = min(lo, dent_ratio(mu))
        done += 1
    return DentSweep(size, trials, float(lo))
