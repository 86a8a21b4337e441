"""Exact mixing times and the entropy-contraction experiment."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from ..errors import CapacityError, DomainError
from .distribution import (
    PermDistribution,
    _check_capacity,
    convolve_law,
    shuffle_law,
    step_distribution,
)
from .entropy import l1_distance, relative_entropy

MAX_ROUNDS = 10_000
CONTRACTION_SUPPORT_D3 = 256


@dataclass(frozen=True)
class MixingProfile:
    d: int
    threshold: float
    distances: tuple[float, ...]
    entropies: tuple[float, ...]
    mixing_time: int
    monotone: bool


def mixing_profile(d: int, threshold: float = 0.25,
                   extra_rounds: int = 0) -> MixingProfile:
    """Unhalved L1 distance to uniform per round, from the identity.

    The walk is on a group, so the identity start attains the worst case.
    Evolution stops ``extra_rounds`` after the first round at or below the
    threshold.
    """
    _check_capacity(d)
    if not 0 < threshold <= 2:
        raise DomainError(f"threshold must lie in (0, 2], got {threshold}")
    uniform = PermDistribution.uniform(d)
    law = PermDistribution.point_mass(d, 0)
    distances = [l1_distance(law, uniform)]
    entropies = [relative_entropy(law)]
    hit = 0 if distances[0] <= threshold else None
    while hit is None or len(distances) - 1 < hit + extra_rounds:
        if len(distances) > MAX_ROUNDS:
            raise CapacityError("distance never reached the threshold",
                                bound=f"{MAX_ROUNDS} rounds")
        law = step_distribution(law)
        distances.append(l1_distance(law, uniform))
        entropies.append(relative_entropy(law))
        if hit is None and distances[-1] <= threshold:
            hit = len(distances) - 1
    monotone = all(b <= a + 1e-15 for a, b in zip(distances, distances[1:]))
    return MixingProfile(d, threshold, tuple(distances), tuple(entropies), hit,
                         monotone)


def mixing_time(d: int, threshold: float = 0.25) -> int:
    """Smallest t with ``||P^t(id, .) - U|| <= threshold`` (unhalved)."""
    return mixing_profile(d, threshold).mixing_time


def entropy_decay(d: int, rounds: int) -> list[float]:
    """ENT of the shuffle law after 0 .. rounds rounds from the identity."""
    _check_capacity(d)
    law = PermDistribution.point_mass(d, 0)
    out = [relative_entropy(law)]
    for _ in range(rounds):
        law = step_distribution(law)
        out.append(relative_entropy(law))
    return out


# -- contraction ------------------------------------------------------------


@dataclass(frozen=True)
class ContractionSample:
    kind: str
    support: int
    ent_before: float
    ent_after: float

    @property
    def ratio(self) -> float:
        return self.ent_after / self.ent_before


@dataclass(frozen=True)
class ContractionReport:
    d: int
    samples: tuple[ContractionSample, ...]
    excluded: int = 0
    c_hat: float = field(init=False)
    max_ratio: float = field(init=False)

    def __post_init__(self):
        worst = max((s.ratio for s in self.samples), default=0.0)
        object.__setattr__(self, "max_ratio", worst)
        object.__setattr__(self, "c_hat", self.d * (1.0 - worst))

    @property
    def strict(self) -> bool:
        return all(s.ent_after < s.ent_before for s in self.samples)


def contract(mu: PermDistribution, d: int | None = None) -> tuple[float, float]:
    """``(ENT(mu), ENT(X_d o mu))`` with X_d the d-round shuffle, d = mu.d."""
    d = mu.d if d is None else d
    if d == 3 and mu.support().size > CONTRACTION_SUPPORT_D3:
        raise CapacityError("mu has too large a support for d = 3",
                            bound=f"support <= {CONTRACTION_SUPPORT_D3}")
    after = convolve_law(shuffle_law(mu.d, d), mu)
    return relative_entropy(mu), relative_entropy(after)


def sample_mu(d: int, kind: str, rng: np.random.Generator) -> PermDistribution:
    """Draw a random law on S_n: a point mass, sparse mixture or dense vector."""
    size = factorial(1 << d)
    dense_support = min(size, CONTRACTION_SUPPORT_D3)
    if kind == "point":
        return PermDistribution.point_mass(d, int(rng.integers(size)))
    if kind == "sparse":
        k = int(rng.integers(2, min(16, size) + 1))
    elif kind == "dense":
        k = dense_support
    else:
        raise DomainError(f"unknown sample kind {kind!r}")
    ranks = rng.choice(size, size=k, replace=False)
    return PermDistribution.from_weights(d, ranks, rng.dirichlet(np.ones(k)))


SAMPLE_KINDS = ("point", "sparse", "dense")


def contraction_experiment(d: int, samples: int = 50,
                           seed: int | None = 0) -> ContractionReport:
    """Exact ENT(X_d o mu) / ENT(mu) over ``samples`` random non-uniform mu."""
    _check_capacity(d)
    rng = np.random.default_rng(seed)
    out = []
    excluded = 0
    for i in range(samples):
        kind = SAMPLE_KINDS[i % len(SAMPLE_KINDS)]
        mu = sample_mu(d, kind, rng)
        before, after = contract(mu)
        if before <= 1e-12:
            excluded += 1
            continue
        out.append(ContractionSample(kind, int(mu.support().size), before, after))
    return ContractionReport(d, tuple(out), excluded)
