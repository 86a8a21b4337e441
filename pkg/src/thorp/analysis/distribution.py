"""Dense probability vectors over S_n and their exact evolution."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

import numpy as np

from .. import kernels
from ..core import DeckParams, Permutation, rank
from ..errors import CapacityError, DomainError
from ..shuffle import round_maps

MAX_GROUP_D = 3  # n! = 40320
SUM_TOL = 1e-12


def _check_capacity(d: int) -> None:
    if d > MAX_GROUP_D:
        raise CapacityError(
            f"exact distributions over S_n need d <= {MAX_GROUP_D}, got d={d}",
            bound=f"n! <= {factorial(1 << MAX_GROUP_D)} (d <= {MAX_GROUP_D})")


@dataclass(frozen=True, eq=False)
class PermDistribution:
    """Probability vector over S_n indexed by Lehmer rank, n = 2**d <= 8."""

    d: int
    probs: np.ndarray

    def __post_init__(self):
        DeckParams(self.d)
        _check_capacity(self.d)
        probs = np.array(self.probs, dtype=np.float64).ravel()
        size = factorial(1 << self.d)
        if probs.shape[0] != size:
            raise DomainError(f"expected {size} probabilities, got {probs.shape[0]}")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise DomainError("probabilities must be finite and nonnegative")
        if abs(probs.sum() - 1.0) > SUM_TOL:
            raise DomainError(f"probabilities sum to {probs.sum()!r}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def n(self) -> int:
        return 1 << self.d

    @property
    def size(self) -> int:
        return self.probs.shape[0]

    @classmethod
    def uniform(cls, d: int) -> "PermDistribution":
        _check_capacity(d)
        size = factorial(1 << d)
        return cls(d, np.full(size, 1.0 / size))

    @classmethod
    def point_mass(cls, d: int, perm: Permutation | int = 0) -> "PermDistribution":
        _check_capacity(d)
        probs = np.zeros(factorial(1 << d))
        probs[perm if isinstance(perm, (int, np.integer)) else rank(perm)] = 1.0
        return cls(d, probs)

    @classmethod
    def from_weights(cls, d: int, ranks, weights) -> "PermDistribution":
        """Normalise nonnegative ``weights`` placed on ``ranks``."""
        _check_capacity(d)
        probs = np.zeros(factorial(1 << d))
        np.add.at(probs, np.asarray(ranks, dtype=np.int64),
                  np.asarray(weights, dtype=np.float64))
        total = probs.sum()
        if total <= 0:
            raise DomainError("weights must have positive total mass")
        return cls(d, probs / total)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.probs)

    def __eq__(self, other):
        return (isinstance(other, PermDistribution) and other.d == self.d
                and np.array_equal(other.probs, self.probs))


@lru_cache(maxsize=None)
def _round_maps(d: int) -> np.ndarray:
    maps = round_maps(d)
    maps.setflags(write=False)
    return maps


def step_distribution(mu: PermDistribution) -> PermDistribution:
    """Law of ``nu o pi`` after one reverse round, pi ~ mu, bits uniform."""
    _check_capacity(mu.d)
    perms = kernels.all_perms(mu.n)
    out = kernels.step(mu.probs, perms, _round_maps(mu.d))
    return PermDistribution(mu.d, out)


def evolve(mu: PermDistribution, rounds: int) -> list[PermDistribution]:
    """``[mu, step(mu), ..., step^rounds(mu)]``."""
    laws = [mu]
    for _ in range(rounds):
        laws.append(step_distribution(laws[-1]))
    return laws


@lru_cache(maxsize=8)
def shuffle_law(d: int, rounds: int) -> PermDistribution:
    """Exact law of X_rounds started from the identity."""
    return evolve(PermDistribution.point_mass(d, 0), rounds)[-1]


def convolve_law(x_law: PermDistribution, mu: PermDistribution) -> PermDistribution:
    """Law of ``X o M`` for independent X ~ x_law and M ~ mu."""
    if x_law.d != mu.d:
        raise DomainError("distributions live on different decks")
    perms = kernels.all_perms(mu.n)
    xs = x_law.support()
    ms = mu.support()
    out = kernels.convolve(perms[xs], x_law.probs[xs], perms[ms], mu.probs[ms],
                           mu.size)
    return PermDistribution(mu.d, out)
