"""The flip coupling used to prove entropy contraction.

Card j gets a scheduled round ``T_j = floor(log2 j) + 1 - T``.  The bit read
by card j at that round is inverted, giving a second oracle ``Z~`` and a
second trajectory ``X~`` driven by it.  Everything here is exact and meant
for exhaustive enumeration at small d.

Conventions: ``T_0`` is set to ``T_1 = 1 - T`` so the schedule stays
monotone; a bit targeted by several cards is flipped once; cards scheduled at
or past the simulated horizon contribute no flip.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import DeckParams, Permutation, TabularOracle, rank, round_image
from .errors import DomainError
from .shuffle import Trajectory, simulate


def t_schedule(j: int, T: int) -> int:
    if j < 0:
        raise DomainError(f"card index must be >= 0, got {j}")
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    # bit_length(j) = floor(log2 j) + 1 for j >= 1; j = 0 shares T_1's value
    return max(j, 1).bit_length() - T


def msb_diff(k: int, j: int) -> int:
    """Index of the highest bit where k and j differ."""
    if k == j:
        raise DomainError("msb_diff needs two distinct cards")
    if k < 0 or j < 0:
        raise DomainError("cards are nonnegative integers")
    return (k ^ j).bit_length() - 1


def bucket(j: int, t: int, d: int) -> frozenset[int]:
    """All cards whose highest bit of difference from j is t."""
    n = DeckParams(d).n
    if not 0 <= j < n:
        raise DomainError(f"card {j} outside [0, {n})")
    if t < 0 or t >= d:
        return frozenset()
    base = j ^ (1 << t)
    return frozenset(base ^ m for m in range(1 << t))


def adjacent(i: int, j: int, state: Permutation) -> bool:
    """Whether cards i and j sit on positions sharing their leftmost d-1 bits."""
    if i == j:
        raise DomainError("adjacency needs two distinct cards")
    return state.locs[i] >> 1 == state.locs[j] >> 1


def neighbour(j: int, state: Permutation) -> int:
    """The unique card adjacent to card j."""
    return state.card_at(state.locs[j] ^ 1)


@dataclass(frozen=True)
class FlipSchedule:
    """Flip rounds ``T_j`` for every card of a deck of n cards."""

    T: int
    n: int
    geometric_seed: Optional[int] = None

    def __post_init__(self):
        DeckParams.from_n(self.n)
        if self.T < 1:
            raise DomainError(f"T must be >= 1, got {self.T}")

    @classmethod
    def geometric(cls, n: int, seed: int) -> "FlipSchedule":
        """Draw T from geometric(1/2) on {1, 2, ...}."""
        T = int(np.random.default_rng(seed).geometric(0.5))
        return cls(T, n, geometric_seed=seed)

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.n:
            raise DomainError(f"card {j} outside [0, {self.n})")
        return t_schedule(j, self.T)

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(self[j] for j in range(self.n))


def _schedule(schedule, n: int) -> FlipSchedule:
    if isinstance(schedule, FlipSchedule):
        if schedule.n != n:
            raise DomainError("schedule built for a different deck size")
        return schedule
    return FlipSchedule(int(schedule), n)


def partner(j: int, trace: Trajectory, schedule) -> Optional[int]:
    """The card adjacent to j at round T_j, or None when T_j < 0."""
    sched = _schedule(schedule, trace.params.n)
    tj = sched[j]
    if tj < 0:
        return None
    if tj > trace.rounds:
        raise DomainError(f"T_{j} = {tj} lies beyond the trace ({trace.rounds} rounds)")
    return neighbour(j, trace[tj])


def flip_cells(trace: Trajectory, schedule) -> frozenset[tuple[int, int]]:
    """Cells (l, t) read by some card j at its scheduled round ``t = T_j``."""
    sched = _schedule(schedule, trace.params.n)
    cells = set()
    for j in range(trace.params.n):
        tj = sched[j]
        if 0 <= tj < trace.rounds:
            cells.add((trace[tj].locs[j] >> 1, tj))
    return frozenset(cells)


def flip_oracle(Z: TabularOracle, trace: Trajectory, schedule) -> TabularOracle:
    """Z with the bit of every scheduled cell inverted once."""
    return Z.flipped(sorted(flip_cells(trace, schedule)))


@dataclass(frozen=True)
class CouplingTrace:
    params: DeckParams
    schedule: FlipSchedule
    Z: TabularOracle
    Z_flip: TabularOracle
    X: Trajectory
    X_flip: Trajectory
    flips: tuple[tuple[int, int], ...]
    partners: tuple[Optional[int], ...]
    beyond_horizon: tuple[int, ...] = field(default=())

    def gamma(self, j: int) -> tuple[int, ...]:
        """Positions of card j at times 1 .. d under X."""
        return tuple(s.locs[j] for s in self.X.states[1:])

    def gamma_flip(self, j: int) -> tuple[int, ...]:
        return tuple(s.locs[j] for s in self.X_flip.states[1:])

    def to_dict(self) -> dict:
        return {
            "d": self.params.d,
            "T": self.schedule.T,
            "schedule": list(self.schedule.values),
            "Z": self.Z.bits.tolist(),
            "Z_flip": self.Z_flip.bits.tolist(),
            "X": [list(s.locs) for s in self.X.states],
            "X_flip": [list(s.locs) for s in self.X_flip.states],
            "flips": [list(c) for c in self.flips],
            "partners": list(self.partners),
            "beyond_horizon": list(self.beyond_horizon),
        }


def coupled_run(pi0: Permutation, Z: TabularOracle, T) -> CouplingTrace:
    """Run X under Z and X~ under the flipped oracle for d rounds each."""
    params = DeckParams.from_n(pi0.n)
    sched = _schedule(T, params.n)
    X = simulate(pi0, params.d, Z)
    cells = flip_cells(X, sched)
    Zf = Z.flipped(cells)
    Xf = simulate(pi0, params.d, Zf)
    partners = []
    beyond = []
    for j in range(params.n):
        tj = sched[j]
        if tj > params.d:
            beyond.append(j)
            partners.append(None)
        else:
            partners.append(partner(j, X, sched))
    return CouplingTrace(params, sched, Z, Zf, X, Xf, tuple(sorted(cells)),
                         tuple(partners), tuple(beyond))


# -- exhaustive validation --------------------------------------------------


def _replays(trace: Trajectory, Z: TabularOracle) -> bool:
    """Card-by-card replay of every round with the scalar round map."""
    d = trace.params.d
    for t in range(trace.rounds):
        now, nxt = trace[t], trace[t + 1]
        for card, x in enumerate(now.locs):
            if nxt.locs[card] != round_image(x, Z(x >> 1, t), d):
                return False
    return True


def _display_flip(Z: TabularOracle, Zf: TabularOracle, trace: Trajectory,
                  sched: FlipSchedule) -> bool:
    """Check Z~ cell by cell against its case definition."""
    rows, cols = Z.shape
    for l in range(rows):
        for t in range(cols):
            hit = any(sched[j] == t and trace[t].locs[j] >> 1 == l
                      for j in range(trace.params.n))
            if Zf(l, t) != (1 - Z(l, t) if hit else Z(l, t)):
                return False
    return True


@dataclass(frozen=True)
class SweepReport:
    d: int
    T: int
    tables: int
    valid_replay: int
    display_match: int
    involution: int
    same_law: bool
    law_X: dict
    law_X_flip: dict

    @property
    def ok(self) -> bool:
        return self.valid_replay == self.display_match == self.involution == self.tables


def exhaustive_sweep(d: int, T: int, pi0: Optional[Permutation] = None) -> SweepReport:
    """Enumerate every oracle table for d rounds and validate the coupling."""
    params = DeckParams(d)
    pi0 = pi0 or Permutation.identity(params.n)
    count = 1 << (params.half * d)
    valid = display = invol = 0
    law, law_flip = Counter(), Counter()
    for index in range(count):
        Z = TabularOracle.from_index(index, d, d)
        tr = coupled_run(pi0, Z, T)
        valid += _replays(tr.X_flip, tr.Z_flip) and _replays(tr.X, tr.Z)
        display += _display_flip(tr.Z, tr.Z_flip, tr.X, tr.schedule)
        invol += flip_oracle(tr.Z_flip, tr.X, tr.schedule) == Z
        law[rank(tr.X[d])] += 1
        law_flip[rank(tr.X_flip[d])] += 1
    return SweepReport(d, T, count, valid, display, invol, law == law_flip,
                       dict(sorted(law.items())), dict(sorted(law_flip.items())))


def partner_law(d: int, T: int, j: int,
                pi0: Optional[Permutation] = None) -> dict[int, float]:
    """Exact law of m(j) over all oracle tables, started from ``pi0``."""
    params = DeckParams(d)
    pi0 = pi0 or Permutation.identity(params.n)
    tj = t_schedule(j, T)
    if tj < 0:
        return {}
    rounds = tj
    count = 1 << (params.half * rounds)
    law = Counter()
    for index in range(count):
        tr = simulate(pi0, rounds, TabularOracle.from_index(index, d, rounds))
        law[neighbour(j, tr[tj])] += 1
    return {k: v / count for k, v in sorted(law.items())}


def first_adjacency_time(d: int, k: int, j: int) -> int:
    """Least t at which cards k and j can be adjacent, from the identity."""
    params = DeckParams(d)
    pi0 = Permutation.identity(params.n)
    for t in range(d + 1):
        count = 1 << (params.half * t)
        for index in range(count):
            Z = TabularOracle.from_index(index, d, t)
            if adjacent(k, j, simulate(pi0, t, Z)[t]):
                return t
    raise DomainError(f"cards {k} and {j} never become adjacent within {d} rounds")
