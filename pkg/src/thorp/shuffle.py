"""Forward and reverse Thorp shuffle rounds, trajectories and kernels.

Forward round convention (pinned by the time-reversal test): the bottom half
of the deck (positions 0 .. n/2 - 1) is the left pile and the top half is
the right pile.  Cards are dropped so the new deck is built bottom-up, pair
k landing on positions 2k and 2k + 1.  Coin 0 drops LEFT-RIGHT (the
left-pile card lands lower), coin 1 drops RIGHT-LEFT.  This makes the forward
round with coins ``c`` exactly the inverse of the reverse round with bits
``c``, so the averaged forward kernel is the transpose of the reverse one.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from . import kernels
from .core import BitOracle, DeckParams, Permutation, round_images
from .errors import DomainError


def _params(pi: Permutation) -> DeckParams:
    return DeckParams.from_n(pi.n)


def reverse_round(pi: Permutation, t: int, Z: BitOracle) -> Permutation:
    """Apply round t of the reverse shuffle: returns ``nu o pi``."""
    params = _params(pi)
    bits = Z.column(t, params.half)
    nu = round_images(params.d, bits)
    return Permutation(tuple(nu[pi.as_array()].tolist()))


def forward_positions(d: int, coins) -> np.ndarray:
    """Position map of one forward round: ``out[y]`` is where position y goes."""
    y = np.arange(1 << d, dtype=np.int64)
    top = y >> (d - 1)
    k = y & ((1 << (d - 1)) - 1)
    return (k << 1) | (top ^ np.asarray(coins, dtype=np.int64)[k])


def forward_round(pi: Permutation, coins) -> Permutation:
    """One forward Thorp shuffle with one coin per dropped pair."""
    params = _params(pi)
    coins = np.asarray(coins, dtype=np.int64).ravel()
    if coins.shape[0] != params.half:
        raise DomainError(f"need {params.half} coins, got {coins.shape[0]}")
    if np.any((coins != 0) & (coins != 1)):
        raise DomainError("coins must be bits")
    mapping = forward_positions(params.d, coins)
    return Permutation(tuple(mapping[pi.as_array()].tolist()))


@dataclass(frozen=True)
class Trajectory:
    params: DeckParams
    states: tuple[Permutation, ...]
    oracle: BitOracle

    @property
    def start(self) -> Permutation:
        return self.states[0]

    @property
    def rounds(self) -> int:
        return len(self.states) - 1

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, t: int) -> Permutation:
        return self.states[t]

    def position(self, card: int, t: int) -> int:
        return self.states[t].locs[card]


def simulate(pi0: Permutation, rounds: int, Z: BitOracle) -> Trajectory:
    if rounds < 0:
        raise DomainError(f"rounds must be >= 0, got {rounds}")
    states = [pi0]
    for t in range(rounds):
        states.append(reverse_round(states[-1], t, Z))
    return Trajectory(_params(pi0), tuple(states), Z)


def round_maps(d: int) -> np.ndarray:
    """All 2**(n/2) position maps of one reverse round, one per row.

    Row index bit l is the oracle bit for ``L = l``.
    """
    half = 1 << (d - 1)
    patterns = (np.arange(1 << half)[:, None] >> np.arange(half)) & 1
    return np.stack([round_images(d, bits) for bits in patterns])


def forward_maps(d: int) -> np.ndarray:
    half = 1 << (d - 1)
    patterns = (np.arange(1 << half)[:, None] >> np.arange(half)) & 1
    return np.stack([forward_positions(d, coins) for coins in patterns])


def _group_kernel(maps: np.ndarray, n: int) -> np.ndarray:
    perms = kernels.all_perms(n)
    size = factorial(n)
    K = np.zeros((size, size))
    rows = np.arange(size)
    for nu in maps:
        np.add.at(K, (rows, kernels.compose_rank(nu, perms)), 1.0 / len(maps))
    return K


def reverse_kernel(d: int) -> np.ndarray:
    """Dense n! x n! transition matrix of one reverse round, averaged over Z."""
    if d > 2:
        raise DomainError("dense group kernels are only built for d <= 2")
    return _group_kernel(round_maps(d), 1 << d)


def forward_kernel(d: int) -> np.ndarray:
    """Dense n! x n! transition matrix of one forward round, averaged over coins."""
    if d > 2:
        raise DomainError("dense group kernels are only built for d <= 2")
    return _group_kernel(forward_maps(d), 1 << d)


def single_card_kernel(d: int) -> np.ndarray:
    """Marginal chain of one card's position under the reverse shuffle."""
    params = DeckParams(d)
    P = np.zeros((params.n, params.n))
    x = np.arange(params.n)
    for z in (0, 1):
        P[x, round_images(d, np.full(params.half, z))] += 0.5
    return P
