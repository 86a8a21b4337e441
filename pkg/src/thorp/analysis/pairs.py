"""Markov chain of the positions of an ordered pair of distinct cards.

Two cards whose positions share ``L`` read the same oracle bit, so they
have two equally likely joint images; otherwise the bits are independent
and there are four.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..core import DeckParams, round_image
from ..errors import CapacityError, DomainError

MAX_PAIR_D = 6  # 64 * 63 = 4032 states


@dataclass(frozen=True, eq=False)
class PairChain:
    d: int
    kernel: sp.csr_matrix

    @property
    def n(self) -> int:
        return 1 << self.d

    @property
    def size(self) -> int:
        return self.n * (self.n - 1)

    def index(self, x: int, y: int) -> int:
        return pair_index(x, y, self.n)

    def state(self, i: int) -> tuple[int, int]:
        x, r = divmod(i, self.n - 1)
        return x, r + (r >= x)

    def uniform(self) -> np.ndarray:
        return np.full(self.size, 1.0 / self.size)


def pair_index(x: int, y: int, n: int) -> int:
    if x == y or not (0 <= x < n and 0 <= y < n):
        raise DomainError(f"({x}, {y}) is not an ordered pair of distinct positions")
    return x * (n - 1) + (y - (y > x))


def pair_chain_build(d: int) -> PairChain:
    if d > MAX_PAIR_D:
        raise CapacityError(f"pair chain needs d <= {MAX_PAIR_D}, got d={d}",
                            bound=f"{(1 << MAX_PAIR_D) * ((1 << MAX_PAIR_D) - 1)} states")
    n = DeckParams(d).n
    img = [[round_image(x, z, d) for z in (0, 1)] for x in range(n)]
    rows, cols, vals = [], [], []
    for x in range(n):
        for y in range(n):
            if x == y:
                continue
            i = pair_index(x, y, n)
            if x >> 1 == y >> 1:
                targets = [(img[x][z], img[y][z]) for z in (0, 1)]
            else:
                targets = [(img[x][a], img[y][b]) for a in (0, 1) for b in (0, 1)]
            w = 1.0 / len(targets)
            for u, v in targets:
                rows.append(i)
                cols.append(pair_index(u, v, n))
                vals.append(w)
    size = n * (n - 1)
    K = sp.csr_matrix((vals, (rows, cols)), shape=(size, size))
    K.sum_duplicates()
    return PairChain(d, K)


def pair_distance_curve(chain: PairChain, threshold: float = 0.25,
                        max_rounds: int = 100_000) -> list[float]:
    """Worst-start unhalved L1 distance to uniform, per round, until the threshold."""
    if not 0 < threshold <= 2:
        raise DomainError(f"threshold must lie in (0, 2], got {threshold}")
    u = 1.0 / chain.size
    # row s of M is the t-step law from state s; M <- M K  computed as (K^T M^T)^T
    KT = chain.kernel.T.tocsr()
    MT = np.eye(chain.size)
    curve = [float(np.abs(MT - u).sum(axis=0).max())]
    while curve[-1] > threshold:
        if len(curve) > max_rounds:
            raise CapacityError("pair chain did not reach the threshold",
                                bound=f"{max_rounds} rounds")
        MT = KT @ MT
        curve.append(float(np.abs(MT - u).sum(axis=0).max()))
    return curve


def pair_mixing_time(chain: PairChain, threshold: float = 0.25) -> int:
    return len(pair_distance_curve(chain, threshold)) - 1


def stationarity_error(chain: PairChain) -> float:
    u = chain.uniform()
    return float(np.abs(u @ chain.kernel - u).max())


def row_sum_error(chain: PairChain) -> float:
    return float(np.abs(np.asarray(chain.kernel.sum(axis=1)).ravel() - 1).max())


def loglog_slope(ds, times) -> float:
    """Least-squares slope of log(time) against log(d)."""
    x = np.log(np.asarray(ds, dtype=float))
    y = np.log(np.asarray(times, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def second_eigenvalue_modulus(chain: PairChain, iters: int = 2000,
                              window: int = 200, seed: int = 0) -> float:
    """Power-iteration estimate of the largest |eigenvalue| of K off constants.

    The per-step growth of the deflated iterate is averaged geometrically
    over the last ``window`` steps, which tolerates complex eigenvalue pairs.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(chain.size)
    v -= v.mean()
    v /= np.linalg.norm(v)
    logs = []
    for _ in range(iters):
        v = chain.kernel @ v
        v -= v.mean()
        norm = np.linalg.norm(v)
        if norm == 0.0:
            return 0.0
        logs.append(np.log(norm))
        v /= norm
    return float(np.exp(np.mean(logs[-window:])))
