"""Position bit arithmetic, permutations, Lehmer ranking and bit oracles.

Positions run from 0 (bottom card) to n - 1 (top card) with n = 2**d.  A
position ``x`` is split big-endian into ``L`` (leftmost d - 1 bits) and ``R``
(rightmost bit), so ``x = 2 * L + R``.  For d = 1 the empty ``L`` is encoded
as 0.
"""

from __future__ import annotations

import hashlib
import hmac
from dataclasses import dataclass, field
from math import factorial
from typing import Sequence

import numpy as np

from .errors import DomainError, OracleDomainError

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class DeckParams:
    """Deck of ``n = 2**d`` cards."""

    d: int
    n: int = field(init=False)

    def __post_init__(self):
        if not isinstance(self.d, (int, np.integer)) or self.d < 1:
            raise DomainError(f"d must be a positive integer, got {self.d!r}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "n", 1 << int(self.d))

    @property
    def half(self) -> int:
        """Number of distinct ``L`` values, i.e. oracle bits per round."""
        return self.n >> 1

    @classmethod
    def from_n(cls, n: int) -> "DeckParams":
        if n < 2 or n & (n - 1):
            raise DomainError(f"deck size must be a power of two >= 2, got {n}")
        return cls(n.bit_length() - 1)


def _check_position(x: int, d: int) -> None:
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if not 0 <= x < (1 << d):
        raise DomainError(f"position {x} outside [0, {1 << d})")


def split_position(x: int, d: int) -> tuple[int, int]:
    """Return ``(L, R)``: the leftmost d - 1 bits and the rightmost bit of x."""
    _check_position(x, d)
    return x >> 1, x & 1


def join_position(L: int, R: int, d: int) -> int:
    if not 0 <= L < (1 << (d - 1)) or R not in (0, 1):
        raise DomainError(f"(L={L}, R={R}) is not a valid split for d={d}")
    return (L << 1) | R


def round_image(x: int, z: int, d: int) -> int:
    """Image of position x under one reverse round: (L, R) -> (R xor z, L)."""
    L, R = split_position(x, d)
    return ((R ^ (z & 1)) << (d - 1)) | L


def round_images(d: int, bits: np.ndarray) -> np.ndarray:
    """Vectorised :func:`round_image` over all positions.

    ``bits[l]`` is the oracle bit for ``L = l``.  Returns ``nu`` with
    ``nu[x]`` the image of position x.
    """
    x = np.arange(1 << d, dtype=np.int64)
    L = x >> 1
    R = x & 1
    return ((R ^ np.asarray(bits, dtype=np.int64)[L]) << (d - 1)) | L


@dataclass(frozen=True)
class Permutation:
    """Deck state: ``locs[i]`` is the position of card i."""

    locs: tuple[int, ...]

    def __post_init__(self):
        locs = tuple(int(v) for v in self.locs)
        n = len(locs)
        if n == 0 or sorted(locs) != list(range(n)):
            raise DomainError(f"not a permutation of 0..{n - 1}: {locs}")
        object.__setattr__(self, "locs", locs)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.locs)

    def __len__(self) -> int:
        return len(self.locs)

    def __getitem__(self, card: int) -> int:
        return self.locs[card]

    def inverse(self) -> "Permutation":
        """The map position -> card."""
        inv = [0] * self.n
        for card, pos in enumerate(self.locs):
            inv[pos] = card
        return Permutation(tuple(inv))

    def card_at(self, position: int) -> int:
        return self.locs.index(position)

    def then(self, nu: Sequence[int]) -> "Permutation":
        """Compose with a position map: the result is ``nu o self``."""
        return Permutation(tuple(int(nu[p]) for p in self.locs))

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``: card i goes to ``self[other[i]]``."""
        if other.n != self.n:
            raise DomainError("permutations act on decks of different size")
        return Permutation(tuple(self.locs[p] for p in other.locs))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.locs, dtype=np.int64)


def rank(p: Permutation | Sequence[int]) -> int:
    """Lexicographic (Lehmer code) rank of ``p.locs`` among all of S_n."""
    locs = p.locs if isinstance(p, Permutation) else tuple(p)
    n = len(locs)
    r = 0
    for i, v in enumerate(locs):
        smaller = sum(1 for w in locs[i + 1:] if w < v)
        r += smaller * factorial(n - 1 - i)
    return r


def unrank(r: int, n: int) -> Permutation:
    """Inverse of :func:`rank`."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    total = factorial(n)
    if not 0 <= r < total:
        raise DomainError(f"rank {r} outside [0, {total})")
    pool = list(range(n))
    locs = []
    for i in range(n - 1, -1, -1):
        q, r = divmod(r, factorial(i))
        locs.append(pool.pop(q))
    return Permutation(tuple(locs))


# -- bit oracles ------------------------------------------------------------


class BitOracle:
    """Deterministic source of the fair bits Z(l, t).

    Subclasses implement :meth:`bit`; :meth:`column` returns all bits of
    round t at once.  Oracles hold no mutable state.
    """

    def bit(self, l: int, t: int) -> int:
        raise NotImplementedError

    def __call__(self, l: int, t: int) -> int:
        return self.bit(l, t)

    def column(self, t: int, count: int) -> np.ndarray:
        return np.fromiter((self.bit(l, t) for l in range(count)),
                           dtype=np.uint8, count=count)


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


@dataclass(frozen=True)
class SeededOracle(BitOracle):
    """Counter-mode SplitMix64 hash of (seed, l, t); random access by (l, t)."""

    seed: int

    def __post_init__(self):
        if not 0 <= self.seed <= MASK64:
            raise DomainError("seed must be a 64-bit unsigned integer")

    def bit(self, l: int, t: int) -> int:
        if l < 0 or t < 0:
            raise OracleDomainError(f"oracle index ({l}, {t}) is negative")
        h = splitmix64(self.seed ^ splitmix64((l << 32) ^ t ^ splitmix64(t)))
        return (h >> 63) & 1


@dataclass(frozen=True)
class KeyedOracle(BitOracle):
    """HMAC-SHA256 keyed derivation of Z(l, t) from a 16-byte key."""

    key: bytes

    def __post_init__(self):
        if not isinstance(self.key, (bytes, bytearray)) or len(self.key) != 16:
            raise DomainError("key must be exactly 16 bytes")
        object.__setattr__(self, "key", bytes(self.key))

    def bit(self, l: int, t: int) -> int:
        if l < 0 or t < 0:
            raise OracleDomainError(f"oracle index ({l}, {t}) is negative")
        msg = l.to_bytes(8, "big") + t.to_bytes(8, "big")
        return hmac.new(self.key, msg, hashlib.sha256).digest()[0] & 1


class TabularOracle(BitOracle):
    """Explicit table ``bits[l, t]`` for exhaustive enumeration."""

    __slots__ = ("_bits",)

    def __init__(self, bits):
        arr = np.array(bits, dtype=np.uint8)
        if arr.ndim != 2:
            raise DomainError("oracle table must be 2-D, indexed [l, t]")
        if np.any(arr > 1):
            raise DomainError("oracle table entries must be bits")
        arr.setflags(write=False)
        self._bits = arr

    @classmethod
    def from_index(cls, index: int, d: int, rounds: int) -> "TabularOracle":
        """The ``index``-th table in the enumeration of all 2**(half*rounds)."""
        half = 1 << (d - 1)
        size = half * rounds
        if not 0 <= index < (1 << size):
            raise DomainError(f"table index {index} outside [0, 2**{size})")
        flat = [(index >> k) & 1 for k in range(size)]
        return cls(np.array(flat, dtype=np.uint8).reshape(rounds, half).T)

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def shape(self) -> tuple[int, int]:
        return self._bits.shape

    def bit(self, l: int, t: int) -> int:
        rows, cols = self._bits.shape
        if not (0 <= l < rows and 0 <= t < cols):
            raise OracleDomainError(
                f"oracle table covers l < {rows}, t < {cols}; queried ({l}, {t})")
        return int(self._bits[l, t])

    def column(self, t: int, count: int) -> np.ndarray:
        rows, cols = self._bits.shape
        if count > rows or not 0 <= t < cols:
            raise OracleDomainError(
                f"oracle table covers l < {rows}, t < {cols}; "
                f"queried round {t} for {count} values of l")
        return self._bits[:count, t].copy()

    def flipped(self, cells) -> "TabularOracle":
        bits = self._bits.copy()
        for l, t in cells:
            bits[l, t] ^= 1
        return TabularOracle(bits)

    def __eq__(self, other):
        return (isinstance(other, TabularOracle)
                and np.array_equal(self._bits, other._bits))

    def __hash__(self):
        return hash((self._bits.shape, self._bits.tobytes()))

    def __repr__(self):
        return f"TabularOracle({self._bits.tolist()})"
