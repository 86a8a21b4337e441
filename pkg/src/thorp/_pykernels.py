"""Pure numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used when
the extension is not built or ``THORP_PURE=1`` is set.
"""

import numpy as np

from math import factorial


def _factorials(n):
    return np.array([factorial(n - 1 - i) for i in range(n)], dtype=np.int64)


def rank_rows(perms):
    """Lehmer rank of every row of an (m, n) integer array."""
    perms = np.ascontiguousarray(perms, dtype=np.int64)
    m, n = perms.shape
    fact = _factorials(n)
    out = np.zeros(m, dtype=np.int64)
    for i in range(n - 1):
        smaller = (perms[:, i + 1:] < perms[:, i:i + 1]).sum(axis=1)
        out += smaller * fact[i]
    return out


def compose_rank(nu, perms):
    """Ranks of ``nu o p`` for every row p of ``perms``."""
    nu = np.asarray(nu, dtype=np.int64)
    return rank_rows(nu[perms])


def step(probs, perms, nus):
    """One round of distribution evolution averaged over the rows of ``nus``.

    ``perms`` lists S_n in rank order; each row of ``nus`` is a position map.
    """
    probs = np.asarray(probs, dtype=np.float64)
    out = np.zeros_like(probs)
    weight = 1.0 / len(nus)
    for nu in nus:
        # nu o . is a bijection of S_n, so the target ranks never collide
        out[compose_rank(nu, perms)] += probs * weight
    return out


def convolve(x_perms, x_w, mu_perms, mu_w, size):
    """Dense law of ``X o M`` for independent X, M given as weighted supports."""
    x_perms = np.asarray(x_perms, dtype=np.int64)
    x_w = np.asarray(x_w, dtype=np.float64)
    out = np.zeros(size, dtype=np.float64)
    for b, wb in zip(np.asarray(mu_perms, dtype=np.int64), mu_w):
        # (X o b)(i) = X(b(i)): reorder the columns of X by b
        ranks = rank_rows(x_perms[:, b])
        np.add.at(out, ranks, x_w * wb)
    return out
