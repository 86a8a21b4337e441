"""Brute-force oracles shared by the test modules.

These work on plain tuples and dictionaries and never touch the ranking
kernels, so they are independent of the code paths they check.
"""

from fractions import Fraction
from itertools import permutations, product

import pytest


def brute_round_maps(d):
    """Every one-round position map, built bit by bit from the round rule."""
    n = 1 << d
    half = n >> 1
    maps = []
    for bits in product((0, 1), repeat=half):
        nu = []
        for x in range(n):
            left, right = x // 2, x % 2
            nu.append((right ^ bits[left]) * half + left)
        maps.append(tuple(nu))
    return maps


def brute_evolve(d, rounds, start=None, exact=False):
    """Law of the reverse shuffle after ``rounds`` rounds, as {locs: prob}."""
    n = 1 << d
    one = Fraction(1) if exact else 1.0
    law = {tuple(start or range(n)): one}
    maps = brute_round_maps(d)
    w = one / len(maps)
    for _ in range(rounds):
        nxt = {}
        for perm, p in law.items():
            for nu in maps:
                key = tuple(nu[x] for x in perm)
                nxt[key] = nxt.get(key, 0) + p * w
        law = nxt
    return law


def lex_perms(n):
    return list(permutations(range(n)))


def dense(law, n):
    """Dict law -> list in lexicographic order."""
    return [law.get(p, 0.0) for p in lex_perms(n)]


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(12345)


_ACCEPTANCE = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, part, ok, detail)`` rows for the end-of-run summary."""
    log = request.config.stash.setdefault(_ACCEPTANCE, {})

    def record(criterion, part, ok, detail=""):
        log.setdefault(criterion, []).append((part, bool(ok), detail))
        print(f"criterion {criterion} [{part}]: {'PASS' if ok else 'FAIL'} {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    log = config.stash.get(_ACCEPTANCE, None)
    if not log:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(log):
        rows = log[criterion]
        verdict = "PASS" if all(ok for _, ok, _ in rows) else "FAIL"
        parts = "; ".join(f"{part} {'ok' if ok else 'FAILED'} {detail}".strip()
                          for part, ok, detail in rows)
        terminalreporter.write_line(f"criterion {criterion}: {verdict}  ({parts})")
