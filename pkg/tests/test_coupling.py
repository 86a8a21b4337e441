import json

import numpy as np
import pytest

from thorp.core import Permutation, TabularOracle
from thorp.coupling import (
    FlipSchedule,
    adjacent,
    bucket,
    coupled_run,
    exhaustive_sweep,
    first_adjacency_time,
    flip_cells,
    flip_oracle,
    msb_diff,
    partner,
    partner_law,
    t_schedule,
)
from thorp.errors import DomainError
from thorp.shuffle import simulate


@pytest.mark.parametrize("j, T, expected", [(1, 1, 0), (7, 2, 1), (4, 5, -2), (0, 1, 0), (0, 3, -2)])
def test_t_schedule(j, T, expected):
    assert t_schedule(j, T) == expected


@pytest.mark.parametrize("T", [1, 2, 5])
def test_t_schedule_monotone(T):
    vals = [t_schedule(j, T) for j in range(256)]
    assert vals == sorted(vals)


@pytest.mark.parametrize("k, j, expected", [(0, 1, 0), (5, 1, 2), (6, 7, 0)])
def test_msb_diff(k, j, expected):
    assert msb_diff(k, j) == expected


def test_msb_diff_equal():
    with pytest.raises(DomainError):
        msb_diff(3, 3)


def test_bucket_examples():
    assert bucket(5, -1, 3) == frozenset()
    assert bucket(0, 0, 3) == {1}
    assert bucket(0, 3, 3) == frozenset()


@pytest.mark.parametrize("d", range(1, 7))
def test_bucket_sizes_exhaustive(d):
    n = 1 << d
    for j in range(n):
        seen = set()
        for t in range(d):
            b = bucket(j, t, d)
            assert len(b) == 2 ** t
            assert b == {k for k in range(n) if k != j and msb_diff(k, j) == t}
            seen |= b
        assert seen == set(range(n)) - {j}


def test_adjacent_identity_d2():
    pi = Permutation.identity(4)
    assert adjacent(0, 1, pi)
    assert not adjacent(0, 3, pi)
    with pytest.raises(DomainError):
        adjacent(2, 2, pi)


def test_exactly_one_adjacent_card(rng):
    for d in (1, 2, 3, 4):
        n = 1 << d
        for _ in range(10):
            pi = Permutation(tuple(rng.permutation(n)))
            for j in range(n):
                assert sum(adjacent(k, j, pi) for k in range(n) if k != j) == 1


def test_partner_examples():
    Z = TabularOracle(np.zeros((2, 2)))
    tr = simulate(Permutation.identity(4), 2, Z)
    sched = FlipSchedule(1, 4)
    # T_j = 0, 0, 1, 1; X_1 = (0, 2, 1, 3)
    assert [partner(j, tr, sched) for j in range(4)] == [1, 0, 0, 1]
    assert partner(1, tr, FlipSchedule(2, 4)) is None
    tr1 = simulate(Permutation.identity(2), 1, TabularOracle([[1]]))
    assert partner(0, tr1, 1) == 1 and partner(1, tr1, 1) == 0


def test_partner_beyond_trace():
    tr = simulate(Permutation.identity(8), 1, TabularOracle(np.zeros((4, 1))))
    with pytest.raises(DomainError):
        partner(7, tr, 1)  # T_7 = 2 > 1 round


def test_flip_oracle_empty_schedule():
    Z = TabularOracle([[1, 0], [0, 1]])
    tr = simulate(Permutation.identity(4), 2, Z)
    assert flip_oracle(Z, tr, 5) == Z


def test_flip_oracle_d1():
    for bit in (0, 1):
        Z = TabularOracle([[bit]])
        tr = simulate(Permutation.identity(2), 1, Z)
        assert flip_cells(tr, 1) == {(0, 0)}
        assert flip_oracle(Z, tr, 1) == TabularOracle([[1 - bit]])


def test_flip_oracle_d2_zero_table():
    Z = TabularOracle(np.zeros((2, 2)))
    tr = simulate(Permutation.identity(4), 2, Z)
    assert flip_cells(tr, 1) == {(0, 0), (0, 1), (1, 1)}
    Zf = flip_oracle(Z, tr, 1)
    assert Zf.bits.tolist() == [[1, 1], [0, 1]]


def test_flip_oracle_involution(rng):
    for _ in range(20):
        Z = TabularOracle(rng.integers(2, size=(4, 3)))
        tr = simulate(Permutation.identity(8), 3, Z)
        for T in (1, 2):
            assert flip_oracle(flip_oracle(Z, tr, T), tr, T) == Z


def test_coupled_run_empty_flip_set():
    Z = TabularOracle([[0, 1], [1, 1]])
    tr = coupled_run(Permutation.identity(4), Z, 4)
    assert tr.flips == ()
    assert tr.X.states == tr.X_flip.states


def test_coupled_run_d1_inverts_swap():
    for bit in (0, 1):
        tr = coupled_run(Permutation.identity(2), TabularOracle([[bit]]), 1)
        assert tr.X[1].locs == ((1, 0) if bit else (0, 1))
        assert tr.X_flip[1].locs == ((0, 1) if bit else (1, 0))


def test_coupled_run_records(rng):
    Z = TabularOracle(rng.integers(2, size=(4, 3)))
    tr = coupled_run(Permutation.identity(8), Z, 1)
    assert len(tr.X) == len(tr.X_flip) == 4
    assert tr.gamma(3) == tuple(tr.X[t].locs[3] for t in (1, 2, 3))
    doc = json.loads(json.dumps(tr.to_dict()))
    assert doc["flips"] == [list(c) for c in tr.flips]
    assert doc["X"][0] == list(range(8))
    assert simulate(Permutation.identity(8), 3, tr.Z_flip).states == tr.X_flip.states


@pytest.mark.parametrize("d", range(1, 7))
def test_schedule_stays_inside_horizon(d):
    # T >= 1 gives T_j <= d - 1, so no scheduled flip is ever dropped
    for T in (1, 2, 3):
        assert max(FlipSchedule(T, 1 << d).values) == d - T
    tr = coupled_run(Permutation.identity(4), TabularOracle(np.zeros((2, 2))), 1)
    assert tr.beyond_horizon == ()
    assert all(p is not None for p in tr.partners)


def test_geometric_schedule():
    s = FlipSchedule.geometric(8, seed=3)
    assert s.T >= 1 and s.geometric_seed == 3
    Ts = [FlipSchedule.geometric(8, seed=i).T for i in range(4000)]
    assert min(Ts) == 1
    assert abs(np.mean(Ts) - 2) < 0.1


@pytest.mark.parametrize("d, T", [(1, 1), (1, 2), (2, 1), (2, 2), (2, 3)])
def test_exhaustive_sweep(d, T):
    rep = exhaustive_sweep(d, T)
    assert rep.tables == 1 << ((1 << (d - 1)) * d)
    assert rep.ok
    # recorded verdict: X~_d has the same law as X_d at these sizes
    assert rep.same_law
    assert sum(rep.law_X.values()) == rep.tables


@pytest.mark.parametrize("d, T", [(2, 1), (3, 1), (3, 2)])
def test_partner_probability_on_lower_bucket(d, T):
    for j in range(1, 1 << d):
        tj = t_schedule(j, T)
        if tj < 0:
            continue
        law = partner_law(d, T, j)
        for k in bucket(j, tj, d) & set(range(j)):
            assert law.get(k, 0.0) == 0.5 ** tj


@pytest.mark.parametrize("d", [2, 3])
def test_msb_diff_is_first_adjacency_time(d):
    n = 1 << d
    for j in range(n):
        for k in range(n):
            if k != j:
                assert first_adjacency_time(d, k, j) == msb_diff(k, j)
