from fractions import Fraction

import numpy as np
import pytest

from thorp.analysis import PermDistribution, contraction_experiment, mixing_profile, mixing_time
from thorp.analysis.mixing import contract, entropy_decay, sample_mu
from thorp.errors import CapacityError, DomainError

from conftest import brute_evolve, lex_perms

# exact evolution from the identity; regression values cross-checked below
GOLDEN_MIXING = {1: 1, 2: 4, 3: 6}
GOLDEN_D2_DISTANCES = [Fraction(23, 12), Fraction(5, 3), Fraction(2, 3), Fraction(1, 3),
                       Fraction(1, 6)]


def _brute_l1(d, rounds, exact=False):
    n = 1 << d
    law = brute_evolve(d, rounds, exact=exact)
    size = len(lex_perms(n))
    u = Fraction(1, size) if exact else 1.0 / size
    return sum(abs(law.get(p, 0) - u) for p in lex_perms(n))


def test_d2_distances_exact():
    got = [_brute_l1(2, t, exact=True) for t in range(5)]
    assert got == GOLDEN_D2_DISTANCES
    prof = mixing_profile(2)
    np.testing.assert_allclose(prof.distances, [float(x) for x in got], atol=1e-15)


@pytest.mark.parametrize("d", [1, 2])
def test_mixing_time_brute_force(d):
    t = next(t for t in range(50) if _brute_l1(d, t) <= 0.25)
    assert t == GOLDEN_MIXING[d] == mixing_time(d, 0.25)


def test_mixing_time_d3_golden():
    prof = mixing_profile(3, 0.25)
    assert prof.mixing_time == GOLDEN_MIXING[3]
    assert prof.monotone
    assert prof.distances[5] > 0.25 >= prof.distances[6]


@pytest.mark.parametrize("d", [1, 2, 3])
def test_threshold_two_is_zero(d):
    assert mixing_time(d, 2.0) == 0


def test_mixing_capacity_and_threshold():
    with pytest.raises(CapacityError):
        mixing_time(4)
    with pytest.raises(DomainError):
        mixing_time(2, 0.0)


def test_entropy_decay_monotone():
    ents = entropy_decay(3, 8)
    assert ents[0] == pytest.approx(np.log(40320))
    assert all(b <= a + 1e-12 for a, b in zip(ents, ents[1:]))


def test_contraction_uniform_excluded():
    before, after = contract(PermDistribution.uniform(2))
    assert before == 0 and after == 0


def test_contraction_point_mass_d1():
    before, after = contract(PermDistribution.point_mass(1, 1))
    assert before == pytest.approx(np.log(2))
    assert after == 0


@pytest.mark.parametrize("d", [1, 2])
def test_contraction_strict(d):
    rep = contraction_experiment(d, 50, seed=11)
    assert len(rep.samples) == 50
    assert rep.strict and rep.c_hat > 0
    assert all(s.ratio <= 1 - rep.c_hat / d + 1e-12 for s in rep.samples)


def test_contraction_d1_is_total():
    rep = contraction_experiment(1, 30, seed=0)
    assert rep.max_ratio == 0 and rep.c_hat == 1


def test_contraction_support_limit(rng):
    big = PermDistribution.from_weights(3, np.arange(300), np.ones(300))
    with pytest.raises(CapacityError):
        contract(big)


def test_sample_kinds(rng):
    assert sample_mu(3, "point", rng).support().size == 1
    assert 2 <= sample_mu(3, "sparse", rng).support().size <= 16
    assert sample_mu(3, "dense", rng).support().size == 256
    assert sample_mu(2, "dense", rng).support().size == 24
    with pytest.raises(DomainError):
        sample_mu(2, "other", rng)


def test_contraction_reproducible():
    a = contraction_experiment(2, 10, seed=5)
    b = contraction_experiment(2, 10, seed=5)
    assert a == b
