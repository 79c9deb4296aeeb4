import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wordlab.freeword import commutator, convolve_words, parse_word
from wordlab.matgroup import BudgetExceeded, conjugacy_classes, cyclic_group
from wordlab.measures import (
    NotInvariant,
    NotReached,
    centralizer_tail,
    convolution_power,
    convolve_measures,
    delta,
    fiber_count,
    fiber_ratios,
    lq_distance,
    mixing_time,
    uniform,
    word_exponent,
    word_measure_exact,
    word_measure_mc,
    word_measure_naive,
)

from conftest import group_and_classes

WORDS = ["abAB", "aab", "abaB", "aabb", "aaaaa", "abab", "aabAB", "aaBBabAB", "a", "aaa"]


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("text", WORDS)
def test_exact_matches_naive(p, text):
    G, cd = group_and_classes("SL2", p)
    w = parse_word(text)
    fast = word_measure_exact(w, G, cd, workers=1)
    slow = word_measure_naive(w, G, cd)
    assert fast.fractions() == slow.fractions()


def test_exact_matches_naive_p7():
    G, cd = group_and_classes("SL2", 7)
    w = commutator()
    assert word_measure_exact(w, G, cd).fractions() == word_measure_naive(w, G, cd).fractions()


def test_worker_count_does_not_change_result():
    G, cd = group_and_classes("SL2", 7)
    w = parse_word("aabAB")
    assert word_measure_exact(w, G, cd, workers=1).fractions() == word_measure_exact(w, G, cd, workers=3).fractions()


def test_word_measure_on_abelian_group():
    # on an abelian group the commutator is trivial
    C = cyclic_group(9)
    cd = conjugacy_classes(C)
    mu = word_measure_exact(commutator(), C, cd)
    assert mu.fractions()[cd.class_of[C.identity]] == 1
    # a^3 on Z/9 hits the three multiples of 3 uniformly
    cube = word_measure_exact(parse_word("aaa"), C, cd).to_elements()
    assert sum(1 for v in cube.numerators if v) == 3


def test_convolution_identity_and_uniform():
    G, cd = group_and_classes("SL2", 5)
    mu = word_measure_exact(parse_word("aab"), G, cd)
    e = delta(G, G.identity, cd)
    u = uniform(G, cd)
    assert convolve_measures(mu, e).fractions() == mu.fractions()
    assert convolve_measures(mu, u).fractions() == u.fractions()
    assert lq_distance(u, 2) == 0


def test_element_mode_convolution_matches_class_mode():
    G, cd = group_and_classes("SL2", 3)
    mu = word_measure_exact(commutator(), G, cd)
    em = mu.to_elements()
    both = convolve_measures(em, em).to_classes(cd)
    assert both.fractions() == convolve_measures(mu, mu).fractions()


def test_to_classes_rejects_non_invariant():
    G, cd = group_and_classes("SL2", 3)
    with pytest.raises(NotInvariant):
        delta(G, 5).to_classes(cd)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=10))
def test_norm_inequalities_property(raw):
    from wordlab.freeword import Word

    G, cd = group_and_classes("SL2", 5)
    mu = word_measure_exact(Word(2, tuple(raw)), G, cd)
    d1, d2, dinf = (lq_distance(mu, q) for q in (1, 2, math.inf))
    assert d1 <= d2 + 1e-12 <= dinf + 2e-12
    assert lq_distance(convolve_measures(mu, mu), math.inf) <= d2**2 + 1e-9


def test_mixing_time_and_not_reached():
    G, cd = group_and_classes("SL2", 7)
    mu = word_measure_exact(commutator(), G, cd)
    assert mixing_time(mu, 1, 5) == 1
    G3, cd3 = group_and_classes("SL2", 3)
    res = mixing_time(word_measure_exact(commutator(), G3, cd3), 2, 4)
    assert isinstance(res, NotReached) and res.t_max == 4


def test_convolution_power():
    G, cd = group_and_classes("SL2", 5)
    mu = word_measure_exact(parse_word("ab"), G, cd)  # uniform already
    assert convolution_power(mu, 3).fractions() == uniform(G, cd).fractions()


def test_fiber_count_commutator_identity():
    G, cd = group_and_classes("SL2", 5)
    count, ratio = fiber_count(commutator(), G, G.identity, cd)
    assert count == G.order * cd.k
    assert ratio == pytest.approx(G.order * cd.k / 5**3)


def test_fiber_ratios_average_to_order_ratio():
    G, cd = group_and_classes("SL2", 5)
    mu = word_measure_exact(commutator(), G, cd)
    ratios = fiber_ratios(mu, 2)
    # sum over g of |w^-1(g)| = |G|^2
    assert np.dot(ratios, cd.sizes) * 5**3 == pytest.approx(G.order**2)


def test_centralizer_tail_endpoints():
    G, cd = group_and_classes("SL2", 7)
    mu = word_measure_exact(commutator(), G, cd)
    assert centralizer_tail(mu, 0.0) == 1.0
    central_mass = sum(f for f, c in zip(mu.fractions(), cd.central) if c)
    assert centralizer_tail(mu, 1.0) == pytest.approx(float(central_mass))


def test_word_exponent_free_word():
    G, cd = group_and_classes("SL2", 5)
    assert word_exponent(word_measure_exact(parse_word("a"), G, cd)) == pytest.approx(1.0)


def test_monte_carlo_close_to_exact():
    G, cd = group_and_classes("SL2", 5)
    w = commutator()
    exact = word_measure_exact(w, G, cd)
    mc = word_measure_mc(w, G, cd, 200_000, seed=1)
    assert not mc.exact
    assert np.max(np.abs(mc.masses - exact.masses)) < 0.01
    assert word_measure_mc(w, G, cd, 1000, seed=1).fractions() == word_measure_mc(w, G, cd, 1000, seed=1).fractions()


def test_pair_budget():
    G, cd = group_and_classes("SL2", 7)
    with pytest.raises(BudgetExceeded):
        word_measure_exact(commutator(), G, cd, budget=1000)
    with pytest.raises(BudgetExceeded):
        word_measure_exact(parse_word("abcABC"), G, cd)  # not letter-disjoint, three letters


def test_exact_denominators():
    G, cd = group_and_classes("SL2", 5)
    mu = word_measure_exact(convolve_words(commutator(), commutator()), G, cd)
    assert sum(mu.fractions()) == 1
    assert all(isinstance(f, Fraction) for f in mu.fractions())
