import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wordlab.ffield import primes_in
from wordlab.freeword import Word, commutator, make_rng, parse_word
from wordlab.fricke import (
    EXAMPLE_WORDS,
    ONE,
    X,
    Y,
    Z,
    InsufficientData,
    OracleFailure,
    TracePoly,
    count_points,
    count_series,
    diagnostic_spec,
    estimate_dim,
    excluded_residues,
    random_sl2,
    special_point_check,
    trace_poly,
    validate_trace_poly,
    variety_spec,
    word_trace_numeric,
)

words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=12).map(lambda s: Word(2, tuple(s)))


def test_basic_polynomials():
    assert trace_poly(Word(2, ())) == 2 * ONE
    assert trace_poly(parse_word("a")) == X
    assert trace_poly(parse_word("B")) == Y
    assert trace_poly(parse_word("ab")) == Z
    assert trace_poly(parse_word("aa")) == X * X - 2
    assert trace_poly(commutator()) == X * X + Y * Y + Z * Z - X * Y * Z - 2


@settings(max_examples=60, deadline=None)
@given(words)
def test_trace_poly_invariances(w):
    P = trace_poly(w)
    assert P.degree <= max(w.length, 0)
    # trace is invariant under inversion and cyclic rotation
    assert trace_poly(w.inverse()) == P
    if w.length:
        rot = Word(2, w.syllables[1:] + w.syllables[:1])
        assert trace_poly(rot) == P


@settings(max_examples=30, deadline=None)
@given(words)
def test_swap_symmetry(w):
    swapped = Word(2, tuple((3 - abs(s)) * (1 if s > 0 else -1) for s in reversed(w.syllables)))
    P, Q = trace_poly(w), trace_poly(swapped)
    # swapping a and b while reversing the word swaps x and y
    for x, y, z in [(3, 5, 7), (-2, 4, 11), (0, 1, 9)]:
        assert P(x, y, z) == Q(y, x, z)


def test_against_matrices():
    rng = make_rng(9)
    A, B = random_sl2(101, 200, rng), random_sl2(101, 200, rng)
    for text in ["aabAB", "abababab", "aBBaab", "abAAB"]:
        w = parse_word(text)
        lhs = trace_poly(w).eval_mod(101, *(np.einsum("nii->n", M) % 101 for M in (A, B, (A @ B) % 101)))
        assert np.array_equal(lhs % 101, word_trace_numeric(w, A, B, 101))


def test_validation_detects_wrong_polynomial():
    w = parse_word("aab")
    validate_trace_poly(w, trace_poly(w))
    with pytest.raises(OracleFailure):
        validate_trace_poly(w, trace_poly(w) + X)


def test_poly_arithmetic():
    P = (X + Y) * (X - Y)
    assert P == X * X - Y * Y
    assert P.degree == 2 and P.variables() == {0, 1}
    assert (P - P) == TracePoly.const(0)
    assert P.eval_mod(7, np.array([3]), np.array([1]))[0] % 7 == 1


def test_excluded_residues():
    assert excluded_residues(7) == sorted({0, 1, 6, 3, 4})  # sqrt2 = 3, 4; 5 is not a square mod 7
    assert 0 in excluded_residues(11) and len(excluded_residues(11)) == 5  # 4 = phi, phi' mod 11


def test_count_points_against_bruteforce():
    spec = variety_spec(parse_word("aabAB"))
    for p in (5, 7, 11):
        P = [spec.equations[0], *spec.equations[1:]]
        grid = np.array(np.meshgrid(np.arange(p), np.arange(p), np.arange(p), indexing="ij")).reshape(3, -1)
        ok = np.ones(grid.shape[1], dtype=bool)
        for E in P:
            ok &= E.eval_mod(p, *grid) % p == 0
        for D in spec.inequations:
            ok &= D.eval_mod(p, *grid) % p != 0
        row = count_points(spec, p)
        assert row.raw == int(ok.sum())
        box = set(excluded_residues(p))
        inside = ok & np.isin(grid[0], list(box)) & np.isin(grid[1], list(box)) & np.isin(grid[2], list(box))
        assert row.excluded == int(inside.sum())


def test_diagnostic_counts():
    circle = diagnostic_spec([X * X + Y * Y - 1], 2)
    for p in (5, 7, 11, 13):
        assert count_points(circle, p).net == p - (1 if p % 4 == 1 else -1)


def test_dimension_estimates_small():
    primes = primes_in(5, 100)
    assert estimate_dim(count_series(diagnostic_spec([Z], 3), primes)).dim == 2
    assert estimate_dim(count_series(diagnostic_spec([X * X + 1], 1), primes)).dim == 0
    empty = count_series(diagnostic_spec([ONE], 2), primes)
    assert estimate_dim(empty).label == "empty"
    with pytest.raises(InsufficientData):
        estimate_dim(count_series(diagnostic_spec([X * X + 1], 1), [5, 13]))


def test_special_points():
    for p in (7, 17, 23):
        rep = special_point_check(p)
        assert rep["two_is_square"] and all(rep["candidates_satisfy"])
    assert not special_point_check(11)["two_is_square"]


def test_named_words():
    assert EXAMPLE_WORDS["figure-eight"].length == 10
    assert str(EXAMPLE_WORDS["bs32"]) == "baaBAAA"
