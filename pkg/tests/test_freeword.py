import numpy as np
import pytest
from hypothesis import given, strategies as st

from wordlab.freeword import (
    BadLetter,
    Word,
    commutator,
    convolve_words,
    evaluate,
    is_trivial_batch,
    letter_blocks,
    make_rng,
    parse_word,
    sample_word,
)

from conftest import group_and_classes

letters2 = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=30)


@given(letters2)
def test_reduction_idempotent_and_reduced(raw):
    w = Word(2, tuple(raw))
    assert Word(2, w.syllables) == w
    assert all(a != -b for a, b in zip(w.syllables, w.syllables[1:]))


@given(letters2, letters2)
def test_group_laws(u, v):
    a, b = Word(2, tuple(u)), Word(2, tuple(v))
    assert (a * a.inverse()).is_trivial()
    assert (a * b).inverse() == b.inverse() * a.inverse()


@given(letters2)
def test_parse_roundtrip(raw):
    w = Word(2, tuple(raw))
    assert parse_word(str(w), 2) == w


def test_parse_and_print():
    assert str(parse_word("abAB")) == "abAB"
    assert str(parse_word("aA")) == "1"
    assert parse_word("abcd").r == 4
    with pytest.raises(BadLetter):
        parse_word("abz")
    with pytest.raises(BadLetter):
        Word(2, (3,))


def test_commutator_and_convolution():
    c = commutator()
    assert str(c) == "abAB"
    cc = convolve_words(c, c)
    assert str(cc) == "abABcdCD"
    assert [str(b) for b in letter_blocks(cc)] == ["abAB", "abAB"]
    assert len(letter_blocks(parse_word("abABab"))) == 1


def test_evaluate_vectorized_matches_scalar():
    G, _ = group_and_classes("SL2", 5)
    w = parse_word("aabAb")
    rng = np.random.default_rng(1)
    xs, ys = G.random_elements(rng, 50), G.random_elements(rng, 50)
    vec = evaluate(w, [xs, ys], G)
    for x, y, v in zip(xs, ys, vec):
        m = np.eye(2, dtype=np.int64)
        X, Y = G.element(x), G.element(y)
        for M in (X, X, Y, G.element(G.inv(x)), Y):
            m = m @ M % 5
        assert G.index_of(m) == v


def test_sample_word_models():
    rng = make_rng(0)
    for model in ("nonreduced", "reduced", "interval"):
        w = sample_word(model, 20, rng)
        assert w.length <= 20
    w = sample_word("reduced", 15, 3)
    assert w.length == 15
    assert sample_word("reduced", 15, 3) == w
    with pytest.raises(ValueError):
        sample_word("cyclic", 5, 0)


def test_reduced_model_is_uniform():
    # 4 * 3 = 12 reduced words of length 2 in F_2
    rng = make_rng(5)
    counts = {}
    for _ in range(6000):
        w = str(sample_word("reduced", 2, rng))
        counts[w] = counts.get(w, 0) + 1
    assert len(counts) == 12
    assert max(counts.values()) < 600 and min(counts.values()) > 400


def test_is_trivial_batch():
    words = [(1, -1, 2, -2), (1, 2, -1, -2), (1, 2, -2, -1), (2, 2, -2, 1)]
    assert is_trivial_batch(np.array(words, dtype=np.int8)).tolist() == [True, False, True, False]
