"""Words in the free group F_r and their evaluation as word maps."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .matgroup import GroupTable, MatrixGroup

__all__ = [
    "BadLetter",
    "ArityMismatch",
    "Word",
    "RNG_ALGORITHM",
    "make_rng",
    "reduce",
    "parse_word",
    "commutator",
    "evaluate",
    "evaluate_matrices",
    "convolve_words",
    "letter_blocks",
    "sample_word",
    "is_trivial_batch",
]

RNG_ALGORITHM = "numpy.random.Philox4x64-10"
_ALPHABET = "abcd"


class BadLetter(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator used for every sampled experiment."""
    return np.random.Generator(np.random.Philox(seed))


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for s in letters:
        if stack and stack[-1] == -s:
            stack.pop()
        else:
            stack.append(s)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; letters are ``±1 .. ±r``."""

    r: int
    syllables: tuple[int, ...] = ()

    def __post_init__(self):
        syl = tuple(int(s) for s in self.syllables)
        for s in syl:
            if s == 0 or abs(s) > self.r:
                raise BadLetter(f"letter {s} out of range for r={self.r}")
        object.__setattr__(self, "syllables", _free_reduce(syl))

    def __len__(self):
        return len(self.syllables)

    @property
    def length(self) -> int:
        return len(self.syllables)

    def __mul__(self, other: Word) -> Word:
        """Product in F_r (same letters), not the letter-disjoint convolution."""
        r = max(self.r, other.r)
        return Word(r, self.syllables + other.syllables)

    def inverse(self) -> Word:
        return Word(self.r, tuple(-s for s in reversed(self.syllables)))

    def letters(self) -> list[int]:
        return sorted({abs(s) for s in self.syllables})

    def is_trivial(self) -> bool:
        return not self.syllables

    def __str__(self):
        if self.r <= len(_ALPHABET):
            return "".join(_ALPHABET[s - 1] if s > 0 else _ALPHABET[-s - 1].upper() for s in self.syllables) or "1"
        return " ".join(f"x{s}" if s > 0 else f"x{-s}^-1" for s in self.syllables) or "1"

    @classmethod
    def parse(cls, text: str, r: int | None = None) -> Word:
        return parse_word(text, r)


def reduce(raw: Sequence[int], r: int) -> Word:
    return Word(r, tuple(raw))


def parse_word(text: str, r: int | None = None) -> Word:
    """Parse ``a,b,c,d`` (uppercase = inverse); ``"1"`` or ``""`` is the empty word."""
    text = text.strip()
    if text in ("", "1", "e"):
        return Word(r or 2, ())
    syl = []
    for ch in text:
        low = ch.lower()
        if low not in _ALPHABET:
            raise BadLetter(f"unexpected character {ch!r} in word {text!r}")
        i = _ALPHABET.index(low) + 1
        syl.append(i if ch.islower() else -i)
    need = max(abs(s) for s in syl)
    if r is None:
        r = max(need, 2)
    return Word(r, tuple(syl))


def commutator(r: int = 2, i: int = 1, j: int = 2) -> Word:
    return Word(r, (i, j, -i, -j))


def evaluate(w: Word, elements: Sequence, G: GroupTable):
    """Evaluate ``w(g_1, ..., g_r)`` on group indices.

    Each entry of ``elements`` may be a scalar index or an index array; arrays
    broadcast, so a whole slice of G^r is evaluated in one pass. Letters are
    multiplied left to right.
    """
    if len(elements) < w.r:
        raise ArityMismatch(f"word on {w.r} letters needs {w.r} arguments, got {len(elements)}")
    args = [np.asarray(e, dtype=np.int64) for e in elements]
    invs: dict[int, np.ndarray] = {}
    shape = np.broadcast_shapes(*(a.shape for a in args[: w.r])) if w.r else ()
    acc = np.full(shape, G.identity, dtype=np.int64)
    for s in w.syllables:
        i = abs(s) - 1
        if s > 0:
            x = args[i]
        else:
            if i not in invs:
                invs[i] = np.asarray(G.inv(args[i]))
            x = invs[i]
        acc = np.asarray(G.mul(acc, x))
    return int(acc) if acc.ndim == 0 else acc


def evaluate_matrices(w: Word, mats: Sequence, G: MatrixGroup) -> np.ndarray:
    idx = [G.index_of(m) for m in mats]
    return G.element(evaluate(w, idx, G))


def convolve_words(w1: Word, w2: Word) -> Word:
    """Concatenation on disjoint letters: the letters of ``w2`` shift by ``w1.r``."""
    shifted = tuple(s + w1.r if s > 0 else s - w1.r for s in w2.syllables)
    return Word(w1.r + w2.r, w1.syllables + shifted)


def letter_blocks(w: Word) -> list[Word]:
    """Split ``w`` into maximal letter-disjoint factors ``w = u_1 * u_2 * ...``.

    Each factor is re-indexed onto letters ``1 .. r_i`` in order of first
    appearance. The word measure of ``w`` is the convolution of the factors'.
    """
    syl = w.syllables
    n = len(syl)
    if n == 0:
        return []
    last = {}
    for pos, s in enumerate(syl):
        last[abs(s)] = pos
    blocks, start, reach = [], 0, -1
    for pos, s in enumerate(syl):
        reach = max(reach, last[abs(s)])
        if pos == reach:
            blocks.append(syl[start : pos + 1])
            start = pos + 1
    out = []
    for b in blocks:
        relabel: dict[int, int] = {}
        for s in b:
            relabel.setdefault(abs(s), len(relabel) + 1)
        out.append(Word(len(relabel), tuple(relabel[abs(s)] * (1 if s > 0 else -1) for s in b)))
    return out


def sample_word(
    model: str,
    length: int,
    rng: np.random.Generator | int,
    r: int = 2,
    c1: float = 0.5,
    c2: float = 1.0,
) -> Word:
    """Draw a random word.

    ``nonreduced``: ``length`` independent uniform signed letters, then freely
    reduced. ``reduced``: uniform among the ``2r(2r-1)^(length-1)`` reduced
    words of that length. ``interval``: the reduced model with a length drawn
    uniformly from ``[c1*length, c2*length]``.
    """
    if isinstance(rng, (int, np.integer)):
        rng = make_rng(int(rng))
    if length < 1:
        raise ValueError("length must be >= 1")
    if model == "nonreduced":
        letters = rng.integers(1, r + 1, size=length) * rng.choice((-1, 1), size=length)
        return Word(r, tuple(int(s) for s in letters))
    if model == "interval":
        lo, hi = max(1, int(np.ceil(c1 * length))), max(1, int(np.floor(c2 * length)))
        length = int(rng.integers(lo, hi + 1))
        model = "reduced"
    if model == "reduced":
        signed = [i for i in range(1, r + 1)] + [-i for i in range(1, r + 1)]
        out = [signed[int(rng.integers(2 * r))]]
        for _ in range(length - 1):
            choices = [s for s in signed if s != -out[-1]]
            out.append(choices[int(rng.integers(2 * r - 1))])
        return Word(r, tuple(out))
    raise ValueError(f"unknown word model {model!r}")


def is_trivial_batch(letters: np.ndarray) -> np.ndarray:
    """Stack-reduce each row of signed letters; True where the word is trivial."""
    n, length = letters.shape
    stack = np.zeros((n, length), dtype=letters.dtype)
    depth = np.zeros(n, dtype=np.int64)
    rows = np.arange(n)
    for j in range(length):
        s = letters[:, j]
        top = stack[rows, np.maximum(depth - 1, 0)]
        cancel = (depth > 0) & (top == -s)
        push = ~cancel
        stack[rows[push], depth[push]] = s[push]
        depth = depth + np.where(cancel, -1, 1)
    return depth == 0
