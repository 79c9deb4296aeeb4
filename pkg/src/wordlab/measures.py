"""Exact and sampled word measures on enumerated groups.

A :class:`Measure` stores integer numerators over one common denominator,
so exact word measures (``|w^{-1}(g)| / |G|^r``) and their convolutions
never round. Norms are evaluated in floating point from the exact counts.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce as _fold

import numpy as np

from .freeword import Word, evaluate, letter_blocks, make_rng, RNG_ALGORITHM
from .matgroup import BudgetExceeded, ClassData, GroupTable, MatrixGroup

__all__ = [
    "GroupMismatch",
    "Measure",
    "NotReached",
    "DEFAULT_PAIR_BUDGET",
    "default_workers",
    "uniform",
    "delta",
    "word_measure_exact",
    "word_measure_naive",
    "word_measure_mc",
    "convolve_measures",
    "convolution_power",
    "lq_distance",
    "mixing_time",
    "GROUP_DIMENSION",
    "fiber_count",
    "fiber_ratios",
    "centralizer_tail",
    "word_exponent",
    "generic_element",
]

DEFAULT_PAIR_BUDGET = 400_000_000
GROUP_DIMENSION = {"SL2": 3, "PGL2": 3, "GL2": 4, "SL3": 8, "GL3": 9}


class GroupMismatch(ValueError):
    pass


def default_workers() -> int:
    env = os.environ.get("WORDLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _obj(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    out[:] = [int(v) for v in values]
    return out


@dataclass(frozen=True, eq=False)
class Measure:
    """A probability measure ``numerators / denominator`` on a group.

    ``mode`` is ``"class"`` (one entry per conjugacy class, holding the total
    mass of the class) or ``"element"`` (one entry per element).
    """

    group: GroupTable
    mode: str
    numerators: np.ndarray
    denominator: int
    classes: ClassData | None = None
    provenance: dict = field(default_factory=lambda: {"kind": "exact"})
    label: str = ""

    def __post_init__(self):
        nums = self.numerators
        if not (isinstance(nums, np.ndarray) and nums.dtype == object):
            object.__setattr__(self, "numerators", _obj(nums))
        if self.mode not in ("class", "element"):
            raise ValueError(f"bad mode {self.mode!r}")
        if self.mode == "class" and self.classes is None:
            raise ValueError("class-indexed measures need ClassData")
        expected = self.classes.k if self.mode == "class" else self.group.order
        if len(self.numerators) != expected:
            raise ValueError("numerator vector has the wrong length")
        if any(v < 0 for v in self.numerators):
            raise ValueError("negative mass")
        if sum(self.numerators) != self.denominator:
            raise ValueError("masses do not sum to 1")

    @property
    def exact(self) -> bool:
        return self.provenance.get("kind") == "exact"

    @property
    def masses(self) -> np.ndarray:
        return np.array([v / self.denominator for v in self.numerators], dtype=float)

    def fractions(self) -> list[Fraction]:
        return [Fraction(int(v), self.denominator) for v in self.numerators]

    def density(self) -> np.ndarray:
        """``|G| * mu(g)`` per element (class mode: per class representative)."""
        n = self.group.order
        if self.mode == "class":
            return np.array(
                [float(Fraction(n * int(v), self.denominator * int(s))) for v, s in zip(self.numerators, self.classes.sizes)]
            )
        return np.array([float(Fraction(n * int(v), self.denominator)) for v in self.numerators])

    def element_mass(self, g: int) -> Fraction:
        if self.mode == "class":
            c = int(self.classes.class_of[g])
            return Fraction(int(self.numerators[c]), self.denominator * int(self.classes.sizes[c]))
        return Fraction(int(self.numerators[g]), self.denominator)

    def to_elements(self) -> Measure:
        if self.mode == "element":
            return self
        sizes = [int(s) for s in self.classes.sizes]
        L = _fold(math.lcm, sizes, 1)
        per = [int(v) * (L // s) for v, s in zip(self.numerators, sizes)]
        nums = [per[c] for c in self.classes.class_of]
        return _normalized(self.group, "element", nums, self.denominator * L, self.classes, self.provenance, self.label)

    def to_classes(self, cd: ClassData) -> Measure:
        """Aggregate an element measure; raises if it is not class-constant."""
        if self.mode == "class":
            return self
        nums = list(self.numerators)
        totals = [0] * cd.k
        first = {}
        for g, c in enumerate(cd.class_of):
            c = int(c)
            if c in first and nums[g] != first[c]:
                raise NotInvariant("measure is not constant on conjugacy classes")
            first.setdefault(c, nums[g])
            totals[c] += nums[g]
        return Measure(self.group, "class", _obj(totals), self.denominator, cd, self.provenance, self.label)

    def to_json(self) -> dict:
        out = {
            "group": self.group.name,
            "word": self.label,
            "mode": self.mode,
            "denominator": str(self.denominator),
            "provenance": self.provenance,
        }
        if self.mode == "class":
            G = self.group
            rows = []
            for c in range(self.classes.k):
                rep = int(self.classes.reps[c])
                row = {
                    "class": c,
                    "size": int(self.classes.sizes[c]),
                    "numerator": str(self.numerators[c]),
                    "mass": float(Fraction(int(self.numerators[c]), self.denominator)),
                }
                if isinstance(G, MatrixGroup):
                    row["representative"] = G.element(rep).tolist()
                else:
                    row["representative"] = rep
                rows.append(row)
            out["masses"] = rows
        else:
            out["masses"] = [str(v) for v in self.numerators]
        return out


class NotInvariant(ValueError):
    pass


def _normalized(G, mode, nums, denom, cd, provenance, label) -> Measure:
    g = _fold(math.gcd, [int(v) for v in nums], int(denom))
    if g > 1:
        nums = [int(v) // g for v in nums]
        denom = int(denom) // g
    return Measure(G, mode, _obj(nums), int(denom), cd, provenance, label)


@dataclass(frozen=True)
class NotReached:
    t_max: int
    last_distance: float

    def __str__(self):
        return f"NotReached(t_max={self.t_max}, last={self.last_distance:.6g})"


def uniform(G: GroupTable, cd: ClassData | None = None) -> Measure:
    if cd is not None:
        return Measure(G, "class", _obj(cd.sizes), G.order, cd, label="uniform")
    return Measure(G, "element", _obj(np.ones(G.order, dtype=np.int64)), G.order, label="uniform")


def delta(G: GroupTable, g: int | None = None, cd: ClassData | None = None) -> Measure:
    """Point mass; class-indexed when ``cd`` is given and ``g`` is central."""
    g = G.identity if g is None else int(g)
    if cd is not None and cd.sizes[cd.class_of[g]] == 1:
        nums = np.zeros(cd.k, dtype=np.int64)
        nums[cd.class_of[g]] = 1
        return Measure(G, "class", _obj(nums), 1, cd, label=f"delta[{g}]")
    nums = np.zeros(G.order, dtype=np.int64)
    nums[g] = 1
    return Measure(G, "element", _obj(nums), 1, cd, label=f"delta[{g}]")


def _block_counts_one(w: Word, G: GroupTable, cd: ClassData) -> np.ndarray:
    vals = evaluate(w, [G.all()], G)
    return np.bincount(cd.class_of[vals], minlength=cd.k).astype(np.int64)


def _block_counts_two(w: Word, G: GroupTable, cd: ClassData, workers: int) -> np.ndarray:
    # First letter ranges over class representatives weighted by class size:
    # w(h a h^-1, h b h^-1) = h w(a, b) h^-1, so class totals are preserved.
    everything = G.all()

    def shard(c):
        vals = evaluate(w, [int(cd.reps[c]), everything], G)
        return np.bincount(cd.class_of[vals], minlength=cd.k).astype(np.int64) * int(cd.sizes[c])

    if workers > 1 and cd.k > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(shard, range(cd.k)))
    else:
        parts = [shard(c) for c in range(cd.k)]
    total = np.zeros(cd.k, dtype=np.int64)
    for part in parts:
        total += part
    return total


def word_measure_exact(
    w: Word,
    G: GroupTable,
    cd: ClassData,
    budget: int = DEFAULT_PAIR_BUDGET,
    workers: int | None = None,
) -> Measure:
    """Exact class-indexed word measure by exhaustive enumeration.

    The word is first split into letter-disjoint factors; their measures are
    computed separately (at most two letters each) and convolved.
    """
    workers = default_workers() if workers is None else workers
    blocks = letter_blocks(w)
    measures = []
    for b in blocks:
        if b.r > 2:
            raise BudgetExceeded(f"exhaustive word measures support at most 2 letters per factor; {b} has {b.r}")
        if G.order**b.r > budget:
            raise BudgetExceeded(f"|G|^{b.r} = {G.order ** b.r} exceeds pair budget {budget}")
        counts = _block_counts_one(b, G, cd) if b.r == 1 else _block_counts_two(b, G, cd, workers)
        measures.append(Measure(G, "class", _obj(counts), G.order**b.r, cd, label=str(b)))
    if not measures:
        m = delta(G, G.identity, cd)
    else:
        m = _fold(convolve_measures, measures)
    return Measure(G, "class", m.numerators, m.denominator, cd, {"kind": "exact"}, str(w))


def word_measure_naive(w: Word, G: GroupTable, cd: ClassData, chunk: int = 1 << 20) -> Measure:
    """Full loop over ``G^r`` with no symmetry reduction (reference path)."""
    n, r = G.order, w.r
    total_tuples = n**r
    counts = np.zeros(cd.k, dtype=np.int64)
    for start in range(0, total_tuples, chunk):
        flat = np.arange(start, min(start + chunk, total_tuples), dtype=np.int64)
        args = []
        for _ in range(r):
            args.append(flat % n)
            flat = flat // n
        vals = evaluate(w, args, G)
        counts += np.bincount(cd.class_of[vals], minlength=cd.k)
    return Measure(G, "class", _obj(counts), total_tuples, cd, {"kind": "exact"}, str(w))


def word_measure_mc(w: Word, G: GroupTable, cd: ClassData, samples: int, seed: int, chunk: int = 200_000) -> Measure:
    """Empirical class frequencies of ``w`` on uniform random tuples."""
    rng = make_rng(seed)
    counts = np.zeros(cd.k, dtype=np.int64)
    done = 0
    while done < samples:
        m = min(chunk, samples - done)
        args = [G.random_elements(rng, m) for _ in range(max(w.r, 1))]
        vals = evaluate(w, args, G)
        counts += np.bincount(cd.class_of[np.broadcast_to(vals, (m,))], minlength=cd.k)
        done += m
    prov = {"kind": "montecarlo", "samples": int(samples), "seed": int(seed), "rng": RNG_ALGORITHM}
    return Measure(G, "class", _obj(counts), int(samples), cd, prov, str(w))


def _merge_provenance(a: dict, b: dict) -> dict:
    if a.get("kind") == "exact" and b.get("kind") == "exact":
        return {"kind": "exact"}
    return {"kind": "montecarlo", "parts": [a, b]}


def convolve_measures(mu: Measure, nu: Measure) -> Measure:
    """``(mu * nu)(g) = sum_h mu(h) nu(h^{-1} g)``, exactly."""
    if mu.group is not nu.group:
        raise GroupMismatch("measures live on different groups")
    if mu.exact != nu.exact:
        raise GroupMismatch("cannot mix exact and Monte-Carlo measures")
    G = mu.group
    prov = _merge_provenance(mu.provenance, nu.provenance)
    label = f"({mu.label})*({nu.label})" if mu.label or nu.label else ""
    if mu.mode == "class" and nu.mode == "class":
        cd = mu.classes
        if nu.classes is not cd:
            raise GroupMismatch("measures use different class data")
        sizes = [int(s) for s in cd.sizes]
        L = _fold(math.lcm, sizes, 1)
        a = _obj([int(v) * (L // s) for v, s in zip(mu.numerators, sizes)])  # per-element, scaled by L
        b = _obj([int(v) * (L // s) for v, s in zip(nu.numerators, sizes)])
        N = cd.structure_constants
        nums = []
        for s in range(cd.k):
            Ns = N[:, :, s].astype(object)
            nums.append(int(a.dot(Ns).dot(b)) * sizes[s])
        return _normalized(G, "class", nums, mu.denominator * nu.denominator * L * L, cd, prov, label)
    m1, m2 = mu.to_elements(), nu.to_elements()
    n = G.order
    everything = G.all()
    a = [int(v) for v in m1.numerators]
    b = [int(v) for v in m2.numerators]
    if max(a) * max(b) * n < 2**62:
        out = np.zeros(n, dtype=np.int64)
        bv = np.array(b, dtype=np.int64)
        for h in np.flatnonzero(np.array(a, dtype=np.int64)):
            out[G.mul(int(h), everything)] += a[h] * bv
        nums = out.tolist()
    else:
        out = np.zeros(n, dtype=object)
        bv = _obj(b)
        for h in (i for i, v in enumerate(a) if v):
            idx = G.mul(h, everything)
            out[idx] = out[idx] + a[h] * bv
        nums = list(out)
    cd = mu.classes or nu.classes
    return _normalized(G, "element", nums, m1.denominator * m2.denominator, cd, prov, label)


def convolution_power(mu: Measure, t: int) -> Measure:
    if t < 1:
        raise ValueError("t must be >= 1")
    out = mu
    for _ in range(t - 1):
        out = convolve_measures(out, mu)
    return out


def lq_distance(mu: Measure, q) -> float:
    """``|| mu - mu_G ||_q`` with densities and the normalized counting measure."""
    n = mu.group.order
    D = mu.denominator
    if mu.mode == "class":
        weights = [int(s) for s in mu.classes.sizes]
        devs = [abs(Fraction(n * int(v) - D * s, D * s)) for v, s in zip(mu.numerators, weights)]
    else:
        weights = [1] * n
        devs = [abs(Fraction(n * int(v) - D, D)) for v in mu.numerators]
    if q in ("inf", math.inf) or q == float("inf"):
        return float(max(devs))
    q = float(q)
    if q == 1.0:
        return float(sum(w * d for w, d in zip(weights, devs)) / n)
    if q == 2.0:
        return math.sqrt(float(sum(w * d * d for w, d in zip(weights, devs)) / n))
    return (sum(w * float(d) ** q for w, d in zip(weights, devs)) / n) ** (1.0 / q)


def mixing_time(mu: Measure, q, t_max: int, threshold: float = 0.5):
    """Least ``t <= t_max`` with ``||mu^{*t} - mu_G||_q < threshold``."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    cur = mu
    dist = lq_distance(cur, q)
    for t in range(1, t_max + 1):
        if t > 1:
            cur = convolve_measures(cur, mu)
            dist = lq_distance(cur, q)
        if dist < threshold:
            return t
    return NotReached(t_max, dist)


def _group_dimension(G: GroupTable) -> int:
    kind = getattr(G, "kind", None)
    if kind not in GROUP_DIMENSION:
        raise ValueError(f"no algebraic dimension known for {G.name}")
    return GROUP_DIMENSION[kind]


def fiber_ratios(mu: Measure, r: int) -> np.ndarray:
    """Per-class Lang-Weil ratios ``|w^{-1}(g)| / p^{(r-1) dim G}``."""
    G = mu.group
    dim = _group_dimension(G)
    scale = Fraction(G.order**r, G.p ** ((r - 1) * dim))
    return np.array(
        [float(Fraction(int(v), mu.denominator * int(s)) * scale) for v, s in zip(mu.numerators, mu.classes.sizes)]
    )


def fiber_count(w: Word, G: GroupTable, g, cd: ClassData, budget: int = DEFAULT_PAIR_BUDGET) -> tuple[int, float]:
    """Exact ``|w^{-1}(g)|`` on ``G^r`` and its Lang-Weil ratio."""
    if isinstance(G, MatrixGroup) and np.ndim(g) > 0:
        g = G.index_of(g)
    mu = word_measure_exact(w, G, cd, budget=budget)
    frac = mu.element_mass(int(g)) * G.order**w.r
    assert frac.denominator == 1
    count = int(frac)
    dim = _group_dimension(G)
    return count, count / G.p ** ((w.r - 1) * dim)


def generic_element(G: MatrixGroup) -> int:
    """``diag(u, u^{-1})`` for the least generator ``u`` of F_p^x."""
    p = G.p
    for u in range(2, p):
        if all(pow(u, (p - 1) // q, p) != 1 for q in _prime_factors(p - 1)):
            break
    else:
        u = 1
    return G.index_of([[u, 0], [0, pow(u, p - 2, p)]])


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def centralizer_tail(mu: Measure, delta_exp: float) -> float:
    """Mass of classes whose centralizer has size at least ``|G|^delta``."""
    cd = mu.classes
    # non-strict, so that delta = 1 selects exactly the central classes
    big = cd.centralizer_sizes >= float(mu.group.order) ** delta_exp
    return float(Fraction(sum(int(v) for v, b in zip(mu.numerators, big) if b), mu.denominator))


def word_exponent(mu: Measure) -> float:
    """``-log max_g tau(g) / log |G|``."""
    n = mu.group.order
    if mu.mode == "class":
        best = max(Fraction(int(v), mu.denominator * int(s)) for v, s in zip(mu.numerators, mu.classes.sizes))
    else:
        best = Fraction(max(int(v) for v in mu.numerators), mu.denominator)
    return -math.log(best) / math.log(n)


def measure_to_json(mu: Measure) -> str:
    return json.dumps(mu.to_json(), sort_keys=True)
