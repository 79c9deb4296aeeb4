"""Trace polynomials of two-generator words and SL2 character varieties mod p.

``trace_poly`` writes every product of A, B, A^-1, B^-1 in the basis
{I, A, B, AB} over Z[x, y, z] (x = tr A, y = tr B, z = tr AB), using
Cayley-Hamilton in the forms A^2 = xA - I, A^-1 = xI - A and
BA = -AB + yA + xB + (z - xy)I. The trace of the final combination is the
word polynomial. Every polynomial is checked against direct matrix
evaluation on random SL2(F_p) pairs before it is used.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .ffield import is_prime, is_square, primes_in, sqrt_mod
from .freeword import Word, make_rng, parse_word
from .matgroup import BudgetExceeded

__all__ = [
    "ArityUnsupported",
    "OracleFailure",
    "InsufficientData",
    "TracePoly",
    "X",
    "Y",
    "Z",
    "ONE",
    "trace_poly",
    "validate_trace_poly",
    "random_sl2",
    "word_trace_numeric",
    "VarietySpec",
    "variety_spec",
    "diagnostic_spec",
    "excluded_residues",
    "CountRow",
    "CountSeries",
    "count_points",
    "solutions",
    "count_series",
    "DimEstimate",
    "estimate_dim",
    "estimate_components",
    "special_point_check",
    "EXAMPLE_WORDS",
    "DEFAULT_POINT_BUDGET",
]

DEFAULT_POINT_BUDGET = 125_000_000


class ArityUnsupported(ValueError):
    pass


class OracleFailure(AssertionError):
    """A generated polynomial disagreed with direct matrix evaluation."""


class InsufficientData(ValueError):
    pass


class TracePoly:
    """Sparse integer polynomial in x, y, z: ``{(i, j, k): coefficient}``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: int(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c: int) -> TracePoly:
        return cls({(0, 0, 0): c})

    def __add__(self, other):
        other = _lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return TracePoly(out)

    __radd__ = __add__

    def __neg__(self):
        return TracePoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        other = _lift(other)
        out: dict = {}
        for (a, b, c), u in self.terms.items():
            for (d, e, f), v in other.terms.items():
                m = (a + d, b + e, c + f)
                out[m] = out.get(m, 0) + u * v
        return TracePoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = TracePoly.const(other)
        return isinstance(other, TracePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def variables(self) -> set[int]:
        return {v for m in self.terms for v in range(3) if m[v]}

    def __call__(self, x, y=0, z=0):
        return sum(c * x**i * y**j * z**k for (i, j, k), c in self.terms.items())

    def eval_mod(self, p: int, x, y=0, z=0):
        """Vectorized evaluation mod p on broadcastable integer arrays."""
        x, y, z = (np.asarray(v, dtype=np.int64) % p for v in (x, y, z))
        shape = np.broadcast_shapes(x.shape, y.shape, z.shape)
        out = np.zeros(shape, dtype=np.int64)
        powers = [{}, {}, {}]

        def pw(var, base, e):
            if e not in powers[var]:
                powers[var][e] = _powmod(base, e, p)
            return powers[var][e]

        for (i, j, k), c in self.terms.items():
            term = np.full(shape, c % p, dtype=np.int64)
            if i:
                term = term * pw(0, x, i) % p
            if j:
                term = term * pw(1, y, j) % p
            if k:
                term = term * pw(2, z, k) % p
            out = (out + term) % p
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (-sum(m), tuple(-e for e in m))):
            c = self.terms[m]
            mono = "*".join(
                (v if e == 1 else f"{v}^{e}") for v, e in zip("xyz", m) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def _lift(v) -> TracePoly:
    return v if isinstance(v, TracePoly) else TracePoly.const(v)


def _powmod(base: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(base)
    b = base.copy()
    while e:
        if e & 1:
            out = out * b % p
        b = b * b % p
        e >>= 1
    return out


ONE = TracePoly.const(1)
X = TracePoly({(1, 0, 0): 1})
Y = TracePoly({(0, 1, 0): 1})
Z = TracePoly({(0, 0, 1): 1})


def _times_a(c):
    cI, cA, cB, cAB = c
    return (
        -cA + (Z - X * Y) * cB - Y * cAB,
        cI + X * cA + Y * cB + Z * cAB,
        X * cB + cAB,
        -cB,
    )


def _times_b(c):
    cI, cA, cB, cAB = c
    return (-cB, -cAB, cI + Y * cB, cA + Y * cAB)


def _scaled_minus(scale, c, d):
    return tuple(scale * u - v for u, v in zip(c, d))


def _cyclic_reduce(syl: tuple[int, ...]) -> tuple[int, ...]:
    while len(syl) > 1 and syl[0] == -syl[-1]:
        syl = syl[1:-1]
    return syl


@lru_cache(maxsize=4096)
def _trace_poly_cached(syl: tuple[int, ...]) -> TracePoly:
    c = (ONE, TracePoly(), TracePoly(), TracePoly())
    for s in syl:
        if s == 1:
            c = _times_a(c)
        elif s == 2:
            c = _times_b(c)
        elif s == -1:
            c = _scaled_minus(X, c, _times_a(c))
        else:
            c = _scaled_minus(Y, c, _times_b(c))
    cI, cA, cB, cAB = c
    return 2 * cI + X * cA + Y * cB + Z * cAB


def trace_poly(w: Word, validate: bool = False) -> TracePoly:
    """Word polynomial ``P_w`` with ``tr w(A, B) = P_w(tr A, tr B, tr AB)``."""
    if w.r != 2 and any(abs(s) > 2 for s in w.syllables):
        raise ArityUnsupported("trace polynomials need a word on two letters")
    if w.r > 2:
        raise ArityUnsupported("trace polynomials need a word on two letters")
    P = _trace_poly_cached(_cyclic_reduce(w.syllables))
    if validate:
        validate_trace_poly(w, P)
    return P


def random_sl2(p: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` uniform random elements of SL2(F_p) as an ``(n, 2, 2)`` array."""
    out = np.empty((0, 2, 2), dtype=np.int64)
    while len(out) < n:
        m = 2 * (n - len(out)) + 8
        a, b, c, d = (rng.integers(0, p, size=m) for _ in range(4))
        ok = (a * d - b * c) % p == 1
        out = np.concatenate([out, np.stack([a, b, c, d], axis=1)[ok].reshape(-1, 2, 2)])
    return out[:n]


def _inv2(M, p):
    out = np.empty_like(M)
    out[:, 0, 0] = M[:, 1, 1]
    out[:, 0, 1] = -M[:, 0, 1]
    out[:, 1, 0] = -M[:, 1, 0]
    out[:, 1, 1] = M[:, 0, 0]
    return out % p


def word_trace_numeric(w: Word, A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """``tr w(A, B) mod p`` by direct matrix products (independent of the rewriting)."""
    gens = {1: A % p, 2: B % p, -1: _inv2(A, p), -2: _inv2(B, p)}
    acc = np.broadcast_to(np.eye(2, dtype=np.int64), A.shape).copy()
    for s in w.syllables:
        acc = np.matmul(acc, gens[s]) % p
    return (acc[:, 0, 0] + acc[:, 1, 1]) % p


def validate_trace_poly(w: Word, P: TracePoly, primes=(101, 103), pairs: int = 1000, seed: int = 0) -> None:
    rng = make_rng(seed)
    for p in primes:
        A = random_sl2(p, pairs, rng)
        B = random_sl2(p, pairs, rng)
        AB = np.matmul(A, B) % p
        lhs = P.eval_mod(p, np.trace(A, axis1=1, axis2=2), np.trace(B, axis1=1, axis2=2), np.trace(AB, axis1=1, axis2=2))
        rhs = word_trace_numeric(w, A, B, p)
        bad = np.flatnonzero(lhs != rhs)
        if len(bad):
            i = int(bad[0])
            raise OracleFailure(
                f"P_{w} disagrees with tr w(A,B) mod {p} on {len(bad)}/{pairs} pairs; "
                f"first A={A[i].tolist()} B={B[i].tolist()}: poly {int(lhs[i])} vs matrix {int(rhs[i])}"
            )


# --------------------------------------------------------------------------
# character varieties

# stand-in for the finite set of finite irreducible representations
EXCLUDED_BOX = ("0", "1", "-1", "sqrt2", "-sqrt2", "(1+sqrt5)/2", "(1-sqrt5)/2")


def excluded_residues(p: int, values=EXCLUDED_BOX) -> list[int]:
    """Residues mod p of the named algebraic numbers that exist in F_p."""
    inv2 = pow(2, p - 2, p)
    r2 = sqrt_mod(2, p)
    r5 = sqrt_mod(5, p)
    out = set()
    for v in values:
        if v == "0":
            out.add(0)
        elif v == "1":
            out.add(1 % p)
        elif v == "-1":
            out.add(-1 % p)
        elif v in ("sqrt2", "-sqrt2"):
            out.update(r2)
        elif v in ("(1+sqrt5)/2", "(1-sqrt5)/2"):
            out.update((1 + s) * inv2 % p for s in r5)
        else:
            raise ValueError(f"unknown excluded value {v!r}")
    return sorted(out)


@dataclass
class VarietySpec:
    """``{equations = 0, inequations != 0}`` in F_p^nvars, minus an excluded box."""

    equations: list[TracePoly]
    inequations: list[TracePoly] = field(default_factory=list)
    nvars: int = 3
    excluded: tuple[str, ...] = EXCLUDED_BOX
    label: str = ""
    metadata: dict = field(default_factory=dict)


def _named_words() -> dict[str, Word]:
    a, b = Word(2, (1,)), Word(2, (2,))
    u = a * b.inverse() * a.inverse() * b
    fig8 = u * a * u.inverse() * b.inverse()
    v = b * a * b.inverse() * a.inverse() * b.inverse() * a * b  # [b,a] b^-1 a b
    white = a * v * a.inverse() * v.inverse()
    return {
        "figure-eight": fig8,
        "whitehead": white,
        "bs32": parse_word("baaBAAA"),
        "a2ba-2b-2": parse_word("aabAABB"),
        "ten-points": parse_word("bbbbbaBAbaaa"),
        "free": Word(2, ()),
    }


EXAMPLE_WORDS = _named_words()


def variety_spec(w: Word, validate: bool = True) -> VarietySpec:
    """Equations of the principal part: P_w = 2, P_{aw} = x, P_{bw} = y, Delta != 0.

    Delta is taken to be ``P_{[a,b]} - 2`` as produced by :func:`trace_poly`.
    """
    if w.r != 2:
        raise ArityUnsupported("character varieties are implemented for two generators")
    a, b = Word(2, (1,)), Word(2, (2,))
    polys = {}
    for name, word in (("w", w), ("aw", a * w), ("bw", b * w), ("com", Word(2, (1, 2, -1, -2)))):
        polys[name] = trace_poly(word, validate=validate)
    delta = polys["com"] - 2
    return VarietySpec(
        equations=[polys["w"] - 2, polys["aw"] - X, polys["bw"] - Y],
        inequations=[delta],
        nvars=3,
        label=str(w),
        metadata={"delta": repr(delta), "P_w": repr(polys["w"])},
    )


def diagnostic_spec(equations, nvars: int, inequations=(), label: str = "") -> VarietySpec:
    """A spec with no excluded box, for calibration on simple schemes."""
    return VarietySpec(list(equations), list(inequations), nvars, (), label)


@dataclass(frozen=True)
class CountRow:
    p: int
    raw: int
    excluded: int

    @property
    def net(self) -> int:
        return self.raw - self.excluded


@dataclass
class CountSeries:
    label: str
    rows: list[CountRow] = field(default_factory=list)

    @property
    def primes(self) -> list[int]:
        return [r.p for r in self.rows]

    @property
    def net(self) -> list[int]:
        return [r.net for r in self.rows]

    def to_csv(self) -> str:
        lines = ["p,raw,excluded,net"]
        lines += [f"{r.p},{r.raw},{r.excluded},{r.net}" for r in self.rows]
        return "\n".join(lines) + "\n"


def _z_coefficients(P: TracePoly, p: int, xs: np.ndarray) -> list[np.ndarray]:
    """For a 3-variable poly, ``C[k][x, y]`` = coefficient of z^k at (x, y)."""
    deg_z = max((m[2] for m in P.terms), default=0)
    ys = np.arange(p, dtype=np.int64)
    xp = {0: np.ones_like(xs)}
    yp = {0: np.ones_like(ys)}
    out = [np.zeros((len(xs), p), dtype=np.int64) for _ in range(deg_z + 1)]
    for (i, j, k), c in P.terms.items():
        if i not in xp:
            xp[i] = _powmod(xs, i, p)
        if j not in yp:
            yp[j] = _powmod(ys, j, p)
        out[k] = (out[k] + (c % p) * np.outer(xp[i], yp[j]) % p) % p
    return out


def _slice_zeros(coeffs: list[np.ndarray], row: int, p: int) -> np.ndarray:
    """Horner in z over the full (y, z) grid for one x-slice; zero mask."""
    zs = np.arange(p, dtype=np.int64)[None, :]
    acc = np.broadcast_to(coeffs[-1][row][:, None], (p, p)).copy()
    for C in reversed(coeffs[:-1]):
        acc = (acc * zs + C[row][:, None]) % p
    return acc == 0


def solutions(spec: VarietySpec, p: int, budget: int = DEFAULT_POINT_BUDGET, workers: int = 1) -> np.ndarray:
    """All points of ``spec`` over F_p as an ``(m, nvars)`` array, sorted."""
    if not is_prime(p) or p == 2:
        raise ValueError("p must be an odd prime")
    n = spec.nvars
    if p**n > budget:
        raise BudgetExceeded(f"{p}^{n} point evaluations exceed budget {budget}")
    eqs = [e for e in spec.equations if e]
    if any(not e.terms.keys() - {(0, 0, 0)} and e.terms.get((0, 0, 0), 0) % p for e in eqs):
        return np.zeros((0, n), dtype=np.int64)
    if n < 3:
        grids = np.meshgrid(*[np.arange(p, dtype=np.int64)] * n, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        return _filter(spec, pts, p)
    if not eqs:
        first = None
    else:
        first = min(eqs, key=lambda e: len(e.terms))
    xs = np.arange(p, dtype=np.int64)
    coeffs = _z_coefficients(first, p, xs) if first is not None else None

    def slab(x):
        if coeffs is None:
            yz = np.argwhere(np.ones((p, p), dtype=bool))
        else:
            yz = np.argwhere(_slice_zeros(coeffs, x, p))
        pts = np.column_stack([np.full(len(yz), x, dtype=np.int64), yz])
        return _filter(spec, pts, p)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(slab, range(p)))
    else:
        parts = [slab(x) for x in range(p)]
    return np.concatenate(parts) if parts else np.zeros((0, 3), dtype=np.int64)


def _filter(spec: VarietySpec, pts: np.ndarray, p: int) -> np.ndarray:
    cols = [pts[:, i] for i in range(pts.shape[1])] + [0] * (3 - pts.shape[1])
    keep = np.ones(len(pts), dtype=bool)
    for e in spec.equations:
        if not len(pts):
            break
        keep &= e.eval_mod(p, *cols) == 0
    for e in spec.inequations:
        keep &= e.eval_mod(p, *cols) != 0
    return pts[keep]


def count_points(spec: VarietySpec, p: int, budget: int = DEFAULT_POINT_BUDGET, workers: int = 1) -> CountRow:
    pts = solutions(spec, p, budget=budget, workers=workers)
    excluded = 0
    if spec.excluded and len(pts):
        box = np.array(excluded_residues(p, spec.excluded), dtype=np.int64)
        excluded = int(np.isin(pts, box).all(axis=1).sum())
    return CountRow(p, int(len(pts)), excluded)


def count_series(spec: VarietySpec, primes, budget: int = DEFAULT_POINT_BUDGET, workers: int = 1) -> CountSeries:
    return CountSeries(spec.label, [count_points(spec, p, budget, workers) for p in primes])


@dataclass
class DimEstimate:
    dim: int | None  # None means the series is empty
    slope: float
    intercept: float
    used_primes: int
    residual: float

    @property
    def label(self) -> str:
        return "empty" if self.dim is None else str(self.dim)


def estimate_dim(series: CountSeries, min_primes: int = 8) -> DimEstimate:
    """Rounded least-squares slope of ``log net`` against ``log p``."""
    net = np.array(series.net, dtype=float)
    ps = np.array(series.primes, dtype=float)
    if len(net) and np.all(net == 0):
        return DimEstimate(None, 0.0, 0.0, len(net), 0.0)
    use = net > 0
    if use.sum() < min_primes:
        raise InsufficientData(f"only {int(use.sum())} primes with positive counts (need {min_primes})")
    x, y = np.log(ps[use]), np.log(net[use])
    slope, intercept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return DimEstimate(max(0, int(round(slope))), float(slope), float(intercept), int(use.sum()), resid)


def estimate_components(series: CountSeries, dim: int, window: tuple[int, int] | None = None, min_primes: int = 25) -> float:
    """Mean of ``net / p^dim`` over the primes of ``series`` inside ``window``."""
    rows = [r for r in series.rows if window is None or window[0] <= r.p <= window[1]]
    if len(rows) < min_primes:
        raise InsufficientData(f"{len(rows)} primes in window (need {min_primes})")
    return float(np.mean([r.net / r.p**dim for r in rows]))


def special_point_check(p: int, spec: VarietySpec | None = None) -> dict:
    """Points (-+sqrt2, -1, +-1/sqrt2) for w = a^2 b a^-2 b^-2 against an exhaustive count."""
    if spec is None:
        spec = variety_spec(EXAMPLE_WORDS["a2ba-2b-2"])
    roots = sqrt_mod(2, p)
    candidates = []
    if roots:
        s = roots[0]
        inv_s = pow(s, p - 2, p)
        # sign pairing: x = -sqrt2 with z = +1/sqrt2, and x = +sqrt2 with z = -1/sqrt2
        candidates = [(-s % p, p - 1, inv_s), (s, p - 1, -inv_s % p)]
    satisfied = []
    for pt in candidates:
        arr = np.array([pt], dtype=np.int64)
        satisfied.append(bool(len(_filter(spec, arr, p))))
    row = count_points(spec, p)
    pts = solutions(spec, p)
    return {
        "p": p,
        "two_is_square": bool(roots),
        "candidates": [list(map(int, c)) for c in candidates],
        "candidates_satisfy": satisfied,
        "net": row.net,
        "raw": row.raw,
        "points": pts.tolist(),
    }
