"""Cayley graphs, their Laplacian spectra, and random-walk return rates."""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .freeword import RNG_ALGORITHM, is_trivial_batch, make_rng
from .matgroup import GroupTable, MatrixGroup, bfs_distances, generated_subgroup

__all__ = [
    "Disconnected",
    "CayleyGraph",
    "cayley_graph",
    "lambda1",
    "laplacian_spectrum",
    "diameter",
    "check_gap_diameter",
    "walk_deviation",
    "walk_deviation_series",
    "kesten_return",
    "kesten_exact",
    "KestenResult",
    "random_generating_pairs",
    "csv_row",
]

DENSE_LIMIT = 4000


class Disconnected(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CayleyGraph:
    """Symmetrized Cayley multigraph: ``g -> x_i g`` and ``g -> x_i^{-1} g``.

    A self-inverse generator contributes two parallel edges, so the graph is
    ``2r``-regular and the walk is ``(1/2r) sum (delta_{x_i} + delta_{x_i^{-1}})``.
    """

    group: GroupTable
    generators: tuple[int, ...]
    adjacency: np.ndarray = field(repr=False)  # (|G|, 2r) out-neighbours

    @property
    def r(self) -> int:
        return len(self.generators)

    @property
    def degree(self) -> int:
        return 2 * self.r

    @cached_property
    def connected(self) -> bool:
        return bool(generated_subgroup(self.generators, self.group).all())

    @cached_property
    def adjacency_matrix(self) -> sp.csr_matrix:
        n = self.group.order
        rows = np.repeat(np.arange(n), self.degree)
        cols = self.adjacency.ravel()
        return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))

    @cached_property
    def laplacian(self) -> sp.csr_matrix:
        n = self.group.order
        return (self.degree * sp.identity(n, format="csr") - self.adjacency_matrix).tocsr()

    def require_connected(self):
        if not self.connected:
            raise Disconnected(f"generators do not generate {self.group.name}")

    @property
    def generators_hash(self) -> str:
        G = self.group
        if isinstance(G, MatrixGroup):
            payload = repr([G.element(g).tolist() for g in self.generators])
        else:
            payload = repr(list(self.generators))
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


def cayley_graph(G: GroupTable, generators) -> CayleyGraph:
    gens = []
    for g in generators:
        if isinstance(G, MatrixGroup) and np.ndim(g) > 0:
            g = G.index_of(g)
        gens.append(int(g))
    everything = G.all()
    cols = []
    for x in gens:
        cols.append(G.mul(x, everything))
        cols.append(G.mul(G.inv(x), everything))
    adjacency = np.stack(cols, axis=1) if cols else np.zeros((G.order, 0), dtype=np.int64)
    adjacency.flags.writeable = False
    return CayleyGraph(G, tuple(gens), adjacency)


def laplacian_spectrum(g: CayleyGraph) -> np.ndarray:
    """Full sorted spectrum of the combinatorial Laplacian (dense solver)."""
    return np.linalg.eigvalsh(g.laplacian.toarray())


def lambda1(g: CayleyGraph) -> float:
    """Smallest nonzero eigenvalue of the combinatorial Laplacian."""
    g.require_connected()
    n = g.group.order
    if n == 1:
        raise Disconnected("trivial group has no nonzero eigenvalue")
    if n <= DENSE_LIMIT:
        return float(laplacian_spectrum(g)[1])
    # lambda_1 = 2r - (second largest adjacency eigenvalue); the top one is the constants
    A = g.adjacency_matrix.astype(float)
    A = ((A + A.T) / 2).tocsr()
    vals = spla.eigsh(A, k=2, which="LA", tol=1e-12, ncv=min(n, 80), maxiter=5 * n, v0=np.ones(n) + np.arange(n) / n)[0]
    return float(g.degree - np.sort(vals)[0])


def diameter(g: CayleyGraph) -> int:
    """Eccentricity of the identity; equals the diameter by vertex transitivity."""
    g.require_connected()
    return int(bfs_distances(g.generators, g.group).max())


def check_gap_diameter(g: CayleyGraph, lam: float | None = None, gamma: int | None = None) -> dict:
    lam = lambda1(g) if lam is None else lam
    gamma = diameter(g) if gamma is None else gamma
    bound = 1.0 / (8 * gamma * gamma)
    return {"lambda1": lam, "diameter": gamma, "bound": bound, "slack": lam - bound, "holds": lam >= bound - 1e-9}


def walk_deviation_series(g: CayleyGraph, steps: int, start: np.ndarray | None = None) -> np.ndarray:
    """``max_x |mu^{*l}(x) - 1/|G||`` for ``l = 0 .. steps``."""
    n = g.group.order
    v = np.zeros(n)
    if start is None:
        v[g.group.identity] = 1.0
    else:
        v = np.asarray(start, dtype=float).copy()
    P = (g.adjacency_matrix.T / g.degree).tocsr()
    out = [np.abs(v - 1.0 / n).max()]
    for _ in range(steps):
        v = P @ v
        out.append(np.abs(v - 1.0 / n).max())
    return np.array(out)


def walk_deviation(g: CayleyGraph, steps: int, lam: float | None = None) -> dict:
    lam = lambda1(g) if lam is None else lam
    dev = float(walk_deviation_series(g, steps)[-1])
    bound = math.exp(-lam * steps / g.degree)
    return {"steps": steps, "deviation": dev, "bound": bound, "holds": dev <= bound + 1e-12}


def random_generating_pairs(G: GroupTable, count: int, seed: int) -> list[tuple[int, int]]:
    rng = make_rng(seed)
    out = []
    while len(out) < count:
        a, b = (int(x) for x in rng.integers(0, G.order, size=2))
        if generated_subgroup((a, b), G).all():
            out.append((a, b))
    return out


def kesten_exact(r: int, length: int) -> float:
    """Probability that a uniform non-reduced word of given length is trivial.

    Computed from the distance-to-identity chain on the 2r-regular tree.
    """
    probs = np.zeros(length + 2)
    probs[0] = 1.0
    up, down = (2 * r - 1) / (2 * r), 1 / (2 * r)
    for _ in range(length):
        nxt = np.zeros_like(probs)
        nxt[1] += probs[0]
        nxt[2:] += up * probs[1:-1]
        nxt[:-2] += down * probs[1:-1][: len(nxt) - 2]
        probs = nxt
    return float(probs[0])


@dataclass
class KestenResult:
    r: int
    lengths: list[int]
    trials: int
    hits: list[int]
    rates: list[float]
    reference: list[float]
    slope: float  # fitted log-decay per step, with the l^{-3/2} prefactor
    plain_slope: float  # naive log-linear slope, no prefactor
    fit_min_length: int
    seed: int
    rng: str = RNG_ALGORITHM

    @property
    def target(self) -> float:
        return math.log(math.sqrt(2 * self.r - 1) / self.r)


def _fit(lengths, hits, trials, min_length):
    ls = np.array(lengths, dtype=float)
    h = np.array(hits, dtype=float)
    use = (h > 0) & (ls >= min_length)
    if use.sum() < 2:
        return float("nan"), float("nan")
    y = np.log(h[use] / trials)
    x = ls[use]
    w = np.sqrt(h[use])  # Poisson weights on log counts
    corrected = np.polyfit(x, y + 1.5 * np.log(x), 1, w=w)[0]
    plain = np.polyfit(x, y, 1, w=w)[0]
    return float(corrected), float(plain)


def kesten_return(
    r: int,
    lmax: int,
    trials: int,
    seed: int,
    fit_min_length: int = 10,
    chunk: int = 250_000,
) -> KestenResult:
    """Empirical return probability of non-reduced random words in F_r.

    Each even length is sampled independently. The per-step decay is fitted
    as ``log P(l) ~ a + s*l - (3/2) log l``, the local-limit shape of return
    probabilities on a regular tree; the naive log-linear slope is reported
    alongside it.
    """
    rng = make_rng(seed)
    lengths = list(range(2, lmax + 1, 2))
    hits = []
    for ell in lengths:
        h = 0
        done = 0
        while done < trials:
            m = min(chunk, trials - done)
            letters = rng.integers(1, r + 1, size=(m, ell), dtype=np.int8)
            letters *= rng.choice(np.array([-1, 1], dtype=np.int8), size=(m, ell))
            h += int(is_trivial_batch(letters).sum())
            done += m
        hits.append(h)
    slope, plain = _fit(lengths, hits, trials, fit_min_length)
    return KestenResult(
        r=r,
        lengths=lengths,
        trials=trials,
        hits=hits,
        rates=[x / trials for x in hits],
        reference=[(math.sqrt(2 * r - 1) / r) ** ell for ell in lengths],
        slope=slope,
        plain_slope=plain,
        fit_min_length=fit_min_length,
        seed=seed,
    )


def csv_row(g: CayleyGraph) -> dict:
    report = check_gap_diameter(g)
    return {
        "p": getattr(g.group, "p", ""),
        "generators_hash": g.generators_hash,
        "order": g.group.order,
        "diameter": report["diameter"],
        "lambda1": report["lambda1"],
        "bound_slack": report["slack"],
    }
