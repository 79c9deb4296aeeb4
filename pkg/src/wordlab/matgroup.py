"""Enumerated finite groups: SL2, GL2, PGL2 (and small SL3/GL3) over F_p.

Elements are addressed by their ordinal in a canonical ordering (sorted
packed keys), and all group operations act on integer index arrays so
that word maps can be evaluated over whole slices of the group at once.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .ffield import inverse_table, is_prime

__all__ = [
    "BudgetExceeded",
    "GroupTable",
    "MatrixGroup",
    "TableGroup",
    "ClassData",
    "DEFAULT_ELEMENT_BUDGET",
    "group_order_formula",
    "enumerate_group",
    "cyclic_group",
    "group_from_table",
    "conjugacy_classes",
    "is_generating",
    "generated_subgroup",
]

DEFAULT_ELEMENT_BUDGET = 200_000
# dense key->index lookup is used below this many possible keys
_DENSE_LOOKUP_LIMIT = 20_000_000


class BudgetExceeded(RuntimeError):
    """A computation would exceed its configured size budget."""


def group_order_formula(kind: str, p: int) -> int:
    kind = kind.upper()
    if kind in ("SL2", "PGL2"):
        return p * (p * p - 1)
    if kind == "GL2":
        return (p * p - 1) * (p * p - p)
    if kind == "GL3":
        return (p**3 - 1) * (p**3 - p) * (p**3 - p**2)
    if kind == "SL3":
        return (p**3 - 1) * (p**3 - p) * (p**3 - p**2) // (p - 1)
    raise ValueError(f"unknown group kind {kind!r}")


class GroupTable:
    """A finite group whose elements are the integers ``0 .. order-1``."""

    name: str
    order: int
    identity: int
    inverse: np.ndarray

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        out = self.inverse[a]
        return int(out) if np.ndim(out) == 0 else out

    def conj(self, g, h):
        """``h g h^{-1}``."""
        return self.mul(self.mul(h, g), self.inv(h))

    def power(self, a, n: int):
        if n < 0:
            a, n = self.inv(a), -n
        result = np.full(np.shape(a), self.identity, dtype=np.int64)
        base = np.asarray(a, dtype=np.int64)
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return int(result) if np.ndim(result) == 0 else result

    def all(self) -> np.ndarray:
        return np.arange(self.order, dtype=np.int64)

    def element_order(self, g: int) -> int:
        x, n = g, 1
        while x != self.identity:
            x = self.mul(x, g)
            n += 1
        return n

    def random_elements(self, rng: np.random.Generator, size) -> np.ndarray:
        return rng.integers(0, self.order, size=size, dtype=np.int64)

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<{type(self).__name__} {self.name} order={self.order}>"


class MatrixGroup(GroupTable):
    """A group of n x n matrices over F_p, stored as sorted packed keys."""

    def __init__(self, kind: str, p: int, mats: np.ndarray):
        self.kind = kind
        self.p = p
        self.n = mats.shape[1]
        self.projective = kind.startswith("PGL")
        self.name = f"{kind}(F_{p})"
        self._inv = inverse_table(p)
        self._weights = p ** np.arange(self.n * self.n - 1, -1, -1, dtype=np.int64)
        keys = self._pack(mats)
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        self.elements = mats[order]
        self.elements.flags.writeable = False
        self.order = len(self.keys)
        if np.any(self.keys[1:] == self.keys[:-1]):
            raise ValueError("duplicate matrices in enumeration")
        nkeys = p ** (self.n * self.n)
        if nkeys <= _DENSE_LOOKUP_LIMIT:
            self._lookup = np.full(nkeys, -1, dtype=np.int64)
            self._lookup[self.keys] = np.arange(self.order)
        else:
            self._lookup = None
        self.identity = self.index_of(np.eye(self.n, dtype=np.int64))
        self.inverse = self._index_keys(self._pack(self._normalize(self._adjugate_inverse(self.elements))))

    # -- encoding -------------------------------------------------------
    def _pack(self, mats: np.ndarray) -> np.ndarray:
        flat = mats.reshape(len(mats), -1)
        return flat @ self._weights

    def _index_keys(self, keys: np.ndarray) -> np.ndarray:
        if self._lookup is not None:
            idx = self._lookup[keys]
        else:
            idx = np.searchsorted(self.keys, keys)
            idx[idx >= self.order] = -1
            bad = self.keys[np.minimum(idx, self.order - 1)] != keys
            idx[bad] = -1
        if np.any(idx < 0):
            raise KeyError("matrix not in group")
        return idx

    def _normalize(self, mats: np.ndarray) -> np.ndarray:
        mats = mats % self.p
        if not self.projective:
            return mats
        flat = mats.reshape(len(mats), -1)
        nz = flat != 0
        first = np.argmax(nz, axis=1)
        lead = flat[np.arange(len(flat)), first]
        scale = self._inv[lead]
        return (flat * scale[:, None] % self.p).reshape(mats.shape)

    def _adjugate_inverse(self, mats: np.ndarray) -> np.ndarray:
        p = self.p
        if self.n == 2:
            a, b, c, d = mats[:, 0, 0], mats[:, 0, 1], mats[:, 1, 0], mats[:, 1, 1]
            det = (a * d - b * c) % p
            s = self._inv[det]
            out = np.empty_like(mats)
            out[:, 0, 0] = d * s
            out[:, 0, 1] = -b * s
            out[:, 1, 0] = -c * s
            out[:, 1, 1] = a * s
            return out % p
        return np.array([_inverse_mod(m, p) for m in mats], dtype=np.int64)

    # -- public element access -------------------------------------------
    def element(self, i: int) -> np.ndarray:
        return self.elements[i].copy()

    def index_of(self, mat) -> int:
        m = np.asarray(mat, dtype=np.int64).reshape(1, self.n, self.n)
        return int(self._index_keys(self._pack(self._normalize(m)))[0])

    def contains(self, mat) -> bool:
        try:
            self.index_of(mat)
        except KeyError:
            return False
        return True

    def mul(self, a, b):
        a_arr, b_arr = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        shape = a_arr.shape
        A = self.elements[a_arr.ravel()]
        B = self.elements[b_arr.ravel()]
        if self.n == 2:
            C = np.empty_like(A)
            C[:, 0, 0] = A[:, 0, 0] * B[:, 0, 0] + A[:, 0, 1] * B[:, 1, 0]
            C[:, 0, 1] = A[:, 0, 0] * B[:, 0, 1] + A[:, 0, 1] * B[:, 1, 1]
            C[:, 1, 0] = A[:, 1, 0] * B[:, 0, 0] + A[:, 1, 1] * B[:, 1, 0]
            C[:, 1, 1] = A[:, 1, 0] * B[:, 0, 1] + A[:, 1, 1] * B[:, 1, 1]
        else:
            C = np.matmul(A, B)
        out = self._index_keys(self._pack(self._normalize(C))).reshape(shape)
        return int(out) if out.ndim == 0 else out

    def trace(self, idx) -> np.ndarray:
        """Trace mod p (meaningful up to scalars for PGL2)."""
        return np.trace(self.elements[idx], axis1=-2, axis2=-1) % self.p

    def det(self, idx) -> np.ndarray:
        m = self.elements[idx]
        if self.n == 2:
            return (m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]) % self.p
        return np.array([_det_mod(x, self.p) for x in np.reshape(m, (-1, self.n, self.n))]).reshape(np.shape(idx))


class TableGroup(GroupTable):
    """A group given by an explicit multiplication table."""

    def __init__(self, table, name: str = "table"):
        table = np.asarray(table, dtype=np.int64)
        n = len(table)
        if table.shape != (n, n):
            raise ValueError("multiplication table must be square")
        self.table = table
        self.order = n
        self.name = name
        ident = [e for e in range(n) if np.array_equal(table[e], np.arange(n))]
        if len(ident) != 1:
            raise ValueError("table has no unique identity")
        self.identity = ident[0]
        self.inverse = np.argmax(table == self.identity, axis=1).astype(np.int64)
        if not np.all(table[np.arange(n), self.inverse] == self.identity):
            raise ValueError("table is not a group")

    def mul(self, a, b):
        out = self.table[a, b]
        return int(out) if np.ndim(out) == 0 else out


def _det_mod(m: np.ndarray, p: int) -> int:
    m = [[int(v) % p for v in row] for row in m]
    n, det = len(m), 1
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return 0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det = det * m[col][col] % p
        inv = pow(m[col][col], p - 2, p)
        for r in range(col + 1, n):
            f = m[r][col] * inv % p
            m[r] = [(x - f * y) % p for x, y in zip(m[r], m[col])]
    return det % p


def _inverse_mod(m: np.ndarray, p: int) -> np.ndarray:
    n = len(m)
    aug = [[int(v) % p for v in row] + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = pow(aug[col][col], p - 2, p)
        aug[col] = [x * inv % p for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[col])]
    return np.array([row[n:] for row in aug], dtype=np.int64)


def _enumerate_sl2(p: int) -> np.ndarray:
    inv = inverse_table(p)
    out = []
    # a != 0: c free, d = (1 + b c) / a
    a, b, c = (g.ravel() for g in np.meshgrid(np.arange(1, p), np.arange(p), np.arange(p), indexing="ij"))
    d = (1 + b * c) % p * inv[a] % p
    out.append(np.stack([a, b, c, d], axis=1))
    # a == 0: b c = -1, d free
    b, d = (g.ravel() for g in np.meshgrid(np.arange(1, p), np.arange(p), indexing="ij"))
    c = (p - inv[b]) % p
    out.append(np.stack([np.zeros_like(b), b, c, d], axis=1))
    return np.concatenate(out).reshape(-1, 2, 2)


def _enumerate_gl2(p: int) -> np.ndarray:
    grid = np.stack([g.ravel() for g in np.meshgrid(*[np.arange(p)] * 4, indexing="ij")], axis=1)
    det = (grid[:, 0] * grid[:, 3] - grid[:, 1] * grid[:, 2]) % p
    return grid[det != 0].reshape(-1, 2, 2)


def _enumerate_pgl2(p: int) -> np.ndarray:
    # scalar-normalized: first nonzero entry equals 1
    b, c, d = (g.ravel() for g in np.meshgrid(np.arange(p), np.arange(p), np.arange(p), indexing="ij"))
    keep = (d - b * c) % p != 0
    top = np.stack([np.ones_like(b), b, c, d], axis=1)[keep]
    c, d = (g.ravel() for g in np.meshgrid(np.arange(1, p), np.arange(p), indexing="ij"))
    low = np.stack([np.zeros_like(c), np.ones_like(c), c, d], axis=1)
    return np.concatenate([top, low]).reshape(-1, 2, 2)


def _enumerate_generic(kind: str, p: int, n: int) -> np.ndarray:
    total = p ** (n * n)
    if total > 5_000_000:
        raise BudgetExceeded(f"{kind}(F_{p}) enumeration needs {total} candidates")
    grid = np.stack([g.ravel() for g in np.meshgrid(*[np.arange(p)] * (n * n), indexing="ij")], axis=1)
    mats = grid.reshape(-1, n, n)
    dets = np.array([_det_mod(m, p) for m in mats])
    keep = dets == 1 if kind.startswith("SL") else dets != 0
    return mats[keep]


def enumerate_group(kind: str, p: int, budget: int = DEFAULT_ELEMENT_BUDGET) -> MatrixGroup:
    """Enumerate ``kind`` in {SL2, GL2, PGL2, SL3, GL3} over F_p, p odd."""
    kind = kind.upper()
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    order = group_order_formula(kind, p)
    if order > budget:
        raise BudgetExceeded(f"|{kind}(F_{p})| = {order} exceeds element budget {budget}")
    if kind == "SL2":
        mats = _enumerate_sl2(p)
    elif kind == "GL2":
        mats = _enumerate_gl2(p)
    elif kind == "PGL2":
        mats = _enumerate_pgl2(p)
    elif kind in ("SL3", "GL3"):
        mats = _enumerate_generic(kind, p, 3)
    else:
        raise ValueError(f"unknown group kind {kind!r}")
    G = MatrixGroup(kind, p, mats.astype(np.int64))
    assert G.order == order
    return G


def cyclic_group(n: int) -> TableGroup:
    i = np.arange(n)
    return TableGroup((i[:, None] + i[None, :]) % n, name=f"C_{n}")


def group_from_table(table, name: str = "table") -> TableGroup:
    return TableGroup(table, name)


@dataclass(frozen=True, eq=False)
class ClassData:
    """Conjugacy classes of an enumerated group; class 0 is the identity."""

    group: GroupTable
    class_of: np.ndarray
    reps: np.ndarray
    sizes: np.ndarray
    centralizer_sizes: np.ndarray
    k: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "k", len(self.reps))

    @cached_property
    def inverse_class(self) -> np.ndarray:
        return self.class_of[self.group.inverse[self.reps]]

    @cached_property
    def central(self) -> np.ndarray:
        return self.sizes == 1

    @cached_property
    def structure_constants(self) -> np.ndarray:
        """``N[i, j, s] = #{x in C_i : x^{-1} z_s in C_j}`` for a fixed ``z_s`` in C_s.

        Equivalently the number of pairs in ``C_i x C_j`` with product ``z_s``,
        i.e. the class-sum multiplication coefficients.
        """
        G, k = self.group, self.k
        allx = G.all()
        ci = self.class_of
        xinv = G.inverse
        N = np.zeros((k, k, k), dtype=np.int64)
        for s, z in enumerate(self.reps):
            y = G.mul(xinv, z)
            np.add.at(N[:, :, s], (ci[allx], ci[y]), 1)
        N.flags.writeable = False
        return N

    def members(self, c: int) -> np.ndarray:
        return np.flatnonzero(self.class_of == c)


def conjugacy_classes(G: GroupTable) -> ClassData:
    """Orbit partition under conjugation, computed exhaustively."""
    class_of = np.full(G.order, -1, dtype=np.int64)
    everything = G.all()
    inv_all = G.inverse
    reps, sizes = [], []
    order = [G.identity] + [g for g in range(G.order) if g != G.identity]
    for g in order:
        if class_of[g] >= 0:
            continue
        orbit = np.unique(G.mul(G.mul(everything, g), inv_all))
        class_of[orbit] = len(reps)
        reps.append(g)
        sizes.append(len(orbit))
    sizes = np.array(sizes, dtype=np.int64)
    for arr in (class_of,):
        arr.flags.writeable = False
    return ClassData(
        group=G,
        class_of=class_of,
        reps=np.array(reps, dtype=np.int64),
        sizes=sizes,
        centralizer_sizes=G.order // sizes,
    )


def generated_subgroup(gens, G: GroupTable) -> np.ndarray:
    """Boolean mask of the subgroup generated by ``gens`` (BFS closure)."""
    gens = [int(g) for g in gens]
    reached = np.zeros(G.order, dtype=bool)
    reached[G.identity] = True
    frontier = np.array([G.identity], dtype=np.int64)
    while len(frontier):
        nxt = np.concatenate([G.mul(g, frontier) for g in gens]) if gens else frontier[:0]
        nxt = np.unique(nxt)
        nxt = nxt[~reached[nxt]]
        reached[nxt] = True
        frontier = nxt
    return reached


def is_generating(gens, G: GroupTable) -> bool:
    if isinstance(G, MatrixGroup):
        gens = [g if np.ndim(g) == 0 else G.index_of(g) for g in gens]
    return bool(generated_subgroup(gens, G).all())


def bfs_distances(gens, G: GroupTable) -> np.ndarray:
    """Word-length distances from the identity using ``gens`` and inverses."""
    steps = sorted({int(g) for g in gens} | {int(G.inverse[g]) for g in gens})
    dist = np.full(G.order, -1, dtype=np.int64)
    dist[G.identity] = 0
    frontier = np.array([G.identity], dtype=np.int64)
    d = 0
    while len(frontier):
        d += 1
        nxt = np.unique(np.concatenate([G.mul(s, frontier) for s in steps]))
        nxt = nxt[dist[nxt] < 0]
        dist[nxt] = d
        frontier = nxt
    return dist
