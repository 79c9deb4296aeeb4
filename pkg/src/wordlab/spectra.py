"""Numerical character tables and Fourier analysis of class functions.

The table is obtained from the class-sum multiplication constants: in the
orthonormal basis ``K_c / sqrt|K_c|`` of the centre of the group algebra the
multiplication operators are commuting normal matrices, and their common
eigenvectors are the central idempotents, which carry the characters.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .freeword import Word
from .matgroup import ClassData, GroupTable
from .measures import Measure, NotInvariant, word_measure_exact

__all__ = [
    "DegenerateSpectrum",
    "NotInvariant",
    "CharTable",
    "character_table",
    "sl2_degree_multiset",
    "zeta",
    "fourier_coeff",
    "fourier_coeffs",
    "centralizer_bound_check",
    "DecayProfile",
    "spectral_decay_profile",
    "class_function_convolution",
]


class DegenerateSpectrum(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class CharTable:
    classes: ClassData
    degrees: np.ndarray
    values: np.ndarray  # values[rho, c]
    tol: float

    @property
    def k(self) -> int:
        return len(self.degrees)

    @property
    def class_sizes(self) -> np.ndarray:
        return self.classes.sizes

    @property
    def group_order(self) -> int:
        return self.classes.group.order

    def orthogonality_error(self) -> tuple[float, float]:
        """Max deviation of the row and column orthogonality relations."""
        X, s, n = self.values, self.class_sizes, self.group_order
        rows = (X * s) @ X.conj().T / n
        cols = X.conj().T @ X
        row_err = np.abs(rows - np.eye(self.k)).max()
        col_err = np.abs(cols - np.diag(n / s)).max()
        return float(row_err), float(col_err)

    def to_json(self) -> dict:
        return {
            "group": self.classes.group.name,
            "group_order": int(self.group_order),
            "degrees": [int(d) for d in self.degrees],
            "class_sizes": [int(s) for s in self.class_sizes],
            "values": [[[round(float(v.real), 12), round(float(v.imag), 12)] for v in row] for row in self.values],
            "tol": self.tol,
        }


def _normal_operators(cd: ClassData) -> list[np.ndarray]:
    N = cd.structure_constants.astype(float)
    root = np.sqrt(cd.sizes.astype(float))
    # L_i[s, t] = N[i, t, s] * sqrt|K_s| / sqrt|K_t|
    return [N[i].T * root[:, None] / root[None, :] for i in range(cd.k)]


def _random_hermitian(ops, rng) -> np.ndarray:
    k = ops[0].shape[0]
    H = np.zeros((k, k), dtype=complex)
    for L in ops:
        a, b = rng.standard_normal(2)
        H += a * (L + L.conj().T) + 1j * b * (L - L.conj().T)
    return H


def _split(ops, basis: np.ndarray, rng, depth: int, max_tries: int) -> list[np.ndarray]:
    """Recursively diagonalize random combinations restricted to ``basis``."""
    dim = basis.shape[1]
    if dim == 1:
        return [basis[:, 0]]
    for _ in range(max_tries):
        H = _random_hermitian(ops, rng)
        sub = basis.conj().T @ H @ basis
        evals, evecs = np.linalg.eigh((sub + sub.conj().T) / 2)
        scale = max(1.0, np.abs(evals).max())
        gaps = np.diff(evals) > 1e-7 * scale
        if gaps.any():
            break
    else:
        raise DegenerateSpectrum(f"could not split a {dim}-dimensional common eigenspace")
    vecs = basis @ evecs
    out, start = [], 0
    for i in range(dim):
        if i == dim - 1 or gaps[i]:
            out.extend(_split(ops, vecs[:, start : i + 1], rng, depth + 1, max_tries))
            start = i + 1
    return out


def character_table(cd: ClassData, seed: int = 0, tol: float = 1e-8, max_tries: int = 8) -> CharTable:
    """Irreducible characters of ``cd.group`` as a complex ``k x k`` array.

    Rows are sorted by degree and then lexicographically by rounded values,
    with the trivial character first.
    """
    G = cd.group
    n, k = G.order, cd.k
    ops = _normal_operators(cd)
    rng = np.random.default_rng(seed)
    vecs = _split(ops, np.eye(k, dtype=complex), rng, 0, max_tries)
    if len(vecs) != k:
        raise DegenerateSpectrum("eigenvector count does not match class count")
    root = np.sqrt(cd.sizes.astype(float))
    rows, degrees = [], []
    for v in vecs:
        if abs(v[0]) < 1e-12:
            raise DegenerateSpectrum("eigenvector vanishes at the identity class")
        ratio = np.conj(v / v[0]) / root  # chi(c) / chi(1)
        deg = math.sqrt(n / float(np.sum(cd.sizes * np.abs(ratio) ** 2)))
        d = round(deg)
        if d < 1 or abs(deg - d) > 1e-6:
            raise DegenerateSpectrum(f"non-integral degree {deg}")
        degrees.append(d)
        rows.append(ratio * d)
    X = np.array(rows)
    keys = [
        (d, tuple(np.round(-row.real, 6)), tuple(np.round(-row.imag, 6)))
        for d, row in zip(degrees, X)
    ]
    order = sorted(range(k), key=lambda i: keys[i])
    ct = CharTable(cd, np.array([degrees[i] for i in order], dtype=np.int64), X[order], tol)
    if sum(int(d) ** 2 for d in ct.degrees) != n:
        raise DegenerateSpectrum("sum of squared degrees differs from |G|")
    row_err, col_err = ct.orthogonality_error()
    if max(row_err, col_err / max(1.0, float(n))) > tol * max(1, k):
        raise DegenerateSpectrum(f"orthogonality error {row_err:.3g}, {col_err:.3g}")
    return ct


def sl2_degree_multiset(p: int) -> list[int]:
    """Degrees of the irreducible characters of SL2(F_p), p odd (closed form)."""
    degs = [1, p, (p + 1) // 2, (p + 1) // 2, (p - 1) // 2, (p - 1) // 2]
    degs += [p + 1] * ((p - 3) // 2) + [p - 1] * ((p - 1) // 2)
    return sorted(degs)


def zeta(ct: CharTable, s: float) -> float:
    return float(sum(float(d) ** (-s) for d in ct.degrees))


def _class_masses(mu: Measure, ct: CharTable) -> np.ndarray:
    if mu.mode == "element":
        mu = mu.to_classes(ct.classes)
    return mu.masses


def fourier_coeffs(mu: Measure, ct: CharTable) -> np.ndarray:
    """``a_{mu, rho} = sum_g conj(rho(g)) mu(g)`` for every irreducible ``rho``."""
    return ct.values.conj() @ _class_masses(mu, ct)


def fourier_coeff(mu: Measure, ct: CharTable, rho: int) -> complex:
    return complex(fourier_coeffs(mu, ct)[rho])


def centralizer_bound_check(ct: CharTable, tol: float = 1e-9) -> dict:
    """Check ``|chi(c)| <= sqrt|C_G(c)|`` everywhere; report the tightest pair."""
    bound = np.sqrt(ct.classes.centralizer_sizes.astype(float))
    slack = bound[None, :] - np.abs(ct.values)
    rho, c = np.unravel_index(np.argmin(slack), slack.shape)
    return {
        "holds": bool(slack.min() >= -tol),
        "min_slack": float(slack.min()),
        "tightest": {"character": int(rho), "class": int(c)},
        "tol": tol,
    }


@dataclass
class DecayProfile:
    degrees: list[int]
    ratios: list[float]  # |a_rho| / rho(1)
    epsilon_hat: float
    flagged: list[int] = field(default_factory=list)


def spectral_decay_profile(w: Word, ct: CharTable, tol: float = 1e-10, mu: Measure | None = None) -> DecayProfile:
    """Per-irreducible decay ``|a_{tau_w, rho}| / rho(1)`` and the fitted exponent.

    The exponent is ``min over nontrivial rho of 1 - log|a| / log rho(1)``.
    Coefficients below ``tol`` contribute 1 and are flagged, as are linear
    nontrivial characters (``log rho(1) = 0``).
    """
    G = ct.classes.group
    if mu is None:
        mu = word_measure_exact(w, G, ct.classes)
    a = np.abs(fourier_coeffs(mu, ct))
    ratios = (a / ct.degrees).tolist()
    eps, flagged = math.inf, []
    for i in range(1, ct.k):
        d = int(ct.degrees[i])
        if a[i] < tol or d == 1:
            flagged.append(i)
            if a[i] < tol:
                eps = min(eps, 1.0)
            continue
        eps = min(eps, 1.0 - math.log(a[i]) / math.log(d))
    if eps is math.inf:
        eps = 1.0
    return DecayProfile([int(d) for d in ct.degrees], ratios, eps, flagged)


def class_function_convolution(f: np.ndarray, g: np.ndarray, cd: ClassData) -> np.ndarray:
    """Normalized convolution ``(f*g)(x) = |G|^{-1} sum_h f(h) g(h^{-1}x)`` of class functions."""
    N = cd.structure_constants.astype(complex)
    n = cd.group.order
    return np.einsum("i,j,ijs->s", f, g, N) / n


def char_table_json(ct: CharTable) -> str:
    return json.dumps(ct.to_json(), sort_keys=True)
