"""Prime field arithmetic.

Elements are canonical residues in ``[0, p)``. Python integers are
unbounded, so products never overflow regardless of ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "DivisionByZero",
    "PrimeField",
    "FpElt",
    "is_prime",
    "sqrt_mod",
    "is_square",
    "inverse_table",
    "primes_in",
]


class DivisionByZero(ZeroDivisionError):
    """Raised when inverting zero in a prime field."""


# Deterministic Miller-Rabin witnesses for n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def primes_in(lo: int, hi: int, odd_only: bool = True) -> list[int]:
    """Primes in the closed interval ``[lo, hi]``."""
    start = max(lo, 3 if odd_only else 2)
    return [n for n in range(start, hi + 1) if is_prime(n)]


def is_square(a: int, p: int) -> bool:
    """Euler's criterion; zero counts as a square."""
    a %= p
    return a == 0 or pow(a, (p - 1) // 2, p) == 1


@lru_cache(maxsize=None)
def _nonresidue(p: int) -> int:
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    return z


def sqrt_mod(a: int, p: int) -> tuple[int, ...]:
    """Square roots of ``a`` modulo an odd prime ``p`` (Tonelli-Shanks).

    Returns ``(r, p - r)`` with ``r <= p - r``, ``(0,)`` for ``a = 0`` and
    ``()`` for a non-residue.
    """
    if p == 2:
        raise ValueError("sqrt_mod requires an odd prime")
    a %= p
    if a == 0:
        return (0,)
    if pow(a, (p - 1) // 2, p) != 1:
        return ()
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        m = s
        c = pow(_nonresidue(p), q, p)
        t = pow(a, q, p)
        r = pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m = i
            c = b * b % p
            t = t * c % p
            r = r * b % p
    return tuple(sorted((r, p - r)))


@lru_cache(maxsize=64)
def inverse_table(p: int) -> np.ndarray:
    """``inv[a] = a^{-1} mod p`` for ``a != 0``; ``inv[0] = 0``."""
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    inv.flags.writeable = False
    return inv


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def __call__(self, value: int) -> FpElt:
        return FpElt(value % self.p, self.p)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DivisionByZero(f"0 has no inverse mod {self.p}")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def sqrt(self, a: int) -> tuple[int, ...]:
        return sqrt_mod(a, self.p)

    def elements(self) -> range:
        return range(self.p)


@dataclass(frozen=True)
class FpElt:
    """An element of F_p supporting the usual operators."""

    value: int
    p: int

    def __post_init__(self):
        if not 0 <= self.value < self.p:
            object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpElt):
            if other.p != self.p:
                raise ValueError("elements of different fields")
            return other.value
        return other % self.p

    def __add__(self, other):
        return FpElt((self.value + self._coerce(other)) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElt((self.value - self._coerce(other)) % self.p, self.p)

    def __rsub__(self, other):
        return FpElt((self._coerce(other) - self.value) % self.p, self.p)

    def __mul__(self, other):
        return FpElt(self.value * self._coerce(other) % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElt(-self.value % self.p, self.p)

    def inverse(self) -> FpElt:
        if self.value == 0:
            raise DivisionByZero(f"0 has no inverse mod {self.p}")
        return FpElt(pow(self.value, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        return self * FpElt(self._coerce(other), self.p).inverse()

    def __rtruediv__(self, other):
        return FpElt(self._coerce(other), self.p) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElt(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FpElt):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def sqrt(self) -> tuple[FpElt, ...]:
        return tuple(FpElt(r, self.p) for r in sqrt_mod(self.value, self.p))

    def __repr__(self):
        return f"{self.value} (mod {self.p})"
