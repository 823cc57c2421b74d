"""Prime tables, von Mangoldt function, Selberg weights and prime-reciprocal sums."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class PrimeTable:
    """All primes up to ``limit``, ascending.

    Attributes:
        limit: Inclusive upper bound used for the sieve.
        primes: int64 array of primes <= limit.
    """

    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes.tolist())

    def upto(self, y: float) -> np.ndarray:
        """Primes <= y (y may be smaller than ``limit``)."""
        return self.primes[: np.searchsorted(self.primes, math.floor(y), side="right")]


@lru_cache(maxsize=16)
def _sieve(limit: int) -> np.ndarray:
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if is_p[i]:
            is_p[i * i :: i] = False
    out = np.flatnonzero(is_p).astype(np.int64)
    out.flags.writeable = False
    return out


def primes_up_to(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes.

    Raises:
        ValueError: if ``limit < 2`` (the table would be empty).
    """
    limit = int(limit)
    if limit < 2:
        raise ValueError(f"empty prime table: limit={limit} < 2")
    return PrimeTable(limit, _sieve(limit))


def smallest_prime_factor(limit: int) -> np.ndarray:
    """spf[n] for 0 <= n <= limit (spf[0] = spf[1] = 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in _sieve(max(limit, 2)).tolist():
        if p * p > limit:
            break
        block = spf[p * p :: p]
        block[block == 0] = p
    idx = np.arange(limit + 1, dtype=np.int64)
    mask = (spf == 0) & (idx >= 2)
    spf[mask] = idx[mask]
    return spf


def _prime_power_base(n: int) -> int:
    """Return p if n = p^k (k >= 1), else 0."""
    if n < 2:
        return 0
    if n % 2 == 0:
        p = 2
    else:
        p = 0
        for d in range(3, math.isqrt(n) + 1, 2):
            if n % d == 0:
                p = d
                break
        if p == 0:
            return n
    while n % p == 0:
        n //= p
    return p if n == 1 else 0


def von_mangoldt(n: int) -> float:
    """log p if n is a power of the prime p, else 0."""
    if n <= 0:
        raise ValueError(f"von Mangoldt is defined for n >= 1, got {n}")
    p = _prime_power_base(int(n))
    return math.log(p) if p else 0.0


def _check_x(X: float) -> None:
    if not X >= 4:
        raise ValueError(f"Selberg cutoff requires X >= 4, got {X}")


def weight_w(X: float, n: float) -> float:
    """Selberg taper: 1 on [1, X], log(X^2/n)/log X on (X, X^2], 0 beyond.

    Evaluated in log space so X may be huge.
    """
    _check_x(X)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    lx = math.log(X)
    ln = math.log(n)
    if ln <= lx:
        return 1.0
    if ln >= 2.0 * lx:
        return 0.0
    return (2.0 * lx - ln) / lx


def weight_w_array(X: float, n: np.ndarray) -> np.ndarray:
    """Vectorised :func:`weight_w`."""
    _check_x(X)
    lx = math.log(X)
    ln = np.log(np.asarray(n, dtype=float))
    return np.clip((2.0 * lx - ln) / lx, 0.0, 1.0)


def lambda_X(X: float, n: int) -> float:
    """Weighted von Mangoldt coefficient Λ(n)·w_X(n)."""
    return von_mangoldt(n) * weight_w(X, n)


def prime_powers_up_to(limit: int) -> tuple[np.ndarray, np.ndarray]:
    """All prime powers n <= limit and their base primes, sorted by n."""
    ns: list[int] = []
    ps: list[int] = []
    if limit >= 2:
        for p in _sieve(int(limit)).tolist():
            q = p
            while q <= limit:
                ns.append(q)
                ps.append(p)
                q *= p
    order = np.argsort(ns, kind="stable")
    return np.asarray(ns, dtype=np.int64)[order], np.asarray(ps, dtype=np.int64)[order]


def psi(Y: float) -> float:
    """Sum of 1/p over primes p <= Y.

    Returns 0 (with a warning) when Y < 2.
    """
    if Y < 2:
        warnings.warn(f"psi({Y}) has no primes in range; returning 0", stacklevel=2)
        return 0.0
    ps = _sieve(int(math.floor(Y)))
    return math.fsum((1.0 / ps).tolist())
