"""Euler-Maclaurin engine for Dirichlet series of periodic coefficients.

For a character-like coefficient table c(n) of period m, the series
sum_n c(n) n^{-s} is split as a head over n <= K m, computed exactly, plus
one Euler-Maclaurin tail per residue class a: m^{-s} sum_{k>=K} (k + a/m)^{-s}.

The head is the expensive part.  Since n^{-s} is completely multiplicative,
it is built from prime values with one complex multiply per n
(u[n] = u[spf(n)] u[n / spf(n)]), so only the primes need a cos/sin.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numba
import numpy as np

from .arith import smallest_prime_factor

#: number of Bernoulli correction terms
N_BERNOULLI = 24
#: target ratio (|s| + 2p) / (2 pi y); the first omitted term is ~ 2 RATIO^(2p+1)
RATIO = 0.45
_BLOCK = 512


@lru_cache(maxsize=1)
def _bernoulli_factorial(nmax: int = 60) -> np.ndarray:
    """B_{2j} / (2j)! for j = 0..nmax, via the Akiyama-Tanigawa recurrence."""
    N = 2 * nmax
    a = [Fraction(0)] * (N + 1)
    B = []
    for n in range(N + 1):
        a[n] = Fraction(1, n + 1)
        for j in range(n, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        B.append(a[0])
    return np.array([float(B[2 * j] / math.factorial(2 * j)) for j in range(nmax + 1)])


def cutoff(abs_s, p: int = N_BERNOULLI) -> np.ndarray:
    """Smallest shift K so that y = K + a/m keeps the omitted term below ~1e-16."""
    k = np.ceil((np.asarray(abs_s, dtype=float) + 2 * p) / (2 * math.pi * RATIO))
    return np.maximum(k, 8).astype(np.int64)


class _Tables:
    """Growable spf / log tables shared by all evaluations."""

    def __init__(self) -> None:
        self.n = 0
        self.spf = np.zeros(1, dtype=np.int64)
        self.logn = np.zeros(1)

    def ensure(self, n: int) -> None:
        if n <= self.n:
            return
        n = max(n, int(self.n * 1.5), 1024)
        self.spf = smallest_prime_factor(n)
        self.logn = np.log(np.maximum(np.arange(n + 1, dtype=float), 1.0))
        self.n = n


_TABLES = _Tables()


@numba.njit(cache=True)
def _heads_kernel(ts, sigma, logn, spf, chi_tab, periods, limits):
    n_t = ts.shape[0]
    n_c = chi_tab.shape[0]
    out = np.zeros((n_t, n_c), dtype=np.complex128)
    nmax_all = 1
    for i in range(n_t):
        for c in range(n_c):
            if limits[i, c] > nmax_all:
                nmax_all = limits[i, c]
    u = np.empty(nmax_all + 1, dtype=np.complex128)
    for i in range(n_t):
        t = ts[i]
        nmax = 1
        for c in range(n_c):
            if limits[i, c] > nmax:
                nmax = limits[i, c]
        u[1] = 1.0
        for n in range(2, nmax + 1):
            p = spf[n]
            if p == n:
                r = math.exp(-sigma * logn[n])
                ph = t * logn[n]
                u[n] = complex(r * math.cos(ph), -r * math.sin(ph))
            else:
                u[n] = u[p] * u[n // p]
        for c in range(n_c):
            m = periods[c]
            total = 0j
            block = 0j
            cnt = 0
            for n in range(1, limits[i, c] + 1):
                block += chi_tab[c, n % m] * u[n]
                cnt += 1
                if cnt == 512:
                    total += block
                    block = 0j
                    cnt = 0
            out[i, c] = total + block
    return out


def _expm1_over(z: np.ndarray) -> np.ndarray:
    """(e^z - 1) / z, stable near 0."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    small = np.abs(z) < 1e-3
    zs = z[small]
    out[small] = 1 + zs / 2 * (1 + zs / 3 * (1 + zs / 4 * (1 + zs / 5)))
    zb = z[~small]
    out[~small] = np.expm1(zb.real) * np.exp(1j * zb.imag) / zb + (np.exp(1j * zb.imag) - 1) / zb
    return out


def em_tail(s, m: int, residues, weights, K, p: int = N_BERNOULLI, balanced: bool = False):
    """sum_a w_a m^{-s} sum_{k >= K} (k + a/m)^{-s} for arrays s, K.

    With ``balanced`` (sum of weights is 0) the pole of the integral term
    cancels and the s -> 1 limit is taken analytically.
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    K = np.broadcast_to(np.asarray(K, dtype=float), s.shape)
    a = np.asarray(residues, dtype=float)
    w = np.asarray(weights, dtype=complex)
    y = K[:, None] + a[None, :] / m
    logy = np.log(y)
    sc = s[:, None]
    ypow = np.exp(-sc * logy)  # y^{-s}
    if balanced:
        # (y^{1-s} - 1)/(s - 1) = -log y * (e^z - 1)/z with z = (1 - s) log y
        z = (1 - sc) * logy
        integral = -logy * _expm1_over(z)
    else:
        integral = y * ypow / (sc - 1)
    acc = integral + 0.5 * ypow
    bf = _bernoulli_factorial()
    poch = sc.copy()
    yp = ypow / y
    inv_y2 = 1.0 / (y * y)
    corr = np.zeros_like(acc)
    for j in range(1, p + 1):
        corr += bf[j] * poch * yp
        poch = poch * (sc + 2 * j - 1) * (sc + 2 * j)
        yp = yp * inv_y2
    acc = acc + corr
    return np.exp(-s * math.log(m)) * (acc @ w) if m > 1 else acc @ w


def dirichlet_series(s, tables: list[np.ndarray], principal: list[bool] | None = None) -> np.ndarray:
    """Analytically continued sum_n c(n) n^{-s} for periodic coefficient tables.

    Args:
        s: complex array of evaluation points sharing one real part.
        tables: per-series complex arrays c(0..m-1) (period m = len).
        principal: per-series flag; when False the coefficients must sum to
            zero over a period so the pole at s = 1 cancels.

    Returns:
        complex array of shape (len(s), len(tables)).
    """
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    sig = s.real
    if s.size and np.ptp(sig) > 0:
        return np.concatenate(
            [dirichlet_series(s[i : i + 1], tables, principal) for i in range(s.size)], axis=0
        )
    sigma = float(sig[0]) if s.size else 0.5
    if principal is None:
        principal = [abs(complex(np.sum(t))) > 1e-12 for t in tables]
    periods = np.array([len(t) for t in tables], dtype=np.int64)
    K = cutoff(np.abs(s)[:, None] + 0 * periods[None, :])
    limits = K * periods[None, :]
    limits = np.maximum(limits - 0, 1)
    _TABLES.ensure(int(limits.max()))
    chi_tab = np.zeros((len(tables), int(periods.max())), dtype=np.complex128)
    for c, t in enumerate(tables):
        chi_tab[c, : len(t)] = t
    heads = _heads_kernel(s.imag.copy(), sigma, _TABLES.logn, _TABLES.spf, chi_tab, periods, limits)
    out = np.empty_like(heads)
    for c, t in enumerate(tables):
        m = len(t)
        res = np.flatnonzero(np.abs(t) > 0)
        resid = np.where(res == 0, m, res)  # residue 0 is the class a = m
        out[:, c] = heads[:, c] + em_tail(s, m, resid, t[res], K[:, c], balanced=not principal[c])
    return out
