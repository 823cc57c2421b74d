"""Cross pair correlation between zeta zeros and zeros of L(s, chi)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lfunc import LZeroList
from .zeta_zeros import CoverageError, ZeroList

PAIR_CUTOFF = 40.0


@dataclass(frozen=True)
class PairCorrResult:
    alpha_grid: np.ndarray
    values: np.ndarray
    T: float
    chi: str
    n_pairs: int


def weight(u):
    """w(u) = 4 / (4 + u^2)."""
    u = np.asarray(u, dtype=float)
    return 4.0 / (4.0 + u * u)


def pair_differences(a: np.ndarray, b: np.ndarray, cutoff: float = PAIR_CUTOFF) -> np.ndarray:
    """All a_i - b_j with |a_i - b_j| <= cutoff (b sorted)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lo = np.searchsorted(b, a - cutoff, side="left")
    hi = np.searchsorted(b, a + cutoff, side="right")
    cnt = hi - lo
    total = int(cnt.sum())
    if total == 0:
        return np.zeros(0)
    ia = np.repeat(np.arange(a.size), cnt)
    start = np.repeat(lo - np.concatenate(([0], np.cumsum(cnt)[:-1])), cnt)
    ib = start + np.arange(total)
    return a[ia] - b[ib]


def _check_cover(T: float, zeros: ZeroList, lzeros: LZeroList, margin: float = 0.0) -> None:
    if T > zeros.T + 1e-12:
        raise CoverageError(f"zeta zeros cover only up to {zeros.T}, T = {T}")
    lo, hi = lzeros.window
    if lo > 0 or T + margin > hi + 1e-12:
        raise CoverageError(f"L-zero window {lzeros.window} does not cover (0, {T + margin}]")


def _signed(zeros: ZeroList, lzeros: LZeroList, lzeros_conj: LZeroList | None, T: float):
    if lzeros_conj is None:
        if not lzeros.chi.is_real:
            raise ValueError("complex character: pass the zeros of the conjugate character too")
        lzeros_conj = lzeros
    else:
        _check_cover(T, zeros, lzeros_conj)
    g = zeros.ordinates[zeros.ordinates <= T]
    h = lzeros.ordinates[lzeros.ordinates <= T]
    hc = lzeros_conj.ordinates[lzeros_conj.ordinates <= T]
    G = np.concatenate((-g[::-1], g))
    H = np.concatenate((-hc[::-1], h))
    return G, H


def f_alpha(
    alpha,
    T: float,
    zeros: ZeroList,
    lzeros: LZeroList,
    lzeros_conj: LZeroList | None = None,
    cutoff: float = PAIR_CUTOFF,
):
    """(pi / (T log T)) Re sum_{-T <= gamma, gamma_chi <= T} T^{i alpha (gamma - gamma_chi)} w(gamma - gamma_chi).

    Negative ordinates are the reflections of the zeta zeros and of the zeros
    of the conjugate character. Pairs further apart than ``cutoff`` are
    dropped (see :func:`truncation_bound`).
    """
    _check_cover(T, zeros, lzeros)
    G, H = _signed(zeros, lzeros, lzeros_conj, T)
    d = pair_differences(G, H, cutoff)
    w = weight(d)
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    lT = math.log(T)
    vals = np.array([np.sum(w * np.cos(ai * lT * d)) for ai in a]) * math.pi / (T * lT)
    return float(vals[0]) if np.ndim(alpha) == 0 else vals


def f_alpha_grid(alphas, T, zeros, lzeros, lzeros_conj=None) -> PairCorrResult:
    a = np.asarray(alphas, dtype=float)
    vals = f_alpha(a, T, zeros, lzeros, lzeros_conj)
    G, H = _signed(zeros, lzeros, lzeros_conj, T)
    return PairCorrResult(a, np.atleast_1d(vals), float(T), lzeros.chi.name, int(pair_differences(G, H).size))


def truncation_bound(T: float, zeros: ZeroList, cutoff: float = PAIR_CUTOFF) -> float:
    """Crude bound on the dropped part of F(alpha, T): both zero densities times the w-tail."""
    n = 2 * np.count_nonzero(zeros.ordinates <= T)
    dens = math.log(max(T, 2 * math.pi * math.e) / (2 * math.pi)) / (2 * math.pi)
    # sum over partners beyond the cutoff of 4/u^2, both sides: 2 * dens * 4 / cutoff
    return math.pi / (T * math.log(T)) * n * 8 * dens / cutoff


def sinc_kernel_sum(delta: float, T: float, zeros: ZeroList, lzeros: LZeroList, cutoff: float = PAIR_CUTOFF) -> dict:
    """sum over 0 < gamma, gamma_chi <= T of (sin x / x)^2, x = delta (gamma - gamma_chi) log T / 2.

    Returns the sum, its ratio to (1/delta) T log T / pi, and the number of
    pairs with |gamma - gamma_chi| <= 1/(delta log T) (for which the kernel is >= 9/10).
    """
    if not delta > 0:
        raise ValueError("delta must be positive")
    _check_cover(T, zeros, lzeros)
    g = zeros.ordinates[zeros.ordinates <= T]
    h = lzeros.ordinates[lzeros.ordinates <= T]
    d = pair_differences(g, h, cutoff)
    lT = math.log(T)
    x = 0.5 * delta * d * lT
    k = np.sinc(x / math.pi) ** 2
    total = float(np.sum(k))
    close = int(np.count_nonzero(np.abs(d) <= 1 / (delta * lT)))
    return {
        "delta": delta,
        "sum": total,
        "ratio": total / (T * lT / (math.pi * delta)),
        "close_pairs": close,
        "chain_holds": 0.9 * close <= total,
    }


def h0_proportion(eps: float, T: float, zeros: ZeroList, lzeros: LZeroList) -> float:
    """Fraction of zeta zeros gamma <= T with a zero of L(s, chi) within eps / log T."""
    if eps < 0:
        raise ValueError("eps must be >= 0")
    r = eps / math.log(T)
    _check_cover(T, zeros, lzeros, margin=r)
    g = zeros.ordinates[zeros.ordinates <= T]
    if g.size == 0:
        raise ValueError("no zeta zeros below T")
    h = lzeros.ordinates
    if h.size == 0:
        return 0.0
    j = np.searchsorted(h, g)
    left = np.abs(g - h[np.clip(j - 1, 0, h.size - 1)])
    right = np.abs(h[np.clip(j, 0, h.size - 1)] - g)
    return float(np.mean(np.minimum(left, right) <= r))
