"""Empirical distributions of L-values sampled at zeta zeros."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import stats as sst

from .characters import DirichletCharacter
from .lfunc import L_at_zeros, log_abs_values
from .model import ModelConfig, moment_main_terms
from .selberg import dirichlet_poly, p_L
from .zeta_zeros import ZeroList

log = logging.getLogger(__name__)

MAX_FAILURE_RATE = 0.01
DELTA_GRID = (0.3, 0.1, 0.03, 0.01)


class EvaluatorError(RuntimeError):
    """Too many zeros could not be evaluated."""


@dataclass(frozen=True)
class Sample:
    """Per-zero values of a linear combination, plus excluded ordinates.

    Attributes:
        gammas: ordinates of included zeros (ascending).
        values: value at each included zero.
        T: window top (heights up to T were sampled).
        excluded: ordinates dropped by the evaluator.
        reasons: one reason string per excluded ordinate.
        divisor: standardizing divisor already applied (1.0 if raw).
    """

    gammas: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    T: float
    excluded: np.ndarray = field(default_factory=lambda: np.zeros(0), repr=False)
    reasons: tuple[str, ...] = ()
    divisor: float = 1.0

    def __len__(self) -> int:
        return self.values.size

    @property
    def n_total(self) -> int:
        return self.values.size + self.excluded.size


@dataclass(frozen=True)
class Standardizer:
    divisor: float

    @classmethod
    def for_coeffs(cls, coeffs, T: float) -> Standardizer:
        if T < 16:
            raise ValueError("standardization needs T >= 16 so that log log T > 1")
        s2 = float(np.sum(np.abs(np.asarray(coeffs, dtype=float)) ** 2))
        return cls(math.sqrt(0.5 * s2 * math.log(math.log(T))))


def _check_coeffs(coeffs, chis) -> None:
    if len(coeffs) != len(chis) or not chis:
        raise ValueError("need as many coefficients as characters (N >= 1)")
    if all(a == 0 for a in coeffs):
        raise ValueError("at least one coefficient must be nonzero")


def build_sample(
    zeros: ZeroList,
    coeffs,
    chis: list[DirichletCharacter],
    evaluator: str = "true_L",
    X: float = 100.0,
    L_values: np.ndarray | None = None,
    cache_dir=None,
) -> Sample:
    """Values sum_j a_j log|L(rho, chi_j)| (``true_L``) or Re P_L(gamma) (``selberg_poly``).

    Raises:
        EvaluatorError: if more than 1% of zeros are flagged.
    """
    _check_coeffs(coeffs, chis)
    g = zeros.ordinates
    if g.size == 0:
        raise ValueError("empty zero list")
    a = np.asarray(coeffs, dtype=float)
    if evaluator == "true_L":
        vals = L_at_zeros(g, chis, cache_dir) if L_values is None else L_values
        logs, flagged = log_abs_values(vals)
        bad = flagged.any(axis=1)
        out = np.where(bad, 0.0, np.nan_to_num(logs) @ a)
        reasons = tuple(
            "near-zero |L| for " + ",".join(chis[j].name for j in np.flatnonzero(flagged[i]))
            for i in np.flatnonzero(bad)
        )
    elif evaluator == "selberg_poly":
        out = np.real(p_L(g, a, chis, X))
        bad = ~np.isfinite(out)
        reasons = tuple("non-finite polynomial value" for _ in range(int(bad.sum())))
    else:
        raise ValueError(f"unknown evaluator {evaluator!r}")
    n_bad = int(bad.sum())
    if n_bad > MAX_FAILURE_RATE * g.size:
        raise EvaluatorError(f"{n_bad} of {g.size} zeros failed to evaluate; first at {g[bad][0]}")
    if n_bad:
        log.warning("excluded %d zeros: %s", n_bad, reasons[:3])
    return Sample(g[~bad], out[~bad], float(zeros.T), g[bad], reasons)


def standardize(sample: Sample, coeffs) -> Sample:
    """Divide by sqrt(1/2 (a_1^2 + ... + a_N^2) log log T)."""
    d = Standardizer.for_coeffs(coeffs, sample.T).divisor
    return Sample(sample.gammas, sample.values / d, sample.T, sample.excluded, sample.reasons, d)


def proportion_in_interval(sample: Sample, A: float, B: float) -> float:
    """#{values in [A, B]} / (included + excluded)."""
    if not A < B:
        raise ValueError("need A < B")
    if sample.n_total == 0:
        raise ValueError("empty sample")
    v = sample.values
    return float(np.count_nonzero((v >= A) & (v <= B)) / sample.n_total)


def _values(x) -> np.ndarray:
    return x.values if isinstance(x, Sample) else np.asarray(x, dtype=float)


def ks_normal(sample) -> float:
    """sup |F_n - Phi| for the (already standardized) values."""
    v = _values(sample)
    if v.size < 10:
        raise ValueError("ks_normal needs at least 10 values")
    return float(sst.kstest(v, "norm").statistic)


def moment_at_zeros(zeros: ZeroList, coeffs, chis, X: float, k: int) -> float:
    """(1/N(T)) sum_gamma |Re P_L(gamma)|^k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    g = zeros.ordinates
    if g.size == 0:
        raise ValueError("empty zero list")
    v = np.real(p_L(g, coeffs, chis, X))
    return float(np.mean(np.abs(v) ** k))


class MomentTransfer(NamedTuple):
    lhs: float
    rhs_main1: float
    rhs_main2: float
    gap: float

    @property
    def rel_gap(self) -> float:
        return abs(self.gap) / abs(self.lhs) if self.lhs else math.inf


def moment_transfer_check(zeros: ZeroList, config: ModelConfig, k: int, T: float | None = None) -> MomentTransfer:
    """Compare sum_{gamma<=T} (Re P_L(gamma))^k with its two model main terms."""
    if k > 4:
        raise ValueError("moment transfer is implemented for k <= 4")
    T = zeros.T if T is None else float(T)
    g = zeros.ordinates[zeros.ordinates <= T]
    N = g.size
    if k == 0:
        lhs = float(N)
    else:
        v = np.real(p_L(g, config.coeffs, config.chis, config.X))
        lhs = math.fsum((v**k).tolist())
    m1, m2 = moment_main_terms(k, config, N, T)
    return MomentTransfer(lhs, m1, m2, lhs - (m1 + m2))


def char_fn_empirical(sample, omega) -> complex:
    """Mean of exp(i omega value) over the sample."""
    v = _values(sample)
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    out = np.array([np.mean(np.exp(1j * wi * v)) for wi in w])
    return complex(out[0]) if np.ndim(omega) == 0 else out


@dataclass(frozen=True)
class CovReport:
    matrix: np.ndarray
    n_points: int
    means: np.ndarray | None = None
    labels: tuple[str, ...] = ()


def _log_matrix(zeros: ZeroList, chis, L_values, cache_dir):
    vals = L_at_zeros(zeros.ordinates, chis, cache_dir) if L_values is None else L_values
    logs, flagged = log_abs_values(vals)
    keep = ~flagged.any(axis=1)
    return logs[keep], keep


def covariance_matrix(zeros: ZeroList, chis, L_values=None, cache_dir=None) -> CovReport:
    """Sample covariance of (log|L(rho, chi_j)| / sqrt(1/2 log log T))_j."""
    if len(chis) < 2:
        raise ValueError("covariance needs N >= 2")
    logs, _ = _log_matrix(zeros, chis, L_values, cache_dir)
    s = logs / math.sqrt(0.5 * math.log(math.log(zeros.T)))
    C = np.cov(s, rowvar=False)
    C = 0.5 * (C + C.T)
    return CovReport(C, s.shape[0], s.mean(axis=0), tuple(c.name for c in chis))


@dataclass(frozen=True)
class AValueReport:
    a: complex
    delta_grid: tuple[float, ...]
    windows: tuple[tuple[float, float], ...]
    proportions: np.ndarray  # (n_windows, n_deltas)
    counts: tuple[int, ...]
    dominance: dict
    factorization: dict


def dominance_arrays(logs: np.ndarray, T: float) -> dict:
    """Fractions of the sets A_{i,j}, B_i and the argmax index outside them."""
    n, N = logs.shape
    thr = math.log(math.log(T)) ** 0.25
    in_any = np.zeros(n, dtype=bool)
    A = {}
    for i in range(N):
        for j in range(i + 1, N):
            m = np.abs(logs[:, i] - logs[:, j]) <= thr
            A[f"{i},{j}"] = float(m.mean()) if n else 0.0
            in_any |= m
    B = {}
    for i in range(N):
        m = np.abs(logs[:, i]) <= thr
        B[str(i)] = float(m.mean()) if n else 0.0
        in_any |= m
    outside = ~in_any
    i0 = np.argmax(logs, axis=1)  # ties -> lowest index
    ties = int(np.count_nonzero(np.sum(logs == logs.max(axis=1, keepdims=True), axis=1) > 1))
    if ties:
        log.info("argmax ties broken by lowest index at %d zeros", ties)
    counts = np.bincount(i0[outside], minlength=N)
    return {
        "threshold": thr,
        "A": A,
        "B": B,
        "fraction_outside": float(outside.mean()) if n else 0.0,
        "argmax_counts": counts.tolist(),
        "ties": ties,
        "_i0": i0,
        "_outside": outside,
    }


def dominance_sets(zeros: ZeroList, chis, T: float | None = None, L_values=None, cache_dir=None) -> dict:
    logs, _ = _log_matrix(zeros, chis, L_values, cache_dir)
    rep = dominance_arrays(logs, zeros.T if T is None else T)
    return {k: v for k, v in rep.items() if not k.startswith("_")}


def windows_by_index(zeros: ZeroList, ranges) -> list[tuple[float, float]]:
    """Height windows (t_lo, t_hi] holding zeros with 1-based indices lo..hi."""
    g = zeros.ordinates
    out = []
    for lo, hi in ranges:
        if not 1 <= lo <= hi <= g.size:
            raise ValueError(f"index window {lo}..{hi} outside 1..{g.size}")
        t_lo = 0.0 if lo == 1 else 0.5 * (g[lo - 2] + g[lo - 1])
        out.append((float(t_lo), float(g[hi - 1])))
    return out


def dyadic_windows(T: float, count: int) -> list[tuple[float, float]]:
    """(T/2, T], (T/4, T/2], ... in increasing order."""
    return [(T / 2 ** (i + 1), T / 2**i) for i in range(count)][::-1]


def check_windows(windows) -> None:
    w = sorted(windows)
    for (a, b), (c, d) in zip(w, w[1:]):
        if c < b:
            raise ValueError(f"windows ({a}, {b}] and ({c}, {d}] overlap")
    for a, b in w:
        if not a < b:
            raise ValueError(f"empty window ({a}, {b}]")


def avalue_proportion(
    zeros: ZeroList,
    cs,
    chis,
    a: complex = 0,
    delta_grid=DELTA_GRID,
    windows=None,
    L_values=None,
    cache_dir=None,
) -> AValueReport:
    """Fraction of zeros with |F(rho) - a| <= delta, F = sum_j c_j L(s, chi_j)."""
    cs = np.asarray(cs, dtype=complex)
    if len(cs) != len(chis) or not len(cs):
        raise ValueError("need as many coefficients as characters")
    if np.any(cs == 0):
        raise ValueError("all coefficients c_j must be nonzero")
    if windows is None:
        windows = dyadic_windows(zeros.T, 2)
    check_windows(windows)
    g = zeros.ordinates
    vals = L_at_zeros(g, chis, cache_dir) if L_values is None else L_values
    F = vals @ cs
    dist = np.abs(F - a)
    props = np.zeros((len(windows), len(delta_grid)))
    counts = []
    for i, (lo, hi) in enumerate(windows):
        sel = (g > lo) & (g <= hi)
        n = int(sel.sum())
        counts.append(n)
        for j, d in enumerate(delta_grid):
            props[i, j] = np.count_nonzero(dist[sel] <= d) / n if n else math.nan
    logs, flagged = log_abs_values(vals)
    ok = ~flagged.any(axis=1)
    dom = dominance_arrays(logs[ok], zeros.T)
    i0, outside = dom.pop("_i0"), dom.pop("_outside")
    idx = np.flatnonzero(ok)[outside]
    lead = np.abs(cs[i0[outside]] * vals[idx, i0[outside]])
    ratio = np.abs(F[idx]) / lead - 1
    fact = {"n": int(ratio.size)}
    if ratio.size:
        q = np.quantile(np.abs(ratio), [0.5, 0.9, 0.99])
        fact.update(median_abs=float(q[0]), q90_abs=float(q[1]), q99_abs=float(q[2]),
                    bound_scale=math.exp(-math.log(math.log(zeros.T)) ** 0.25))
    return AValueReport(complex(a), tuple(delta_grid), tuple(map(tuple, windows)), props, tuple(counts), dom, fact)


def prime_poly_moment_ratio(zeros: ZeroList, ps, a_p, k: int) -> float:
    """(1/N) sum_gamma |sum_p a_p p^{-1/2-i gamma}|^{2k} divided by k! (sum |a_p|^2/p)^k."""
    ps = np.asarray(ps, dtype=float)
    a_p = np.asarray(a_p, dtype=complex)
    v = dirichlet_poly(zeros.ordinates, np.log(ps), a_p)
    lhs = float(np.mean(np.abs(v) ** (2 * k)))
    return lhs / (math.factorial(k) * float(np.sum(np.abs(a_p) ** 2 / ps)) ** k)


def histogram_rows(values, bins=50, range_=None) -> list[tuple[float, float, int, float]]:
    """(bin_lo, bin_hi, count, density) rows."""
    v = _values(values)
    counts, edges = np.histogram(v, bins=bins, range=range_)
    width = np.diff(edges)
    dens = counts / (max(v.size, 1) * width)
    return [(float(edges[i]), float(edges[i + 1]), int(counts[i]), float(dens[i])) for i in range(counts.size)]
