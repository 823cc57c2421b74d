"""Random Euler-product model: independent uniform phases theta_p replacing p^{-i gamma}.

Re P(theta) = sum_p (nu_p / sqrt p) cos(2 pi (theta_p + beta_p)) is a sum of
independent terms, so moments and characteristic functions factor over primes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import comb, jv

from .arith import _sieve
from .characters import DirichletCharacter, is_primitive

MAX_EXACT_K = 8
ELL_CAP = 40
NU_ZERO = 1e-12


@dataclass(frozen=True)
class NuBeta:
    p: int
    nu: float
    beta: float


@dataclass(frozen=True)
class ModelConfig:
    """Coefficients a_j, distinct primitive nonprincipal characters chi_j, cutoff X, seed.

    The model runs over primes p <= X^2.
    """

    coeffs: tuple[float, ...]
    chis: tuple[DirichletCharacter, ...]
    X: float
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        object.__setattr__(self, "chis", tuple(self.chis))
        if len(self.coeffs) == 0 or len(self.coeffs) != len(self.chis):
            raise ValueError("need N >= 1 coefficients and as many characters")
        if any(a == 0 for a in self.coeffs):
            raise ValueError("coefficients must be nonzero")
        if len(set(self.chis)) != len(self.chis):
            raise ValueError("characters must be pairwise distinct")
        for c in self.chis:
            if c.is_principal or not is_primitive(c):
                raise ValueError(f"{c.name}: characters must be primitive and nonprincipal")
        if not self.X >= 1:
            raise ValueError("X must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_X2(cls, coeffs, chis, X2: int, seed: int = 0) -> ModelConfig:
        return cls(tuple(coeffs), tuple(chis), math.sqrt(X2), seed)

    @property
    def X2(self) -> int:
        return int(math.floor(self.X * self.X + 1e-9))

    @cached_property
    def table(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(primes, nu_p, beta_p) for all p <= X^2."""
        ps = _sieve(self.X2) if self.X2 >= 2 else np.zeros(0, dtype=np.int64)
        c = np.zeros(ps.size, dtype=complex)
        for a, chi in zip(self.coeffs, self.chis):
            c += a * chi.value_array(ps)
        nu = np.abs(c)
        beta = np.mod(np.angle(c) / (2 * math.pi), 1.0)
        zero = nu < NU_ZERO
        nu[zero] = 0.0
        beta[zero] = 0.0
        beta[beta >= 1.0] = 0.0
        return ps, nu, beta

    @property
    def amplitudes(self) -> np.ndarray:
        """nu_p / sqrt(p)."""
        ps, nu, _ = self.table
        return nu / np.sqrt(ps)

    def describe(self) -> dict:
        return {"coeffs": list(self.coeffs), "chars": [c.name for c in self.chis], "X2": self.X2, "seed": int(self.seed)}


def nu_beta(p: int, config: ModelConfig) -> NuBeta:
    """Polar form nu_p e^{2 pi i beta_p} = sum_j a_j chi_j(p)."""
    if p > config.X2:
        raise ValueError(f"p = {p} exceeds X^2 = {config.X2}")
    ps, nu, beta = config.table
    i = int(np.searchsorted(ps, p))
    if i >= ps.size or ps[i] != p:
        raise ValueError(f"{p} is not prime")
    return NuBeta(int(p), float(nu[i]), float(beta[i]))


def psi_L(config: ModelConfig) -> float:
    """sum_{p <= X^2} nu_p^2 / p."""
    ps, nu, _ = config.table
    return math.fsum((nu**2 / ps).tolist())


# -- counter-based phases ------------------------------------------------------

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)


def _splitmix(x: np.ndarray) -> np.ndarray:
    with np.errstate(over="ignore"):
        z = x + _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))


def phases(seed: int, sample_index, p) -> np.ndarray:
    """theta_p in [0, 1) as a pure function of (seed, sample index, p).

    Broadcasts ``sample_index`` against ``p``.
    """
    i = np.asarray(sample_index, dtype=np.uint64)
    q = np.asarray(p, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = _splitmix(_splitmix(np.uint64(seed) ^ _splitmix(i)) + q)
    return (h >> np.uint64(11)).astype(float) * 2.0**-53


def composite_phase(seed: int, sample_index, n: int) -> np.ndarray:
    """theta_n = sum of theta_p over the prime factors of n with multiplicity (mod 1)."""
    total = 0.0
    m = int(n)
    d = 2
    while d * d <= m:
        while m % d == 0:
            total = total + phases(seed, sample_index, d)
            m //= d
        d += 1
    if m > 1:
        total = total + phases(seed, sample_index, m)
    return np.mod(total, 1.0)


def sample_P_L(config: ModelConfig, n_samples: int, start: int = 0, chunk: int = 2048) -> np.ndarray:
    """P_L(theta) for samples start .. start + n_samples - 1 (complex array)."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    ps, nu, beta = config.table
    keep = nu > 0
    ps, amp, beta = ps[keep], (nu / np.sqrt(config.table[0]))[keep], beta[keep]
    out = np.zeros(n_samples, dtype=complex)
    if ps.size == 0:
        return out
    for i in range(0, n_samples, chunk):
        idx = np.arange(start + i, start + min(i + chunk, n_samples), dtype=np.uint64)
        th = phases(config.seed, idx[:, None], ps[None, :])
        out[i : i + idx.size] = np.exp(2j * math.pi * (th + beta)) @ amp
    return out


# -- exact moments ------------------------------------------------------------

def _single_moments(r: np.ndarray, k: int) -> np.ndarray:
    """E[(r cos phi)^j], j = 0..k, phi uniform; shape (len(r), k+1)."""
    j = np.arange(k + 1)
    c = np.where(j % 2 == 0, comb(j, j // 2) / 2.0**j, 0.0)
    return c[None, :] * r[:, None] ** j[None, :]


def _binom_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Moments of X + Y from moments of independent X, Y."""
    k = a.size - 1
    out = np.zeros(k + 1)
    for n in range(k + 1):
        j = np.arange(n + 1)
        out[n] = np.sum(comb(n, j) * a[j] * b[n - j])
    return out


def _total_moments(r: np.ndarray, k: int) -> np.ndarray:
    m = np.zeros(k + 1)
    m[0] = 1.0
    for row in _single_moments(r, k):
        m = _binom_conv(m, row)
    return m


def exact_moment(k: int, config: ModelConfig) -> float:
    """int (Re P_L(theta))^k d theta, exactly (k <= 8).

    Raises:
        ValueError: for k > 8; use :func:`mc_moment` instead.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > MAX_EXACT_K:
        raise ValueError(f"exact moments are limited to k <= {MAX_EXACT_K}; use Monte Carlo for k = {k}")
    if k % 2:
        return 0.0
    if k == 2:
        return 0.5 * psi_L(config)
    return float(_total_moments(config.amplitudes, k)[k])


def ell_integrals(k: int, config: ModelConfig, ell_max: int | None = None) -> np.ndarray:
    """int (Re P_L)^k Re(e^{2 pi i l theta_q}) d theta for each prime q and l = 1..ell_max.

    Returns an array of shape (#primes, ell_max).
    """
    if k > MAX_EXACT_K:
        raise ValueError(f"k <= {MAX_EXACT_K} required")
    ell_max = k if ell_max is None else ell_max
    ps, nu, beta = config.table
    r = config.amplitudes
    n = ps.size
    single = _single_moments(r, k)
    prefix = np.zeros((n + 1, k + 1))
    prefix[0, 0] = 1.0
    for i in range(n):
        prefix[i + 1] = _binom_conv(prefix[i], single[i])
    suffix = np.zeros((n + 1, k + 1))
    suffix[n, 0] = 1.0
    for i in range(n - 1, -1, -1):
        suffix[i] = _binom_conv(suffix[i + 1], single[i])
    out = np.zeros((n, ell_max))
    for i in range(n):
        rest = _binom_conv(prefix[i], suffix[i + 1])
        for ell in range(1, ell_max + 1):
            acc = 0.0
            for j in range(ell, k + 1, 2):
                # E[(r cos phi)^j cos(l phi)] = r^j 2^-j C(j, (j - l)/2)
                acc += comb(k, j) * rest[k - j] * r[i] ** j * comb(j, (j - ell) // 2) / 2.0**j
            out[i, ell - 1] = acc * math.cos(2 * math.pi * ell * beta[i])
    return out


def moment_main_terms(k: int, config: ModelConfig, N_T: float, T: float) -> tuple[float, float]:
    """(N(T) int (Re P)^k, -(T/pi) sum_q sum_{l<=k} log q / q^{l/2} int (Re P)^k Re e(l theta_q))."""
    main1 = N_T * exact_moment(k, config)
    if k == 0:
        return main1, 0.0
    ps = config.table[0].astype(float)
    I = ell_integrals(k, config)
    ell = np.arange(1, k + 1)
    w = np.log(ps)[:, None] / ps[:, None] ** (ell[None, :] / 2)
    main2 = -(T / math.pi) * float(np.sum(w * I))
    return main1, main2


# -- Bessel functions and characteristic functions -------------------------------

def bessel_J(ell: int, z):
    """Bessel function of the first kind J_ell(z) for integer ell >= 0."""
    if ell < 0 or int(ell) != ell:
        raise ValueError("ell must be a nonnegative integer")
    return jv(int(ell), z)


def char_fn_model(omega, config: ModelConfig):
    """E[exp(i omega Re P_L(theta))] = prod_p J_0(omega nu_p / sqrt p)."""
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    r = config.amplitudes
    out = np.prod(jv(0, np.outer(np.abs(w), r)), axis=1) if r.size else np.ones(w.size)
    return float(out[0]) if np.ndim(omega) == 0 else out


def secondary_term(omega: float, config: ModelConfig, T: float, K: int) -> complex:
    """-(T/pi) sum_q sum_{1<=l<=K} (log q / q^{l/2}) int e^{i omega Re P} Re(e^{2 pi i l theta_q}) d theta.

    The inner integral equals i^l cos(2 pi l beta_q) J_l(omega nu_q / sqrt q)
    prod_{p != q} J_0(omega nu_p / sqrt p); ``K`` is capped at 40.
    """
    if omega < 0 or K < 1:
        raise ValueError("need omega >= 0 and K >= 1")
    ps, nu, beta = config.table
    if ps.size == 0 or omega == 0:
        return 0j
    r = omega * config.amplitudes
    j0 = jv(0, r)
    pre = np.concatenate(([1.0], np.cumprod(j0)[:-1]))
    suf = np.concatenate((np.cumprod(j0[::-1])[::-1][1:], [1.0]))
    others = pre * suf
    L = min(int(K), ELL_CAP)
    ell = np.arange(1, L + 1)
    pf = ps.astype(float)
    jl = jv(ell[None, :], r[:, None])
    weight = np.log(pf)[:, None] / pf[:, None] ** (ell[None, :] / 2)
    inner = (1j ** ell)[None, :] * np.cos(2 * math.pi * ell[None, :] * beta[:, None]) * jl * others[:, None]
    return complex(-(T / math.pi) * np.sum(weight * inner))


def secondary_term_bound(omega: float, config: ModelConfig, T: float, K: int) -> float:
    """(T/pi) sum_q sum_l (log q / q^{l/2}) |J_l(omega nu_q / sqrt q)|."""
    ps, nu, _ = config.table
    if ps.size == 0:
        return 0.0
    L = min(int(K), ELL_CAP)
    ell = np.arange(1, L + 1)
    pf = ps.astype(float)
    jl = np.abs(jv(ell[None, :], omega * config.amplitudes[:, None]))
    return float((T / math.pi) * np.sum(np.log(pf)[:, None] / pf[:, None] ** (ell[None, :] / 2) * jl))


# -- Monte Carlo ---------------------------------------------------------------

def _mean_se(x: np.ndarray) -> tuple[float, float]:
    n = x.size
    return float(np.mean(x)), float(np.std(x, ddof=1) / math.sqrt(n)) if n > 1 else 0.0


def mc_moment(k: int, config: ModelConfig, n_samples: int) -> tuple[float, float]:
    """Monte Carlo mean of (Re P_L)^k with its standard error."""
    x = sample_P_L(config, n_samples).real
    return _mean_se(x**k)


def mc_char_fn(omega: float, config: ModelConfig, n_samples: int, diagnostics: dict | None = None):
    """(mean of cos(omega Re P_L), standard error); imaginary mean goes to ``diagnostics``."""
    if n_samples < 1000:
        raise ValueError("n_samples must be >= 1000")
    x = sample_P_L(config, n_samples).real
    c = np.cos(omega * x)
    if diagnostics is not None:
        diagnostics["imag_mean"], diagnostics["imag_se"] = _mean_se(np.sin(omega * x))
    return _mean_se(c)


def model_report(
    config: ModelConfig,
    ks=(0, 1, 2, 3, 4),
    omegas=(0.5, 1.0, 2.0, 4.0),
    n_samples: int = 100_000,
    T: float | None = None,
    K: int = 40,
) -> dict:
    """Exact versus Monte Carlo moments and characteristic functions."""
    x = sample_P_L(config, n_samples).real
    moments = []
    for k in ks:
        entry = {"k": k}
        mc, se = _mean_se(x**k)
        entry["mc"], entry["mc_se"] = mc, se
        if k <= MAX_EXACT_K:
            entry["exact"] = exact_moment(k, config)
        else:
            entry["exact"] = None
            entry["note"] = f"exact moments refused for k > {MAX_EXACT_K}"
        moments.append(entry)
    cf = []
    for w in omegas:
        mc, se = _mean_se(np.cos(w * x))
        cf.append({"omega": w, "exact": char_fn_model(w, config), "mc": mc, "mc_se": se,
                   "imag_mc": float(np.mean(np.sin(w * x)))})
    rep = {"config": config.describe(), "psi_L": psi_L(config), "moments": moments, "char_fn": cf,
           "mc": {"n_samples": n_samples}}
    if T is not None:
        rep["secondary_term"] = [
            {"omega": w, "re": (v := secondary_term(w, config, T, K)).real, "im": v.imag} for w in omegas
        ]
    return rep
