"""Truncated prime sums approximating log|L(1/2 + i gamma, chi)| and their error terms."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .arith import _sieve, prime_powers_up_to, psi, weight_w_array
from .characters import DirichletCharacter
from .lfunc import log_abs_L

CHUNK = 4096


class ParamWarning(UserWarning):
    """Parameters outside the range where the truncation is meaningful."""


def _cut(X: float) -> int:
    """floor(X^2), robust to rounding in X = sqrt(integer)."""
    return int(math.floor(X * X + 1e-9))


@dataclass(frozen=True)
class TruncationParams:
    """Cutoff X (primes up to X^2), sigma1 = 1/2 + 4/log X, and even K.

    Construct with :meth:`make`; X < 4 is allowed only with a warning because
    the literal asymptotic choice of X produces such values.
    """

    X: float
    sigma1: float
    K: int

    @classmethod
    def make(cls, X: float, K: int = 2) -> TruncationParams:
        if not X > 1:
            raise ValueError(f"X must exceed 1, got {X}")
        if X < 4:
            warnings.warn(f"X = {X:.4g} < 4: below the range of the log|L| approximation", ParamWarning, stacklevel=2)
        if K < 2 or K % 2:
            raise ValueError(f"K must be even and >= 2, got {K}")
        return cls(float(X), 0.5 + 4 / math.log(X), int(K))

    @property
    def X2(self) -> int:
        return _cut(self.X)


@dataclass(frozen=True)
class ApproxBreakdown:
    p_sum: float
    r1: float
    r2: float
    r3: float
    r4: float
    e_chi: float
    log_term: float
    total_error_bound: float
    residual: float | None = None


def dirichlet_poly(gammas, logn: np.ndarray, coef: np.ndarray, sigma: float = 0.5) -> np.ndarray:
    """sum_n coef_n n^{-sigma - i gamma} for each gamma (chunked matrix product)."""
    g = np.atleast_1d(np.asarray(gammas, dtype=float))
    w = np.asarray(coef, dtype=complex) * np.exp(-sigma * logn)
    out = np.empty(g.size, dtype=complex)
    for i in range(0, g.size, CHUNK):
        ph = np.outer(g[i : i + CHUNK], logn)
        out[i : i + CHUNK] = np.cos(ph) @ w - 1j * (np.sin(ph) @ w)
    return out


def _prime_data(X2: int):
    ps = _sieve(X2) if X2 >= 2 else np.zeros(0, dtype=np.int64)
    return ps, np.log(ps.astype(float))


def prime_coefficients(coeffs, chis, X2: int) -> tuple[np.ndarray, np.ndarray]:
    """Primes p <= X2 and c_p = sum_j a_j chi_j(p)."""
    ps, _ = _prime_data(X2)
    c = np.zeros(ps.size, dtype=complex)
    for a, chi in zip(coeffs, chis):
        c += a * chi.value_array(ps)
    return ps, c


def p_chi(gamma, chi: DirichletCharacter, X: float):
    """sum_{p <= X^2} chi(p) p^{-1/2 - i gamma}."""
    return p_L(gamma, [1.0], [chi], X)


def p_L(gamma, coeffs, chis, X: float):
    """a_1 P_{chi_1}(gamma) + ... + a_N P_{chi_N}(gamma)."""
    if len(coeffs) != len(chis):
        raise ValueError("coefficient and character lists differ in length")
    if len(chis) == 0:
        raise ValueError("need at least one character")
    ps, c = prime_coefficients(coeffs, chis, _cut(X))
    out = dirichlet_poly(gamma, np.log(ps.astype(float)), c)
    return out[0] if np.ndim(gamma) == 0 else out


def _lambda_x_coeffs(chi, X: float, limit: int):
    ns, bases = prime_powers_up_to(limit)
    lam = np.log(bases.astype(float)) * weight_w_array(X, ns) if ns.size else np.zeros(0)
    return ns, np.log(ns.astype(float)), lam * chi.value_array(ns)


def e_chi(gamma, chi: DirichletCharacter, params: TruncationParams):
    """|sum_{n <= X^2} Lambda_X(n) chi(n) n^{-sigma1 - i gamma}| + log(m |gamma|)."""
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    if np.any(g == 0):
        raise ValueError("e_chi is undefined at gamma = 0")
    ns, logn, c = _lambda_x_coeffs(chi, params.X, params.X2)
    s = np.abs(dirichlet_poly(g, logn, c, params.sigma1)) if ns.size else np.zeros(g.size)
    out = s + np.log(chi.modulus * np.abs(g))
    return float(out[0]) if np.ndim(gamma) == 0 else out


def _r3(gamma: float, chi, X: float, ps: np.ndarray, logp: np.ndarray) -> float:
    if ps.size == 0:
        return 0.0
    lx = math.log(X)
    base = logp * weight_w_array(X, ps) * chi.value_array(ps) * (lx + logp)

    def f(sig):
        v = np.sum(base * np.exp(-(sig + 1j * gamma) * logp))
        return X ** (0.5 - sig) * abs(v)

    val, _ = quad(f, 0.5, 0.5 + 40 / lx, limit=200)
    return val / lx


def error_terms(gamma: float, chi: DirichletCharacter, params: TruncationParams, eta: float) -> ApproxBreakdown:
    """The four error terms of the log|L| approximation at one ordinate."""
    if not eta > 0:
        raise ValueError("eta must be positive (zero of L coincides with gamma)")
    X, X2 = params.X, params.X2
    lx = math.log(X)
    ps, logp = _prime_data(X2)
    chip = chi.value_array(ps)
    w = weight_w_array(X, ps) if ps.size else np.zeros(0)
    p_sum = np.sum(chip * np.exp(-(0.5 + 1j * gamma) * logp))
    r1 = abs(np.sum((1 - w) * chip * np.exp(-(0.5 + 1j * gamma) * logp)))
    small = ps <= X
    psq = ps[small].astype(float) ** 2
    r2 = abs(np.sum(weight_w_array(X, psq) * chi.value_array(ps[small] ** 2) * np.exp(-(1 + 2j * gamma) * logp[small]))) if psq.size else 0.0
    r3 = _r3(gamma, chi, X, ps, logp)
    e = float(e_chi(gamma, chi, params))
    logplus = max(0.0, math.log(1 / (eta * lx)))
    r4 = (1 + logplus) * e / lx
    log_term = math.log(chi.modulus * abs(gamma)) / lx
    return ApproxBreakdown(
        p_sum=float(p_sum.real), r1=float(r1), r2=float(r2), r3=float(r3), r4=float(r4),
        e_chi=e, log_term=log_term, total_error_bound=float(r1 + r2 + r3 + r4 + log_term + 1.0),
    )


def log_L_approx(gamma: float, chi: DirichletCharacter, params: TruncationParams, eta: float):
    """(Re P_chi(gamma), breakdown with the measured residual log|L| - Re P_chi)."""
    b = error_terms(gamma, chi, params, eta)
    resid = log_abs_L(gamma, chi) - b.p_sum
    return b.p_sum, ApproxBreakdown(**{**b.__dict__, "residual": resid})


def choose_params(
    T: float,
    mode: str = "pragmatic",
    X: float = 100.0,
    psi_T: float | None = None,
) -> TruncationParams:
    """Truncation parameters at height T.

    ``paper`` mode takes K = 2 floor(Psi(T)^6) and X = T^{1/(16 Psi(T)^6)}
    literally (X is then barely above 1 at any computable T and a
    ParamWarning is issued). ``pragmatic`` mode uses the given X (default
    100, so primes up to 10^4) with the same K.
    """
    if T < 100:
        raise ValueError("choose_params needs T >= 100")
    P = psi(T) if psi_T is None else float(psi_T)
    K = 2 * math.floor(P**6)
    if mode == "paper":
        Xp = T ** (1 / (16 * P**6))
        return TruncationParams.make(Xp, K)
    if mode == "pragmatic":
        return TruncationParams.make(X, K)
    raise ValueError(f"unknown mode {mode!r}")
