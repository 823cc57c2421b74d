"""Ordinates of nontrivial zeros of the Riemann zeta function.

Two evaluators of the Hardy function Z(t) = e^{i theta(t)} zeta(1/2 + it):

* Euler-Maclaurin (accurate everywhere, cost ~ t), used for the grid
  scanner at modest heights;
* Riemann-Siegel with four correction terms (cost ~ sqrt(t)), used above
  ``RS_THRESHOLD`` and by :func:`first_zeros` together with Gram blocks.
"""
from __future__ import annotations

import glob
import logging
import math
import os
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numba
import numpy as np
from scipy.special import lambertw, loggamma

from . import _em

log = logging.getLogger(__name__)

RS_THRESHOLD = 1000.0
BISECT_TOL = 1e-9


class ZeroFileError(ValueError):
    """Malformed zero file."""


class CoverageError(ValueError):
    """A query reaches beyond the range a zero list is known to cover."""


class MissedZeroError(RuntimeError):
    """The scanner's count disagrees with the smooth zero-counting estimate."""


@dataclass(frozen=True)
class ZeroList:
    """Sorted positive zero ordinates.

    Attributes:
        ordinates: strictly increasing float array.
        source: ``"file"``, ``"scanned"`` or ``"computed"``.
        precision_hint: claimed absolute accuracy of each ordinate.
        coverage: (t_lo, t_hi); every zero in this window is listed.
    """

    ordinates: np.ndarray = field(repr=False)
    source: str = "file"
    precision_hint: float = 1e-9
    coverage: tuple[float, float] | None = None

    def __post_init__(self):
        g = np.ascontiguousarray(self.ordinates, dtype=float)
        if g.ndim != 1:
            raise ValueError("ordinates must be one-dimensional")
        if g.size and (g[0] <= 0 or np.any(np.diff(g) <= 0)):
            raise ValueError("ordinates must be positive and strictly increasing")
        g.flags.writeable = False
        object.__setattr__(self, "ordinates", g)
        if self.coverage is None:
            object.__setattr__(self, "coverage", (0.0, float(g[-1]) if g.size else 0.0))

    def __len__(self) -> int:
        return self.ordinates.size

    def __getitem__(self, i):
        return self.ordinates[i]

    @property
    def T(self) -> float:
        return self.coverage[1]

    def head(self, n: int) -> ZeroList:
        """The first n zeros (coverage shrinks to the n-th ordinate)."""
        if n > len(self):
            raise CoverageError(f"only {len(self)} zeros available, {n} requested")
        g = self.ordinates[:n]
        return ZeroList(g, self.source, self.precision_hint, (self.coverage[0], float(g[-1])))

    def window(self, t_lo: float, t_hi: float) -> ZeroList:
        if t_lo < self.coverage[0] or t_hi > self.coverage[1]:
            raise CoverageError(f"window ({t_lo}, {t_hi}] outside coverage {self.coverage}")
        g = self.ordinates
        sel = g[(g > t_lo) & (g <= t_hi)]
        return ZeroList(sel, self.source, self.precision_hint, (t_lo, t_hi))


# -- files -------------------------------------------------------------------

def load_zeros(path) -> ZeroList:
    """Read one ordinate per line; ``#`` lines are comments.

    A ``# source=..., precision=...`` header (as written by :func:`save_zeros`)
    is honoured.
    """
    source, precision = "file", 1e-9
    vals: list[float] = []
    prev = -math.inf
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                for part in s[1:].split(","):
                    k, _, v = part.strip().partition("=")
                    if k == "source" and v:
                        source = v
                    elif k == "precision" and v:
                        precision = float(v)
                continue
            try:
                x = float(s)
            except ValueError:
                raise ZeroFileError(f"{path}:{lineno}: not a number: {s!r}") from None
            if not math.isfinite(x) or x <= 0:
                raise ZeroFileError(f"{path}:{lineno}: ordinate must be positive, got {s!r}")
            if x <= prev:
                raise ZeroFileError(f"{path}:{lineno}: ordinates not strictly increasing")
            prev = x
            vals.append(x)
    if not vals:
        warnings.warn(f"{path}: no zero ordinates found", stacklevel=2)
    return ZeroList(np.array(vals), source, precision)


def format_zeros(zeros: ZeroList) -> str:
    lines = [f"# source={zeros.source}, precision={zeros.precision_hint:.1e}"]
    lines += [f"{x:.12f}" for x in zeros.ordinates.tolist()]
    return "\n".join(lines) + "\n"


def save_zeros(zeros: ZeroList, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(format_zeros(zeros))
    os.replace(tmp, path)
    return path


# -- counting ----------------------------------------------------------------

def count_N(T: float, zeros: ZeroList) -> int:
    """Number of listed ordinates in (0, T]."""
    if T > zeros.coverage[1] + 1e-12:
        raise CoverageError(f"T={T} exceeds zero-list coverage {zeros.coverage[1]}")
    return int(np.searchsorted(zeros.ordinates, T, side="right"))


def rvm_estimate(T: float) -> float:
    """Riemann-von Mangoldt main term (T/2pi) log(T/(2 pi e)) + 7/8."""
    if T < 2:
        raise ValueError("rvm_estimate needs T >= 2")
    x = T / (2 * math.pi)
    return x * (math.log(x) - 1.0) + 0.875


def smooth_count(T) -> np.ndarray:
    """theta(T)/pi + 1, clipped at 0 below the first zero's neighbourhood."""
    T = np.asarray(T, dtype=float)
    out = theta(np.maximum(T, 10.0)) / math.pi + 1
    return np.where(T < 10, 0.0, np.maximum(out, 0.0))


# -- Hardy function ------------------------------------------------------------

def theta(t) -> np.ndarray:
    """Riemann-Siegel theta function."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    big = np.abs(t) > 50
    tb = t[big]
    out[big] = (
        tb / 2 * np.log(tb / (2 * math.pi)) - tb / 2 - math.pi / 8
        + 1 / (48 * tb) + 7 / (5760 * tb**3) + 31 / (80640 * tb**5)
    )
    ts = t[~big]
    out[~big] = loggamma(0.25 + 0.5j * ts).imag - ts / 2 * math.log(math.pi)
    return out


def hardy_z_em(t) -> np.ndarray:
    """Z(t) via Euler-Maclaurin evaluation of zeta(1/2 + it)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    z = _em.dirichlet_series(0.5 + 1j * t, [np.array([1.0 + 0j])], [True])[:, 0]
    return (np.exp(1j * theta(t)) * z).real


@lru_cache(maxsize=1)
def _psi_taylor(n_terms: int = 70) -> np.ndarray:
    """Taylor coefficients in u = p - 1/2 of cos(2pi(p^2-p-1/16))/cos(2pi p)."""
    import mpmath

    with mpmath.workdps(60):
        N = n_terms + 2
        pi = mpmath.pi
        num = [mpmath.mpf(0)] * N
        den = [mpmath.mpf(0)] * N
        c, s = mpmath.cos(5 * pi / 8), mpmath.sin(5 * pi / 8)
        # -cos(2pi u^2 - 5pi/8) = -(c cos(2pi u^2) + s sin(2pi u^2))
        for k in range(N):
            if 2 * k < N:
                term = (2 * pi) ** k / mpmath.factorial(k)
                if k % 2 == 0:
                    num[2 * k] -= c * term * (-1) ** (k // 2)
                else:
                    num[2 * k] -= s * term * (-1) ** (k // 2)
            if k % 2 == 0:
                den[k] = (-1) ** (k // 2) * (2 * pi) ** k / mpmath.factorial(k)
        q = [mpmath.mpf(0)] * N
        for k in range(N):
            q[k] = (num[k] - sum(den[j] * q[k - j] for j in range(1, k + 1))) / den[0]
        return np.array([float(x) for x in q[:n_terms]])


def _psi_derivs(u: np.ndarray, orders) -> dict[int, np.ndarray]:
    c = _psi_taylor()
    n = len(c)
    out = {}
    for k in orders:
        coef = np.array([c[j] * math.perm(j, k) for j in range(k, n)])
        out[k] = np.polynomial.polynomial.polyval(u, coef)
    return out


@numba.njit(cache=True)
def _rs_main(ts, th):
    out = np.empty(ts.shape[0])
    for i in range(ts.shape[0]):
        t = ts[i]
        N = int(math.sqrt(t / (2 * math.pi)))
        acc = 0.0
        for n in range(1, N + 1):
            acc += math.cos(th[i] - t * math.log(n)) / math.sqrt(n)
        out[i] = 2 * acc
    return out


def hardy_z_rs(t) -> np.ndarray:
    """Z(t) via the Riemann-Siegel formula with corrections C0..C4."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    tau = np.sqrt(t / (2 * math.pi))
    N = np.floor(tau)
    p = tau - N
    d = _psi_derivs(p - 0.5, range(13))
    pi2 = math.pi**2
    C0 = d[0]
    C1 = -d[3] / (96 * pi2)
    C2 = d[2] / (64 * pi2) + d[6] / (18432 * pi2**2)
    C3 = -d[1] / (64 * pi2) - d[5] / (3840 * pi2**2) - d[9] / (5308416 * pi2**3)
    C4 = (
        d[0] / (128 * pi2) + 19 * d[4] / (24576 * pi2**2)
        + 11 * d[8] / (5898240 * pi2**3) + d[12] / (2038431744 * pi2**4)
    )
    a = 1 / tau
    rem = C0 + a * (C1 + a * (C2 + a * (C3 + a * C4)))
    sign = np.where(N % 2 == 1, 1.0, -1.0)  # (-1)^(N-1)
    return _rs_main(t, theta(t)) + sign * rem / np.sqrt(tau)


def hardy_z(t, method: str = "auto") -> np.ndarray:
    """Hardy Z function (real on the real line, sign changes at zeros)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if method == "em":
        return hardy_z_em(t)
    if method == "rs":
        return hardy_z_rs(t)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    out = np.empty_like(t)
    hi = t >= RS_THRESHOLD
    if hi.any():
        out[hi] = hardy_z_rs(t[hi])
    if (~hi).any():
        out[~hi] = hardy_z_em(t[~hi])
    return out


# -- root refinement -----------------------------------------------------------

def refine_roots(f, lo, hi, tol: float = BISECT_TOL, max_iter: int = 100) -> np.ndarray:
    """Vectorised Illinois iteration on brackets with f(lo) f(hi) < 0."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo, fhi = f(lo), f(hi)
    if np.any(np.sign(flo) * np.sign(fhi) > 0):
        raise ValueError("refine_roots: some brackets do not straddle a sign change")
    active = np.abs(hi - lo) > tol
    side = np.zeros(lo.shape, dtype=np.int8)
    for _ in range(max_iter):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        a, b, fa, fb = lo[idx], hi[idx], flo[idx], fhi[idx]
        denom = fb - fa
        x = np.where(denom != 0, b - fb * (b - a) / np.where(denom != 0, denom, 1), 0.5 * (a + b))
        # keep strictly inside; fall back to bisection when secant stalls at an end
        bad = ~((x > a) & (x < b))
        x[bad] = 0.5 * (a[bad] + b[bad])
        fx = f(x)
        left = np.sign(fx) == np.sign(fa)
        # root in [x, b]
        lo[idx[left]] = x[left]
        flo[idx[left]] = fx[left]
        fhi[idx[left]] *= np.where(side[idx[left]] == 1, 0.5, 1.0)
        side[idx[left]] = 1
        r = ~left
        hi[idx[r]] = x[r]
        fhi[idx[r]] = fx[r]
        flo[idx[r]] *= np.where(side[idx[r]] == -1, 0.5, 1.0)
        side[idx[r]] = -1
        exact = fx == 0
        lo[idx[exact]] = hi[idx[exact]] = x[exact]
        active[idx] = (hi[idx] - lo[idx]) > tol
    return 0.5 * (lo + hi)


def _sign_change_roots(ts: np.ndarray, zs: np.ndarray, f, tol: float) -> np.ndarray:
    s = np.sign(zs)
    k = np.flatnonzero(s[:-1] * s[1:] < 0)
    if k.size == 0:
        return np.empty(0)
    return refine_roots(f, ts[k], ts[k + 1], tol)


def scan_zeros(
    t_lo: float,
    t_hi: float,
    grid_step: float = 0.02,
    tol: float = BISECT_TOL,
    method: str = "auto",
    check: bool = True,
) -> ZeroList:
    """Zeros in (t_lo, t_hi] from sign changes of Z on a uniform grid.

    Raises:
        MissedZeroError: if the count is off the smooth estimate by more than 2.
    """
    if not 0 <= t_lo < t_hi:
        raise ValueError("need 0 <= t_lo < t_hi")
    n = int(math.ceil((t_hi - t_lo) / grid_step))
    ts = np.linspace(t_lo, t_hi, n + 1)

    def f(x):
        return hardy_z(x, method)

    roots = _sign_change_roots(ts, f(ts), f, tol)
    roots = roots[(roots > t_lo) & (roots <= t_hi)]
    if check:
        expected = float(smooth_count(t_hi) - smooth_count(t_lo))
        if abs(roots.size - expected) > 2:
            raise MissedZeroError(
                f"found {roots.size} zeros in ({t_lo}, {t_hi}], smooth estimate {expected:.2f}; "
                "use a finer grid"
            )
    return ZeroList(roots, "scanned", tol, (float(t_lo), float(t_hi)))


# -- first n zeros via Gram blocks ----------------------------------------------

def gram_points(n_lo: int, n_hi: int) -> np.ndarray:
    """g_n for n_lo <= n <= n_hi, solving theta(g_n) = n pi."""
    n = np.arange(n_lo, n_hi + 1, dtype=float)
    g = 2 * math.pi * np.exp(1 + lambertw((8 * n + 1) / (8 * math.e)).real)
    for _ in range(8):
        g = g - (theta(g) - n * math.pi) / (0.5 * np.log(g / (2 * math.pi)))
    return g


def _block_zeros(a: float, b: float, inner: np.ndarray, need: int, f, max_depth: int = 12):
    """Bracketing intervals for ``need`` sign changes of f on [a, b]."""
    pts = np.concatenate(([a], inner, [b]))
    vals = f(pts)
    for _ in range(max_depth):
        s = np.sign(vals)
        k = np.flatnonzero(s[:-1] * s[1:] < 0)
        if k.size >= need:
            return pts[k], pts[k + 1]
        mid = 0.5 * (pts[:-1] + pts[1:])
        mv = f(mid)
        new_p = np.empty(pts.size + mid.size)
        new_v = np.empty_like(new_p)
        new_p[0::2], new_p[1::2] = pts, mid
        new_v[0::2], new_v[1::2] = vals, mv
        pts, vals = new_p, new_v
    raise MissedZeroError(f"Gram block [{a}, {b}] should hold {need} zeros; found fewer")


def compute_first_zeros(n: int, tol: float = 1e-10) -> ZeroList:
    """The first n zeros, located block by block between good Gram points.

    Each Gram block between consecutive good Gram points g_a, g_b is required
    to contain b - a zeros (Rosser's rule, which holds far beyond the range
    used here), so the resulting list is complete, not merely plausible.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    margin = 50 + n // 100
    g = gram_points(-1, n + margin)
    idx = np.arange(-1, n + margin + 1)
    zg = hardy_z(g)
    good = np.flatnonzero(np.where(idx % 2 == 0, 1, -1) * zg > 0)
    lo_all, hi_all = [], []
    # zeros below g_{-1}: none (the first zero is above 14 > g_{-1})
    for a, b in zip(good[:-1], good[1:]):
        need = int(b - a)
        if need == 1:
            lo_all.append(np.array([g[a]]))
            hi_all.append(np.array([g[b]]))
            continue
        lo, hi = _block_zeros(g[a], g[b], g[a + 1 : b], need, hardy_z)
        if lo.size != need:
            raise MissedZeroError(f"Gram block {a - 1}..{b - 1}: {lo.size} sign changes, expected {need}")
        lo_all.append(lo)
        hi_all.append(hi)
    lo = np.concatenate(lo_all)
    hi = np.concatenate(hi_all)
    if lo.size < n:
        raise MissedZeroError(f"located {lo.size} zeros, {n} requested")
    lo, hi = lo[: n + 1], hi[: n + 1]
    roots = refine_roots(hardy_z, lo, hi, tol)
    # N(g_j) = j + 1 at good Gram points: cross-check the total
    last_good = good[good <= n + margin][-1]
    expected = int(idx[last_good]) + 1
    found = int(np.count_nonzero(roots <= g[last_good])) if roots[-1] > g[last_good] else None
    if found is not None and found != expected:
        raise MissedZeroError(f"zero count {found} at Gram point disagrees with {expected}")
    roots = roots[:n]
    # complete up to the next zero, which lies above roots[-1]
    return ZeroList(roots, "computed", tol, (0.0, float(roots[-1])))


def cache_dir() -> Path:
    return Path(os.environ.get("LZETA_CACHE", Path.home() / ".cache" / "lzeta"))


def first_zeros(n: int, use_cache: bool = True) -> ZeroList:
    """First n zeros, read from or written to the on-disk cache."""
    d = cache_dir()
    if use_cache:
        best = None
        for p in glob.glob(str(d / "zeta_zeros_first_*.txt")):
            try:
                k = int(Path(p).stem.rsplit("_", 1)[1])
            except ValueError:
                continue
            if k >= n and (best is None or k < best[0]):
                best = (k, p)
        if best is not None:
            z = load_zeros(best[1])
            if len(z) >= n:
                full = ZeroList(z.ordinates, z.source, z.precision_hint, (0.0, float(z.ordinates[-1])))
                return full.head(n)
    log.info("computing the first %d zeta zeros", n)
    z = compute_first_zeros(n)
    if use_cache:
        # hand back exactly what later cache reads will see
        path = save_zeros(z, d / f"zeta_zeros_first_{n}.txt")
        z = ZeroList(load_zeros(path).ordinates, z.source, z.precision_hint, z.coverage)
    return z
