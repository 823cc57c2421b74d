"""Dirichlet L-functions: values, functional equation, zeros on the critical line."""
from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import loggamma

from . import _em
from .characters import DirichletCharacter, gauss_sum, is_primitive, parity
from .zeta_zeros import CoverageError, MissedZeroError, ZeroList, refine_roots

ZERO_FLOOR = 1e-12


class UnsupportedCharacterError(ValueError):
    """Principal or imprimitive character where a primitive one is needed."""


class NearZeroError(ArithmeticError):
    """|L(rho, chi)| fell below the numerical zero floor."""

    def __init__(self, gamma: float, value: float):
        super().__init__(f"|L| = {value:.3e} below floor at gamma = {gamma!r}")
        self.gamma = gamma
        self.value = value


@dataclass(frozen=True)
class LPoint:
    s: complex
    chi: DirichletCharacter
    value: complex


@dataclass(frozen=True)
class RootNumber:
    epsilon: complex

    def __post_init__(self):
        if abs(abs(self.epsilon) - 1) > 1e-10:
            raise ValueError(f"root number must have unit modulus, got {self.epsilon}")


@dataclass(frozen=True)
class LZeroList:
    """Zeros 1/2 + i gamma of L(s, chi) with gamma in the window (t_lo, t_hi]."""

    ordinates: np.ndarray = field(repr=False)
    chi: DirichletCharacter
    window: tuple[float, float]

    def __post_init__(self):
        g = np.ascontiguousarray(self.ordinates, dtype=float)
        if g.size and np.any(np.diff(g) <= 0):
            raise ValueError("ordinates must be strictly increasing")
        g.flags.writeable = False
        object.__setattr__(self, "ordinates", g)

    def __len__(self) -> int:
        return self.ordinates.size


# -- Hurwitz zeta ------------------------------------------------------------

def hurwitz_zeta(s, a: float):
    """sum_{n >= 0} (n + a)^{-s}, analytically continued, for 0 < a <= 1."""
    if not 0 < a <= 1:
        raise ValueError("a must lie in (0, 1]")
    scalar = np.ndim(s) == 0
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    if np.any(s == 1):
        raise ZeroDivisionError("hurwitz_zeta has a pole at s = 1")
    K = _em.cutoff(np.abs(s))
    out = np.empty(s.shape, dtype=complex)
    for i, (si, Ki) in enumerate(zip(s, K)):
        n = np.arange(Ki) + a
        head = np.sum(np.exp(-si * np.log(n)))
        out[i] = head + _em.em_tail(np.array([si]), 1, [a], [1.0], np.array([Ki]))[0]
    return out[0] if scalar else out


# -- L-values ------------------------------------------------------------------

def _check(chi: DirichletCharacter) -> None:
    if chi.is_principal:
        raise UnsupportedCharacterError("principal characters are not supported")
    if not is_primitive(chi):
        raise UnsupportedCharacterError(f"character {chi.name} is not primitive")


def L_values(s, chis: list[DirichletCharacter]) -> np.ndarray:
    """L(s, chi) for an array of s and several characters; shape (len(s), len(chis))."""
    for chi in chis:
        _check(chi)
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    return _em.dirichlet_series(s, [np.asarray(c.values) for c in chis], [False] * len(chis))


def L_value(s, chi: DirichletCharacter):
    """L(s, chi) for a primitive nonprincipal character (scalar or array s)."""
    out = L_values(s, [chi])[:, 0]
    return out[0] if np.ndim(s) == 0 else out


def root_number(chi: DirichletCharacter) -> RootNumber:
    """epsilon(chi) = tau(chi) / (i^a sqrt(m))."""
    _check(chi)
    a = parity(chi).a
    return RootNumber(gauss_sum(chi) / ((1j) ** a * math.sqrt(chi.modulus)))


def _log_gamma_factor(s, chi: DirichletCharacter):
    a = parity(chi).a
    z = (np.asarray(s, dtype=complex) + a) / 2
    return z * math.log(chi.modulus / math.pi) + loggamma(z)


def completed_L(s, chi: DirichletCharacter):
    """Lambda(s, chi) = (m/pi)^{(s+a)/2} Gamma((s+a)/2) L(s, chi)."""
    return np.exp(_log_gamma_factor(s, chi)) * L_value(s, chi)


def fe_residual(s, chi: DirichletCharacter, relative: bool = True):
    """|Lambda(s, chi) - eps Lambda(1 - s, conj chi)|, optionally relative to |Lambda(s, chi)|."""
    eps = root_number(chi).epsilon
    lhs = completed_L(s, chi)
    rhs = eps * completed_L(1 - np.asarray(s, dtype=complex), chi.conj())
    r = np.abs(lhs - rhs)
    return r / np.abs(lhs) if relative else r


class RotatedL:
    """Real-valued rotation of L(1/2 + it, chi) on the critical line.

    Z(t) = sign * eps^{-1/2} e^{i phi(t)} L(1/2 + it, chi), where e^{i phi} is
    the phase of the gamma factor, so Z equals eps^{-1/2} Lambda up to a
    positive factor and is real. ``sign`` makes Z(0) positive.
    """

    def __init__(self, chi: DirichletCharacter):
        _check(chi)
        self.chi = chi
        self.epsilon = root_number(chi).epsilon
        self._rot = 1 / np.sqrt(self.epsilon)
        self.sign = 1.0
        z0 = self.complex(np.array([0.0]))[0]
        self.sign = 1.0 if z0.real >= 0 else -1.0

    def phase(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return _log_gamma_factor(0.5 + 1j * t, self.chi).imag

    def complex(self, t) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=float))
        L = L_value(0.5 + 1j * t, self.chi)
        return self.sign * self._rot * np.exp(1j * self.phase(t)) * L

    def __call__(self, t) -> np.ndarray:
        return self.complex(t).real


def smooth_L_count(chi: DirichletCharacter, t_lo: float, t_hi: float) -> float:
    """Expected number of zeros in (t_lo, t_hi] from the gamma-factor phase."""
    rot = RotatedL(chi)
    return float((rot.phase(t_hi) - rot.phase(t_lo)) / math.pi)


def scan_L_zeros(
    chi: DirichletCharacter,
    t_lo: float,
    t_hi: float,
    grid_step: float = 0.02,
    tol: float = 1e-9,
    check: bool = True,
) -> LZeroList:
    """Zeros of L(1/2 + it, chi) with t in (t_lo, t_hi] from sign changes of the rotation."""
    if not 0 <= t_lo < t_hi:
        raise ValueError("need 0 <= t_lo < t_hi")
    rot = RotatedL(chi)
    n = int(math.ceil((t_hi - t_lo) / grid_step))
    ts = np.linspace(t_lo, t_hi, n + 1)
    zs = rot(ts)
    s = np.sign(zs)
    k = np.flatnonzero(s[:-1] * s[1:] < 0)
    roots = refine_roots(rot, ts[k], ts[k + 1], tol) if k.size else np.empty(0)
    roots = roots[(roots > t_lo) & (roots <= t_hi)]
    if check:
        expected = smooth_L_count(chi, t_lo, t_hi)
        if abs(roots.size - expected) > 3:
            raise MissedZeroError(
                f"{chi.name}: {roots.size} zeros in ({t_lo}, {t_hi}], estimate {expected:.2f}; rescan finer"
            )
    return LZeroList(roots, chi, (float(t_lo), float(t_hi)))


def mean_gap(chi: DirichletCharacter, t) -> np.ndarray:
    """Average spacing 2 pi / log(m t / 2 pi) of zeros of L(s, chi) near height t."""
    x = chi.modulus * np.abs(np.asarray(t, dtype=float)) / (2 * math.pi)
    return 2 * math.pi / np.log(np.maximum(x, math.e))


def eta_chi(gamma, zlist: LZeroList, margin_gaps: float = 2.0):
    """Distance from gamma to the nearest listed zero of L(s, chi).

    Raises:
        CoverageError: if the window does not extend ``margin_gaps`` mean gaps
            beyond gamma on both sides (a window starting at 0 covers below).
    """
    scalar = np.ndim(gamma) == 0
    g = np.atleast_1d(np.asarray(gamma, dtype=float))
    margin = margin_gaps * mean_gap(zlist.chi, g)
    lo, hi = zlist.window
    bad = (g + margin > hi) | ((g - margin < lo) & (lo > 0))
    if np.any(bad):
        raise CoverageError(f"zero window {zlist.window} too narrow around gamma={g[bad][0]}")
    z = zlist.ordinates
    if z.size == 0:
        raise CoverageError("empty zero window")
    j = np.searchsorted(z, g)
    left = np.abs(g - z[np.clip(j - 1, 0, z.size - 1)])
    right = np.abs(z[np.clip(j, 0, z.size - 1)] - g)
    d = np.minimum(left, right)
    return float(d[0]) if scalar else d


def log_abs_L(gamma: float, chi: DirichletCharacter) -> float:
    """log |L(1/2 + i gamma, chi)|.

    Raises:
        NearZeroError: if |L| < ZERO_FLOOR.
    """
    v = abs(L_value(0.5 + 1j * gamma, chi))
    if v < ZERO_FLOOR:
        raise NearZeroError(gamma, v)
    return math.log(v)


# -- batch evaluation at zeta zeros with a CSV cache ----------------------------

def _cache_key(gammas: np.ndarray, chis) -> str:
    h = hashlib.sha256(np.ascontiguousarray(gammas).tobytes())
    h.update(",".join(c.name for c in chis).encode())
    return h.hexdigest()[:16]


def write_L_csv(path, gammas: np.ndarray, chis, values: np.ndarray) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    with open(tmp, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["m", "char_label", "gamma", "re_L", "im_L"])
        for j, chi in enumerate(chis):
            col = values[:, j]
            for g, v in zip(gammas.tolist(), col.tolist()):
                w.writerow([chi.modulus, chi.label, repr(g), repr(v.real), repr(v.imag)])
    tmp.replace(path)
    return path


def read_L_csv(path, gammas: np.ndarray, chis) -> np.ndarray | None:
    """Values from a cache file, or None unless it matches the inputs exactly."""
    try:
        data = np.genfromtxt(path, delimiter=",", skip_header=1, dtype=float)
    except (OSError, ValueError):
        return None
    data = np.atleast_2d(data)
    n = gammas.size
    if data.shape != (n * len(chis), 5):
        return None
    out = np.empty((n, len(chis)), dtype=complex)
    for j, chi in enumerate(chis):
        blk = data[j * n : (j + 1) * n]
        if not (np.all(blk[:, 0] == chi.modulus) and np.all(blk[:, 1] == chi.label)):
            return None
        if not np.array_equal(blk[:, 2], gammas):
            return None
        out[:, j] = blk[:, 3] + 1j * blk[:, 4]
    return out


def L_at_zeros(
    zeros: ZeroList | np.ndarray,
    chis: list[DirichletCharacter],
    cache_dir: Path | None = None,
    chunk: int = 2000,
    progress=None,
) -> np.ndarray:
    """L(1/2 + i gamma, chi_j) for every ordinate; shape (n, len(chis)).

    When ``cache_dir`` is given the values are stored as a CSV keyed by a hash
    of the ordinates and character labels, and read back when it matches.
    """
    g = np.asarray(zeros.ordinates if isinstance(zeros, ZeroList) else zeros, dtype=float)
    path = None
    if cache_dir is not None:
        path = Path(cache_dir) / f"Lvalues_{_cache_key(g, chis)}.csv"
        if path.exists():
            cached = read_L_csv(path, g, chis)
            if cached is not None:
                return cached
    out = np.empty((g.size, len(chis)), dtype=complex)
    for i in range(0, g.size, chunk):
        out[i : i + chunk] = L_values(0.5 + 1j * g[i : i + chunk], chis)
        if progress is not None:
            progress(min(i + chunk, g.size), g.size)
    if path is not None:
        write_L_csv(path, g, chis, out)
    return out


def log_abs_values(values: np.ndarray, floor: float = ZERO_FLOOR) -> tuple[np.ndarray, np.ndarray]:
    """(log|values|, mask of entries below the floor); flagged entries are NaN."""
    a = np.abs(values)
    flagged = a < floor
    with np.errstate(divide="ignore"):
        out = np.where(flagged, np.nan, np.log(np.where(flagged, 1.0, a)))
    return out, flagged


# -- L-zero files ----------------------------------------------------------------

def save_L_zeros(zl: LZeroList, path, precision: float = 1e-9) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lo, hi = zl.window
    lines = [f"# source=scanned, precision={precision:.1e}, chi={zl.chi.name}, t_lo={lo!r}, t_hi={hi!r}"]
    lines += [f"{x:.12f}" for x in zl.ordinates.tolist()]
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text("\n".join(lines) + "\n")
    tmp.replace(path)
    return path


def load_L_zeros(path) -> LZeroList:
    from .characters import parse_character

    meta = {}
    vals = []
    with open(path) as fh:
        for line in fh:
            s = line.strip()
            if not s:
                continue
            if s.startswith("#"):
                for part in s[1:].split(","):
                    k, _, v = part.strip().partition("=")
                    meta[k] = v
                continue
            vals.append(float(s))
    if "chi" not in meta:
        raise ValueError(f"{path}: missing chi=... header")
    lo = float(meta.get("t_lo", 0.0))
    hi = float(meta.get("t_hi", vals[-1] if vals else 0.0))
    return LZeroList(np.array(vals), parse_character(meta["chi"]), (lo, hi))


def L_zeros_upto(chi: DirichletCharacter, t_hi: float, cache_dir=None, grid_step: float = 0.02) -> LZeroList:
    """Zeros of L(s, chi) in (0, t_hi], reusing any cached scan that reaches t_hi."""
    d = Path(cache_dir) if cache_dir is not None else None
    if d is not None:
        for p in sorted(d.glob(f"Lzeros_{chi.modulus}_{chi.label}_*.txt")):
            try:
                zl = load_L_zeros(p)
            except (OSError, ValueError):
                continue
            if zl.window[0] == 0 and zl.window[1] >= t_hi:
                g = zl.ordinates
                return LZeroList(g[g <= t_hi], chi, (0.0, float(t_hi)))
    zl = scan_L_zeros(chi, 0.0, float(t_hi), grid_step)
    if d is not None:
        path = save_L_zeros(zl, d / f"Lzeros_{chi.modulus}_{chi.label}_{int(math.ceil(t_hi))}.txt")
        zl = LZeroList(load_L_zeros(path).ordinates, chi, zl.window)
    return zl
