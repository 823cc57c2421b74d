"""Dirichlet characters with exact rational phases.

A character mod m is stored as a table of phase numerators over a common
denominator (the exponent of the unit group), so every value is an exact
root of unity until it is converted to a float.

Labels follow the lexicographic order of exponent vectors on the fixed
generators of (Z/mZ)^x: generators are taken prime by prime in increasing
order, with (-1, 5) for the 2-part when 8 | m.  Label 0 is always the
principal character.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np


def _factor(m: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            out.append((d, e))
        d += 1
    if m > 1:
        out.append((m, 1))
    return out


def euler_phi(m: int) -> int:
    r = m
    for p, _ in _factor(m):
        r = r // p * (p - 1)
    return r


def _primitive_root(p: int, e: int) -> int:
    """Smallest primitive root mod p^e for odd p."""
    pe = p**e
    phi = pe // p * (p - 1)
    qs = [q for q, _ in _factor(phi)]
    for g in range(2, pe):
        if math.gcd(g, p) == 1 and all(pow(g, phi // q, pe) != 1 for q in qs):
            return g
    raise ArithmeticError(f"no primitive root mod {pe}")  # unreachable for odd p


def _crt_lift(g: int, pe: int, m: int) -> int:
    """x with x = g (mod pe) and x = 1 (mod m/pe)."""
    rest = m // pe
    if rest == 1:
        return g % m
    # x = 1 + rest * t, need 1 + rest*t = g mod pe
    t = ((g - 1) * pow(rest, -1, pe)) % pe
    return (1 + rest * t) % m


@dataclass(frozen=True)
class _Group:
    modulus: int
    gens: tuple[int, ...]
    orders: tuple[int, ...]
    exponent: int
    dlog: dict  # n -> tuple of exponents


@lru_cache(maxsize=256)
def _unit_group(m: int) -> _Group:
    gens: list[int] = []
    orders: list[int] = []
    for p, e in _factor(m):
        pe = p**e
        if p == 2:
            if e == 1:
                continue
            gens.append(_crt_lift(pe - 1, pe, m))
            orders.append(2)
            if e >= 3:
                gens.append(_crt_lift(5, pe, m))
                orders.append(2 ** (e - 2))
        else:
            gens.append(_crt_lift(_primitive_root(p, e), pe, m))
            orders.append(pe // p * (p - 1))
    exponent = math.lcm(*orders) if orders else 1
    dlog: dict[int, tuple[int, ...]] = {}
    for exps in itertools.product(*(range(o) for o in orders)):
        n = 1
        for g, k in zip(gens, exps):
            n = n * pow(g, k, m) % m
        dlog[n % m if m > 1 else 0] = exps
    return _Group(m, tuple(gens), tuple(orders), exponent, dlog)


@dataclass(frozen=True)
class CharacterParity:
    """a = 0 for even characters (chi(-1) = 1), a = 1 for odd ones."""

    a: int


@dataclass(frozen=True, eq=False)
class DirichletCharacter:
    """A Dirichlet character modulo ``modulus``.

    ``phases[n]`` is ``None`` when gcd(n, m) > 1 and otherwise the integer r
    with chi(n) = exp(2 pi i r / denominator).
    """

    modulus: int
    label: int
    exponents: tuple[int, ...]
    denominator: int
    phases: tuple = field(repr=False)

    # -- values -----------------------------------------------------------
    def phase(self, n: int) -> Fraction | None:
        r = self.phases[n % self.modulus]
        return None if r is None else Fraction(r, self.denominator)

    def __call__(self, n: int) -> complex:
        r = self.phases[n % self.modulus]
        if r is None:
            return 0j
        return _root_of_unity(r, self.denominator)

    @cached_property
    def values(self) -> np.ndarray:
        """Complex values chi(0..m-1)."""
        v = np.array([self(n) for n in range(self.modulus)], dtype=complex)
        v.flags.writeable = False
        return v

    def value_array(self, n: np.ndarray) -> np.ndarray:
        return self.values[np.asarray(n) % self.modulus]

    @property
    def name(self) -> str:
        return f"{self.modulus}.{self.label}"

    def __repr__(self) -> str:
        return f"DirichletCharacter({self.name})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.exponents == other.exponents

    def __hash__(self) -> int:
        return hash((self.modulus, self.exponents))

    # -- structure --------------------------------------------------------
    @property
    def is_principal(self) -> bool:
        return all(k == 0 for k in self.exponents)

    @property
    def is_real(self) -> bool:
        return all(r is None or (2 * r) % self.denominator == 0 for r in self.phases)

    def conj(self) -> DirichletCharacter:
        g = _unit_group(self.modulus)
        exps = tuple((-k) % o for k, o in zip(self.exponents, g.orders))
        return character_from_exponents(self.modulus, exps)

    def induce(self, M: int) -> DirichletCharacter:
        """The character mod M (a multiple of m) induced by this one."""
        if M % self.modulus:
            raise ValueError(f"{M} is not a multiple of {self.modulus}")
        g = _unit_group(M)
        exps = []
        for gen, o in zip(g.gens, g.orders):
            r = self.phases[gen % self.modulus]
            # phase of chi at the generator, re-expressed with denominator o
            k = Fraction(r, self.denominator) * o
            if k.denominator != 1:
                raise ArithmeticError("inconsistent induced character")  # pragma: no cover
            exps.append(int(k) % o)
        return character_from_exponents(M, tuple(exps))

    def __mul__(self, other: DirichletCharacter) -> DirichletCharacter:
        M = math.lcm(self.modulus, other.modulus)
        a, b = self.induce(M), other.induce(M)
        g = _unit_group(M)
        exps = tuple((x + y) % o for x, y, o in zip(a.exponents, b.exponents, g.orders))
        return character_from_exponents(M, exps)


@lru_cache(maxsize=4096)
def _root_of_unity(r: int, d: int) -> complex:
    r %= d
    # exact values on the axes avoid 1e-17 residue in real/imag parts
    if (4 * r) % d == 0:
        return (1, 1j, -1, -1j)[(4 * r) // d]
    return cmath.exp(2j * math.pi * r / d)


@lru_cache(maxsize=4096)
def character_from_exponents(m: int, exps: tuple[int, ...]) -> DirichletCharacter:
    g = _unit_group(m)
    if len(exps) != len(g.orders):
        raise ValueError("exponent vector has the wrong length")
    D = g.exponent
    phases: list[int | None] = [None] * m
    for n, dl in g.dlog.items():
        phases[n] = sum(e * k * (D // o) for e, k, o in zip(dl, exps, g.orders)) % D
    if m == 1:
        phases = [0]
    label = 0
    for k, o in zip(exps, g.orders):
        label = label * o + k
    return DirichletCharacter(m, label, tuple(exps), D, tuple(phases))


def enumerate_characters(m: int) -> list[DirichletCharacter]:
    """All phi(m) characters mod m ordered by label."""
    if m < 1:
        raise ValueError(f"modulus must be >= 1, got {m}")
    g = _unit_group(m)
    return [character_from_exponents(m, e) for e in itertools.product(*(range(o) for o in g.orders))]


def character(m: int, label: int) -> DirichletCharacter:
    chars = enumerate_characters(m)
    if not 0 <= label < len(chars):
        raise ValueError(f"label {label} out of range for modulus {m} ({len(chars)} characters)")
    return chars[label]


def parse_character(spec: str) -> DirichletCharacter:
    """Parse the ``"m.k"`` notation (modulus, label)."""
    try:
        m, k = spec.strip().split(".")
        return character(int(m), int(k))
    except ValueError as exc:
        raise ValueError(f"bad character spec {spec!r}: {exc}") from None


def conductor(chi: DirichletCharacter) -> int:
    m = chi.modulus
    for d in sorted(d for d in range(1, m + 1) if m % d == 0):
        if all(
            chi.phases[n] == 0
            for n in range(1, m, d)  # n = 1 (mod d)
            if chi.phases[n] is not None
        ):
            return d
    return m  # pragma: no cover


def is_primitive(chi: DirichletCharacter) -> bool:
    return conductor(chi) == chi.modulus


def primitive_characters(m: int) -> list[DirichletCharacter]:
    return [c for c in enumerate_characters(m) if is_primitive(c)]


def parity(chi: DirichletCharacter) -> CharacterParity:
    if chi.modulus <= 2:
        return CharacterParity(0)
    return CharacterParity(0 if chi.phases[chi.modulus - 1] == 0 else 1)


def gauss_sum(chi: DirichletCharacter) -> complex:
    """tau(chi) = sum_a chi(a) e^{2 pi i a / m}, for primitive chi."""
    if not is_primitive(chi):
        raise ValueError(f"Gauss sum requested for imprimitive character {chi.name}")
    m = chi.modulus
    terms = [chi(a) * cmath.exp(2j * math.pi * a / m) for a in range(1, m + 1)]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
