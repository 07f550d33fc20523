"""Eta quotients: GHN conditions, Ligozat cusp orders and the f_{r,k} family.

Everything is exact (integers and Fractions).  A quotient is certified as
a holomorphic modular form by checking the hypotheses of the criteria, not
by evaluating it on the upper half plane.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Optional, Tuple

import gmpy2

from .analytics import srmex_series
from .series import eta_expansion

__all__ = [
    "UnsupportedR",
    "KTooSmall",
    "GhnViolated",
    "CongruenceMismatch",
    "EtaQuotient",
    "CuspReport",
    "FrkForm",
    "CongruenceReport",
    "divisors",
    "factor_23",
    "ghn_check",
    "weight_of",
    "character_s",
    "min_level_u",
    "frk_level",
    "frk_quotient",
    "min_admissible_k",
    "build_frk",
    "cusp_orders",
    "star_value",
    "character_chi",
    "verify_congruence",
]


class UnsupportedR(ValueError):
    """r has a prime factor other than 2 and 3."""


class KTooSmall(ValueError):
    """k is below the admissible bound for this r."""


class GhnViolated(ValueError):
    """The quotient fails one of the two mod-24 conditions."""


class CongruenceMismatch(AssertionError):
    def __init__(self, exponent: int, got: int, expected: int, modulus: int):
        self.exponent, self.got, self.expected, self.modulus = exponent, got, expected, modulus
        super().__init__(
            f"coefficient of q^{exponent} is {got} mod {modulus}, expected {expected}"
        )


def divisors(n: int) -> list:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _factor(n: int) -> Dict[int, int]:
    out: Dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class EtaQuotient:
    """prod over delta | level of eta(delta z)^r_delta."""

    level: int
    exponents: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.level < 1:
            raise ValueError(f"level must be positive, got {self.level}")
        clean = {}
        for delta, e in sorted(self.exponents.items()):
            if delta < 1 or self.level % delta:
                raise ValueError(f"{delta} does not divide the level {self.level}")
            if e:
                clean[delta] = e
        object.__setattr__(self, "exponents", clean)

    @classmethod
    def merged(cls, level: int, pairs) -> "EtaQuotient":
        """Build from (delta, exponent) pairs, adding exponents on equal delta."""
        acc: Dict[int, int] = {}
        for delta, e in pairs:
            acc[delta] = acc.get(delta, 0) + e
        return cls(level, acc)


@dataclass(frozen=True)
class CuspReport:
    level: int
    entries: Tuple[Tuple[int, Fraction], ...]
    holomorphic: bool

    def order_at(self, d: int) -> Fraction:
        for dd, order in self.entries:
            if dd == d:
                return order
        raise KeyError(d)


@dataclass(frozen=True)
class FrkForm:
    r: int
    m: int
    n: int
    k: int
    quotient: EtaQuotient
    weight: int
    character_s: Tuple[Tuple[int, int], ...]  # prime factorisation of prod delta^r_delta

    @property
    def level(self) -> int:
        return self.quotient.level


@dataclass(frozen=True)
class CongruenceReport:
    r: int
    k: int
    terms: int
    trunc_order: int
    on_grid_checked: int
    off_grid_checked: int


def factor_23(r: int) -> Tuple[int, int]:
    """Return (m, n) with r = 2^m 3^n."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    m = n = 0
    rest = r
    while rest % 2 == 0:
        rest //= 2
        m += 1
    while rest % 3 == 0:
        rest //= 3
        n += 1
    if rest != 1:
        raise UnsupportedR(f"r={r} has a prime factor >= 5; only r = 2^m 3^n is covered")
    return m, n


def ghn_check(eq: EtaQuotient) -> Tuple[bool, bool]:
    N = eq.level
    s1 = sum(d * e for d, e in eq.exponents.items())
    s2 = sum((N // d) * e for d, e in eq.exponents.items())
    return s1 % 24 == 0, s2 % 24 == 0


def weight_of(eq: EtaQuotient) -> Fraction:
    return Fraction(sum(eq.exponents.values()), 2)


def character_s(eq: EtaQuotient) -> Tuple[Tuple[int, int], ...]:
    """prod delta^r_delta as sorted (prime, exponent) pairs; exponents may be negative."""
    acc: Dict[int, int] = {}
    for delta, e in eq.exponents.items():
        for p, a in _factor(delta).items():
            acc[p] = acc.get(p, 0) + a * e
    return tuple((p, a) for p, a in sorted(acc.items()) if a)


def min_level_u(r: int, k: int) -> Tuple[int, int]:
    """Smallest u >= 1 with u(3*2^(k-1) - 3r) = 0 mod 24, and N = 48ru.

    Only k >= 4 is accepted: then 24 | 3*2^(k-1) and u no longer depends on k.
    """
    factor_23(r)
    if k < 4:
        raise KTooSmall(f"min_level_u needs k >= 4, got k={k}")
    c = 3 * 2 ** (k - 1) - 3 * r
    u = 1
    while (u * c) % 24:
        u += 1
    return u, 48 * r * u


def frk_level(r: int) -> int:
    m, n = factor_23(r)
    if m <= 2:
        return 2 ** 7 * 3 ** (n + 1)
    return 2 ** (m + 4) * 3 ** (n + 1)


def frk_quotient(r: int, k: int, level: Optional[int] = None) -> EtaQuotient:
    """eta(48z) eta(24rz)^(2^k-1) / (eta(24z)^2 eta(48rz)^(2^(k-1)-2)), merged.

    No admissibility check on k; without an explicit level the smallest
    common multiple 48r of the deltas is used.
    """
    if r < 1 or k < 1:
        raise ValueError(f"need r >= 1 and k >= 1, got r={r}, k={k}")
    pairs = [
        (48, 1),
        (24 * r, 2 ** k - 1),
        (24, -2),
        (48 * r, -(2 ** (k - 1) - 2)),
    ]
    return EtaQuotient.merged(level if level is not None else 48 * r, pairs)


def min_admissible_k(r: int) -> int:
    m, n = factor_23(r)
    return max(m + 2 * n + 1, 4)


def build_frk(r: int, k: int) -> FrkForm:
    m, n = factor_23(r)
    kmin = min_admissible_k(r)
    if k < kmin:
        raise KTooSmall(f"r={r} needs k >= {kmin}, got k={k}")
    eq = frk_quotient(r, k, level=frk_level(r))
    return FrkForm(
        r=r, m=m, n=n, k=k,
        quotient=eq,
        weight=2 ** (k - 2),
        character_s=character_s(eq),
    )


def cusp_orders(eq: EtaQuotient) -> CuspReport:
    """Order of vanishing at the cusps c/d for every divisor d of the level."""
    cond4, cond5 = ghn_check(eq)
    if not (cond4 and cond5):
        raise GhnViolated(f"GHN conditions fail for {eq}: (4)={cond4}, (5)={cond5}")
    N = eq.level
    entries = []
    for d in divisors(N):
        total = sum(
            Fraction(gcd(d, delta) ** 2 * e, delta) for delta, e in eq.exponents.items()
        )
        entries.append((d, Fraction(N, 24 * gcd(d, N // d) * d) * total))
    return CuspReport(
        level=N, entries=tuple(entries), holomorphic=all(o >= 0 for _, o in entries)
    )


def star_value(r: int, k: int, d: int) -> int:
    """48r * sum_delta gcd(d,delta)^2 r_delta / delta for f_{r,k} (an integer).

    Its sign is the sign of the cusp order at c/d.
    """
    N = frk_level(r)
    if d < 1 or N % d:
        raise ValueError(f"d={d} does not divide the level {N}")
    return (
        r * gcd(d, 48) ** 2
        - 4 * r * gcd(d, 24) ** 2
        + (2 ** (k + 1) - 2) * gcd(d, 24 * r) ** 2
        - (2 ** (k - 1) - 2) * gcd(d, 48 * r) ** 2
    )


def _squarefree_kernel(factors) -> int:
    out = 1
    for p, a in factors:
        if a % 2:
            out *= p
    return out


def character_chi(form: FrkForm, d: int) -> int:
    """Kronecker symbol ((-1)^weight * s / d); 0 when gcd(d, level) > 1."""
    if gcd(d, form.level) != 1:
        return 0
    kernel = (-1) ** form.weight * _squarefree_kernel(form.character_s)
    return int(gmpy2.kronecker(kernel, d))


def verify_congruence(r: int, k: int, terms: int) -> CongruenceReport:
    """Check f_{r,k} = sum sigma_r mex-bar(n) q^(24n+3r) mod 2^k.

    The quotient is expanded exactly and only then reduced.  Raises
    ``CongruenceMismatch`` at the first bad exponent.
    """
    factor_23(r)
    if terms < 1:
        raise ValueError(f"terms must be positive, got {terms}")
    M = 2 ** k
    T = 24 * terms + 3 * r
    f = eta_expansion(frk_quotient(r, k), T)
    table = srmex_series(r, terms)
    on = off = 0
    for e, c in enumerate(f.coeffs):
        if e >= 3 * r and (e - 3 * r) % 24 == 0:
            expected = table.values[(e - 3 * r) // 24] % M
            on += 1
        else:
            expected = 0
            off += 1
        if c % M != expected:
            raise CongruenceMismatch(e, c % M, expected, M)
    return CongruenceReport(r=r, k=k, terms=terms, trunc_order=T,
                            on_grid_checked=on, off_grid_checked=off)
