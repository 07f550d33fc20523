"""Truncated power series over the integers (optionally reduced mod M).

Series are dense, immutable and carry their own truncation order ``T``:
a series holds the coefficients of q^0 .. q^T.  Mixing two series with
different orders truncates to the smaller one.  A series may instead be
in *reduced* mode, where every coefficient is kept in ``[0, modulus)``;
reduced and exact series never mix implicitly.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import gmpy2
import numpy as np

__all__ = [
    "TruncatedSeries",
    "FracExpSeries",
    "NonUnitConstantTerm",
    "FractionalLeadingExponent",
    "series_add",
    "series_sub",
    "series_mul",
    "series_invert",
    "series_pow",
    "pochhammer",
    "neg_pochhammer",
    "jacobi_cube",
    "triangular_gf",
    "eta_frac_expansion",
    "eta_expansion",
]

# below this length the schoolbook product beats packing overhead
_NAIVE_CUTOFF = 48
# int64 numpy buffers are safe for moduli up to this (a - b never overflows)
_INT64_MODULUS_LIMIT = 1 << 62


class NonUnitConstantTerm(ValueError):
    """Raised when inverting a series whose constant term is not +-1."""


class FractionalLeadingExponent(ValueError):
    """Raised when an eta product has a non-integral power of q."""


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple
    modulus: Optional[int] = None

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a truncated series needs at least the q^0 coefficient")
        if self.modulus is not None:
            if self.modulus < 2:
                raise ValueError(f"modulus must be >= 2, got {self.modulus}")
            m = self.modulus
            object.__setattr__(self, "coeffs", tuple(int(c) % m for c in self.coeffs))
        else:
            object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], T: int, modulus: Optional[int] = None):
        """Build a series of order T, zero-padding or cutting ``coeffs``."""
        if T < 0:
            raise ValueError(f"truncation order must be nonnegative, got {T}")
        cs = list(coeffs)[: T + 1]
        cs.extend([0] * (T + 1 - len(cs)))
        return cls(tuple(cs), modulus)

    @classmethod
    def one(cls, T: int, modulus: Optional[int] = None):
        return cls.from_coeffs([1], T, modulus)

    @classmethod
    def zero(cls, T: int, modulus: Optional[int] = None):
        return cls.from_coeffs([], T, modulus)

    @classmethod
    def monomial(cls, exponent: int, T: int, coeff: int = 1, modulus: Optional[int] = None):
        cs = [0] * (T + 1)
        if exponent <= T:
            cs[exponent] = coeff
        return cls(tuple(cs), modulus)

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def truncate(self, T: int) -> "TruncatedSeries":
        if T > self.trunc_order:
            raise ValueError(f"cannot extend order {self.trunc_order} series to {T}")
        return TruncatedSeries(self.coeffs[: T + 1], self.modulus)

    def reduce(self, modulus: int) -> "TruncatedSeries":
        """Switch an exact series into reduced mode (or reduce further)."""
        if self.modulus is not None and self.modulus % modulus:
            raise ValueError(f"cannot reduce mod {self.modulus} series to mod {modulus}")
        return TruncatedSeries(self.coeffs, modulus)

    def __add__(self, other):
        return series_add(self, other)

    def __sub__(self, other):
        return series_sub(self, other)

    def __neg__(self):
        return TruncatedSeries(tuple(-c for c in self.coeffs), self.modulus)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedSeries(tuple(other * c for c in self.coeffs), self.modulus)
        return series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return series_pow(self, e)

    def invert(self):
        return series_invert(self)

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:8])
        more = ", ..." if len(self.coeffs) > 8 else ""
        mod = f", mod {self.modulus}" if self.modulus is not None else ""
        return f"TruncatedSeries([{head}{more}], T={self.trunc_order}{mod})"


def _common(a: TruncatedSeries, b: TruncatedSeries):
    if a.modulus != b.modulus:
        raise ValueError(
            f"cannot combine series with moduli {a.modulus} and {b.modulus}; "
            "reduce explicitly first"
        )
    return min(a.trunc_order, b.trunc_order), a.modulus


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    T, m = _common(a, b)
    return TruncatedSeries(tuple(x + y for x, y in zip(a.coeffs[: T + 1], b.coeffs)), m)


def series_sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    T, m = _common(a, b)
    return TruncatedSeries(tuple(x - y for x, y in zip(a.coeffs[: T + 1], b.coeffs)), m)


# --- multiplication -------------------------------------------------------

def _mul_naive(a: Sequence[int], b: Sequence[int], T: int) -> list:
    """Schoolbook Cauchy product, truncated at q^T.  This is the reference."""
    out = [0] * (T + 1)
    nb = min(len(b), T + 1)
    for i, x in enumerate(a[: T + 1]):
        if not x:
            continue
        for j in range(min(nb, T + 1 - i)):
            out[i + j] += x * b[j]
    return out


def _pack(xs: Sequence[int], width: int) -> int:
    # xs must be nonnegative and fit in ``width`` bytes each
    return int.from_bytes(b"".join(x.to_bytes(width, "little") for x in xs), "little")


def _pack_signed(xs: Sequence[int], width: int) -> int:
    pos = _pack([x if x > 0 else 0 for x in xs], width)
    neg = _pack([-x if x < 0 else 0 for x in xs], width)
    return pos - neg


def _mul_kronecker(a: Sequence[int], b: Sequence[int], T: int) -> list:
    """Cauchy product via Kronecker substitution q -> 2^s.

    Gives exactly the same integers as ``_mul_naive``; each coefficient
    gets a slot wide enough for the largest possible convolution sum.
    """
    a = a[: T + 1]
    b = b[: T + 1]
    amax = max(abs(x) for x in a)
    bmax = max(abs(x) for x in b)
    if amax == 0 or bmax == 0:
        return [0] * (T + 1)
    bound_bits = amax.bit_length() + bmax.bit_length() + min(len(a), len(b)).bit_length()
    width = (bound_bits + 1) // 8 + 1  # +1 bit of headroom for the sign bias
    signed = any(x < 0 for x in a) or any(x < 0 for x in b)
    if signed:
        A, B = _pack_signed(a, width), _pack_signed(b, width)
    else:
        A, B = _pack(a, width), _pack(b, width)
    C = int(gmpy2.mpz(A) * gmpy2.mpz(B))
    nslots = len(a) + len(b) - 1
    keep = min(nslots, T + 1)
    if signed:
        half = 1 << (8 * width - 1)
        bias = int.from_bytes((b"\x00" * (width - 1) + b"\x80") * nslots, "little")
        raw = (C + bias).to_bytes(nslots * width, "little")
        out = [
            int.from_bytes(raw[i * width:(i + 1) * width], "little") - half
            for i in range(keep)
        ]
    else:
        raw = C.to_bytes(nslots * width, "little")
        out = [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(keep)]
    out.extend([0] * (T + 1 - keep))
    return out


def _mul_coeffs(a: Sequence[int], b: Sequence[int], T: int) -> list:
    if min(len(a), len(b), T + 1) <= _NAIVE_CUTOFF:
        return _mul_naive(a, b, T)
    return _mul_kronecker(a, b, T)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    T, m = _common(a, b)
    return TruncatedSeries(tuple(_mul_coeffs(a.coeffs, b.coeffs, T)), m)


# --- inversion and powers --------------------------------------------------

def _check_unit(a: TruncatedSeries) -> int:
    c0 = a.coeffs[0]
    if a.modulus is None:
        if c0 not in (1, -1):
            raise NonUnitConstantTerm(f"constant term must be +1 or -1, got {c0}")
        return c0
    if c0 == 1 % a.modulus:
        return 1
    if c0 == (-1) % a.modulus:
        return -1
    raise NonUnitConstantTerm(
        f"constant term must be +1 or -1 mod {a.modulus}, got {c0}"
    )


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series with constant term +-1.

    Short series use the coefficient recurrence directly; long ones use
    Newton iteration b <- b(2 - ab), doubling the precision each round.
    """
    u = _check_unit(a)
    T, m = a.trunc_order, a.modulus
    ac = a.coeffs
    if T <= 2 * _NAIVE_CUTOFF:
        b = [u] + [0] * T
        for n in range(1, T + 1):
            s = 0
            for j in range(1, n + 1):
                if ac[j]:
                    s += ac[j] * b[n - j]
            b[n] = -u * s
            if m is not None:
                b[n] %= m
        return TruncatedSeries(tuple(b), m)

    b = [u]
    prec = 1
    while prec < T + 1:
        prec = min(2 * prec, T + 1)
        ab = _mul_coeffs(ac[:prec], b, prec - 1)
        if m is not None:
            ab = [x % m for x in ab]
        ab = [-x for x in ab]
        ab[0] += 2
        b = _mul_coeffs(b, ab, prec - 1)
        if m is not None:
            b = [x % m for x in b]
    return TruncatedSeries(tuple(b), m)


def series_pow(a: TruncatedSeries, e: int) -> TruncatedSeries:
    if e < 0:
        return series_pow(series_invert(a), -e)
    result = TruncatedSeries.one(a.trunc_order, a.modulus)
    base = a
    while e:
        if e & 1:
            result = series_mul(result, base)
        e >>= 1
        if e:
            base = series_mul(base, base)
    return result


# --- q-products ------------------------------------------------------------

def _buffer(T: int, modulus: Optional[int]):
    if modulus is not None and modulus <= _INT64_MODULUS_LIMIT:
        buf = np.zeros(T + 1, dtype=np.int64)
    else:
        buf = np.zeros(T + 1, dtype=object)
        buf[:] = 0
    buf[0] = 1
    return buf


def _binomial_product(a: int, b: int, T: int, sign: int, modulus: Optional[int]):
    if a < 1 or b < 1:
        raise ValueError(f"pochhammer parameters must be positive, got a={a}, b={b}")
    if T < 0:
        raise ValueError(f"truncation order must be nonnegative, got {T}")
    c = _buffer(T, modulus)
    for e in range(a, T + 1, b):
        # multiply by (1 + sign*q^e); numpy resolves the overlapping slices
        if sign < 0:
            c[e:] -= c[: T + 1 - e]
        else:
            c[e:] += c[: T + 1 - e]
        if modulus is not None:
            c[e:] %= modulus
    return TruncatedSeries(tuple(int(x) for x in c), modulus)


def pochhammer(a: int, b: int, T: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """(q^a; q^b)_inf = prod_{j>=0} (1 - q^(a+jb)) to order T."""
    return _binomial_product(a, b, T, -1, modulus)


def neg_pochhammer(a: int, b: int, T: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """(-q^a; q^b)_inf = prod_{j>=0} (1 + q^(a+jb)) to order T."""
    return _binomial_product(a, b, T, +1, modulus)


def jacobi_cube(T: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """sum_{j>=0} (-1)^j (2j+1) q^(j(j+1)/2), which equals (q;q)_inf^3."""
    cs = [0] * (T + 1)
    j = 0
    while j * (j + 1) // 2 <= T:
        cs[j * (j + 1) // 2] = (-1) ** j * (2 * j + 1)
        j += 1
    return TruncatedSeries(tuple(cs), modulus)


def triangular_gf(r: int, T: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """Indicator series sum_{k>=0} q^(r k(k+1)/2)."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    cs = [0] * (T + 1)
    k = 0
    while r * k * (k + 1) // 2 <= T:
        cs[r * k * (k + 1) // 2] = 1
        k += 1
    return TruncatedSeries(tuple(cs), modulus)


# --- eta products ----------------------------------------------------------

@dataclass(frozen=True)
class FracExpSeries:
    """Series on the exponent grid q^(i/24), i = 0 .. trunc_order."""

    coeffs: tuple
    modulus: Optional[int] = None
    unit: int = 24

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs) - 1

    def is_integral(self) -> bool:
        return all(c == 0 for i, c in enumerate(self.coeffs) if i % self.unit)

    def to_series(self) -> TruncatedSeries:
        for i, c in enumerate(self.coeffs):
            if c and i % self.unit:
                raise FractionalLeadingExponent(
                    f"nonzero coefficient at q^({i}/{self.unit})"
                )
        return TruncatedSeries(self.coeffs[:: self.unit], self.modulus)


def eta_frac_expansion(eq, T: int, modulus: Optional[int] = None) -> FracExpSeries:
    """Expansion of prod eta(delta z)^r_delta up to q^T, on the 1/24 grid.

    ``eq`` is anything with an ``exponents`` mapping delta -> r_delta.
    The eta prefactor contributes q^(sum delta*r_delta / 24); the
    remaining product is a series in integral powers of q.
    """
    lead24 = sum(d * e for d, e in eq.exponents.items())
    if lead24 < 0:
        raise ValueError(f"negative leading exponent {lead24}/24 is not supported")
    unit = 24
    top = unit * T
    out = [0] * (top + 1)
    if lead24 > top:
        return FracExpSeries(tuple(out), modulus, unit)
    rest = (top - lead24) // unit
    prod = TruncatedSeries.one(rest, modulus)
    for delta, e in sorted(eq.exponents.items()):
        if e:
            prod = series_mul(prod, series_pow(pochhammer(delta, delta, rest, modulus), e))
    for i, c in enumerate(prod.coeffs):
        out[lead24 + unit * i] = c
    return FracExpSeries(tuple(out), modulus, unit)


def eta_expansion(eq, T: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """Integral q-expansion of an eta quotient to order T."""
    lead24 = sum(d * e for d, e in eq.exponents.items())
    if lead24 % 24:
        raise FractionalLeadingExponent(
            f"sum of delta*r_delta is {lead24}, not divisible by 24"
        )
    return eta_frac_expansion(eq, T, modulus).to_series()
