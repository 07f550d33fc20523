"""Generating-function routes to sigma_r mex-bar(n), parity and asymptotics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import mpmath

from .series import (
    TruncatedSeries,
    neg_pochhammer,
    pochhammer,
    series_invert,
    series_mul,
)

__all__ = [
    "ExactValueMissing",
    "SmexTable",
    "AsymptoticPoint",
    "pbar_series",
    "smex_series",
    "mex_derivative_series",
    "srmex_series",
    "srmex_via_convolution",
    "is_triangular",
    "parity_predict",
    "asym_estimate",
]


class ExactValueMissing(LookupError):
    """The table is too short to supply the exact value at n."""


@dataclass(frozen=True)
class SmexTable:
    r: int
    values: tuple
    route: str  # "product" or "convolution"
    modulus: Optional[int] = None

    @property
    def trunc_order(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n):
        return self.values[n]

    def as_series(self) -> TruncatedSeries:
        return TruncatedSeries(self.values, self.modulus)


@dataclass(frozen=True)
class AsymptoticPoint:
    n: int
    r: int
    exact: int
    estimate: mpmath.mpf
    ratio: float


def pbar_series(T: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """Overpartition counts: (-q;q)_inf / (q;q)_inf."""
    return series_mul(
        neg_pochhammer(1, 1, T, modulus), series_invert(pochhammer(1, 1, T, modulus))
    )


def smex_series(T: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """sum sigma mex-bar(n) q^n = (-q;q)_inf^3."""
    d = neg_pochhammer(1, 1, T, modulus)
    return series_mul(series_mul(d, d), d)


def mex_derivative_series(T: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """sigma mex-bar from the z-derivative of the bivariate mex series.

    d/dz at z=1 of sum_m z^m q^C(m,2) (1 - q^m), times the overpartition
    generating function.  Shares nothing with ``smex_series`` beyond the
    basic products.
    """
    cs = [0] * (T + 1)
    m = 1
    while m * (m - 1) // 2 <= T:
        e = m * (m - 1) // 2
        cs[e] += m
        if e + m <= T:
            cs[e + m] -= m
        m += 1
    return series_mul(pbar_series(T, modulus), TruncatedSeries(tuple(cs), modulus))


def srmex_series(r: int, T: int, modulus: Optional[int] = None) -> SmexTable:
    """(-q;q)(q^2r;q^2r) / ((q;q)(q^r;q^2r)) expanded to order T."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    num = series_mul(neg_pochhammer(1, 1, T, modulus), pochhammer(2 * r, 2 * r, T, modulus))
    den = series_mul(pochhammer(1, 1, T, modulus), pochhammer(r, 2 * r, T, modulus))
    s = series_mul(num, series_invert(den))
    return SmexTable(r=r, values=s.coeffs, route="product", modulus=modulus)


def srmex_via_convolution(r: int, T: int, modulus: Optional[int] = None) -> SmexTable:
    """values[n] = sum over k with r*T_k <= n of pbar(n - r*T_k)."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    pbar = pbar_series(T, modulus).coeffs
    shifts = []
    k = 0
    while r * k * (k + 1) // 2 <= T:
        shifts.append(r * k * (k + 1) // 2)
        k += 1
    values = []
    for n in range(T + 1):
        total = 0
        for s in shifts:
            if s > n:
                break
            total += pbar[n - s]
        values.append(total if modulus is None else total % modulus)
    return SmexTable(r=r, values=tuple(values), route="convolution", modulus=modulus)


def is_triangular(n: int) -> Optional[int]:
    """Return j >= 1 with n = j(j+1)/2, or None (0 is not counted)."""
    if n < 1:
        return None
    s = math.isqrt(8 * n + 1)
    if s * s != 8 * n + 1:
        return None
    return (s - 1) // 2


def parity_predict(n: int) -> int:
    """Predicted sigma mex-bar(n) mod 2; n = 0 is reported as even."""
    return 1 if is_triangular(n) is not None else 0


def asym_estimate(n: int, r: int, table: Optional[SmexTable] = None) -> AsymptoticPoint:
    """Compare the exact value with e^(pi sqrt n) / (8 r n^(3/4)).

    The estimate is kept as an mpmath float so it never overflows; the
    ratio is computed in log space from the exact integer.
    """
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if table is None:
        table = srmex_series(r, n)
    if table.r != r:
        raise ValueError(f"table is for r={table.r}, not r={r}")
    if table.modulus is not None:
        raise ValueError("asymptotics need an exact (unreduced) table")
    if n > table.trunc_order:
        raise ExactValueMissing(f"table for r={table.r} stops at n={table.trunc_order}")
    exact = table.values[n]
    with mpmath.workprec(96):
        log_est = mpmath.pi * mpmath.sqrt(n) - mpmath.log(8 * r) - mpmath.mpf(3) / 4 * mpmath.log(n)
        estimate = mpmath.exp(log_est)
        ratio = float(mpmath.exp(_log_int(exact) - log_est))
    return AsymptoticPoint(n=n, r=r, exact=exact, estimate=+estimate, ratio=ratio)


def _log_int(x: int):
    # split off the bit length so huge integers keep full precision
    shift = max(x.bit_length() - 120, 0)
    return mpmath.log(x >> shift) + shift * mpmath.log(2)
