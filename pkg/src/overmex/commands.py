"""Implementations behind the CLI subcommands.

Each ``cmd_*`` function returns plain data; rendering lives in ``cli``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from typing import List, Optional, Sequence

import mpmath

from . import analytics, eta, oracle
from .store import CacheKey, TableCache

SUITES = ("d3", "tk", "parity", "oracle", "eta-congruence")


@dataclass(frozen=True)
class VerifyReport:
    suite: str
    params: dict
    passed: bool
    checked: int
    failure: Optional[str] = None

    def lines(self) -> List[str]:
        args = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        status = "PASS" if self.passed else "FAIL"
        out = [f"{status} {self.suite} ({args}): {self.checked} checks"]
        if self.failure:
            out.append(f"  first mismatch: {self.failure}")
        return out


@dataclass(frozen=True)
class DensityReport:
    r: int
    k: int
    X: int
    nonzero_count: int
    triangular_count: Optional[int] = None
    warning: Optional[str] = None

    @property
    def density(self) -> Decimal:
        exact = Decimal(self.X + 1 - self.nonzero_count) / Decimal(self.X + 1)
        return exact.quantize(Decimal("1e-12"))

    HEADER = ("r", "k", "x", "range", "nonzero_count", "density", "triangular_count", "warning")

    def row(self):
        return (self.r, self.k, self.X, f"0..{self.X}", self.nonzero_count, self.density,
                "" if self.triangular_count is None else self.triangular_count,
                self.warning or "")


@dataclass(frozen=True)
class EtaReport:
    form: eta.FrkForm
    ghn: tuple
    cusps: eta.CuspReport
    u: int

    def lines(self) -> List[str]:
        f = self.form
        sfac = " * ".join(f"{p}^{a}" for p, a in f.character_s)
        out = [
            f"f_(r={f.r},k={f.k}) with r = 2^{f.m} * 3^{f.n}",
            "exponents: " + ", ".join(f"eta({d}z)^{e}" for d, e in f.quotient.exponents.items()),
            f"level N = {f.level} (u = {self.u})",
            f"weight = {f.weight}",
            f"GHN (4) sum delta*r_delta = 0 mod 24: {self.ghn[0]}",
            f"GHN (5) sum (N/delta)*r_delta = 0 mod 24: {self.ghn[1]}",
            f"character: kronecker((-1)^{f.weight} * s, d), s = {sfac}",
            "cusp orders (d: order):",
        ]
        out += [f"  {d}: {order}" for d, order in self.cusps.entries]
        out.append(f"holomorphic: {self.cusps.holomorphic}")
        return out


def _table(r: int, T: int, cache: Optional[TableCache], modulus: Optional[int] = None):
    def compute():
        return analytics.srmex_series(r, T, modulus).values

    if cache is None:
        return compute()
    return cache.get(CacheKey(r, T, modulus), compute)


def cmd_table(r: int, max_n: int, cache: Optional[TableCache] = None):
    """Rows (n, sigma_r mex-bar(n)) for n = 0 .. max_n."""
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    if max_n < 0:
        raise ValueError(f"max_n must be nonnegative, got {max_n}")
    return list(enumerate(_table(r, max_n, cache)))


def _first_diff(a: Sequence[int], b: Sequence[int], start: int = 0):
    for n in range(start, min(len(a), len(b))):
        if a[n] != b[n]:
            return n
    return None


def _verify_d3(max_n: int, oracle_max: int, **_):
    cube = analytics.smex_series(max_n).coeffs
    derived = analytics.mex_derivative_series(max_n).coeffs
    n = _first_diff(cube, derived)
    if n is not None:
        return max_n + 1, f"n={n}: (-q;q)^3 gives {cube[n]}, mex series gives {derived[n]}"
    checked = max_n + 1
    for n in range(min(oracle_max, max_n) + 1):
        d3 = oracle.count_3colored_distinct(n)
        brute = oracle.sigma_r_mex_bruteforce(n, 1).total
        checked += 2
        if not (d3 == brute == cube[n]):
            return checked, f"n={n}: D3={d3}, brute force={brute}, series={cube[n]}"
    return checked, None


def _verify_tk(max_n: int, r: int, **_):
    prod = analytics.srmex_series(r, max_n).values
    conv = analytics.srmex_via_convolution(r, max_n).values
    n = _first_diff(prod, conv)
    if n is not None:
        return max_n + 1, f"n={n}: product {prod[n]}, convolution {conv[n]}"
    return max_n + 1, None


def _verify_parity(max_n: int, **_):
    s = analytics.smex_series(max_n, modulus=2).coeffs
    for n in range(1, max_n + 1):
        if s[n] != analytics.parity_predict(n):
            return n, f"n={n}: parity {s[n]}, predicted {analytics.parity_predict(n)}"
    return max_n, None


def _verify_oracle(max_n: int, r: int, cap: int = oracle.DEFAULT_CAP, **_):
    prod = analytics.srmex_series(r, max_n).values
    for n in range(max_n + 1):
        brute = oracle.sigma_r_mex_bruteforce(n, r, cap).total
        if brute != prod[n]:
            return n + 1, f"n={n}: brute force {brute}, series {prod[n]}"
    return max_n + 1, None


def _verify_eta(max_n: int, r: int, k: int, **_):
    try:
        rep = eta.verify_congruence(r, k, max_n)
    except eta.CongruenceMismatch as exc:
        return exc.exponent, f"exponent {exc.exponent}: {exc}"
    return rep.on_grid_checked + rep.off_grid_checked, None


_SUITE_FUNCS = {
    "d3": _verify_d3,
    "tk": _verify_tk,
    "parity": _verify_parity,
    "oracle": _verify_oracle,
    "eta-congruence": _verify_eta,
}


def cmd_verify(suite: str, max_n: int, r: int = 1, k: int = 1, oracle_max: int = 20,
               cap: int = oracle.DEFAULT_CAP) -> VerifyReport:
    if suite not in _SUITE_FUNCS:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    params = {"max_n": max_n}
    if suite in ("tk", "oracle", "eta-congruence"):
        params["r"] = r
    if suite == "eta-congruence":
        params["k"] = k
    if suite == "oracle" and max_n > cap:
        raise oracle.CapExceeded(f"n={max_n} exceeds the enumeration cap {cap}")
    checked, failure = _SUITE_FUNCS[suite](max_n=max_n, r=r, k=k, oracle_max=oracle_max, cap=cap)
    return VerifyReport(suite, params, failure is None, checked, failure)


def triangular_count(X: int) -> int:
    """Number of j >= 1 with j(j+1)/2 <= X."""
    return (math.isqrt(8 * X + 1) - 1) // 2


def cmd_density(r: int, k: int, X: int, cache: Optional[TableCache] = None) -> DensityReport:
    """Count n in 0..X with sigma_r mex-bar(n) != 0 mod 2^k (reduced arithmetic)."""
    if k < 1 or X < 0:
        raise ValueError(f"need k >= 1 and X >= 0, got k={k}, X={X}")
    warning = None
    try:
        eta.factor_23(r)
    except eta.UnsupportedR as exc:
        warning = f"UnsupportedR: {exc}"
    values = _table(r, X, cache, modulus=2 ** k)
    nonzero = sum(1 for v in values if v)
    tri = triangular_count(X) if (r, k) == (1, 1) else None
    return DensityReport(r=r, k=k, X=X, nonzero_count=nonzero, triangular_count=tri,
                         warning=warning)


def cmd_eta(r: int, k: int) -> EtaReport:
    form = eta.build_frk(r, k)
    u, N = eta.min_level_u(r, k)
    if N != form.level:
        raise AssertionError(f"level mismatch: 48ru = {N}, closed form {form.level}")
    return EtaReport(form=form, ghn=eta.ghn_check(form.quotient),
                     cusps=eta.cusp_orders(form.quotient), u=u)


ASYM_HEADER = ("n", "exact", "estimate", "ratio")


def cmd_asym(r: int, points: Sequence[int], cache: Optional[TableCache] = None,
             max_n: int = 100_000):
    if not points:
        return []
    top = max(points)
    if top > max_n:
        raise oracle.CapExceeded(f"point {top} exceeds the truncation budget {max_n}")
    table = analytics.SmexTable(r=r, values=tuple(_table(r, top, cache)), route="product")
    rows = []
    for n in points:
        p = analytics.asym_estimate(n, r, table)
        rows.append((n, p.exact, mpmath.nstr(p.estimate, 15), f"{p.ratio:.12f}"))
    return rows
