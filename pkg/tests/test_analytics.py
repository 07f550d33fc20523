import math

import mpmath
import pytest

from overmex.analytics import (
    SmexTable,
    ExactValueMissing,
    asym_estimate,
    is_triangular,
    mex_derivative_series,
    parity_predict,
    pbar_series,
    smex_series,
    srmex_series,
    srmex_via_convolution,
)
from overmex.oracle import count_3colored_distinct
from overmex.series import neg_pochhammer, series_pow


def test_pbar_examples():
    p = pbar_series(5)
    assert p[0] == 1 and p[1] == 2 and p[2] == 4 and p[3] == 8


def test_smex_examples():
    s = smex_series(50)
    assert s[0] == 1 and s[3] == 13
    assert s.coeffs == srmex_series(1, 50).values


def test_srmex_examples():
    for r in (1, 2, 3, 7):
        assert srmex_series(r, 10).values[0] == 1
    assert srmex_series(1, 5)[3] == 13
    assert srmex_series(2, 5)[3] == 10


def test_convolution_examples():
    assert srmex_via_convolution(1, 3)[3] == 8 + 4 + 1
    assert srmex_via_convolution(5, 0).values == (1,)


def test_routes_agree():
    for r in (1, 2, 3, 4, 6):
        assert srmex_series(r, 500).values == srmex_via_convolution(r, 500).values, r


def test_routes_agree_reduced():
    for r in (2, 3):
        assert srmex_series(r, 2000, 8).values == srmex_via_convolution(r, 2000, 8).values


def test_mex_series_is_distinct_cube():
    T = 500
    cube = series_pow(neg_pochhammer(1, 1, T), 3)
    assert smex_series(T) == cube
    assert mex_derivative_series(T) == cube
    for n in range(31):
        assert count_3colored_distinct(n) == cube[n]


def test_is_triangular():
    assert is_triangular(10) == 4
    assert is_triangular(0) is None
    assert is_triangular(7) is None
    assert [n for n in range(30) if is_triangular(n)] == [1, 3, 6, 10, 15, 21, 28]


def test_parity_examples():
    s = smex_series(10)
    assert parity_predict(3) == 1 and s[3] % 2 == 1
    assert parity_predict(4) == 0 and s[4] % 2 == 0
    assert parity_predict(10) == 1 and s[10] % 2 == 1
    assert parity_predict(0) == 0 and s[0] == 1


def test_parity_theorem():
    T = 10000
    s = smex_series(T, modulus=2)
    assert all(s[n] == parity_predict(n) for n in range(1, T + 1))
    # exact and reduced agree on a shorter range
    assert smex_series(800).reduce(2) == s.truncate(800)


def test_tables_are_monotone_and_dominate_pbar():
    T = 400
    pbar = pbar_series(T)
    for r in (1, 2, 3, 5):
        v = srmex_series(r, T).values
        assert all(v[n + 1] >= v[n] for n in range(T))
        assert all(v[n] >= pbar[n] for n in range(T + 1))


def test_asym_examples():
    p = asym_estimate(1, 1)
    assert float(p.estimate) == pytest.approx(math.exp(math.pi) / 8, rel=1e-12)
    assert float(p.estimate) == pytest.approx(2.89259, abs=1e-5)
    for n in (1, 17, 300):
        assert asym_estimate(n, 2).estimate * 2 == pytest.approx(asym_estimate(n, 1).estimate, rel=1e-20)


def test_asym_no_overflow():
    # e^(pi sqrt(10^6)) is far outside double range; plant a value of that size
    n = 10 ** 6
    planted = 3 ** 2800
    table = SmexTable(r=1, values=(0,) * n + (planted,), route="product")
    p = asym_estimate(n, 1, table)
    log_est = math.pi * 1000 - math.log(8) - 0.75 * math.log(n)
    assert float(mpmath.log(p.estimate)) == pytest.approx(log_est, rel=1e-14)
    assert p.ratio == pytest.approx(math.exp(2800 * math.log(3) - log_est), rel=1e-9)


def test_asym_table_too_short():
    with pytest.raises(ExactValueMissing):
        asym_estimate(20, 1, srmex_series(1, 10))


def test_asym_ratio_trend():
    tables = {r: srmex_series(r, 4000) for r in (1, 2)}
    for r, t in tables.items():
        devs = [abs(asym_estimate(n, r, t).ratio - 1) for n in (250, 1000, 4000)]
        assert devs[0] > devs[1] > devs[2]
    assert abs(asym_estimate(4000, 1, tables[1]).ratio - 1) < abs(asym_estimate(1000, 1, tables[1]).ratio - 1)


def test_asym_ratio_tends_to_sqrt_r():
    # for r > 1 the exact values track e^(pi sqrt n) / (8 sqrt(r) n^(3/4))
    for r in (2, 3, 4):
        t = srmex_series(r, 4000)
        ratios = [asym_estimate(n, r, t).ratio / math.sqrt(r) for n in (250, 1000, 4000)]
        assert all(abs(x - 1) < 0.05 for x in ratios)
        assert abs(ratios[2] - 1) < abs(ratios[0] - 1)
