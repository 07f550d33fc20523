import pytest

from overmex.oracle import enumerate_overpartitions, least_r_gap

ORACLE_MAX_N = 30
ORACLE_RS = (1, 2, 3, 4)


@pytest.fixture(scope="session")
def oracle_totals():
    """(n, r) -> brute-force sum of least r-gaps, one enumeration per n."""
    out = {}
    for n in range(ORACLE_MAX_N + 1):
        sums = dict.fromkeys(ORACLE_RS, 0)
        count = 0
        for pi in enumerate_overpartitions(n):
            count += 1
            for r in ORACLE_RS:
                sums[r] += least_r_gap(pi, r)
        for r in ORACLE_RS:
            out[n, r] = sums[r]
        out[n, "count"] = count
    return out
