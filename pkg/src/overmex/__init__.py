"""Exact computations for the minimal excludant of overpartitions."""
from .series import (
    FracExpSeries,
    FractionalLeadingExponent,
    NonUnitConstantTerm,
    TruncatedSeries,
    eta_expansion,
    jacobi_cube,
    neg_pochhammer,
    pochhammer,
    series_add,
    series_invert,
    series_mul,
    series_pow,
    triangular_gf,
)
from .oracle import (
    CapExceeded,
    Overpartition,
    count_3colored_distinct,
    enumerate_overpartitions,
    least_r_gap,
    mex_over,
    sigma_r_mex_bruteforce,
    staircase_insert,
)
from .analytics import (
    SmexTable,
    asym_estimate,
    is_triangular,
    parity_predict,
    pbar_series,
    smex_series,
    srmex_series,
    srmex_via_convolution,
)
from .eta import EtaQuotient, build_frk, cusp_orders, ghn_check, verify_congruence

__version__ = "0.1.0"
