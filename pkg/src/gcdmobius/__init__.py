"""Exact summatory functions of the Mobius function over gcds.

The package computes S(x) = sum over mn <= x of g(gcd(m, n)) for g = mu and
g = mu^2, exactly in integers, together with the analytic main terms, error
terms, and their global statistics (scans, mean squares, Dirichlet-series
checks). Everything numeric is cross-checked against an independent route;
disagreements raise InvariantError instead of returning a value.
"""

from .analysis import (
    ErrorScan,
    GridSpec,
    MeanSquareResult,
    ScanPoint,
    dirichlet_series_check,
    fit_exponent,
    mean_square,
    scan_errors,
    write_meansquare_csv,
    write_scan_csv,
)
from .constants import (
    ConstantBundle,
    build_bundle,
    compute_gamma,
    compute_zeta,
    compute_zeta_prime,
    get_default_bundle,
)
from .divisor import (
    DivisorMethod,
    DivisorSumResult,
    delta,
    delta_integral,
    divisor_sum_hyperbola,
    divisor_sum_naive,
    divisor_summary,
)
from .errors import ConfigError, InvariantError, RangeError
from .sieve import (
    FunctionTable,
    SieveSet,
    TableKind,
    build_sieve_set,
    dirichlet_convolve,
    load_table,
    mu_star_mu_closed_form,
    save_table,
    sieve_mobius,
    sieve_mu_squared,
    sieve_tau_k,
)
from .summatory import (
    GKind,
    Method,
    PartialSumPair,
    SummatoryResult,
    brute_summatory,
    brute_summatory_prefix,
    delta_weighted_sum,
    fast_abs_mu_summatory,
    fast_mu_summatory,
    mu_error,
    mu_gcd_term_table,
    mu_main_term,
    mu_mu_partial_sums,
    tuple_gcd_term,
    tuple_gcd_term_identity,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "ConfigError", "RangeError", "InvariantError",
    "TableKind", "FunctionTable", "SieveSet",
    "sieve_mobius", "sieve_mu_squared", "sieve_tau_k",
    "dirichlet_convolve", "mu_star_mu_closed_form", "build_sieve_set",
    "save_table", "load_table",
    "DivisorMethod", "DivisorSumResult",
    "divisor_sum_naive", "divisor_sum_hyperbola",
    "delta", "delta_integral", "divisor_summary",
    "ConstantBundle", "compute_zeta", "compute_zeta_prime", "compute_gamma",
    "build_bundle", "get_default_bundle",
    "GKind", "Method", "SummatoryResult", "PartialSumPair",
    "tuple_gcd_term", "tuple_gcd_term_identity", "mu_gcd_term_table",
    "brute_summatory", "brute_summatory_prefix",
    "fast_mu_summatory", "fast_abs_mu_summatory",
    "mu_main_term", "mu_error", "mu_mu_partial_sums", "delta_weighted_sum",
    "GridSpec", "ScanPoint", "ErrorScan", "MeanSquareResult",
    "scan_errors", "mean_square", "dirichlet_series_check", "fit_exponent",
    "write_scan_csv", "write_meansquare_csv",
]
