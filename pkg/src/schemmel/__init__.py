"""Schemmel totient functions, their iterate dynamics, and verification tools."""

from .arith import (
    Factorization,
    ResourceLimitError,
    SieveTable,
    big_omega,
    build_spf_sieve,
    factorize,
    is_prime,
    smallest_prime_factor,
    valuation,
)
from .constructions import (
    AbundantWitness,
    AlphaCheck,
    CrtSystem,
    FolkBoundReport,
    RemarkChain,
    SearchExhausted,
    UpperBoundReport,
    alpha_checks,
    check_folk_bound_counterexample,
    check_r2_lower_conjecture,
    check_r2_upper_bound,
    find_abundant_prime,
    solve_crt_system,
    verify_abundant_witness,
    verify_m4_remark,
)
from .dynamics import (
    Classification,
    DynamicsTable,
    ScanReport,
    Trajectory,
    build_tables,
    classify,
    iterate_sum,
    iteration_count,
    scan_classify,
    terminal,
    trajectory,
)
from .sets import (
    AgreementReport,
    SetTables,
    build_Q,
    build_S,
    build_T,
    build_set_tables,
    check_S_equals_T,
    in_S,
)
from .totient import (
    schemmel_from_factorization,
    schemmel_totient,
    schemmel_totient_definition,
)

__version__ = "0.1.0"

__all__ = [
    "AbundantWitness",
    "AgreementReport",
    "AlphaCheck",
    "Classification",
    "CrtSystem",
    "DynamicsTable",
    "Factorization",
    "FolkBoundReport",
    "RemarkChain",
    "ResourceLimitError",
    "ScanReport",
    "SearchExhausted",
    "SetTables",
    "SieveTable",
    "Trajectory",
    "UpperBoundReport",
    "alpha_checks",
    "big_omega",
    "build_Q",
    "build_S",
    "build_T",
    "build_set_tables",
    "build_spf_sieve",
    "build_tables",
    "check_S_equals_T",
    "check_folk_bound_counterexample",
    "check_r2_lower_conjecture",
    "check_r2_upper_bound",
    "classify",
    "factorize",
    "find_abundant_prime",
    "in_S",
    "is_prime",
    "iterate_sum",
    "iteration_count",
    "scan_classify",
    "schemmel_from_factorization",
    "schemmel_totient",
    "schemmel_totient_definition",
    "smallest_prime_factor",
    "solve_crt_system",
    "terminal",
    "trajectory",
    "valuation",
    "verify_abundant_witness",
    "verify_m4_remark",
]
