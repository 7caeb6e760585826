"""Approx Stable - approximately stable matching under hospital constraints."""

from .main import (
    ALGORITHMS,
    BENCH_CELLS,
    Additive,
    BenchCell,
    BenchRow,
    BlockingCoalition,
    BruteForceResult,
    Capacity,
    Cardinality,
    ContractViolationError,
    Explicit,
    GdaTrace,
    IndependenceSystem,
    Intersection,
    KMatroidGreedy,
    Knapsack,
    KnapsackGreedy,
    KnapsackLowerBound,
    LowerBoundSpec,
    Market,
    Matching,
    OfflineExact,
    OnlineAlgorithm,
    OracleLimitError,
    OracleLimits,
    PackingInstance,
    PackingSolution,
    PartitionMatroid,
    RandomMarketParams,
    Restriction,
    StabilityReport,
    TieBreak,
    Utility,
    WeightedCoverage,
    alpha_stability_check,
    approximation_ratio,
    blocking_coalitions,
    certified_alpha,
    check_matching,
    claimed_ratio,
    cli_main,
    current_limits,
    exists_stable_bruteforce,
    gda_alpha_guarantee,
    gen_budget,
    gen_coverage_market,
    gen_crossing_market,
    gen_knapsack_lower_bound,
    gen_lower_bound_market,
    gen_matroid_lower_bound,
    gen_overlapping_types,
    gen_random,
    gen_refugee,
    gen_typed_quotas,
    is_feasible,
    is_independent,
    knapsack_lower_bound,
    make_algorithm,
    market_from_json,
    market_to_json,
    matching_from_json,
    matching_to_json,
    matroid_lower_bound_spec,
    min_alpha,
    prefix_ratios,
    replay,
    restrict,
    run_bench,
    run_gda,
    single_hospital_market,
    solve_exact,
    validate_market,
    verify_independence_axioms,
    verify_lower_bound_inequality,
    verify_matroid_exchange,
    write_csv,
)

__all__ = [
    "ALGORITHMS",
    "BENCH_CELLS",
    "Additive",
    "BenchCell",
    "BenchRow",
    "BlockingCoalition",
    "BruteForceResult",
    "Capacity",
    "Cardinality",
    "ContractViolationError",
    "Explicit",
    "GdaTrace",
    "IndependenceSystem",
    "Intersection",
    "KMatroidGreedy",
    "Knapsack",
    "KnapsackGreedy",
    "KnapsackLowerBound",
    "LowerBoundSpec",
    "Market",
    "Matching",
    "OfflineExact",
    "OnlineAlgorithm",
    "OracleLimitError",
    "OracleLimits",
    "PackingInstance",
    "PackingSolution",
    "PartitionMatroid",
    "RandomMarketParams",
    "Restriction",
    "StabilityReport",
    "TieBreak",
    "Utility",
    "WeightedCoverage",
    "alpha_stability_check",
    "approximation_ratio",
    "blocking_coalitions",
    "certified_alpha",
    "check_matching",
    "claimed_ratio",
    "cli_main",
    "current_limits",
    "exists_stable_bruteforce",
    "gda_alpha_guarantee",
    "gen_budget",
    "gen_coverage_market",
    "gen_crossing_market",
    "gen_knapsack_lower_bound",
    "gen_lower_bound_market",
    "gen_matroid_lower_bound",
    "gen_overlapping_types",
    "gen_random",
    "gen_refugee",
    "gen_typed_quotas",
    "is_feasible",
    "is_independent",
    "knapsack_lower_bound",
    "make_algorithm",
    "market_from_json",
    "market_to_json",
    "matching_from_json",
    "matching_to_json",
    "matroid_lower_bound_spec",
    "min_alpha",
    "prefix_ratios",
    "replay",
    "restrict",
    "run_bench",
    "run_gda",
    "single_hospital_market",
    "solve_exact",
    "validate_market",
    "verify_independence_axioms",
    "verify_lower_bound_inequality",
    "verify_matroid_exchange",
    "write_csv",
]
