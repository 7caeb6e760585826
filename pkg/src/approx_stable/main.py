"""Public API for approximately stable matching."""

from ._bench import BENCH_CELLS, BenchCell, BenchRow, run_bench, write_csv
from ._cli import main as cli_main
from ._config import OracleLimitError, OracleLimits, current_limits
from ._constraint import (
    Capacity,
    Explicit,
    IndependenceSystem,
    Intersection,
    Knapsack,
    PartitionMatroid,
    Restriction,
    is_independent,
    restrict,
    verify_independence_axioms,
    verify_matroid_exchange,
)
from ._gda import GdaTrace, TieBreak, certified_alpha, gda_alpha_guarantee, run_gda
from ._instances import (
    KnapsackLowerBound,
    LowerBoundSpec,
    RandomMarketParams,
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
    knapsack_lower_bound,
    matroid_lower_bound_spec,
    verify_lower_bound_inequality,
)
from ._market import Market, Matching, check_matching, is_feasible, validate_market
from ._online import (
    ALGORITHMS,
    ContractViolationError,
    KMatroidGreedy,
    KnapsackGreedy,
    OfflineExact,
    OnlineAlgorithm,
    claimed_ratio,
    make_algorithm,
    prefix_ratios,
    replay,
)
from ._packing import (
    PackingInstance,
    PackingSolution,
    approximation_ratio,
    solve_exact,
)
from ._serialization import (
    market_from_json,
    market_to_json,
    matching_from_json,
    matching_to_json,
)
from ._stability import (
    BlockingCoalition,
    BruteForceResult,
    StabilityReport,
    alpha_stability_check,
    blocking_coalitions,
    exists_stable_bruteforce,
    min_alpha,
    single_hospital_market,
)
from ._utility import Additive, Cardinality, Utility, WeightedCoverage

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
