"""Seeded end-to-end checks: deferred acceptance meets its certified factor."""

import pytest

from approx_stable._gda import certified_alpha, run_gda
from approx_stable._instances import RandomMarketParams, gen_random
from approx_stable._stability import alpha_stability_check

_TIE_BREAKS = ("fifo", "lifo", "seeded:11")
_SEEDS = range(500)


def _assert_certified(
    utility_class: str,
    constraint_class: str,
    algorithm: str,
    params: RandomMarketParams,
) -> None:
    for seed in _SEEDS:
        n, m = 3 + seed % 5, 1 + seed % 3
        market = gen_random(seed, n, m, utility_class, constraint_class, params)
        alpha = certified_alpha(market, algorithm)
        for tie_break in _TIE_BREAKS:
            matching, _ = run_gda(market, algorithm, tie_break, audit=True)
            report = alpha_stability_check(market, matching, alpha)
            assert report.stable, (seed, tie_break, report.blocking)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_matroid_greedy_is_k_stable(k: int) -> None:
    """Verifies k-stability on k-matroid intersections with cardinality."""
    _assert_certified(
        "cardinality", "matroid", "greedy_matroid", RandomMarketParams(k=k)
    )


@pytest.mark.parametrize("rho", [1, 2])
@pytest.mark.parametrize("utility_class", ["cardinality", "additive"])
def test_knapsack_greedy_meets_certified_factor(rho: int, utility_class: str) -> None:
    """Verifies rho- or rho/eps-stability on rho-dimensional knapsacks."""
    _assert_certified(
        utility_class, "knapsack", "greedy_knapsack", RandomMarketParams(rho=rho)
    )


def test_offline_exact_is_stable_on_single_matroids() -> None:
    """Verifies exact stability for additive utilities on one matroid."""
    _assert_certified(
        "additive", "matroid", "offline_exact", RandomMarketParams(k=1)
    )
