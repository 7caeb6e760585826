"""Tests for the exhaustive search over feasible matchings."""

import dataclasses
import math
import os
from unittest.mock import patch

import pytest

from approx_stable._config import OracleLimitError
from approx_stable._instances import (
    gen_coverage_market,
    gen_crossing_market,
    gen_lower_bound_market,
    gen_matroid_lower_bound,
    knapsack_lower_bound,
)
from approx_stable._stability import (
    alpha_stability_check,
    assignment_space,
    exists_stable_bruteforce,
    min_alpha,
)


@pytest.mark.parametrize("rendering", ["explicit", "matroid_pair", "knapsack"])
def test_crossing_market_has_no_stable_matching_below_two(rendering: str) -> None:
    """Verifies nonexistence at 1.99 and a witness at exactly 2."""
    market = gen_crossing_market(rendering)  # type: ignore[arg-type]
    below = exists_stable_bruteforce(market, 1.99)
    assert below.witness is None
    assert below.best_alpha == 2.0
    at_two = exists_stable_bruteforce(market, 2.0)
    assert at_two.witness is not None
    assert alpha_stability_check(market, at_two.witness, 2.0).stable


def test_coverage_market_threshold() -> None:
    """Verifies nonexistence at 1.28 and best alpha (1 + sqrt 17) / 4."""
    market = gen_coverage_market()
    result = exists_stable_bruteforce(market, 1.28)
    assert result.witness is None
    assert result.best_alpha == pytest.approx((1 + math.sqrt(17)) / 4, abs=1e-6)
    assert min_alpha(market, result.best_matching) == result.best_alpha


def test_witness_comes_first_in_enumeration_order() -> None:
    """Verifies that every feasible matching is stable at a huge alpha."""
    market = gen_coverage_market()
    result = exists_stable_bruteforce(market, 1e9)
    assert result.witness is not None
    assert result.feasible_count > 1


@pytest.mark.parametrize("k", [2, 3])
def test_matroid_lower_bound(k: int) -> None:
    """Verifies that no (k - 0.1)-stable matching exists."""
    market = gen_matroid_lower_bound(k)
    assert market.n_doctors == 2 * k
    assert market.n_hospitals == 2 * k - 1
    result = exists_stable_bruteforce(market, k - 0.1)
    assert result.witness is None


def test_knapsack_lower_bound() -> None:
    """Verifies that the seven-doctor knapsack market has no 1.667-stable matching."""
    construction = knapsack_lower_bound(rho=1, epsilon=0.3)
    assert construction.m == 2
    spec = dataclasses.replace(construction.spec, alpha=1.667)
    market = gen_lower_bound_market(spec)
    assert market.n_doctors == 7
    result = exists_stable_bruteforce(market, 1.667)
    assert result.witness is None


@patch.dict(os.environ, {"APPROX_STABLE_ORACLE_LIMIT": "10"})
def test_assignment_space_limit() -> None:
    """Verifies that the enumeration cap is enforced up front."""
    market = gen_crossing_market()
    assert assignment_space(market) == 81
    with pytest.raises(
        OracleLimitError,
        match="stability: assignment space of 81 exceeds the exhaustive limit of 10",
    ):
        exists_stable_bruteforce(market, 2.0)


def test_alpha_below_one_rejected() -> None:
    """Verifies the alpha domain."""
    with pytest.raises(ValueError, match="alpha must be >= 1"):
        exists_stable_bruteforce(gen_crossing_market(), 0.9)
