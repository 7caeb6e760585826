"""Tests for the alpha-stability checker."""

import dataclasses
import math

import pytest

from approx_stable._config import TOLERANCE
from approx_stable._constraint import Capacity, Explicit
from approx_stable._gda import run_gda
from approx_stable._instances import (
    CONSTRAINT_CLASSES,
    UTILITY_CLASSES,
    gen_coverage_market,
    gen_crossing_market,
    gen_random,
)
from approx_stable._market import Market, Matching, numbered
from approx_stable._packing import PackingInstance, approximation_ratio
from approx_stable._stability import (
    alpha_stability_check,
    blocking_coalitions,
    hospital_checks,
    min_alpha,
    single_hospital_market,
)
from approx_stable._utility import Additive, Cardinality

_GOLDEN = (1 + math.sqrt(17)) / 4


def _crossing_witness() -> Matching:
    # h1 holds {d1, d3}; d2 and d4 go to h2, which accepts {d2, d3} or {d1, d4}.
    return Matching.of([(0, 0), (2, 0), (1, 1)])


def test_stable_at_two_on_crossing_market() -> None:
    """Verifies a matching that is 2-stable but not 1.99-stable."""
    market = gen_crossing_market()
    mu = _crossing_witness()
    assert alpha_stability_check(market, mu, 2.0).stable
    report = alpha_stability_check(market, mu, 1.99)
    assert not report.stable
    assert report.blocking is not None
    assert report.blocking.coalition_value > 1.99 * report.blocking.current_value
    assert min_alpha(market, mu) == 2.0


def test_candidate_sets() -> None:
    """Verifies D_h: doctors weakly preferring h to their match."""
    market = gen_crossing_market()
    checks = hospital_checks(market, _crossing_witness())
    # d4 is unmatched and accepts both; d2 prefers h1 to h2.
    assert checks[0].candidates == frozenset({0, 1, 2, 3})
    assert checks[1].candidates == frozenset({1, 2, 3})
    assert checks[1].optimum_value == 2.0
    assert checks[1].current_value == 1.0


def test_coverage_market_threshold() -> None:
    """Verifies min_alpha of the best matching of the coverage market."""
    market = gen_coverage_market()
    mu = Matching.of([(0, 0), (3, 0), (2, 1)])
    assert min_alpha(market, mu) == pytest.approx(_GOLDEN, abs=1e-6)
    assert not alpha_stability_check(market, mu, 1.28).stable
    assert alpha_stability_check(market, mu, 1.29).stable


def test_empty_market_is_stable() -> None:
    """Verifies that 0/0 counts as ratio 1."""
    market = Market(
        doctors=("d",),
        hospitals=("h",),
        preferences=((0,),),
        utilities=(Additive((0.0,)),),
        constraints=(Capacity(1, 1),),
    )
    assert min_alpha(market, Matching()) == 1.0


def test_unmatched_with_positive_optimum_is_infinitely_unstable() -> None:
    """Verifies that positive/0 counts as ratio inf."""
    market = gen_crossing_market()
    assert math.isinf(min_alpha(market, Matching()))


def test_alpha_below_one_rejected() -> None:
    """Verifies the alpha domain."""
    with pytest.raises(ValueError, match="alpha must be >= 1"):
        alpha_stability_check(gen_crossing_market(), Matching(), 0.5)


def test_infeasible_matching_rejected() -> None:
    """Verifies that dependent assigned sets are refused."""
    with pytest.raises(ValueError, match="Matching is infeasible"):
        min_alpha(gen_crossing_market(), Matching.of([(0, 0), (1, 0)]))


def test_single_hospital_reduction() -> None:
    """Verifies that stability of S equals S approximating the packing."""
    system = Explicit(4, (0b0011, 0b1100, 0b0110))
    instance = PackingInstance.of(Additive((1.0, 2.0, 4.0, 3.0)), system, [0, 1, 2])
    market = single_hospital_market(instance)
    assert market.preferences == ((0,), (0,), (0,), ())
    for chosen in ([0, 1], [1, 2], [2], []):
        mu = Matching.of((d, 0) for d in chosen)
        assert min_alpha(market, mu) == approximation_ratio(instance, chosen)


def test_direct_enumeration_lists_coalitions() -> None:
    """Verifies blocking coalitions found without the reduction."""
    market = gen_crossing_market()
    coalitions = blocking_coalitions(market, _crossing_witness(), 1.5)
    assert {(c.hospital, c.coalition) for c in coalitions} == {
        (1, frozenset({1, 2})),
    }
    assert blocking_coalitions(market, _crossing_witness(), 2.0) == []


@pytest.mark.parametrize("utility_class", UTILITY_CLASSES)
@pytest.mark.parametrize("constraint_class", CONSTRAINT_CLASSES)
def test_reduction_agrees_with_direct_enumeration(
    utility_class: str, constraint_class: str
) -> None:
    """Verifies the packing reduction against coalition enumeration."""
    for seed in range(20):
        market = gen_random(seed, 3 + seed % 6, 3, utility_class, constraint_class)
        matchings = [Matching(), run_gda(market, "greedy_matroid")[0]]
        for mu in matchings:
            for alpha in (1.0, 1.5, 2.0):
                report = alpha_stability_check(market, mu, alpha)
                direct = blocking_coalitions(market, mu, alpha)
                assert report.stable == (not direct), (seed, alpha)


def test_blocking_requires_acceptability() -> None:
    """Verifies that doctors who reject a hospital never join its coalition."""
    market = Market(
        doctors=numbered("d", 2),
        hospitals=numbered("h", 2),
        preferences=((0,), (1,)),
        utilities=(Cardinality(2), Cardinality(2)),
        constraints=(Capacity(2, 2), Capacity(2, 2)),
    )
    mu = Matching.of([(0, 0), (1, 1)])
    checks = hospital_checks(market, mu)
    assert checks[0].candidates == frozenset({0})
    assert alpha_stability_check(market, mu, 1.0).stable


def _seeded_outcomes() -> list[tuple[Market, Matching]]:
    outcomes = []
    for seed in range(30):
        for constraint_class, algorithm in (
            ("knapsack", "greedy_knapsack"),
            ("matroid", "greedy_matroid"),
        ):
            market = gen_random(seed, 3 + seed % 5, 2, "additive", constraint_class)
            outcomes.append((market, run_gda(market, algorithm)[0]))
            outcomes.append((market, Matching()))
    return outcomes


@pytest.mark.parametrize("factor", [1000.0, 0.25])
def test_min_alpha_ignores_utility_scale(factor: float) -> None:
    """Verifies that scaling one hospital's additive utility keeps min_alpha."""
    for market, mu in _seeded_outcomes():
        for h, utility in enumerate(market.utilities):
            assert isinstance(utility, Additive)
            scaled = Additive(tuple(v * factor for v in utility.values))
            utilities = (*market.utilities[:h], scaled, *market.utilities[h + 1 :])
            rescaled = dataclasses.replace(market, utilities=utilities)
            assert min_alpha(rescaled, mu) == pytest.approx(
                min_alpha(market, mu), rel=1e-12
            )


def test_min_alpha_is_attained() -> None:
    """Verifies stability at min_alpha and blocking just below it."""
    blocked = 0
    for market, mu in _seeded_outcomes():
        alpha = min_alpha(market, mu)
        if math.isinf(alpha):
            continue
        assert alpha_stability_check(market, mu, alpha).stable
        if alpha > 1:
            below = alpha * (1 - 10 * TOLERANCE)
            assert not alpha_stability_check(market, mu, below).stable
            blocked += 1
    assert blocked > 0


def test_stability_is_monotone_in_alpha() -> None:
    """Verifies that stability at alpha implies stability at every larger alpha."""
    alphas = (1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0)
    for market, mu in _seeded_outcomes():
        verdicts = [alpha_stability_check(market, mu, a).stable for a in alphas]
        first = verdicts.index(True) if True in verdicts else len(verdicts)
        assert all(verdicts[first:]), verdicts
